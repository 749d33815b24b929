from typing import Dict

short_docs: Dict[str, str] = {
    "compare": "Compare pure polyanalytic ensembles with Weyl-Heisenberg ensembles on disks (trace-norm distance)",
    "config": "Display docs for the environment variables and output files",
    "crossing": "Tabulate the two lowest radial eigenvalues at level 1 and locate the radius where they cross",
    "descriptors": "Display docs for the window and domain descriptors",
    "help": "Display this overview, or detailed help for a specified command",
    "intensity": "Tabulate the one-point intensity of a finite Weyl-Heisenberg ensemble and its L1 deviation from the domain",
    "kostlan": "Sample a pure polyanalytic ensemble and test the radii against independent radial laws",
    "sample": "Sample a finite Weyl-Heisenberg or pure polyanalytic ensemble and tabulate hole probabilities",
    "spectrum": "Compute the eigenvalues and eigenvectors of a time-frequency localization operator",
    "version": "Display the version and exit",
    "weyl": "Count eigenvalues close to 1 on disks of growing area (Weyl-type law)",
}

long_docs: Dict[str, str] = {
    "compare": """
        <b>Usage:</b><b>
           wh-ensembles compare [--r=<r>] [--N=<N,...>] [--area=<area>] [--check] [common options]</b>

        For each `N`, finds the `N` indices `j` with the largest radial eigenvalues of the Hermite window `h_r`
        on the disk of area `N` and reports the size of the symmetric difference with `{0, ..., N-1}`.
        This is the trace-norm distance between the Weyl-Heisenberg ensemble of `h_r` on that disk and the
        `r`-pure polyanalytic ensemble with `N` points.

        Writes `compare.csv` with columns `N,r,symdiff,sqrtN,ratio`.

        <b>Options:</b>
           <b>--r=<r></b>
              Polyanalytic level (default: 0).

           <b>--N=<N,...></b>
              Comma-separated numbers of points (default: 25,100,400).

           <b>--area=<area></b>
              Disk area to use instead of `N`; must round up to the single given `N`.
              At integer areas the cut falls on a multiple eigenvalue for `r = 1`, so non-integer areas show the generic case.

           <b>--check</b>
              Fail with exit code 4 unless the `r = 0` distances are 0 and the ratios stay within 1.5 times the first one
              (and never below `1.5/sqrt(N)` for the first `N`).
   """,
    "config": """
        Documentation about the environment variables that change the default behavior and about the output files.

        Note: `config` is not a command as such, just a help topic.

        <b>Environment variables:</b>
           `WH_ENSEMBLES_STRICT`
              Setting it to `true` turns every numerical warning into an error (exit code 3), same as `--strict`.

           `WH_ENSEMBLES_WORKERS`
              Default number of worker threads for sampling and intensity grids (default: 1).
              Results do not depend on the number of workers.

        <b>Output files:</b>
           Every table is a CSV file starting with `# key: value` comment lines that record the tool version,
           every setting of the run and the seed. Running the same command twice gives byte-identical files.
   """,
    "crossing": """
        <b>Usage:</b><b>
           wh-ensembles crossing [--grid=<points>] [common options]</b>

        Tabulates the radial eigenvalues `mu_0` and `mu_1` of the window `h_1` on disks of radius `R`,
        and locates the radius at which `mu_1` stops exceeding `mu_0`.

        Writes `crossing.csv` with columns `R,mu0,mu1`; the crossing radius is printed and recorded in the header.
   """,
    "descriptors": """
        Documentation about the window and domain descriptors accepted by `--window` and `--domain`.

        Note: `descriptors` is not a command as such, just a help topic.

        <b>Windows:</b>
           `hermite:<r>`         the Hermite function `h_r`
           `file:<path>`         Hermite coefficients, one `r real imag` line per coefficient, `#` starts a comment;
                                 the window is normalized and the factor reported with `--debug`

        <b>Domains:</b>
           `disk:<R>`            the disk of radius `R` centered at the origin
           `annulus:<r0>,<R>`    the annulus between radii `r0` and `R`
           `rect:<a>,<b>,<c>,<d>`
                                 the rectangle `[a, b] x [c, d]` in the `(x, xi)` plane
           `poly:@<path>`        a simple polygon, one `x xi` vertex per line
           `poly:<x>,<xi>;...`   a simple polygon given inline
           `scaled:<m>:<domain>` the domain dilated by `m`
   """,
    "help": """
        <b>Usage:</b><b>
           wh-ensembles help [<command>]</b>

        Prints a summary of this tool, or a detailed info on a command if defined.
   """,
    "intensity": """
        <b>Usage:</b><b>
           wh-ensembles intensity [--window=<window>] --domain=<domain> [--grid=<points>] [--svg] [--check] [common options]</b>

        Builds the finite Weyl-Heisenberg ensemble of the window on the domain, with as many points as the area
        rounded up, and evaluates its one-point intensity on a square grid covering the domain.
        The L1 distance between the intensity and the indicator of the domain is computed from the spectrum.

        Writes `intensity.csv` (`x,xi,rho`), `l1.csv` and, with `--svg`, `intensity.svg`.
        With `--scales`, also writes `scaling.csv` with the L1 distance on the dilated domains `m Omega`,
        rescaled by `1/m^2` (columns `m,l1_rescaled`).

        <b>Options:</b>
           <b>--grid=<points></b>
              Number of grid points per axis (default: 81).

           <b>--scales=<m,...></b>
              Comma-separated dilation factors for the scaling sweep.

           <b>--check</b>
              Also integrate the L1 distance directly; fail with exit code 4 unless both values agree within 1e-4
              relative, the intensity stays at most 1 on the grid
              and the rescaled distances of `--scales` decrease.
   """,
    "kostlan": """
        <b>Usage:</b><b>
           wh-ensembles kostlan [--r=<r>] [--N=<N>] [--samples=<count>] [--check] [common options]</b>

        Samples the `r`-pure polyanalytic ensemble with `N` points and compares the absolute values of the points
        with independent radii `Y_0, ..., Y_{N-1}` through counts in annuli of equal expected count.

        Writes `kostlan.csv` (`annulus_lo,annulus_hi,expected,observed,sigma,pass`) and `radii.csv` (draws of the independent radii).

        <b>Options:</b>
           <b>--r=<r></b>
              Polyanalytic level (default: 0).

           <b>--N=<N></b>
              Number of points (default: 5).

           <b>--samples=<count></b>
              Number of samples, at least 1000 (default: 1000).

           <b>--check</b>
              Fail with exit code 4 unless every annulus lies within 3 sigma.
   """,
    "sample": """
        <b>Usage:</b><b>
           wh-ensembles sample (--domain=<domain> [--window=<window>] | --r=<r> --N=<N>) [--samples=<count>] [--check] [common options]</b>

        Samples a finite Weyl-Heisenberg ensemble (with `--domain`) or the `r`-pure polyanalytic ensemble with `N` points.
        Sample `i` is drawn from its own random stream derived from the seed and `i`.

        Writes `samples.csv` (`sample_id,x,xi`) and, for polyanalytic ensembles, `holes.csv` comparing
        the empirical hole frequency of centered disks with the product of radial tail probabilities
        (columns `radius,predicted,observed,sigma,pass`, at the radii where the prediction is 0.8, 0.5 and 0.2).

        <b>Options:</b>
           <b>--samples=<count></b>
              Number of samples (default: 1000).

           <b>--check</b>
              Fail with exit code 4 unless every hole probability lies within 3 sigma.
   """,
    "spectrum": """
        <b>Usage:</b><b>
           wh-ensembles spectrum [--window=<window>] --domain=<domain> [--svg] [--check] [common options]</b>

        Assembles the matrix of the time-frequency localization operator of the window on the domain
        in the basis of the first `M` Hermite functions and computes its eigenvalues and eigenvectors.

        Writes `spectrum.csv` (`j,lambda`), `eigenvectors.csv` (Hermite coefficients of each eigenfunction)
        and, with `--svg`, `spectrum.svg`.

        <b>Options:</b>
           <b>--check</b>
              Fail with exit code 4 unless the trace of the matrix matches the area within 1e-6,
              that is unless the first `M` Hermite functions carry all but 1e-6 of the localized mass.
   """,
    "version": """
        <b>Usage:</b><b>
           wh-ensembles version</b>

        Prints the version and exits.
   """,
    "weyl": """
        <b>Usage:</b><b>
           wh-ensembles weyl [--window=<window>] [--areas=<area,...>] [--delta=<delta>] [--check] [common options]</b>

        Counts the eigenvalues above `1 - delta` on centered disks of the given areas and compares the count with the area,
        relative to the perimeter.

        Writes `weyl.csv` with columns `area,perimeter,count,error,normalized_error`.

        <b>Options:</b>
           <b>--areas=<area,...></b>
              Comma-separated disk areas (default: 25,100,400).

           <b>--delta=<delta></b>
              Threshold distance from 1, in `(0, 1)` (default: 0.5).

           <b>--check</b>
              Fail with exit code 4 if a normalized error exceeds 1.5 times the first one (or 1.5 over its perimeter if that one is 0).
   """,
}

common_options_docs = """
    <u>Common options</u>\n
        <b>--window=<window></b>     Window descriptor (default: `hermite:0`), see `help descriptors`.
        <b>--domain=<domain></b>     Domain descriptor, see `help descriptors`.
        <b>--basis=<M></b>           Number of Hermite functions (default: the larger of 2N and N + 64).
        <b>--quad=<order></b>        Radial (or per-axis) quadrature order (default: 4M + 32).
        <b>--seed=<seed></b>         Unsigned 64-bit master seed.
        <b>--out=<dir></b>           Output directory (default: current directory).
        <b>--strict</b>              Turn numerical warnings into errors.
        <b>--workers=<count></b>     Number of worker threads.
        <b>--debug</b>               Log detailed diagnostic info.
        <b>-h, --help</b>            Print help and exit.
        <b>-v, --verbose</b>         Log progress.
        <b>--version</b>             Print version and exit.
"""
