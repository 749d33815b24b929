#!/usr/bin/env python3

import argparse
import math
import os
import sys
import textwrap
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from scipy import optimize

from . import __version__, constants, plotting, tables, utils
from .docs import common_options_docs, long_docs, short_docs
from .domains import Disk, PhaseDomain, parse_domain_descriptor
from .ensembles import (IndexSet, ProjectionKernel, compare_poly,
                        finite_wh_kernel, intensity_grid,
                        l1_deviation_quadrature, l1_deviation_spectral,
                        pure_poly_kernel, scaling_l1_sweep)
from .exceptions import (AcceptanceFailure, ArgumentDomainError,
                         DegeneratePolygonError, DescriptorError,
                         EnsembleException, ExitCode,
                         NumericalWarningEscalated,
                         UnexpectedEnsembleException)
from .options import ExperimentConfig
from .phasespace import parse_window_descriptor
from .sampling import (hole_probability, hole_probability_test,
                       radii_distribution_test, radial_law, sample_kostlan,
                       sample_many)
from .toeplitz import (SpectralDecomposition, ToeplitzMatrix, assemble,
                       eigendecompose, mu_crossing_radius, mu_radial,
                       radial_order, weyl_table)
from .utils import bold, fmt, underline

DEFAULT_COMPARE_N = [25, 100, 400]
DEFAULT_WEYL_AREAS = [25.0, 100.0, 400.0]
DEFAULT_KOSTLAN_N = 5
HOLE_PROBABILITY_LEVELS = (0.8, 0.5, 0.2)
TRACE_CHECK_TOLERANCE = 1e-6
L1_CHECK_TOLERANCE = 1e-4
BOUND_GROWTH = 1.5

command_groups: List[Tuple[str, List[str]]] = [
    ("General topics",
     ["config", "descriptors", "help", "version"]),
    ("Spectra of time-frequency localization operators",
     ["spectrum", "weyl", "crossing"]),
    ("Kernels and one-point intensities",
     ["intensity", "compare"]),
    ("Sampling",
     ["sample", "kostlan"]),
]

experiment_commands = ["compare", "crossing", "intensity", "kostlan", "sample", "spectrum", "weyl"]


def get_help_description(display_help_topics: bool, command: Optional[str] = None) -> str:
    usage_str = ''
    if command in long_docs:
        usage_str += fmt(textwrap.dedent(long_docs[command]))
        if command in experiment_commands:
            usage_str += fmt(textwrap.dedent(common_options_docs))
    else:
        usage_str += get_short_general_usage() + '\n\n'
        for hdr, cmds in command_groups:
            if not display_help_topics and hdr == 'General topics':
                cmds = [topic for topic in cmds if topic not in ['config', 'descriptors']]
            usage_str += underline(hdr) + '\n\n'
            for cm in cmds:
                usage_str += f'    {bold(cm) : <{18 if utils.ascii_only else 27}}{short_docs[cm]}'
                usage_str += '\n'
            usage_str += '\n'
        usage_str += fmt(textwrap.dedent("""
            <u>General options</u>\n
                <b>--debug</b>           Log detailed diagnostic info.
                <b>-h, --help</b>        Print help and exit.
                <b>-v, --verbose</b>     Log progress.
                <b>--version</b>         Print version and exit.
        """[1:]))
    return usage_str


def get_short_general_usage() -> str:
    return fmt("<b>Usage: wh-ensembles [--debug] [-h] [-v|--verbose] [--version] "
               "<command> [command-specific options]</b>")


def version() -> None:
    print(f"wh-ensembles version {__version__}")


class EnsembleHelpAction(argparse.Action):
    def __init__(
            self,
            option_strings: str,
            dest: str = argparse.SUPPRESS,
            default: Any = argparse.SUPPRESS,
            help: Optional[str] = None
    ) -> None:
        super(EnsembleHelpAction, self).__init__(
            option_strings=option_strings,
            dest=dest,
            default=default,
            nargs=0,
            help=help)

    def __call__(
            self,
            parser: argparse.ArgumentParser,
            namespace: argparse.Namespace,  # noqa: F841, U100
            values: Union[str, Sequence[Any], None],  # noqa: U100
            option_string: Optional[str] = None  # noqa: F841, U100
    ) -> None:
        # parser name (prog) is expected to be `wh-ensembles` or `wh-ensembles <command>`
        command_name = parser.prog.replace('wh-ensembles', '').strip()
        print(get_help_description(display_help_topics=True, command=command_name))
        parser.exit(status=ExitCode.SUCCESS)


def create_cli_parser() -> argparse.ArgumentParser:
    common_args_parser = argparse.ArgumentParser(
        prog='wh-ensembles',
        argument_default=argparse.SUPPRESS,
        add_help=False)
    common_args_parser.add_argument('--debug', action='store_true')
    common_args_parser.add_argument('-h', '--help', action=EnsembleHelpAction)
    common_args_parser.add_argument('--version', action='version', version=f'wh-ensembles version {__version__}')
    common_args_parser.add_argument('-v', '--verbose', action='store_true')

    experiment_args_parser = argparse.ArgumentParser(
        prog='wh-ensembles',
        argument_default=argparse.SUPPRESS,
        add_help=False)
    experiment_args_parser.add_argument('--window')
    experiment_args_parser.add_argument('--domain')
    experiment_args_parser.add_argument('--basis', type=int)
    experiment_args_parser.add_argument('--quad', type=int)
    experiment_args_parser.add_argument('--seed', type=int)
    experiment_args_parser.add_argument('--out')
    experiment_args_parser.add_argument('--samples', type=int)
    experiment_args_parser.add_argument('--svg', action='store_true')
    experiment_args_parser.add_argument('--check', action='store_true')
    experiment_args_parser.add_argument('--strict', action='store_true')
    experiment_args_parser.add_argument('--workers', type=int)
    experiment_args_parser.add_argument('--r', type=int)
    experiment_args_parser.add_argument('--N', dest='n', type=utils.parse_int_list)
    experiment_args_parser.add_argument('--areas', type=utils.parse_float_list)
    experiment_args_parser.add_argument('--delta', type=float)
    experiment_args_parser.add_argument('--grid', type=int)
    experiment_args_parser.add_argument('--area', type=float)
    experiment_args_parser.add_argument('--scales', type=utils.parse_float_list)

    cli_parser = argparse.ArgumentParser(
        prog='wh-ensembles',
        argument_default=argparse.SUPPRESS,
        add_help=False,
        parents=[common_args_parser])

    subparsers = cli_parser.add_subparsers(dest='command')

    for command in experiment_commands:
        subparsers.add_parser(
            command,
            argument_default=argparse.SUPPRESS,
            usage=argparse.SUPPRESS,
            add_help=False,
            parents=[common_args_parser, experiment_args_parser])

    help_parser = subparsers.add_parser(
        'help',
        argument_default=argparse.SUPPRESS,
        usage=argparse.SUPPRESS,
        add_help=False,
        parents=[common_args_parser])
    help_parser.add_argument('topic_or_cmd', nargs='?', default=None, choices=sorted(long_docs.keys()))

    subparsers.add_parser(
        'version',
        argument_default=argparse.SUPPRESS,
        usage=argparse.SUPPRESS,
        add_help=False,
        parents=[common_args_parser])
    return cli_parser


def update_config_using_parsed_args(config: ExperimentConfig, parsed_args: argparse.Namespace) -> None:
    for opt, arg in vars(parsed_args).items():
        # --debug and --verbose are handled outside this method
        if opt == "command":
            config.opt_command = arg
        elif opt == "window":
            config.opt_window = arg
        elif opt == "domain":
            config.opt_domain = arg
        elif opt == "basis":
            config.opt_basis = arg
        elif opt == "quad":
            config.opt_quad = arg
        elif opt == "seed":
            config.opt_seed = arg
        elif opt == "out":
            config.opt_out = arg
        elif opt == "samples":
            config.opt_samples = arg
        elif opt == "svg":
            config.opt_svg = True
        elif opt == "check":
            config.opt_check = True
        elif opt == "strict":
            config.opt_strict = True
        elif opt == "workers":
            config.opt_workers = arg
        elif opt == "r":
            config.opt_r = arg
        elif opt == "n":
            config.opt_n = arg
        elif opt == "areas":
            config.opt_areas = arg
        elif opt == "delta":
            config.opt_delta = arg
        elif opt == "grid":
            config.opt_grid = arg
        elif opt == "area":
            config.opt_area = arg
        elif opt == "scales":
            config.opt_scales = arg


def set_utils_global_variables(parsed_args: argparse.Namespace) -> None:
    args = vars(parsed_args)
    utils.ascii_only = not sys.stdout.isatty()
    utils.debug_mode = "debug" in args
    utils.verbose_mode = "verbose" in args
    utils.escalate_warnings = "strict" in args or os.environ.get("WH_ENSEMBLES_STRICT") == "true"


def output_path(config: ExperimentConfig, name: str) -> str:
    return os.path.join(config.opt_out, name)


def require_domain(config: ExperimentConfig) -> PhaseDomain:
    if not config.opt_domain:
        raise ArgumentDomainError(f"Command `{config.opt_command}` needs `--domain`, see `wh-ensembles help descriptors`.")
    return parse_domain_descriptor(config.opt_domain)


def localization_spectrum(config: ExperimentConfig, d: PhaseDomain) -> Tuple[ToeplitzMatrix, SpectralDecomposition]:
    g = parse_window_descriptor(config.opt_window)
    t = assemble(g, d, config.opt_basis, config.opt_quad)
    return t, eigendecompose(t)


def expect(condition: bool, check: str, detail: str) -> None:
    if not condition:
        raise AcceptanceFailure(check, detail)


def cmd_spectrum(config: ExperimentConfig) -> None:
    d = require_domain(config)
    t, s = localization_spectrum(config, d)
    provenance = config.provenance() + [("M", str(t.size)), ("radial_order", str(t.order))]
    spectrum_csv = tables.write_csv(output_path(config, "spectrum.csv"), ["j", "lambda"],
                                    enumerate(s.eigenvalues), provenance)
    tables.write_csv(output_path(config, "eigenvectors.csv"), ["position", "k", "real", "imag"],
                     ((position, k, value.real, value.imag)
                      for position in range(s.size) for k, value in enumerate(s.eigenvectors[:, position])),
                     provenance)
    if config.opt_svg:
        plotting.render_spectrum(spectrum_csv, output_path(config, "spectrum.svg"))
    above_half = int(np.count_nonzero(s.eigenvalues > 0.5))
    print(f"{above_half} eigenvalues above 1/2 on a domain of area {d.measure:.6g}")
    if config.opt_check:
        expect(abs(t.trace - d.measure) <= TRACE_CHECK_TOLERANCE, "trace",
               f"trace {t.trace!r} differs from the area {d.measure!r} by more than {TRACE_CHECK_TOLERANCE}")
        print(f"trace check: {utils.pass_fail(True)}")


def grid_axes(d: PhaseDomain, points: int) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    xmin, xmax, ximin, ximax = d.bounding_box()
    margin = 0.1 * max(xmax - xmin, ximax - ximin)
    return (np.linspace(xmin - margin, xmax + margin, points),
            np.linspace(ximin - margin, ximax + margin, points))


def cmd_intensity(config: ExperimentConfig) -> None:
    d = require_domain(config)
    t, s = localization_spectrum(config, d)
    k = finite_wh_kernel(s, d)
    provenance = config.provenance() + [("M", str(t.size)), ("radial_order", str(t.order))]
    xs, xis = grid_axes(d, config.opt_grid)
    rho = intensity_grid(k, xs, xis, config.opt_workers)
    intensity_csv = tables.write_csv(
        output_path(config, "intensity.csv"), ["x", "xi", "rho"],
        ((x, xi, rho[a, b]) for a, x in enumerate(xs) for b, xi in enumerate(xis)), provenance)
    spectral = l1_deviation_spectral(s, d, k.index_set)
    columns = ["N", "measure", "perimeter", "l1_spectral"]
    row: List[Any] = [k.rank, d.measure, d.perimeter, spectral]
    quadrature: Optional[float] = None
    if config.opt_check:
        quadrature = l1_deviation_quadrature(k, d, config.opt_quad)
        columns.append("l1_quadrature")
        row.append(quadrature)
    tables.write_csv(output_path(config, "l1.csv"), columns, [row], provenance)
    print(f"L1 distance between the intensity and the domain: {spectral:.10g}")

    sweep: List[Tuple[float, float]] = []
    if config.opt_scales:
        g = parse_window_descriptor(config.opt_window)
        sweep = scaling_l1_sweep(g, d, config.opt_scales)
        tables.write_csv(output_path(config, "scaling.csv"), ["m", "l1_rescaled"], sweep, provenance)
    if config.opt_svg:
        plotting.render_intensity(intensity_csv, output_path(config, "intensity.svg"))

    if config.opt_check:
        assert quadrature is not None
        relative = abs(spectral - quadrature) / max(abs(quadrature), 1e-300)
        expect(relative <= L1_CHECK_TOLERANCE, "l1-identity",
               f"spectral {spectral!r} vs quadrature {quadrature!r} (relative {relative:.3e})")
        expect(float(np.max(rho)) <= 1 + constants.CLAMP_TOLERANCE, "intensity-bound",
               f"intensity reaches {float(np.max(rho))!r}")
        values = [value for _, value in sweep]
        expect(all(b < a for a, b in zip(values, values[1:])), "scaling",
               f"rescaled L1 distances {values} do not decrease")
        print(f"L1 identity check: {utils.pass_fail(True)}")


def cmd_compare(config: ExperimentConfig) -> None:
    ns = config.opt_n or DEFAULT_COMPARE_N
    rows = compare_poly(config.opt_r, ns, config.opt_area)
    sizes = [constants.default_basis_size(n) for n in ns]
    orders = [radial_order(max(size - 1, config.opt_r), Disk.of_area(config.opt_area or n).radius) for n, size in zip(ns, sizes)]
    provenance = config.provenance() + [("M", ",".join(map(str, sizes))), ("radial_order", ",".join(map(str, orders)))]
    tables.write_csv(output_path(config, "compare.csv"), ["N", "r", "symdiff", "sqrtN", "ratio"], rows, provenance)
    print(f"largest ratio to sqrt(N): {max(row.ratio for row in rows):.6g}")
    if config.opt_check:
        if config.opt_r == 0:
            expect(all(row.symdiff == 0 for row in rows), "ginibre-identification",
                   f"non-zero distances {[row.symdiff for row in rows]} at r = 0")
        bound = BOUND_GROWTH * max(rows[0].ratio, 1 / math.sqrt(rows[0].n))
        expect(all(row.ratio <= bound for row in rows), "sqrt-rate",
               f"ratios {[row.ratio for row in rows]} exceed {bound!r}")
        print(f"comparison check: {utils.pass_fail(True)}")


def hole_radii(r: int, indices: IndexSet) -> List[float]:
    hi = max(radial_law(r, j).x_max for j in indices)
    return [float(optimize.brentq(lambda radius: hole_probability(r, indices, radius) - level, 1e-6, hi, xtol=1e-10))
            for level in HOLE_PROBABILITY_LEVELS]


def single_n(config: ExperimentConfig, default: Optional[int] = None) -> int:
    if len(config.opt_n) == 1:
        return config.opt_n[0]
    if not config.opt_n and default is not None:
        return default
    raise ArgumentDomainError(f"Command `{config.opt_command}` needs a single value of `--N`.")


def cmd_sample(config: ExperimentConfig) -> None:
    k: ProjectionKernel
    if config.opt_domain:
        d = parse_domain_descriptor(config.opt_domain)
        _, s = localization_spectrum(config, d)
        k = finite_wh_kernel(s, d)
    else:
        k = pure_poly_kernel(config.opt_r, single_n(config))
    samples = sample_many(k, config.opt_seed, config.opt_samples, config.opt_workers)
    provenance = config.provenance() + [("kernel", k.descriptor), ("bounding_radius", repr(k.bounding_radius()))]
    tables.write_csv(output_path(config, "samples.csv"), ["sample_id", "x", "xi"],
                     ((sample.index, z.real, z.imag) for sample in samples for z in sample.points), provenance)
    print(f"{len(samples)} samples of {k.rank} points")
    if config.opt_domain or not samples:
        return
    indices = k.index_set
    rows = hole_probability_test(samples, config.opt_r, indices, hole_radii(config.opt_r, indices))
    tables.write_csv(output_path(config, "holes.csv"), ["radius", "predicted", "observed", "sigma", "pass"],
                     rows, provenance)
    if config.opt_check:
        failed = [row for row in rows if not row.passed]
        expect(not failed, "hole-probability", ", ".join(f"R={row.radius:.4f}: {row.observed} vs {row.predicted:.4f}" for row in failed))
        print(f"hole probability check: {utils.pass_fail(True)}")


def cmd_kostlan(config: ExperimentConfig) -> None:
    n = single_n(config, DEFAULT_KOSTLAN_N)
    k = pure_poly_kernel(config.opt_r, n)
    indices = k.index_set
    samples = sample_many(k, config.opt_seed, config.opt_samples, config.opt_workers)
    report = radii_distribution_test(samples, config.opt_r, indices)
    provenance = config.provenance() + [("kernel", k.descriptor), ("chi_square", repr(report.chi_square)),
                                        ("degrees_of_freedom", str(report.degrees_of_freedom)),
                                        ("p_value", repr(report.p_value))]
    tables.write_csv(output_path(config, "kostlan.csv"),
                     ["annulus_lo", "annulus_hi", "expected", "observed", "sigma", "pass"], report.rows, provenance)
    tables.write_csv(output_path(config, "radii.csv"), ["sample_id", "j", "radius"],
                     ((i, j, radius) for i in range(config.opt_samples)
                      for j, radius in zip(indices, sample_kostlan(config.opt_r, indices, config.opt_seed, i))),
                     provenance)
    passed = sum(row.passed for row in report.rows)
    print(f"{passed} of {len(report.rows)} annuli within {constants.SIGMA_BAND:g} sigma, chi-square p-value {report.p_value:.4f}")
    if config.opt_check:
        expect(report.passed, "radii", f"{len(report.rows) - passed} annuli outside {constants.SIGMA_BAND:g} sigma")
        print(f"radii check: {utils.pass_fail(True)}")


def cmd_weyl(config: ExperimentConfig) -> None:
    g = parse_window_descriptor(config.opt_window)
    areas = config.opt_areas or DEFAULT_WEYL_AREAS
    rows = weyl_table(g, areas, config.opt_delta, config.opt_basis)
    tables.write_csv(output_path(config, "weyl.csv"), ["area", "perimeter", "count", "error", "normalized_error"],
                     rows, config.provenance())
    print(f"largest normalized error: {max(row.normalized_error for row in rows):.6g}")
    if config.opt_check:
        bound = BOUND_GROWTH * max(rows[0].normalized_error, 1 / rows[0].perimeter)
        expect(all(row.normalized_error <= bound for row in rows), "weyl",
               f"normalized errors {[row.normalized_error for row in rows]} exceed {bound!r}")
        print(f"Weyl law check: {utils.pass_fail(True)}")


def cmd_crossing(config: ExperimentConfig) -> None:
    crossing = mu_crossing_radius(1, 0, 1)
    radii = np.linspace(0.02, 3 * crossing, config.opt_grid)
    provenance = config.provenance() + [("crossing_radius", repr(crossing))]
    tables.write_csv(output_path(config, "crossing.csv"), ["R", "mu0", "mu1"],
                     ((radius, mu_radial(1, 0, radius), mu_radial(1, 1, radius)) for radius in radii), provenance)
    print(f"mu_1 exceeds mu_0 below R = {crossing:.10f} (area {math.pi * crossing ** 2:.10f})")


def launch(orig_args: List[str]) -> None:
    config = ExperimentConfig()

    cli_parser: argparse.ArgumentParser = create_cli_parser()
    parsed_cli: argparse.Namespace = cli_parser.parse_args(orig_args)
    parsed_cli_as_dict: Dict[str, Any] = vars(parsed_cli)

    set_utils_global_variables(parsed_cli)
    update_config_using_parsed_args(config, parsed_cli)
    config.validate()

    if not orig_args or "command" not in parsed_cli_as_dict:
        print(get_help_description(display_help_topics=False))
        sys.exit(ExitCode.ARGUMENT_ERROR)

    cmd = parsed_cli.command
    utils.debug(f"config {config!r}")

    if cmd == "help":
        print(get_help_description(display_help_topics=True, command=parsed_cli_as_dict.get("topic_or_cmd")))
        return
    elif cmd == "version":
        version()
        return

    # Deliberately using if/elif instead of a dict - to measure coverage more accurately.
    if cmd == "spectrum":
        cmd_spectrum(config)
    elif cmd == "intensity":
        cmd_intensity(config)
    elif cmd == "compare":
        cmd_compare(config)
    elif cmd == "sample":
        cmd_sample(config)
    elif cmd == "kostlan":
        cmd_kostlan(config)
    elif cmd == "weyl":
        cmd_weyl(config)
    elif cmd == "crossing":
        cmd_crossing(config)
    else:  # an unknown command is handled by argparse
        raise UnexpectedEnsembleException(f"Unknown command: `{cmd}`")


def main() -> None:
    try:
        launch(sys.argv[1:])
    except KeyboardInterrupt:
        sys.exit(ExitCode.KEYBOARD_INTERRUPT)
    except NumericalWarningEscalated as e:
        print(e, file=sys.stderr)
        sys.exit(ExitCode.NUMERICAL_WARNING)
    except AcceptanceFailure as e:
        print(e, file=sys.stderr)
        sys.exit(ExitCode.ACCEPTANCE_FAILURE)
    except (ArgumentDomainError, DegeneratePolygonError, DescriptorError) as e:
        print(e, file=sys.stderr)
        sys.exit(ExitCode.ARGUMENT_ERROR)
    except EnsembleException as e:
        print(e, file=sys.stderr)
        sys.exit(ExitCode.ENSEMBLE_EXCEPTION)


if __name__ == "__main__":
    main()
