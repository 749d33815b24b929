"""Sampling of projection ensembles, independent-radii laws and Monte Carlo checks against them."""

import functools
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, NamedTuple, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import optimize, special, stats
from scipy.interpolate import PchipInterpolator

from . import constants, utils
from .domains import PhaseDomain, Rectangle, domain_quadrature
from .ensembles import IndexSet, ProjectionKernel
from .exceptions import (ArgumentDomainError, InsufficientSamplesError,
                         RejectionCapExceeded, UnexpectedEnsembleException)
from .phasespace import PhasePoint
from .specfun import (RealOrArray, complex_hermite_weighted, gauss_legendre,
                      laguerre)
from .toeplitz import mu_radial

# Tolerance of the bridge between tabulated survival functions and the radial eigenvalues.
_BRIDGE_TOLERANCE = 1e-8

DPP_CHANNEL = 0
KOSTLAN_CHANNEL = 1


def stream(seed: int, index: int, channel: int = 0) -> np.random.Generator:
    """Counter-based stream of sample ``index`` under the master ``seed``; channels keep unrelated draws apart."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(channel, index))))


class PointConfiguration(NamedTuple):
    points: NDArray[np.complex128]
    seed: int
    index: int
    kernel: str
    proposals: int

    @property
    def count(self) -> int:
        return len(self.points)

    def phase_points(self) -> List[PhasePoint]:
        return [PhasePoint.of(z) for z in self.points]


def _uniform_disk(rng: np.random.Generator, radius: float, size: int) -> NDArray[np.complex128]:
    u = rng.random((2, size))
    return np.asarray(radius * np.sqrt(u[0]) * np.exp(2j * math.pi * u[1]), dtype=np.complex128)


def sample_dpp(k: ProjectionKernel, seed: int, index: int = 0) -> PointConfiguration:
    """Sequential sampler of a projection DPP.

    Point ``i + 1`` has density proportional to the squared distance of the feature vector
    ``Phi(z) = (f_1(z), ..., f_N(z))`` from the span of the features of the chosen points;
    proposals are uniform on the bounding disk and accepted with that (at most 1) probability.
    """
    rng = stream(seed, index, DPP_CHANNEL)
    radius = k.bounding_radius()
    n = k.rank
    chosen = np.empty(n, dtype=np.complex128)
    frame = np.zeros((0, n), dtype=np.complex128)
    total_proposals = 0
    for i in range(n):
        proposals = 0
        while True:
            if proposals >= constants.REJECTION_CAP:
                raise RejectionCapExceeded(i, proposals, i)
            z = _uniform_disk(rng, radius, constants.PROPOSAL_BATCH)
            features = k.basis_values(z)
            residual = features - (features @ np.conj(frame).T) @ frame
            conditional = np.sum(np.abs(residual) ** 2, axis=1)
            accepted = np.flatnonzero(rng.random(constants.PROPOSAL_BATCH) < conditional)
            if len(accepted) == 0:
                proposals += constants.PROPOSAL_BATCH
                continue
            first = int(accepted[0])
            proposals += first + 1
            chosen[i] = z[first]
            frame = np.vstack([frame, residual[first] / math.sqrt(conditional[first])])
            break
        total_proposals += proposals
    utils.debug(f"{total_proposals} proposals for {n} points")
    return PointConfiguration(chosen, seed, index, k.descriptor, total_proposals)


def sample_many(k: ProjectionKernel, seed: int, count: int, workers: int = 1) -> List[PointConfiguration]:
    """``count`` independent samples; sample ``i`` uses stream ``(seed, i)`` whatever the number of workers."""
    if count < 0:
        raise ArgumentDomainError(f"Sample count must be non-negative, got {count}")
    k.bounding_radius()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        return list(executor.map(lambda i: sample_dpp(k, seed, i), range(count)))


def kostlan_density(r: int, j: int, x: RealOrArray) -> RealOrArray:
    """``f_{Y_j}(x) = 2 pi^{j-r+1} r!/j! x^{2(j-r)+1} [L_r^{j-r}(pi x^2)]^2 e^{-pi x^2}``."""
    x = np.asarray(x, dtype=np.float64)
    positive = x > 0
    safe = np.where(positive, x, 1.0)
    log_factor = (math.log(2.0) + (j - r + 1) * math.log(math.pi) + special.gammaln(r + 1) - special.gammaln(j + 1)
                  + (2 * (j - r) + 1) * np.log(safe) - math.pi * safe ** 2)
    value = np.where(positive, np.exp(log_factor) * np.asarray(laguerre(r, j - r, math.pi * safe ** 2)) ** 2, 0.0)
    return float(value) if np.ndim(value) == 0 else value


def kostlan_density_squared(r: int, j: int, y: RealOrArray) -> RealOrArray:
    """``f_{Y_j^2}(y) = pi^{j-r+1} r!/j! y^{j-r} [L_r^{j-r}(pi y)]^2 e^{-pi y}``."""
    y = np.asarray(y, dtype=np.float64)
    positive = y > 0
    safe = np.where(positive, y, 1.0)
    log_factor = ((j - r + 1) * math.log(math.pi) + special.gammaln(r + 1) - special.gammaln(j + 1)
                  + (j - r) * np.log(safe) - math.pi * safe)
    value = np.where(positive, np.exp(log_factor) * np.asarray(laguerre(r, j - r, math.pi * safe)) ** 2, 0.0)
    return float(value) if np.ndim(value) == 0 else value


def check_radial_densities(r: int, j: int, xs: Optional[ArrayLike] = None) -> float:
    """Largest disagreement between ``f_{Y_j}(x)``, ``2 x f_{Y_j^2}(x^2)`` and ``2 pi x |W_{j,r}(x)|^2``."""
    law = radial_law(r, j)
    x = np.linspace(0.0, law.x_max, 257)[1:] if xs is None else np.asarray(xs, dtype=np.float64)
    direct = np.asarray(kostlan_density(r, j, x))
    squared = 2 * x * np.asarray(kostlan_density_squared(r, j, x ** 2))
    modulus = np.asarray(law.density(x))
    scale = max(float(np.max(np.abs(modulus))), 1.0)
    discrepancy = max(float(np.max(np.abs(direct - squared))), float(np.max(np.abs(direct - modulus)))) / scale
    if discrepancy > constants.RADIAL_CDF_TOLERANCE:
        utils.warn(f"Radial densities of Y_{j} at level {r} disagree by {discrepancy:.3e}")
    return discrepancy


class RadialLaw:
    """Law of ``Y_j`` with density ``2 pi x |W_{j,r}(x)|^2``, tabulated on a uniform grid.

    The table holds the CDF at the grid nodes, accumulated from per-cell Gauss-Legendre
    integrals; ``cdf`` adds the partial cell exactly, ``ppf`` inverts a monotone cubic
    interpolant of the table and takes one Newton step.
    """

    def __init__(self, r: int, j: int, nodes: int = constants.RADIAL_TABLE_NODES) -> None:
        if r < 0 or j < 0:
            raise ArgumentDomainError(f"Radial law needs non-negative indices, got r={r}, j={j}")
        self.__r = r
        self.__j = j
        t_max = (j + r + 1) + 15 * math.sqrt((2 * r + 1) * (j + r + 1)) + 30
        self.__x_max = math.sqrt(t_max / math.pi)
        self.__cell = gauss_legendre(constants.RADIAL_CELL_ORDER, -1.0, 1.0)
        self.__grid = np.linspace(0.0, self.__x_max, nodes)
        cells = self.__integrate(self.__grid[:-1], self.__grid[1:])
        self.__cdf = np.concatenate([[0.0], np.cumsum(cells)])
        total = float(self.__cdf[-1])
        if abs(total - 1) > constants.RADIAL_CDF_TOLERANCE:
            utils.warn(f"Density of Y_{j} at level {r} integrates to {total!r}")
        increasing = np.concatenate([[True], np.diff(self.__cdf) > 0])
        self.__inverse = PchipInterpolator(self.__cdf[increasing], self.__grid[increasing])

    @property
    def r(self) -> int:
        return self.__r

    @property
    def j(self) -> int:
        return self.__j

    @property
    def x_max(self) -> float:
        return self.__x_max

    @property
    def grid(self) -> NDArray[np.float64]:
        return self.__grid

    @property
    def cdf_table(self) -> NDArray[np.float64]:
        return self.__cdf

    def density(self, x: RealOrArray) -> RealOrArray:
        x = np.asarray(x, dtype=np.float64)
        value = 2 * math.pi * x * np.abs(complex_hermite_weighted(self.__j, self.__r, x)) ** 2
        return float(value) if np.ndim(value) == 0 else value

    def __integrate(self, a: NDArray[np.float64], b: NDArray[np.float64]) -> NDArray[np.float64]:
        half = 0.5 * (b - a)
        nodes = (a + half)[:, None] + half[:, None] * self.__cell.nodes[None, :]
        return np.asarray(half * np.sum(self.__cell.weights * np.asarray(self.density(nodes)), axis=1))

    def cdf(self, x: RealOrArray) -> RealOrArray:
        shape = np.shape(x)
        x = np.clip(np.asarray(x, dtype=np.float64).ravel(), 0.0, self.__x_max)
        cell = np.clip(np.searchsorted(self.__grid, x, side="right") - 1, 0, len(self.__grid) - 2)
        value = np.minimum(self.__cdf[cell] + self.__integrate(self.__grid[cell], x), 1.0)
        return float(value[0]) if shape == () else value.reshape(shape)

    def survival(self, x: RealOrArray) -> RealOrArray:
        value = 1.0 - np.asarray(self.cdf(x))
        return float(value) if np.ndim(value) == 0 else value

    def ppf(self, u: RealOrArray) -> RealOrArray:
        u = np.asarray(u, dtype=np.float64)
        if self.__r == 0:
            value = np.sqrt(special.gammaincinv(self.__j + 1, u) / math.pi)
        else:
            x = np.clip(np.asarray(self.__inverse(np.clip(u, 0.0, self.__cdf[-1]))), 0.0, self.__x_max)
            f = np.asarray(self.density(x))
            step = np.where(f > 0, (np.asarray(self.cdf(x)).reshape(x.shape) - u) / np.where(f > 0, f, 1.0), 0.0)
            value = np.clip(x - step, 0.0, self.__x_max)
        return float(value) if np.ndim(value) == 0 else value

    def __repr__(self) -> str:
        return f"RadialLaw(r={self.__r}, j={self.__j})"


@functools.lru_cache(maxsize=256)
def radial_law(r: int, j: int) -> RadialLaw:
    return RadialLaw(r, j)


def sample_kostlan(r: int, indices: IndexSet, seed: int, index: int = 0) -> NDArray[np.float64]:
    rng = stream(seed, index, KOSTLAN_CHANNEL)
    u = rng.random(len(indices))
    return np.array([float(radial_law(r, j).ppf(u[n])) for n, j in enumerate(indices)], dtype=np.float64)


def hole_probability(r: int, indices: IndexSet, radius: float) -> float:
    """``P(no point in the disk of radius R) = prod_j P(Y_j >= R)``."""
    if not radius > 0:
        raise ArgumentDomainError(f"Hole radius must be positive, got {radius}")
    probability = 1.0
    for j in indices:
        survival = float(radial_law(r, j).survival(radius))
        bridge = abs(survival - (1 - mu_radial(r, j, radius)))
        if bridge > _BRIDGE_TOLERANCE:
            raise UnexpectedEnsembleException(
                f"P(Y_{j} >= {radius}) at level {r} differs from 1 - mu by {bridge:.3e}")
        probability *= survival
    return probability


class AnnulusRow(NamedTuple):
    lo: float
    hi: float
    expected: float
    observed: int
    sigma: float
    passed: bool


class RadiiReport(NamedTuple):
    rows: List[AnnulusRow]
    chi_square: float
    degrees_of_freedom: int
    p_value: float

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)


def _mixture_edges(laws: Sequence[RadialLaw], annuli: int) -> List[float]:
    x_max = max(law.x_max for law in laws)

    def mixture_cdf(x: float) -> float:
        return float(sum(float(law.cdf(x)) for law in laws)) / len(laws)

    edges = [0.0]
    for step in range(1, annuli):
        edges.append(float(optimize.brentq(lambda x: mixture_cdf(x) - step / annuli, 0.0, x_max, xtol=1e-12)))
    return edges + [math.inf]


def radii_distribution_test(samples: Sequence[PointConfiguration], r: int, indices: IndexSet,
                            annuli: int = constants.DEFAULT_ANNULI) -> RadiiReport:
    """Counts of ``|z|`` in annuli of equal expected count against independent ``Y_j`` laws."""
    if len(samples) < constants.MIN_SAMPLES_FOR_RADII_TEST:
        raise InsufficientSamplesError(
            f"Radii test needs at least {constants.MIN_SAMPLES_FOR_RADII_TEST} samples, got {len(samples)}")
    laws = [radial_law(r, j) for j in indices]
    edges = _mixture_edges(laws, annuli)
    radii = np.concatenate([np.abs(sample.points) for sample in samples])
    observed = np.bincount(np.searchsorted(np.array(edges[1:-1]), radii, side="right"), minlength=annuli)
    rows = []
    for a in range(annuli):
        lo, hi = edges[a], edges[a + 1]
        p = np.array([float(law.cdf(hi) if math.isfinite(hi) else 1.0) - float(law.cdf(lo)) for law in laws])
        expected = len(samples) * float(np.sum(p))
        sigma = math.sqrt(len(samples) * float(np.sum(p * (1 - p))))
        rows.append(AnnulusRow(lo, hi, expected, int(observed[a]),
                               sigma, abs(observed[a] - expected) <= constants.SIGMA_BAND * sigma))
    chi_square = float(sum((row.observed - row.expected) ** 2 / row.expected for row in rows))
    dof = annuli - 1
    return RadiiReport(rows, chi_square, dof, float(stats.chi2.sf(chi_square, dof)))


class HoleRow(NamedTuple):
    radius: float
    predicted: float
    observed: float
    sigma: float
    passed: bool


def hole_probability_test(samples: Sequence[PointConfiguration], r: int, indices: IndexSet,
                          radii: Iterable[float]) -> List[HoleRow]:
    rows = []
    for radius in radii:
        predicted = hole_probability(r, indices, radius)
        observed = float(np.mean([float(np.min(np.abs(sample.points))) >= radius for sample in samples]))
        sigma = math.sqrt(predicted * (1 - predicted) / len(samples))
        rows.append(HoleRow(radius, predicted, observed, sigma, abs(observed - predicted) <= constants.SIGMA_BAND * sigma))
    return rows


class CountTest(NamedTuple):
    expected: float
    observed_mean: float
    sigma: float
    passed: bool


def count_test(samples: Sequence[PointConfiguration], k: ProjectionKernel, domain: PhaseDomain) -> CountTest:
    rule = domain_quadrature(domain, constants.default_radial_order(k.family_size),
                             constants.default_angular_order(k.family_size))
    expected = 0.0
    for start in range(0, rule.size, constants.NODE_CHUNK):
        rho = np.atleast_1d(k.intensity(rule.nodes[start:start + constants.NODE_CHUNK]))
        expected += float(np.sum(rule.weights[start:start + constants.NODE_CHUNK] * rho))
    counts = np.array([int(np.count_nonzero(domain.contains(sample.points))) for sample in samples], dtype=np.float64)
    sigma = float(np.std(counts, ddof=1)) / math.sqrt(len(counts))
    observed = float(np.mean(counts))
    return CountTest(expected, observed, sigma, abs(observed - expected) <= constants.SIGMA_BAND * max(sigma, 1e-12))


def half_plane_count_test(samples: Sequence[PointConfiguration], k: ProjectionKernel) -> CountTest:
    """``count_test`` on the right half-plane ``x > 0``, cut at the bounding disk."""
    radius = k.bounding_radius()
    return count_test(samples, k, Rectangle(0.0, radius, -radius, radius))
