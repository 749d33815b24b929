"""Projection kernels of Weyl-Heisenberg and polyanalytic ensembles and their one-point intensities."""

import math
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import optimize, special

from . import constants, utils
from .domains import Disk, PhaseDomain, domain_quadrature, n_omega
from .exceptions import (ArgumentDomainError, RankDeficiencyError,
                         UnexpectedEnsembleException)
from .phasespace import PointLike, WindowSpec, as_complex, stft_basis
from .specfun import ComplexOrArray, RealOrArray, complex_hermite_weighted
from .toeplitz import (SpectralDecomposition, assemble, disk_localization,
                       eigendecompose, mu_radial, mu_radial_all, tie_groups)


class IndexSet:
    """Sorted set of distinct non-negative indices."""

    def __init__(self, indices: Iterable[int]) -> None:
        values = [int(i) for i in indices]
        if any(i < 0 for i in values):
            raise ArgumentDomainError(f"Indices must be non-negative, got {values}")
        if len(set(values)) != len(values):
            raise ArgumentDomainError(f"Indices must be distinct, got {values}")
        self.__indices: Tuple[int, ...] = tuple(sorted(values))

    @classmethod
    def first(cls, n: int) -> "IndexSet":
        return cls(range(n))

    @property
    def indices(self) -> Tuple[int, ...]:
        return self.__indices

    def symmetric_difference(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(set(self.__indices) ^ set(other.indices))

    def __len__(self) -> int:
        return len(self.__indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.__indices)

    def __contains__(self, item: object) -> bool:
        return item in self.__indices

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IndexSet) and self.__indices == other.indices

    def __hash__(self) -> int:
        return hash(self.__indices)

    def __repr__(self) -> str:
        return "{" + ", ".join(map(str, self.__indices)) + "}"


class ProjectionKernel(ABC):
    """``K(z, w) = sum_i f_i(z) conj(f_i(w))`` for an orthonormal family ``f_i`` of phase-space functions."""

    def __init__(self, index_set: IndexSet, descriptor: str) -> None:
        if len(index_set) == 0:
            raise RankDeficiencyError(f"Kernel `{descriptor}` has rank 0")
        self.__index_set = index_set
        self.__descriptor = descriptor
        self.__bounding_radius: Optional[float] = None

    @property
    def index_set(self) -> IndexSet:
        return self.__index_set

    @property
    def rank(self) -> int:
        return len(self.__index_set)

    @property
    def descriptor(self) -> str:
        return self.__descriptor

    @property
    @abstractmethod
    def family_size(self) -> int:
        pass

    @abstractmethod
    def basis_values(self, z: ArrayLike) -> NDArray[np.complex128]:
        """Matrix ``B[n, i] = f_i(z_n)``."""

    @abstractmethod
    def mass_within(self, radius: float) -> float:
        """``int_{|z| < radius} K(z, z) dz``."""

    def kernel(self, p: PointLike, q: PointLike) -> ComplexOrArray:
        zp, zq = as_complex(p), as_complex(q)
        value = np.sum(self.basis_values(zp) * np.conj(self.basis_values(zq)), axis=1).reshape(np.shape(zp))
        return complex(value) if np.ndim(value) == 0 else value

    def intensity(self, p: PointLike) -> RealOrArray:
        z = as_complex(p)
        value = np.sum(np.abs(self.basis_values(z)) ** 2, axis=1).reshape(np.shape(z))
        return float(value) if np.ndim(value) == 0 else value

    def bounding_radius(self, trace_loss: float = constants.BOUNDING_TRACE_LOSS) -> float:
        """Radius of the centered disk holding all but ``trace_loss * rank`` of the trace."""
        if trace_loss == constants.BOUNDING_TRACE_LOSS and self.__bounding_radius is not None:
            return self.__bounding_radius

        def excess(radius: float) -> float:
            return self.rank * (1 - trace_loss) - self.mass_within(radius)

        hi = math.sqrt(self.family_size / math.pi) + 2.0
        for _ in range(32):
            if excess(hi) <= 0:
                break
            hi *= 1.5
        else:
            raise UnexpectedEnsembleException(f"Trace of `{self.__descriptor}` does not concentrate on any disk")
        radius = float(optimize.brentq(excess, 1e-9, hi, xtol=1e-6))
        utils.debug(f"bounding radius {radius!r}")
        if trace_loss == constants.BOUNDING_TRACE_LOSS:
            self.__bounding_radius = radius
        return radius

    def gram(self, domain: Optional[PhaseDomain] = None) -> NDArray[np.complex128]:
        """``G[i][j] = int_D f_i conj(f_j)``; over the whole plane (bounding disk) by default."""
        d = domain or Disk(self.bounding_radius(1e-10))
        rule = domain_quadrature(d, constants.default_radial_order(self.family_size),
                                 constants.default_angular_order(self.family_size))
        gram = np.zeros((self.rank, self.rank), dtype=np.complex128)
        for start in range(0, rule.size, constants.NODE_CHUNK):
            values = self.basis_values(rule.nodes[start:start + constants.NODE_CHUNK])
            gram += (values.T * rule.weights[start:start + constants.NODE_CHUNK]) @ np.conj(values)
        return gram

    def __repr__(self) -> str:
        return f"ProjectionKernel({self.__descriptor}, rank={self.rank})"


class SpectralKernel(ProjectionKernel):
    """Family of eigenfunctions ``V_g f_i`` of a localization operator, selected by positions in its sorted spectrum."""

    def __init__(self, s: SpectralDecomposition, positions: IndexSet, descriptor: str) -> None:
        super().__init__(positions, descriptor)
        if positions.indices[-1] >= s.size:
            raise ArgumentDomainError(f"Index {positions.indices[-1]} exceeds the {s.size} computed eigenpairs")
        self.__window = s.window
        self.__coefficients = s.eigenvectors[:, list(positions)]
        self.__eigenvalues = s.eigenvalues[list(positions)]

    @property
    def window(self) -> WindowSpec:
        return self.__window

    @property
    def coefficients(self) -> NDArray[np.complex128]:
        return self.__coefficients

    @property
    def eigenvalues(self) -> NDArray[np.float64]:
        return self.__eigenvalues

    @property
    def family_size(self) -> int:
        return int(self.__coefficients.shape[0]) + len(self.__window)

    def basis_values(self, z: ArrayLike) -> NDArray[np.complex128]:
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
        return np.asarray(stft_basis(self.__window, self.__coefficients.shape[0], z) @ self.__coefficients)

    def mass_within(self, radius: float) -> float:
        if radius <= 0:
            return 0.0
        t = disk_localization(self.__window, self.__coefficients.shape[0], radius)
        c = self.__coefficients
        return float(np.real(np.einsum('ki,kl,li->', np.conj(c), t, c)))


class PolyanalyticKernel(ProjectionKernel):
    """Family ``W_{j,r}(z) = H_{j,r}(z, conj z) e^{-pi |z|^2 / 2}`` for ``j`` in the index set, ``r`` fixed."""

    def __init__(self, r: int, index_set: IndexSet, descriptor: Optional[str] = None) -> None:
        if r < 0:
            raise ArgumentDomainError(f"Polyanalytic level must be non-negative, got r={r}")
        super().__init__(index_set, descriptor or f"poly:{r}:{index_set!r}")
        self.__r = r

    @property
    def level(self) -> int:
        return self.__r

    @property
    def family_size(self) -> int:
        return self.index_set.indices[-1] + self.__r + 1

    def basis_values(self, z: ArrayLike) -> NDArray[np.complex128]:
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel()
        values = np.empty((len(z), self.rank), dtype=np.complex128)
        for column, j in enumerate(self.index_set):
            values[:, column] = complex_hermite_weighted(j, self.__r, z)
        return values

    def mass_within(self, radius: float) -> float:
        if radius <= 0:
            return 0.0
        return float(sum(mu_radial(self.__r, j, radius) for j in self.index_set))


def _top_positions(s: SpectralDecomposition, n: int) -> IndexSet:
    positive = int(np.count_nonzero(s.eigenvalues > 0))
    if positive < n:
        raise RankDeficiencyError(f"Only {positive} positive eigenvalues on {s.domain.descriptor}, need {n}")
    if n < s.size and s.eigenvalues[n - 1] - s.eigenvalues[n] <= constants.TIE_TOLERANCE:
        utils.warn(f"Eigenvalues at positions {n - 1} and {n} on {s.domain.descriptor} tie; "
                   "the cut follows the ascending dominant Hermite index")
    return IndexSet.first(n)


def finite_wh_kernel(s: SpectralDecomposition, d: PhaseDomain) -> SpectralKernel:
    n = n_omega(d)
    return SpectralKernel(s, _top_positions(s, n), f"wh:{s.window.descriptor}:{d.descriptor}")


def generalized_wh_kernel(s: SpectralDecomposition, positions: IndexSet) -> SpectralKernel:
    return SpectralKernel(s, positions, f"wh:{s.window.descriptor}:{s.domain.descriptor}:{positions!r}")


def pure_poly_kernel(r: int, n: int) -> PolyanalyticKernel:
    if n < 1:
        raise ArgumentDomainError(f"Pure polyanalytic ensemble needs N >= 1, got N={n}")
    return PolyanalyticKernel(r, IndexSet.first(n), f"poly:{r}:{n}")


def ginibre_kernel(n: int) -> PolyanalyticKernel:
    if n < 1:
        raise ArgumentDomainError(f"Ginibre ensemble needs N >= 1, got N={n}")
    return PolyanalyticKernel(0, IndexSet.first(n), f"ginibre:{n}")


def ginibre_kernel_value(n: int, z: ComplexOrArray, w: ComplexOrArray) -> ComplexOrArray:
    """``e^{-pi (|z|^2 + |w|^2) / 2} sum_{j<N} (pi z conj w)^j / j!``, summed in log space."""
    z, w = np.asarray(z, dtype=np.complex128), np.asarray(w, dtype=np.complex128)
    a = math.pi * z * np.conj(w)
    j = np.arange(n).reshape((n,) + (1,) * a.ndim)
    with np.errstate(divide='ignore', invalid='ignore'):
        log_terms = np.where(j == 0, 0.0, j * np.log(a)) - special.gammaln(j + 1)
    value = np.sum(np.exp(log_terms - 0.5 * math.pi * (np.abs(z) ** 2 + np.abs(w) ** 2)), axis=0)
    return complex(value) if np.ndim(value) == 0 else value


def intensity(k: ProjectionKernel, p: PointLike) -> RealOrArray:
    return k.intensity(p)


def kernel_matrix(k: ProjectionKernel, points: ArrayLike) -> NDArray[np.complex128]:
    values = k.basis_values(points)
    return np.asarray(values @ np.conj(values).T)


def intensity_grid(k: ProjectionKernel, xs: ArrayLike, xis: ArrayLike, workers: int = 1) -> NDArray[np.float64]:
    """``rho(x + i xi)`` with rows indexed by ``x`` and columns by ``xi``."""
    x, xi = np.meshgrid(np.asarray(xs, dtype=np.float64), np.asarray(xis, dtype=np.float64), indexing="ij")
    z = (x + 1j * xi).ravel()
    chunks = [z[start:start + constants.NODE_CHUNK] for start in range(0, len(z), constants.NODE_CHUNK)]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        parts = list(executor.map(lambda chunk: np.atleast_1d(k.intensity(chunk)), chunks))
    return np.concatenate(parts).reshape(x.shape) if parts else np.zeros(x.shape)


def l1_deviation_spectral(s: SpectralDecomposition, d: PhaseDomain, positions: IndexSet) -> float:
    """``|| rho_I - 1_Omega ||_1 = #I - |Omega| + 2 sum_{j not in I} lambda_j``; truncated indices enter through the tail mass."""
    outside = np.ones(s.size, dtype=bool)
    inside = [j for j in positions if j < s.size]
    outside[inside] = False
    if len(inside) != len(positions):
        raise ArgumentDomainError(f"Index set {positions!r} exceeds the {s.size} computed eigenpairs")
    return float(len(positions) - d.measure + 2 * (np.sum(s.eigenvalues[outside]) + s.tail_mass))


def l1_deviation_quadrature(k: ProjectionKernel, d: PhaseDomain, order: Optional[int] = None) -> float:
    """Direct quadrature of ``|| rho - 1_Omega ||_1``.

    The complement integral is ``int_B rho - int_Omega rho`` with ``B`` a centered disk containing both
    ``Omega`` and all but 1e-10 of the trace.
    """
    order = order or constants.default_radial_order(k.family_size)
    angular = constants.default_angular_order(k.family_size)

    def integral(domain: PhaseDomain, f: str) -> float:
        rule = domain_quadrature(domain, order, angular)
        total = 0.0
        for start in range(0, rule.size, constants.NODE_CHUNK):
            rho = np.atleast_1d(k.intensity(rule.nodes[start:start + constants.NODE_CHUNK]))
            total += float(np.sum(rule.weights[start:start + constants.NODE_CHUNK] * (1 - rho if f == "hole" else rho)))
        return total

    big = Disk(max(d.outer_radius, k.bounding_radius(1e-10)) + 1.0)
    inside_hole, inside_mass, total_mass = integral(d, "hole"), integral(d, "mass"), integral(big, "mass")
    utils.debug(f"int_Omega (1 - rho) = {inside_hole!r}, int_Omega rho = {inside_mass!r}, int_B rho = {total_mass!r}")
    return inside_hole + total_mass - inside_mass


def _sorted_radial_positions(mu: NDArray[np.float64]) -> List[int]:
    order = [int(j) for j in np.argsort(-mu, kind="stable")]
    ranked: List[int] = []
    for group in tie_groups(mu[order]):
        ranked.extend(sorted(order[position] for position in group))
    return ranked


def poly_index_set(r: int, n: int, area: Optional[float] = None) -> IndexSet:
    """Indices ``j`` of the ``N`` largest ``mu^r_{j,R}`` on the disk of area ``N`` (or ``area``, rounding up to ``N``)."""
    if n < 1:
        raise ArgumentDomainError(f"N must be positive, got N={n}")
    area = float(n) if area is None else area
    disk = Disk.of_area(area)
    if n_omega(disk) != n:
        raise ArgumentDomainError(f"Disk of area {area} holds {n_omega(disk)} points, not {n}")
    size = constants.default_basis_size(n)
    mu = mu_radial_all(r, size, disk.radius)
    ranked = _sorted_radial_positions(mu)
    if mu[ranked[n - 1]] - mu[ranked[n]] <= constants.TIE_TOLERANCE:
        utils.warn(f"mu^{r}_j at area {area!r} ties across the cut after {n} indices; smaller indices taken first")
    return IndexSet(ranked[:n])


def trace_distance_poly(r: int, n: int, area: Optional[float] = None) -> float:
    """Trace norm of ``K_{h_r, D} - K_{r,N}``: both are diagonal in ``V_{h_r} h_j``, so it counts the symmetric difference."""
    return float(len(poly_index_set(r, n, area).symmetric_difference(IndexSet.first(n))))


def l1_deviation_poly(r: int, n: int) -> float:
    """``|| rho_{r,N} - 1_D ||_1`` on the disk of area ``N``, from the radial eigenvalues."""
    disk = Disk.of_area(n)
    mu = mu_radial_all(r, n, disk.radius)
    return float(2 * n - 2 * np.sum(mu))


class ComparisonRow(NamedTuple):
    n: int
    r: int
    symdiff: float
    sqrt_n: float
    ratio: float


def compare_poly(r: int, ns: Sequence[int], area: Optional[float] = None) -> List[ComparisonRow]:
    rows = []
    for n in ns:
        distance = trace_distance_poly(r, n, area)
        rows.append(ComparisonRow(n, r, distance, math.sqrt(n), distance / math.sqrt(n)))
        utils.info(f"r={r} N={n}: symmetric difference {distance:g}")
    return rows


def scaling_l1_sweep(g: WindowSpec, d: PhaseDomain, scales: Sequence[float],
                     order: Optional[int] = None) -> List[Tuple[float, float]]:
    """``|| rho_{g, m Omega}(m .) - 1_Omega ||_1 = || rho_{g, m Omega} - 1_{m Omega} ||_1 / m^2`` for each ``m``."""
    rows = []
    for m in scales:
        scaled = d.scaled(m)
        s = eigendecompose(assemble(g, scaled, order=order))
        deviation = l1_deviation_spectral(s, scaled, _top_positions(s, n_omega(scaled)))
        rows.append((float(m), deviation / m ** 2))
    return rows
