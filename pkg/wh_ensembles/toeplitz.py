"""Time-frequency localization operators in the Hermite basis.

The operator ``H f = V_g^* (1_Omega V_g f)`` is represented by the matrix

    T[j][k] = <1_Omega V_g h_k, V_g h_j>,   j, k < M,

so that eigenvectors are directly the Hermite coefficients of the eigenfunctions.
"""

import math
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from numpy.typing import NDArray
from scipy import optimize

from . import constants, utils
from .domains import Disk, PhaseDomain, domain_quadrature, n_omega
from .exceptions import (ArgumentDomainError, ConvergenceError,
                         UnexpectedEnsembleException)
from .phasespace import WindowSpec, stft_basis
from .specfun import QuadratureRule, complex_hermite_weighted, gauss_legendre

# Off-diagonal magnitude tolerated for pure Hermite windows on centered disks and annuli.
_DIAGONALITY_TOLERANCE = 1e-10
_RESIDUAL_TOLERANCE = 1e-9
_DIAGONAL_GRAM_TOLERANCE = 1e-6


class ToeplitzMatrix:

    def __init__(self, window: WindowSpec, domain: PhaseDomain, entries: NDArray[np.complex128],
                 order: int, angular_order: int) -> None:
        self.__window = window
        self.__domain = domain
        self.__entries = entries
        self.__order = order
        self.__angular_order = angular_order

    @property
    def window(self) -> WindowSpec:
        return self.__window

    @property
    def domain(self) -> PhaseDomain:
        return self.__domain

    @property
    def entries(self) -> NDArray[np.complex128]:
        return self.__entries

    @property
    def size(self) -> int:
        return int(self.__entries.shape[0])

    @property
    def order(self) -> int:
        return self.__order

    @property
    def angular_order(self) -> int:
        return self.__angular_order

    @property
    def trace(self) -> float:
        return float(np.sum(np.real(np.diag(self.__entries))))

    @property
    def tail_mass(self) -> float:
        return self.__domain.measure - self.trace

    def max_off_diagonal(self) -> float:
        off = self.__entries - np.diag(np.diag(self.__entries))
        return float(np.max(np.abs(off))) if self.size > 1 else 0.0


class TieBreak(NamedTuple):
    rule: str
    # positions (in the sorted spectrum) of each group of eigenvalues within the tie tolerance
    groups: Tuple[Tuple[int, ...], ...]


class SpectralDecomposition(NamedTuple):
    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.complex128]
    tie_break: TieBreak
    window: WindowSpec
    domain: PhaseDomain
    tail_mass: float

    @property
    def size(self) -> int:
        return len(self.eigenvalues)


def _node_chunks(rule: QuadratureRule) -> Iterator[Tuple[NDArray[np.complex128], NDArray[np.float64]]]:
    for start in range(0, rule.size, constants.NODE_CHUNK):
        stop = start + constants.NODE_CHUNK
        yield np.asarray(rule.nodes[start:stop], dtype=np.complex128), rule.weights[start:stop]


def _assemble_by_nodes(g: WindowSpec, size: int, rule: QuadratureRule) -> NDArray[np.complex128]:
    entries = np.zeros((size, size), dtype=np.complex128)
    for nodes, weights in _node_chunks(rule):
        basis = stft_basis(g, size, nodes)
        entries += (np.conj(basis).T * weights) @ basis
    return entries


def _radial_profiles(g: WindowSpec, size: int, rho: NDArray[np.float64]) -> List[NDArray[np.float64]]:
    # W_{k,r}(rho e^{i psi}) = Q_{k,r}(rho) e^{i (k - r) psi} with Q real
    profiles = []
    for r in g.support:
        q = np.empty((len(rho), size), dtype=np.float64)
        for k in range(size):
            q[:, k] = np.real(complex_hermite_weighted(k, r, rho))
        profiles.append(q)
    return profiles


def _assemble_polar(g: WindowSpec, size: int, radial: QuadratureRule) -> NDArray[np.complex128]:
    # centered disks and annuli: the angular integral keeps only k - j = s - r
    rho = np.asarray(radial.nodes, dtype=np.float64)
    weights = radial.weights * rho
    support = g.support
    profiles = _radial_profiles(g, size, rho)
    entries = np.zeros((size, size), dtype=np.complex128)
    for a, r in enumerate(support):
        for b, s in enumerate(support):
            shift = s - r
            if abs(shift) >= size:
                continue
            coefficient = 2 * math.pi * g.coeffs[r] * np.conj(g.coeffs[s])
            if shift >= 0:
                rows = np.arange(size - shift)
                values = np.einsum('a,aj,aj->j', weights, profiles[a][:, :size - shift], profiles[b][:, shift:])
            else:
                rows = np.arange(-shift, size)
                values = np.einsum('a,aj,aj->j', weights, profiles[a][:, -shift:], profiles[b][:, :size + shift])
            entries[rows, rows + shift] += coefficient * values
    return entries


def disk_localization(g: WindowSpec, size: int, radius: float, order: Optional[int] = None) -> NDArray[np.complex128]:
    """Localization matrix on the centered disk of the given radius, without the rank and tail checks of ``assemble``."""
    radial = gauss_legendre(order or constants.default_radial_order(size), 0.0, radius)
    return _assemble_polar(g, size, radial)


def _mirror_upper_triangle(entries: NDArray[np.complex128]) -> NDArray[np.complex128]:
    upper = np.triu(entries, 1)
    return np.asarray(upper + np.conj(upper).T + np.diag(np.real(np.diag(entries))), dtype=np.complex128)


def assemble(g: WindowSpec, d: PhaseDomain, size: Optional[int] = None,
             order: Optional[int] = None, angular_order: Optional[int] = None) -> ToeplitzMatrix:
    n = n_omega(d)
    size = size if size is not None else constants.default_basis_size(n)
    if size < n:
        raise ArgumentDomainError(f"Basis size {size} is smaller than the rank {n} of the ensemble on `{d.descriptor}`")
    order = order or constants.default_radial_order(size)
    angular_order = angular_order or constants.default_angular_order(size)
    rule = domain_quadrature(d, order, angular_order)
    utils.info(f"Assembling {size}x{size} localization matrix of {g.descriptor} on {d.descriptor} ({rule.region})")

    if d.polar_radii is not None and rule.region == "polar":
        entries = _assemble_polar(g, size, rule.factors[0])
    else:
        entries = _assemble_by_nodes(g, size, rule)
    entries = _mirror_upper_triangle(entries)
    matrix = ToeplitzMatrix(g, d, entries, order, angular_order)

    if g.pure_index is not None and d.polar_radii is not None:
        off_diagonal = matrix.max_off_diagonal()
        if off_diagonal > _DIAGONALITY_TOLERANCE:
            raise UnexpectedEnsembleException(
                f"Localization matrix of {g.descriptor} on {d.descriptor} is not diagonal (off-diagonal {off_diagonal:.3e})")
    diagonal = np.real(np.diag(entries))
    if np.any(diagonal < -constants.CLAMP_TOLERANCE) or np.any(diagonal > 1 + constants.CLAMP_TOLERANCE):
        utils.warn(f"Diagonal of the localization matrix on {d.descriptor} leaves [0, 1]; raise the quadrature order")
    if matrix.tail_mass > constants.INSUFFICIENT_BASIS_FRACTION * d.measure:
        utils.warn(f"Basis of size {size} misses {matrix.tail_mass:.4g} of the area {d.measure:.6g} "
                   f"of {d.descriptor}; increase `--basis`")
    utils.debug(f"trace {matrix.trace!r}, tail mass {matrix.tail_mass!r}")
    return matrix


def _dominant_indices(vectors: NDArray[np.complex128]) -> NDArray[np.int64]:
    return np.asarray(np.argmax(np.abs(vectors), axis=0), dtype=np.int64)


def tie_groups(values: NDArray[np.float64]) -> List[List[int]]:
    groups: List[List[int]] = [[0]] if len(values) else []
    for position in range(1, len(values)):
        if values[groups[-1][-1]] - values[position] <= constants.TIE_TOLERANCE:
            groups[-1].append(position)
        else:
            groups.append([position])
    return groups


def _sort_spectrum(values: NDArray[np.float64], vectors: NDArray[np.complex128]
                   ) -> Tuple[NDArray[np.float64], NDArray[np.complex128], TieBreak]:
    order = np.argsort(-values, kind="stable")
    values, vectors = values[order], vectors[:, order]
    dominant = _dominant_indices(vectors)
    permutation: List[int] = []
    tied: List[Tuple[int, ...]] = []
    for group in tie_groups(values):
        if len(group) > 1:
            tied.append(tuple(group))
            group = sorted(group, key=lambda position: (int(dominant[position]), position))
        permutation.extend(group)
    return values[permutation], vectors[:, permutation], TieBreak("descending value, ties by ascending dominant Hermite index", tuple(tied))


def eigendecompose(t: ToeplitzMatrix) -> SpectralDecomposition:
    a = t.entries
    if not np.all(np.isfinite(a)):
        raise ConvergenceError(f"Localization matrix on {t.domain.descriptor} has non-finite entries")
    try:
        values, vectors = scipy.linalg.eigh(a)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"Hermitian eigensolver did not converge: {e}") from None

    norm = max(float(np.linalg.norm(a, 2)), np.finfo(float).tiny)
    residual = float(np.max(np.linalg.norm(a @ vectors - vectors * values, axis=0))) if len(values) else 0.0
    if residual > _RESIDUAL_TOLERANCE * norm:
        raise ConvergenceError(f"Eigenpairs of the localization matrix are inaccurate (residual {residual:.3e})")

    values, vectors, tie_break = _sort_spectrum(np.asarray(values, dtype=np.float64), np.asarray(vectors, dtype=np.complex128))
    dominant = _dominant_indices(vectors)
    columns = np.arange(vectors.shape[1])
    pivots = vectors[dominant, columns]
    vectors = vectors * (np.conj(pivots) / np.abs(pivots))

    if np.any(values < -constants.CLAMP_TOLERANCE) or np.any(values > 1 + constants.CLAMP_TOLERANCE):
        utils.warn(f"Spectrum on {t.domain.descriptor} leaves [0, 1] by more than {constants.CLAMP_TOLERANCE}; clamping")
    values = np.clip(values, 0.0, 1.0)
    if tie_break.groups:
        utils.debug(f"tied positions {tie_break.groups}")
    return SpectralDecomposition(values, vectors, tie_break, t.window, t.domain, t.tail_mass)


def radial_order(max_index: int, radius: float) -> int:
    return constants.default_radial_order(max_index) + math.ceil(8 * radius)


def mu_radial_all(r: int, size: int, radius: float, order: Optional[int] = None) -> NDArray[np.float64]:
    """``mu^r_{j,R}`` for all ``j < size``."""
    if not radius > 0:
        raise ArgumentDomainError(f"Disk radius must be positive, got {radius}")
    order = order or radial_order(max(size - 1, r), radius)
    rule = gauss_legendre(order, 0.0, radius)
    rho = np.asarray(rule.nodes, dtype=np.float64)
    weights = 2 * math.pi * rule.weights * rho
    return np.array([float(np.sum(weights * np.abs(complex_hermite_weighted(j, r, rho)) ** 2)) for j in range(size)])


def mu_radial(r: int, j: int, radius: float, order: Optional[int] = None) -> float:
    """Eigenvalue of the localization operator of ``h_r`` on the disk of radius ``R`` for the eigenfunction ``h_j``."""
    if not radius > 0:
        raise ArgumentDomainError(f"Disk radius must be positive, got {radius}")
    order = order or radial_order(max(j, r), radius)
    rule = gauss_legendre(order, 0.0, radius)
    rho = np.asarray(rule.nodes, dtype=np.float64)
    return float(np.sum(2 * math.pi * rule.weights * rho * np.abs(complex_hermite_weighted(j, r, rho)) ** 2))


def mu_crossing_radius(r: int, j0: int, j1: int, lo: float = 1e-3, hi: Optional[float] = None) -> float:
    """Radius where ``mu^r_{j0,R} = mu^r_{j1,R}``, located by bracketing root search."""
    hi = hi or 2 * math.sqrt((j0 + j1 + r + 4) / math.pi)

    def difference(radius: float) -> float:
        return mu_radial(r, j0, radius) - mu_radial(r, j1, radius)

    if difference(lo) * difference(hi) > 0:
        raise ArgumentDomainError(f"mu^{r}_{j0} - mu^{r}_{j1} does not change sign on [{lo}, {hi}]")
    return float(optimize.brentq(difference, lo, hi, xtol=1e-14, rtol=1e-14))


def weyl_count(s: SpectralDecomposition, delta: float) -> int:
    if not 0 < delta < 1:
        raise ArgumentDomainError(f"delta must lie in (0, 1), got {delta}")
    return int(np.count_nonzero(s.eigenvalues > 1 - delta))


class WeylRow(NamedTuple):
    area: float
    perimeter: float
    count: int
    error: float
    normalized_error: float


def weyl_table(g: WindowSpec, areas: Sequence[float], delta: float, size: Optional[int] = None) -> List[WeylRow]:
    rows = []
    for area in areas:
        disk = Disk.of_area(area)
        count = weyl_count(eigendecompose(assemble(g, disk, size)), delta)
        error = abs(count - area)
        rows.append(WeylRow(area, disk.perimeter, count, error, error / disk.perimeter))
        utils.info(f"area {area}: {count} eigenvalues above {1 - delta}")
    return rows


class DoubleOrthogonality(NamedTuple):
    max_off_diagonal: float
    max_diagonal_error: float
    gram: NDArray[np.complex128]


def restricted_gram(s: SpectralDecomposition, t: ToeplitzMatrix, indices: Optional[Sequence[int]] = None,
                    domain: Optional[PhaseDomain] = None) -> NDArray[np.complex128]:
    """``G[i][j] = <1_D p_i, p_j>`` by 2-D quadrature over the nodes of ``D`` (default: the operator's domain)."""
    columns = np.arange(s.size) if indices is None else np.asarray(indices, dtype=np.int64)
    vectors = s.eigenvectors[:, columns]
    rule = domain_quadrature(domain or t.domain, t.order, t.angular_order)
    gram = np.zeros((len(columns), len(columns)), dtype=np.complex128)
    for nodes, weights in _node_chunks(rule):
        values = stft_basis(t.window, t.size, nodes) @ vectors
        gram += (np.conj(values).T * weights) @ values
    return gram


def double_orthogonality_check(s: SpectralDecomposition, t: ToeplitzMatrix,
                               indices: Optional[Sequence[int]] = None) -> DoubleOrthogonality:
    columns = list(range(s.size)) if indices is None else list(indices)
    gram = restricted_gram(s, t, columns)
    diagonal_error = float(np.max(np.abs(np.real(np.diag(gram)) - s.eigenvalues[columns])))
    if diagonal_error > _DIAGONAL_GRAM_TOLERANCE:
        raise UnexpectedEnsembleException(
            f"Restricted norms of the eigenfunctions differ from their eigenvalues by {diagonal_error:.3e}")
    off = gram - np.diag(np.diag(gram))
    return DoubleOrthogonality(float(np.max(np.abs(off))) if len(columns) > 1 else 0.0, diagonal_error, gram)


def basis_growth_check(g: WindowSpec, d: PhaseDomain, size: Optional[int] = None) -> float:
    """Largest change of the top ``n_omega`` eigenvalues when the basis size doubles."""
    n = n_omega(d)
    size = size or constants.default_basis_size(n)
    small = eigendecompose(assemble(g, d, size)).eigenvalues[:n]
    large = eigendecompose(assemble(g, d, 2 * size)).eigenvalues[:n]
    return float(np.max(np.abs(small - large)))
