"""Windows, short-time Fourier transforms and their phase-space symmetries.

The STFT is taken literally as

    V_g f(x, xi) = int f(t) conj(g(t - x)) exp(-2 pi i xi t) dt,

which, for Hermite functions, gives ``V_{h_r} h_j(x, xi) = exp(-i pi x xi) W_{j,r}(x - i xi)``
with ``W_{j,r}`` the Gaussian-weighted complex Hermite function. All phase and reflection
bookkeeping is confined to this module.
"""

import math
from typing import List, NamedTuple, Optional, Union, cast

import numpy as np
from numpy.typing import ArrayLike, NDArray

from . import constants, utils
from .exceptions import DescriptorError
from .specfun import (ComplexOrArray, complex_hermite_weighted, gauss_legendre,
                      hermite_functions)


class PhasePoint(NamedTuple):
    x: float
    xi: float

    @property
    def z(self) -> complex:
        return complex(self.x, self.xi)

    @classmethod
    def of(cls, z: complex) -> "PhasePoint":
        return cls(float(z.real), float(z.imag))

    def conj(self) -> "PhasePoint":
        return PhasePoint(self.x, -self.xi)

    def __sub__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(self.x - other.x, self.xi - other.xi)


PointLike = Union[PhasePoint, complex, NDArray[np.complex128]]


def as_complex(p: PointLike) -> ComplexOrArray:
    if isinstance(p, PhasePoint):
        return p.z
    if np.ndim(p) > 0:
        return np.asarray(p, dtype=np.complex128)
    return complex(cast(complex, p))


class WindowSpec:
    """Unit-norm window ``g = sum_r c_r h_r``, stored by its Hermite coefficients."""

    def __init__(self, coeffs: ArrayLike, normalize: bool = False, descriptor: Optional[str] = None) -> None:
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128)).copy()
        if c.ndim != 1 or len(c) == 0:
            raise DescriptorError("Window needs a non-empty one-dimensional list of Hermite coefficients")
        norm = float(np.sqrt(np.sum(np.abs(c) ** 2)))
        if norm == 0.0 or not math.isfinite(norm):
            raise DescriptorError("Window coefficients must have a finite non-zero norm")
        if normalize:
            c /= norm
        elif abs(norm - 1.0) > constants.NORM_TOLERANCE:
            raise DescriptorError(f"Window is not normalized: norm {norm!r}")
        c.setflags(write=False)
        self.__coeffs = c
        self.__normalization = norm if normalize else 1.0
        self.__descriptor = descriptor or "coeffs:" + ";".join(f"{v.real!r}{v.imag:+}j" for v in c)

    @classmethod
    def hermite(cls, r: int) -> "WindowSpec":
        if r < 0:
            raise DescriptorError(f"Hermite window index must be non-negative, got {r}")
        coeffs = np.zeros(r + 1, dtype=np.complex128)
        coeffs[r] = 1.0
        return cls(coeffs, descriptor=f"hermite:{r}")

    @property
    def coeffs(self) -> NDArray[np.complex128]:
        return self.__coeffs

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.__coeffs) ** 2)))

    @property
    def normalization(self) -> float:
        """Norm of the coefficients as given, before normalizing (1 unless ``normalize=True``)."""
        return self.__normalization

    @property
    def descriptor(self) -> str:
        return self.__descriptor

    @property
    def support(self) -> List[int]:
        return [int(r) for r in np.flatnonzero(self.__coeffs)]

    @property
    def pure_index(self) -> Optional[int]:
        support = self.support
        if len(support) == 1 and abs(abs(self.__coeffs[support[0]]) - 1.0) <= constants.NORM_TOLERANCE:
            return support[0]
        return None

    def __len__(self) -> int:
        return len(self.__coeffs)

    def __repr__(self) -> str:
        return f"WindowSpec({self.__descriptor})"


def parse_window_descriptor(descriptor: str) -> WindowSpec:
    kind, _, argument = descriptor.partition(":")
    if kind == constants.WindowKind.HERMITE.value:
        try:
            r = int(argument)
        except ValueError:
            raise DescriptorError(f"Invalid Hermite window `{descriptor}`, expected `hermite:<r>`") from None
        return WindowSpec.hermite(r)
    if kind == constants.WindowKind.FILE.value and argument:
        return load_window(argument)
    raise DescriptorError(f"Invalid window descriptor `{descriptor}`, expected `hermite:<r>` or `file:<path>`")


def load_window(path: str) -> WindowSpec:
    """Reads ``r real imag`` lines; the window is normalized and the applied factor recorded."""
    try:
        text = utils.slurp_file(path)
    except OSError as e:
        raise DescriptorError(f"Cannot read window file `{path}`: {e.strerror}") from None
    entries = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        fields = stripped.split()
        try:
            r, re_part, im_part = int(fields[0]), float(fields[1]), float(fields[2])
        except (ValueError, IndexError):
            raise DescriptorError(f"Window file `{path}`, line {line_number}: expected `r real imag`") from None
        if r < 0 or r in entries:
            raise DescriptorError(f"Window file `{path}`, line {line_number}: invalid or repeated index {r}")
        entries[r] = complex(re_part, im_part)
    if not entries:
        raise DescriptorError(f"Window file `{path}` has no coefficients")
    coeffs = np.zeros(max(entries) + 1, dtype=np.complex128)
    for r, value in entries.items():
        coeffs[r] = value
    window = WindowSpec(coeffs, normalize=True, descriptor=f"file:{path}")
    utils.debug(f"normalized by {window.normalization!r}")
    return window


def stft_hermite(j: int, r: int, p: PointLike) -> ComplexOrArray:
    z = as_complex(p)
    x, xi = np.real(z), np.imag(z)
    value = np.exp(-1j * math.pi * x * xi) * complex_hermite_weighted(j, r, np.conj(z))
    return complex(value) if np.ndim(value) == 0 else value


def stft_window(g: WindowSpec, j: int, p: PointLike) -> ComplexOrArray:
    """``V_g h_j`` at ``p``; antilinear in the window."""
    z = as_complex(p)
    value: ComplexOrArray = np.zeros(np.shape(z), dtype=np.complex128)
    for r in g.support:
        value = value + np.conj(g.coeffs[r]) * stft_hermite(j, r, z)
    return complex(value) if np.ndim(value) == 0 else value


def stft_basis(g: WindowSpec, size: int, z: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Matrix ``S[n, k] = V_g h_k(z_n)`` for ``k < size``."""
    z = np.asarray(z, dtype=np.complex128).ravel()
    zbar = np.conj(z)
    phase = np.exp(-1j * math.pi * z.real * z.imag)
    basis = np.zeros((len(z), size), dtype=np.complex128)
    for r in g.support:
        weight = np.conj(g.coeffs[r])
        for k in range(size):
            basis[:, k] += weight * complex_hermite_weighted(k, r, zbar)
    return basis * phase[:, None]


def _effective_half_width(length: int) -> float:
    # turning point of h_{length-1} plus a Gaussian tail
    return math.sqrt((2 * length - 1) / (2 * math.pi)) + 4.0


def _series(coeffs: NDArray[np.complex128], t: NDArray[np.float64]) -> NDArray[np.complex128]:
    rows = hermite_functions(len(coeffs) - 1, t)
    return np.asarray(np.tensordot(coeffs, rows, axes=1), dtype=np.complex128)


def stft_numeric(g: WindowSpec, f: Union[WindowSpec, ArrayLike], p: PointLike,
                 shift: Optional[PhasePoint] = None, order: Optional[int] = None) -> complex:
    """Brute-force ``V_g f(p)`` by Gauss-Legendre quadrature of the defining integral.

    ``f`` is a Hermite coefficient vector; ``shift = w`` replaces ``f`` by the time-frequency
    shift ``pi(w) f(t) = exp(2 pi i xi_w t) f(t - x_w)``. The result is taken at ``order`` and
    at twice that order, and a warning is emitted when the two differ by more than 1e-8.
    """
    f_coeffs = f.coeffs if isinstance(f, WindowSpec) else np.atleast_1d(np.asarray(f, dtype=np.complex128))
    z = complex(as_complex(p))  # type: ignore[arg-type]
    x, xi = z.real, z.imag
    w = shift or PhasePoint(0.0, 0.0)
    half_f, half_g = _effective_half_width(len(f_coeffs)), _effective_half_width(len(g))
    lo, hi = max(w.x - half_f, x - half_g), min(w.x + half_f, x + half_g)
    if lo >= hi:
        return 0j
    if order is None:
        order = 64 + 8 * (len(f_coeffs) + len(g)) + int(math.ceil(4 * (abs(xi) + abs(w.xi)) * (hi - lo)))

    def integrate(n: int) -> complex:
        rule = gauss_legendre(n, lo, hi)
        t = rule.nodes.astype(np.float64)
        f_values = _series(f_coeffs, t - w.x) * np.exp(2j * math.pi * w.xi * t)
        g_values = np.conj(_series(g.coeffs, t - x))
        return complex(np.sum(rule.weights * f_values * g_values * np.exp(-2j * math.pi * xi * t)))

    coarse, fine = integrate(order), integrate(2 * order)
    if abs(fine - coarse) > constants.STFT_ORACLE_TOLERANCE:
        utils.warn(f"STFT quadrature at z = {z!r} did not settle: order doubling changed the value by {abs(fine - coarse):.3e}")
    return fine


def ambiguity(g: WindowSpec, w: PointLike) -> ComplexOrArray:
    """``V_g g(w)``."""
    z = as_complex(w)
    value: ComplexOrArray = np.zeros(np.shape(z), dtype=np.complex128)
    for j in g.support:
        value = value + g.coeffs[j] * stft_window(g, j, z)
    return complex(value) if np.ndim(value) == 0 else value


def reproducing_kernel(g: WindowSpec, p: PointLike, q: PointLike) -> ComplexOrArray:
    """``K^g(p, q) = <pi(q) g, pi(p) g> = exp(-2 pi i x_q (xi_p - xi_q)) V_g g(p - q)``."""
    zp, zq = as_complex(p), as_complex(q)
    value = np.exp(-2j * math.pi * np.real(zq) * (np.imag(zp) - np.imag(zq))) * ambiguity(g, np.subtract(zp, zq))
    return complex(value) if np.ndim(value) == 0 else value


def gauge_renormalize(k: ComplexOrArray, p: PointLike, q: PointLike) -> ComplexOrArray:
    """Multiplies ``k = K(conj p, conj q)`` by ``exp(i pi (x_q xi_q - x_p xi_p))``."""
    zp, zq = as_complex(p), as_complex(q)
    value = np.exp(1j * math.pi * (np.real(zq) * np.imag(zq) - np.real(zp) * np.imag(zp))) * k
    return complex(value) if np.ndim(value) == 0 else value


def rotate_coefficients(coeffs: ArrayLike, theta: float) -> NDArray[np.complex128]:
    c = np.atleast_1d(np.asarray(coeffs, dtype=np.complex128))
    return np.asarray(c * np.exp(1j * theta * np.arange(len(c))), dtype=np.complex128)


def metaplectic_rotate(g: WindowSpec, theta: float) -> WindowSpec:
    return WindowSpec(rotate_coefficients(g.coeffs, theta), descriptor=f"{g.descriptor}@rot{theta!r}")


def rotate_point(p: PointLike, theta: float) -> ComplexOrArray:
    """``R_theta p``, the counterclockwise rotation by ``theta``."""
    value = np.exp(1j * theta) * np.asarray(as_complex(p))
    return complex(value) if np.ndim(value) == 0 else value
