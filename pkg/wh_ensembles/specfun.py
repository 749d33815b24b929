"""Special functions and quadrature rules.

Everything here is a pure function of its arguments and vectorizes over the
real (``x``, ``t``, ``s``) or complex (``z``) argument.
"""

import math
from typing import Callable, NamedTuple, Tuple, Union

import numpy as np
from numpy.polynomial import legendre, polynomial
from numpy.typing import ArrayLike, NDArray
from scipy import special

from . import constants
from .exceptions import ArgumentDomainError

RealOrArray = Union[float, NDArray[np.float64]]
ComplexOrArray = Union[complex, NDArray[np.complex128]]

# Rescale the running Laguerre values once they exceed this magnitude.
_RESCALE_THRESHOLD = 1e100


class QuadratureRule(NamedTuple):
    """Nodes and strictly positive weights.

    1-D rules have real nodes; rules over the phase plane have complex nodes ``x + i*xi``.
    ``degree`` is the polynomial degree integrated exactly (-1 when not meaningful, e.g. for
    the 2-D rules), ``factors`` holds the 1-D rules a tensor product rule was built from.
    """
    nodes: NDArray[np.generic]
    weights: NDArray[np.float64]
    degree: int
    region: str
    factors: Tuple['QuadratureRule', ...] = ()

    def integrate(self, f: Callable[[NDArray[np.generic]], ArrayLike]) -> float:
        return float(np.sum(self.weights * np.asarray(f(self.nodes))))

    @property
    def size(self) -> int:
        return len(self.weights)


def gauss_legendre(n: int, a: float, b: float) -> QuadratureRule:
    if n < 1:
        raise ArgumentDomainError(f"Gauss-Legendre rule needs at least one node, got n={n}")
    if not a < b:
        raise ArgumentDomainError(f"Gauss-Legendre interval must satisfy a < b, got [{a}, {b}]")
    x, w = legendre.leggauss(n)
    half = 0.5 * (b - a)
    return QuadratureRule(
        nodes=half * x + 0.5 * (a + b),
        weights=half * w,
        degree=2 * n - 1,
        region=f"[{a!r}, {b!r}]")


def periodic_trapezoid(n: int) -> QuadratureRule:
    """Equispaced rule on one period ``[0, 2*pi)``, offset by half a step.

    Exact for trigonometric polynomials of degree below ``n``; ``degree`` records that bound.
    """
    if n < 1:
        raise ArgumentDomainError(f"Periodic rule needs at least one node, got n={n}")
    step = 2.0 * math.pi / n
    return QuadratureRule(
        nodes=step * (np.arange(n) + 0.5),
        weights=np.full(n, step),
        degree=n - 1,
        region="periodic")


def _laguerre_coefficients(j: int, alpha: float) -> NDArray[np.float64]:
    i = np.arange(j + 1)
    return np.asarray((-1.0) ** i * special.binom(j + alpha, j - i) / special.factorial(i), dtype=np.float64)


def laguerre_scaled(j: int, alpha: float, x: RealOrArray) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Returns ``(m, log_scale)`` with ``L_j^alpha(x) = m * exp(log_scale)``.

    The split keeps high degrees at large ``x`` finite; callers fold ``log_scale``
    into other logarithmic factors (Gaussian weights, factorials) before exponentiating.
    """
    if j < 0:
        raise ArgumentDomainError(f"Laguerre degree must be non-negative, got j={j}")
    if j + alpha < 0:
        raise ArgumentDomainError(f"Laguerre polynomial needs j + alpha >= 0, got j={j}, alpha={alpha}")
    x = np.asarray(x, dtype=np.float64)
    log_scale = np.zeros_like(x)
    if j <= constants.LAGUERRE_EXPLICIT_SUM_MAX_DEGREE:
        return np.asarray(polynomial.polyval(x, _laguerre_coefficients(j, alpha)), dtype=np.float64), log_scale

    previous = np.ones_like(x)
    current = 1.0 + alpha - x
    for n in range(1, j):
        previous, current = current, ((2 * n + 1 + alpha - x) * current - (n + alpha) * previous) / (n + 1)
        magnitude = np.abs(current)
        scale = np.where(magnitude > _RESCALE_THRESHOLD, magnitude, 1.0)
        current = current / scale
        previous = previous / scale
        log_scale = log_scale + np.log(scale)
    return current, log_scale


def laguerre(j: int, alpha: float, x: RealOrArray) -> RealOrArray:
    mantissa, log_scale = laguerre_scaled(j, alpha, x)
    with np.errstate(over='ignore'):
        value = mantissa * np.exp(log_scale)
    return float(value) if np.ndim(value) == 0 else value


def hermite_functions(r_max: int, t: RealOrArray) -> NDArray[np.float64]:
    """Rows ``h_0(t), ..., h_{r_max}(t)`` of unit L2 norm, ``h_0(t) = 2^{1/4} e^{-pi t^2}``."""
    if r_max < 0:
        raise ArgumentDomainError(f"Hermite index must be non-negative, got r={r_max}")
    t = np.asarray(t, dtype=np.float64)
    u = math.sqrt(2.0 * math.pi) * t
    rows = np.empty((r_max + 1,) + t.shape, dtype=np.float64)
    rows[0] = 2.0 ** 0.25 * np.exp(-math.pi * t * t)
    if r_max >= 1:
        rows[1] = math.sqrt(2.0) * u * rows[0]
    for n in range(1, r_max):
        rows[n + 1] = math.sqrt(2.0 / (n + 1)) * u * rows[n] - math.sqrt(n / (n + 1)) * rows[n - 1]
    return rows


def hermite_function(r: int, t: RealOrArray) -> RealOrArray:
    value = hermite_functions(r, t)[r]
    return float(value) if np.ndim(value) == 0 else value


def complex_hermite_weighted(j: int, r: int, z: ComplexOrArray) -> ComplexOrArray:
    """``H_{j,r}(z, conj z) * exp(-pi |z|^2 / 2)``.

    Evaluated as modulus-times-phase: the logarithm of the factorial ratio, the power of
    ``pi |z|^2`` and the Gaussian are summed before exponentiating.
    """
    if j < 0 or r < 0:
        raise ArgumentDomainError(f"Complex Hermite indices must be non-negative, got j={j}, r={r}")
    z = np.asarray(z, dtype=np.complex128)
    s = math.pi * np.abs(z) ** 2
    if j >= r:
        degree, order, sign, direction = r, j - r, 1.0, 1.0
    else:
        degree, order, sign, direction = j, r - j, (-1.0) ** (r - j), -1.0
    mantissa, log_scale = laguerre_scaled(degree, order, s)
    log_modulus = (0.5 * (special.gammaln(degree + 1) - special.gammaln(degree + order + 1))
                   + 0.5 * special.xlogy(order, s) - 0.5 * s + log_scale)
    value = sign * mantissa * np.exp(log_modulus) * np.exp(1j * direction * order * np.angle(z))
    return complex(value) if np.ndim(value) == 0 else value


def regularized_lower_gamma(j: int, s: RealOrArray) -> RealOrArray:
    """``P(j+1, s)``, the probability that a Gamma(j+1) variable is at most ``s``."""
    if j < 0:
        raise ArgumentDomainError(f"Incomplete gamma index must be non-negative, got j={j}")
    s = np.asarray(s, dtype=np.float64)
    if np.any(s < 0):
        raise ArgumentDomainError("Incomplete gamma argument must be non-negative")
    value = special.gammainc(j + 1, s)
    return float(value) if np.ndim(value) == 0 else value
