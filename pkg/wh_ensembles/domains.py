"""Phase-plane domains: measure, perimeter, membership and quadrature."""

import math
from abc import ABC, abstractmethod
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from . import constants, utils
from .exceptions import (ArgumentDomainError, DegeneratePolygonError,
                         DescriptorError)
from .specfun import QuadratureRule, gauss_legendre, periodic_trapezoid

BoundingBox = Tuple[float, float, float, float]

# Relative slack when rounding a measure up, so that areas such as pi * (sqrt(10 / pi))^2 count as 10.
_CEIL_SLACK = 1e-10


class PhaseDomain(ABC):

    @property
    @abstractmethod
    def measure(self) -> float:
        pass

    @property
    @abstractmethod
    def perimeter(self) -> float:
        pass

    @property
    @abstractmethod
    def descriptor(self) -> str:
        pass

    @abstractmethod
    def contains(self, z: ArrayLike) -> NDArray[np.bool_]:
        pass

    @abstractmethod
    def quadrature(self, order: int, angular_order: Optional[int] = None) -> QuadratureRule:
        pass

    @abstractmethod
    def bounding_box(self) -> BoundingBox:
        pass

    @property
    def polar_radii(self) -> Optional[Tuple[float, float]]:
        """Inner and outer radius for domains bounded by circles centered at the origin."""
        return None

    @property
    def outer_radius(self) -> float:
        xmin, xmax, ximin, ximax = self.bounding_box()
        return max(math.hypot(x, xi) for x in (xmin, xmax) for xi in (ximin, ximax))

    def scaled(self, m: float) -> "PhaseDomain":
        return Scaled(self, m)

    def __repr__(self) -> str:
        return self.descriptor


def _polar_rule(r0: float, r1: float, order: int, angular_order: Optional[int]) -> QuadratureRule:
    radial = gauss_legendre(order, r0, r1)
    # a multiple of 4 keeps the angular nodes symmetric under reflections in both axes
    n_angles = 4 * math.ceil((angular_order or constants.default_angular_order(order)) / 4)
    angular = periodic_trapezoid(n_angles)
    rho, phi = np.meshgrid(radial.nodes, angular.nodes, indexing="ij")
    weights = np.outer(radial.weights * radial.nodes, angular.weights)
    return QuadratureRule(
        nodes=(rho * np.exp(1j * phi)).ravel(),
        weights=weights.ravel(),
        degree=-1,
        region="polar",
        factors=(radial, angular))


class Disk(PhaseDomain):

    def __init__(self, radius: float, area: Optional[float] = None) -> None:
        if not radius >= 0 or not math.isfinite(radius):
            raise DescriptorError(f"Disk radius must be a finite non-negative number, got {radius}")
        self.__radius = float(radius)
        self.__area = math.pi * self.__radius ** 2 if area is None else float(area)

    @classmethod
    def of_area(cls, area: float) -> "Disk":
        if not area >= 0:
            raise DescriptorError(f"Disk area must be non-negative, got {area}")
        return cls(math.sqrt(area / math.pi), area=area)

    @property
    def radius(self) -> float:
        return self.__radius

    @property
    def measure(self) -> float:
        return self.__area

    @property
    def perimeter(self) -> float:
        return 2 * math.pi * self.__radius

    @property
    def descriptor(self) -> str:
        return f"disk:{self.__radius!r}"

    @property
    def polar_radii(self) -> Optional[Tuple[float, float]]:
        return 0.0, self.__radius

    def contains(self, z: ArrayLike) -> NDArray[np.bool_]:
        return np.asarray(np.abs(np.asarray(z)) < self.__radius)

    def quadrature(self, order: int, angular_order: Optional[int] = None) -> QuadratureRule:
        return _polar_rule(0.0, self.__radius, order, angular_order)

    def bounding_box(self) -> BoundingBox:
        return -self.__radius, self.__radius, -self.__radius, self.__radius


class Annulus(PhaseDomain):

    def __init__(self, inner_radius: float, outer_radius: float) -> None:
        if not 0 <= inner_radius <= outer_radius or not math.isfinite(outer_radius):
            raise DescriptorError(f"Annulus needs 0 <= r0 <= R, got r0={inner_radius}, R={outer_radius}")
        self.__r0 = float(inner_radius)
        self.__r1 = float(outer_radius)

    @property
    def measure(self) -> float:
        return math.pi * (self.__r1 ** 2 - self.__r0 ** 2)

    @property
    def perimeter(self) -> float:
        return 2 * math.pi * (self.__r0 + self.__r1)

    @property
    def descriptor(self) -> str:
        return f"annulus:{self.__r0!r},{self.__r1!r}"

    @property
    def polar_radii(self) -> Optional[Tuple[float, float]]:
        return self.__r0, self.__r1

    def contains(self, z: ArrayLike) -> NDArray[np.bool_]:
        modulus = np.abs(np.asarray(z))
        return np.asarray((modulus > self.__r0) & (modulus < self.__r1))

    def quadrature(self, order: int, angular_order: Optional[int] = None) -> QuadratureRule:
        return _polar_rule(self.__r0, self.__r1, order, angular_order)

    def bounding_box(self) -> BoundingBox:
        return -self.__r1, self.__r1, -self.__r1, self.__r1


class Rectangle(PhaseDomain):
    """``[a, b] x [c, d]`` in the ``(x, xi)`` plane."""

    def __init__(self, a: float, b: float, c: float, d: float) -> None:
        if not (a <= b and c <= d) or not all(map(math.isfinite, (a, b, c, d))):
            raise DescriptorError(f"Rectangle needs a <= b and c <= d, got {a}, {b}, {c}, {d}")
        self.__corners = (float(a), float(b), float(c), float(d))

    @property
    def measure(self) -> float:
        a, b, c, d = self.__corners
        return (b - a) * (d - c)

    @property
    def perimeter(self) -> float:
        a, b, c, d = self.__corners
        return 2 * (b - a) + 2 * (d - c)

    @property
    def descriptor(self) -> str:
        return "rect:" + ",".join(repr(v) for v in self.__corners)

    def contains(self, z: ArrayLike) -> NDArray[np.bool_]:
        a, b, c, d = self.__corners
        z = np.asarray(z)
        return np.asarray((z.real > a) & (z.real < b) & (z.imag > c) & (z.imag < d))

    def quadrature(self, order: int, angular_order: Optional[int] = None) -> QuadratureRule:
        a, b, c, d = self.__corners
        x_rule, xi_rule = gauss_legendre(order, a, b), gauss_legendre(order, c, d)
        x, xi = np.meshgrid(x_rule.nodes, xi_rule.nodes, indexing="ij")
        return QuadratureRule(
            nodes=(x + 1j * xi).ravel(),
            weights=np.outer(x_rule.weights, xi_rule.weights).ravel(),
            degree=min(x_rule.degree, xi_rule.degree),
            region="cartesian",
            factors=(x_rule, xi_rule))

    def bounding_box(self) -> BoundingBox:
        return self.__corners


def _signed_area(vertices: NDArray[np.float64]) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _cross(o: NDArray[np.float64], a: NDArray[np.float64], b: NDArray[np.float64]) -> float:
    return float((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]))


def _segments_intersect(p1: NDArray[np.float64], p2: NDArray[np.float64],
                        q1: NDArray[np.float64], q2: NDArray[np.float64]) -> bool:
    d1, d2 = _cross(q1, q2, p1), _cross(q1, q2, p2)
    d3, d4 = _cross(p1, p2, q1), _cross(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and 0 not in (d1, d2, d3, d4):
        return True

    def on_segment(a: NDArray[np.float64], b: NDArray[np.float64], p: NDArray[np.float64]) -> bool:
        return bool(min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))

    return ((d1 == 0 and on_segment(q1, q2, p1)) or (d2 == 0 and on_segment(q1, q2, p2)) or
            (d3 == 0 and on_segment(p1, p2, q1)) or (d4 == 0 and on_segment(p1, p2, q2)))


def _point_in_triangle(p: NDArray[np.float64], a: NDArray[np.float64],
                       b: NDArray[np.float64], c: NDArray[np.float64]) -> bool:
    return _cross(a, b, p) >= 0 and _cross(b, c, p) >= 0 and _cross(c, a, p) >= 0


def _ear_clipping(vertices: NDArray[np.float64]) -> List[Tuple[int, int, int]]:
    # counterclockwise input; convex polygons come out as a fan from vertex 0
    remaining = list(range(len(vertices)))
    triangles: List[Tuple[int, int, int]] = []
    while len(remaining) > 3:
        for position in list(range(1, len(remaining))) + [0]:
            i, j, k = remaining[position - 1], remaining[position], remaining[(position + 1) % len(remaining)]
            a, b, c = vertices[i], vertices[j], vertices[k]
            if _cross(a, b, c) <= 0:
                continue
            others = (vertices[m] for m in remaining if m not in (i, j, k))
            if any(_point_in_triangle(p, a, b, c) for p in others):
                continue
            triangles.append((i, j, k))
            del remaining[position]
            break
        else:
            raise DegeneratePolygonError("Polygon cannot be triangulated (collinear or self-touching vertices)")
    triangles.append((remaining[0], remaining[1], remaining[2]))
    return triangles


class Polygon(PhaseDomain):

    def __init__(self, vertices: ArrayLike) -> None:
        v = np.asarray(vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise DegeneratePolygonError("Polygon needs at least three `x y` vertices")
        if np.allclose(v[0], v[-1]) and len(v) > 3:
            v = v[:-1]
        if np.any(np.all(v == np.roll(v, -1, axis=0), axis=1)):
            raise DegeneratePolygonError("Polygon has repeated consecutive vertices")
        area = _signed_area(v)
        if area == 0.0:
            raise DegeneratePolygonError("Polygon has zero area")
        if area < 0:
            v = v[::-1].copy()
        n = len(v)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if _segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                    raise DegeneratePolygonError(f"Polygon edges {i} and {j} intersect")
        v.setflags(write=False)
        self.__vertices = v
        self.__triangles = _ear_clipping(v)

    @property
    def vertices(self) -> NDArray[np.float64]:
        return self.__vertices

    @property
    def measure(self) -> float:
        return abs(_signed_area(self.__vertices))

    @property
    def perimeter(self) -> float:
        edges = np.roll(self.__vertices, -1, axis=0) - self.__vertices
        return float(np.sum(np.hypot(edges[:, 0], edges[:, 1])))

    @property
    def descriptor(self) -> str:
        return "poly:" + ";".join(f"{x!r},{y!r}" for x, y in self.__vertices)

    def contains(self, z: ArrayLike) -> NDArray[np.bool_]:
        z = np.asarray(z)
        x, y = z.real, z.imag
        inside = np.zeros(np.shape(z), dtype=bool)
        v = self.__vertices
        for (x1, y1), (x2, y2) in zip(v, np.roll(v, -1, axis=0)):
            crosses = (y1 > y) != (y2 > y)
            with np.errstate(divide="ignore", invalid="ignore"):
                x_at_y = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            inside ^= crosses & (x < x_at_y)
        return inside

    def quadrature(self, order: int, angular_order: Optional[int] = None) -> QuadratureRule:
        u_rule, v_rule = gauss_legendre(order, 0.0, 1.0), gauss_legendre(order, 0.0, 1.0)
        u, v = np.meshgrid(u_rule.nodes, v_rule.nodes, indexing="ij")
        w_unit = np.outer(u_rule.weights * u_rule.nodes, v_rule.weights).ravel()
        u, v = u.ravel(), v.ravel()
        nodes, weights = [], []
        for i, j, k in self.__triangles:
            a, b, c = (complex(*self.__vertices[m]) for m in (i, j, k))
            twice_area = 2 * abs(_signed_area(self.__vertices[[i, j, k]]))
            nodes.append(a + u * ((b - a) + v * (c - b)))
            weights.append(twice_area * w_unit)
        return QuadratureRule(
            nodes=np.concatenate(nodes),
            weights=np.concatenate(weights),
            degree=-1,
            region="triangulated")

    def bounding_box(self) -> BoundingBox:
        v = self.__vertices
        return float(v[:, 0].min()), float(v[:, 0].max()), float(v[:, 1].min()), float(v[:, 1].max())


class Scaled(PhaseDomain):
    """``m * base``; quadrature nodes are the base nodes times ``m``, weights times ``m^2``."""

    def __init__(self, base: PhaseDomain, m: float) -> None:
        if not m > 0 or not math.isfinite(m):
            raise DescriptorError(f"Scale factor must be positive, got {m}")
        self.__base = base
        self.__m = float(m)

    @property
    def base(self) -> PhaseDomain:
        return self.__base

    @property
    def factor(self) -> float:
        return self.__m

    @property
    def measure(self) -> float:
        return self.__m ** 2 * self.__base.measure

    @property
    def perimeter(self) -> float:
        return self.__m * self.__base.perimeter

    @property
    def descriptor(self) -> str:
        return f"scaled:{self.__m!r}:{self.__base.descriptor}"

    @property
    def polar_radii(self) -> Optional[Tuple[float, float]]:
        radii = self.__base.polar_radii
        return None if radii is None else (self.__m * radii[0], self.__m * radii[1])

    def contains(self, z: ArrayLike) -> NDArray[np.bool_]:
        return self.__base.contains(np.asarray(z) / self.__m)

    def quadrature(self, order: int, angular_order: Optional[int] = None) -> QuadratureRule:
        rule = self.__base.quadrature(order, angular_order)
        m = self.__m
        factors = rule.factors
        if rule.region == "polar":
            radial, angular = factors
            factors = (radial._replace(nodes=m * radial.nodes, weights=m * radial.weights), angular)
        elif rule.region == "cartesian":
            factors = tuple(f._replace(nodes=m * f.nodes, weights=m * f.weights) for f in factors)
        return rule._replace(nodes=m * rule.nodes, weights=m ** 2 * rule.weights, factors=factors)

    def bounding_box(self) -> BoundingBox:
        xmin, xmax, ximin, ximax = self.__base.bounding_box()
        m = self.__m
        return m * xmin, m * xmax, m * ximin, m * ximax


def n_omega(d: PhaseDomain) -> int:
    """The least integer not below ``|Omega|``, the rank of the finite ensemble on ``Omega``."""
    measure = d.measure
    if not measure > 0:
        raise ArgumentDomainError(f"Domain `{d.descriptor}` has zero measure")
    return max(1, math.ceil(measure - _CEIL_SLACK * max(1.0, measure)))


def domain_quadrature(d: PhaseDomain, order: int, angular_order: Optional[int] = None) -> QuadratureRule:
    if order < 1:
        raise ArgumentDomainError(f"Quadrature order must be positive, got {order}")
    if not d.measure > 0:
        raise ArgumentDomainError(f"Domain `{d.descriptor}` has empty interior")
    rule = d.quadrature(order, angular_order)
    utils.debug(f"{rule.size} nodes, weight sum {float(np.sum(rule.weights))!r}")
    return rule


def _parse_numbers(descriptor: str, argument: str, count: int) -> List[float]:
    try:
        values = utils.parse_float_list(argument)
    except ValueError:
        values = []
    if len(values) != count or not all(map(math.isfinite, values)):
        raise DescriptorError(f"Invalid domain descriptor `{descriptor}`: expected {count} comma-separated numbers")
    return values


def load_polygon(path: str) -> Polygon:
    try:
        vertices = np.loadtxt(path, dtype=np.float64, comments="#", ndmin=2)
    except (OSError, ValueError) as e:
        raise DescriptorError(f"Cannot read polygon file `{path}`: {e}") from None
    return Polygon(vertices)


def parse_domain_descriptor(descriptor: str) -> PhaseDomain:
    kind, _, argument = descriptor.partition(":")
    if kind == constants.ShapeKind.DISK.value:
        return Disk(*_parse_numbers(descriptor, argument, 1))
    if kind == constants.ShapeKind.ANNULUS.value:
        return Annulus(*_parse_numbers(descriptor, argument, 2))
    if kind == constants.ShapeKind.RECTANGLE.value:
        return Rectangle(*_parse_numbers(descriptor, argument, 4))
    if kind == constants.ShapeKind.POLYGON.value and argument.startswith("@"):
        return load_polygon(argument[1:])
    if kind == constants.ShapeKind.POLYGON.value and argument:
        pairs = [_parse_numbers(descriptor, pair, 2) for pair in argument.split(";")]
        return Polygon(pairs)
    if kind == constants.ShapeKind.SCALED.value:
        factor, _, inner = argument.partition(":")
        return Scaled(parse_domain_descriptor(inner), *_parse_numbers(descriptor, factor, 1))
    raise DescriptorError(
        f"Invalid domain descriptor `{descriptor}`, expected one of "
        "`disk:R`, `annulus:r0,R`, `rect:a,b,c,d`, `poly:@file`, `scaled:m:<descriptor>`")


def disks_of_areas(areas: Sequence[float]) -> List[Disk]:
    return [Disk.of_area(area) for area in areas]
