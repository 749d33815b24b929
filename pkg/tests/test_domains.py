import math

import numpy as np
import pytest

from wh_ensembles.domains import (Annulus, Disk, Polygon, Rectangle, Scaled,
                                  disks_of_areas, domain_quadrature,
                                  load_polygon, n_omega,
                                  parse_domain_descriptor)
from wh_ensembles.exceptions import (ArgumentDomainError,
                                     DegeneratePolygonError, DescriptorError)

from .base_test import BaseTest

L_SHAPE = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]


class TestDisksAndAnnuli:

    def test_disk(self) -> None:
        d = Disk(2.0)
        assert d.measure == pytest.approx(4 * math.pi)
        assert d.perimeter == pytest.approx(4 * math.pi)
        assert d.polar_radii == (0.0, 2.0)
        assert list(d.contains(np.array([1.9, 2.0, 2.1j]))) == [True, False, False]

    def test_disk_quadrature(self) -> None:
        rule = domain_quadrature(Disk(1.5), 20, 16)
        assert rule.region == "polar"
        assert float(np.sum(rule.weights)) == pytest.approx(math.pi * 1.5 ** 2, rel=1e-13)
        assert rule.integrate(lambda z: np.abs(z) ** 2) == pytest.approx(math.pi * 1.5 ** 4 / 2, rel=1e-13)
        assert abs(rule.integrate(lambda z: np.real(z) * np.imag(z))) < 1e-13

    def test_area_rounding(self) -> None:
        assert n_omega(Disk.of_area(10)) == 10
        assert n_omega(Disk(math.sqrt(10 / math.pi))) == 10
        assert n_omega(Disk.of_area(10.2)) == 11
        assert n_omega(Disk.of_area(0.3)) == 1
        with pytest.raises(ArgumentDomainError):
            n_omega(Disk(0.0))
        assert [d.measure for d in disks_of_areas([1.0, 4.0])] == [1.0, 4.0]

    def test_annulus(self) -> None:
        a = Annulus(1.0, 2.0)
        assert a.measure == pytest.approx(3 * math.pi)
        assert a.perimeter == pytest.approx(6 * math.pi)
        assert list(a.contains(np.array([0.5, 1.5j, 2.5]))) == [False, True, False]
        assert float(np.sum(a.quadrature(16, 8).weights)) == pytest.approx(3 * math.pi)
        with pytest.raises(DescriptorError):
            Annulus(2.0, 1.0)


class TestRectanglesAndPolygons:

    def test_rectangle(self) -> None:
        r = Rectangle(0.0, 1.0, 0.0, 2.0)
        assert r.measure == 2.0
        assert r.perimeter == 6.0
        assert r.polar_radii is None
        assert r.quadrature(8).integrate(lambda z: np.real(z) ** 2) == pytest.approx(2 / 3)
        assert list(r.contains(np.array([0.5 + 1j, 0.0 + 1j, 1.5 + 1j]))) == [True, False, False]

    def test_polygon_orientation(self) -> None:
        clockwise = Polygon([(0, 0), (0, 1), (1, 1), (1, 0)])
        assert clockwise.measure == pytest.approx(1.0)
        assert clockwise.perimeter == pytest.approx(4.0)

    def test_non_convex_polygon(self) -> None:
        p = Polygon(L_SHAPE)
        assert p.measure == pytest.approx(3.0)
        rule = p.quadrature(6)
        assert float(np.sum(rule.weights)) == pytest.approx(3.0, rel=1e-12)
        # centroid of the L-shape is at (5/6, 5/6)
        assert rule.integrate(lambda z: np.real(z)) == pytest.approx(2.5, rel=1e-12)
        assert list(p.contains(np.array([0.5 + 1.5j, 1.5 + 1.5j, 1.5 + 0.5j]))) == [True, False, True]
        assert p.bounding_box() == (0.0, 2.0, 0.0, 2.0)

    def test_degenerate_polygons(self) -> None:
        with pytest.raises(DegeneratePolygonError):
            Polygon([(0, 0), (1, 1), (1, 0), (0, 1)])
        with pytest.raises(DegeneratePolygonError):
            Polygon([(0, 0), (1, 0), (2, 0)])
        with pytest.raises(DegeneratePolygonError):
            Polygon([(0, 0), (1, 0)])
        with pytest.raises(DegeneratePolygonError):
            Polygon([(0, 0), (1, 0), (1, 0), (0, 1)])

    def test_scaled(self) -> None:
        s = Scaled(Disk(1.0), 2.0)
        assert s.measure == pytest.approx(4 * math.pi)
        assert s.perimeter == pytest.approx(4 * math.pi)
        assert s.polar_radii == (0.0, 2.0)
        rule = s.quadrature(12, 8)
        assert float(np.sum(rule.weights)) == pytest.approx(4 * math.pi)
        assert float(np.sum(rule.factors[0].weights * rule.factors[0].nodes)) == pytest.approx(2.0)
        assert float(np.sum(Scaled(Polygon(L_SHAPE), 0.5).quadrature(4).weights)) == pytest.approx(0.75)


class TestDescriptors(BaseTest):

    def test_parse(self) -> None:
        assert isinstance(parse_domain_descriptor("disk:2"), Disk)
        assert parse_domain_descriptor("annulus:1,2").measure == pytest.approx(3 * math.pi)
        assert parse_domain_descriptor("rect:-1,1,0,3").measure == pytest.approx(6.0)
        assert parse_domain_descriptor("poly:0,0;1,0;0,1").measure == pytest.approx(0.5)
        assert parse_domain_descriptor("scaled:2:disk:1").measure == pytest.approx(4 * math.pi)

    def test_descriptor_round_trip_through_text(self) -> None:
        for descriptor in ["disk:2.0", "annulus:0.5,2.0", "rect:-1.0,1.0,0.0,3.0", "scaled:2.0:disk:1.0"]:
            assert parse_domain_descriptor(descriptor).descriptor == descriptor

    def test_polygon_file(self) -> None:
        path = self.sandbox_file("l.txt", "# L shape\n" + "".join(f"{x} {y}\n" for x, y in L_SHAPE))
        assert load_polygon(path).measure == pytest.approx(3.0)
        assert parse_domain_descriptor(f"poly:@{path}").measure == pytest.approx(3.0)
        with pytest.raises(DescriptorError):
            load_polygon("no/such/file")

    @pytest.mark.parametrize("descriptor", ["blob:1", "disk:a", "disk:1,2", "rect:1,0,0,1", "disk:-1", "scaled:0:disk:1", "poly:"])
    def test_invalid(self, descriptor: str) -> None:
        with pytest.raises(DescriptorError):
            parse_domain_descriptor(descriptor)

    def test_quadrature_order(self) -> None:
        with pytest.raises(ArgumentDomainError):
            domain_quadrature(Disk(1.0), 0)
