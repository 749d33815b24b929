import math

import numpy as np
import pytest
from pytest_mock import MockerFixture
from scipy import special

from wh_ensembles.domains import Disk
from wh_ensembles.exceptions import ArgumentDomainError
from wh_ensembles.specfun import (complex_hermite_weighted, gauss_legendre,
                                  hermite_function, hermite_functions,
                                  laguerre, laguerre_scaled,
                                  periodic_trapezoid, regularized_lower_gamma)

from .base_test import BaseTest


class TestQuadrature:

    def test_gauss_legendre_is_exact_up_to_its_degree(self) -> None:
        rule = gauss_legendre(3, 0.0, 2.0)
        assert rule.degree == 5
        assert rule.integrate(lambda x: x ** 5) == pytest.approx(2 ** 6 / 6, rel=1e-13)
        assert np.all(rule.weights > 0)

    def test_gauss_legendre_rejects_bad_arguments(self) -> None:
        with pytest.raises(ArgumentDomainError):
            gauss_legendre(0, 0.0, 1.0)
        with pytest.raises(ArgumentDomainError):
            gauss_legendre(4, 1.0, 1.0)

    def test_periodic_trapezoid(self) -> None:
        rule = periodic_trapezoid(8)
        assert rule.integrate(lambda t: np.ones_like(t)) == pytest.approx(2 * math.pi)
        assert abs(rule.integrate(lambda t: np.cos(3 * t))) < 1e-13
        assert abs(rule.integrate(lambda t: np.sin(7 * t) * np.cos(2 * t))) < 1e-13


class TestLaguerre(BaseTest):

    def test_low_degree_closed_forms(self) -> None:
        x = np.linspace(0.0, 7.0, 11)
        assert np.allclose(laguerre(2, 0, x), 1 - 2 * x + x ** 2 / 2, rtol=1e-13, atol=1e-13)
        assert laguerre(3, 1, 0.0) == pytest.approx(4.0)
        assert laguerre(1, 0, 2.0) == pytest.approx(-1.0)
        assert laguerre(2, 1, 1.0) == pytest.approx(0.5)
        # negative alpha is allowed as long as j + alpha >= 0
        assert np.allclose(laguerre(1, -1, x), -x, atol=1e-14)

    def test_recurrence_matches_scipy(self) -> None:
        x = np.array([0.0, 0.4, 1.3, 9.0, 30.0])
        assert np.allclose(laguerre(25, 0.5, x), special.eval_genlaguerre(25, 0.5, x), rtol=1e-8)
        assert laguerre(40, 0, 0.0) == pytest.approx(1.0)

    def test_scaled_values_stay_finite(self) -> None:
        mantissa, log_scale = laguerre_scaled(400, 3, 5000.0)
        assert math.isfinite(float(mantissa))
        assert float(log_scale) > 0

    def test_rejects_outside_domain(self) -> None:
        with pytest.raises(ArgumentDomainError):
            laguerre(-1, 0, 1.0)
        with pytest.raises(ArgumentDomainError):
            laguerre(0, -1, 1.0)

    def test_explicit_sum_agrees_with_recurrence(self, mocker: MockerFixture) -> None:
        x = np.linspace(0.0, 4.0, 9)
        degrees = range(1, 13)
        explicit = {(j, alpha): laguerre(j, alpha, x) for j in degrees for alpha in (0, 2.5)}
        self.patch_symbol(mocker, "wh_ensembles.constants.LAGUERRE_EXPLICIT_SUM_MAX_DEGREE", 0)
        for (j, alpha), value in explicit.items():
            assert np.allclose(laguerre(j, alpha, x), value, rtol=1e-10, atol=1e-10), (j, alpha)


class TestHermiteFunctions:

    def test_orthonormal(self) -> None:
        rule = gauss_legendre(200, -8.0, 8.0)
        rows = hermite_functions(12, rule.nodes)
        gram = (rows * rule.weights) @ rows.T
        assert np.allclose(gram, np.eye(13), atol=1e-10)

    def test_gaussian_normalization(self) -> None:
        assert hermite_function(0, 0.0) == pytest.approx(2 ** 0.25)
        assert hermite_function(3, 0.0) == pytest.approx(0.0, abs=1e-15)


class TestComplexHermite:

    def test_analytic_level(self) -> None:
        z = 0.3 + 0.4j
        expected = math.sqrt(math.pi ** 3 / math.factorial(3)) * z ** 3 * math.exp(-math.pi * abs(z) ** 2 / 2)
        assert complex_hermite_weighted(3, 0, z) == pytest.approx(expected, rel=1e-12)

    def test_index_swap_conjugates(self) -> None:
        z = np.array([0.2 - 0.9j, 1.1 + 0.3j, -0.7 - 0.1j])
        assert np.allclose(complex_hermite_weighted(1, 3, z),
                           (-1) ** 2 * np.conj(complex_hermite_weighted(3, 1, z)), atol=1e-14)
        assert np.allclose(complex_hermite_weighted(0, 1, z),
                           -np.conj(complex_hermite_weighted(1, 0, z)), atol=1e-14)

    @pytest.mark.parametrize("j,r", [(3, 2), (0, 4), (7, 0)])
    def test_unit_norm(self, j: int, r: int) -> None:
        rule = gauss_legendre(160, 0.0, 6.0)
        rho = rule.nodes
        norm = float(np.sum(2 * math.pi * rule.weights * rho * np.abs(complex_hermite_weighted(j, r, rho)) ** 2))
        assert norm == pytest.approx(1.0, abs=1e-12)

    def test_rejects_negative_indices(self) -> None:
        with pytest.raises(ArgumentDomainError):
            complex_hermite_weighted(-1, 0, 1j)

    def test_conjugation_symmetry(self) -> None:
        rng = np.random.default_rng(3)
        z = 5.0 * np.sqrt(rng.uniform(size=100)) * np.exp(2j * math.pi * rng.uniform(size=100))
        for j in range(65):
            for r in range(9):
                swapped = (-1) ** (j - r) * np.conj(complex_hermite_weighted(r, j, z))
                assert np.allclose(complex_hermite_weighted(j, r, z), swapped, rtol=1e-10, atol=0), (j, r)

    def test_orthonormal_up_to_index_twelve(self) -> None:
        rule = Disk(6.0).quadrature(120, 64)
        nodes = np.asarray(rule.nodes, dtype=np.complex128)
        pairs = [(j, r) for j in range(13) for r in range(13)]
        values = np.stack([complex_hermite_weighted(j, r, nodes) for j, r in pairs], axis=1)
        gram = values.T @ (rule.weights[:, None] * np.conj(values))
        assert np.allclose(gram, np.eye(len(pairs)), atol=1e-8)


class TestIncompleteGamma:

    def test_first_index(self) -> None:
        s = np.array([0.0, 0.5, 3.0])
        assert np.allclose(regularized_lower_gamma(0, s), 1 - np.exp(-s))

    def test_rejects_negative_argument(self) -> None:
        with pytest.raises(ArgumentDomainError):
            regularized_lower_gamma(2, -0.1)

    def test_closed_form_values(self) -> None:
        assert regularized_lower_gamma(0, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-14)
        assert regularized_lower_gamma(7, 0.0) == 0.0

    @pytest.mark.parametrize("j", [0, 3, 10, 40])
    def test_matches_direct_quadrature(self, j: int) -> None:
        for s in (0.5, 5.0, 30.0, 60.0):
            rule = gauss_legendre(200, 0.0, s)
            direct = rule.integrate(lambda t: np.exp(j * np.log(t) - t - special.gammaln(j + 1)))
            assert abs(regularized_lower_gamma(j, s) - direct) < 1e-10, s

    def test_decreasing_in_index(self) -> None:
        s = np.linspace(0.0, 40.0, 81)
        values = np.array([regularized_lower_gamma(j, s) for j in range(21)])
        assert np.all(np.diff(values, axis=0) <= 0)
        assert np.all(np.diff(values, axis=1) >= 0)
