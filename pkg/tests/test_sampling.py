import math

import numpy as np
import pytest
from pytest_mock import MockerFixture
from scipy import optimize

from wh_ensembles.domains import Disk
from wh_ensembles.ensembles import IndexSet, ginibre_kernel, pure_poly_kernel
from wh_ensembles.exceptions import (ArgumentDomainError,
                                     InsufficientSamplesError,
                                     RejectionCapExceeded)
from wh_ensembles.sampling import (check_radial_densities, count_test,
                                   half_plane_count_test, hole_probability,
                                   hole_probability_test, kostlan_density,
                                   kostlan_density_squared,
                                   radii_distribution_test, radial_law,
                                   sample_dpp, sample_kostlan, sample_many,
                                   stream)
from wh_ensembles.specfun import gauss_legendre, regularized_lower_gamma
from wh_ensembles.toeplitz import mu_radial

from .base_test import BaseTest


class TestStreams:

    def test_streams_are_reproducible_and_distinct(self) -> None:
        assert stream(11, 2).random() == stream(11, 2).random()
        assert stream(11, 2).random() != stream(11, 3).random()
        assert stream(11, 2).random() != stream(11, 2, channel=1).random()
        assert stream(11, 2).random() != stream(12, 2).random()


class TestSequentialSampler(BaseTest):

    def test_sample_is_reproducible(self) -> None:
        k = ginibre_kernel(3)
        first, second = sample_dpp(k, 7, 4), sample_dpp(k, 7, 4)
        assert first.count == 3
        assert np.array_equal(first.points, second.points)
        assert (first.seed, first.index, first.kernel) == (7, 4, "ginibre:3")
        assert first.proposals >= 3
        assert len({complex(z) for z in first.points}) == 3
        assert np.all(np.abs(first.points) <= k.bounding_radius())
        assert first.phase_points()[0].z == first.points[0]

    def test_samples_do_not_depend_on_workers(self) -> None:
        k = pure_poly_kernel(1, 2)
        sequential = sample_many(k, 5, 6, workers=1)
        parallel = sample_many(k, 5, 6, workers=3)
        assert [s.index for s in parallel] == list(range(6))
        for a, b in zip(sequential, parallel):
            assert np.array_equal(a.points, b.points)

    def test_negative_count(self) -> None:
        with pytest.raises(ArgumentDomainError):
            sample_many(ginibre_kernel(1), 5, -1)

    def test_rejection_cap(self, mocker: MockerFixture) -> None:
        self.patch_symbol(mocker, "wh_ensembles.constants.REJECTION_CAP", 0)
        with pytest.raises(RejectionCapExceeded) as e:
            sample_dpp(ginibre_kernel(2), 1)
        assert e.value.point_index == 0
        assert e.value.accepted_so_far == 0


class TestRadialLaws:

    @pytest.mark.parametrize("r,j", [(0, 3), (1, 2), (2, 0), (3, 5)])
    def test_density_forms_agree(self, r: int, j: int) -> None:
        assert check_radial_densities(r, j) < 1e-9

    def test_densities_vanish_at_the_origin(self) -> None:
        assert kostlan_density(0, 2, 0.0) == 0.0
        assert kostlan_density_squared(1, 1, -1.0) == 0.0

    def test_gaussian_window_laws_are_gamma(self) -> None:
        law = radial_law(0, 2)
        x = np.array([0.3, 0.8, 1.5])
        assert np.allclose(law.cdf(x), regularized_lower_gamma(2, math.pi * x ** 2), atol=1e-10)
        assert np.allclose(law.ppf(law.cdf(x)), x, atol=1e-8)

    @pytest.mark.parametrize("r,j", [(1, 0), (1, 3), (2, 1)])
    def test_survival_bridges_to_radial_eigenvalues(self, r: int, j: int) -> None:
        law = radial_law(r, j)
        assert law.cdf_table[-1] == pytest.approx(1.0, abs=1e-9)
        assert law.survival(0.8) == pytest.approx(1 - mu_radial(r, j, 0.8), abs=1e-9)
        assert law.cdf(law.ppf(0.5)) == pytest.approx(0.5, abs=1e-9)
        assert isinstance(law.cdf(0.3), float)
        assert law.cdf(np.array([[0.1, 0.2]])).shape == (1, 2)

    def test_independent_radii(self) -> None:
        radii = sample_kostlan(1, IndexSet.first(3), 9, 2)
        assert radii.shape == (3,)
        assert np.all(radii > 0)
        assert np.array_equal(radii, sample_kostlan(1, IndexSet.first(3), 9, 2))

    def test_hole_probability(self) -> None:
        radius = 0.6
        expected = math.prod(1 - regularized_lower_gamma(j, math.pi * radius ** 2) for j in range(3))
        assert hole_probability(0, IndexSet.first(3), radius) == pytest.approx(expected, abs=1e-9)
        with pytest.raises(ArgumentDomainError):
            hole_probability(0, IndexSet.first(3), 0.0)

    @pytest.mark.parametrize("j", [0, 1, 4])
    def test_mean_squared_radius_of_gaussian_level(self, j: int) -> None:
        rule = gauss_legendre(200, 0.0, 40.0)
        y = np.asarray(rule.nodes, dtype=np.float64)
        assert float(np.sum(rule.weights * y * kostlan_density_squared(0, j, y))) == pytest.approx((j + 1) / math.pi, rel=1e-10)


class TestGoodnessOfFit(BaseTest):

    def test_radii_test_needs_enough_samples(self) -> None:
        samples = sample_many(ginibre_kernel(2), 3, 10)
        with pytest.raises(InsufficientSamplesError):
            radii_distribution_test(samples, 0, IndexSet.first(2))

    @pytest.mark.slow
    def test_ginibre_radii_match_independent_laws(self) -> None:
        samples = sample_many(ginibre_kernel(3), 2024, 1000)
        report = radii_distribution_test(samples, 0, IndexSet.first(3))
        assert len(report.rows) == 8
        assert sum(row.observed for row in report.rows) == 3000
        assert sum(row.expected for row in report.rows) == pytest.approx(3000.0, abs=1e-6)
        assert report.degrees_of_freedom == 7
        assert sum(row.passed for row in report.rows) >= 6
        assert report.p_value > 1e-4

    @pytest.mark.slow
    def test_radii_of_the_wrong_level_are_rejected(self) -> None:
        samples = sample_many(pure_poly_kernel(1, 3), 2024, 1000)
        report = radii_distribution_test(samples, 0, IndexSet.first(3))
        assert not report.passed
        assert report.p_value < 1e-6

    @pytest.mark.slow
    def test_level_one_hole_probabilities(self) -> None:
        indices = IndexSet.first(2)
        samples = sample_many(pure_poly_kernel(1, 2), 99, 400)
        rows = hole_probability_test(samples, 1, indices, [0.3, 0.6])
        for row in rows:
            assert 0 < row.predicted < 1
            assert row.sigma > 0
            assert abs(row.observed - row.predicted) <= 5 * row.sigma

    def test_counts_in_a_disk(self) -> None:
        k = ginibre_kernel(3)
        samples = sample_many(k, 17, 300)
        result = count_test(samples, k, Disk(0.8))
        expected = sum(regularized_lower_gamma(j, math.pi * 0.64) for j in range(3))
        assert result.expected == pytest.approx(expected, rel=1e-8)
        assert abs(result.observed_mean - result.expected) <= 5 * result.sigma

    def test_half_plane_holds_half_the_points(self) -> None:
        k = pure_poly_kernel(2, 2)
        samples = sample_many(k, 23, 200)
        result = half_plane_count_test(samples, k)
        assert result.expected == pytest.approx(1.0, abs=1e-5)
        assert abs(result.observed_mean - 1.0) <= 5 * result.sigma

    def test_single_ginibre_point_has_mean_squared_modulus_one_over_pi(self) -> None:
        samples = sample_many(ginibre_kernel(1), 31, 1000)
        squared = np.array([abs(complex(sample.points[0])) ** 2 for sample in samples])
        # |z|^2 is exponential with rate pi
        assert abs(float(np.mean(squared)) - 1 / math.pi) <= 5 / (math.pi * math.sqrt(len(samples)))

    @pytest.mark.slow
    def test_level_one_with_ten_points(self) -> None:
        indices = IndexSet.first(10)
        samples = sample_many(pure_poly_kernel(1, 10), 404, 2000, workers=4)
        report = radii_distribution_test(samples, 1, indices)
        assert sum(row.passed for row in report.rows) >= 7
        assert report.p_value > 1e-4
        median = optimize.brentq(lambda x: hole_probability(1, indices, x) - 0.5, 0.05, 1.0)
        [row] = hole_probability_test(samples, 1, indices, [median])
        assert row.predicted == pytest.approx(0.5, abs=1e-9)
        assert row.passed
        assert not radii_distribution_test(samples, 0, indices).passed
