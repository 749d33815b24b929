import math

import numpy as np
import pytest

from wh_ensembles.domains import Disk
from wh_ensembles.ensembles import ginibre_kernel_value
from wh_ensembles.exceptions import DescriptorError
from wh_ensembles.phasespace import (PhasePoint, WindowSpec, ambiguity,
                                     gauge_renormalize, load_window,
                                     metaplectic_rotate,
                                     parse_window_descriptor,
                                     reproducing_kernel, rotate_coefficients,
                                     rotate_point, stft_basis, stft_hermite,
                                     stft_numeric, stft_window)

from .base_test import BaseTest


class TestWindows(BaseTest):

    def test_hermite_window(self) -> None:
        g = WindowSpec.hermite(2)
        assert g.pure_index == 2
        assert g.support == [2]
        assert len(g) == 3
        assert g.descriptor == "hermite:2"

    def test_normalization(self) -> None:
        with pytest.raises(DescriptorError):
            WindowSpec([1.0, 1.0])
        g = WindowSpec([1.0, 1.0], normalize=True)
        assert g.normalization == pytest.approx(math.sqrt(2))
        assert g.norm == pytest.approx(1.0)
        assert g.pure_index is None

    def test_window_descriptors(self) -> None:
        assert parse_window_descriptor("hermite:3").pure_index == 3
        for descriptor in ["hermite:x", "hermite:-1", "gauss", "file:"]:
            with pytest.raises(DescriptorError):
                parse_window_descriptor(descriptor)

    def test_load_window(self) -> None:
        path = self.sandbox_file("window.txt", "# r real imag\n0 1 0\n\n2 0 1  # second\n")
        g = load_window(path)
        assert np.allclose(g.coeffs, np.array([1, 0, 1j]) / math.sqrt(2))
        assert g.normalization == pytest.approx(math.sqrt(2))
        assert parse_window_descriptor(f"file:{path}").descriptor == f"file:{path}"

    def test_load_window_errors(self) -> None:
        with pytest.raises(DescriptorError):
            load_window(self.sandbox_file("bad.txt", "0 1\n"))
        with pytest.raises(DescriptorError):
            load_window(self.sandbox_file("repeated.txt", "0 1 0\n0 0 1\n"))
        with pytest.raises(DescriptorError):
            load_window(self.sandbox_file("empty.txt", "# nothing\n"))
        with pytest.raises(DescriptorError):
            load_window("no/such/file")


class TestShortTimeFourierTransform:

    @pytest.mark.parametrize("j,r", [(0, 0), (1, 0), (2, 1), (0, 3)])
    def test_closed_form_matches_quadrature(self, j: int, r: int) -> None:
        p = PhasePoint(0.3, -0.7)
        f = np.zeros(j + 1)
        f[j] = 1.0
        numeric = stft_numeric(WindowSpec.hermite(r), f, p)
        assert abs(stft_hermite(j, r, p) - numeric) < 1e-8

    def test_general_window_is_antilinear(self) -> None:
        g = WindowSpec([1.0, 1j], normalize=True)
        z = np.array([0.2 + 0.1j, -1.0 + 0.5j])
        expected = (stft_hermite(2, 0, z) - 1j * stft_hermite(2, 1, z)) / math.sqrt(2)
        assert np.allclose(stft_window(g, 2, z), expected)
        assert np.allclose(stft_basis(g, 3, z)[:, 2], expected)

    def test_general_window_matches_quadrature(self) -> None:
        g = WindowSpec([0.6, 0.0, 0.8j])
        p = PhasePoint(-0.4, 0.9)
        assert abs(stft_window(g, 1, p) - stft_numeric(g, [0.0, 1.0], p)) < 1e-8

    def test_time_frequency_shift(self) -> None:
        g = WindowSpec.hermite(0)
        p, w = PhasePoint(0.5, 0.2), PhasePoint(-0.3, 0.4)
        shifted = stft_numeric(g, g, p, shift=w)
        # V_g(pi(w) g)(p) = exp(-2 pi i x_w (xi_p - xi_w)) V_g g(p - w)
        expected = np.exp(-2j * math.pi * w.x * (p.xi - w.xi)) * ambiguity(g, (p - w).z)
        assert abs(shifted - expected) < 1e-8

    @pytest.mark.slow
    @pytest.mark.parametrize("r", range(9))
    def test_closed_form_matches_quadrature_on_a_grid(self, r: int) -> None:
        rng = np.random.default_rng(2024 + r)
        points = 3.0 * np.sqrt(rng.uniform(size=20)) * np.exp(2j * math.pi * rng.uniform(size=20))
        g = WindowSpec.hermite(r)
        for j in range(9):
            f = np.zeros(j + 1)
            f[j] = 1.0
            for z in map(complex, points):
                assert abs(stft_hermite(j, r, z) - stft_numeric(g, f, z)) < 1e-8, (j, r, z)

    @pytest.mark.parametrize("j", [0, 3, 10])
    def test_isometry(self, j: int) -> None:
        rule = Disk(5.0).quadrature(80, 64)
        nodes = np.asarray(rule.nodes, dtype=np.complex128)
        for g in (WindowSpec.hermite(2), WindowSpec([0.6, 0.0, 0.8j])):
            norm = float(np.sum(rule.weights * np.abs(stft_window(g, j, nodes)) ** 2))
            assert norm == pytest.approx(1.0, abs=1e-6)

    def test_orthogonality_relations(self) -> None:
        rule = Disk(5.0).quadrature(80, 64)
        nodes = np.asarray(rule.nodes, dtype=np.complex128)
        pairs = [(j, r) for j in range(7) for r in range(7)]
        values = np.stack([stft_hermite(j, r, nodes) for j, r in pairs], axis=1)
        gram = values.T @ (rule.weights[:, None] * np.conj(values))
        assert np.allclose(gram, np.eye(len(pairs)), atol=1e-6)


class TestKernels:

    def test_reproducing_kernel_of_gaussian(self) -> None:
        g = WindowSpec.hermite(0)
        p, q = 0.4 - 0.3j, -0.2 + 0.9j
        assert reproducing_kernel(g, p, p) == pytest.approx(1.0)
        assert abs(reproducing_kernel(g, p, q)) == pytest.approx(math.exp(-math.pi * abs(p - q) ** 2 / 2))

    def test_reproducing_kernel_is_hermitian(self) -> None:
        g = WindowSpec([1.0, 0.5, -0.5j], normalize=True)
        p, q = 0.4 - 0.3j, -0.2 + 0.9j
        assert reproducing_kernel(g, p, q) == pytest.approx(np.conj(reproducing_kernel(g, q, p)))

    def test_gauge_renormalize_keeps_the_diagonal(self) -> None:
        assert gauge_renormalize(0.7 + 0.1j, 0.3 + 0.2j, 0.3 + 0.2j) == pytest.approx(0.7 + 0.1j)

    def test_gauge_of_gaussian_kernel_is_ginibre(self) -> None:
        g = WindowSpec.hermite(0)
        p = np.array([0.4 - 0.3j, -0.2 + 0.9j, 1.1 + 0.2j])
        q = np.array([-0.5 + 0.6j, 0.7 - 0.1j, 0.3 + 0.8j])
        gauged = gauge_renormalize(reproducing_kernel(g, np.conj(p), np.conj(q)), p, q)
        assert np.allclose(gauged, ginibre_kernel_value(80, p, q), atol=1e-12)
        expected = np.exp(-math.pi * (np.abs(p) ** 2 + np.abs(q) ** 2) / 2 + math.pi * p * np.conj(q))
        assert np.allclose(gauged, expected, atol=1e-12)


class TestRotations:

    def test_rotate_point(self) -> None:
        assert rotate_point(1j, math.pi / 2) == pytest.approx(-1.0)

    def test_metaplectic_rotation_covariance(self) -> None:
        g = WindowSpec([0.6, 0.8j])
        theta = 0.7
        rotated = metaplectic_rotate(g, theta)
        assert np.allclose(rotated.coeffs, g.coeffs * np.exp(1j * theta * np.arange(2)))
        z = np.array([0.3 + 0.5j, -0.8 + 0.1j])
        # |V_{U g} h_2 (R_theta z)| = |V_g h_2 (z)|
        assert np.allclose(np.abs(stft_window(rotated, 2, rotate_point(z, theta))), np.abs(stft_window(g, 2, z)))

    def test_covariance_with_phase(self) -> None:
        g = WindowSpec([1.0, 0.5j, 0.0, -0.3, 0.2], normalize=True)
        f = np.array([0.2, -1.0, 0.5j, 0.0, 0.7])
        rng = np.random.default_rng(5)
        for _ in range(4):
            p = complex(1.5 * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform()))
            theta = float(rng.uniform(-math.pi, math.pi))
            rotated = rotate_point(p, theta)
            phase = np.exp(1j * math.pi * (p.real * p.imag - rotated.real * rotated.imag))
            expected = phase * stft_numeric(metaplectic_rotate(g, -theta), rotate_coefficients(f, -theta), p)
            assert abs(stft_numeric(g, f, rotated) - expected) < 1e-8
