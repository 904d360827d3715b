"""Grids, spinor fields, observables, and the matrix-free Hamiltonian."""

import numpy as np
import pytest

import spinorlab as sl
from conftest import all_presets, band_limited_spinor, plane_wave, wavenumber


class TestGrid:
    def test_power_of_two_enforced(self):
        with pytest.raises(ValueError, match="power of two"):
            sl.make_grid(100, 10.0)
        with pytest.raises(ValueError, match="power of two"):
            sl.make_grid(4, 10.0)

    def test_wavenumber_convention(self, grid1d):
        k = grid1d.k_axes()[0]
        h = grid1d.h[0]
        assert k.min() == pytest.approx(-np.pi / h)
        assert k.max() == pytest.approx(np.pi / h - 2 * np.pi / grid1d.extent[0])
        assert k[1] == pytest.approx(2 * np.pi / grid1d.extent[0])

    def test_budget(self):
        with pytest.raises(ValueError, match="budget"):
            sl.make_grid((1024, 1024, 1024), (1.0, 1.0, 1.0))

    def test_centered_origin(self):
        g = sl.make_grid((16, 32), (8.0, 4.0))
        assert g.origin == (-4.0, -2.0)
        assert g.cell_volume == pytest.approx(0.5 * 0.125)


class TestInitGaussian:
    def test_normalized(self, grid2d):
        f = sl.init_gaussian(grid2d, (0, 0), 1.0, (0, 0), (1, 0))
        assert sl.norm(f) == pytest.approx(1.0, abs=1e-12)

    def test_momentum_expectation(self, grid1d):
        f = sl.init_gaussian(grid1d, 0.0, 0.5, 2.0, (1, 0))
        p = sl.expect_momentum(f)
        assert p[0] == pytest.approx(2.0, abs=1e-6)

    def test_spin_up_points_z(self, grid2d):
        f = sl.init_gaussian(grid2d, (0, 0), 1.0, (0, 0), (1, 0))
        s = sl.expect_spin(f)
        np.testing.assert_allclose(s, [0, 0, 0.5], atol=1e-12)

    def test_unresolvable_width(self, grid2d):
        with pytest.raises(ValueError, match="unresolvable"):
            sl.init_gaussian(grid2d, (0, 0), 0.1, (0, 0), (1, 0))

    def test_boundary_proximity(self, grid2d):
        with pytest.raises(ValueError, match="boundary"):
            sl.init_gaussian(grid2d, (7.0, 0.0), 1.0, (0, 0), (1, 0))

    def test_zero_spinor(self, grid2d):
        with pytest.raises(ValueError, match="normalizable"):
            sl.init_gaussian(grid2d, (0, 0), 1.0, (0, 0), (0, 0))


class TestNorm:
    def test_scaling(self, grid1d):
        f = sl.init_gaussian(grid1d, 0.0, 1.0, 0.0, (1, 0))
        g = sl.SpinorField(grid1d, 2.0 * f.data)
        assert sl.norm(g) == pytest.approx(2.0)

    def test_zero_field(self, grid1d):
        z = sl.SpinorField(grid1d, np.zeros((2,) + grid1d.shape, complex))
        assert sl.norm(z) == 0.0


class TestSpinDensity:
    def test_spin_up(self, grid2d):
        f = sl.init_gaussian(grid2d, (0, 0), 1.0, (0, 0), (1, 0))
        s = sl.spin_density(f).values
        rho = sl.density(f).values
        np.testing.assert_allclose(s[2], rho, atol=1e-15)
        np.testing.assert_allclose(s[0], 0, atol=1e-15)
        np.testing.assert_allclose(s[1], 0, atol=1e-15)

    def test_spin_x(self, grid2d):
        f = sl.init_gaussian(grid2d, (0, 0), 1.0, (0, 0), (1, 1))
        s = sl.spin_density(f).values
        rho = sl.density(f).values
        np.testing.assert_allclose(s[0], rho, atol=1e-15)

    def test_real_for_random_field(self, grid2d):
        f = band_limited_spinor(grid2d, seed=11)
        s = sl.spin_density(f).values
        assert s.dtype == float


class TestExpectations:
    def test_spin_and_moment_orientations(self, grid2d):
        cases = [
            ((1, 0), [0, 0, 0.5]),
            ((1, 1), [0.5, 0, 0]),
            ((1, 1j), [0, 0.5, 0]),
        ]
        for spinor, want in cases:
            f = sl.init_gaussian(grid2d, (0, 0), 1.0, (0, 0), spinor)
            np.testing.assert_allclose(sl.expect_spin(f), want, atol=1e-12)
            np.testing.assert_allclose(sl.expect_moment(f, q=-1.0, m=1.0),
                                       [-w for w in want], atol=1e-12)

    def test_moment_scaling(self, grid2d):
        f = sl.init_gaussian(grid2d, (0, 0), 1.0, (0, 0), (1, 0))
        np.testing.assert_allclose(sl.expect_moment(f, q=2.0, m=4.0),
                                   [0, 0, 0.25], atol=1e-12)


class TestApplyHamiltonian:
    def test_free_plane_wave_dispersion(self, grid1d):
        f = plane_wave(grid1d, 5, (1, 0))
        k = wavenumber(grid1d, 5)
        hf = sl.apply_hamiltonian(f, sl.preset("Zero"))
        np.testing.assert_allclose(hf.data, (k * k / 2.0) * f.data, atol=1e-12)

    def test_zeeman_energy_spatially_flat(self, grid2d):
        # uniform B0 z, spin-up packet: Zeeman contribution -(q/2m) B0 per unit norm
        b0 = 0.7
        f = sl.init_gaussian(grid2d, (0, 0), 1.0, (0, 0), (1, 0))
        e_zee = sl.expect_energy(f, sl.zeeman_uniform(b0), q=-1.0, m=1.0) - \
            sl.expect_energy(f, sl.preset("Zero"), q=-1.0, m=1.0)
        assert e_zee == pytest.approx(0.5 * b0, rel=1e-12)

    def test_zeeman_splitting(self, grid2d):
        b0 = 1.3
        p = sl.zeeman_uniform(b0)
        up = sl.init_gaussian(grid2d, (0, 0), 1.0, (0, 0), (1, 0))
        dn = sl.init_gaussian(grid2d, (0, 0), 1.0, (0, 0), (0, 1))
        gap = sl.expect_energy(up, p) - sl.expect_energy(dn, p)
        assert gap == pytest.approx(b0, rel=1e-12)  # -q hbar B0 / m with q=-1

    def test_hermitian_expectation_real(self, grid2d):
        for p in all_presets():
            f = band_limited_spinor(grid2d, seed=21)
            val = sl.inner(f, sl.apply_hamiltonian(f, p))
            assert abs(val.imag) < 1e-10 * max(1.0, abs(val.real))

    def test_linearity(self, grid2d):
        p = sl.preset("UniformBSymmetric", b0=1.0)
        f = band_limited_spinor(grid2d, seed=1)
        g = band_limited_spinor(grid2d, seed=2)
        a, b = 0.3 - 0.2j, 1.1 + 0.7j
        combo = sl.SpinorField(grid2d, a * f.data + b * g.data)
        lhs = sl.apply_hamiltonian(combo, p).data
        rhs = a * sl.apply_hamiltonian(f, p).data + b * sl.apply_hamiltonian(g, p).data
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * np.max(np.abs(rhs))

    def test_hermiticity_cross(self, grid2d):
        for i, p in enumerate(all_presets()):
            f = band_limited_spinor(grid2d, seed=100 + i)
            g = band_limited_spinor(grid2d, seed=200 + i)
            lhs = sl.inner(f, sl.apply_hamiltonian(g, p))
            rhs = np.conj(sl.inner(g, sl.apply_hamiltonian(f, p)))
            assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))

    def test_gauge_covariance_of_energy(self, grid2d):
        # psi' = exp(i q Lambda) psi with A' = A + grad Lambda leaves <H> alone
        Lx = grid2d.extent[0]
        q = -1.0
        kg = 2 * np.pi / Lx

        def lam(r, t):
            return 0.3 * np.sin(kg * r[0]) * np.cos(2 * kg * r[1])

        def grad_lam(r, t):
            return (0.3 * kg * np.cos(kg * r[0]) * np.cos(2 * kg * r[1]),
                    -0.6 * kg * np.sin(kg * r[0]) * np.sin(2 * kg * r[1]),
                    0.0)

        g = sl.GaugeFunction(lam, grad_lam, lambda r, t: 0.0)
        for p in (sl.preset("Zero"), sl.preset("UniformBLandau", b0=1.0)):
            f = band_limited_spinor(grid2d, seed=31)
            e0 = sl.expect_energy(f, p, q=q)
            r3 = grid2d.coords3()
            phase = np.exp(1j * q * lam(r3, 0.0))
            f2 = sl.SpinorField(grid2d, phase * f.data)
            e1 = sl.expect_energy(f2, sl.gauge_transform(p, g), q=q)
            assert e1 == pytest.approx(e0, rel=1e-8)


class TestExpectEnergy:
    def test_free_gaussian_kinetic(self, grid2d):
        sigma = 1.0
        f = sl.init_gaussian(grid2d, (0, 0), sigma, (0, 0), (1, 0))
        e = sl.expect_energy(f, sl.preset("Zero"))
        assert e == pytest.approx(2 / (8 * sigma ** 2), rel=1e-2)

    def test_plane_wave(self, grid1d):
        f = plane_wave(grid1d, 8, (1, 1))
        k = wavenumber(grid1d, 8)
        e = sl.expect_energy(f, sl.preset("Zero"))
        assert e == pytest.approx(k * k / 2, rel=1e-12)


class TestBispinor:
    def test_grid_mismatch(self, grid1d, grid2d):
        f1 = sl.init_gaussian(grid1d, 0.0, 1.0, 0.0, (1, 0))
        f2 = sl.init_gaussian(grid2d, (0, 0), 1.0, (0, 0), (1, 0))
        with pytest.raises(ValueError, match="grid"):
            sl.BispinorField(f1, f2)
