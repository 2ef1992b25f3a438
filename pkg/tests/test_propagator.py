import numpy as np
import pytest

from schrodlab.exponents import ExponentTriple
from schrodlab.fields import GridSpec, SampledField, SpectralField, forward_transform, inverse_transform
from schrodlab.norms import lebesgue_norm
from schrodlab.propagator import (
    boundary_mass_fraction,
    default_time_count,
    dispersive_bound,
    evolve_kernel,
    evolve_spectral,
    evolve_spectral_single,
    merge_times,
    resample_scaled,
    time_rescale,
    uniform_times,
)


def gaussian_field(n=1024, extent=32.0):
    g = GridSpec(1, n, extent)
    return SampledField(g, np.exp(-g.axis() ** 2 / 2).astype(complex))


def gaussian_exact(x, t):
    return (1 + 2j * t) ** -0.5 * np.exp(-(x**2) / (2 * (1 + 2j * t)))


def band_field(grid, lo, hi, seed=0):
    rng = np.random.default_rng(seed)
    xi = grid.freq_axis()
    sel = (np.abs(xi) >= lo) & (np.abs(xi) <= hi)
    spec = np.zeros(grid.shape, dtype=complex)
    spec[sel] = rng.standard_normal(sel.sum()) + 1j * rng.standard_normal(sel.sum())
    return inverse_transform(SpectralField(grid, spec))


class TestSpectral:
    def test_time_zero_identity(self):
        f = gaussian_field(256, 16.0)
        u = evolve_spectral(f, [0.0])
        assert np.max(np.abs(u.values[0] - f.values)) < 1e-13

    def test_plane_wave_eigenfunction(self):
        g = GridSpec(1, 64, 16.0)
        xi0 = g.freq_axis()[9]
        f = SampledField(g, np.exp(1j * xi0 * g.axis()))
        t = 0.37
        u = evolve_spectral_single(f, t)
        expected = np.exp(-1j * t * xi0**2) * f.values
        assert np.max(np.abs(u.values - expected)) < 1e-12

    def test_gaussian_closed_form(self):
        f = gaussian_field(1024, 32.0)
        t = 0.5
        u = evolve_spectral_single(f, t)
        exact = gaussian_exact(f.grid.axis(), t)
        rel = np.linalg.norm(u.values - exact) / np.linalg.norm(exact)
        assert rel < 1e-6

    def test_l2_conservation(self):
        g = GridSpec(1, 1024, 32.0)
        f = band_field(g, 2.0, 30.0, 5)
        n0 = lebesgue_norm(f, 2)
        u = evolve_spectral(f, np.linspace(0, 1, 16))
        for m in range(16):
            nm = lebesgue_norm(SampledField(g, u.values[m]), 2)
            assert abs(nm - n0) < 1e-10 * n0

    def test_group_law(self):
        g = GridSpec(1, 256, 16.0)
        f = band_field(g, 1.0, 10.0, 6)
        s, t = 0.3, 0.45
        two_step = evolve_spectral_single(evolve_spectral_single(f, t), s)
        one_step = evolve_spectral_single(f, s + t)
        assert np.max(np.abs(two_step.values - one_step.values)) < 1e-10

    def test_time_reversal(self):
        g = GridSpec(1, 256, 16.0)
        f = band_field(g, 1.0, 10.0, 7)
        t = 0.6
        lhs = evolve_spectral_single(f, -t).values
        rhs = np.conj(evolve_spectral_single(SampledField(g, np.conj(f.values)), t).values)
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_empty_times_rejected(self):
        f = gaussian_field(256, 16.0)
        with pytest.raises(ValueError):
            evolve_spectral(f, [])


class TestKernel:
    def test_matches_spectral_for_band_limited_bump(self):
        g = GridSpec(1, 1024, 64.0)
        f = band_field(g, 0.5, 4.0, 8)
        t = 0.5
        uk = evolve_kernel(f, t)
        us = evolve_spectral_single(f, t)
        rel = np.linalg.norm(uk.values - us.values) / np.linalg.norm(us.values)
        assert rel < 1e-3

    def test_gaussian_closed_form(self):
        f = gaussian_field(1024, 32.0)
        t = 0.5
        uk = evolve_kernel(f, t)
        exact = gaussian_exact(f.grid.axis(), t)
        rel = np.linalg.norm(uk.values - exact) / np.linalg.norm(exact)
        assert rel < 1e-3

    @pytest.mark.parametrize("t", [0.25, 0.5, 1.0])
    def test_dispersive_sup_bound(self, t):
        f = gaussian_field(512, 32.0)
        uk = evolve_kernel(f, t)
        assert np.max(np.abs(uk.values)) <= dispersive_bound(f, t) * (1 + 1e-12)

    def test_zero_time_rejected(self):
        f = gaussian_field(256, 16.0)
        with pytest.raises(ValueError):
            evolve_kernel(f, 0.0)

    def test_boundary_mass_warning(self):
        g = GridSpec(1, 64, 16.0)
        vals = np.ones(64, dtype=complex)
        f = SampledField(g, vals)
        assert boundary_mass_fraction(f) > 1e-6
        with pytest.warns(UserWarning):
            evolve_kernel(f, 0.5)


class TestTimeRescale:
    def test_identity_at_b_one(self):
        g = GridSpec(1, 256, 16.0)
        f = band_field(g, 2.0, 6.0, 9)
        out = time_rescale(f, lam=4.0, b=1.0, triple=ExponentTriple(2, 4, 2, 1))
        assert np.array_equal(out.field.values, f.values)
        assert out.time_factor == 1.0 and out.ratio_factor == 1.0

    def test_plane_wave_band_mapping(self):
        g = GridSpec(1, 256, 32.0)
        xi = g.freq_axis()
        k0 = 40  # frequency xi[40]
        f = SampledField(g, np.exp(1j * xi[k0] * g.axis()))
        b = 0.25
        out = time_rescale(f, lam=8.0, b=b, triple=ExponentTriple(2, 2, 2, 1))
        # f(sqrt(b) x) is the plane wave at frequency sqrt(b) xi0
        expected = np.exp(1j * np.sqrt(b) * xi[k0] * g.axis())
        assert np.max(np.abs(out.field.values - expected)) < 1e-9

    def test_norm_transport_identity(self):
        # pointwise identity U[f(sqrt b .)](x/sqrt b, s) = U f(x, b s) makes
        # the [b/2, b] window norm equal b^{1/r} times the rescaled one.
        # modes sit on even grid frequencies so the rescaled datum is
        # representable exactly on the same grid at b = 1/4
        g = GridSpec(1, 512, 32.0)
        rng = np.random.default_rng(10)
        xi = g.freq_axis()
        sel = np.zeros(g.shape, dtype=bool)
        sel[np.flatnonzero((np.abs(xi) >= 2.0) & (np.abs(xi) <= 8.0))] = True
        sel[1::2] = False
        spec = np.zeros(g.shape, dtype=complex)
        spec[sel] = rng.standard_normal(sel.sum()) + 1j * rng.standard_normal(sel.sum())
        f = inverse_transform(SpectralField(g, spec))
        b = 0.25
        root = np.sqrt(b)
        triple = ExponentTriple(2, 4, 2, 1)
        out = time_rescale(f, lam=8.0, b=b, triple=triple)
        s_nodes = np.linspace(0.5, 1.0, 64)
        t_nodes = b * s_nodes
        x_idx = np.arange(160, 352)  # keep x/sqrt(b) inside the box
        u_orig = evolve_spectral(f, t_nodes)
        u_resc = evolve_spectral(out.field, s_nodes)
        w_t = np.zeros_like(t_nodes)
        dt = np.diff(t_nodes)
        w_t[:-1] += dt / 2
        w_t[1:] += dt / 2
        w_s = np.zeros_like(s_nodes)
        ds = np.diff(s_nodes)
        w_s[:-1] += ds / 2
        w_s[1:] += ds / 2
        x = g.axis()
        for j in x_idx[::37]:
            xj = x[j]
            # index of x_j / sqrt(b) on the grid: x = -L/2 + h k
            k = int(round((xj / root + g.extent / 2) / g.spacing))
            lhs = np.sum(w_t * np.abs(u_orig.values[:, j]) ** 2) ** 0.5
            rhs = out.time_factor * np.sum(w_s * np.abs(u_resc.values[:, k]) ** 2) ** 0.5
            assert lhs == pytest.approx(rhs, rel=1e-6)

    def test_ratio_factor_value(self):
        triple = ExponentTriple(2, 4, 2, 1)
        out = time_rescale(gaussian_field(256, 16.0), lam=4.0, b=0.25, triple=triple)
        # (sqrt b)^{-d(1/p - 1/q) + 2/r} at b = 1/4: (1/2)^{-1/4 + 1} = 2^{-3/4}
        assert out.ratio_factor == pytest.approx(2.0 ** (-0.75))

    def test_b_out_of_range(self):
        f = gaussian_field(256, 16.0)
        with pytest.raises(ValueError):
            time_rescale(f, lam=4.0, b=(32.0) ** -2 / 2, triple=ExponentTriple(2, 2, 2, 1))


class TestTimeGrids:
    def test_uniform_and_merge(self):
        a = uniform_times((0.0, 1.0), 5)
        b = np.array([0.5, 0.75])
        m = merge_times(a, b)
        assert np.all(np.diff(m) > 0)
        assert set(np.round(b, 12)).issubset(set(np.round(m, 12)))

    def test_default_count_cap(self):
        assert default_time_count(128.0, (0.0, 1.0), cap=2048) == 2048
        assert default_time_count(4.0, (0.0, 1.0)) >= 16
