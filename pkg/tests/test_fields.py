import numpy as np
import pytest

from schrodlab.fields import (
    FrequencyWindow,
    GridSpec,
    SampledField,
    SpectralField,
    apply_multiplier,
    bump,
    evaluate_modes,
    forward_transform,
    inverse_transform,
    littlewood_paley_project,
    lp_band_count,
    lp_multiplier,
    lp_plateau,
    smooth_step,
)
from schrodlab.norms import lebesgue_norm, plancherel_freq_norm


def nested_dft(f: SampledField):
    """Direct nested-sum oracle for the forward transform (d = 1)."""
    g = f.grid
    x = g.axis()
    return np.array(
        [np.sum(f.values * np.exp(-1j * x * xi)) * g.spacing for xi in g.freq_axis()]
    )


def random_field(grid, seed=0):
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return SampledField(grid, vals)


class TestGridSpec:
    def test_invariants(self):
        g = GridSpec(1, 64, 16.0)
        assert g.spacing == 0.25
        assert g.nyquist == pytest.approx(np.pi * 4)
        with pytest.raises(ValueError):
            GridSpec(1, 48, 16.0)  # not a power of two
        with pytest.raises(ValueError):
            GridSpec(1, 4, 16.0)  # too small
        with pytest.raises(ValueError):
            GridSpec(3, 64, 16.0)
        with pytest.raises(ValueError):
            GridSpec(1, 64, 16.0, max_frequency=20.0)  # Nyquist ~ 12.57 < 20

    def test_freq_axis_matches_integer_multiples(self):
        g = GridSpec(1, 16, 8.0)
        xi = np.sort(g.freq_axis())
        expected = 2 * np.pi / 8.0 * np.arange(-8, 8)
        assert np.allclose(xi, expected)


class TestTransform:
    def test_roundtrip_random(self):
        g = GridSpec(1, 8, 4.0)
        f = random_field(g, 3)
        back = inverse_transform(forward_transform(f))
        assert np.max(np.abs(back.values - f.values)) < 1e-12

    def test_forward_matches_nested_sum_oracle(self):
        g = GridSpec(1, 8, 4.0)
        f = random_field(g, 5)
        fh = forward_transform(f)
        assert np.max(np.abs(fh.values - nested_dft(f))) < 1e-12

    def test_point_mass_transforms_to_one(self):
        g = GridSpec(1, 32, 8.0)
        vals = np.zeros(32, dtype=complex)
        vals[16] = 1.0 / g.spacing  # x = 0 sits at index N/2
        fh = forward_transform(SampledField(g, vals))
        assert np.max(np.abs(fh.values - 1.0)) < 1e-12

    def test_plane_wave_gives_point_mass(self):
        g = GridSpec(1, 32, 8.0)
        xi0 = g.freq_axis()[5]
        f = SampledField(g, np.exp(1j * xi0 * g.axis()))
        fh = forward_transform(f).values
        assert fh[5] == pytest.approx(g.extent, rel=1e-12)
        rest = np.abs(np.delete(fh, 5))
        assert rest.max() < 1e-10

    def test_plancherel(self):
        g = GridSpec(2, 16, 8.0)
        f = random_field(g, 7)
        assert plancherel_freq_norm(f) == pytest.approx(lebesgue_norm(f, 2), rel=1e-10)

    def test_purity_bit_identical(self):
        g = GridSpec(1, 64, 16.0)
        f = random_field(g, 11)
        a = forward_transform(f).values
        b = forward_transform(f).values
        assert np.array_equal(a, b)

    def test_2d_roundtrip(self):
        g = GridSpec(2, 8, 4.0)
        f = random_field(g, 1)
        back = inverse_transform(forward_transform(f))
        assert np.max(np.abs(back.values - f.values)) < 1e-12


class TestMultiplier:
    def test_identity(self):
        g = GridSpec(1, 32, 8.0)
        f = random_field(g, 2)
        out = apply_multiplier(f, lambda xi: np.ones_like(xi))
        assert np.max(np.abs(out.values - f.values)) < 1e-12

    def test_halfspace_keeps_retained_mode(self):
        g = GridSpec(1, 32, 8.0)
        xi = g.freq_axis()
        f = SampledField(g, np.exp(1j * xi[3] * g.axis()) + np.exp(1j * xi[-3] * g.axis()))
        out = apply_multiplier(f, lambda w: (w > 0).astype(float))
        expected = np.exp(1j * xi[3] * g.axis())
        assert np.max(np.abs(out.values - expected)) < 1e-10

    def test_gaussian_multiplier_matches_nested_oracle(self):
        g = GridSpec(1, 16, 8.0)
        f = random_field(g, 9)
        m = lambda xi: np.exp(-(xi**2))
        out = apply_multiplier(f, m)
        # oracle: nested-sum DFT, multiply, nested-sum inversion
        fh = nested_dft(f)
        xi = g.freq_axis()
        x = g.axis()
        inv = np.array(
            [np.sum(fh * np.exp(-(xi**2)) * np.exp(1j * xx * xi)) for xx in x]
        ) / g.extent
        assert np.max(np.abs(out.values - inv)) < 1e-12

    def test_rejects_nonfinite(self):
        g = GridSpec(1, 32, 8.0)
        f = random_field(g, 2)
        with pytest.raises(ValueError):
            apply_multiplier(f, lambda xi: 1.0 / xi)


class TestLittlewoodPaley:
    def test_partition_of_unity_on_grid(self):
        g = GridSpec(1, 256, 16.0)
        total = np.zeros(g.shape)
        for k in range(lp_band_count(g) + 1):
            total = total + lp_multiplier(g, k)
        assert np.max(np.abs(total - 1.0)) == 0.0

    def test_partition_reconstructs_random_field(self):
        g = GridSpec(1, 256, 16.0)
        f = random_field(g, 13)
        acc = np.zeros(g.shape, dtype=complex)
        for k in range(lp_band_count(g) + 1):
            acc += littlewood_paley_project(f, k).values
        assert np.max(np.abs(acc - f.values)) < 1e-10

    def test_plateau_band_is_identity(self):
        g = GridSpec(1, 256, 16.0)
        k = 3
        lo, hi = lp_plateau(k)
        xi = g.freq_axis()
        sel = (np.abs(xi) >= lo) & (np.abs(xi) <= hi)
        assert sel.sum() > 2
        spec = np.zeros(g.shape, dtype=complex)
        spec[sel] = 1.0 + 0.5j
        f = inverse_transform(SpectralField(g, spec))
        pk = littlewood_paley_project(f, k)
        assert np.max(np.abs(pk.values - f.values)) < 1e-12

    def test_separated_bands_annihilate(self):
        g = GridSpec(1, 512, 16.0)
        f = random_field(g, 17)
        p3 = littlewood_paley_project(f, 3)
        out = littlewood_paley_project(p3, 5)
        assert lebesgue_norm(out, 2) < 1e-12 * lebesgue_norm(f, 2)

    def test_band_too_large_raises(self):
        g = GridSpec(1, 64, 16.0)
        with pytest.raises(ValueError):
            lp_multiplier(g, 12)


class TestWindows:
    def test_bump_support_and_peak(self):
        s = np.linspace(-2, 2, 401)
        b = bump(s)
        assert b[np.abs(s) >= 1].max() == 0.0
        assert b[200] == pytest.approx(1.0)

    def test_smooth_step_ends(self):
        assert smooth_step(np.array([-1.0, 0.0]))[1] == 0.0
        assert smooth_step(np.array([1.0, 2.0]))[0] == 1.0

    def test_sharp_annulus_indicator(self):
        w = FrequencyWindow("sharp_annulus", 1.0, 2.0)
        vals = w.evaluate_radial(np.array([0.5, 1.0, 1.5, 2.0, 2.5]))
        assert np.array_equal(vals, [0, 1, 1, 1, 0])

    def test_smooth_annulus_plateau_and_support(self):
        w = FrequencyWindow("smooth_annulus", 1.0, 4.0, 1.5, 3.0)
        rho = np.array([0.99, 1.5, 2.0, 3.0, 4.01])
        vals = w.evaluate_radial(rho)
        assert vals[0] == 0.0 and vals[-1] == 0.0
        assert vals[1] == 1.0 and vals[2] == 1.0 and vals[3] == 1.0

    def test_invalid_windows(self):
        with pytest.raises(ValueError):
            FrequencyWindow("sharp_annulus", 2.0, 1.0)
        with pytest.raises(ValueError):
            FrequencyWindow("smooth_ball", 1.0, 2.0)
        with pytest.raises(ValueError):
            FrequencyWindow("unknown", 0.0, 1.0)


class TestEvaluateModes:
    def test_matches_grid_values_for_band_limited_field(self):
        g = GridSpec(1, 64, 16.0)
        xi = g.freq_axis()
        spec = np.zeros(g.shape, dtype=complex)
        spec[[2, 5, 60]] = [1.0, 2.0 - 1j, 0.3]
        fh = SpectralField(g, spec)
        f = inverse_transform(fh)
        pts = g.axis()[10:20].reshape(-1, 1)
        direct = evaluate_modes(fh, pts)
        assert np.max(np.abs(direct - f.values[10:20])) < 1e-12
