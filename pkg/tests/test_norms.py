import numpy as np
import pytest

from schrodlab.exponents import INF
from schrodlab.fields import GridSpec, SampledField, SpaceTimeField, SpectralField, inverse_transform, lp_plateau
from schrodlab.norms import (
    MixedNormSpec,
    besov_norm,
    lebesgue_norm,
    mixed_norm,
    sobolev_norm,
    space_time_norm,
    trapezoid_weights,
)


def random_field(grid, seed=0):
    rng = np.random.default_rng(seed)
    return SampledField(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))


class TestLebesgue:
    def test_unit_mass_indicator(self):
        g = GridSpec(1, 16, 4.0)
        # indicator of measure 1: 4 cells of width 0.25, height 1
        vals = np.zeros(16, dtype=complex)
        vals[4:8] = 1.0
        f = SampledField(g, vals)
        for p in (1, 2, 4, 7.5):
            assert lebesgue_norm(f, p) == pytest.approx(1.0)
        assert lebesgue_norm(f, INF) == 1.0

    def test_scaling_homogeneity(self):
        g = GridSpec(1, 16, 4.0)
        f = random_field(g, 1)
        scaled = SampledField(g, (2.5 - 1j) * f.values)
        assert lebesgue_norm(scaled, 3) == pytest.approx(abs(2.5 - 1j) * lebesgue_norm(f, 3))

    def test_eight_point_hand_oracle(self):
        g = GridSpec(1, 8, 2.0)
        f = random_field(g, 2)
        direct = (np.sum(np.abs(f.values) ** 3) * 0.25) ** (1 / 3)
        assert lebesgue_norm(f, 3) == direct


class TestMixed:
    def test_constant_on_unit_window(self):
        g = GridSpec(1, 16, 1.0)  # total measure 1
        times = np.linspace(0.0, 1.0, 9)
        u = SpaceTimeField(g, times, np.ones((9, 16), dtype=complex))
        for q in (2, 4, INF):
            for r in (2, 3, INF):
                assert mixed_norm(u, MixedNormSpec(q, r, (0.0, 1.0))) == pytest.approx(1.0)

    def test_q_equals_r_is_space_time_norm(self):
        g = GridSpec(1, 32, 8.0)
        rng = np.random.default_rng(3)
        times = np.sort(rng.uniform(0, 1, 7))
        u = SpaceTimeField(g, times, rng.standard_normal((7, 32)) + 1j * rng.standard_normal((7, 32)))
        m = mixed_norm(u, MixedNormSpec(3, 3, (0.0, 1.0)))
        assert m == pytest.approx(space_time_norm(u, 3), rel=1e-12)

    def test_four_by_three_nested_sum_oracle(self):
        g = GridSpec(1, 8, 2.0)
        rng = np.random.default_rng(4)
        times = np.array([0.0, 0.4, 1.0])
        vals = rng.standard_normal((3, 8)) + 1j * rng.standard_normal((3, 8))
        u = SpaceTimeField(g, times, vals)
        q, r = 4.0, 2.0
        w = trapezoid_weights(times)
        inner = np.array([np.sum(w * np.abs(vals[:, j]) ** r) ** (1 / r) for j in range(8)])
        oracle = (np.sum(inner**q) * g.spacing) ** (1 / q)
        assert mixed_norm(u, MixedNormSpec(4, 2, (0.0, 1.0))) == pytest.approx(oracle, rel=1e-14)

    def test_monotone_in_integrand(self):
        g = GridSpec(1, 16, 4.0)
        rng = np.random.default_rng(5)
        times = np.linspace(0, 1, 5)
        small = rng.standard_normal((5, 16))
        big = small + rng.uniform(0.1, 1.0, size=(5, 16)) * np.sign(small + 1e-9)
        u = SpaceTimeField(g, times, small.astype(complex))
        v = SpaceTimeField(g, times, (np.abs(big)).astype(complex))
        assert mixed_norm(u, MixedNormSpec(4, 2)) <= mixed_norm(v, MixedNormSpec(4, 2))

    def test_needs_two_samples_for_finite_r(self):
        g = GridSpec(1, 16, 4.0)
        u = SpaceTimeField(g, [0.5], np.ones((1, 16), dtype=complex))
        with pytest.raises(ValueError):
            mixed_norm(u, MixedNormSpec(2, 2, (0.0, 1.0)))
        assert mixed_norm(u, MixedNormSpec(2, INF, (0.0, 1.0))) > 0


class TestBesov:
    def make_block_field(self, grid, k, seed=0):
        lo, hi = lp_plateau(k)
        xi = grid.freq_axis()
        sel = (np.abs(xi) >= lo) & (np.abs(xi) <= hi)
        rng = np.random.default_rng(seed)
        spec = np.zeros(grid.shape, dtype=complex)
        spec[sel] = rng.standard_normal(sel.sum()) + 1j * rng.standard_normal(sel.sum())
        return inverse_transform(SpectralField(grid, spec))

    def test_single_block_weighting(self):
        g = GridSpec(1, 256, 16.0)
        k = 3
        f = self.make_block_field(g, k, 1)
        alpha = 0.75
        got = besov_norm(f, 2, alpha, 2)
        assert got == pytest.approx(2.0 ** (k * alpha) * lebesgue_norm(f, 2), rel=1e-10)

    def test_alpha0_nu2_matches_l2_for_orthogonal_blocks(self):
        g = GridSpec(1, 256, 16.0)
        f2 = self.make_block_field(g, 2, 2)
        f4 = self.make_block_field(g, 4, 3)
        f = SampledField(g, f2.values + f4.values)
        assert besov_norm(f, 2, 0.0, 2) == pytest.approx(lebesgue_norm(f, 2), rel=1e-10)

    def test_nu_nesting_on_random_fields(self):
        g = GridSpec(1, 128, 16.0)
        for seed in range(100):
            f = random_field(g, seed)
            n1 = besov_norm(f, 2, 0.3, 1)
            n2 = besov_norm(f, 2, 0.3, 2)
            n4 = besov_norm(f, 2, 0.3, 4)
            assert n4 <= n2 * (1 + 1e-12) and n2 <= n1 * (1 + 1e-12)


class TestSobolev:
    def test_alpha_zero_is_lebesgue(self):
        g = GridSpec(1, 64, 16.0)
        f = random_field(g, 6)
        for p in (2, 4):
            assert sobolev_norm(f, p, 0.0) == pytest.approx(lebesgue_norm(f, p), rel=1e-12)

    def test_plane_wave_eigenvalue(self):
        g = GridSpec(1, 64, 16.0)
        xi0 = g.freq_axis()[7]
        f = SampledField(g, np.exp(1j * xi0 * g.axis()))
        alpha = 1.3
        expect = (1 + xi0**2) ** (alpha / 2) * lebesgue_norm(f, 2)
        assert sobolev_norm(f, 2, alpha) == pytest.approx(expect, rel=1e-10)

    def test_band_bump_scaling_slope(self):
        # ratio sobolev/lebesgue grows like lam^alpha for band-lam bumps
        from schrodlab.extremizers import knapp_traveling
        from schrodlab.normlab import fit_power_log

        alpha = 0.8
        pts = []
        for lam in (8, 16, 32, 64):
            f = knapp_traveling(lam, 1)
            pts.append((lam, sobolev_norm(f, 2, alpha) / lebesgue_norm(f, 2)))
        fit = fit_power_log(pts)
        assert abs(fit.a - alpha) < 0.05
