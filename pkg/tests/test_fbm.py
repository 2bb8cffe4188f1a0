import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pickands.errors import EmbeddingNotPSD
from pickands.fbm import (
    GridSpec,
    build_spectral_plan,
    fbm_covariance,
    fgn_autocovariance,
    sample_path,
    synthesize,
    window_indices,
)
from pickands.montecarlo import campaign, replication_rng


# ---------------------------------------------------------------------------
# Covariance oracles
# ---------------------------------------------------------------------------


class TestCovariance:
    def test_brownian_unit(self):
        assert fbm_covariance(1.0, 1.0, 1.0) == 1.0

    @pytest.mark.parametrize("alpha", [0.3, 1.0, 1.7, 2.0])
    @pytest.mark.parametrize("s", [-2.5, 0.0, 3.0])
    def test_zero_time(self, alpha, s):
        assert fbm_covariance(alpha, 0.0, s) == 0.0

    def test_alpha2_is_product(self):
        assert fbm_covariance(2.0, 2.0, 3.0) == pytest.approx(6.0, abs=1e-15)

    @pytest.mark.parametrize("alpha", [0.0, -1.0, 2.5])
    def test_domain(self, alpha):
        with pytest.raises(ValueError):
            fbm_covariance(alpha, 1.0, 1.0)

    def test_fgn_brownian(self):
        assert fgn_autocovariance(1.0, 0.5, 0) == 0.5
        assert fgn_autocovariance(1.0, 0.5, 3) == 0.0

    def test_fgn_alpha_1_5(self):
        assert fgn_autocovariance(1.5, 1.0, 1) == pytest.approx((2**1.5 - 2) / 2, rel=1e-14)
        assert fgn_autocovariance(1.5, 1.0, 1) == pytest.approx(0.414214, abs=1e-6)

    @given(
        alpha=st.floats(0.05, 2.0),
        delta=st.floats(0.01, 3.0),
        k=st.integers(0, 50),
    )
    def test_fgn_is_differenced_covariance(self, alpha, delta, k):
        # Cov(B(d)-B(0), B((k+1)d)-B(kd)) from the fBm covariance.
        t1, t0 = delta, 0.0
        s1, s0 = (k + 1) * delta, k * delta
        direct = (
            fbm_covariance(alpha, t1, s1)
            - fbm_covariance(alpha, t1, s0)
            - fbm_covariance(alpha, t0, s1)
            + fbm_covariance(alpha, t0, s0)
        )
        scale = delta**alpha * (k + 1) ** alpha
        assert fgn_autocovariance(alpha, delta, k) == pytest.approx(direct, abs=1e-11 * scale)


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------


class TestGrid:
    def test_points(self):
        g = GridSpec(0.5, 0.25, 1.0)
        np.testing.assert_allclose(g.times, [-1, -0.75, -0.5, -0.25, 0, 0.25, 0.5, 0.75, 1])
        assert g.size == 9 and g.n_left == g.n_right == 4
        assert g.times[g.zero_index] == 0.0

    def test_floor_is_robust_to_representation(self):
        assert GridSpec(1.0, 0.1, 0.3).n_side == 3

    def test_non_multiple_horizon(self):
        assert GridSpec(1.0, 0.4, 1.0).size == 5

    @pytest.mark.parametrize("kw", [
        dict(alpha=0.0, delta=0.1, T=1.0),
        dict(alpha=2.1, delta=0.1, T=1.0),
        dict(alpha=1.0, delta=0.0, T=1.0),
        dict(alpha=1.0, delta=1.0, T=0.5),
    ])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            GridSpec(**kw)

    def test_window_indices(self):
        g = GridSpec(1.0, 0.25, 2.0)
        idx = window_indices(g, 0.5, 1.0)
        np.testing.assert_allclose(g.times[idx], [-1.0, -0.5, 0.0, 0.5, 1.0])
        with pytest.raises(ValueError):
            window_indices(g, 0.3, 1.0)
        with pytest.raises(ValueError):
            window_indices(g, 0.5, 3.0)


# ---------------------------------------------------------------------------
# Spectral plan
# ---------------------------------------------------------------------------


class TestSpectralPlan:
    @pytest.mark.parametrize("T", [1.0, 3.0, 10.0])
    def test_brownian_flat_spectrum(self, T):
        plan = build_spectral_plan(GridSpec(1.0, 0.5, T))
        np.testing.assert_allclose(plan.eigenvalues, 0.5, rtol=1e-12)

    def test_small_rough(self):
        plan = build_spectral_plan(GridSpec(0.5, 1.0, 4.0))  # 8 increments
        assert plan.n == 8 and plan.m == 16
        assert np.all(plan.eigenvalues >= 0)

    def test_large_smooth(self):
        plan = build_spectral_plan(GridSpec(1.9, 1.0, 2.0**13))  # 2^14 increments
        assert plan.n == 2**14
        assert np.all(plan.eigenvalues >= 0)

    @given(alpha=st.floats(0.05, 1.95), n_side=st.integers(1, 300))
    @settings(max_examples=40, deadline=None)
    def test_embedding_psd_and_power_of_two(self, alpha, n_side):
        plan = build_spectral_plan(GridSpec(alpha, 0.1, n_side * 0.1))
        assert plan.m >= 2 * plan.n and plan.m & (plan.m - 1) == 0
        assert plan.gamma[0] == pytest.approx(0.1**alpha, rel=1e-14)
        assert np.all(plan.eigenvalues >= 0)

    def test_plan_is_read_only(self):
        plan = build_spectral_plan(GridSpec(0.7, 0.5, 2.0))
        with pytest.raises(ValueError):
            plan.eigenvalues[0] = -1.0

    def test_alpha2_rejected(self):
        with pytest.raises(ValueError):
            build_spectral_plan(GridSpec(2.0, 0.5, 2.0))

    def test_not_psd_detected(self, monkeypatch):
        # Lag-1 correlation of -0.9 makes the circulant indefinite.
        import pickands.fbm as fbm

        def bad(alpha, delta, k):
            k = np.asarray(k, dtype=float)
            return np.where(k == 1, -0.9, np.where(k == 0, 1.0, 0.0))

        monkeypatch.setattr(fbm, "fgn_autocovariance", bad)
        with pytest.raises(EmbeddingNotPSD):
            fbm.build_spectral_plan(GridSpec(0.5, 1.0, 4.0))


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


class TestSamplePath:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
    def test_pinned_at_zero(self, alpha):
        g = GridSpec(alpha, 0.25, 3.0)
        plan = None if alpha in (1.0, 2.0) else build_spectral_plan(g)
        for seed in range(5):
            p = sample_path(plan, g, np.random.default_rng(seed))
            assert p.b[g.zero_index] == 0.0
            assert p.z[g.zero_index] == 0.0
            assert p.b.shape == p.z.shape == (g.size,)
            np.testing.assert_allclose(p.z, math.sqrt(2) * p.b - np.abs(g.times) ** alpha)

    def test_alpha2_is_line(self):
        g = GridSpec(2.0, 0.5, 3.0)
        rng = np.random.default_rng(3)
        slope = np.random.default_rng(3).standard_normal()
        p = sample_path(None, g, rng)
        np.testing.assert_allclose(p.b, slope * g.times, rtol=0, atol=1e-15)

    def test_alpha1_is_cumulative_sum(self):
        g = GridSpec(1.0, 0.5, 2.0)
        normals = np.random.default_rng(4).standard_normal(8)
        p = sample_path(None, g, np.random.default_rng(4))
        w = np.concatenate([[0.0], np.cumsum(math.sqrt(0.5) * normals)])
        np.testing.assert_allclose(p.b, w - w[4], atol=1e-15)

    def test_deterministic(self):
        g = GridSpec(0.8, 0.1, 2.0)
        a = sample_path(build_spectral_plan(g), g, replication_rng(11, 3))
        b = sample_path(build_spectral_plan(g), g, replication_rng(11, 3))
        assert np.array_equal(a.b, b.b)

    def test_shared_plan_matches_fresh_plan(self):
        g = GridSpec(1.3, 0.2, 2.0)
        shared = build_spectral_plan(g)
        for i in range(4):
            a = sample_path(shared, g, replication_rng(5, i))
            b = sample_path(build_spectral_plan(g), g, replication_rng(5, i))
            assert np.array_equal(a.b, b.b)

    def test_plan_grid_mismatch(self):
        plan = build_spectral_plan(GridSpec(0.5, 0.5, 2.0))
        with pytest.raises(ValueError):
            sample_path(plan, GridSpec(0.5, 0.5, 3.0), np.random.default_rng(0))

    def test_batch_matches_single(self):
        g = GridSpec(0.6, 0.25, 2.0)
        plan = build_spectral_plan(g)
        rows = [replication_rng(2, i).standard_normal(2 * plan.m) for i in range(6)]
        batch = synthesize(np.array(rows), g, plan)
        for i, r in enumerate(rows):
            assert np.array_equal(batch[i], synthesize(r[None, :], g, plan)[0])


def _cov_within_3se(alpha, reps, seed, method="auto"):
    g = GridSpec(alpha, 0.5, 1.0)  # 5 points
    times = g.times
    res = campaign(g, reps, seed, lambda z: (z + g.drift) / math.sqrt(2), keep_samples=True)
    b = res.samples
    n = b.shape[0]
    mean_ok = np.all(np.abs(b.mean(0)) <= 3 * b.std(0, ddof=1) / math.sqrt(n) + 1e-300)
    prods = b[:, :, None] * b[:, None, :]
    emp = prods.mean(0)
    se = prods.std(0, ddof=1) / math.sqrt(n)
    exact = fbm_covariance(alpha, times[:, None], times[None, :])
    return mean_ok, np.abs(emp - exact) <= 3 * se + 1e-15


class TestExactness:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_mean_and_covariance(self, alpha):
        mean_ok, cov_ok = _cov_within_3se(alpha, 20_000, 101)
        assert mean_ok
        assert cov_ok.all(), cov_ok

    def test_spectral_route_reproduces_brownian(self):
        # alpha = 1 through the FFT path must give white-noise increments.
        g = GridSpec(1.0, 0.5, 2.0)
        plan = build_spectral_plan(g)
        rng = np.random.default_rng(8)
        b = np.array([sample_path(plan, g, rng, method="spectral").b for _ in range(20_000)])
        incr = np.diff(b, axis=1)
        c = np.cov(incr.T)
        se = 0.5 * math.sqrt(2 / len(b))
        np.testing.assert_allclose(c, 0.5 * np.eye(8), atol=4 * se)
