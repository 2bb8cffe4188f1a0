import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from pickands.closedform import (
    H1,
    H2,
    alpha1_rate_constant,
    alpha2_rate_constant,
    closed_form,
    h1_delta,
    h2_delta,
    normal_cdf,
    normal_sf,
    v_eta,
    v_eta_prime,
    zeta_half,
)

# Independent 40-digit summation of the alpha = 1 series at delta = 0.5 (1200 terms,
# remainder below 1e-60), frozen.
H1_HALF = 0.56037022842005322324


class TestNormalCdf:
    def test_centre(self):
        assert normal_cdf(0.0) == 0.5

    @pytest.mark.parametrize("x", [0.1, 1.0, 3.7, 8.0, 20.0])
    def test_symmetry(self, x):
        assert abs(normal_cdf(x) + normal_cdf(-x) - 1.0) <= 1e-15

    def test_quadrature_oracle(self):
        x = 1 / math.sqrt(2)
        half, _ = integrate.quad(lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi), 0.0, x)
        assert normal_cdf(x) == pytest.approx(0.5 + half, rel=1e-14)
        assert normal_cdf(x) == pytest.approx(0.7602499389, abs=1e-10)

    @pytest.mark.parametrize("x", [-30.0, -10.0, -3.0, -0.5, 0.5, 2.0, 6.0])
    def test_relative_accuracy(self, x):
        mpmath.mp.dps = 40
        exact = float(mpmath.ncdf(x))
        assert normal_cdf(x) == pytest.approx(exact, rel=1e-14)
        assert normal_sf(-x) == pytest.approx(exact, rel=1e-14)

    def test_vectorised(self):
        np.testing.assert_allclose(normal_cdf(np.array([0.0, 1.0])), [0.5, normal_cdf(1.0)])


class TestH1:
    def test_oracle_value(self):
        v = h1_delta(0.5)
        assert v.value == pytest.approx(H1_HALF, rel=1e-13)
        assert v.truncation_bound <= 1e-12 and v.value > 0

    def test_live_oracle(self):
        # Same series, summed independently in extended precision.
        mpmath.mp.dps = 30
        d = mpmath.mpf("0.75")
        s = mpmath.fsum(mpmath.erfc(mpmath.sqrt(d * k) / 2) / 2 / k for k in range(1, 900))
        assert h1_delta(0.75).value == pytest.approx(float(1 / (d * mpmath.exp(2 * s))), rel=1e-13)

    def test_small_delta_limit(self):
        v = h1_delta(1e-6)
        assert 0.999 < v.value < 1.0
        assert v.truncation_bound <= 1e-12

    def test_decreasing(self):
        values = [h1_delta(0.1 * k).value for k in range(1, 21)]
        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("d", [0.0, -1.0])
    def test_domain(self, d):
        with pytest.raises(ValueError):
            h1_delta(d)


class TestH2:
    def test_unit_step(self):
        v = h2_delta(1.0)
        assert v.value == pytest.approx(2 * (normal_cdf(1 / math.sqrt(2)) - 0.5), rel=1e-14)
        assert v.value == pytest.approx(0.5204999, abs=1e-7)
        assert v.truncation_bound == 0.0 and v.terms_used == 0

    def test_small_delta_limit(self):
        assert abs(h2_delta(1e-8).value - 1 / math.sqrt(math.pi)) <= 1e-10

    @pytest.mark.parametrize("d", [0.3, 1.0, 2.5])
    def test_matches_cdf_form(self, d):
        assert h2_delta(d).value == pytest.approx(2 / d * (normal_cdf(d / math.sqrt(2)) - 0.5), rel=1e-13)

    def test_decreasing(self):
        values = [h2_delta(d).value for d in np.linspace(0.01, 3.0, 300)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_dispatch(self):
        assert closed_form(2.0, 0.5) == h2_delta(0.5)
        assert closed_form(1.0, 0.5) == h1_delta(0.5)
        with pytest.raises(ValueError):
            closed_form(1.5, 0.5)


def _eta_oracle(n=10_000, levels=6):
    """Alternating eta(1/2) series: partial sums, then repeated averaging of neighbours."""
    k = np.arange(1, n + levels + 1, dtype=float)
    terms = (-1.0) ** (k + 1) / np.sqrt(k)
    partial = np.cumsum(terms)[n - 1:]
    for _ in range(levels):
        partial = 0.5 * (partial[1:] + partial[:-1])
    return partial[0]


class TestZeta:
    def test_against_averaged_series(self):
        zeta = _eta_oracle() / (1 - math.sqrt(2))
        assert abs(zeta_half() - zeta) <= 1e-10
        assert abs(zeta_half() + 1.46035450880) <= 1e-10

    def test_against_mpmath(self):
        assert zeta_half() == pytest.approx(float(mpmath.zeta(0.5)), rel=1e-14)

    def test_rate_constants(self):
        assert alpha1_rate_constant() == pytest.approx(0.823917, abs=1e-6)
        assert alpha2_rate_constant() == pytest.approx(0.0470159, abs=5e-7)
        assert H1 == 1.0 and H2 == pytest.approx(0.5641896, abs=1e-7)


class TestV:
    @pytest.mark.parametrize("eta", [0.05, 0.1, 0.5, 1.0, 2.0, 5.0])
    def test_reciprocal_of_h1(self, eta):
        assert h1_delta(eta).value * v_eta(eta) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("eta", [0.1, 0.5, 1.0, 2.0])
    def test_positive_derivative(self, eta):
        assert v_eta_prime(eta) > 0

    @pytest.mark.parametrize("eta", np.linspace(0.1, 2.0, 12))
    def test_finite_difference(self, eta):
        h = 1e-5
        fd = (v_eta(eta + h) - v_eta(eta - h)) / (2 * h)
        assert v_eta_prime(eta) == pytest.approx(fd, rel=1e-6)

    @pytest.mark.parametrize("f", [v_eta, v_eta_prime])
    def test_domain(self, f):
        with pytest.raises(ValueError):
            f(0.0)


class TestRates:
    def test_alpha1_ratio_moves_toward_limit(self):
        limit = alpha1_rate_constant()
        ratios = [(1 - h1_delta(d).value) / math.sqrt(d) for d in (1e-2, 1e-3, 1e-4)]
        assert all(b > a for a, b in zip(ratios, ratios[1:]))
        assert all(r < limit for r in ratios)

    def test_alpha1_ratio_close_at_tiny_delta(self):
        # Next-order term is O(sqrt(delta)), so 1e-3 accuracy needs delta ~ 1e-6.
        assert abs((1 - h1_delta(1e-6).value) / 1e-3 - alpha1_rate_constant()) <= 1e-3

    def test_alpha2_ratio(self):
        d = 1e-2
        assert abs((H2 - h2_delta(d).value) / d**2 - alpha2_rate_constant()) <= 1e-4
