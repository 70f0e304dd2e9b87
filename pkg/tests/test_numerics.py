import math
from fractions import Fraction as F

import numpy as np
import pytest

from nrestrict.exponents import critical_exponent, knapp_certificates_all
from nrestrict.numerics import (BUMP_D1, BUMP_D2, SumBoundTrial, bump,
                                airy_prefactor_scan, airy_scaling_check,
                                critical_value_identity_check,
                                dominance_decay, dominance_probe,
                                knapp_box_probe, lambda_grid, log_log_fit,
                                oscillatory_integral_1d, oscillatory_sum_bound,
                                random_double_trial, random_single_trial,
                                reference_double_trial, smooth_plateau,
                                surface_decay_fit, van_der_corput_fit)
from nrestrict.parser import parse_expression


def P(text):
    return parse_expression(text).poly


SHORT = lambda_grid(1e2, 1e5, 16)


class TestQuadrature:
    def test_fresnel_prefactor(self):
        # closed form: |int_0^1 e^{i lam s^2}| ~ 0.5 sqrt(pi/lam)
        lam = 2e4
        val = abs(oscillatory_integral_1d(
            lambda s: s * s, lambda s: np.ones_like(s), 0.0, 1.0, lam))
        assert val * math.sqrt(lam) == pytest.approx(0.5 * math.sqrt(math.pi),
                                                     rel=0.02)

    def test_linear_phase_exact(self):
        # (e^{i lam} - 1)/(i lam), sampled at lam with |sin(lam/2)| = 1
        lam = (2 * 600 + 1) * math.pi
        val = abs(oscillatory_integral_1d(
            lambda s: s, lambda s: np.ones_like(s), 0.0, 1.0, lam))
        assert val == pytest.approx(2.0 / lam, rel=1e-9)

    def test_tolerance_halving_self_consistency(self):
        for lam in (1e3, 3e4):
            a = abs(oscillatory_integral_1d(
                lambda s: s ** 3, lambda s: bump(s), -1.0, 1.0, lam,
                tau=math.pi))
            b = abs(oscillatory_integral_1d(
                lambda s: s ** 3, lambda s: bump(s), -1.0, 1.0, lam,
                tau=math.pi / 2))
            assert abs(a - b) <= 0.01 * max(a, 1e-12)


class TestVanDerCorput:
    def test_monomials_and_monotonicity(self):
        fits = {}
        for m in (2, 3, 5):
            fit = van_der_corput_fit(m, [0] * m + [1], lams=SHORT)
            assert fit.verdict == "pass"
            assert abs(fit.fitted_exponent - 1 / m) <= 0.05
            fits[m] = fit.fitted_exponent
        assert fits[2] > fits[3] > fits[5]

    def test_no_stationary_point(self):
        lams = np.array([(2 * k + 1) * math.pi
                         for k in (40, 90, 200, 450, 1000, 2200, 5000, 11000,
                                   25000, 55000)])
        fit = van_der_corput_fit(1, [0, 1], lams=lams, expected=1.0)
        assert abs(fit.fitted_exponent - 1.0) <= 0.05

    def test_rejects_unnormalized_phase(self):
        with pytest.raises(ValueError):
            van_der_corput_fit(2, [0, 0, F(1, 4)], lams=SHORT)

    def test_rejects_short_grid(self):
        with pytest.raises(ValueError):
            van_der_corput_fit(2, [0, 0, 1], lams=lambda_grid(1e2, 1e3, 8))


class TestSurfaceDecay:
    def test_square_reduces_and_fits(self):
        fit = surface_decay_fit(P("(x2 - x1^2)^2"), (0, 0, 1), lams=SHORT,
                                expected=0.5)
        assert fit.verdict == "pass"
        assert abs(fit.fitted_exponent - 0.5) <= 0.07

    def test_sum_of_squares_separable(self):
        fit = surface_decay_fit(P("x1^2 + x2^2"), (0, 0, 1), lams=SHORT,
                                expected=1.0)
        assert fit.verdict == "pass"

    def test_expected_defaults_to_inverse_height(self):
        fit = surface_decay_fit(P("(x2 - x1^2)^2"), (0, 0, 1), lams=SHORT)
        assert fit.expected_exponent == pytest.approx(0.5)

    def test_magnitude_matches_one_dimensional_oracle(self):
        # after the exact shear the integral is int e^{i lam u^2} G(u) du with
        # G(0) = int bump(y/h)^... the top-lambda magnitude must match the
        # stationary-phase value G(0) sqrt(pi/lam) within a few percent
        hw = 0.5
        fit = surface_decay_fit(P("(x2 - x1^2)^2"), (0, 0, 1), lams=SHORT)
        lam = fit.lambda_grid[-1]
        y = np.linspace(-hw, hw, 20001)
        g0 = getattr(np, "trapezoid", np.trapz)(bump(y / hw) * bump((y ** 2) / hw), y)
        predicted = g0 * math.sqrt(math.pi / lam)
        assert fit.magnitudes[-1] == pytest.approx(predicted, rel=0.03)

    def test_fallback_2d_matches_reduction(self):
        # moderate frequency: the direct quadtree agrees with the reduction
        from nrestrict.numerics import oscillatory_integral_2d, _poly_xy_eval
        phi = P("(x2 - x1^2)^2")
        f = _poly_xy_eval(phi)
        hw = 0.5
        amp = lambda x, y: bump(x / hw) * bump(y / hw)
        lam = 400.0
        direct = abs(oscillatory_integral_2d(f, amp, (-hw, hw, -hw, hw), lam))
        fit = surface_decay_fit(phi, (0, 0, 1), lams=np.geomspace(4.0, lam, 5))
        assert direct == pytest.approx(fit.magnitudes[-1], rel=0.01)


class TestAiry:
    def test_three_regimes(self):
        near = airy_scaling_check(0.0, lams=lambda_grid(1e2, 1e5, 16))
        assert near.verdict == "pass"
        assert abs(near.fitted_exponent - 1 / 3) <= 0.04
        off = airy_scaling_check(0.5, lams=lambda_grid(1e2, 1e5, 16))
        assert off.verdict == "pass"
        assert abs(off.fitted_exponent - 0.5) <= 0.05
        opp = airy_scaling_check(-0.5)
        assert opp.verdict == "pass" and opp.fitted_exponent >= 2.0

    def test_straddling_inconclusive(self):
        fit = airy_scaling_check(0.5, lams=lambda_grid(1.0, 1e3, 8))
        assert fit.verdict == "inconclusive"

    def test_prefactor_tracks_quarter_power(self):
        slope = airy_prefactor_scan([0.2, 0.25, 0.3, 0.35, 0.4], lam0=2e4)
        assert slope == pytest.approx(-0.25, abs=0.05)


class TestSumBounds:
    def test_geometric_identity(self):
        trial = SumBoundTrial("single", (F(1),), ((F(1),),), (0.0,), (1.0,),
                              (64.0,), None)
        res = oscillatory_sum_bound(trial, levels=[16, 64, 256, 1024])
        assert res.running_sup[-1] <= 2.0 + 1e-9
        assert res.max_growth <= 1.10

    def test_single_trials(self):
        for i in range(6):
            res = oscillatory_sum_bound(random_single_trial(50 + i), seed=i,
                                        levels=[2 ** k for k in range(6, 13)])
            assert res.max_growth <= 1.10, res.sup_ratios

    def test_double_trial_small(self):
        res = oscillatory_sum_bound(random_double_trial(99), seed=1,
                                    levels=[2 ** k for k in range(6, 11)])
        assert res.max_growth <= 1.10

    def test_reference_vectors_satisfy_independence(self):
        trial = reference_double_trial()
        a1, a2 = trial.alphas
        for b1, b2 in trial.betas:
            assert a1 * b2 - a2 * b1 != 0

    def test_bump_norm_constants(self):
        z = np.linspace(-1, 1, 200001)
        vals = bump(z)
        d1 = np.max(np.abs(np.gradient(vals, z)))
        d2 = np.max(np.abs(np.gradient(np.gradient(vals, z), z)))
        assert d1 == pytest.approx(BUMP_D1, rel=1e-3)
        assert d2 == pytest.approx(BUMP_D2, rel=1e-2)

    def test_plateau_is_flat_and_compact(self):
        z = np.array([-1.2, -1.0, -0.5, 0.0, 0.3, 0.5, 0.75, 1.0, 2.0])
        vals = smooth_plateau(z, flat=0.5)
        assert np.all(vals[np.abs(z) <= 0.5] == 1.0)
        assert np.all(vals[np.abs(z) >= 1.0] == 0.0)
        assert 0 < smooth_plateau(np.array([0.75]))[0] < 1


class TestDominance:
    def test_example_12_2_between_edges(self):
        phi = P("(x2 - x1^3)*(x2 - x1^4)^3")
        errs = dominance_decay(phi, (F(3), 3), [6, 7, 8, 9, 10], 0.1)
        assert errs[2] < 0.1
        for a, b in zip(errs, errs[1:]):
            assert b <= 0.75 * a

    def test_pure_power_exact(self):
        err = dominance_probe(P("x2^4"), (F(0), 4), 8, 0.1, horizontal_a=F(2))
        assert err == 0.0

    def test_three_term_fixture_scales_like_2_to_minus_m(self):
        phi = P("x2^4 + x1^3*x2^3 + x1^15")
        ms = [6, 8, 10, 12]
        errs = dominance_decay(phi, (F(3), 3), ms, 0.1)
        for m, e in zip(ms, errs):
            assert e <= 4.0 * 2.0 ** (-m)

    def test_incompatible_region_reported(self):
        phi = P("(x2 - x1^3)*(x2 - x1^4)^3")
        with pytest.raises(ValueError):
            dominance_probe(phi, (F(3), 3), 400, 0.1)


class TestKnappBox:
    def test_example_12_2_first_edge(self):
        phi = P("(x2 - x1^2 - x1^3)*(x2 - x1^2 - x1^4)^3")
        rep = critical_exponent(phi)
        certs = knapp_certificates_all(phi, rep.coords.psi)
        edge1 = [c for c in certs if c.target == "edge" and c.edge_index == 1][0]
        res = knapp_box_probe(phi, edge1)
        assert abs(res["beta"] - 1.0) <= 0.05
        assert res["min_ratio"] > 0.1

    def test_principal_line_box(self):
        phi = P("(x2 - x1^2)^2")
        rep = critical_exponent(phi)
        cert = [c for c in knapp_certificates_all(phi, rep.coords.psi)
                if c.target == "principal"][0]
        res = knapp_box_probe(phi, cert)
        assert abs(res["beta"] - 1.0) <= 0.05


class TestCriticalValueIdentity:
    def test_examples(self):
        assert critical_value_identity_check([0, 0, 1], [0.3]) == 0.0
        assert critical_value_identity_check([0, -1, 0, 1], [1.1]) < 1e-12

    def test_random_quintics(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            coeffs = rng.uniform(-2, 2, 6)
            dev = critical_value_identity_check(coeffs,
                                                rng.uniform(-1.5, 1.5, 100))
            assert dev < 1e-12


class TestLogLogFit:
    def test_recovers_slope(self):
        lams = lambda_grid(1e2, 1e5, 24)
        mags = 3.0 * lams ** -0.37
        exp, resid = log_log_fit(lams, mags)
        assert exp == pytest.approx(0.37, abs=1e-9)
        assert resid < 1e-12


class TestThreadDeterminism:
    def test_results_independent_of_thread_count(self, monkeypatch):
        lams = lambda_grid(1e2, 1e4, 10)
        monkeypatch.setenv("NRESTRICT_THREADS", "1")
        a = surface_decay_fit(P("(x2 - x1^2)^2"), (0, 0, 1), lams=lams)
        monkeypatch.setenv("NRESTRICT_THREADS", "4")
        b = surface_decay_fit(P("(x2 - x1^2)^2"), (0, 0, 1), lams=lams)
        assert a.magnitudes == b.magnitudes
        assert a.fitted_exponent == b.fitted_exponent
