from fractions import Fraction

import numpy as np
import pytest

from cuecrit import spacing
from cuecrit.errors import CapabilityError, StatisticsError
from cuecrit.spacing import (GapProbabilitySeries, compute_gap_series,
                             gap_series, ipx_coefficient_exact,
                             ipx_coefficients, ipx_small_x, p_cue, read_cache,
                             sigma_form_series, trust_radius, write_cache)
from cuecrit.stats import nearest_spacings, next_nearest_spacings, next_spacing_probe

F = Fraction


def nystrom_gap(s, nodes=60):
    """Reference E(s) = det(I - K) on (0, s) by Gauss-Legendre Nystrom.

    The sine kernel sin(pi(x-y))/(pi(x-y)) is entire, so the quadrature
    converges spectrally; 60 nodes are converged to ~1e-14 for s <= 3.
    Symmetrized with sqrt-weights to keep the matrix symmetric.
    """
    if s == 0.0:
        return 1.0
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * s * (x + 1.0)
    w = 0.5 * s * w
    kernel = np.sinc(x[:, None] - x[None, :])
    sw = np.sqrt(w)
    return float(np.linalg.det(np.eye(nodes) - sw[:, None] * kernel * sw[None, :]))


class TestKnownCoefficients:
    def test_leading_terms(self, series34):
        assert series34.coefficients[0] == {0: F(1)}
        assert series34.coefficients[1] == {0: F(-1)}
        assert series34.coefficients[2] == {}
        assert series34.coefficients[3] == {}

    def test_e_coefficients(self, series34):
        assert series34.e_coefficient(0) == {2: F(1, 36)}
        assert series34.e_coefficient(1) == {}
        assert series34.e_coefficient(2) == {4: F(-1, 675)}
        assert series34.e_coefficient(4) == {6: F(1, 17640)}

    def test_higher_orders(self, series34):
        assert series34.coefficients[9] == {6: F(-1, 291600)}
        assert series34.coefficients[10] == {8: F(-1, 637875)}

    def test_density_reconstruction(self, series34):
        # P(s) = E''(s): coefficient of s^(l+2) is (l+4)(l+3) E_l
        p2 = {p: 12 * c for p, c in series34.e_coefficient(0).items()}
        p4 = {p: 30 * c for p, c in series34.e_coefficient(2).items()}
        assert p2 == {2: F(1, 3)}
        assert p4 == {4: F(-2, 45)}


class TestDualRoute:
    def test_trace_and_sigma_agree(self):
        # two independent derivations of the same expansion must agree
        # term by term in exact arithmetic
        a = compute_gap_series(14)
        b = sigma_form_series(14)
        assert a.coefficients == b.coefficients

    def test_sigma_order_cap(self):
        with pytest.raises(CapabilityError, match="capped"):
            sigma_form_series(26)

    def test_sigma_rejects_tiny_order(self):
        with pytest.raises(ValueError):
            sigma_form_series(3)


class TestSeriesObject:
    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="count"):
            GapProbabilitySeries(max_order=4, coefficients=({0: F(1)},))

    def test_rejects_wrong_leading_terms(self):
        coeffs = ({0: F(2)}, {0: F(-1)}, {}, {}, {2: F(1, 36)})
        with pytest.raises(ValueError, match="1 - s"):
            GapProbabilitySeries(max_order=4, coefficients=coeffs)

    def test_rejects_nonvanishing_s2(self):
        coeffs = ({0: F(1)}, {0: F(-1)}, {0: F(1)}, {}, {2: F(1, 36)})
        with pytest.raises(ValueError, match="vanish"):
            GapProbabilitySeries(max_order=4, coefficients=coeffs)

    def test_truncation(self, series34):
        short = series34.truncated(14)
        assert short.max_order == 14
        assert short.coefficients == series34.coefficients[:15]
        with pytest.raises(CapabilityError, match="extend"):
            short.truncated(20)

    def test_e_coefficient_bounds(self, series34):
        with pytest.raises(ValueError):
            series34.e_coefficient(-1)
        with pytest.raises(CapabilityError, match="needs order"):
            series34.e_coefficient(31)

    def test_evaluate_derivative_consistency(self, series34):
        s, h = 0.8, 1e-6
        fd = (series34.evaluate(s + h) - series34.evaluate(s - h)) / (2.0 * h)
        assert abs(series34.evaluate(s, derivative=1) - fd) <= 1e-8


class TestOracleAgreement:
    def test_series_matches_nystrom(self, series34):
        # truncation error is invisible at s <= 1 and ~7e-9 at s = 1.5
        assert abs(series34.evaluate(0.5) - nystrom_gap(0.5)) <= 1e-12
        assert abs(series34.evaluate(1.0) - nystrom_gap(1.0)) <= 1e-12
        assert abs(series34.evaluate(1.5) - nystrom_gap(1.5)) <= 1e-7

    def test_density_normalization(self):
        # integral of P over [0, 3] is E'(3) - E'(0) with E'(0) = -1; the
        # mass beyond s = 3 is below 1e-3, so both moments sit near 1
        h = 1e-4

        def e_prime(s):
            return (nystrom_gap(s + h) - nystrom_gap(s - h)) / (2.0 * h)

        mass = e_prime(3.0) + 1.0
        mean = 3.0 * e_prime(3.0) - nystrom_gap(3.0) + 1.0
        assert abs(mass - 1.0) <= 1e-3
        assert abs(mean - 1.0) <= 1e-3


class TestCache:
    def test_round_trip(self, series34, tmp_path):
        path = tmp_path / "cache.txt"
        write_cache(series34, path)
        again = read_cache(path)
        assert again.max_order == series34.max_order
        assert again.coefficients == series34.coefficients

    def test_rejects_foreign_header(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("# something else\n")
        with pytest.raises(ValueError, match="header"):
            read_cache(path)

    def test_compute_writes_back(self, tmp_path, monkeypatch):
        monkeypatch.setattr(spacing, "_shipped_series", lambda max_order: None)
        series = gap_series(6, cache_dir=str(tmp_path))
        assert (tmp_path / "gap_series_order6.txt").exists()
        assert read_cache(tmp_path / "gap_series_order6.txt").coefficients \
            == series.coefficients

    def test_cache_dir_takes_priority(self, tmp_path):
        # a doctored high-order term proves the file was read, not recomputed
        doctored = list(compute_gap_series(6).coefficients)
        doctored[6] = {0: F(7)}
        write_cache(GapProbabilitySeries(max_order=6, coefficients=tuple(doctored)),
                    tmp_path / "gap_series_order6.txt")
        series = gap_series(6, cache_dir=str(tmp_path))
        assert series.coefficients[6] == {0: F(7)}

    def test_shipped_matches_computation(self):
        assert gap_series(14).coefficients == compute_gap_series(14).coefficients

    def test_order_bounds(self):
        with pytest.raises(ValueError):
            gap_series(3)
        with pytest.raises(CapabilityError, match="beyond supported"):
            gap_series(41)


class TestTrustRegion:
    def test_radius_bracket(self, series34):
        assert 1.5 < trust_radius(series34) < 1.8

    def test_radius_definition(self, series34):
        # at the radius the last retained density term equals the budget
        r = trust_radius(series34)
        k = series34.max_order
        from cuecrit.exact import pp_eval
        last = abs(pp_eval(series34.coefficients[k])) * k * (k - 1)
        assert abs(last * r ** (k - 2) - 1e-3) <= 1e-15

    def test_density_at_zero(self, series34):
        assert p_cue(series34, 0.0) == 0.0

    def test_density_small_s_limit(self, series34):
        assert abs(p_cue(series34, 1e-4) / 1e-8 - np.pi ** 2 / 3.0) <= 1e-6

    def test_density_nonnegative(self, series34):
        r = trust_radius(series34)
        values = [p_cue(series34, s) for s in np.linspace(0.0, r, 50)]
        assert min(values) >= 0.0

    def test_rejects_beyond_radius(self, series34):
        with pytest.raises(ValueError, match="trust radius"):
            p_cue(series34, 2.0)
        with pytest.raises(ValueError):
            p_cue(series34, -0.1)


class TestIpxSeries:
    def test_exact_coefficients(self, series34):
        assert ipx_coefficient_exact(series34, 0) == (F(3, 2), {-1: F(8, 9)})
        assert ipx_coefficient_exact(series34, 2) == (F(5, 2), {-1: F(-64, 225)})
        assert ipx_coefficient_exact(series34, 4) == (F(7, 2), {-1: F(128, 2205)})

    def test_float_coefficients_match_exact(self, series34):
        coeffs = ipx_coefficients(series34, beta=0.5, l_max=6)
        assert coeffs[0] == (F(3, 2), pytest.approx(8.0 / (9.0 * np.pi), rel=1e-15))
        assert coeffs[1][1] == 0.0
        assert coeffs[2] == (F(5, 2), pytest.approx(-64.0 / (225.0 * np.pi), rel=1e-15))

    def test_leading_behavior(self, series34):
        value = ipx_small_x(series34, 0.01)
        lead = 8.0 / (9.0 * np.pi) * 0.01 ** 1.5
        two_term = lead - 64.0 / (225.0 * np.pi) * 0.01 ** 2.5
        assert abs(value - lead) <= 2e-6
        assert abs(value - two_term) <= 1e-8

    def test_frozen_values(self, series34):
        # regression anchors computed from the exact coefficients
        assert ipx_small_x(series34, 1.0) == pytest.approx(0.20795801939684302,
                                                           abs=1e-14)
        assert ipx_small_x(series34, 1.5) == pytest.approx(0.33030809096943864,
                                                           abs=1e-14)

    def test_array_input(self, series34):
        x = np.array([0.0, 0.5, 1.0])
        out = ipx_small_x(series34, x)
        assert out.shape == (3,)
        assert out[0] == 0.0
        assert np.all(np.diff(out) > 0.0)

    def test_validation(self, series34):
        with pytest.raises(ValueError, match=">= 0"):
            ipx_small_x(series34, -0.5)
        with pytest.raises(ValueError, match="beta"):
            ipx_coefficients(series34, beta=0.0)
        with pytest.raises(CapabilityError, match="l_max"):
            ipx_coefficients(series34, l_max=31)


class TestSpacingMonteCarlo:
    @pytest.mark.slow
    def test_nearest_spacing_histogram(self, series34, ens50):
        # bin mass from the series: integral of P over [a, b] is E'(b) - E'(a)
        pooled = nearest_spacings(ens50)
        edges = np.linspace(0.0, 1.7, 18)
        counts, _ = np.histogram(pooled, bins=edges)
        probs = np.array([series34.evaluate(b, derivative=1)
                          - series34.evaluate(a, derivative=1)
                          for a, b in zip(edges[:-1], edges[1:])])
        expected = pooled.size * probs
        sigma = np.sqrt(pooled.size * probs * (1.0 - probs))
        assert np.all(np.abs(counts - expected) <= 3.0 * sigma)

    def test_probe_recovers_synthetic_power(self):
        # inverse-CDF samples of density 8 s^7 on [0, 1]
        rng = np.random.default_rng(8)
        synth = rng.random(400_000) ** 0.125
        assert abs(next_spacing_probe(synth, (0.5, 1.0)) - 7.0) <= 0.2

    @pytest.mark.slow
    def test_next_nearest_small_s_exponent(self, ens50):
        # the S^7 regime starves narrower windows below the occupancy floor;
        # [0.5, 1.0] is the smallest default-floor window, where curvature
        # corrections pull the effective slope somewhat under 7
        pooled = next_nearest_spacings(ens50)
        slope = next_spacing_probe(pooled, (0.5, 1.0))
        assert 5.5 <= slope <= 8.5

    def test_probe_error_paths(self):
        rng = np.random.default_rng(9)
        sample = rng.random(10_000)
        with pytest.raises(StatisticsError, match="invalid window"):
            next_spacing_probe(sample, (0.5, 0.2))
        with pytest.raises(StatisticsError, match="need"):
            next_spacing_probe(sample[:100], (0.5, 1.0))
        with pytest.raises(StatisticsError, match="empty"):
            next_spacing_probe(np.full(5000, 0.75), (0.5, 1.0), min_avg_count=1.0)
