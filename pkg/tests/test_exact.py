from fractions import Fraction
from math import exp, pi

import pytest

from cuecrit.exact import (pp_add, pp_eval, pp_format, pp_mul, pp_scale,
                           pp_shift, series_exp, series_mul)

F = Fraction


class TestPiPolynomial:
    def test_add(self):
        assert pp_add({0: F(1, 2)}, {0: F(1, 2), 2: F(1)}) == {0: F(1), 2: F(1)}

    def test_add_cancels_to_empty(self):
        assert pp_add({2: F(1, 3)}, {2: F(-1, 3)}) == {}

    def test_scale(self):
        assert pp_scale({2: F(1, 3)}, F(3)) == {2: F(1)}
        assert pp_scale({2: F(1, 3)}, 0) == {}

    def test_mul_combines_powers(self):
        assert pp_mul({2: F(1, 3)}, {-1: F(3)}) == {1: F(1)}

    def test_mul_cancellation(self):
        a = {0: F(1), 1: F(1)}
        b = {0: F(1), 1: F(-1)}
        assert pp_mul(a, b) == {0: F(1), 2: F(-1)}

    def test_shift(self):
        assert pp_shift({0: F(2), 2: F(1)}, -2) == {-2: F(2), 0: F(1)}

    def test_eval(self):
        assert pp_eval({}) == 0.0
        assert isinstance(pp_eval({}), float)
        assert abs(pp_eval({2: F(1, 36)}) - pi ** 2 / 36.0) <= 1e-17

    def test_format(self):
        assert pp_format({}) == "0"
        assert pp_format({2: F(1, 36)}) == "1/36*pi^2"
        assert pp_format({0: F(-1)}) == "-1"
        assert pp_format({-1: F(8, 9)}) == "8/9*pi^-1"
        assert pp_format({0: F(1), 2: F(-1, 3)}) == "1 - 1/3*pi^2"


class TestSeries:
    def test_mul_is_cauchy_product(self):
        one_plus_x = [{0: F(1)}, {0: F(1)}]
        out = series_mul(one_plus_x, one_plus_x, 3)
        assert out == [{0: F(1)}, {0: F(2)}, {0: F(1)}, {}]

    def test_mul_truncates(self):
        x = [{}, {0: F(1)}]
        out = series_mul(x, x, 1)
        assert out == [{}, {}]

    def test_exp_rational_argument(self):
        # exp(x): coefficients 1/k!
        log_terms = [{}, {0: F(1)}]
        out = series_exp(log_terms, 5)
        expected = F(1)
        for k in range(6):
            assert out[k] == {0: expected}
            expected /= k + 1

    def test_exp_pi_argument(self):
        # exp(pi^2 x^2) expands in even powers with pi^{2k}/k!
        log_terms = [{}, {}, {2: F(1)}]
        out = series_exp(log_terms, 6)
        assert out[2] == {2: F(1)}
        assert out[3] == {}
        assert out[4] == {4: F(1, 2)}
        assert out[6] == {6: F(1, 6)}

    def test_exp_matches_float(self):
        log_terms = [{}, {1: F(1, 4)}, {0: F(-1, 3)}]
        out = series_exp(log_terms, 12)
        t = 0.3
        series_value = sum(pp_eval(c) * t ** k for k, c in enumerate(out))
        exact_value = exp(pi / 4.0 * t - t * t / 3.0)
        assert abs(series_value - exact_value) <= 1e-12

    def test_exp_rejects_constant_term(self):
        with pytest.raises(ValueError, match="constant term"):
            series_exp([{0: F(1)}], 3)
