import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracbound.errors import DomainError
from fracbound.fracint import integrate_unit
from fracbound.specfun import beta, gamma, log_gamma


class TestGamma:
    def test_gamma_of_one(self):
        assert gamma(1.0) == pytest.approx(1.0, rel=1e-14)

    def test_gamma_of_five_is_factorial(self):
        assert gamma(5.0) == pytest.approx(24.0, rel=1e-14)

    def test_gamma_of_half_is_sqrt_pi(self):
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
        assert gamma(0.5) == pytest.approx(1.772453850905516, rel=1e-12)

    def test_recurrence_on_random_sample(self):
        # 1000 random x in (0, 80]: gamma(x+1) = x gamma(x) to 1e-12 relative
        rng = np.random.default_rng(20240601)
        xs = rng.uniform(1e-3, 80.0, size=1000)
        for x in xs:
            lhs = gamma(x + 1.0)
            assert abs(lhs - x * gamma(x)) / lhs <= 1e-12

    @pytest.mark.parametrize("bad", [0.0, -1.0, -0.5, math.nan, math.inf])
    def test_domain_errors(self, bad):
        with pytest.raises(DomainError):
            gamma(bad)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            gamma(200.0)
        # log_gamma stays finite there
        assert math.isfinite(log_gamma(200.0))


class TestBeta:
    def test_uniform_weight(self):
        assert beta(1.0, 1.0) == pytest.approx(1.0, rel=1e-14)

    def test_quadratic_weight(self):
        assert beta(2.0, 2.0) == pytest.approx(1.0 / 6.0, rel=1e-13)

    def test_half_half_is_pi(self):
        assert beta(0.5, 0.5) == pytest.approx(math.pi, rel=1e-13)

    @given(st.floats(min_value=0.01, max_value=50.0),
           st.floats(min_value=0.01, max_value=50.0))
    def test_symmetry(self, x, y):
        # identical as computed: the log-gamma sum commutes
        assert beta(x, y) == beta(y, x)

    @pytest.mark.parametrize("x,y", [(1.0, 1.0), (1.5, 2.5), (3.0, 1.0), (2.0, 6.0)])
    def test_matches_unit_quadrature(self, x, y):
        # for x, y >= 1 the integrand is bounded; no endpoint transform needed
        numeric = integrate_unit(lambda t: t ** (x - 1.0) * (1.0 - t) ** (y - 1.0))
        assert beta(x, y) == pytest.approx(numeric, abs=1e-9, rel=1e-9)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            beta(-1.0, 2.0)
        with pytest.raises(DomainError):
            beta(1.0, 0.0)


@settings(max_examples=50)
@given(st.floats(min_value=0.5, max_value=20.0),
       st.floats(min_value=0.5, max_value=20.0))
def test_beta_gamma_identity(x, y):
    expected = gamma(x) * gamma(y) / gamma(x + y)
    assert beta(x, y) == pytest.approx(expected, rel=1e-11)
