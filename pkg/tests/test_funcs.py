import math

import numpy as np
import pytest

from fracbound.errors import ConfigError, DomainError
from fracbound.funcs import (
    HFunction,
    builtin_f,
    builtin_h,
    certify_derivative_class,
    certify_f,
    certify_h,
    check_dominates_identity,
    check_h_concave,
    check_h_convex,
    check_nonneg,
    check_superadditive,
    check_supermultiplicative,
    derivative_magnitude,
    f_registry_names,
    h_registry_names,
    parse_f_spec,
    parse_h_spec,
)

SQRT_HALF_GAP = math.sqrt(0.5) - 0.5  # single-point violation of sqrt under h=t


def custom_h(fn, **claims) -> HFunction:
    return HFunction(name="custom", params={}, fn=fn, **claims)


class TestBuiltinH:
    def test_identity_eval(self):
        h = builtin_h("identity")
        assert float(h(0.3)) == pytest.approx(0.3)
        assert h.claimed_supermultiplicative and h.claimed_superadditive
        assert h.claimed_dominates_identity

    def test_power_eval(self):
        h = builtin_h("power", {"s": 0.5})
        assert float(h(0.25)) == pytest.approx(0.5)
        assert h.claimed_supermultiplicative and h.claimed_dominates_identity
        assert not h.claimed_superadditive

    def test_power_s_one_is_superadditive(self):
        assert builtin_h("power", {"s": 1.0}).claimed_superadditive

    def test_godunova_eval(self):
        h = builtin_h("godunova")
        assert float(h(0.5)) == pytest.approx(2.0)
        assert h.divergent_weight and not h.domain_contains_unit

    def test_one_claims(self):
        h = builtin_h("one")
        assert float(h(0.123)) == 1.0
        assert not h.claimed_superadditive
        assert h.claimed_dominates_identity

    def test_unknown_name(self):
        with pytest.raises(ConfigError):
            builtin_h("parabola")

    @pytest.mark.parametrize("s", [0.0, -0.5, 1.2])
    def test_power_s_out_of_range(self, s):
        with pytest.raises(ConfigError):
            builtin_h("power", {"s": s})


class TestBuiltinF:
    def test_square_bound(self):
        f = builtin_f("square", {"a": 0, "b": 1})
        assert f.M == 2.0
        assert float(f(0.5)) == pytest.approx(0.25)

    def test_linear_bound(self):
        f = builtin_f("linear", {"a": 0, "b": 1, "c": 3})
        assert f.M == 3.0
        assert float(f(0.5)) == pytest.approx(1.5)

    def test_const_bound(self):
        f = builtin_f("const", {"a": 0, "b": 2, "c": 7})
        assert f.M == 0.0
        assert float(f(1.3)) == 7.0

    def test_power_primitive(self):
        f = builtin_f("power_primitive", {"a": 0, "b": 1, "s": 0.5})
        assert f.M == pytest.approx(1.0)
        assert float(f.fprime(0.25)) == pytest.approx(0.5)

    def test_negative_left_endpoint_rejected(self):
        with pytest.raises(DomainError):
            builtin_f("square", {"a": -0.1, "b": 1})

    def test_empty_domain_rejected(self):
        with pytest.raises(DomainError):
            builtin_f("square", {"a": 1, "b": 1})

    def test_unknown_name(self):
        with pytest.raises(ConfigError):
            builtin_f("wiggle", {"a": 0, "b": 1})

    def test_missing_domain(self):
        with pytest.raises(ConfigError):
            builtin_f("square", {})


class TestSpecParsing:
    def test_plain_name(self):
        assert parse_h_spec("identity").name == "identity"

    def test_name_with_params(self):
        h = parse_h_spec("power:s=0.5")
        assert h.params == {"s": 0.5}

    def test_f_spec(self):
        f = parse_f_spec("square:a=0,b=1")
        assert (f.a, f.b) == (0.0, 1.0)

    @pytest.mark.parametrize("bad", ["", "power:s", "power:=1", "square:a=zero,b=1"])
    def test_malformed(self, bad):
        with pytest.raises(ConfigError):
            (parse_h_spec if bad.startswith("power") or not bad else parse_f_spec)(bad)


class TestHConvexChecker:
    def test_convex_derivative_is_h_convex(self, f_square, h_identity):
        report = check_h_convex(derivative_magnitude(f_square), h_identity, 0.0, 1.0)
        assert report.holds
        assert report.worst_violation <= 1e-12

    def test_sqrt_violates_plain_convexity(self, h_identity):
        report = check_h_convex(lambda t: np.sqrt(t), h_identity, 0.0, 1.0)
        assert not report.holds
        # at least the single-point violation at (x, y, t) = (0, 1, 1/2)
        assert report.worst_violation >= SQRT_HALF_GAP - 1e-12
        x, y, t = report.witness
        observed = math.sqrt(t * x + (1 - t) * y) - t * math.sqrt(x) - (1 - t) * math.sqrt(y)
        assert observed == pytest.approx(report.worst_violation, abs=1e-15)

    def test_constant_one_under_p_weight(self, h_one):
        report = check_h_convex(lambda t: np.ones_like(np.asarray(t, dtype=float)),
                                h_one, 0.0, 1.0)
        assert report.holds

    def test_godunova_checkable_on_open_grid(self, f_square, h_godunova):
        report = check_h_convex(derivative_magnitude(f_square), h_godunova, 0.0, 1.0)
        assert report.holds

    def test_negative_g_rejected(self, h_identity):
        with pytest.raises(DomainError):
            check_h_convex(lambda t: np.asarray(t, dtype=float) - 0.5,
                           h_identity, 0.0, 1.0)

    def test_small_grid_rejected(self, h_identity):
        with pytest.raises(DomainError):
            check_h_convex(lambda t: np.asarray(t, dtype=float), h_identity, 0.0, 1.0, grid_n=2)

    def test_concave_utility_reverses(self, h_identity):
        report = check_h_concave(lambda t: np.sqrt(t), h_identity, 0.0, 1.0)
        assert report.holds  # sqrt is concave, so the reversed inequality holds


class TestSupermultiplicative:
    def test_power_is_exactly_supermultiplicative(self):
        report = check_supermultiplicative(builtin_h("power", {"s": 0.7}))
        assert report.holds

    def test_shifted_identity_fails(self):
        report = check_supermultiplicative(custom_h(lambda t: np.asarray(t, dtype=float) + 1.0))
        assert not report.holds
        # algebraic defect x + y at the witness; at (1/2, 1/2) it equals 1
        assert report.worst_violation >= 1.0 - 1e-12

    def test_identity_holds(self, h_identity):
        assert check_supermultiplicative(h_identity).holds

    def test_godunova_holds(self, h_godunova):
        assert check_supermultiplicative(h_godunova).holds


class TestSuperadditive:
    def test_square_weight_holds(self):
        report = check_superadditive(custom_h(lambda t: np.asarray(t, dtype=float) ** 2))
        assert report.holds

    def test_constant_one_fails(self, h_one):
        report = check_superadditive(h_one)
        assert not report.holds
        assert report.worst_violation == pytest.approx(1.0)  # 1 + 1 - 1

    def test_identity_equality(self, h_identity):
        report = check_superadditive(h_identity)
        assert report.holds
        assert abs(report.worst_violation) <= 1e-12


class TestDominatesIdentity:
    def test_power_half_dominates(self, h_power_half):
        assert check_dominates_identity(h_power_half).holds

    def test_square_weight_fails(self):
        report = check_dominates_identity(custom_h(lambda t: np.asarray(t, dtype=float) ** 2))
        assert not report.holds

    def test_constant_one_dominates(self, h_one):
        assert check_dominates_identity(h_one).holds


class TestCertification:
    def test_flag_soundness_over_registry(self):
        # every claimed flag must agree with its checker on the default grid
        cases = [builtin_h("identity"), builtin_h("power", {"s": 0.25}),
                 builtin_h("power", {"s": 0.5}), builtin_h("power", {"s": 0.75}),
                 builtin_h("power", {"s": 1.0}), builtin_h("one"), builtin_h("godunova")]
        for h in cases:
            reports = certify_h(h)
            for prop, report in reports.items():
                assert h.claimed(prop) == report.holds, (h.label, prop)

    def test_remark_closure_convex_derivatives(self):
        # every dominating weight admits every convex non-negative |f'|
        fs = [builtin_f("square", {"a": 0, "b": 1}), builtin_f("cube", {"a": 0, "b": 2}),
              builtin_f("exp", {"a": 0, "b": 1}), builtin_f("linear", {"a": 0, "b": 1, "c": 2}),
              builtin_f("const", {"a": 0, "b": 1, "c": 3})]
        hs = [builtin_h("identity"), builtin_h("power", {"s": 0.5}),
              builtin_h("power", {"s": 0.75}), builtin_h("one"), builtin_h("godunova")]
        for h in hs:
            assert check_dominates_identity(h).holds
            for f in fs:
                assert check_h_convex(derivative_magnitude(f), h, f.a, f.b).holds, (f.label, h.label)

    def test_derivative_certification_over_registry(self):
        fs = [builtin_f("square", {"a": 0, "b": 1}), builtin_f("cube", {"a": 0, "b": 2}),
              builtin_f("exp", {"a": 0, "b": 1}),
              builtin_f("power_primitive", {"a": 0, "b": 1, "s": 0.5}),
              builtin_f("linear", {"a": 0, "b": 1, "c": 3}),
              builtin_f("const", {"a": 0, "b": 2, "c": 7})]
        for f in fs:
            reports = certify_f(f)
            assert reports["derivative_consistent"].holds, f.label
            assert reports["derivative_bounded"].holds, f.label

    def test_derivative_class_certification(self, f_square, h_power_half):
        report = certify_derivative_class(f_square, h_power_half, q=2.0)
        assert report.holds
        assert any(key.startswith("hconvex|power:s=0.5|") for key in f_square.certified)

    def test_nonneg_checker(self, h_godunova):
        assert check_nonneg(h_godunova).holds
        report = check_nonneg(custom_h(lambda t: np.asarray(t, dtype=float) - 0.5))
        assert not report.holds

    def test_registry_names(self):
        assert "power" in h_registry_names()
        assert "power_primitive" in f_registry_names()
