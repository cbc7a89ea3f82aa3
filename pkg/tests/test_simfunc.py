from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixfig.expr import EvaluationError, ExpressionError, parse_expression
from fixfig.simfunc import (
    DEFAULT_ZETA_POOL,
    Certificate,
    Family,
    builtin,
    check_zeta2,
    check_zeta3_sequences,
    default_grid,
    evaluate,
    linear,
    parse_zeta_spec,
    user_expression,
)
from fixfig.spaces import ParameterError, builtin_space

rationals = st.fractions(min_value=0, max_value=100, max_denominator=50)
positive = st.fractions(min_value=Fraction(1, 50), max_value=100, max_denominator=50)
lambdas = st.fractions(min_value=0, max_value=Fraction(99, 100), max_denominator=100)


def test_linear_values():
    assert linear(Fraction(1, 2))(6, 16) == 2
    assert linear(Fraction(2, 3))(6, 30) == 14


def test_every_family_vanishes_at_origin():
    zetas = [
        linear(0),
        builtin("phi-deflate", "s/2"),
        builtin("slope-scale", "1/2"),
        builtin("upper-envelope", "s/3"),
        builtin("integral", "2*t"),
        user_expression("3/4*s - t"),
    ]
    assert all(z(0, 0) == 0 for z in zetas)


def test_nonzero_origin_is_rejected():
    with pytest.raises(ParameterError):
        user_expression("s - t + 1")


def test_negative_arguments_rejected():
    with pytest.raises(ParameterError):
        evaluate(linear(0), -1, 2)


def test_division_by_zero_is_evaluation_error():
    z = user_expression("t / (s - 1)")
    with pytest.raises(EvaluationError):
        z(1, 1)


def test_zeta2_linear_passes_with_certificate():
    rep = check_zeta2(linear(Fraction(1, 2)), [(1, 1), (3, 8)])
    assert rep.passed and rep.checked == 0
    assert "analytic" in rep.note


def test_zeta2_s_minus_t_fails_at_witness():
    rep = check_zeta2(user_expression("s - t"), [(1, 1)])
    assert not rep.passed
    assert rep.witness == (1, 1)


def test_zeta2_seven_eighths_expression_on_hundred_points():
    vals = [Fraction(k, 2) for k in range(1, 11)]
    grid = [(t, s) for t in vals for s in vals]
    assert len(grid) == 100
    rep = check_zeta2(user_expression("(7/8)*s - t"), grid)
    assert rep.passed and rep.checked == 100


def test_zeta2_grid_must_be_positive_and_nonempty():
    with pytest.raises(ParameterError):
        check_zeta2(linear(0), [(0, 1)])
    with pytest.raises(ParameterError):
        check_zeta2(linear(0), [])


def test_default_grid_uses_space_distances():
    grid = default_grid(builtin_space("abs-metric", [0, 3]))
    values = {t for t, _ in grid}
    assert Fraction(3) in values and Fraction(1, 4) in values and Fraction(0) not in values


def test_zeta3_linear_tail_negative():
    t = [1 + Fraction(1, n) for n in range(1, 33)]
    rep = check_zeta3_sequences(linear(Fraction(1, 2)), t, t, "z3")
    assert rep.consistent and rep.inconclusive
    assert rep.tail_max < 0


def test_zeta3_star_s_minus_t_not_consistent():
    # t_n = 1 - 1/n needs n >= 2 to stay strictly positive
    t = [1 - Fraction(1, n) for n in range(2, 34)]
    s = [Fraction(1)] * len(t)
    rep = check_zeta3_sequences(user_expression("s - t"), t, s, "z3*")
    assert not rep.consistent
    # tail covers the last quarter, so its first term n = 2 + 24 gives the largest s - t
    assert rep.tail_start == 24
    assert rep.tail_max == 1 - t[24]


def test_zeta3_linear_zero():
    t = [Fraction(k) for k in range(1, 9)]
    s = [Fraction(k + 1) for k in range(1, 9)]
    rep = check_zeta3_sequences(linear(0), t, s, "z3*")
    assert rep.consistent and rep.tail_max == -7


def test_zeta3_preconditions():
    z = linear(0)
    with pytest.raises(ParameterError):
        check_zeta3_sequences(z, [1] * 8, [1] * 7)
    with pytest.raises(ParameterError):
        check_zeta3_sequences(z, [1] * 4, [1] * 4)
    with pytest.raises(ParameterError):
        check_zeta3_sequences(z, [0] + [1] * 7, [1] * 8)
    with pytest.raises(ParameterError):
        check_zeta3_sequences(z, [2] * 8, [1] * 8, "z3*")


def test_builtin_linear_and_range():
    z = builtin("linear", Fraction(1, 2))
    assert z.certificate is Certificate.ANALYTIC
    with pytest.raises(ParameterError):
        builtin("linear", 1)
    with pytest.raises(ParameterError):
        linear(-Fraction(1, 4))


def test_phi_deflate_half_equals_linear_half():
    z = builtin("phi-deflate", "s/2")
    assert z.certificate is Certificate.SAMPLED_ONLY
    half = linear(Fraction(1, 2))
    for t in range(0, 6):
        for s in range(0, 6):
            assert z(t, s) == half(t, s)


def test_side_conditions_rejected():
    with pytest.raises(ParameterError):
        builtin("phi-deflate", "s - 1")
    with pytest.raises(ParameterError):
        builtin("slope-scale", "2")
    with pytest.raises(ParameterError):
        builtin("upper-envelope", "s")
    with pytest.raises(ParameterError):
        builtin("integral", "t/2")


def test_unparsable_parameter():
    with pytest.raises(ExpressionError):
        builtin("phi-deflate", "s ** 2")
    with pytest.raises(ParameterError):
        builtin("bogus", "s")


def test_parse_zeta_spec_round_trip():
    for z in [*DEFAULT_ZETA_POOL, builtin("phi-deflate", "s/2"), user_expression("7/8*s - t")]:
        assert parse_zeta_spec(z.spec()) == z
    assert parse_zeta_spec("expr:7/8*s - t").family is Family.EXPRESSION
    with pytest.raises(ParameterError):
        parse_zeta_spec("linear")


def test_expression_grammar():
    e = parse_expression("max(t, s) - min(t, s) + abs(-1) + 0.25", ("t", "s"))
    assert e(t=1, s=3) == Fraction(13, 4)
    for bad in ("t ** 2", "sin(t)", "t.real", "x + 1", "max(t)", "1 if t else 2"):
        with pytest.raises(ExpressionError):
            parse_expression(bad, ("t", "s"))


# ---------------------------------------------------------------- properties


@given(lambdas, rationals, rationals)
def test_linear_matches_independent_arithmetic(lam, t, s):
    assert linear(lam)(t, s) == lam * s - t


@settings(max_examples=50)
@given(lambdas, st.lists(st.tuples(positive, positive), min_size=1, max_size=20))
def test_zeta2_never_fails_for_linear(lam, grid):
    assert check_zeta2(linear(lam), grid, sample_analytic=True).passed


@settings(max_examples=50)
@given(st.lists(st.tuples(positive, positive), min_size=1, max_size=20),
       st.sampled_from(["3/4*s - t", "s/2 - t", "min(s/2, s - t) - t", "s - 2*t"]))
def test_nonnegative_zeta_forces_t_below_s(grid, text):
    z = user_expression(text)
    rep = check_zeta2(z, grid)
    if rep.passed:
        for t, s in grid:
            if z(t, s) >= 0:
                assert t < s
