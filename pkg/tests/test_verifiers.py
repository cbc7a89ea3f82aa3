from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import idx, move_12, spaces_with_maps
from fixfig.geometry import KindError, SelfMap, circle, disc, ellipse, enumerate_figures, fix_set, members
from fixfig.simfunc import linear, user_expression
from fixfig.spaces import Kind, ParameterError, builtin_space
from fixfig.verifiers import (
    DEFAULT_A_SWEEP,
    Status,
    a_sweep,
    check_ze_contraction,
    delta_feasible,
    max_feasible_delta,
    verify_closed_ellipse,
    verify_fixed_circle,
    verify_fixed_disc,
    verify_fixed_ellipse,
    verify_identity_characterization,
    verify_phi_circle,
    verify_uniqueness,
)

HALF = linear(Fraction(1, 2))


def statuses(rep):
    return {c.id: c.status for c in rep.conditions}


def test_ellipse_line_metric_passes_for_every_a(line_metric, shift_map):
    m1, p1 = idx(line_metric, -1, 1)
    reps = a_sweep(lambda a: verify_fixed_ellipse(line_metric, shift_map, HALF, a, m1, p1))
    assert len(reps) == len(DEFAULT_A_SWEEP)
    for rep in reps:
        assert rep.status == "pass"
        assert rep.params["r"] == 6
        assert rep.conclusion.members == ("-3", "3") and rep.conclusion.oracle_confirmed


def test_ellipse_delta_four_is_feasible(line_metric, shift_map):
    m1, p1 = idx(line_metric, -1, 1)
    rep = verify_fixed_ellipse(line_metric, shift_map, HALF, 0, m1, p1)
    cond = rep.condition("a")
    assert delta_feasible(cond, 4)
    assert not delta_feasible(cond, 0)
    assert max_feasible_delta(cond) is None


def test_ellipse_s_metric_passes(line_s):
    f = move_12(line_s)
    rep = verify_fixed_ellipse(line_s, f, linear(Fraction(7, 8)), 0, *idx(line_s, -1, 1))
    assert rep.status == "pass"
    assert rep.params["r"] == 12
    assert rep.conclusion.members == ("-3", "3") and rep.conclusion.oracle_confirmed


def test_ellipse_s_metric_other_foci_not_necessary(line_s):
    f = move_12(line_s)
    for lam in (0, Fraction(1, 2), Fraction(7, 8)):
        rep = verify_fixed_ellipse(line_s, f, linear(lam), 0, *idx(line_s, -3, 3))
        assert rep.condition("b").status is Status.FAIL
        assert rep.condition("b").witness == ("12",)
        # the conclusion holds although the hypotheses do not
        assert rep.conclusion.oracle_confirmed


def test_ellipse_rejects_b_metric(line_b):
    with pytest.raises(KindError):
        verify_fixed_ellipse(line_b, move_12(line_b), HALF, 0, 0, 1)


def test_identity_map_is_not_applicable(line_metric):
    rep = verify_fixed_circle(line_metric, SelfMap.identity(line_metric.n), HALF, 0, 0)
    assert rep.status == "not-applicable"
    assert "identity" in rep.notes[0]


def test_zeta_failing_z2_is_not_applicable(line_metric, shift_map):
    rep = verify_fixed_circle(line_metric, shift_map, user_expression("s - t"), 0, 0)
    assert rep.status == "not-applicable"
    assert "z2" in rep.notes[0]


def test_circle_line_metric(line_metric, shift_map):
    rep = verify_fixed_circle(line_metric, shift_map, linear(Fraction(2, 3)), 0, line_metric.index(3))
    assert rep.status == "pass"
    assert rep.conclusion.claimed == "C_{3,6}"
    assert rep.conclusion.members == ("-3",) and rep.conclusion.oracle_confirmed


def test_circle_s_metric(line_s):
    f = move_12(line_s)
    rep = verify_fixed_circle(line_s, f, linear(Fraction(5, 6)), 0, line_s.index(-3))
    assert set(statuses(rep)) == {"i", "ii"}
    assert rep.status == "pass"
    assert rep.conclusion.members == ("3",) and rep.conclusion.oracle_confirmed


def test_circle_s_metric_other_center_not_necessary(line_s):
    f = move_12(line_s)
    for lam in (0, Fraction(5, 6), Fraction(7, 8)):
        rep = verify_fixed_circle(line_s, f, linear(lam), 0, line_s.index(3))
        assert rep.condition("ii").status is Status.FAIL
        assert rep.condition("ii").witness == ("12",)
        assert rep.conclusion.members == ("-3",) and rep.conclusion.oracle_confirmed


def test_circle_b_metric_agrees_with_s_metric(line_b):
    f = move_12(line_b)
    rep = verify_fixed_circle(line_b, f, linear(Fraction(5, 6)), 0, line_b.index(-3))
    assert rep.status == "pass" and rep.params["r"] == 12
    assert rep.conclusion.members == ("3",)


def test_disc_reports_le_membership(line_metric, shift_map):
    rep = verify_fixed_disc(line_metric, shift_map, linear(Fraction(2, 3)), 0, line_metric.index(3))
    assert rep.theorem == "disc"
    assert rep.conclusion.members == ("-3", "-1", "1", "3")


def test_ze_contraction_example(line_metric, shift_map):
    rep = check_ze_contraction(line_metric, shift_map, HALF, *idx(line_metric, -1, 1))
    assert rep.status == "pass"
    row = rep.condition("ze").values[0]
    assert row["x"] == "12" and row["s"] == 36 and row["zeta"] == 12


def test_ze_contraction_identity_is_vacuous(line_metric):
    rep = check_ze_contraction(line_metric, SelfMap.identity(line_metric.n), HALF, 0, 1)
    assert rep.condition("ze").status is Status.VACUOUS


def test_ze_contraction_failure():
    sp = builtin_space("abs-metric", [0, 10])
    swap = SelfMap((1, 0))
    # x = 0, fx = 10: zeta(10, 20) = 20/4 - 10 < 0
    rep = check_ze_contraction(sp, swap, linear(Fraction(1, 4)), 0, 0)
    assert rep.condition("ze").status is Status.FAIL
    assert rep.condition("ze").witness == ("0",)


def test_closed_ellipse_example(line_metric, shift_map):
    rep = verify_closed_ellipse(line_metric, shift_map, HALF, *idx(line_metric, -1, 1))
    assert rep.status == "pass"
    assert rep.conclusion.members == ("-3", "-1", "1", "3") and rep.conclusion.oracle_confirmed


def test_closed_ellipse_other_foci(line_metric, shift_map):
    rep = verify_closed_ellipse(line_metric, shift_map, linear(Fraction(2, 3)), *idx(line_metric, -3, 3))
    assert rep.status == "pass" and rep.conclusion.oracle_confirmed


def test_closed_ellipse_coincident_foci_is_disc():
    sp = builtin_space("abs-metric", [0, 1, 2, 10])
    f = SelfMap((0, 1, 2, 0))
    rep = verify_closed_ellipse(sp, f, HALF, 0, 0)
    assert any("disc" in n for n in rep.notes)
    assert rep.conclusion.members == tuple(sp.label(x) for x in sorted(members(disc(sp, 0, 5), sp)))


def test_phi_circle_empty_is_vacuous():
    sp = builtin_space("abs-metric", [-1, 0, 1])
    rep = verify_phi_circle(sp, SelfMap.identity(3), HALF, 5, 0)
    assert rep.status == "vacuous"
    assert all(c.status is Status.VACUOUS for c in rep.conditions)
    assert rep.conclusion.oracle_confirmed


def test_phi_circle_singleton_passes():
    sp = builtin_space("abs-metric", [-1, 0, 1])
    rep = verify_phi_circle(sp, SelfMap.identity(3), HALF, 1, 0)
    assert statuses(rep) == {"i": Status.PASS, "ii": Status.VACUOUS, "iii": Status.PASS, "iv": Status.PASS}
    assert rep.status == "pass"


def test_phi_circle_two_points_fails_iii():
    sp = builtin_space("abs-metric", [-1, 0, 1])
    for lam in (0, Fraction(1, 2), Fraction(3, 4)):
        rep = verify_phi_circle(sp, SelfMap.identity(3), linear(lam), 1, sp.index(0))
        assert rep.condition("iii").status is Status.FAIL
        assert rep.condition("iii").witness == ("-1", "1")
        assert any("vacuity" in n for n in rep.notes)


def test_phi_circle_radius_checks(line_s):
    with pytest.raises(ParameterError):
        verify_phi_circle(line_s, move_12(line_s), HALF, 0, 0)


def test_uniqueness_pass():
    sp = builtin_space("abs-metric", [0, 1, 2])
    rep = verify_uniqueness(sp, SelfMap((0, 1, 1)), ellipse(sp, 0, 1, 1), linear(Fraction(2, 3)), 0)
    assert rep.status == "pass"
    assert rep.conclusion.oracle_confirmed
    assert min(v["zeta"] for v in rep.condition("separation").values) == 0


def test_uniqueness_fail_with_second_fixed_figure():
    sp = builtin_space("abs-metric", [0, 1, 2])
    rep = verify_uniqueness(sp, SelfMap.identity(3), circle(sp, 0, 1), linear(Fraction(2, 3)), 0)
    assert rep.condition("separation").witness == ("1", "0")
    assert not rep.conclusion.oracle_confirmed


def test_uniqueness_whole_space_is_vacuous_pass():
    sp = builtin_space("abs-metric", [0, 1, 2])
    rep = verify_uniqueness(sp, SelfMap.identity(3), ellipse(sp, 0, 2, 2), HALF, 0)
    assert rep.condition("separation").status is Status.VACUOUS
    assert rep.all_passed and rep.conclusion.oracle_confirmed


def test_uniqueness_not_fixed_figure_not_applicable(line_metric, shift_map):
    rep = verify_uniqueness(line_metric, shift_map, circle(line_metric, line_metric.index(18), 6), HALF, 0)
    assert rep.status == "not-applicable"


def test_identity_examples(line_metric, shift_map):
    rep = verify_identity_characterization(line_metric, SelfMap.identity(line_metric.n), HALF, 3)
    assert rep.condition("displacement").status is Status.VACUOUS
    assert rep.conclusion.claimed == "f is the identity" and rep.conclusion.oracle_confirmed

    rep = verify_identity_characterization(line_metric, shift_map, HALF, 1)
    cond = rep.condition("displacement")
    assert cond.witness == ("12",)
    assert cond.values[0]["zeta"] == -3
    assert rep.conclusion.claimed == "f is not the identity" and rep.conclusion.oracle_confirmed

    one = builtin_space("abs-metric", [4])
    assert verify_identity_characterization(one, SelfMap((0,)), HALF, 0).conclusion.claimed == "f is the identity"


def test_metric_circle_counterexample():
    # hypotheses hold yet the circle {1} is not fixed: f(1) = 2
    sp = builtin_space("abs-metric", [0, 1, 2])
    f = SelfMap((0, 2, 2))
    for a in DEFAULT_A_SWEEP:
        for rep in (verify_fixed_circle(sp, f, linear(Fraction(3, 4)), a, 0),
                    verify_fixed_disc(sp, f, linear(Fraction(3, 4)), a, 0)):
            assert rep.status == "pass"
            assert not rep.conclusion.oracle_confirmed


def test_closed_ellipse_counterexample():
    sp = builtin_space("abs-metric", [0, 1, 2])
    f = SelfMap((2, 1, 2))
    rep = verify_closed_ellipse(sp, f, linear(Fraction(3, 4)), 0, 1)
    assert rep.status == "pass"
    assert rep.conclusion.members == ("0", "1")
    assert not rep.conclusion.oracle_confirmed


def test_reports_are_deterministic(line_metric, shift_map):
    args = (line_metric, shift_map, HALF, Fraction(1, 4), *idx(line_metric, -1, 1))
    assert verify_fixed_ellipse(*args) == verify_fixed_ellipse(*args)


# ---------------------------------------------------------------- properties

ZETAS = st.sampled_from([linear(Fraction(k, 4)) for k in range(4)])


@settings(max_examples=120, deadline=None)
@given(spaces_with_maps(), ZETAS, st.sampled_from(DEFAULT_A_SWEEP), st.data())
def test_sound_theorems_hold_on_random_instances(sm, zeta, a, data):
    space, f = sm
    x1 = data.draw(st.integers(0, space.n - 1))
    x2 = data.draw(st.integers(0, space.n - 1))
    if space.kind is not Kind.B_METRIC:
        rep = verify_fixed_ellipse(space, f, zeta, a, x1, x2)
        if rep.all_passed:
            assert rep.conclusion.oracle_confirmed
    if space.kind is not Kind.METRIC:
        rep = verify_fixed_circle(space, f, zeta, a, x1)
        if rep.all_passed:
            assert rep.conclusion.oracle_confirmed


@settings(max_examples=120, deadline=None)
@given(spaces_with_maps(), ZETAS, st.sampled_from(DEFAULT_A_SWEEP), st.data())
def test_uniqueness_pass_pins_fixed_set(sm, zeta, a, data):
    space, f = sm
    figs = [g for shape in ("circle", "ellipse") for g in enumerate_figures(space, shape)]
    fig = data.draw(st.sampled_from(figs))
    rep = verify_uniqueness(space, f, fig, zeta, a)
    if rep.all_passed:
        assert fix_set(space, f) == members(fig, space)


@settings(max_examples=120, deadline=None)
@given(spaces_with_maps(), ZETAS, st.sampled_from([0, Fraction(1, 2), 1, 3]))
def test_identity_verdict_matches_map(sm, zeta, r):
    space, f = sm
    rep = verify_identity_characterization(space, f, zeta, r)
    verdict = rep.conclusion.claimed == "f is the identity"
    assert verdict == f.is_identity
