"""Executable hypothesis checks for the fixed-figure theorems.

Each ``verify_*`` function evaluates a theorem's conditions on one concrete
instance and records every evaluated quantity.  The conclusion is then
checked by the naive oracle, independently of whether the conditions held,
so a report carries both "the hypotheses hold" and "the conclusion is true".

Existence of delta in the threshold conditions
----------------------------------------------
Conditions of the form "there is delta > 0 with
``T <= Q(x) < T + delta  =>  consequent(x)``" are decided exactly on a
finite space.  Let V be the figure points where the consequent fails.  A
delta exists iff no point of V has ``Q(x) = T``.  The largest feasible delta
is ``min{Q(x) - T : x in V, Q(x) > T}`` (unbounded when that set is empty),
and every smaller positive delta works too.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from fixfig.geometry import (
    Figure,
    KindError,
    SelfMap,
    Shape,
    big_m,
    members,
    phi_r,
    radius_number,
)
from fixfig.oracle.naive import all_fixed, figure_members
from fixfig.simfunc import Certificate, SimFunc, check_zeta2, default_grid_for
from fixfig.spaces import S_TO_B_COEFFICIENT, FiniteDistanceSpace, Kind, ParameterError, to_fraction

__all__ = [
    "Status",
    "Condition",
    "Conclusion",
    "VerifierReport",
    "DEFAULT_A_SWEEP",
    "a_sweep",
    "verify_fixed_ellipse",
    "verify_fixed_circle",
    "verify_fixed_disc",
    "check_ze_contraction",
    "verify_closed_ellipse",
    "verify_phi_circle",
    "verify_uniqueness",
    "verify_identity_characterization",
    "max_feasible_delta",
    "delta_feasible",
]

DEFAULT_A_SWEEP = tuple(Fraction(k, 4) for k in range(4))


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    VACUOUS = "vacuous"

    def __str__(self) -> str:
        return self.value


@dataclass
class Condition:
    id: str
    status: Status
    witness: tuple[str, ...] | None = None
    values: list[dict] = field(default_factory=list)
    note: str = ""
    extra: dict = field(default_factory=dict)


@dataclass
class Conclusion:
    claimed: str
    members: tuple[str, ...]
    oracle_confirmed: bool


@dataclass
class VerifierReport:
    theorem: str
    kind: Kind
    params: dict
    conditions: list[Condition] = field(default_factory=list)
    conclusion: Conclusion | None = None
    notes: list[str] = field(default_factory=list)
    applicable: bool = True
    figure_empty: bool = False

    @property
    def all_passed(self) -> bool:
        return self.applicable and all(c.status is not Status.FAIL for c in self.conditions)

    @property
    def status(self) -> str:
        if not self.applicable:
            return "not-applicable"
        if not self.all_passed:
            return "fail"
        if self.figure_empty:
            return "vacuous"
        return "pass"

    def condition(self, cid: str) -> Condition:
        for c in self.conditions:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def failed(self) -> list[str]:
        return [c.id for c in self.conditions if c.status is Status.FAIL]


def a_sweep(run: Callable[[Fraction], VerifierReport], a_values: Iterable = DEFAULT_A_SWEEP) -> list[VerifierReport]:
    """Run ``run(a)`` for every ``a`` of the sweep, in order."""
    return [run(to_fraction(a)) for a in a_values]


# ---------------------------------------------------------------- helpers


def _labels(space, xs) -> tuple[str, ...]:
    return tuple(space.label(x) for x in xs)


def _sorted_labels(space, xs) -> tuple[str, ...]:
    return tuple(space.label(x) for x in sorted(xs))


def _not_applicable(theorem, space, params, reason) -> VerifierReport:
    return VerifierReport(theorem, space.kind, params, notes=[f"not applicable: {reason}"], applicable=False)


def _zeta_gate(space, zeta: SimFunc) -> tuple[str | None, str]:
    """Return (failure reason or None, note)."""
    return _zeta_gate_cached(zeta, space._attained)


@functools.lru_cache(maxsize=1024)
def _zeta_gate_cached(zeta: SimFunc, attained: tuple[Fraction, ...]) -> tuple[str | None, str]:
    if zeta.certificate is Certificate.ANALYTIC:
        rep = check_zeta2(zeta)
    else:
        rep = check_zeta2(zeta, default_grid_for(attained))
    if not rep.passed:
        return f"zeta fails (z2) at (t, s) = ({rep.witness[0]}, {rep.witness[1]}): {rep.note}", rep.note
    return None, f"zeta2 check: {rep.note}"


def _condition(cid, checks, space) -> Condition:
    """Fold per-point records ``(ok, witness indices, values)`` into a Condition."""
    values = [v for _, _, v in checks]
    if not checks:
        return Condition(cid, Status.VACUOUS, None, values)
    for ok, wit, _ in checks:
        if not ok:
            return Condition(cid, Status.FAIL, _labels(space, wit), values)
    return Condition(cid, Status.PASS, None, values)


def _threshold_condition(cid, space, figure_points, threshold, quantity, consequent, lhs_of, bound) -> tuple[Condition, list[dict]]:
    """The delta-existence rule; see the module docstring."""
    rows = []
    bad = []
    for x in sorted(figure_points):
        q = quantity(x)
        lhs = lhs_of(x)
        ok = consequent(x)
        rows.append({"x": space.label(x), "quantity": q, "consequent_lhs": lhs, "bound": bound, "consequent": ok})
        if not ok:
            bad.append((x, q))
    gaps = [q - threshold for _, q in bad if q > threshold]
    max_delta = min(gaps) if gaps else None
    for row, x in zip(rows, sorted(figure_points)):
        q = row["quantity"]
        row["antecedent"] = threshold <= q and (max_delta is None or q < threshold + max_delta)
    if not figure_points:
        cond = Condition(cid, Status.VACUOUS, None, rows)
    else:
        hit = [x for x, q in bad if q == threshold]
        if hit:
            cond = Condition(cid, Status.FAIL, _labels(space, hit[:1]), rows)
        else:
            cond = Condition(cid, Status.PASS, None, rows)
    cond.extra = {"threshold": threshold, "max_delta": max_delta}
    cond.note = f"threshold {threshold}; max feasible delta {'unbounded' if max_delta is None else max_delta}"
    return cond, rows


def _conclusion(space, f, figure: Figure, extra_fixed=()) -> Conclusion:
    mem = figure_members(space, figure.shape, figure.points, figure.r)
    ok = all_fixed(f, mem) and all_fixed(f, extra_fixed)
    return Conclusion(figure.name(space), _sorted_labels(space, mem), ok)


def _zeta_record(zeta, t, s, **extra) -> tuple[bool, dict]:
    v = zeta(t, s)
    return v >= 0, {**extra, "t": t, "s": s, "zeta": v}


def max_feasible_delta(cond: Condition):
    """Largest feasible delta of a threshold condition (None = unbounded)."""
    return cond.extra["max_delta"]


def delta_feasible(cond: Condition, delta) -> bool:
    delta = to_fraction(delta)
    if cond.status is Status.FAIL or delta <= 0:
        return False
    bound = max_feasible_delta(cond)
    return bound is None or delta <= bound


# ---------------------------------------------------------------- theorems


def verify_fixed_ellipse(space: FiniteDistanceSpace, f: SelfMap, zeta: SimFunc, a, x1: int, x2: int) -> VerifierReport:
    """Hypotheses (a), (b), (c) for ``E_rho(x1, x2)`` (metric) or ``E^S_mu`` (S-metric)."""
    if space.kind is Kind.B_METRIC:
        raise KindError("the fixed-ellipse theorem is stated for metric and s-metric spaces")
    a = to_fraction(a)
    params = {"a": a, "zeta": zeta.spec(), "foci": _labels(space, (x1, x2))}
    reason, znote = _zeta_gate(space, zeta)
    if reason:
        return _not_applicable("ellipse", space, params, reason)
    rad = radius_number(space, f)
    if rad is None:
        return _not_applicable("ellipse", space, params, "f is the identity (rho/mu undefined)")
    params["r"] = rad
    D = space.dist
    fig = Figure(Shape.ELLIPSE, (x1, x2), rad, space.kind)
    mem = members(fig, space)
    rep = VerifierReport("ellipse", space.kind, params, notes=[znote], figure_empty=not mem)

    cond_a, rows = _threshold_condition(
        "a", space, mem, rad / 2,
        quantity=lambda x: big_m(space, f, a, x, x1) + big_m(space, f, a, x, x2),
        consequent=lambda x: D(f(x), x1) + D(f(x), x2) <= rad,
        lhs_of=lambda x: D(f(x), x1) + D(f(x), x2),
        bound=rad,
    )
    rep.conditions.append(cond_a)
    rep.notes.append(f"condition a: {cond_a.note}")
    for row in rows:
        x = space.index(row["x"])
        if f(x) != x:
            rep.notes.append(
                f"condition a at non-fixed figure point {row['x']}: antecedent "
                f"{'held' if row['antecedent'] else 'did not hold'}, consequent {'held' if row['consequent'] else 'failed'}"
            )

    checks_b = []
    checks_c = []
    for x in space.points():
        t = D(f(x), x)
        if t <= 0:
            continue
        ok1, v1 = _zeta_record(zeta, t, big_m(space, f, a, x, x1), x=space.label(x), focus=space.label(x1))
        ok2, v2 = _zeta_record(zeta, t, big_m(space, f, a, x, x2), x=space.label(x), focus=space.label(x2))
        checks_b.append((ok1, (x,), v1))
        checks_b.append((ok2, (x,), v2))
        s = (D(x, x1) + D(f(x), x1) + D(x, x2) + D(f(x), x2)) / 2
        okc, vc = _zeta_record(zeta, t, s, x=space.label(x))
        checks_c.append((okc, (x,), vc))
    rep.conditions.append(_condition("b", checks_b, space))
    rep.conditions.append(_condition("c", checks_c, space))
    rep.conclusion = _conclusion(space, f, fig, extra_fixed=(x1, x2))
    return rep


def verify_fixed_circle(space: FiniteDistanceSpace, f: SelfMap, zeta: SimFunc, a, x0: int, *, disc: bool = False) -> VerifierReport:
    """Fixed-circle theorem (or its disc variant) for radius rho / mu.

    Condition ids follow the kind: ``a``/``b`` on a metric, ``i``/``ii`` on
    S-metric and b-metric spaces.
    """
    a = to_fraction(a)
    theorem = "disc" if disc else "circle"
    first, second = ("a", "b") if space.kind is Kind.METRIC else ("i", "ii")
    params = {"a": a, "zeta": zeta.spec(), "center": space.label(x0)}
    reason, znote = _zeta_gate(space, zeta)
    if reason:
        return _not_applicable(theorem, space, params, reason)
    rad = radius_number(space, f)
    if rad is None:
        return _not_applicable(theorem, space, params, "f is the identity (rho/mu undefined)")
    params["r"] = rad
    D = space.dist
    fig = Figure(Shape.DISC if disc else Shape.CIRCLE, (x0,), rad, space.kind)
    mem = members(fig, space)
    rep = VerifierReport(theorem, space.kind, params, notes=[znote], figure_empty=not mem)
    if disc and space.kind is Kind.S_METRIC:
        rep.notes.append("upper threshold read as mu/4 + delta (the printed r/4 mixes r and mu)")
    if space.kind is Kind.B_METRIC and space.b > S_TO_B_COEFFICIENT:
        rep.notes.append(f"b = {space.b} exceeds 3/2; the statement is made for d^S with b = 3/2")

    cond, rows = _threshold_condition(
        first, space, mem, rad / 4,
        quantity=lambda x: big_m(space, f, a, x, x0),
        consequent=lambda x: D(f(x), x0) <= rad,
        lhs_of=lambda x: D(f(x), x0),
        bound=rad,
    )
    rep.conditions.append(cond)
    rep.notes.append(f"condition {first}: {cond.note}")
    checks = []
    for x in space.points():
        t = D(f(x), x)
        if t <= 0:
            continue
        ok, v = _zeta_record(zeta, t, big_m(space, f, a, x, x0), x=space.label(x))
        checks.append((ok, (x,), v))
    rep.conditions.append(_condition(second, checks, space))
    rep.conclusion = _conclusion(space, f, fig, extra_fixed=(x0,))
    return rep


def verify_fixed_disc(space, f, zeta, a, x0) -> VerifierReport:
    return verify_fixed_circle(space, f, zeta, a, x0, disc=True)


def _require_metric(space, what):
    if space.kind is not Kind.METRIC:
        raise KindError(f"{what} is stated for metric spaces, not {space.kind}")


def check_ze_contraction(space: FiniteDistanceSpace, f: SelfMap, zeta: SimFunc, x1: int, x2: int) -> VerifierReport:
    """``d(fx,x) > 0  =>  zeta(d(fx,x), d(fx,x1) + d(fx,x2)) >= 0`` for all x.

    On a pass the consequence ``d(fx,x) < d(fx,x1) + d(fx,x2)`` is checked as
    well, at every x with ``fx != x1`` or ``fx != x2``.
    """
    _require_metric(space, "the Z_E-contraction")
    params = {"zeta": zeta.spec(), "foci": _labels(space, (x1, x2))}
    rep = VerifierReport("ze-contraction", space.kind, params)
    D = space.dist
    checks = []
    for x in space.points():
        t = D(f(x), x)
        if t <= 0:
            continue
        s = D(f(x), x1) + D(f(x), x2)
        ok, v = _zeta_record(zeta, t, s, x=space.label(x))
        checks.append((ok, (x,), v))
    ze = _condition("ze", checks, space)
    rep.conditions.append(ze)
    if ze.status is not Status.FAIL:
        derived = []
        for x in space.points():
            if f(x) == x1 and f(x) == x2:
                continue
            lhs, rhs = D(f(x), x), D(f(x), x1) + D(f(x), x2)
            derived.append((lhs < rhs, (x,), {"x": space.label(x), "lhs": lhs, "rhs": rhs}))
        rep.conditions.append(_condition("strict", derived, space))
    return rep


def verify_closed_ellipse(space: FiniteDistanceSpace, f: SelfMap, zeta: SimFunc, x1: int, x2: int) -> VerifierReport:
    """Closed-ellipse theorem: Z_E-contraction plus ``0 < d(fx,x1)+d(fx,x2) <= rho`` off the foci."""
    _require_metric(space, "the closed-ellipse theorem")
    params = {"zeta": zeta.spec(), "foci": _labels(space, (x1, x2))}
    reason, znote = _zeta_gate(space, zeta)
    if reason:
        return _not_applicable("closed-ellipse", space, params, reason)
    rad = radius_number(space, f)
    if rad is None:
        return _not_applicable("closed-ellipse", space, params, "f is the identity (rho undefined)")
    params["r"] = rad
    D = space.dist
    fig = Figure(Shape.CLOSED_ELLIPSE, (x1, x2), rad, space.kind)
    mem = members(fig, space)
    rep = VerifierReport("closed-ellipse", space.kind, params, notes=[znote], figure_empty=not mem)
    if x1 == x2:
        rep.notes.append(f"foci coincide: the closed ellipse is the disc D_{{{space.label(x1)},{rad / 2}}}")
    ze = check_ze_contraction(space, f, zeta, x1, x2)
    rep.conditions.extend(ze.conditions)
    if ze.conditions[0].status is Status.FAIL:
        rep.notes.append(f"precondition failed: f is not a Z_E-contraction for these foci (witness {ze.conditions[0].witness})")
    checks = []
    for x in sorted(mem - {x1, x2}):
        q = D(f(x), x1) + D(f(x), x2)
        checks.append((0 < q <= rad, (x,), {"x": space.label(x), "value": q, "bound": rad}))
    rep.conditions.append(_condition("bound", checks, space))
    rep.conclusion = _conclusion(space, f, fig)
    return rep


def verify_phi_circle(space: FiniteDistanceSpace, f: SelfMap, zeta: SimFunc, r, x0: int) -> VerifierReport:
    """Fixed-circle theorem built on the auxiliary function ``phi_r``."""
    r = to_fraction(r)
    if r < 0 or (space.kind is not Kind.METRIC and r <= 0):
        raise ParameterError(f"radius must be {'> 0' if space.kind is not Kind.METRIC else '>= 0'} here, got {r}")
    params = {"zeta": zeta.spec(), "center": space.label(x0), "r": r}
    reason, znote = _zeta_gate(space, zeta)
    if reason:
        return _not_applicable("phi-circle", space, params, reason)
    D = space.dist
    fig = Figure(Shape.CIRCLE, (x0,), r, space.kind)
    mem = sorted(members(fig, space))
    rep = VerifierReport("phi-circle", space.kind, params, notes=[znote], figure_empty=not mem)

    def image_dist(x):
        # d(x0, fx) on a metric; S(fx, fx, x0) and d^S(fx, x0) otherwise
        return D(x0, f(x)) if space.kind is Kind.METRIC else D(f(x), x0)

    rep.conditions.append(_condition("i", [
        (image_dist(x) == r, (x,), {"x": space.label(x), "value": image_dist(x), "r": r}) for x in mem
    ], space))
    checks = []
    for x in mem:
        for y in mem:
            if x != y:
                ok, v = _zeta_record(zeta, r, D(f(x), f(y)), x=space.label(x), y=space.label(y))
                checks.append((ok, (x, y), v))
    rep.conditions.append(_condition("ii", checks, space))
    checks = []
    for x in mem:
        for y in mem:
            t = D(f(x), f(y))
            s = D(x, y) - phi_r(r, D(x, f(x)))
            if s < 0:
                checks.append((False, (x, y), {"x": space.label(x), "y": space.label(y), "t": t, "s": s,
                                                "zeta": None, "note": "second argument outside [0, inf)"}))
                continue
            ok, v = _zeta_record(zeta, t, s, x=space.label(x), y=space.label(y))
            checks.append((ok, (x, y), v))
    rep.conditions.append(_condition("iii", checks, space))
    seen = {}
    checks = []
    for x in mem:
        prev = seen.setdefault(f(x), x)
        checks.append((prev == x, (prev, x), {"x": space.label(x), "image": space.label(f(x))}))
    rep.conditions.append(_condition("iv", checks, space))
    if len(mem) >= 2:
        rep.notes.append(
            "vacuity: for two distinct fixed circle points, (iii) reads zeta(D(x,y), D(x,y)) >= 0, "
            "which (z2) forbids; the hypotheses can only hold on circles with at most one point"
        )
    rep.conclusion = _conclusion(space, f, fig)
    return rep


def verify_uniqueness(space: FiniteDistanceSpace, f: SelfMap, figure: Figure, zeta: SimFunc, a) -> VerifierReport:
    """``zeta(D(fx,fy), M(x,y)) >= 0`` for x in the figure and y outside it.

    A pass forces ``Fix(f)`` to equal the figure's member set, which is what
    the conclusion check tests.
    """
    a = to_fraction(a)
    params = {"a": a, "zeta": zeta.spec(), "figure": figure.name(space)}
    mem = members(figure, space)
    if not mem:
        return _not_applicable("uniqueness", space, params, "the figure is empty")
    if not mem <= f.fixed:
        outside = sorted(mem - f.fixed)
        return _not_applicable("uniqueness", space, params,
                               f"figure is not fixed (e.g. {space.label(outside[0])} moves)")
    reason, znote = _zeta_gate(space, zeta)
    if reason:
        return _not_applicable("uniqueness", space, params, reason)
    D = space.dist
    rep = VerifierReport("uniqueness", space.kind, params, notes=[znote])
    checks = []
    for x in sorted(mem):
        for y in space.points():
            if y in mem:
                continue
            ok, v = _zeta_record(zeta, D(f(x), f(y)), big_m(space, f, a, x, y), x=space.label(x), y=space.label(y))
            checks.append((ok, (x, y), v))
    rep.conditions.append(_condition("separation", checks, space))
    rep.conclusion = Conclusion(
        f"Fix(f) = {figure.name(space)}",
        _sorted_labels(space, mem),
        frozenset(p for p in space.points() if f.images[p] == p) == mem,
    )
    return rep


def verify_identity_characterization(space: FiniteDistanceSpace, f: SelfMap, zeta: SimFunc, r) -> VerifierReport:
    """``D(x,fx) < zeta(D(x,fx), phi_r(D(x,fx)) + r)`` at every non-fixed x.

    The condition holds exactly when f is the identity; the report's
    conclusion records the verdict and whether it matches the map.
    """
    r = to_fraction(r)
    if r < 0:
        raise ParameterError(f"r must be >= 0, got {r}")
    params = {"zeta": zeta.spec(), "r": r}
    reason, znote = _zeta_gate(space, zeta)
    if reason:
        return _not_applicable("identity", space, params, reason)
    D = space.dist
    rep = VerifierReport("identity", space.kind, params, notes=[znote])
    checks = []
    for x in space.points():
        if f(x) == x:
            continue
        t = D(x, f(x))
        s = phi_r(r, t) + r
        v = zeta(t, s)
        checks.append((t < v, (x,), {"x": space.label(x), "t": t, "s": s, "zeta": v, "displacement": t}))
    cond = _condition("displacement", checks, space)
    rep.conditions.append(cond)
    holds = cond.status is not Status.FAIL
    is_identity = all(f.images[p] == p for p in space.points())
    rep.conclusion = Conclusion("f is the identity" if holds else "f is not the identity",
                                _labels(space, space.points()), holds == is_identity)
    rep.notes.append(f"verdict: {'identity' if holds else 'not identity'}")
    return rep
