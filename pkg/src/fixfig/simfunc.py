"""Simulation functions and desk-scale checks of their axioms.

A simulation function ``zeta(t, s)`` on ``[0, inf)^2`` satisfies

* (z1) ``zeta(0, 0) = 0``;
* (z2) ``zeta(t, s) < s - t`` for all ``t, s > 0``;
* (z3) a lim-sup condition along sequences with a common positive limit,
  or its weakened form (z3*) restricted to ``t_n < s_n``.

(z1) is enforced when a :class:`SimFunc` is built.  (z2) is sampled on a
grid.  (z3)/(z3*) can only be spot-checked on a finite prefix, so
:func:`check_zeta3_sequences` never claims more than consistency.

Families::

    linear          zeta = lam*s - t                 lam in [0, 1)
    phi-deflate     zeta = s - phi(s) - t            phi >= 0, phi(u) = 0 iff u = 0
    slope-scale     zeta = s*g(s) - t                g takes values in [0, 1)
    upper-envelope  zeta = eta(s) - t                eta(0) = 0, 0 <= eta(u) < u
    integral        zeta = s - Psi(t)                Psi an antiderivative with Psi(0) = 0
    expr            any expression over t and s

The side conditions on the parameter functions are checked at
:data:`SIDE_CONDITION_SAMPLES` only.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from fixfig.expr import EvaluationError, Expression, ExpressionError, parse_expression
from fixfig.spaces import FiniteDistanceSpace, ParameterError, to_fraction

__all__ = [
    "Family",
    "Certificate",
    "SimFunc",
    "Zeta2Report",
    "SpotReport",
    "Zeta3Variant",
    "builtin",
    "linear",
    "user_expression",
    "parse_zeta_spec",
    "evaluate",
    "check_zeta2",
    "check_zeta3_sequences",
    "default_grid",
    "default_grid_for",
    "BASE_GRID_VALUES",
    "SIDE_CONDITION_SAMPLES",
    "DEFAULT_ZETA_POOL",
    "EvaluationError",
]

BASE_GRID_VALUES = tuple(Fraction(v) for v in ("1/4", "1/2", "1", "2", "4", "8"))
SIDE_CONDITION_SAMPLES = (Fraction(0),) + BASE_GRID_VALUES


class Family(str, enum.Enum):
    LINEAR = "linear"
    PHI_DEFLATE = "phi-deflate"
    SLOPE_SCALE = "slope-scale"
    UPPER_ENVELOPE = "upper-envelope"
    INTEGRAL = "integral"
    EXPRESSION = "expr"

    def __str__(self) -> str:
        return self.value


class Certificate(str, enum.Enum):
    ANALYTIC = "analytic"
    SAMPLED_ONLY = "sampled-only"

    def __str__(self) -> str:
        return self.value


# variable each family's parameter expression is written in
_PARAM_VARIABLE = {
    Family.PHI_DEFLATE: "s",
    Family.SLOPE_SCALE: "s",
    Family.UPPER_ENVELOPE: "s",
    Family.INTEGRAL: "t",
}


@dataclass(frozen=True)
class SimFunc:
    """A simulation-function descriptor.

    ``param`` is the rational ``lam`` for the linear family and an
    :class:`~fixfig.expr.Expression` otherwise.  Instances compare equal when
    family and parameter text agree.
    """

    family: Family
    param: Fraction | Expression
    certificate: Certificate

    def __post_init__(self):
        if evaluate(self, 0, 0) != 0:
            raise ParameterError(f"{self.spec()}: zeta(0,0) = {evaluate(self, 0, 0)}, must be 0")

    def __call__(self, t, s) -> Fraction:
        return evaluate(self, t, s)

    def spec(self) -> str:
        """Round-trippable ``family:param`` string, e.g. ``linear:1/2``."""
        return f"{self.family.value}:{self.param}"

    def formula(self) -> str:
        p = self.param
        return {
            Family.LINEAR: f"{p}*s - t",
            Family.PHI_DEFLATE: f"s - ({p}) - t",
            Family.SLOPE_SCALE: f"s*({p}) - t",
            Family.UPPER_ENVELOPE: f"({p}) - t",
            Family.INTEGRAL: f"s - ({p})",
            Family.EXPRESSION: f"{p}",
        }[self.family]

    def __str__(self) -> str:
        return self.spec()


def _raw(z: SimFunc, t: Fraction, s: Fraction) -> Fraction:
    fam, p = z.family, z.param
    if fam is Family.LINEAR:
        return p * s - t
    if fam is Family.PHI_DEFLATE:
        return s - p(s=s) - t
    if fam is Family.SLOPE_SCALE:
        return s * p(s=s) - t
    if fam is Family.UPPER_ENVELOPE:
        return p(s=s) - t
    if fam is Family.INTEGRAL:
        return s - p(t=t)
    return p(t=t, s=s)


def evaluate(zeta: SimFunc, t, s) -> Fraction:
    """Exact value of ``zeta(t, s)`` for ``t, s >= 0``."""
    t = to_fraction(t)
    s = to_fraction(s)
    if t < 0 or s < 0:
        raise ParameterError(f"zeta is defined on [0, inf)^2; got t={t}, s={s}")
    return _raw(zeta, t, s)


def linear(lam) -> SimFunc:
    lam = to_fraction(lam)
    if not 0 <= lam < 1:
        raise ParameterError(f"linear family needs lambda in [0, 1), got {lam}")
    return SimFunc(Family.LINEAR, lam, Certificate.ANALYTIC)


def user_expression(text: str) -> SimFunc:
    return SimFunc(Family.EXPRESSION, parse_expression(text, ("t", "s")), Certificate.SAMPLED_ONLY)


def _check_side_conditions(family: Family, fn: Expression) -> None:
    var = _PARAM_VARIABLE[family]
    for u in SIDE_CONDITION_SAMPLES:
        try:
            v = fn(**{var: u})
        except EvaluationError as exc:
            raise ParameterError(f"{family}: parameter undefined at {u}: {exc}") from None
        if family is Family.PHI_DEFLATE:
            ok = v == 0 if u == 0 else v > 0
            need = "phi(0) = 0 and phi(u) > 0 for u > 0"
        elif family is Family.SLOPE_SCALE:
            ok = 0 <= v < 1
            need = "values in [0, 1)"
        elif family is Family.UPPER_ENVELOPE:
            ok = v == 0 if u == 0 else 0 <= v < u
            need = "eta(0) = 0 and 0 <= eta(u) < u for u > 0"
        else:
            ok = v == 0 if u == 0 else v > u
            need = "Psi(0) = 0 and Psi(u) > u for u > 0"
        if not ok:
            raise ParameterError(f"{family}: parameter {fn} violates {need} at {var} = {u} (value {v})")


def builtin(family, param) -> SimFunc:
    """Construct one of the built-in families.

    ``param`` is a rational (or its string) for ``linear`` and an expression
    string in the family's variable otherwise (``s`` for phi-deflate,
    slope-scale and upper-envelope; ``t`` for the antiderivative in
    ``integral``).
    """
    try:
        family = Family(family)
    except ValueError:
        raise ParameterError(f"unknown simulation-function family {family!r}") from None
    if family is Family.LINEAR:
        return linear(param)
    if family is Family.EXPRESSION:
        return user_expression(str(param))
    fn = param if isinstance(param, Expression) else parse_expression(str(param), (_PARAM_VARIABLE[family],))
    _check_side_conditions(family, fn)
    return SimFunc(family, fn, Certificate.SAMPLED_ONLY)


def parse_zeta_spec(spec: str) -> SimFunc:
    """Parse ``family:param``, e.g. ``linear:1/2`` or ``expr:7/8*s - t``."""
    family, sep, param = spec.partition(":")
    if not sep or not param.strip():
        raise ParameterError(f"zeta spec must look like 'family:param', got {spec!r}")
    try:
        return builtin(family.strip(), param.strip())
    except ExpressionError as exc:
        raise ParameterError(str(exc)) from None


#: The pool used by scans and figure certification.
DEFAULT_ZETA_POOL = tuple(linear(Fraction(k, 4)) for k in range(4))


@dataclass(frozen=True)
class Zeta2Report:
    checked: int
    passed: bool
    witness: tuple[Fraction, Fraction] | None = None
    value: Fraction | None = None
    note: str = ""


def default_grid(space: FiniteDistanceSpace | None = None) -> list[tuple[Fraction, Fraction]]:
    """All pairs of the base values, plus pairs of the space's positive distances."""
    return default_grid_for(space.attained() if space is not None else ())


def default_grid_for(distances: Iterable[Fraction]) -> list[tuple[Fraction, Fraction]]:
    values = set(BASE_GRID_VALUES)
    values.update(v for v in distances if v > 0)
    ordered = sorted(values)
    return list(itertools.product(ordered, repeat=2))


def check_zeta2(zeta: SimFunc, grid: Iterable | None = None, *, sample_analytic: bool = False) -> Zeta2Report:
    """Check ``zeta(t, s) < s - t`` on every grid point.

    Analytically certified families are reported as passing without
    sampling unless ``sample_analytic`` is set.
    """
    grid = default_grid() if grid is None else [(to_fraction(t), to_fraction(s)) for t, s in grid]
    if not grid:
        raise ParameterError("zeta2 grid must be nonempty")
    for t, s in grid:
        if t <= 0 or s <= 0:
            raise ParameterError(f"zeta2 grid points must be strictly positive, got ({t}, {s})")
    if zeta.certificate is Certificate.ANALYTIC and not sample_analytic:
        return Zeta2Report(0, True, note=f"analytic: {zeta.formula()} < s - t since lambda < 1")
    for n, (t, s) in enumerate(grid, 1):
        v = zeta(t, s)
        if not v < s - t:
            return Zeta2Report(n, False, (t, s), v, note=f"zeta({t},{s}) = {v} >= {s - t}")
    note = "sampled" if zeta.family is Family.EXPRESSION else "sampled; side conditions checked at samples only"
    if zeta.family is Family.INTEGRAL:
        note += "; integrability of psi not verified"
    return Zeta2Report(len(grid), True, note=note)


class Zeta3Variant(str, enum.Enum):
    Z3 = "z3"
    Z3_STAR = "z3*"


@dataclass(frozen=True)
class SpotReport:
    variant: Zeta3Variant
    terms: int
    tail_start: int
    tail_max: Fraction
    consistent: bool
    inconclusive: bool = True
    note: str = "finite prefix: consistent with, but cannot establish, a limit statement"


def check_zeta3_sequences(zeta: SimFunc, t_seq: Sequence, s_seq: Sequence, variant="z3") -> SpotReport:
    """Spot-check (z3)/(z3*) on a finite prefix.

    Reports the maximum of ``zeta(t_n, s_n)`` over the last quarter of the
    terms and whether it is negative.
    """
    variant = Zeta3Variant(variant)
    ts = [to_fraction(v) for v in t_seq]
    ss = [to_fraction(v) for v in s_seq]
    if len(ts) != len(ss):
        raise ParameterError(f"sequence lengths differ: {len(ts)} vs {len(ss)}")
    if len(ts) < 8:
        raise ParameterError(f"need at least 8 terms, got {len(ts)}")
    for n, (t, s) in enumerate(zip(ts, ss)):
        if t <= 0 or s <= 0:
            raise ParameterError(f"term {n}: sequences must be strictly positive, got ({t}, {s})")
        if variant is Zeta3Variant.Z3_STAR and not t < s:
            raise ParameterError(f"term {n}: z3* requires t_n < s_n, got ({t}, {s})")
    start = len(ts) - len(ts) // 4
    tail_max = max(zeta(t, s) for t, s in zip(ts[start:], ss[start:]))
    return SpotReport(variant, len(ts), start, tail_max, tail_max < 0)
