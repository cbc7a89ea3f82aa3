"""Finite metric, S-metric and b-metric spaces over exact rationals.

A space is a labelled point set plus a distance table.  Metric and b-metric
tables are ``n x n``; S-metric tables are ``n x n x n``.  Every entry is a
:class:`fractions.Fraction`.  Spaces are immutable and validated on
construction.

All the fixed-figure machinery only ever needs a *two-point* quantity:
``d(x, y)`` for a metric, ``S(x, x, y)`` for an S-metric and ``d^S(x, y)``
for a b-metric.  :meth:`FiniteDistanceSpace.dist` returns that quantity for
the space's kind.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

__all__ = [
    "Kind",
    "StructuralError",
    "ParameterError",
    "InvalidSpaceError",
    "ValidationResult",
    "FiniteDistanceSpace",
    "to_fraction",
    "validate_metric",
    "validate_s_metric",
    "validate_b_metric",
    "s_from_metric",
    "b_from_s",
    "builtin_space",
    "BUILTIN_FORMULAS",
    "S_TO_B_COEFFICIENT",
]

#: Coefficient of the b-metric ``d^S(x, y) = S(x, x, y)`` induced by an S-metric.
S_TO_B_COEFFICIENT = Fraction(3, 2)


class Kind(str, enum.Enum):
    METRIC = "metric"
    S_METRIC = "s-metric"
    B_METRIC = "b-metric"

    def __str__(self) -> str:
        return self.value


class StructuralError(ValueError):
    """A table has the wrong shape or holds something that is not a rational."""


class ParameterError(ValueError):
    """A numeric parameter is outside its admissible range."""


class InvalidSpaceError(ValueError):
    """Raised when a table fails its axiom check during construction."""

    def __init__(self, result: "ValidationResult"):
        super().__init__(str(result))
        self.result = result


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of an axiom check.

    ``witness`` is the first violating tuple of point indices, in the
    iteration order of the validator (lexicographic over indices).
    """

    ok: bool
    axiom: str | None = None
    witness: tuple[int, ...] | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "pass" + (f" ({self.detail})" if self.detail else "")
        return f"fail: {self.axiom} at {self.witness}: {self.detail}"


def to_fraction(value) -> Fraction:
    """Exact conversion; floats are rejected so nothing inexact sneaks in."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise StructuralError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip().replace("−", "-"))
        except (ValueError, ZeroDivisionError) as exc:
            raise StructuralError(f"unparsable rational {value!r}") from exc
    raise StructuralError(f"not a rational: {value!r} ({type(value).__name__})")


def _square(table) -> tuple[tuple[Fraction, ...], ...]:
    try:
        rows = [list(row) for row in table]
    except TypeError as exc:
        raise StructuralError("table is not a sequence of rows") from exc
    n = len(rows)
    if n == 0:
        raise StructuralError("empty table")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise StructuralError(f"table is not square: row {i} has {len(row)} entries, expected {n}")
    return tuple(tuple(to_fraction(v) for v in row) for row in rows)


def _cubic(table) -> tuple[tuple[tuple[Fraction, ...], ...], ...]:
    try:
        slabs = [[list(row) for row in slab] for slab in table]
    except TypeError as exc:
        raise StructuralError("table is not a nested sequence") from exc
    n = len(slabs)
    if n == 0:
        raise StructuralError("empty table")
    for i, slab in enumerate(slabs):
        if len(slab) != n:
            raise StructuralError(f"table is not cubic: slab {i} has {len(slab)} rows, expected {n}")
        for j, row in enumerate(slab):
            if len(row) != n:
                raise StructuralError(f"table is not cubic: S[{i}][{j}] has {len(row)} entries, expected {n}")
    return tuple(tuple(tuple(to_fraction(v) for v in row) for row in slab) for slab in slabs)


def _check_pairwise(d, n) -> ValidationResult | None:
    """Non-negativity, identity of indiscernibles and symmetry."""
    for x in range(n):
        for y in range(n):
            v = d[x][y]
            if v < 0:
                return ValidationResult(False, "non-negativity", (x, y), f"d = {v}")
            if (v == 0) != (x == y):
                return ValidationResult(False, "identity of indiscernibles", (x, y), f"d = {v}")
            if v != d[y][x]:
                return ValidationResult(False, "symmetry", (x, y), f"{v} != {d[y][x]}")
    return None


def validate_metric(table) -> ValidationResult:
    """Check the metric axioms on a square table.

    The triangle witness ``(x, y, z)`` means ``d(x, z) > d(x, y) + d(y, z)``.
    """
    d = _square(table)
    n = len(d)
    bad = _check_pairwise(d, n)
    if bad is not None:
        return bad
    for x, y, z in itertools.product(range(n), repeat=3):
        if d[x][z] > d[x][y] + d[y][z]:
            return ValidationResult(
                False, "triangle inequality", (x, y, z),
                f"d(x,z) = {d[x][z]} > {d[x][y]} + {d[y][z]}",
            )
    return ValidationResult(True)


def validate_b_metric(table, b) -> ValidationResult:
    """Check the b-metric axioms; ``d(x, z) <= b (d(x, y) + d(y, z))``."""
    b = to_fraction(b)
    if b < 1:
        raise ParameterError(f"b-metric coefficient must be >= 1, got {b}")
    d = _square(table)
    n = len(d)
    bad = _check_pairwise(d, n)
    if bad is not None:
        return bad
    for x, y, z in itertools.product(range(n), repeat=3):
        if d[x][z] > b * (d[x][y] + d[y][z]):
            return ValidationResult(
                False, "relaxed triangle inequality", (x, y, z),
                f"d(x,z) = {d[x][z]} > {b} * ({d[x][y]} + {d[y][z]})",
            )
    return ValidationResult(True)


def validate_s_metric(table) -> ValidationResult:
    """Check the S-metric axioms on a cubic table.

    Besides the two defining axioms this also checks ``S(x,x,y) = S(y,y,x)``.
    That identity follows from the axioms, so a failure there points at a
    bug rather than at bad input; it is still reported rather than assumed.
    """
    S = _cubic(table)
    n = len(S)
    for x, y, z in itertools.product(range(n), repeat=3):
        v = S[x][y][z]
        if v < 0:
            return ValidationResult(False, "non-negativity", (x, y, z), f"S = {v}")
        if (v == 0) != (x == y == z):
            return ValidationResult(False, "zero iff x = y = z", (x, y, z), f"S = {v}")
    diag = [[S[x][x][a] for a in range(n)] for x in range(n)]
    for x, y, z, a in itertools.product(range(n), repeat=4):
        if S[x][y][z] > diag[x][a] + diag[y][a] + diag[z][a]:
            return ValidationResult(
                False, "rectangle inequality", (x, y, z, a),
                f"S(x,y,z) = {S[x][y][z]} > {diag[x][a]} + {diag[y][a]} + {diag[z][a]}",
            )
    for x, y in itertools.combinations(range(n), 2):
        if diag[x][y] != diag[y][x]:
            return ValidationResult(False, "symmetry S(x,x,y) = S(y,y,x)", (x, y),
                                    f"{diag[x][y]} != {diag[y][x]}")
    return ValidationResult(True, detail="S(x,x,y) = S(y,y,x) holds")


@dataclass(frozen=True)
class FiniteDistanceSpace:
    """A validated finite space of one of the three kinds.

    Prefer the ``metric`` / ``s_metric`` / ``b_metric`` constructors, which
    normalise the table; the bare constructor validates too.
    """

    labels: tuple[str, ...]
    kind: Kind
    table: tuple
    b: Fraction | None = None
    _pair: tuple[tuple[Fraction, ...], ...] = field(init=False, repr=False, compare=False)
    _attained: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)
    # derived quantities keyed by map images; filled by fixfig.geometry
    memo: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if not labels:
            raise StructuralError("a space needs at least one point")
        if len(set(labels)) != len(labels):
            dup = next(x for x in labels if labels.count(x) > 1)
            raise StructuralError(f"duplicate label {dup!r}")
        object.__setattr__(self, "labels", labels)
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is Kind.S_METRIC:
            table = _cubic(self.table)
            result = validate_s_metric(table)
            pair = tuple(tuple(table[x][x][y] for y in range(len(table))) for x in range(len(table)))
        else:
            table = _square(self.table)
            if kind is Kind.METRIC:
                result = validate_metric(table)
            else:
                if self.b is None:
                    raise ParameterError("a b-metric space needs its coefficient b")
                object.__setattr__(self, "b", to_fraction(self.b))
                result = validate_b_metric(table, self.b)
            pair = table
        if kind is not Kind.B_METRIC and self.b is not None:
            raise ParameterError(f"coefficient b only applies to b-metric spaces, not {kind}")
        if len(table) != len(labels):
            raise StructuralError(f"{len(labels)} labels but the table has size {len(table)}")
        if not result:
            raise InvalidSpaceError(result)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "_pair", pair)
        object.__setattr__(self, "_attained", tuple(sorted({v for row in pair for v in row})))

    @classmethod
    def metric(cls, labels: Sequence, table) -> "FiniteDistanceSpace":
        return cls(tuple(labels), Kind.METRIC, table)

    @classmethod
    def s_metric(cls, labels: Sequence, table) -> "FiniteDistanceSpace":
        return cls(tuple(labels), Kind.S_METRIC, table)

    @classmethod
    def b_metric(cls, labels: Sequence, table, b) -> "FiniteDistanceSpace":
        return cls(tuple(labels), Kind.B_METRIC, table, to_fraction(b))

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def points(self) -> range:
        return range(len(self.labels))

    def index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"no point labelled {label!r}") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def dist(self, x: int, y: int) -> Fraction:
        """The kind's two-point quantity: d(x,y), S(x,x,y) or d^S(x,y)."""
        return self._pair[x][y]

    def s(self, x: int, y: int, z: int) -> Fraction:
        if self.kind is not Kind.S_METRIC:
            raise TypeError(f"S(x,y,z) is only defined on s-metric spaces, not {self.kind}")
        return self.table[x][y][z]

    def attained(self) -> list[Fraction]:
        """Sorted distinct values of the two-point quantity (zero included)."""
        return list(self._attained)


def s_from_metric(d: FiniteDistanceSpace) -> FiniteDistanceSpace:
    """The S-metric generated by a metric: ``S(x, y, z) = d(x, z) + d(y, z)``."""
    if d.kind is not Kind.METRIC:
        raise TypeError(f"expected a metric space, got {d.kind}")
    t = d.table
    n = d.n
    S = [[[t[x][z] + t[y][z] for z in range(n)] for y in range(n)] for x in range(n)]
    return FiniteDistanceSpace.s_metric(d.labels, S)


def b_from_s(S: FiniteDistanceSpace) -> FiniteDistanceSpace:
    """The b-metric ``d^S(x, y) = S(x, x, y)`` with coefficient 3/2."""
    if S.kind is not Kind.S_METRIC:
        raise TypeError(f"expected an s-metric space, got {S.kind}")
    n = S.n
    table = [[S.table[x][x][y] for y in range(n)] for x in range(n)]
    return FiniteDistanceSpace.b_metric(S.labels, table, S_TO_B_COEFFICIENT)


def _abs_metric(x, y):
    return abs(x - y)


def _discrete_metric(x, y):
    return Fraction(0 if x == y else 1)


def _usual_s(x, y, z):
    return abs(x - z) + abs(y - z)


def _second_s(x, y, z):
    return abs(x - z) + abs(x + z - 2 * y)


#: name -> (native kind, formula over rationals)
BUILTIN_FORMULAS: dict[str, tuple[Kind, Callable]] = {
    "abs-metric": (Kind.METRIC, _abs_metric),
    "discrete-metric": (Kind.METRIC, _discrete_metric),
    "usual-s-metric": (Kind.S_METRIC, _usual_s),
    "second-s-metric": (Kind.S_METRIC, _second_s),
}


def builtin_space(name: str, labels: Iterable) -> FiniteDistanceSpace:
    """Evaluate a named formula on rational-valued labels.

    >>> builtin_space("abs-metric", [5]).table
    ((Fraction(0, 1),),)
    """
    if name not in BUILTIN_FORMULAS:
        raise KeyError(f"unknown builtin space {name!r}; choose from {sorted(BUILTIN_FORMULAS)}")
    kind, formula = BUILTIN_FORMULAS[name]
    labels = [str(x).strip().replace("−", "-") for x in labels]
    if len(set(labels)) != len(labels):
        raise StructuralError(f"duplicate labels in {labels}")
    values = [to_fraction(x) for x in labels]
    if len(set(values)) != len(values):
        raise StructuralError(f"labels {labels} denote the same number twice")
    if kind is Kind.METRIC:
        table = [[formula(x, y) for y in values] for x in values]
        return FiniteDistanceSpace.metric(labels, table)
    table = [[[formula(x, y, z) for z in values] for y in values] for x in values]
    return FiniteDistanceSpace.s_metric(labels, table)
