"""Fixed points, the characteristic numbers and figure membership.

Everything here is expressed through the space's two-point quantity
``D = space.dist`` (``d``, ``S(x,x,.)`` or ``d^S``), so one code path serves
all three kinds.  The kinds differ only in

* which displacement number applies: ``rho`` (metric) or ``mu`` (S-metric
  and b-metric), both ``min{D(x, fx) : fx != x}``;
* the divisor of the cross term of ``M``: 2 for a metric, 4 otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from fixfig.spaces import FiniteDistanceSpace, Kind, ParameterError, StructuralError, to_fraction

__all__ = [
    "SelfMap",
    "Shape",
    "Figure",
    "KindError",
    "fix_set",
    "displacement",
    "rho",
    "mu",
    "radius_number",
    "big_m",
    "cross_divisor",
    "phi_r",
    "members",
    "enumerate_figures",
    "circle",
    "disc",
    "ellipse",
    "closed_ellipse",
    "point_labels",
    "map_labels",
    "parse_points",
]


class KindError(TypeError):
    """An operation was applied to a space of the wrong kind."""


@dataclass(frozen=True)
class SelfMap:
    """A total self-map given by the image index of every point."""

    images: tuple[int, ...]
    fixed: frozenset[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        n = len(images)
        for x, fx in enumerate(images):
            if not 0 <= fx < n:
                raise StructuralError(f"image of point {x} is {fx}, outside 0..{n - 1}")
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "fixed", frozenset(x for x, fx in enumerate(images) if fx == x))

    @classmethod
    def identity(cls, n: int) -> "SelfMap":
        return cls(tuple(range(n)))

    @classmethod
    def constant(cls, n: int, p: int) -> "SelfMap":
        return cls((p,) * n)

    @classmethod
    def from_labels(cls, space: FiniteDistanceSpace, mapping: Mapping) -> "SelfMap":
        """Build from ``{label: image label}``; unlisted points are fixed."""
        images = list(space.points())
        for src, dst in mapping.items():
            images[space.index(src)] = space.index(dst)
        return cls(tuple(images))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __len__(self) -> int:
        return len(self.images)

    @property
    def is_identity(self) -> bool:
        return len(self.fixed) == len(self.images)


def _check_map(space: FiniteDistanceSpace, f: SelfMap) -> None:
    if len(f) != space.n:
        raise StructuralError(f"map has {len(f)} entries but the space has {space.n} points")


def fix_set(space: FiniteDistanceSpace, f: SelfMap) -> frozenset[int]:
    _check_map(space, f)
    return f.fixed


def displacement(space: FiniteDistanceSpace, f: SelfMap, x: int) -> Fraction:
    return space.dist(x, f(x))


def radius_number(space: FiniteDistanceSpace, f: SelfMap) -> Fraction | None:
    """``rho`` or ``mu`` for the space's kind; ``None`` when f is the identity."""
    _check_map(space, f)
    moved = [space.dist(x, f(x)) for x in space.points() if f(x) != x]
    return min(moved) if moved else None


def rho(space: FiniteDistanceSpace, f: SelfMap) -> Fraction | None:
    if space.kind is not Kind.METRIC:
        raise KindError(f"rho is defined on metric spaces; use mu for {space.kind}")
    return radius_number(space, f)


def mu(space: FiniteDistanceSpace, f: SelfMap) -> Fraction | None:
    if space.kind is Kind.METRIC:
        raise KindError("mu is defined on s-metric and b-metric spaces; use rho for a metric")
    return radius_number(space, f)


def cross_divisor(kind: Kind) -> int:
    # b-metric uses the circle-theorem form of M (divisor 4)
    return 2 if kind is Kind.METRIC else 4


def _check_a(a) -> Fraction:
    if type(a) is not Fraction:
        a = to_fraction(a)
    if not 0 <= a < 1:
        raise ParameterError(f"a must lie in [0, 1), got {a}")
    return a


def big_m(space: FiniteDistanceSpace, f: SelfMap, a, x: int, y: int) -> Fraction:
    """``max{a Dx + (1-a) Dy, (1-a) Dx + a Dy, (D(x,fy) + D(y,fx)) / k}``.

    ``Dx = D(x, fx)``; ``k`` is 2 for a metric and 4 for the other kinds.
    """
    a = _check_a(a)
    key = ("M", f.images, a, x, y)
    cached = space.memo.get(key)
    if cached is not None:
        return cached
    D = space.dist
    fx, fy = f(x), f(y)
    dx, dy = D(x, fx), D(y, fy)
    lo, hi = (dx, dy) if dx <= dy else (dy, dx)
    # the larger of the two convex terms puts weight max(a, 1-a) on the larger displacement
    convex = lo + max(a, 1 - a) * (hi - lo)
    cross = (D(x, fy) + D(y, fx)) / cross_divisor(space.kind)
    space.memo[key] = m = max(convex, cross)
    return m


def phi_r(r, u) -> Fraction:
    """Auxiliary function: 0 at 0, ``u - r`` for ``u > 0``."""
    r = to_fraction(r)
    u = to_fraction(u)
    if r < 0:
        raise ParameterError(f"r must be >= 0, got {r}")
    if u < 0:
        raise ParameterError(f"phi_r is defined for u >= 0, got {u}")
    return Fraction(0) if u == 0 else u - r


class Shape(str, enum.Enum):
    CIRCLE = "circle"
    DISC = "disc"
    ELLIPSE = "ellipse"
    CLOSED_ELLIPSE = "closed-ellipse"

    def __str__(self) -> str:
        return self.value

    @property
    def two_foci(self) -> bool:
        return self in (Shape.ELLIPSE, Shape.CLOSED_ELLIPSE)

    @property
    def closed(self) -> bool:
        return self in (Shape.DISC, Shape.CLOSED_ELLIPSE)


_SYMBOL = {Shape.CIRCLE: "C", Shape.DISC: "D", Shape.ELLIPSE: "E", Shape.CLOSED_ELLIPSE: "Ebar"}


@dataclass(frozen=True, order=True)
class Figure:
    """A circle/disc (one centre) or ellipse/closed ellipse (two foci).

    ``points`` holds the centre or the two foci as point indices.  Ordering
    is by ``(shape, points, r)``, which makes the canonical representative
    of a member set the smallest parameter tuple.
    """

    shape: Shape
    points: tuple[int, ...]
    r: Fraction
    kind: Kind

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "r", to_fraction(self.r))
        pts = tuple(int(p) for p in self.points)
        if len(pts) != (2 if self.shape.two_foci else 1):
            raise StructuralError(f"{self.shape} needs {2 if self.shape.two_foci else 1} defining points, got {pts}")
        object.__setattr__(self, "points", pts)
        if self.r < 0:
            raise ParameterError(f"figure radius must be >= 0, got {self.r}")

    def quantity(self, space: FiniteDistanceSpace, x: int) -> Fraction:
        """The defining quantity: ``D(x, x0)`` or ``D(x, x1) + D(x, x2)``."""
        return sum((space.dist(x, p) for p in self.points), Fraction(0))

    def name(self, space: FiniteDistanceSpace | None = None) -> str:
        pts = [space.label(p) if space is not None else str(p) for p in self.points]
        sup = "" if self.kind is Kind.METRIC else ("^S" if self.kind is Kind.S_METRIC else "^dS")
        if self.shape.two_foci:
            return f"{_SYMBOL[self.shape]}{sup}_{self.r}({pts[0]},{pts[1]})"
        return f"{_SYMBOL[self.shape]}{sup}_{{{pts[0]},{self.r}}}"


def circle(space, x0, r) -> Figure:
    return Figure(Shape.CIRCLE, (x0,), r, space.kind)


def disc(space, x0, r) -> Figure:
    return Figure(Shape.DISC, (x0,), r, space.kind)


def ellipse(space, x1, x2, r) -> Figure:
    return Figure(Shape.ELLIPSE, (x1, x2), r, space.kind)


def closed_ellipse(space, x1, x2, r) -> Figure:
    return Figure(Shape.CLOSED_ELLIPSE, (x1, x2), r, space.kind)


def members(figure: Figure, space: FiniteDistanceSpace) -> frozenset[int]:
    if figure.kind is not space.kind:
        raise KindError(f"{figure.kind} figure used on a {space.kind} space")
    for p in figure.points:
        if not 0 <= p < space.n:
            raise StructuralError(f"defining point {p} is not a point of the space")
    if figure.shape.closed:
        return frozenset(x for x in space.points() if figure.quantity(space, x) <= figure.r)
    return frozenset(x for x in space.points() if figure.quantity(space, x) == figure.r)


def _defining_tuples(space: FiniteDistanceSpace, shape: Shape) -> Iterable[tuple[int, ...]]:
    if shape.two_foci:
        return ((i, j) for i in space.points() for j in space.points() if i <= j)
    return ((i,) for i in space.points())


def enumerate_figures(space: FiniteDistanceSpace, shape) -> list[Figure]:
    """Every nonempty figure of ``shape`` with an attained radius, one per member set.

    Radii range over the values the defining quantity actually takes.  Each
    member set is represented by its smallest ``(points, r)`` tuple; the
    result is sorted in that order.
    """
    shape = Shape(shape)
    best: dict[frozenset[int], Figure] = {}
    for pts in _defining_tuples(space, shape):
        probe = Figure(shape, pts, 0, space.kind)
        for r in sorted({probe.quantity(space, x) for x in space.points()}):
            fig = Figure(shape, pts, r, space.kind)
            mem = members(fig, space)
            if mem and (mem not in best or fig < best[mem]):
                best[mem] = fig
    return sorted(best.values())


def point_labels(space: FiniteDistanceSpace, indices: Iterable[int]) -> list[str]:
    """Labels of ``indices`` in point order."""
    return [space.label(i) for i in sorted(indices)]


def map_labels(space: FiniteDistanceSpace, f: SelfMap) -> dict[str, str]:
    return {space.label(x): space.label(fx) for x, fx in enumerate(f.images)}


def parse_points(space: FiniteDistanceSpace, labels: Sequence) -> tuple[int, ...]:
    return tuple(space.index(x) for x in labels)
