"""Deliberately naive recomputation, independent of :mod:`fixfig.geometry`.

Nothing here calls ``space.dist`` or the geometry helpers: distances are read
straight from the raw tables and every formula is written out per kind.
The verifiers use :func:`figure_members` and :func:`all_fixed` to decide
whether a claimed conclusion actually holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from fixfig.spaces import FiniteDistanceSpace, Kind

__all__ = [
    "NumbersRecord",
    "raw_pair",
    "recompute_numbers",
    "figure_members",
    "all_fixed",
    "realizable_member_sets",
    "fixed_member_sets_by_subsets",
]


def raw_pair(space: FiniteDistanceSpace, u: int, v: int) -> Fraction:
    if space.kind == "s-metric":
        return space.table[u][u][v]
    return space.table[u][v]


@dataclass(frozen=True)
class NumbersRecord:
    radius: Fraction | None  # rho or mu
    m_value: Fraction
    moved: tuple[int, ...]


def recompute_numbers(space: FiniteDistanceSpace, f, a, x: int, y: int) -> NumbersRecord:
    """rho/mu and M(x, y) by explicit loops over the raw table."""
    images = list(f.images)
    a = Fraction(a)
    moved = []
    best = None
    for p in range(len(images)):
        if images[p] != p:
            moved.append(p)
            v = raw_pair(space, p, images[p])
            if best is None or v < best:
                best = v
    fx = images[x]
    fy = images[y]
    if space.kind == "metric":
        t = space.table
        first = a * t[x][fx] + (1 - a) * t[y][fy]
        second = (1 - a) * t[x][fx] + a * t[y][fy]
        third = (t[x][fy] + t[y][fx]) / 2
    elif space.kind == "s-metric":
        S = space.table
        first = a * S[x][x][fx] + (1 - a) * S[y][y][fy]
        second = (1 - a) * S[x][x][fx] + a * S[y][y][fy]
        third = (S[x][x][fy] + S[y][y][fx]) / 4
    else:
        t = space.table
        first = a * t[x][fx] + (1 - a) * t[y][fy]
        second = (1 - a) * t[x][fx] + a * t[y][fy]
        third = (t[x][fy] + t[y][fx]) / 4
    m = first
    if second > m:
        m = second
    if third > m:
        m = third
    return NumbersRecord(best, m, tuple(moved))


def figure_members(space: FiniteDistanceSpace, shape: str, points, r) -> frozenset[int]:
    shape = str(shape)
    r = Fraction(r)
    out = set()
    for x in range(len(space.labels)):
        q = Fraction(0)
        for p in points:
            q += raw_pair(space, x, p)
        if shape in ("disc", "closed-ellipse"):
            if q <= r:
                out.add(x)
        elif q == r:
            out.add(x)
    return frozenset(out)


def all_fixed(f, points) -> bool:
    return all(f.images[p] == p for p in points)


def _radii(space, points):
    return {sum((raw_pair(space, x, p) for p in points), Fraction(0)) for x in range(len(space.labels))}


def realizable_member_sets(space: FiniteDistanceSpace, shape: str) -> set[frozenset[int]]:
    """Every nonempty member set of the shape over attained radii."""
    shape = str(shape)
    n = len(space.labels)
    if shape in ("ellipse", "closed-ellipse"):
        tuples = [(i, j) for i in range(n) for j in range(i, n)]
    else:
        tuples = [(i,) for i in range(n)]
    out = set()
    for pts in tuples:
        for r in _radii(space, pts):
            mem = figure_members(space, shape, pts, r)
            if mem:
                out.add(mem)
    return out


def fixed_member_sets_by_subsets(space: FiniteDistanceSpace, f, shape: str) -> set[frozenset[int]]:
    """Enumerate all nonempty subsets of Fix(f) and keep the realizable ones.

    A subset A is realizable when some centre/foci tuple and radius r give
    exactly A.  Any radius other than the common defining quantity of the
    points of A cannot produce A, so only that one value is tried.
    """
    shape = str(shape)
    n = len(space.labels)
    fixed = [p for p in range(n) if f.images[p] == p]
    if shape in ("ellipse", "closed-ellipse"):
        tuples = [(i, j) for i in range(n) for j in range(i, n)]
    else:
        tuples = [(i,) for i in range(n)]
    found = set()
    for k in range(1, len(fixed) + 1):
        for subset in combinations(fixed, k):
            target = frozenset(subset)
            for pts in tuples:
                qs = [sum((raw_pair(space, x, p) for p in pts), Fraction(0)) for x in subset]
                r = max(qs) if shape in ("disc", "closed-ellipse") else qs[0]
                if shape not in ("disc", "closed-ellipse") and any(q != r for q in qs):
                    continue
                if figure_members(space, shape, pts, r) == target:
                    found.add(target)
                    break
    return found
