"""Catalogue of every fixed figure, and which ones a theorem instance certifies."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from fixfig.geometry import Figure, SelfMap, Shape, enumerate_figures, members
from fixfig.simfunc import DEFAULT_ZETA_POOL, SimFunc
from fixfig.spaces import FiniteDistanceSpace, Kind
from fixfig.verifiers import (
    DEFAULT_A_SWEEP,
    VerifierReport,
    verify_closed_ellipse,
    verify_fixed_circle,
    verify_fixed_disc,
    verify_fixed_ellipse,
)

__all__ = [
    "CatalogEntry",
    "FixedFigureCatalog",
    "GapEntry",
    "GapReport",
    "catalog_fixed_figures",
    "certify_gap",
    "certifying_runs",
]


@dataclass
class CatalogEntry:
    figure: Figure
    members: frozenset[int]
    maximal: bool
    certified_by: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return bool(self.certified_by)


@dataclass
class FixedFigureCatalog:
    space: FiniteDistanceSpace
    f: SelfMap
    entries: dict[Shape, list[CatalogEntry]]

    def member_sets(self, shape) -> set[frozenset[int]]:
        return {e.members for e in self.entries[Shape(shape)]}

    def find(self, shape, labels: Sequence) -> CatalogEntry | None:
        target = frozenset(self.space.index(x) for x in labels)
        for e in self.entries[Shape(shape)]:
            if e.members == target:
                return e
        return None


def _describe(rep: VerifierReport, space) -> str:
    p = rep.params
    where = f"foci=({','.join(p['foci'])})" if "foci" in p else f"center={p['center']}"
    a = f" a={p['a']}" if "a" in p else ""
    return f"{rep.theorem} {where} zeta={p['zeta']}{a}"


def certifying_runs(space: FiniteDistanceSpace, f: SelfMap, shape: Shape, zeta_pool, a_values):
    """Every radius-number theorem instance for ``shape``, as (figure, report) pairs."""
    pts = list(space.points())
    shape = Shape(shape)
    for zeta in zeta_pool:
        if shape is Shape.ELLIPSE and space.kind is not Kind.B_METRIC:
            for i in pts:
                for j in pts[i:]:
                    for a in a_values:
                        yield verify_fixed_ellipse(space, f, zeta, a, i, j)
        elif shape is Shape.CLOSED_ELLIPSE and space.kind is Kind.METRIC:
            for i in pts:
                for j in pts[i:]:
                    yield verify_closed_ellipse(space, f, zeta, i, j)
        elif shape in (Shape.CIRCLE, Shape.DISC):
            run = verify_fixed_disc if shape is Shape.DISC else verify_fixed_circle
            for x0 in pts:
                for a in a_values:
                    yield run(space, f, zeta, a, x0)


def _report_figure(rep: VerifierReport, space, shape) -> Figure:
    p = rep.params
    labels = p["foci"] if "foci" in p else (p["center"],)
    return Figure(shape, tuple(space.index(x) for x in labels), p["r"], space.kind)


def catalog_fixed_figures(
    space: FiniteDistanceSpace,
    f: SelfMap,
    zeta_pool: Sequence[SimFunc] = DEFAULT_ZETA_POOL,
    a_values=DEFAULT_A_SWEEP,
) -> FixedFigureCatalog:
    """All nonempty fixed figures per shape, deduplicated by member set.

    Each entry lists the theorem instances (over the zeta pool, the a-sweep
    and every centre/foci choice) whose hypotheses pass and whose claimed
    figure has exactly that member set.
    """
    fixed = f.fixed
    entries: dict[Shape, list[CatalogEntry]] = {}
    for shape in Shape:
        figs = [(fig, members(fig, space)) for fig in enumerate_figures(space, shape)]
        figs = [(fig, mem) for fig, mem in figs if mem <= fixed]
        sets = [mem for _, mem in figs]
        entries[shape] = [
            CatalogEntry(fig, mem, maximal=not any(mem < other for other in sets)) for fig, mem in figs
        ]
        by_members = {e.members: e for e in entries[shape]}
        for rep in certifying_runs(space, f, shape, zeta_pool, a_values):
            if not rep.all_passed or not rep.conclusion.oracle_confirmed:
                continue
            mem = members(_report_figure(rep, space, shape), space)
            if mem in by_members:
                by_members[mem].certified_by.append(_describe(rep, space))
    return FixedFigureCatalog(space, f, entries)


@dataclass
class GapEntry:
    shape: Shape
    entry: CatalogEntry


@dataclass
class GapReport:
    catalog: FixedFigureCatalog
    uncertified: list[GapEntry]
    notes: list[str] = field(default_factory=list)

    def names(self, shape=None) -> list[str]:
        return [g.entry.figure.name(self.catalog.space) for g in self.uncertified
                if shape is None or g.shape is Shape(shape)]


def certify_gap(
    space: FiniteDistanceSpace,
    f: SelfMap,
    zeta_pool: Sequence[SimFunc] = DEFAULT_ZETA_POOL,
    a_values=DEFAULT_A_SWEEP,
    catalog: FixedFigureCatalog | None = None,
) -> GapReport:
    """Fixed figures that no radius-number theorem instance certifies."""
    catalog = catalog or catalog_fixed_figures(space, f, zeta_pool, a_values)
    gap = [GapEntry(shape, e) for shape, es in catalog.entries.items() for e in es if not e.certified]
    notes = []
    if f.is_identity:
        notes.append("f is the identity: rho/mu is undefined and no theorem instance applies")
    if space.kind is not Kind.METRIC:
        notes.append("closed ellipses have no theorem on this kind of space")
    if space.kind is Kind.B_METRIC:
        notes.append("ellipses have no theorem on b-metric spaces")
    return GapReport(catalog, gap, notes)
