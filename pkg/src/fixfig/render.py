"""Deterministic text and JSON rendering of reports.

Rationals are serialized as ``str(Fraction)`` (``"p/q"`` or an integer
string), never as floats.  JSON output uses sorted keys inside value
records and a fixed key order at the top level, so equal reports give
identical bytes.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction

from fixfig.geometry import Shape, point_labels, radius_number
from fixfig.oracle.catalog import GapReport
from fixfig.oracle.scan import ScanReport
from fixfig.spaces import FiniteDistanceSpace, Kind, ValidationResult
from fixfig.verifiers import VerifierReport

__all__ = ["Format", "AnalysisReport", "analysis_report", "to_jsonable", "render_report"]


class Format(str, enum.Enum):
    TEXT = "text"
    JSON = "json"


def _plain(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in value]
        return sorted(items) if isinstance(value, (set, frozenset)) else items
    return value


@dataclass
class AnalysisReport:
    """What ``analyze`` prints: fixed points, rho/mu, catalogue and gap."""

    space: FiniteDistanceSpace
    gap: GapReport
    notes: list[str] = field(default_factory=list)


def analysis_report(gap: GapReport) -> AnalysisReport:
    return AnalysisReport(gap.catalog.space, gap, list(gap.notes))


def _radius_name(space) -> str:
    return "rho" if space.kind is Kind.METRIC else "mu"


def _verifier_json(rep: VerifierReport) -> dict:
    return {
        "theorem": rep.theorem,
        "kind": rep.kind.value,
        "params": _plain(rep.params),
        "conditions": [
            {
                "id": c.id,
                "status": c.status.value,
                "witness": _plain(c.witness),
                "note": c.note,
                "values": _plain(c.values),
            }
            for c in rep.conditions
        ],
        "conclusion": None if rep.conclusion is None else {
            "claimed": rep.conclusion.claimed,
            "members": list(rep.conclusion.members),
            "oracle_confirmed": rep.conclusion.oracle_confirmed,
        },
        "notes": list(rep.notes),
        "status": rep.status,
    }


def _analysis_json(rep: AnalysisReport) -> dict:
    sp = rep.space
    cat = rep.gap.catalog
    radius = radius_number(sp, cat.f)
    return {
        "kind": sp.kind.value,
        "points": list(sp.labels),
        "fix": point_labels(sp, cat.f.fixed),
        _radius_name(sp): None if radius is None else str(radius),
        "catalog": {
            shape.value: [
                {
                    "figure": e.figure.name(sp),
                    "members": point_labels(sp, e.members),
                    "maximal": e.maximal,
                    "certified_by": list(e.certified_by),
                }
                for e in cat.entries[shape]
            ]
            for shape in Shape
        },
        "gap": {shape.value: rep.gap.names(shape) for shape in Shape},
        "notes": list(rep.notes),
    }


def _scan_json(rep: ScanReport) -> dict:
    cfg = rep.config
    return {
        "config": {
            "seed": cfg.seed,
            "instances": cfg.instances,
            "min_n": cfg.min_n,
            "max_n": cfg.max_n,
            "kinds": [k.value for k in cfg.kinds],
            "map_policy": cfg.map_policy,
            "zeta_pool": [z.spec() for z in cfg.zeta_pool],
            "a_values": [str(a) for a in cfg.a_values],
        },
        "soundness_violations": rep.soundness_violations,
        "violations_by_theorem": rep.violations_by_theorem(),
        "stats": {t: vars(st).copy() for t, st in rep.stats.items()},
        "violations": [
            {"instance": v.instance, "theorem": v.theorem, "kind": v.kind, "n": v.n,
             "generator": v.generator, "params": dict(v.params), "moved": list(v.moved)}
            for v in rep.violations
        ],
        "equivalence_mismatches": [[i, m] for i, m in rep.equivalence_mismatches],
        "catalog_checked": rep.catalog_checked,
        "catalog_mismatches": [[i, m] for i, m in rep.catalog_mismatches],
    }


def _validation_json(res: ValidationResult) -> dict:
    return {"ok": res.ok, "axiom": res.axiom, "witness": _plain(res.witness), "detail": res.detail}


def to_jsonable(report):
    if isinstance(report, VerifierReport):
        return _verifier_json(report)
    if isinstance(report, AnalysisReport):
        return _analysis_json(report)
    if isinstance(report, ScanReport):
        return _scan_json(report)
    if isinstance(report, ValidationResult):
        return _validation_json(report)
    if isinstance(report, (list, tuple)):
        return [to_jsonable(r) for r in report]
    if isinstance(report, dict):
        return _plain(report)
    raise TypeError(f"cannot render {type(report).__name__}")


# ---------------------------------------------------------------- text


def _set(labels) -> str:
    return "{" + ", ".join(labels) + "}"


def _fmt_value(v) -> str:
    if isinstance(v, dict):
        return ", ".join(f"{k}={_fmt_value(x)}" for k, x in v.items())
    if v is None:
        return "-"
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_fmt_value(x) for x in v) + ")"
    return str(_plain(v))


def _verifier_text(rep: VerifierReport) -> list[str]:
    params = ", ".join(f"{k}={_fmt_value(v)}" for k, v in rep.params.items())
    out = [f"{rep.theorem} [{rep.kind.value}] {params}: {rep.status.upper()}"]
    for c in rep.conditions:
        line = f"  ({c.id}) {c.status.value}"
        if c.witness:
            line += f" at {', '.join(c.witness)}"
        if c.note:
            line += f"; {c.note}"
        out.append(line)
        for v in c.values:
            out.append(f"      {_fmt_value(v)}")
    if rep.conclusion is not None:
        verdict = "confirmed" if rep.conclusion.oracle_confirmed else "REFUTED"
        out.append(f"  conclusion: {rep.conclusion.claimed} = {_set(rep.conclusion.members)} ({verdict} by oracle)")
    for note in rep.notes:
        out.append(f"  note: {note}")
    return out


def _analysis_text(rep: AnalysisReport) -> list[str]:
    data = _analysis_json(rep)
    name = _radius_name(rep.space)
    out = [
        f"kind: {data['kind']}",
        f"points: {_set(data['points'])}",
        f"Fix(f) = {_set(data['fix'])}",
        f"{name} = {data[name] if data[name] is not None else 'undefined (f is the identity)'}",
    ]
    for shape in Shape:
        out.append(f"fixed {shape.value}s:")
        for e in data["catalog"][shape.value]:
            tags = []
            if e["maximal"]:
                tags.append("maximal")
            tags.append(f"certified x{len(e['certified_by'])}" if e["certified_by"] else "uncertified")
            out.append(f"  {e['figure']} = {_set(e['members'])}  [{', '.join(tags)}]")
    out.append("fixed but uncertified:")
    for shape in Shape:
        names = data["gap"][shape.value]
        if names:
            out.append(f"  {shape.value}: {', '.join(names)}")
    for note in rep.notes:
        out.append(f"note: {note}")
    return out


def _scan_text(rep: ScanReport) -> list[str]:
    cfg = rep.config
    out = [
        f"scan: seed {cfg.seed}, {rep.instances} instances, n in [{cfg.min_n},{cfg.max_n}], "
        f"zeta pool {', '.join(z.spec() for z in cfg.zeta_pool)}, a in {{{', '.join(map(str, cfg.a_values))}}}",
        f"{rep.soundness_violations} soundness violations",
    ]
    for t, st in rep.stats.items():
        out.append(f"  {t}: runs {st.runs}, applicable {st.applicable}, passed {st.passed} "
                   f"(vacuous {st.vacuous}), violations {st.violations}, non-necessity {st.non_necessity}")
    for v in rep.violations[:20]:
        params = ", ".join(f"{k}={x}" for k, x in v.params)
        out.append(f"  violation: instance {v.instance} ({v.kind}, n={v.n}, {v.generator}) {v.theorem} {params}; "
                   f"moved: {', '.join(v.moved)}")
    if rep.soundness_violations > 20:
        out.append(f"  ... {rep.soundness_violations - 20} more")
    out.append(f"oracle equivalence mismatches: {len(rep.equivalence_mismatches)}")
    out.append(f"catalog subset check: {rep.catalog_checked} instances, {len(rep.catalog_mismatches)} mismatches")
    return out


def _validation_text(res: ValidationResult) -> list[str]:
    if res.ok:
        return [f"valid: {res.detail}" if res.detail else "valid"]
    wit = f" at {', '.join(map(str, res.witness))}" if res.witness else ""
    return [f"invalid: axiom {res.axiom} fails{wit}: {res.detail}"]


def render_report(report, fmt: Format | str = Format.TEXT) -> str:
    """Serialize a report (or a list of them) as text or JSON."""
    fmt = Format(fmt)
    if fmt is Format.JSON:
        return json.dumps(to_jsonable(report), indent=2, ensure_ascii=False) + "\n"
    reports = report if isinstance(report, (list, tuple)) else [report]
    lines: list[str] = []
    for rep in reports:
        if isinstance(rep, VerifierReport):
            lines += _verifier_text(rep)
        elif isinstance(rep, AnalysisReport):
            lines += _analysis_text(rep)
        elif isinstance(rep, ScanReport):
            lines += _scan_text(rep)
        elif isinstance(rep, ValidationResult):
            lines += _validation_text(rep)
        elif isinstance(rep, dict) and "z2" in rep:
            lines.append(f"zeta {rep['zeta']}: z2 {rep['z2']} ({rep['note']})")
        else:
            lines.append(json.dumps(to_jsonable(rep), ensure_ascii=False))
    return "\n".join(lines) + "\n"
