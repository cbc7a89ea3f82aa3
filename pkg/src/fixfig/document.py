"""The ``.ffl`` document format: a space, a self-map, a zeta and requests.

A document is line oriented.  ``#`` starts a comment, blank lines are
ignored, ``[name]`` opens a section and every other line is ``key = value``.
The grammar is documented in ``docs/format.md``; a short example::

    [space]
    kind = metric
    points = -3, -1, 1, 3, 12, 18
    builtin = abs-metric

    [map]
    12 = 18

    [zeta]
    family = linear
    param = 1/2

    [verify]
    theorem = ellipse
    foci = -1, 1

Explicit tables use ``row <x> = v1, v2, ...`` (``d(x, .)``) or, for an
S-metric, ``row <x> <y> = ...`` (``S(x, y, .)``).  Numbers are integers or
``p/q``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from fixfig.expr import ExpressionError
from fixfig.geometry import SelfMap, Shape
from fixfig.simfunc import Family, SimFunc, builtin, linear, user_expression
from fixfig.spaces import (
    BUILTIN_FORMULAS,
    FiniteDistanceSpace,
    InvalidSpaceError,
    Kind,
    ParameterError,
    StructuralError,
    builtin_space,
)

__all__ = [
    "DocumentError",
    "VerifyRequest",
    "SpaceDocument",
    "THEOREMS",
    "parse_document",
    "load_document",
    "render_document",
]

THEOREMS = ("ellipse", "circle", "disc", "closed-ellipse", "ze-contraction", "phi-circle", "uniqueness", "identity")

_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?\Z")
_LABEL = re.compile(r"[A-Za-z0-9_.+\-/]+\Z")
_SECTION = re.compile(r"\[\s*([A-Za-z-]+)\s*\]\Z")

_KEYS = {
    "space": {"kind", "points", "builtin", "b"},
    "map": set(),
    "zeta": {"family", "param", "expr"},
    "verify": {"theorem", "foci", "center", "r", "a", "shape", "zeta"},
}


class DocumentError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.invalid_space: InvalidSpaceError | None = None


@dataclass(frozen=True)
class VerifyRequest:
    theorem: str
    foci: tuple[str, str] | None = None
    center: str | None = None
    r: Fraction | None = None
    a: Fraction | None = None
    shape: Shape | None = None
    zeta: SimFunc | None = None


@dataclass(frozen=True)
class SpaceDocument:
    space: FiniteDistanceSpace
    f: SelfMap
    zeta: SimFunc | None = None
    requests: tuple[VerifyRequest, ...] = ()
    builtin: str | None = None
    map_entries: tuple[tuple[str, str], ...] = field(default=(), compare=False)


@dataclass
class _Value:
    text: str
    line: int
    column: int


def _split_list(v: _Value) -> list[_Value]:
    out = []
    col = v.column
    for part in v.text.split(","):
        stripped = part.strip()
        lead = len(part) - len(part.lstrip())
        if not stripped:
            raise DocumentError("empty list item", v.line, col + lead)
        out.append(_Value(stripped, v.line, col + lead))
        col += len(part) + 1
    return out


def _rational(v: _Value) -> Fraction:
    if not _RATIONAL.match(v.text):
        raise DocumentError(f"unparsable rational {v.text!r}; use an integer or p/q", v.line, v.column)
    try:
        return Fraction(v.text)
    except ZeroDivisionError:
        raise DocumentError(f"zero denominator in {v.text!r}", v.line, v.column) from None


def _label(v: _Value, labels: tuple[str, ...] | None, what: str) -> str:
    if labels is not None and v.text not in labels:
        raise DocumentError(f"{what} {v.text!r} is not a declared point", v.line, v.column)
    return v.text


def _lex(text: str):
    """Yield (section name, header line, list of (key, _Value, key column))."""
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip())
        stripped = body.strip()
        if stripped.startswith("["):
            m = _SECTION.match(stripped)
            if not m or m.group(1) not in _KEYS:
                raise DocumentError(f"unknown section {stripped!r}", lineno, indent + 1)
            current = (m.group(1), lineno, [])
            sections.append(current)
            continue
        if current is None:
            raise DocumentError("key/value line before any section", lineno, indent + 1)
        if "=" not in stripped:
            raise DocumentError("expected 'key = value'", lineno, indent + 1)
        key, value = body.split("=", 1)
        vcol = len(key) + 2 + (len(value) - len(value.lstrip()))
        key_text = key.strip()
        if not key_text:
            raise DocumentError("missing key", lineno, indent + 1)
        if not value.strip():
            raise DocumentError(f"missing value for {key_text!r}", lineno, vcol)
        current[2].append((key_text, _Value(value.strip(), lineno, vcol), indent + 1))
    return sections


def _single(sections, name):
    found = [s for s in sections if s[0] == name]
    if len(found) > 1:
        raise DocumentError(f"section [{name}] appears more than once", found[1][1])
    return found[0] if found else None


def _keyed(section, allowed_rows: bool = False) -> tuple[dict[str, _Value], list]:
    name, line, items = section
    out: dict[str, _Value] = {}
    rows = []
    for key, value, kcol in items:
        if allowed_rows and key.split()[0] == "row":
            rows.append((key, value, kcol))
            continue
        if key not in _KEYS[name]:
            raise DocumentError(f"unknown key {key!r} in [{name}]", value.line, kcol)
        if key in out:
            raise DocumentError(f"duplicate key {key!r} in [{name}]", value.line, kcol)
        out[key] = value
    return out, rows


def _parse_zeta_value(family: _Value, param: _Value | None) -> SimFunc:
    try:
        fam = Family(family.text)
    except ValueError:
        known = ", ".join(f.value for f in Family)
        raise DocumentError(f"unknown zeta family {family.text!r} (known: {known})", family.line, family.column) from None
    if param is None:
        raise DocumentError(f"zeta family {fam.value} needs a param", family.line, family.column)
    try:
        if fam is Family.LINEAR:
            return linear(_rational(param))
        if fam is Family.EXPRESSION:
            return user_expression(param.text)
        return builtin(fam, param.text)
    except (ExpressionError, ParameterError, ArithmeticError) as exc:
        raise DocumentError(str(exc), param.line, param.column) from None


def _parse_zeta_inline(v: _Value) -> SimFunc:
    fam, sep, param = v.text.partition(":")
    if not sep:
        raise DocumentError(f"expected family:param, got {v.text!r}", v.line, v.column)
    fam_v = _Value(fam.strip(), v.line, v.column)
    param_v = _Value(param.strip(), v.line, v.column + len(fam) + 1 + (len(param) - len(param.lstrip())))
    return _parse_zeta_value(fam_v, param_v)


def _parse_space(section) -> tuple[FiniteDistanceSpace, str | None]:
    keys, rows = _keyed(section, allowed_rows=True)
    _, line, _ = section
    for need in ("kind", "points"):
        if need not in keys:
            raise DocumentError(f"[space] needs '{need}'", line)
    kv = keys["kind"]
    try:
        kind = Kind(kv.text)
    except ValueError:
        raise DocumentError(f"unknown kind {kv.text!r}; expected metric, s-metric or b-metric", kv.line, kv.column) from None
    point_values = _split_list(keys["points"])
    for p in point_values:
        if not _LABEL.match(p.text):
            raise DocumentError(f"bad point label {p.text!r}", p.line, p.column)
    labels = tuple(p.text for p in point_values)
    seen = set()
    for p in point_values:
        if p.text in seen:
            raise DocumentError(f"duplicate point {p.text!r}", p.line, p.column)
        seen.add(p.text)
    b = None
    if "b" in keys:
        if kind is not Kind.B_METRIC:
            raise DocumentError("'b' only applies to kind b-metric", keys["b"].line, keys["b"].column)
        b = _rational(keys["b"])
    elif kind is Kind.B_METRIC:
        raise DocumentError("a b-metric space needs 'b'", line)
    if "builtin" in keys and rows:
        raise DocumentError("give either 'builtin' or explicit rows, not both", rows[0][1].line, rows[0][2])
    try:
        if "builtin" in keys:
            bv = keys["builtin"]
            if bv.text not in BUILTIN_FORMULAS:
                known = ", ".join(BUILTIN_FORMULAS)
                raise DocumentError(f"unknown builtin {bv.text!r} (known: {known})", bv.line, bv.column)
            native = BUILTIN_FORMULAS[bv.text][0]
            if kind is Kind.B_METRIC:
                # an s-metric formula contributes d(x, y) = S(x, x, y)
                base = builtin_space(bv.text, labels)
                table = [[base.dist(x, y) for y in base.points()] for x in base.points()]
                return FiniteDistanceSpace.b_metric(labels, table, b), bv.text
            if native is not kind:
                raise DocumentError(f"builtin {bv.text} defines a {native.value} space, not {kind.value}",
                                    bv.line, bv.column)
            return builtin_space(bv.text, labels), bv.text
        table = _parse_rows(rows, labels, kind, line)
        if kind is Kind.METRIC:
            return FiniteDistanceSpace.metric(labels, table), None
        if kind is Kind.S_METRIC:
            return FiniteDistanceSpace.s_metric(labels, table), None
        return FiniteDistanceSpace.b_metric(labels, table, b), None
    except (InvalidSpaceError, StructuralError, ParameterError, ValueError) as exc:
        if isinstance(exc, DocumentError):
            raise
        err = DocumentError(f"invalid space: {exc}", line)
        err.invalid_space = exc if isinstance(exc, InvalidSpaceError) else None
        raise err from None


def _parse_rows(rows, labels, kind, line):
    n = len(labels)
    arity = 2 if kind is Kind.S_METRIC else 1
    cells: dict[tuple[str, ...], list[Fraction]] = {}
    for key, value, kcol in rows:
        parts = key.split()
        if len(parts) != arity + 1:
            want = "row <x> <y>" if arity == 2 else "row <x>"
            raise DocumentError(f"expected '{want} = ...' for a {kind.value} table", value.line, kcol)
        idx = tuple(parts[1:])
        for lab in idx:
            if lab not in labels:
                raise DocumentError(f"row label {lab!r} is not a declared point", value.line,
                                    kcol + key.index(lab, len("row")))
        if idx in cells:
            raise DocumentError(f"duplicate row {' '.join(idx)}", value.line, kcol)
        entries = [_rational(v) for v in _split_list(value)]
        if len(entries) != n:
            raise DocumentError(f"row has {len(entries)} entries, expected {n}", value.line, value.column)
        cells[idx] = entries
    if arity == 1:
        missing = [x for x in labels if (x,) not in cells]
        if missing:
            raise DocumentError(f"missing row for point {missing[0]!r}", line)
        return [cells[(x,)] for x in labels]
    missing = [(x, y) for x in labels for y in labels if (x, y) not in cells]
    if missing:
        raise DocumentError(f"missing row {missing[0][0]} {missing[0][1]}", line)
    return [[cells[(x, y)] for y in labels] for x in labels]


def _parse_map(section, space) -> tuple[SelfMap, tuple[tuple[str, str], ...]]:
    if section is None:
        return SelfMap.identity(space.n), ()
    entries = []
    seen = set()
    for key, value, kcol in section[2]:
        src = _label(_Value(key, value.line, kcol), space.labels, "mapped point")
        if src in seen:
            raise DocumentError(f"point {src!r} is mapped twice", value.line, kcol)
        seen.add(src)
        dst = _label(value, space.labels, "image")
        entries.append((src, dst))
    return SelfMap.from_labels(space, dict(entries)), tuple(entries)


def _parse_zeta_section(section) -> SimFunc | None:
    if section is None:
        return None
    keys, _ = _keyed(section)
    if "expr" in keys:
        if "family" in keys or "param" in keys:
            v = keys.get("family") or keys["param"]
            raise DocumentError("give either 'expr' or 'family'/'param', not both", v.line, v.column)
        v = keys["expr"]
        try:
            return user_expression(v.text)
        except (ExpressionError, ParameterError, ArithmeticError) as exc:
            raise DocumentError(str(exc), v.line, v.column) from None
    if "family" not in keys:
        raise DocumentError("[zeta] needs 'family' or 'expr'", section[1])
    return _parse_zeta_value(keys["family"], keys.get("param"))


def _parse_verify(section, space) -> VerifyRequest:
    keys, _ = _keyed(section)
    if "theorem" not in keys:
        raise DocumentError("[verify] needs 'theorem'", section[1])
    tv = keys["theorem"]
    if tv.text not in THEOREMS:
        raise DocumentError(f"unknown theorem {tv.text!r} (known: {', '.join(THEOREMS)})", tv.line, tv.column)
    foci = center = r = a = shape = zeta = None
    if "foci" in keys:
        vals = _split_list(keys["foci"])
        if len(vals) != 2:
            raise DocumentError("foci needs exactly two points", keys["foci"].line, keys["foci"].column)
        foci = tuple(_label(v, space.labels, "focus") for v in vals)
    if "center" in keys:
        center = _label(keys["center"], space.labels, "center")
    if "r" in keys:
        r = _rational(keys["r"])
    if "a" in keys:
        a = _rational(keys["a"])
    if "shape" in keys:
        try:
            shape = Shape(keys["shape"].text)
        except ValueError:
            raise DocumentError(f"unknown shape {keys['shape'].text!r}", keys["shape"].line, keys["shape"].column) from None
    if "zeta" in keys:
        zeta = _parse_zeta_inline(keys["zeta"])
    return VerifyRequest(tv.text, foci, center, r, a, shape, zeta)


def parse_document(text: str) -> SpaceDocument:
    """Parse and validate a ``.ffl`` document; raises :class:`DocumentError`."""
    sections = _lex(text)
    space_sec = _single(sections, "space")
    if space_sec is None:
        raise DocumentError("missing [space] section", 1)
    space, builtin_name = _parse_space(space_sec)
    f, entries = _parse_map(_single(sections, "map"), space)
    zeta = _parse_zeta_section(_single(sections, "zeta"))
    requests = tuple(_parse_verify(s, space) for s in sections if s[0] == "verify")
    return SpaceDocument(space, f, zeta, requests, builtin_name, entries)


def load_document(path) -> SpaceDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def _zeta_lines(zeta: SimFunc) -> list[str]:
    if zeta.family is Family.EXPRESSION:
        return [f"expr = {zeta.param}"]
    return [f"family = {zeta.family.value}", f"param = {zeta.param}"]


def render_document(doc: SpaceDocument) -> str:
    """Canonical text of ``doc``; parsing it gives back an equal document."""
    sp = doc.space
    out = ["[space]", f"kind = {sp.kind.value}", f"points = {', '.join(sp.labels)}"]
    if sp.kind is Kind.B_METRIC:
        out.append(f"b = {sp.b}")
    if doc.builtin:
        out.append(f"builtin = {doc.builtin}")
    elif sp.kind is Kind.S_METRIC:
        for i, x in enumerate(sp.labels):
            for j, y in enumerate(sp.labels):
                out.append(f"row {x} {y} = {', '.join(str(v) for v in sp.table[i][j])}")
    else:
        for i, x in enumerate(sp.labels):
            out.append(f"row {x} = {', '.join(str(v) for v in sp.table[i])}")
    entries = doc.map_entries or tuple(
        (sp.label(x), sp.label(fx)) for x, fx in enumerate(doc.f.images) if fx != x
    )
    if entries:
        out += ["", "[map]"] + [f"{src} = {dst}" for src, dst in entries]
    if doc.zeta is not None:
        out += ["", "[zeta]"] + _zeta_lines(doc.zeta)
    for req in doc.requests:
        out += ["", "[verify]", f"theorem = {req.theorem}"]
        if req.shape is not None:
            out.append(f"shape = {req.shape.value}")
        if req.foci is not None:
            out.append(f"foci = {req.foci[0]}, {req.foci[1]}")
        if req.center is not None:
            out.append(f"center = {req.center}")
        if req.r is not None:
            out.append(f"r = {req.r}")
        if req.a is not None:
            out.append(f"a = {req.a}")
        if req.zeta is not None:
            out.append(f"zeta = {req.zeta.spec()}")
    return "\n".join(out) + "\n"
