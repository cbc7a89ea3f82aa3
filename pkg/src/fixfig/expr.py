"""Exact arithmetic expressions over a few named variables.

Grammar (Python expression syntax, restricted)::

    expr    := expr ('+' | '-') term | term
    term    := term ('*' | '/') unary | unary
    unary   := ('-' | '+') unary | atom
    atom    := NUMBER | NAME | call | '(' expr ')'
    call    := ('min' | 'max') '(' expr (',' expr)+ ')' | 'abs' '(' expr ')'

NUMBER is an integer or a finite decimal literal (``0.25`` means exactly
1/4).  ``7/8*s - t`` is the division of two integer literals and is exact.
Multiplication is always explicit.  The Unicode minus sign and middle dot
are accepted as ``-`` and ``*``.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

__all__ = ["Expression", "ExpressionError", "EvaluationError", "parse_expression"]


class ExpressionError(ValueError):
    """The text is not a valid expression in the restricted grammar."""


class EvaluationError(ArithmeticError):
    """Evaluating a valid expression failed (division by zero)."""


_BINOPS: dict[type, Callable[[Fraction, Fraction], Fraction]] = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}

_CALLS = {"min": min, "max": max, "abs": abs}


def _normalise(text: str) -> str:
    return text.replace("−", "-").replace("·", "*").replace("×", "*").strip()


def _compile(node: ast.AST, variables: frozenset[str], text: str) -> Callable[[Mapping], Fraction]:
    def bad(msg: str):
        col = getattr(node, "col_offset", None)
        where = f" at column {col + 1}" if col is not None else ""
        return ExpressionError(f"{msg}{where} in {text!r}")

    if isinstance(node, ast.Expression):
        return _compile(node.body, variables, text)
    if isinstance(node, ast.Constant):
        v = node.value
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise bad(f"unsupported literal {v!r}")
        # decimal literals are read back from their source text, exactly
        seg = ast.get_source_segment(text, node) or repr(v)
        c = Fraction(seg) if isinstance(v, float) else Fraction(v)
        return lambda env: c
    if isinstance(node, ast.Name):
        name = node.id
        if name not in variables:
            raise bad(f"unknown variable {name!r} (allowed: {', '.join(sorted(variables))})")
        return lambda env: env[name]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand, variables, text)
        if isinstance(node.op, ast.USub):
            return lambda env: -inner(env)
        return inner
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        left = _compile(node.left, variables, text)
        right = _compile(node.right, variables, text)
        return lambda env: op(left(env), right(env))
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _CALLS or node.keywords:
            raise bad("only min(...), max(...) and abs(...) may be called")
        name = node.func.id
        if name == "abs" and len(node.args) != 1:
            raise bad("abs takes exactly one argument")
        if name != "abs" and len(node.args) < 2:
            raise bad(f"{name} needs at least two arguments")
        fn = _CALLS[name]
        args = [_compile(a, variables, text) for a in node.args]
        if name == "abs":
            (arg,) = args
            return lambda env: abs(arg(env))
        return lambda env: fn(a(env) for a in args)
    raise bad(f"unsupported syntax {type(node).__name__}")


@dataclass(frozen=True)
class Expression:
    """A parsed expression; call it with keyword values for its variables."""

    source: str
    variables: frozenset[str]
    _fn: Callable = field(repr=False, compare=False, hash=False)

    def __call__(self, **env) -> Fraction:
        missing = self.variables - env.keys()
        if missing:
            raise TypeError(f"missing values for {sorted(missing)}")
        values = {k: Fraction(v) for k, v in env.items()}
        try:
            return Fraction(self._fn(values))
        except ZeroDivisionError as exc:
            raise EvaluationError(f"division by zero evaluating {self.source!r} at {env}") from exc

    def __str__(self) -> str:
        return self.source


def parse_expression(text: str, variables=("t", "s")) -> Expression:
    """Parse ``text`` into an :class:`Expression` over ``variables``."""
    src = _normalise(text)
    if not src:
        raise ExpressionError("empty expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"syntax error at column {exc.offset} in {src!r}") from None
    allowed = frozenset(variables)
    fn = _compile(tree, allowed, src)
    return Expression(src, allowed, fn)
