"""Recursion schemes over a tiny integer expression language.

This module owns the object being compiled: a base expression b(x), a step
expression h(x, y), and a predecessor that moves x by a fixed negative
displacement. It also provides the two reference computations the rest of
the toolkit is validated against: direct evaluation of the recursion and
the closed-form prediction of the values the producer must emit.

All arithmetic is on Python integers, so results never wrap or truncate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Union


class SchemeError(Exception):
    """Base class for scheme-layer errors."""


class ExpressionSyntaxError(SchemeError):
    """Malformed expression text; carries the offending column (0-based)."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (column {position})")
        self.position = position


class UndeclaredVariableError(SchemeError):
    """Expression mentions a variable outside the declared set."""

    def __init__(self, name: str, position: int, allowed):
        allowed_text = ", ".join(sorted(allowed)) or "none"
        super().__init__(
            f"undeclared variable {name!r} (column {position}; allowed: {allowed_text})"
        )
        self.name = name
        self.position = position


class NegativeInputError(SchemeError):
    """The iterative machinery only accepts non-negative inputs."""


class SchemeFileError(SchemeError):
    """Malformed scheme file."""


# --- expression AST ---------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Sub:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Mul:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Neg:
    operand: "Expression"


Expression = Union[Const, Var, Add, Sub, Mul, Neg]


_TOKEN_RE = re.compile(
    r"(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[+\-*()])|(?P<ws>\s+)|(?P<bad>.)"
)


def _scan(text):
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ExpressionSyntaxError(f"unexpected character {m.group()!r}", m.start())
        tokens.append((kind, m.group(), m.start()))
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent; precedence: unary minus > * > binary +/-; +,-,* left-associative."""

    def __init__(self, tokens, allowed):
        self._tokens = tokens
        self._pos = 0
        self._allowed = allowed

    def _peek(self):
        return self._tokens[self._pos]

    def _advance(self):
        token = self._tokens[self._pos]
        self._pos += 1
        return token

    def expression(self):
        node = self.term()
        while self._peek()[0] == "op" and self._peek()[1] in "+-":
            op = self._advance()[1]
            right = self.term()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def term(self):
        node = self.factor()
        while self._peek()[0] == "op" and self._peek()[1] == "*":
            self._advance()
            node = Mul(node, self.factor())
        return node

    def factor(self):
        kind, text, pos = self._peek()
        if kind == "op" and text == "-":
            self._advance()
            return Neg(self.factor())
        return self.atom()

    def atom(self):
        kind, text, pos = self._advance()
        if kind == "int":
            return Const(int(text))
        if kind == "name":
            if text not in self._allowed:
                raise UndeclaredVariableError(text, pos, self._allowed)
            return Var(text)
        if kind == "op" and text == "(":
            node = self.expression()
            kind, text, pos = self._advance()
            if not (kind == "op" and text == ")"):
                raise ExpressionSyntaxError("expected ')'", pos)
            return node
        if kind == "end":
            raise ExpressionSyntaxError("unexpected end of expression", pos)
        raise ExpressionSyntaxError(f"unexpected {text!r}", pos)


def parse_expr(text: str, allowed_vars) -> Expression:
    """Parse an integer expression using only the variables in allowed_vars."""
    parser = _Parser(_scan(text), frozenset(allowed_vars))
    node = parser.expression()
    kind, tok, pos = parser._peek()
    if kind != "end":
        raise ExpressionSyntaxError(f"unexpected {tok!r}", pos)
    return node


def pretty(expr: Expression) -> str:
    """Render with minimal parentheses; parse_expr(pretty(e)) rebuilds e."""
    return _render(expr, 1)


def _render(expr, context):
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Add):
        mine, text = 1, f"{_render(expr.left, 1)} + {_render(expr.right, 2)}"
    elif isinstance(expr, Sub):
        mine, text = 1, f"{_render(expr.left, 1)} - {_render(expr.right, 2)}"
    elif isinstance(expr, Mul):
        mine, text = 2, f"{_render(expr.left, 2)} * {_render(expr.right, 3)}"
    else:
        mine, text = 3, f"-{_render(expr.operand, 4)}"
    return f"({text})" if mine < context else text


def eval_expr(expr: Expression, env: Mapping[str, int]) -> int:
    """Evaluate; env must bind every variable occurring in expr."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return env[expr.name]
    if isinstance(expr, Add):
        return eval_expr(expr.left, env) + eval_expr(expr.right, env)
    if isinstance(expr, Sub):
        return eval_expr(expr.left, env) - eval_expr(expr.right, env)
    if isinstance(expr, Mul):
        return eval_expr(expr.left, env) * eval_expr(expr.right, env)
    return -eval_expr(expr.operand, env)


def variables(expr: Expression) -> frozenset:
    if isinstance(expr, Const):
        return frozenset()
    if isinstance(expr, Var):
        return frozenset((expr.name,))
    if isinstance(expr, Neg):
        return variables(expr.operand)
    return variables(expr.left) | variables(expr.right)


# --- schemes ----------------------------------------------------------------

@dataclass(frozen=True)
class PredecessorSpec:
    """Constant-displacement predecessor: pred(x) = x + delta, delta <= -1."""

    delta: int

    def __post_init__(self):
        if self.delta > -1:
            raise ValueError(f"predecessor displacement must be <= -1, got {self.delta}")

    def pred(self, x: int) -> int:
        return x + self.delta

    def pred_inv(self, x: int) -> int:
        return x - self.delta

    @property
    def step_size(self) -> int:
        """The positive distance d each predecessor application covers."""
        return -self.delta


@dataclass(frozen=True)
class RecursionScheme:
    """base over {x}, step over {x, y}, base case taken whenever x <= 0."""

    pred: PredecessorSpec
    base: Expression
    step: Expression

    def __post_init__(self):
        extra = variables(self.base) - {"x"}
        if extra:
            raise ValueError(f"base may only use x, found {sorted(extra)}")
        extra = variables(self.step) - {"x", "y"}
        if extra:
            raise ValueError(f"step may only use x and y, found {sorted(extra)}")

    def base_value(self, x: int) -> int:
        return eval_expr(self.base, {"x": x})

    def step_value(self, x: int, y: int) -> int:
        return eval_expr(self.step, {"x": x, "y": y})


def make_scheme(delta: int, base: str, step: str) -> RecursionScheme:
    """Build a scheme from expression text."""
    return RecursionScheme(
        pred=PredecessorSpec(delta),
        base=parse_expr(base, {"x"}),
        step=parse_expr(step, {"x", "y"}),
    )


def eval_recursive(scheme: RecursionScheme, x: int) -> int:
    """Direct value of the recursion at x.

    Implemented as a descend-then-fold loop rather than call-stack recursion,
    so sweeps to large x cannot exhaust the stack; the value is identical to
    the recursive definition (base at x <= 0, step above).
    """
    pending = []
    current = x
    while current > 0:
        pending.append(current)
        current = scheme.pred.pred(current)
    y = scheme.base_value(current)
    while pending:
        y = scheme.step_value(pending.pop(), y)
    return y


class EmissionPlan(NamedTuple):
    iterations: int
    base_arg: int
    h_args: tuple


def expected_emissions(scheme: RecursionScheme, x: int) -> EmissionPlan:
    """Predict what the producer must hand to the consumer for input x >= 0.

    iterations is the number of step applications, base_arg the (non-positive)
    argument the base function receives, and h_args the step arguments in the
    ascending order they are consumed. Folding step left-to-right over h_args
    starting from base(base_arg) reproduces eval_recursive(scheme, x).
    """
    if x < 0:
        raise NegativeInputError(f"input must be non-negative, got {x}")
    d = scheme.pred.step_size
    iterations = -(-x // d)
    base_arg = x - iterations * d
    h_args = tuple(x - k * d for k in range(iterations - 1, -1, -1))
    return EmissionPlan(iterations, base_arg, h_args)


# --- scheme files -----------------------------------------------------------

_SCHEME_KEYS = ("delta", "base", "step")


def parse_scheme_text(text: str) -> dict:
    """Parse `key = value` lines (# starts a comment) into raw string fields."""
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemeFileError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if key not in _SCHEME_KEYS:
            raise SchemeFileError(f"line {lineno}: unknown key {key!r}")
        if key in fields:
            raise SchemeFileError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = value.strip()
    return fields


def load_scheme_file(path) -> RecursionScheme:
    with open(path, encoding="utf-8") as handle:
        fields = parse_scheme_text(handle.read())
    missing = [key for key in _SCHEME_KEYS if key not in fields]
    if missing:
        raise SchemeFileError(f"missing keys: {', '.join(missing)}")
    try:
        delta = int(fields["delta"])
    except ValueError:
        raise SchemeFileError(f"delta must be an integer, got {fields['delta']!r}") from None
    try:
        return make_scheme(delta, fields["base"], fields["step"])
    except ValueError as exc:
        raise SchemeFileError(str(exc)) from None
