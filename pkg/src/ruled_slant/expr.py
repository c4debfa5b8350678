"""Parsing and jet evaluation of scalar expressions of one real parameter.

Grammar (EBNF)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := unary ('^' unary)?
    unary  := '-'? atom
    atom   := number | 't' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
    func   := 'sin'|'cos'|'tan'|'exp'|'log'|'sqrt'|'abs'

Numbers are decimal literals with an optional exponent part.  ``u`` is
accepted as a synonym for the parameter ``t`` (curve inputs are commonly
written in ``u``); the canonical printer always emits ``t``.  Exponents of
``^`` must be constant subexpressions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from . import jets
from .jets import Jet, VecJet


class ExpressionError(ValueError):
    """Base class for parse- and evaluation-time expression failures."""


class ExpressionSyntaxError(ExpressionError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownIdentifierError(ExpressionSyntaxError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown identifier '{name}'", position)
        self.name = name


class ExpressionDomainError(ExpressionError):
    """Evaluation hit the domain boundary of some node."""


# -- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class NamedConst:
    name: str  # 'pi' | 'e'


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg' or a function name
    arg: "ExpressionAst"


@dataclass(frozen=True)
class Binary:
    op: str  # '+', '-', '*', '/', '^'
    left: "ExpressionAst"
    right: "ExpressionAst"


ExpressionAst = Union[Const, Var, NamedConst, Unary, Binary]

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "abs")
_NAMED_VALUES = {"pi": math.pi, "e": math.e}
_VARIABLE_NAMES = ("t", "u")


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            stripped = source[pos:].lstrip()
            if not stripped:
                break
            at = len(source) - len(stripped)
            raise ExpressionSyntaxError(f"unexpected character '{source[at]}'", at)
        if m.lastgroup == "num":
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.lastgroup == "ident":
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept_op(self, *ops: str):
        kind, text, _ = self.peek()
        if kind == "op" and text in ops:
            return self.advance()
        return None

    def expect_op(self, op: str):
        tok = self.accept_op(op)
        if tok is None:
            kind, text, pos = self.peek()
            found = text if kind != "end" else "end of input"
            raise ExpressionSyntaxError(f"expected '{op}', found {found!r}", pos)
        return tok

    def parse(self) -> ExpressionAst:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected trailing input {text!r}", pos)
        return node

    def expr(self) -> ExpressionAst:
        node = self.term()
        while True:
            tok = self.accept_op("+", "-")
            if tok is None:
                return node
            node = Binary(tok[1], node, self.term())

    def term(self) -> ExpressionAst:
        node = self.factor()
        while True:
            tok = self.accept_op("*", "/")
            if tok is None:
                return node
            node = Binary(tok[1], node, self.factor())

    def factor(self) -> ExpressionAst:
        node = self.unary()
        tok = self.accept_op("^")
        if tok is None:
            return node
        exponent = self.unary()
        if contains_variable(exponent):
            raise ExpressionSyntaxError("exponent of '^' must be constant", tok[2])
        return Binary("^", node, exponent)

    def unary(self) -> ExpressionAst:
        tok = self.accept_op("-")
        if tok is not None:
            return Unary("neg", self.atom())
        return self.atom()

    def atom(self) -> ExpressionAst:
        kind, text, pos = self.peek()
        if kind == "num":
            self.advance()
            return Const(float(text))
        if kind == "ident":
            self.advance()
            if text in _VARIABLE_NAMES:
                return Var()
            if text in _NAMED_VALUES:
                return NamedConst(text)
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Unary(text, arg)
            raise UnknownIdentifierError(text, pos)
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        found = text if kind != "end" else "end of input"
        raise ExpressionSyntaxError(f"expected expression, found {found!r}", pos)


def parse_expression(source: str) -> ExpressionAst:
    """Parse ``source`` into an AST; raises :class:`ExpressionSyntaxError`."""
    if not source or not source.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    return _Parser(source).parse()


def contains_variable(node: ExpressionAst) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Unary):
        return contains_variable(node.arg)
    if isinstance(node, Binary):
        return contains_variable(node.left) or contains_variable(node.right)
    return False


# -- canonical printer --------------------------------------------------------

# Grammatical rank: atom(0) < unary(1) < factor(2) < term(3) < expr(4).
# A child may be written bare wherever its rank fits the slot; otherwise it
# gets parentheses (which make it an atom again).
_SLOTS = {
    "+": (4, 3), "-": (4, 3),
    "*": (3, 2), "/": (3, 2),
    "^": (1, 1),
}


def _rank(node: ExpressionAst) -> int:
    if isinstance(node, (Var, NamedConst)):
        return 0
    if isinstance(node, Const):
        return 1 if node.value < 0 else 0
    if isinstance(node, Unary):
        return 0 if node.op != "neg" else 1
    if node.op == "^":
        return 2
    if node.op in ("*", "/"):
        return 3
    return 4


def _emit(node: ExpressionAst, slot: int) -> str:
    if _rank(node) > slot:
        return "(" + _emit(node, 4) + ")"
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return "t"
    if isinstance(node, NamedConst):
        return node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            return "-" + _emit(node.arg, 0)
        return node.op + "(" + _emit(node.arg, 4) + ")"
    left_slot, right_slot = _SLOTS[node.op]
    return _emit(node.left, left_slot) + node.op + _emit(node.right, right_slot)


def to_source(node: ExpressionAst) -> str:
    """Canonical text form; ``parse_expression(to_source(ast))`` round-trips."""
    return _emit(node, 4)


# -- evaluation ---------------------------------------------------------------

def eval_jet(ast: ExpressionAst, t0: float, order: int) -> Jet:
    """Evaluate ``ast`` at ``t0`` as a jet of derivatives up to ``order``.

    ``order`` must lie in [0, MAX_ORDER].  Raises
    :class:`ExpressionDomainError` naming the offending subexpression when
    evaluation leaves the domain of an elementary operation.
    """
    if not isinstance(order, int) or order < 0 or order > jets.MAX_ORDER:
        raise ValueError(f"order must be an integer in [0, {jets.MAX_ORDER}], got {order!r}")
    return _eval(ast, float(t0), order)


def _eval(node: ExpressionAst, t0: float, order: int) -> Jet:
    if isinstance(node, Const):
        return Jet.constant(node.value, order)
    if isinstance(node, Var):
        return Jet.variable(t0, order)
    if isinstance(node, NamedConst):
        return Jet.constant(_NAMED_VALUES[node.name], order)
    if isinstance(node, Unary):
        arg = _eval(node.arg, t0, order)
        if node.op == "neg":
            return -arg
        fn = getattr(jets, node.op if node.op != "abs" else "absolute")
        try:
            return fn(arg)
        except jets.JetDomainError as err:
            raise ExpressionDomainError(f"{err} in '{to_source(node)}'") from err
    left = _eval(node.left, t0, order)
    if node.op == "^":
        if contains_variable(node.right):
            raise ExpressionDomainError(f"non-constant exponent in '{to_source(node)}'")
        exponent = _eval(node.right, t0, 0).value
        try:
            return left ** exponent
        except jets.JetDomainError as err:
            raise ExpressionDomainError(f"{err} in '{to_source(node)}'") from err
    right = _eval(node.right, t0, order)
    try:
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return left / right
    except jets.JetDomainError as err:
        raise ExpressionDomainError(f"{err} in '{to_source(node)}'") from err


def curve_jet(components, t0: float, order: int) -> VecJet:
    """Componentwise :func:`eval_jet` of a 3-component curve."""
    if len(components) != 3:
        raise ValueError(f"a curve needs exactly 3 components, got {len(components)}")
    out = []
    for i, comp in enumerate(components):
        try:
            out.append(eval_jet(comp, t0, order))
        except ExpressionDomainError as err:
            raise ExpressionDomainError(f"component {i + 1}: {err}") from err
    return VecJet(*out)
