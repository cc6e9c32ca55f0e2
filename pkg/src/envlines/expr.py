"""Parser and jet evaluator for the one-variable expression mini-language.

Grammar (whitespace-insensitive, ASCII):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' factor)?
    atom   := number | 'pi' | 'e' | 't' | func arg | '(' expr ')'
    arg    := '-' arg | atom
    func   := sin | cos | tan | atan | exp | log | sqrt | abs

'^' is right-associative and binds tighter than unary minus, so "-t^2"
parses as -(t^2).  A function may take its argument by juxtaposition
("sin t"), which binds tightly: "cos t^2" is (cos t)^2.  A power whose
exponent mentions t is rewritten at parse time as exp(exponent*log(base));
constant exponents keep a dedicated power node so that integer powers stay
valid for non-positive bases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import jets
from .jets import MAX_ORDER, Jet, JetDomainError

FUNCTIONS = ("abs", "atan", "cos", "exp", "log", "sin", "sqrt", "tan")
CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLE = "t"


class ParseError(ValueError):
    """Syntax error with the byte offset and the tokens that were expected."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += " (expected one of: " + ", ".join(self.expected) + ")"
        super().__init__(detail)


class UnknownIdentifierError(ParseError):
    """An identifier that is not t, pi, e, or a known function name."""

    def __init__(self, name: str, offset: int):
        self.name = name
        ParseError.__init__(self, f"unknown identifier '{name}'", offset)


class ExpressionDomainError(ValueError):
    """Evaluation left the domain of a sub-expression at some t."""

    def __init__(self, subexpr: str, t: float, reason: str):
        self.subexpr = subexpr
        self.t = t
        super().__init__(f"domain error in '{subexpr}' at t = {t!r}: {reason}")


# -- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str  # 'pi' or 'e'


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "ExpressionAst"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "ExpressionAst"
    right: "ExpressionAst"


@dataclass(frozen=True)
class Pow:
    base: "ExpressionAst"
    exponent: "ExpressionAst"  # contains no Var node


@dataclass(frozen=True)
class Apply:
    func: str
    argument: "ExpressionAst"


ExpressionAst = Num | Const | Var | Neg | BinOp | Pow | Apply


def contains_variable(node: ExpressionAst) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, (Num, Const)):
        return False
    if isinstance(node, Neg):
        return contains_variable(node.operand)
    if isinstance(node, (BinOp, Pow)):
        a = node.left if isinstance(node, BinOp) else node.base
        b = node.right if isinstance(node, BinOp) else node.exponent
        return contains_variable(a) or contains_variable(b)
    return contains_variable(node.argument)


# -- tokenizer -------------------------------------------------------------

_ATOM_EXPECTED = ("'('", "'-'", "'e'", "'pi'", "'t'", "function", "number")


@dataclass(frozen=True)
class _Token:
    kind: str  # 'number' | 'ident' | 'op' | 'end'
    text: str
    offset: int


def _tokenize(source: str) -> list[_Token]:
    if not source.isascii():
        for i, ch in enumerate(source):
            if not ch.isascii():
                raise ParseError(f"non-ASCII character {ch!r}", len(source[:i].encode()))
    out: list[_Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            out.append(_Token("op", ch, i))
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == ".":
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            out.append(_Token("number", source[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            out.append(_Token("ident", source[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    out.append(_Token("end", "", n))
    return out


# -- parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def match_op(self, *ops: str) -> _Token | None:
        tok = self.peek()
        if tok.kind == "op" and tok.text in ops:
            return self.advance()
        return None

    def expr(self) -> ExpressionAst:
        node = self.term()
        while (tok := self.match_op("+", "-")) is not None:
            node = BinOp(tok.text, node, self.term())
        return node

    def term(self) -> ExpressionAst:
        node = self.factor()
        while (tok := self.match_op("*", "/")) is not None:
            node = BinOp(tok.text, node, self.factor())
        return node

    def factor(self) -> ExpressionAst:
        if self.match_op("-"):
            return Neg(self.factor())
        node = self.atom()
        if self.match_op("^"):
            exponent = self.factor()
            return _make_power(node, exponent)
        return node

    def arg(self) -> ExpressionAst:
        if self.match_op("-"):
            return Neg(self.arg())
        return self.atom()

    def atom(self) -> ExpressionAst:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            value = float(tok.text)
            if not math.isfinite(value):
                raise ParseError(f"numeric literal {tok.text!r} overflows", tok.offset)
            return Num(value)
        if tok.kind == "ident":
            self.advance()
            if tok.text == VARIABLE:
                return Var()
            if tok.text in CONSTANTS:
                return Const(tok.text)
            if tok.text in FUNCTIONS:
                return Apply(tok.text, self.arg())
            raise UnknownIdentifierError(tok.text, tok.offset)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            if not self.match_op(")"):
                bad = self.peek()
                raise ParseError(f"unclosed parenthesis near {bad.text!r}", bad.offset, ("')'",))
            return node
        label = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {label}", tok.offset, _ATOM_EXPECTED)


def _make_power(base: ExpressionAst, exponent: ExpressionAst) -> ExpressionAst:
    if contains_variable(exponent):
        return Apply("exp", BinOp("*", exponent, Apply("log", base)))
    return Pow(base, exponent)


def parse_expression(source: str) -> ExpressionAst:
    """Parse ``source`` into an immutable AST."""
    if not source or not source.strip():
        raise ParseError("empty expression", 0, _ATOM_EXPECTED)
    parser = _Parser(_tokenize(source))
    node = parser.expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(
            f"trailing input {tail.text!r}", tail.offset,
            ("'*'", "'+'", "'-'", "'/'", "'^'", "end of input"),
        )
    return node


# -- unparser ----------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def unparse(node: ExpressionAst) -> str:
    """Render an AST back to source text; reparsing gives an identical tree."""
    return _render(node, 0)


def _render(node: ExpressionAst, parent: int) -> str:
    if isinstance(node, Num):
        text, prec = repr(node.value), _PREC_ATOM
    elif isinstance(node, Const):
        text, prec = node.name, _PREC_ATOM
    elif isinstance(node, Var):
        text, prec = VARIABLE, _PREC_ATOM
    elif isinstance(node, Apply):
        text, prec = f"{node.func}({_render(node.argument, 0)})", _PREC_ATOM
    elif isinstance(node, Neg):
        text, prec = f"-{_render(node.operand, _PREC_NEG)}", _PREC_NEG
    elif isinstance(node, Pow):
        # right-associative: parenthesize an exponent only below pow level
        text = f"{_render(node.base, _PREC_POW + 1)}^{_render(node.exponent, _PREC_POW)}"
        prec = _PREC_POW
    else:
        prec = _PREC_ADD if node.op in "+-" else _PREC_MUL
        # left-associative: the right operand needs one level more
        text = f"{_render(node.left, prec)}{node.op}{_render(node.right, prec + 1)}"
    if prec < parent:
        return f"({text})"
    return text


# -- evaluation --------------------------------------------------------------

def evaluate_jet(expr: ExpressionAst, t: float, order: int) -> Jet:
    """Value and derivatives of ``expr`` at ``t`` up to ``order`` (0..6)."""
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}], got {order}")
    return _eval(expr, float(t), order)


def evaluate(expr: ExpressionAst, t: float) -> float:
    return _eval(expr, float(t), 0).value


def _eval(node: ExpressionAst, t: float, order: int) -> Jet:
    if isinstance(node, Num):
        return Jet.constant(node.value, t, order)
    if isinstance(node, Const):
        return Jet.constant(CONSTANTS[node.name], t, order)
    if isinstance(node, Var):
        return Jet.variable(t, order)
    try:
        if isinstance(node, Neg):
            return -_eval(node.operand, t, order)
        if isinstance(node, BinOp):
            left = _eval(node.left, t, order)
            right = _eval(node.right, t, order)
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            if node.op == "*":
                return left * right
            return left / right
        if isinstance(node, Pow):
            base = _eval(node.base, t, order)
            r = _eval(node.exponent, t, 0).value
            n = round(r)
            if abs(r - n) <= 1e-12 * max(1.0, abs(r)):
                return jets.powi(base, int(n))
            return jets.powr(base, r)
        func = getattr(jets, node.func if node.func != "abs" else "absolute")
        return func(_eval(node.argument, t, order))
    except JetDomainError as err:
        raise ExpressionDomainError(unparse(node), t, str(err)) from err


# -- finite-difference oracle -------------------------------------------------

def fd_derivative(expr: ExpressionAst, t: float, order: int, h: float) -> float:
    """Central finite-difference estimate of the order-th derivative at t.

    Independent of the jet recurrences on purpose: it only evaluates values.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if h <= 0.0:
        raise ValueError(f"h must be positive, got {h}")
    f_plus = evaluate(expr, t + h)
    f_minus = evaluate(expr, t - h)
    if order == 1:
        return (f_plus - f_minus) / (2.0 * h)
    return (f_plus - 2.0 * evaluate(expr, t) + f_minus) / (h * h)
