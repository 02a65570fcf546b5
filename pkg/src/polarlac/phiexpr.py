"""Parser and evaluator for tangential-angle expressions phi = f(theta).

The grammar is plain infix arithmetic over the single variable ``theta``:

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | 'theta' | 'pi' | FUNC '(' expr ')' | '(' expr ')'

so ``^`` binds tighter than unary minus and is right-associative, with
``sqrt``, ``sin``, ``cos``, ``exp`` and ``ln`` as the function set.  Every
expression evaluates jointly with its exact first derivative by propagating
(value, derivative) pairs through the tree; no finite differences are
involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

FUNCTIONS = ("sqrt", "sin", "cos", "exp", "ln")


class ParseError(ValueError):
    """Syntax problem in an expression, with the character offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class EmptyExpression(ParseError):
    def __init__(self):
        super().__init__("empty expression", 0)


class UnknownIdentifier(ParseError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier '{name}'", offset)
        self.name = name


class EvalDomainError(ArithmeticError):
    """Evaluation left the real domain (ln of nonpositive, sqrt of negative,
    division by zero, zero to a negative power, unbounded derivative)."""

    def __init__(self, message: str, node: "Node"):
        super().__init__(f"{message} in '{serialize(node)}'")
        self.node = node


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Pi:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    fn: str  # one of FUNCTIONS
    arg: "Node"


Node = Num | Var | Pi | Neg | BinOp | Call


@dataclass(frozen=True)
class PhiValue:
    phi: float
    dphi_dtheta: float


class _Tokenizer:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []  # (kind, text, offset)
        self._scan()

    def _scan(self):
        src = self.source
        i = 0
        n = len(src)
        while i < n:
            c = src[i]
            if c in " \t\r\n":
                i += 1
                continue
            if c in "+-*/^()":
                self.tokens.append(("op", c, i))
                i += 1
                continue
            if c.isdigit() or (c == "." and i + 1 < n and src[i + 1].isdigit()):
                j = i
                while j < n and (src[j].isdigit() or src[j] == "."):
                    j += 1
                if j < n and src[j] in "eE":
                    k = j + 1
                    if k < n and src[k] in "+-":
                        k += 1
                    if k < n and src[k].isdigit():
                        j = k
                        while j < n and src[j].isdigit():
                            j += 1
                text = src[i:j]
                try:
                    float(text)
                except ValueError:
                    raise ParseError(f"bad number literal '{text}'", i)
                self.tokens.append(("num", text, i))
                i = j
                continue
            if c.isalpha() or c == "_":
                j = i
                while j < n and (src[j].isalnum() or src[j] == "_"):
                    j += 1
                self.tokens.append(("ident", src[i:j], i))
                i = j
                continue
            raise ParseError(f"unexpected character '{c}'", i)
        self.tokens.append(("end", "", n))


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _Tokenizer(source).tokens
        self.idx = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.idx]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_op(self, symbol: str):
        kind, text, off = self.peek()
        if kind == "op" and text == symbol:
            self.advance()
            return
        raise ParseError(f"expected '{symbol}'", off)

    def parse(self) -> Node:
        kind, _, _ = self.peek()
        if kind == "end":
            raise EmptyExpression()
        node = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input '{text}'", off)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinOp(text, node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinOp(text, node, self.factor())
            else:
                return node

    def factor(self) -> Node:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            # right-associative; exponent may carry its own unary minus
            return BinOp("^", base, self.factor())
        return base

    def atom(self) -> Node:
        kind, text, off = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            if text == "theta":
                return Var()
            if text == "pi":
                return Pi()
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            raise UnknownIdentifier(text, off)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError("expected a value" if kind == "end" else f"unexpected '{text}'", off)


# serializer precedence levels; higher binds tighter
_LEVEL_ADD, _LEVEL_MUL, _LEVEL_UNARY, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _level(node: Node) -> int:
    if isinstance(node, BinOp):
        if node.op == "^":
            return _LEVEL_POW
        if node.op in "*/":
            return _LEVEL_MUL
        return _LEVEL_ADD
    if isinstance(node, Neg):
        return _LEVEL_UNARY
    return _LEVEL_ATOM


def _wrap(node: Node, minimum: int) -> str:
    text = serialize(node)
    if _level(node) < minimum:
        return f"({text})"
    return text


def serialize(node: Node) -> str:
    """Render the tree so that re-parsing yields a structurally identical tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "theta"
    if isinstance(node, Pi):
        return "pi"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _LEVEL_UNARY)
    if isinstance(node, Call):
        return f"{node.fn}({serialize(node.arg)})"
    if node.op in "+-":
        left = _wrap(node.left, _LEVEL_ADD)
        right = _wrap(node.right, _LEVEL_ADD + 1)
        return f"{left} {node.op} {right}"
    if node.op in "*/":
        left = _wrap(node.left, _LEVEL_MUL)
        right = _wrap(node.right, _LEVEL_MUL + 1)
        return f"{left}{node.op}{right}"
    # power: base must be an atom, exponent anything unary or tighter
    left = _wrap(node.left, _LEVEL_ATOM)
    right = _wrap(node.right, _LEVEL_UNARY)
    return f"{left}^{right}"


def _check_finite(value: float, node: Node, what: str = "value") -> float:
    if not math.isfinite(value):
        raise EvalDomainError(f"non-finite {what}", node)
    return value


def _eval_value(node: Node, theta: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return theta
    if isinstance(node, Pi):
        return math.pi
    if isinstance(node, Neg):
        return -_eval_value(node.operand, theta)
    if isinstance(node, Call):
        a = _eval_value(node.arg, theta)
        if node.fn == "sqrt":
            if a < 0:
                raise EvalDomainError("sqrt of negative", node)
            return math.sqrt(a)
        if node.fn == "ln":
            if a <= 0:
                raise EvalDomainError("ln of nonpositive", node)
            return math.log(a)
        if node.fn == "exp":
            try:
                return _check_finite(math.exp(a), node)
            except OverflowError:
                raise EvalDomainError("exp overflow", node) from None
        if node.fn == "sin":
            return math.sin(a)
        return math.cos(a)
    l = _eval_value(node.left, theta)
    r = _eval_value(node.right, theta)
    if node.op == "+":
        return _check_finite(l + r, node)
    if node.op == "-":
        return _check_finite(l - r, node)
    if node.op == "*":
        return _check_finite(l * r, node)
    if node.op == "/":
        if r == 0:
            raise EvalDomainError("division by zero", node)
        return _check_finite(l / r, node)
    return _pow_value(l, r, node)


def _pow_value(base: float, exponent: float, node: Node) -> float:
    if base > 0:
        try:
            return _check_finite(base ** exponent, node)
        except OverflowError:
            raise EvalDomainError("power overflow", node) from None
    if base == 0:
        if exponent < 0:
            raise EvalDomainError("zero to a negative power", node)
        return 1.0 if exponent == 0 else 0.0
    # negative base needs an integer exponent to stay real
    if exponent != math.floor(exponent) or not math.isfinite(exponent):
        raise EvalDomainError("negative base with non-integer exponent", node)
    try:
        return _check_finite(base ** exponent, node)
    except OverflowError:
        raise EvalDomainError("power overflow", node) from None


def _eval_dual(node: Node, theta: float) -> tuple[float, float]:
    if isinstance(node, Num):
        return node.value, 0.0
    if isinstance(node, Var):
        return theta, 1.0
    if isinstance(node, Pi):
        return math.pi, 0.0
    if isinstance(node, Neg):
        v, d = _eval_dual(node.operand, theta)
        return -v, -d
    if isinstance(node, Call):
        return _call_dual(node, theta)
    lv, ld = _eval_dual(node.left, theta)
    rv, rd = _eval_dual(node.right, theta)
    if node.op == "+":
        return _check_finite(lv + rv, node), ld + rd
    if node.op == "-":
        return _check_finite(lv - rv, node), ld - rd
    if node.op == "*":
        return _check_finite(lv * rv, node), _check_finite(ld * rv + lv * rd, node, "derivative")
    if node.op == "/":
        if rv == 0:
            raise EvalDomainError("division by zero", node)
        v = lv / rv
        return _check_finite(v, node), _check_finite((ld - v * rd) / rv, node, "derivative")
    return _pow_dual(lv, ld, rv, rd, node)


def _pow_dual(bv: float, bd: float, ev: float, ed: float, node: Node) -> tuple[float, float]:
    v = _pow_value(bv, ev, node)
    if bv > 0:
        d = v * (ed * math.log(bv) + ev * bd / bv)
        return v, _check_finite(d, node, "derivative")
    if bv == 0:
        # d/dtheta of u^c is c u^(c-1) u', which stays finite at u = 0
        # only for c = 0, c >= 1, or a locally stationary base
        if ed != 0:
            raise EvalDomainError("derivative of power with zero base and varying exponent", node)
        if ev == 0:
            return v, 0.0
        if ev >= 1:
            return v, bd if ev == 1 else 0.0
        if bd == 0:
            return v, 0.0
        raise EvalDomainError("unbounded derivative of fractional power at zero", node)
    # negative base, integer constant exponent
    if ed != 0:
        raise EvalDomainError("derivative of power with negative base and varying exponent", node)
    d = ev * _pow_value(bv, ev - 1, node) * bd
    return v, _check_finite(d, node, "derivative")


def _call_dual(node: Call, theta: float) -> tuple[float, float]:
    av, ad = _eval_dual(node.arg, theta)
    if node.fn == "sqrt":
        if av < 0:
            raise EvalDomainError("sqrt of negative", node)
        v = math.sqrt(av)
        if av == 0:
            if ad == 0:
                return 0.0, 0.0
            raise EvalDomainError("unbounded derivative of sqrt at zero", node)
        return v, ad / (2.0 * v)
    if node.fn == "ln":
        if av <= 0:
            raise EvalDomainError("ln of nonpositive", node)
        return math.log(av), ad / av
    if node.fn == "exp":
        try:
            v = _check_finite(math.exp(av), node)
        except OverflowError:
            raise EvalDomainError("exp overflow", node) from None
        return v, _check_finite(v * ad, node, "derivative")
    if node.fn == "sin":
        return math.sin(av), math.cos(av) * ad
    return math.cos(av), -math.sin(av) * ad


@dataclass(frozen=True)
class PhiFunction:
    """A parsed phi(theta) expression, immutable and safe to share.

    ``value`` evaluates phi alone and succeeds anywhere the expression is
    real-valued.  ``eval_with_derivative`` additionally propagates the exact
    first derivative and therefore also rejects points where the derivative
    is unbounded (for example sqrt(theta) at zero).
    """

    source: str
    ast: Node

    def value(self, theta: float) -> float:
        return _eval_value(self.ast, theta)

    def eval_with_derivative(self, theta: float) -> PhiValue:
        v, d = _eval_dual(self.ast, theta)
        _check_finite(v, self.ast)
        _check_finite(d, self.ast, "derivative")
        return PhiValue(v, d)

    def serialize(self) -> str:
        return serialize(self.ast)

    def __str__(self) -> str:
        return self.source


def parse(source: str) -> PhiFunction:
    """Parse an expression over ``theta`` into a PhiFunction.

    Raises ParseError (with a character offset), UnknownIdentifier, or
    EmptyExpression.
    """
    return PhiFunction(source, _Parser(source).parse())


def eval_with_derivative(f: PhiFunction, theta: float) -> PhiValue:
    return f.eval_with_derivative(theta)


def depends_on_theta(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Neg):
        return depends_on_theta(node.operand)
    if isinstance(node, BinOp):
        return depends_on_theta(node.left) or depends_on_theta(node.right)
    if isinstance(node, Call):
        return depends_on_theta(node.arg)
    return False
