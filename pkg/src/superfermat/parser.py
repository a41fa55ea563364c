"""Tokenizer and recursive-descent parser for superpolynomials and smooth expressions.

Grammar (shared by both languages)::

    expr     = term { ("+" | "-") term }
    term     = unary { ("*" | "/") unary }
    unary    = ("-" | "+") unary | power
    power    = atom [ "^" ["-"] INT ]
    atom     = NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
    NUMBER   = INT ["." DIGITS] | INT "/" INT        (no spaces inside "p/q")
    IDENT    = letter { letter | digit | "_" }

So ``-x^2`` is ``-(x^2)`` and ``3/2*xi1`` is the literal ``3/2`` times
``xi1``.  Superpolynomials use generators ``x<k>`` and ``xi<k>`` (1-based),
allow ``/`` only by a nonzero constant and no function calls.  Smooth
expressions use variables ``u<k>`` and the functions exp, log, sin, cos.
Spans are ``(start, end)`` offsets into the source; since every valid token
is ASCII they coincide with byte offsets up to the first error.
"""
from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import LexError, ParseError, UnknownFunction, UnknownGenerator
from .superpoly import Parity, Signature, SuperPoly
from . import weil

MAX_EXPONENT = 1000
MAX_DEPTH = 100
MAX_TREE_DEPTH = 200

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<number>[0-9]+(?:\.[0-9]+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<operator>[-+*/^])
  | (?P<paren>[()])
  | (?P<comma>,)
  | (?P<semicolon>;)
""", re.VERBOSE)
_RATIONAL_TAIL = re.compile(r"/[0-9]+")


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    span: tuple[int, int]


def tokenize(src: str | bytes) -> list[Token]:
    if isinstance(src, bytes):
        src = src.decode("latin-1")
    tokens: list[Token] = []
    pos = 0
    n = len(src)
    while pos < n:
        m = _TOKEN.match(src, pos)
        if m is None:
            ch = src[pos]
            width = len(ch.encode("utf-8", "surrogatepass"))
            raise LexError((pos, pos + width), ch)
        kind = m.lastgroup
        end = m.end()
        if kind == "number" and "." not in m.group() and not (tokens and tokens[-1].lexeme == "^"):
            tail = _RATIONAL_TAIL.match(src, end)
            if tail:
                end = tail.end()
        if kind != "ws":
            tokens.append(Token(kind, src[pos:end], (pos, end)))
        pos = end
    return tokens


# ---------------------------------------------------------------- parse tree

@dataclass(frozen=True)
class Node:
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Num(Node):
    value: Fraction


@dataclass(frozen=True)
class Name(Node):
    name: str


@dataclass(frozen=True)
class Unary(Node):
    op: str
    operand: Node


@dataclass(frozen=True)
class Binary(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class FnCall(Node):
    fn: str
    arg: Node


class _Parser:
    def __init__(self, src):
        if isinstance(src, bytes):
            src = src.decode("latin-1")
        self.src = src
        self.tokens = tokenize(src)
        self.i = 0
        self.depth = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def end_span(self):
        n = len(self.src)
        return (n, n)

    def fail(self, expected):
        tok = self.peek()
        if tok is None:
            raise ParseError(self.end_span(), expected, "end of input")
        raise ParseError(tok.span, expected, tok.lexeme)

    def take(self, lexeme=None, kind=None):
        tok = self.peek()
        if tok is None or (lexeme is not None and tok.lexeme != lexeme) or (kind is not None and tok.kind != kind):
            self.fail(repr(lexeme) if lexeme else kind)
        self.i += 1
        return tok

    def parse(self) -> Node:
        if not self.tokens:
            raise ParseError(self.end_span(), "an expression", "end of input")
        node = self.expr()
        if self.peek() is not None:
            self.fail("an operator or end of input")
        return node

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            tok = self.peek()
            raise ParseError(tok.span if tok else self.end_span(), "shallower nesting")

    def expr(self) -> Node:
        self._enter()
        node = self.term()
        while (tok := self.peek()) is not None and tok.lexeme in ("+", "-"):
            self.i += 1
            right = self.term()
            node = Binary(tok.lexeme, node, right, span=(node.span[0], right.span[1]))
        self.depth -= 1
        return node

    def term(self) -> Node:
        node = self.unary()
        while (tok := self.peek()) is not None and tok.lexeme in ("*", "/"):
            self.i += 1
            right = self.unary()
            node = Binary(tok.lexeme, node, right, span=(node.span[0], right.span[1]))
        return node

    def unary(self) -> Node:
        tok = self.peek()
        if tok is not None and tok.lexeme in ("-", "+"):
            self.i += 1
            self._enter()
            operand = self.unary()
            self.depth -= 1
            return Unary(tok.lexeme, operand, span=(tok.span[0], operand.span[1]))
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        tok = self.peek()
        if tok is None or tok.lexeme != "^":
            return base
        self.i += 1
        sign = 1
        if (t := self.peek()) is not None and t.lexeme == "-":
            self.i += 1
            sign = -1
        num = self.peek()
        if num is None or num.kind != "number" or not num.lexeme.isdigit():
            self.fail("an integer exponent")
        self.i += 1
        k = sign * int(num.lexeme)
        if abs(k) > MAX_EXPONENT:
            raise ParseError(num.span, f"an exponent of at most {MAX_EXPONENT}", num.lexeme)
        if (t := self.peek()) is not None and t.lexeme == "^":
            raise ParseError(t.span, "parentheses around a repeated power", "^")
        return Pow(base, k, span=(base.span[0], num.span[1]))

    def atom(self) -> Node:
        tok = self.peek()
        if tok is None:
            self.fail("a number, name or '('")
        if tok.kind == "number":
            self.i += 1
            num, _, den = tok.lexeme.partition("/")
            if den and int(den) == 0:
                raise ParseError(tok.span, "a nonzero denominator", tok.lexeme)
            value = Fraction(num) / (int(den) if den else 1)
            return Num(value, span=tok.span)
        if tok.kind == "ident":
            self.i += 1
            nxt = self.peek()
            if nxt is not None and nxt.lexeme == "(":
                self.i += 1
                arg = self.expr()
                close = self.take(")")
                return FnCall(tok.lexeme, arg, span=(tok.span[0], close.span[1]))
            return Name(tok.lexeme, span=tok.span)
        if tok.lexeme == "(":
            self.i += 1
            node = self.expr()
            close = self.take(")")
            return _respan(node, (tok.span[0], close.span[1]))
        self.fail("a number, name or '('")


def _respan(node: Node, span) -> Node:
    object.__setattr__(node, "span", span)
    return node


def parse_tree(src: str | bytes) -> Node:
    return _Parser(src).parse()


def _children(node: Node):
    if isinstance(node, Unary):
        return (node.operand,)
    if isinstance(node, Binary):
        return (node.left, node.right)
    if isinstance(node, (Pow, FnCall)):
        return (node.base,) if isinstance(node, Pow) else (node.arg,)
    return ()


def tree_depth(node: Node) -> int:
    best, stack = 0, [(node, 1)]
    while stack:
        n, d = stack.pop()
        best = max(best, d)
        stack.extend((c, d + 1) for c in _children(n))
    return best


def _left_chain(node: Node, ops) -> tuple[Node, list]:
    """Flatten a left-leaning chain ``((a op b) op c) ...`` into ``a, [(op, b), (op, c)]``."""
    rest = []
    while isinstance(node, Binary) and node.op in ops:
        rest.append((node.op, node.right))
        node = node.left
    rest.reverse()
    return node, rest


# ---------------------------------------------------------------- superpolynomials

_GEN = re.compile(r"(xi|x)([1-9][0-9]*)")


def generator_table(sig: Signature, names=None) -> dict:
    """Name -> (parity, index).  ``names`` is ``(even_names, odd_names)``."""
    sig = Signature(*sig)
    if names is None:
        even, odd = [f"x{i}" for i in range(1, sig.m + 1)], [f"xi{j}" for j in range(1, sig.n + 1)]
    else:
        even, odd = names
    table = {name: (Parity.EVEN, i) for i, name in enumerate(even, 1)}
    table.update({name: (Parity.ODD, j) for j, name in enumerate(odd, 1)})
    return table


def parse_superpoly(src: str | bytes, sig, names=None) -> SuperPoly:
    sig = Signature(*sig)
    tree = parse_tree(src)
    return superpoly_from_tree(tree, sig, generator_table(sig, names))


def superpoly_from_tree(node: Node, sig: Signature, table: dict) -> SuperPoly:
    if isinstance(node, Num):
        return SuperPoly.const(sig, node.value)
    if isinstance(node, Name):
        hit = table.get(node.name)
        if hit is None:
            raise UnknownGenerator(node.name, node.span)
        parity, idx = hit
        return SuperPoly.even_gen(sig, idx) if parity == Parity.EVEN else SuperPoly.odd_gen(sig, idx)
    if isinstance(node, Unary):
        inner = superpoly_from_tree(node.operand, sig, table)
        return -inner if node.op == "-" else inner
    if isinstance(node, Pow):
        if node.exponent < 0:
            raise ParseError(node.span, "a non-negative exponent", str(node.exponent))
        return superpoly_from_tree(node.base, sig, table) ** node.exponent
    if isinstance(node, Binary):
        head, rest = _left_chain(node, ("+", "-") if node.op in "+-" else ("*", "/"))
        acc = superpoly_from_tree(head, sig, table)
        for op, operand in rest:
            right = superpoly_from_tree(operand, sig, table)
            if op == "+":
                acc = acc + right
            elif op == "-":
                acc = acc - right
            elif op == "*":
                acc = acc * right
            elif not right.is_constant() or not right:
                raise ParseError(operand.span, "a nonzero constant divisor")
            else:
                acc = acc.scale(1 / right.constant_term)
        return acc
    if isinstance(node, FnCall):
        raise UnknownFunction(node.fn, node.span)
    raise AssertionError(node)


# ---------------------------------------------------------------- smooth expressions

_UVAR = re.compile(r"u([1-9][0-9]*)")


def parse_smooth(src: str | bytes, arity: int) -> weil.SmoothExpr:
    tree = parse_tree(src)
    if tree_depth(tree) > MAX_TREE_DEPTH:
        raise ParseError(tree.span, f"an expression nested at most {MAX_TREE_DEPTH} levels deep")
    return smooth_from_tree(tree, arity)


def smooth_from_tree(node: Node, arity: int) -> weil.SmoothExpr:
    e = _smooth(node, arity)
    if e.span is None:
        e = dataclasses.replace(e, span=node.span)
    return e


def _smooth(node: Node, arity: int) -> weil.SmoothExpr:
    if isinstance(node, Num):
        return weil.Const(node.value, span=node.span)
    if isinstance(node, Name):
        m = _UVAR.fullmatch(node.name)
        if not m or int(m.group(1)) > arity:
            raise UnknownGenerator(node.name, node.span)
        return weil.Var(int(m.group(1)), span=node.span)
    if isinstance(node, Unary):
        inner = smooth_from_tree(node.operand, arity)
        return weil.s_neg(inner) if node.op == "-" else inner
    if isinstance(node, Pow):
        return weil.s_pow(smooth_from_tree(node.base, arity), node.exponent)
    if isinstance(node, Binary):
        left = smooth_from_tree(node.left, arity)
        right = smooth_from_tree(node.right, arity)
        if node.op == "+":
            return weil.s_add(left, right)
        if node.op == "-":
            return weil.s_sub(left, right)
        if node.op == "*":
            return weil.s_mul(left, right)
        recip = weil.s_recip(right)
        if recip.span is None:
            recip = dataclasses.replace(recip, span=node.right.span)
        return weil.s_mul(left, recip)
    if isinstance(node, FnCall):
        if node.fn not in weil.FUNCTIONS:
            raise UnknownFunction(node.fn, node.span)
        return weil.Call(node.fn, smooth_from_tree(node.arg, arity), span=node.span)
    raise AssertionError(node)


def identifiers(src: str | bytes) -> list[str]:
    """Identifiers that are not function names, in order of first appearance."""
    toks = tokenize(src)
    out = []
    for k, t in enumerate(toks):
        if t.kind != "ident":
            continue
        if k + 1 < len(toks) and toks[k + 1].lexeme == "(":
            continue
        if t.lexeme not in out:
            out.append(t.lexeme)
    return out


__all__ = ["Token", "tokenize", "parse_tree", "parse_superpoly", "parse_smooth",
           "superpoly_from_tree", "smooth_from_tree", "generator_table", "identifiers",
           "Num", "Name", "Unary", "Binary", "Pow", "FnCall"]
