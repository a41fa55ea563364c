"""Smooth functions evaluated on nilpotent (Weil) and Grassmann arguments.

A smooth function is a :class:`SmoothExpr` tree, differentiated
symbolically.  Evaluating ``f`` at jets ``a_i = body_i + n_i`` uses the
finite Taylor sum

    f(a) = sum_{|alpha| < k} d^alpha f(body) / alpha! * n^alpha

where ``k`` is the nilpotency index of the Weil algebra.  The powers
``n^alpha`` are computed exactly in the algebra; only derivative values are
floats, and they are folded in exactly before a single final rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

from .errors import AlgebraMismatch, DomainError, NotFiniteDimensional, NotWeilAlgebra, ParityMismatch, UserError
from .ideals import HomogeneousIdeal, QuotientAlgebra, augmentation_nilpotency, order_key
from .superpoly import Parity, Signature, SuperMonomial, SuperPoly, mask_of, odd_indices

FUNCTIONS = ("exp", "log", "sin", "cos")


# ---------------------------------------------------------------- expressions

@dataclass(frozen=True)
class SmoothExpr:
    span: tuple | None = field(default=None, compare=False, repr=False, kw_only=True)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(SmoothExpr):
    value: Fraction


@dataclass(frozen=True)
class Var(SmoothExpr):
    index: int  # 1-based


@dataclass(frozen=True)
class Sum(SmoothExpr):
    left: SmoothExpr
    right: SmoothExpr


@dataclass(frozen=True)
class Product(SmoothExpr):
    left: SmoothExpr
    right: SmoothExpr


@dataclass(frozen=True)
class Power(SmoothExpr):
    arg: SmoothExpr
    k: int


@dataclass(frozen=True)
class Neg(SmoothExpr):
    arg: SmoothExpr


@dataclass(frozen=True)
class Recip(SmoothExpr):
    arg: SmoothExpr


@dataclass(frozen=True)
class Call(SmoothExpr):
    fn: str
    arg: SmoothExpr

    def __post_init__(self):
        if self.fn not in FUNCTIONS:
            raise UserError(f"unknown function {self.fn!r}")


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def const(c) -> Const:
    return Const(Fraction(c))


def _is_const(e, value=None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


def s_add(a: SmoothExpr, b: SmoothExpr) -> SmoothExpr:
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    return Sum(a, b)


def s_neg(a: SmoothExpr) -> SmoothExpr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def s_sub(a: SmoothExpr, b: SmoothExpr) -> SmoothExpr:
    return s_add(a, s_neg(b))


def s_mul(a: SmoothExpr, b: SmoothExpr) -> SmoothExpr:
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    return Product(a, b)


def s_pow(a: SmoothExpr, k: int) -> SmoothExpr:
    if k == 0:
        return ONE
    if k == 1:
        return a
    if isinstance(a, Const) and (a.value or k > 0):
        return Const(a.value ** k)
    return Power(a, k)


def s_recip(a: SmoothExpr) -> SmoothExpr:
    if isinstance(a, Const) and a.value:
        return Const(1 / a.value)
    return Recip(a)


def s_call(fn: str, a: SmoothExpr) -> SmoothExpr:
    return Call(fn, a)


def max_var(e: SmoothExpr) -> int:
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Const):
        return 0
    if isinstance(e, (Sum, Product)):
        return max(max_var(e.left), max_var(e.right))
    return max_var(e.arg)


def is_rational(e: SmoothExpr) -> bool:
    """True when ``e`` uses no transcendental function (exactly evaluable on Q)."""
    if isinstance(e, (Const, Var)):
        return True
    if isinstance(e, Call):
        return False
    if isinstance(e, (Sum, Product)):
        return is_rational(e.left) and is_rational(e.right)
    return is_rational(e.arg)


def diff(e: SmoothExpr, u: int) -> SmoothExpr:
    """Symbolic partial derivative with respect to variable ``u`` (1-based)."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.index == u else ZERO
    if isinstance(e, Sum):
        return s_add(diff(e.left, u), diff(e.right, u))
    if isinstance(e, Product):
        return s_add(s_mul(diff(e.left, u), e.right), s_mul(e.left, diff(e.right, u)))
    if isinstance(e, Neg):
        return s_neg(diff(e.arg, u))
    da = diff(e.arg, u)
    if _is_const(da, 0):
        return ZERO
    if isinstance(e, Power):
        return s_mul(s_mul(const(e.k), s_pow(e.arg, e.k - 1)), da)
    if isinstance(e, Recip):
        return s_neg(s_mul(da, s_pow(e, 2)))
    if e.fn == "exp":
        return s_mul(e, da)
    if e.fn == "log":
        return s_mul(da, Recip(e.arg))
    if e.fn == "sin":
        return s_mul(Call("cos", e.arg), da)
    if e.fn == "cos":
        return s_neg(s_mul(Call("sin", e.arg), da))
    raise AssertionError(e)


def to_text(e: SmoothExpr) -> str:
    """Fully parenthesized text that parses back to an equal tree."""
    if isinstance(e, Const):
        v = e.value
        return f"({v})" if v < 0 else str(v)
    if isinstance(e, Var):
        return f"u{e.index}"
    if isinstance(e, Sum):
        return f"({to_text(e.left)} + {to_text(e.right)})"
    if isinstance(e, Product):
        return f"({to_text(e.left)} * {to_text(e.right)})"
    if isinstance(e, Power):
        return f"({to_text(e.arg)})^{e.k}"
    if isinstance(e, Neg):
        return f"-({to_text(e.arg)})"
    if isinstance(e, Recip):
        return f"(1/({to_text(e.arg)}))"
    return f"{e.fn}({to_text(e.arg)})"


def expr_from_poly(f: SuperPoly) -> SmoothExpr:
    """Smooth expression of an even-only polynomial (variable ``u_i`` for ``x_i``)."""
    out = ZERO
    for (exps, mask), c in sorted(f.terms.items(), key=lambda kv: order_key(kv[0])):
        if mask:
            raise UserError("polynomial has odd generators")
        term = Const(c)
        for i, k in enumerate(exps, 1):
            if k:
                term = s_mul(term, s_pow(Var(i), k))
        out = s_add(out, term)
    return out


# ---------------------------------------------------------------- evaluation

def _evaluate(e: SmoothExpr, point: Sequence, exact: bool, memo: dict):
    key = id(e)
    if key in memo:
        return memo[key][1]
    val = _eval_node(e, point, exact, memo)
    memo[key] = (e, val)  # keep e alive so its id is not reused
    return val


def _eval_node(e, point, exact, memo):
    if isinstance(e, Const):
        return e.value if exact else float(e.value)
    if isinstance(e, Var):
        if e.index > len(point):
            raise UserError(f"u{e.index} has no value (only {len(point)} arguments)")
        return point[e.index - 1]
    if isinstance(e, Sum):
        return _evaluate(e.left, point, exact, memo) + _evaluate(e.right, point, exact, memo)
    if isinstance(e, Product):
        return _evaluate(e.left, point, exact, memo) * _evaluate(e.right, point, exact, memo)
    a = _evaluate(e.arg, point, exact, memo)
    try:
        if isinstance(e, Neg):
            return -a
        if isinstance(e, Power):
            if not a and e.k < 0:
                raise DomainError("negative power of zero", e)
            return a ** e.k
        if isinstance(e, Recip):
            if not a:
                raise DomainError("reciprocal of zero", e)
            return 1 / a
        if exact:
            raise UserError(f"{e.fn} cannot be evaluated exactly")
        if e.fn == "exp":
            return math.exp(a)
        if e.fn == "log":
            if a <= 0:
                raise DomainError(f"log of non-positive value {a!r}", e)
            return math.log(a)
        if e.fn == "sin":
            return math.sin(a)
        return math.cos(a)
    except OverflowError:
        raise DomainError("overflow", e) from None
    except ValueError as exc:
        raise DomainError(str(exc), e) from None


def eval_numeric(e: SmoothExpr, point: Sequence[float]) -> float:
    value = _evaluate(e, [float(p) for p in point], False, {})
    if isinstance(value, float) and not math.isfinite(value):
        raise DomainError(f"non-finite value {value!r}", e)
    return float(value)


def eval_exact(e: SmoothExpr, point: Sequence) -> Fraction:
    return _evaluate(e, [Fraction(p) for p in point], True, {})


def multi_indices(p: int, max_order: int) -> list[tuple[int, ...]]:
    """All multi-indices with ``|alpha| <= max_order``, graded then lexicographic."""
    out = []
    for order in range(max_order + 1):
        level = []
        for combo in combinations_with_replacement(range(p), order):
            alpha = [0] * p
            for i in combo:
                alpha[i] += 1
            level.append(tuple(alpha))
        out.extend(sorted(level, reverse=True))
    return out


class _Derivatives:
    """Lazily differentiated partials of one expression."""

    def __init__(self, e: SmoothExpr, p: int):
        self.p = p
        self.exprs = {(0,) * p: e}

    def expr(self, alpha):
        got = self.exprs.get(alpha)
        if got is None:
            i = next(k for k, a in enumerate(alpha) if a)
            parent = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
            got = diff(self.expr(parent), i + 1)
            self.exprs[alpha] = got
        return got


def taylor_multi_index_table(e: SmoothExpr, point: Sequence, max_order: int, *, exact: bool = False) -> dict:
    """``{alpha: d^alpha e(point)}`` for every ``|alpha| <= max_order``.

    Keys are tuples of length ``len(point)``.
    """
    p = len(point)
    if max_var(e) > p:
        raise UserError(f"expression uses u{max_var(e)} but only {p} point coordinates were given")
    ders = _Derivatives(e, p)
    ev = eval_exact if exact else eval_numeric
    return {alpha: ev(ders.expr(alpha), point) for alpha in multi_indices(p, max_order)}


# ---------------------------------------------------------------- Weil algebras

class RealWeilAlgebra:
    """A finite-dimensional quotient whose augmentation ideal is nilpotent."""

    def __init__(self, quotient: QuotientAlgebra):
        basis = quotient.basis_cache
        if basis is None:
            raise NotFiniteDimensional("Weil algebras must be finite-dimensional")
        nil = augmentation_nilpotency(quotient)
        if nil is None:
            raise NotWeilAlgebra("augmentation ideal is not nilpotent")
        self.quotient = quotient
        self.sig = quotient.sig
        self.basis: list[SuperMonomial] = basis
        self.nil_index: int = nil
        self.unit_key = ((0,) * self.sig.m, 0)

    @classmethod
    def from_relations(cls, sig, relations: Sequence[SuperPoly] = ()) -> "RealWeilAlgebra":
        return cls(QuotientAlgebra(HomogeneousIdeal(sig, relations)))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def same_as(self, other: "RealWeilAlgebra") -> bool:
        return self is other or (self.sig == other.sig and
                                 self.quotient.gb.generators == other.quotient.gb.generators)

    def element(self, poly: SuperPoly, exact: bool = True) -> "JetElement":
        return JetElement(self, self.quotient.nf(poly), exact)

    def from_coeffs(self, coeffs: Mapping) -> "JetElement":
        """Jet from ``{SuperMonomial: value}``; float values make the jet inexact."""
        keys = {b.key for b in self.basis}
        terms, exact = {}, True
        for mono, v in coeffs.items():
            if mono.key not in keys:
                raise UserError(f"{mono} is not a basis monomial of the algebra")
            if isinstance(v, float):
                exact = False
                if not math.isfinite(v):
                    raise DomainError(f"non-finite coefficient {v!r}")
            terms[mono.key] = Fraction(v)
        return JetElement(self, SuperPoly(self.sig, terms), exact)

    def constant(self, c) -> "JetElement":
        exact = not isinstance(c, float)
        return JetElement(self, SuperPoly.const(self.sig, Fraction(c)), exact)

    def to_json(self) -> dict:
        return {"theory": "Poly", "sig": [self.sig.m, self.sig.n],
                "relations": [r.to_json() for r in self.quotient.ideal.generators]}


def _fmt_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


class JetElement:
    """An element of R (x) W, stored exactly as a normal form.

    ``exact`` is False once a float has entered the computation; the
    public coefficients are then reported as floats.
    """

    __slots__ = ("algebra", "value", "exact")

    def __init__(self, algebra: RealWeilAlgebra, value: SuperPoly, exact: bool = True):
        self.algebra = algebra
        self.value = value
        self.exact = exact

    def _check(self, other: "JetElement"):
        if not self.algebra.same_as(other.algebra):
            raise AlgebraMismatch("jets live in different Weil algebras")

    def _num(self, c: Fraction):
        return c if self.exact else float(c)

    @property
    def body(self):
        return self._num(self.value.terms.get(self.algebra.unit_key, Fraction(0)))

    @property
    def coefficients(self) -> dict:
        """Nonzero coefficients keyed by basis monomial, in basis order."""
        return {b: self._num(self.value.terms[b.key]) for b in self.algebra.basis if b.key in self.value.terms}

    def coefficient(self, mono: SuperMonomial):
        return self._num(self.value.terms.get(mono.key, Fraction(0)))

    @property
    def parity(self) -> Parity | None:
        from .superpoly import parity_of
        return parity_of(self.value)

    def nilpotent_part(self) -> SuperPoly:
        return SuperPoly._make(self.value.sig, {k: v for k, v in self.value.terms.items()
                                                if k != self.algebra.unit_key})

    def __add__(self, other):
        if isinstance(other, (int, Fraction, float)):
            other = self.algebra.constant(other)
        self._check(other)
        return JetElement(self.algebra, self.value + other.value, self.exact and other.exact)

    __radd__ = __add__

    def __neg__(self):
        return JetElement(self.algebra, -self.value, self.exact)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, float)):
            exact = self.exact and not isinstance(other, float)
            return JetElement(self.algebra, self.value.scale(Fraction(other)), exact)
        self._check(other)
        return JetElement(self.algebra, self.algebra.quotient.mul(self.value, other.value),
                          self.exact and other.exact)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, JetElement):
            return NotImplemented
        return self.algebra.same_as(other.algebra) and self.value == other.value

    __hash__ = None

    def __repr__(self):
        return f"JetElement({self.format()!r})"

    def format(self, names=None) -> str:
        from .superpoly import _format_mono
        parts = []
        for b, c in self.coefficients.items():
            neg = c < 0
            text = _fmt_value(-c if neg else c)
            mono = _format_mono(b.key, names)
            body = f"{text}*{mono}" if mono else text
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts) or "0"

    def to_json(self) -> dict:
        return {"weil": self.algebra.to_json(),
                "coeffs": [{"basis": b.to_json(), "value": float(c)} for b, c in self.coefficients.items()]}


def smooth_eval_jet(e: SmoothExpr, args: Sequence[JetElement], *, algebra: RealWeilAlgebra | None = None,
                    order: int | None = None) -> JetElement:
    """Evaluate ``e`` at even jets by the truncated Taylor sum.

    ``order`` defaults to ``nil_index - 1``; larger values are allowed and
    change nothing, since the extra powers vanish.
    """
    args = list(args)
    if algebra is None:
        if not args:
            raise UserError("an algebra is required when there are no arguments")
        algebra = args[0].algebra
    for a in args:
        if not algebra.same_as(a.algebra):
            raise AlgebraMismatch("arguments live in different Weil algebras")
        if not a.value.is_homogeneous(Parity.EVEN):
            raise ParityMismatch(f"smooth functions take even arguments, got {a.format()}")
    p = len(args)
    if max_var(e) > p:
        raise UserError(f"expression uses u{max_var(e)} but only {p} arguments were given")
    exact = all(a.exact for a in args) and is_rational(e)
    Q = algebra.quotient
    unit = algebra.unit_key
    bodies = [a.value.terms.get(unit, Fraction(0)) for a in args]
    point = bodies if exact else [float(b) for b in bodies]
    nils = [a.nilpotent_part() for a in args]
    if order is None:
        order = algebra.nil_index - 1

    ders = _Derivatives(e, p)
    ev = eval_exact if exact else eval_numeric
    one = SuperPoly.one(algebra.sig)
    powers = {(0,) * p: Q.nf(one)}
    acc: dict = {}
    for alpha in multi_indices(p, order):
        if any(alpha):
            i = next(k for k, a in enumerate(alpha) if a)
            parent = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
            prev = powers.get(parent)
            mono = Q.mul(prev, nils[i]) if prev else prev
            powers[alpha] = mono
            if not mono:
                continue
        else:
            mono = powers[alpha]
        value = ev(ders.expr(alpha), point)
        scale = Fraction(value) / math.prod(math.factorial(a) for a in alpha)
        for key, c in mono.terms.items():
            acc[key] = acc.get(key, 0) + scale * c
    result = SuperPoly._make(algebra.sig, {k: v for k, v in acc.items() if v})
    return JetElement(algebra, result, exact)


# ---------------------------------------------------------------- Berezin algebra

@dataclass(frozen=True)
class SuperFunction:
    """``sum_I F_I(x) xi^I`` with smooth coefficients; keys are ascending odd index tuples."""

    sig: Signature
    components: dict

    def __post_init__(self):
        sig = Signature(*self.sig)
        object.__setattr__(self, "sig", sig)
        for odd, expr in self.components.items():
            if any(b <= a for a, b in zip(odd, odd[1:])) or any(i < 1 or i > sig.n for i in odd):
                raise UserError(f"bad odd index set {odd} for {sig}")
            if max_var(expr) > sig.m:
                raise UserError(f"component uses u{max_var(expr)} but only {sig.m} even variables exist")

    @classmethod
    def from_superpoly(cls, f: SuperPoly) -> "SuperFunction":
        comps: dict = {}
        for (exps, mask), c in f.terms.items():
            comps.setdefault(mask, {})[(exps, 0)] = c
        sig = f.sig
        return cls(sig, {odd_indices(m): expr_from_poly(SuperPoly._make(Signature(sig.m, 0), t))
                         for m, t in sorted(comps.items())})

    def is_homogeneous(self) -> bool:
        return len({len(i) % 2 for i in self.components}) <= 1


def berezin_eval(F: SuperFunction, even_args: Sequence[JetElement], odd_args: Sequence[JetElement],
                 *, algebra: RealWeilAlgebra | None = None) -> JetElement:
    """``sum_I F_I(g) * gamma^{i1} ... gamma^{ik}`` over increasing ``I``."""
    even_args, odd_args = list(even_args), list(odd_args)
    if len(even_args) != F.sig.m or len(odd_args) != F.sig.n:
        raise UserError(f"need {F.sig.m} even and {F.sig.n} odd arguments")
    if algebra is None:
        if not (even_args or odd_args):
            raise UserError("an algebra is required when there are no arguments")
        algebra = (even_args + odd_args)[0].algebra
    for g in odd_args:
        if not algebra.same_as(g.algebra):
            raise AlgebraMismatch("arguments live in different Weil algebras")
        if not g.value.is_homogeneous(Parity.ODD):
            raise ParityMismatch(f"odd argument expected, got {g.format()}")
    total = JetElement(algebra, SuperPoly.zero(algebra.sig), all(g.exact for g in odd_args + even_args))
    for odd, expr in sorted(F.components.items(), key=lambda kv: mask_of(kv[0])):
        prod = JetElement(algebra, algebra.quotient.nf(SuperPoly.one(algebra.sig)), True)
        for i in odd:
            prod = prod * odd_args[i - 1]
        if not prod.value:
            continue
        val = smooth_eval_jet(expr, even_args, algebra=algebra)
        total = total + val * prod
    return total


__all__ = [
    "SmoothExpr", "Const", "Var", "Sum", "Product", "Power", "Neg", "Recip", "Call",
    "s_add", "s_sub", "s_mul", "s_neg", "s_pow", "s_recip", "s_call", "const",
    "diff", "eval_numeric", "eval_exact", "taylor_multi_index_table", "multi_indices",
    "RealWeilAlgebra", "JetElement", "smooth_eval_jet", "SuperFunction", "berezin_eval",
    "expr_from_poly", "to_text", "is_rational", "max_var",
]
