"""Difference quotients and derivatives on free superalgebras.

``diff_quotient_even`` solves ``f(x) - f(y) = (x - y) * q`` exactly.  The new
variable ``y`` is inserted directly after ``x`` in the even generators, so
the indices of later even generators shift by one.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import SignatureMismatch, UserError
from .superpoly import Parity, Signature, SuperPoly, substitute


@dataclass(frozen=True)
class VariableRef:
    parity: Parity
    index: int  # 1-based

    @classmethod
    def even(cls, i: int) -> "VariableRef":
        return cls(Parity.EVEN, i)

    @classmethod
    def odd(cls, j: int) -> "VariableRef":
        return cls(Parity.ODD, j)

    @classmethod
    def parse(cls, name: str) -> "VariableRef":
        m = re.fullmatch(r"(xi|x)([1-9][0-9]*)", name.strip())
        if not m:
            raise UserError(f"not a generator name: {name!r}")
        return cls(Parity.ODD if m.group(1) == "xi" else Parity.EVEN, int(m.group(2)))

    def check(self, sig: Signature, parity: Parity | None = None):
        if parity is not None and self.parity != parity:
            raise UserError(f"{self} is {self.parity}; expected an {parity} variable")
        bound = sig.m if self.parity == Parity.EVEN else sig.n
        if not 1 <= self.index <= bound:
            raise SignatureMismatch(f"{self} not in signature {sig}")

    def __str__(self):
        return f"{'x' if self.parity == Parity.EVEN else 'xi'}{self.index}"


def _as_ref(var, parity: Parity) -> VariableRef:
    if isinstance(var, VariableRef):
        return var
    if isinstance(var, str):
        return VariableRef.parse(var)
    return VariableRef(parity, int(var))


def diff_quotient_even(f: SuperPoly, x) -> SuperPoly:
    """Unique ``q`` over ``(m+1|n)`` with ``f(x,z,xi) - f(y,z,xi) = (x - y) q``.

    Each term ``c x^k r`` contributes ``c r sum_{i+j=k-1} x^i y^j``.
    """
    x = _as_ref(x, Parity.EVEN)
    x.check(f.sig, Parity.EVEN)
    pos = x.index - 1
    sig = Signature(f.sig.m + 1, f.sig.n)
    out: dict = {}
    for (e, mask), c in f.terms.items():
        k = e[pos]
        if not k:
            continue
        head, tail = e[:pos], e[pos + 1:]
        for i in range(k):
            key = (head + (i, k - 1 - i) + tail, mask)
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                del out[key]
    return SuperPoly._make(sig, out)


def _embedding(sig: Signature, x: VariableRef, *, at_y: bool) -> tuple[list, list]:
    """Images of the generators of ``sig`` inside the extended signature.

    ``x`` goes to x (or to y when ``at_y``); other generators keep their role.
    """
    ext = Signature(sig.m + 1, sig.n)
    evens = []
    for i in range(1, sig.m + 1):
        if i < x.index:
            evens.append(SuperPoly.even_gen(ext, i))
        elif i == x.index:
            evens.append(SuperPoly.even_gen(ext, i + 1 if at_y else i))
        else:
            evens.append(SuperPoly.even_gen(ext, i + 1))
    odds = [SuperPoly.odd_gen(ext, j) for j in range(1, sig.n + 1)]
    return evens, odds


def diagonal(q: SuperPoly, x) -> SuperPoly:
    """Set the fresh variable ``y`` (right after ``x``) equal to ``x``."""
    x = _as_ref(x, Parity.EVEN)
    m = q.sig.m - 1
    if m < 0:
        raise SignatureMismatch("no fresh variable to collapse")
    base = Signature(m, q.sig.n)
    x.check(base, Parity.EVEN)
    evens = []
    for i in range(1, q.sig.m + 1):
        if i <= x.index:
            evens.append(SuperPoly.even_gen(base, i))
        else:
            evens.append(SuperPoly.even_gen(base, i - 1))
    odds = [SuperPoly.odd_gen(base, j) for j in range(1, base.n + 1)]
    return substitute(q, evens, odds, target=base)


def partial_even(f: SuperPoly, x) -> SuperPoly:
    """``d f / d x`` obtained from the difference quotient on the diagonal."""
    x = _as_ref(x, Parity.EVEN)
    return diagonal(diff_quotient_even(f, x), x)


def odd_split(f: SuperPoly, eta) -> tuple[SuperPoly, SuperPoly]:
    """Write ``f = h + eta * g`` with ``h``, ``g`` free of ``eta``.

    ``g`` is the left derivative: a term whose ``eta`` sits in position ``k``
    of its ordered odd word picks up ``(-1)^(k-1)`` when ``eta`` moves to the front.
    """
    eta = _as_ref(eta, Parity.ODD)
    eta.check(f.sig, Parity.ODD)
    bit = 1 << (eta.index - 1)
    below = bit - 1
    h, g = {}, {}
    for (e, mask), c in f.terms.items():
        if mask & bit:
            sign = -1 if (mask & below).bit_count() & 1 else 1
            g[(e, mask ^ bit)] = sign * c
        else:
            h[(e, mask)] = c
    return SuperPoly._make(f.sig, h), SuperPoly._make(f.sig, g)


def partial_odd(f: SuperPoly, eta) -> SuperPoly:
    return odd_split(f, eta)[1]


def check_fermat_even(f: SuperPoly, x) -> bool:
    """Verify ``(x - y) * dq + f(y) == f(x)`` in the extended signature."""
    x = _as_ref(x, Parity.EVEN)
    q = diff_quotient_even(f, x)
    ext = q.sig
    fx = substitute(f, *_embedding(f.sig, x, at_y=False), target=ext)
    fy = substitute(f, *_embedding(f.sig, x, at_y=True), target=ext)
    x_minus_y = SuperPoly.even_gen(ext, x.index) - SuperPoly.even_gen(ext, x.index + 1)
    return x_minus_y * q + fy == fx


def taylor_coefficients(f: SuperPoly, x, order: int) -> list[SuperPoly]:
    """``[f, df/dx, ..., d^k f/dx^k]``; no factorials are divided out."""
    if order < 0:
        raise UserError("order must be non-negative")
    x = _as_ref(x, Parity.EVEN)
    out = [f]
    for _ in range(order):
        out.append(partial_even(out[-1], x))
    return out

