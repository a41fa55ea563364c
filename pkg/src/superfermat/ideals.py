"""Homogeneous ideals of Q[x; xi], Groebner normal forms and quotient algebras.

Q[x; xi] is a free Q[x]-module with one basis vector per odd subset I.  A
homogeneous two-sided ideal is the submodule spanned by ``g * xi^J`` over
its generators ``g`` and all subsets ``J``, so a module Buchberger over the
commutative ring Q[x] gives normal forms.  Monomials ``x^a xi^I`` are
compared position-over-term: first the position ``(|I|, bitmask of I)``,
then grevlex on ``a``.
"""
from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

from . import kernels
from ._linalg import RowSpace
from .errors import (GroebnerStepLimit, InhomogeneousRelation, NoAugmentation,
                     NotFiniteDimensional, SignatureMismatch)
from .superpoly import Signature, SuperMonomial, SuperPoly, generators, odd_indices

DEFAULT_MAX_STEPS = 100_000
ORDER_NAME = "pot(|I|,mask)>grevlex"


@lru_cache(maxsize=1 << 18)
def order_key(key):
    """Sort key realizing the module monomial order (larger is bigger)."""
    exps, mask = key
    return (mask.bit_count(), mask, sum(exps), tuple(-e for e in reversed(exps)))


def leading_key(terms: dict):
    return max(terms, key=order_key)


def _divides(small, big) -> bool:
    return all(a <= b for a, b in zip(small, big))


def max_steps_from_env() -> int:
    raw = os.environ.get("SUPERFERMAT_MAX_GB_STEPS", "")
    try:
        return int(raw) if raw.strip() else DEFAULT_MAX_STEPS
    except ValueError:
        return DEFAULT_MAX_STEPS


@dataclass(frozen=True)
class HomogeneousIdeal:
    sig: Signature
    generators: tuple

    def __init__(self, sig, gens: Sequence[SuperPoly] = ()):
        sig = Signature(*sig)
        kept = []
        for k, g in enumerate(gens):
            if g.sig != sig:
                raise SignatureMismatch(f"relation {g} is over {g.sig}, expected {sig}")
            if not g.is_homogeneous():
                raise InhomogeneousRelation(f"relation {k + 1} is not parity-homogeneous: {g}", g)
            if g:
                kept.append(g)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "generators", tuple(kept))


class _Reducer:
    """Leading-monomial index over a list of monic module elements."""

    def __init__(self):
        self.by_mask: dict[int, list] = {}

    def add(self, lm, terms):
        self.by_mask.setdefault(lm[1], []).append((lm[0], terms))

    def find(self, key):
        exps, mask = key
        for lexps, terms in self.by_mask.get(mask, ()):
            if _divides(lexps, exps):
                return lexps, terms
        return None

    def normal_form(self, terms: dict, *, full: bool = True) -> dict:
        f = dict(terms)
        rem = {}
        while f:
            lm = max(f, key=order_key)
            hit = self.find(lm)
            if hit is None:
                if not full:
                    rem.update(f)
                    return rem
                rem[lm] = f.pop(lm)
                continue
            lexps, g = hit
            shift = tuple(a - b for a, b in zip(lm[0], lexps))
            kernels.submul_terms(f, g, f[lm], shift)
        return rem


def _monic(terms: dict) -> dict:
    c = terms[leading_key(terms)]
    if c == 1:
        return terms
    inv = 1 / c
    return {k: v * inv for k, v in terms.items()}


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis, sorted by leading monomial (largest first)."""

    sig: Signature
    generators: list
    order: str = ORDER_NAME
    _reducer: _Reducer = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.sig = Signature(*self.sig)
        red = _Reducer()
        for g in self.generators:
            red.add(leading_key(g.terms), g.terms)
        self._reducer = red

    def leading_monomials(self) -> list[SuperMonomial]:
        return [SuperMonomial.from_key(leading_key(g.terms)) for g in self.generators]

    def is_unit(self) -> bool:
        """True when the ideal contains 1 (the quotient is the zero algebra)."""
        return any(g.terms.keys() == {((0,) * self.sig.m, 0)} for g in self.generators)


def saturate_odd(ideal: HomogeneousIdeal) -> list[SuperPoly]:
    """The Q[x]-module generators ``g * xi^J`` of the two-sided ideal."""
    sig = ideal.sig
    out, seen = [], set()
    zero = (0,) * sig.m
    for g in ideal.generators:
        for mask in range(1 << sig.n):
            t = kernels.mul_terms(g.terms, {(zero, mask): Fraction(1)})
            if not t:
                continue
            p = SuperPoly._make(sig, t)
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


def groebner(ideal: HomogeneousIdeal, max_steps: int | None = None) -> GroebnerBasis:
    """Reduced module Groebner basis of the ideal (Buchberger, normal strategy).

    Pairs are only formed between elements whose leading monomials share a
    position.  Buchberger's chain criterion prunes pairs; the coprime
    criterion is not valid for modules and is not used.
    """
    if max_steps is None:
        max_steps = max_steps_from_env()
    sig = ideal.sig
    basis: list[dict] = []
    lms: list = []
    red = _Reducer()
    pending: set = set()
    heap: list = []

    def lcm_of(i, j):
        return tuple(max(a, b) for a, b in zip(lms[i][0], lms[j][0]))

    def insert(terms):
        terms = _monic(terms)
        idx = len(basis)
        lm = leading_key(terms)
        basis.append(terms)
        lms.append(lm)
        red.add(lm, terms)
        for i in range(idx):
            if lms[i][1] == lm[1]:
                pending.add((i, idx))
                lcm = lcm_of(i, idx)
                heapq.heappush(heap, (order_key((lcm, lm[1])), i, idx))

    for g in saturate_odd(ideal):
        r = red.normal_form(g.terms)
        if r:
            insert(r)

    steps = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        lcm = lcm_of(i, j)
        mask = lms[i][1]
        if _chain_redundant(i, j, lcm, mask, lms, pending):
            continue
        steps += 1
        if steps > max_steps:
            raise GroebnerStepLimit(f"Buchberger exceeded {max_steps} S-pair reductions")
        s: dict = {}
        kernels.submul_terms(s, basis[i], Fraction(-1), tuple(a - b for a, b in zip(lcm, lms[i][0])))
        kernels.submul_terms(s, basis[j], Fraction(1), tuple(a - b for a, b in zip(lcm, lms[j][0])))
        r = red.normal_form(s)
        if r:
            insert(r)

    return GroebnerBasis(sig, [SuperPoly._make(sig, t) for t in _interreduce(basis)])


def _chain_redundant(i, j, lcm, mask, lms, pending) -> bool:
    for k, (kexps, kmask) in enumerate(lms):
        if k == i or k == j or kmask != mask:
            continue
        if not _divides(kexps, lcm):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _interreduce(basis: list[dict]) -> list[dict]:
    items = sorted(((leading_key(t), t) for t in basis), key=lambda p: order_key(p[0]))
    minimal = []
    for lm, t in items:
        if any(m[1] == lm[1] and _divides(m[0], lm[0]) for m, _ in minimal):
            continue
        minimal.append((lm, t))
    out = []
    for idx, (lm, t) in enumerate(minimal):
        red = _Reducer()
        for k, (lm2, t2) in enumerate(minimal):
            if k != idx:
                red.add(lm2, t2)
        tail = dict(t)
        lead = tail.pop(lm)
        reduced = red.normal_form(tail)
        reduced[lm] = lead
        out.append(_monic(reduced))
    out.sort(key=lambda t: order_key(leading_key(t)), reverse=True)
    return out


def normal_form(f: SuperPoly, G: GroebnerBasis) -> SuperPoly:
    if f.sig != G.sig:
        raise SignatureMismatch(f"{f.sig} vs {G.sig}")
    return SuperPoly._make(f.sig, G._reducer.normal_form(f.terms))


def ideal_member(f: SuperPoly, ideal: HomogeneousIdeal) -> bool:
    if f.sig != ideal.sig:
        raise SignatureMismatch(f"{f.sig} vs {ideal.sig}")
    return not normal_form(f, groebner(ideal))


class QuotientAlgebra:
    """``Q[x; xi] / I`` with elements represented by normal forms."""

    def __init__(self, ideal: HomogeneousIdeal, gb: GroebnerBasis | None = None):
        self.ideal = ideal
        self.sig = ideal.sig
        self._gb = gb
        self._basis = False

    @classmethod
    def free(cls, sig) -> "QuotientAlgebra":
        return cls(HomogeneousIdeal(sig, ()))

    @property
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = groebner(self.ideal)
        return self._gb

    @property
    def basis_cache(self):
        if self._basis is False:
            self._basis = staircase_basis(self)
        return self._basis

    def nf(self, f: SuperPoly) -> SuperPoly:
        return normal_form(f, self.gb)

    def add(self, a: SuperPoly, b: SuperPoly) -> SuperPoly:
        return self.nf(a + b)

    def mul(self, a: SuperPoly, b: SuperPoly) -> SuperPoly:
        return quotient_mul(a, b, self)

    def equal(self, a: SuperPoly, b: SuperPoly) -> bool:
        return not self.nf(a - b)

    @property
    def dimension(self) -> int | None:
        basis = self.basis_cache
        return None if basis is None else len(basis)

    def is_zero_algebra(self) -> bool:
        return self.gb.is_unit()

    def structure_constants(self) -> dict:
        """``{(b_i, b_j): normal form of b_i * b_j}`` over the staircase basis."""
        basis = self.basis_cache
        if basis is None:
            raise NotFiniteDimensional("quotient is infinite-dimensional")
        polys = [SuperPoly._make(self.sig, {b.key: Fraction(1)}) for b in basis]
        return {(a, b): self.mul(pa, pb) for a, pa in zip(basis, polys) for b, pb in zip(basis, polys)}


def quotient_mul(a: SuperPoly, b: SuperPoly, Q: QuotientAlgebra) -> SuperPoly:
    a, b = Q.nf(a), Q.nf(b)
    return Q.nf(a * b)


def staircase_basis(Q: QuotientAlgebra) -> list[SuperMonomial] | None:
    """Monomials outside the leading-monomial module, or ``None`` if infinitely many.

    Returned in increasing monomial order, so ``1`` (when present) comes first.
    """
    G = Q.gb
    sig = Q.sig
    by_mask: dict[int, list] = {}
    for lm in G.leading_monomials():
        by_mask.setdefault(lm.key[1], []).append(lm.even)
    out = []
    for mask in range(1 << sig.n):
        lead = by_mask.get(mask, [])
        if any(not any(e) for e in lead):
            continue
        bounds = []
        for i in range(sig.m):
            pure = [e[i] for e in lead if e[i] and all(not v for k, v in enumerate(e) if k != i)]
            if not pure:
                return None
            bounds.append(min(pure))
        for exps in product(*(range(b) for b in bounds)):
            if not any(_divides(e, exps) for e in lead):
                out.append((exps, mask))
    out.sort(key=order_key)
    return [SuperMonomial.from_key(k) for k in out]


def augmentation_nilpotency(Q: QuotientAlgebra) -> int | None:
    """Smallest ``k`` with ``m^k = 0`` for the ideal ``m`` generated by all generators.

    Returns ``None`` when the powers of ``m`` stabilize at a nonzero space
    (not a Weil algebra).
    """
    basis = Q.basis_cache
    if basis is None:
        raise NotFiniteDimensional("quotient is infinite-dimensional")
    if not basis:
        raise NoAugmentation("1 lies in the ideal; the quotient is the zero algebra")
    evens, odds = generators(Q.sig)
    gens = [Q.nf(g) for g in evens + odds]
    span = RowSpace(order_key)
    for b in basis:
        bp = SuperPoly._make(Q.sig, {b.key: Fraction(1)})
        for g in gens:
            span.add(Q.nf(g * bp).terms)
    k = 1
    current = span
    while len(current):
        nxt = RowSpace(order_key)
        for row in current.basis():
            v = SuperPoly._make(Q.sig, row)
            for g in gens:
                nxt.add(Q.nf(v * g).terms)
        if len(nxt) == len(current):
            return None
        current = nxt
        k += 1
    return k


def monomial_poly(sig, mono: SuperMonomial, coef=1) -> SuperPoly:
    return SuperPoly(sig, {mono.key: coef})


__all__ = [
    "HomogeneousIdeal", "GroebnerBasis", "QuotientAlgebra", "saturate_odd", "groebner",
    "normal_form", "ideal_member", "quotient_mul", "staircase_basis",
    "augmentation_nilpotency", "order_key", "odd_indices", "monomial_poly",
]
