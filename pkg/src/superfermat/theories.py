"""Free algebras, morphisms as substitution data, and finite presentations.

Morphisms are stored as algebra maps ``SE(p|q) -> SE(m|n)``: one even image
per even generator and one odd image per odd generator of the source.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .errors import (NotFiniteDimensional, OddGeneratorPresent, ParityMismatch,
                     SignatureMismatch, TheoryMismatch, UserError)
from .ideals import HomogeneousIdeal, QuotientAlgebra, order_key
from .superpoly import Parity, Signature, SuperPoly, generators, substitute


class TheoryTag(enum.Enum):
    POLY = "Poly"
    SMOOTH = "Smooth"


@dataclass(frozen=True)
class FreeAlgebra:
    theory: TheoryTag
    sig: Signature

    def generators(self):
        return generators(self.sig)


@dataclass(frozen=True)
class SuperMorphism:
    source: Signature
    target: Signature
    even_images: tuple
    odd_images: tuple

    def __init__(self, source, target, even_images: Sequence[SuperPoly], odd_images: Sequence[SuperPoly]):
        source, target = Signature(*source), Signature(*target)
        even_images, odd_images = tuple(even_images), tuple(odd_images)
        if len(even_images) != source.m or len(odd_images) != source.n:
            raise SignatureMismatch(f"a morphism from {source} needs {source.m} even and {source.n} odd images")
        for k, img in enumerate(even_images + odd_images):
            if img.sig != target:
                raise SignatureMismatch(f"image {img} is not over {target}")
        for k, img in enumerate(even_images, 1):
            if not img.is_homogeneous(Parity.EVEN):
                raise ParityMismatch(f"image of x{k} must be even: {img}")
        for k, img in enumerate(odd_images, 1):
            if not img.is_homogeneous(Parity.ODD):
                raise ParityMismatch(f"image of xi{k} must be odd: {img}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "even_images", even_images)
        object.__setattr__(self, "odd_images", odd_images)

    def __call__(self, f: SuperPoly) -> SuperPoly:
        if f.sig != self.source:
            raise SignatureMismatch(f"{f.sig} is not the source {self.source}")
        return substitute(f, self.even_images, self.odd_images, target=self.target)


def identity_morphism(sig) -> SuperMorphism:
    sig = Signature(*sig)
    evens, odds = generators(sig)
    return SuperMorphism(sig, sig, evens, odds)


def compose(f: SuperMorphism, g: SuperMorphism) -> SuperMorphism:
    """``g`` after ``f``: apply ``f``, then ``g``."""
    if f.target != g.source:
        raise SignatureMismatch(f"cannot compose: {f.target} != {g.source}")
    return SuperMorphism(f.source, g.target, [g(img) for img in f.even_images],
                         [g(img) for img in f.odd_images])


def coproduct_free(a, b) -> tuple[Signature, SuperMorphism, SuperMorphism]:
    a, b = Signature(*a), Signature(*b)
    sig = Signature(a.m + b.m, a.n + b.n)
    inl = SuperMorphism(a, sig, [SuperPoly.even_gen(sig, i) for i in range(1, a.m + 1)],
                        [SuperPoly.odd_gen(sig, j) for j in range(1, a.n + 1)])
    inr = SuperMorphism(b, sig, [SuperPoly.even_gen(sig, a.m + i) for i in range(1, b.m + 1)],
                        [SuperPoly.odd_gen(sig, a.n + j) for j in range(1, b.n + 1)])
    return sig, inl, inr


def cotuple(u: SuperMorphism, v: SuperMorphism) -> SuperMorphism:
    """The unique map out of the coproduct restricting to ``u`` and ``v``."""
    if u.target != v.target:
        raise SignatureMismatch("cotuple needs a common target")
    sig, _, _ = coproduct_free(u.source, v.source)
    return SuperMorphism(sig, u.target, u.even_images + v.even_images, u.odd_images + v.odd_images)


def reduce_morphism(f: SuperMorphism) -> SuperMorphism:
    """Odd images set to zero, odd generators dropped, odd variables sent to zero."""
    src, tgt = Signature(f.source.m, 0), Signature(f.target.m, 0)
    return SuperMorphism(src, tgt, [_kill_odd(img, tgt) for img in f.even_images], [])


def _kill_odd(f: SuperPoly, sig: Signature) -> SuperPoly:
    return SuperPoly._make(sig, {k: v for k, v in f.terms.items() if not k[1]})


@dataclass(frozen=True)
class FinitePresentation:
    sig: Signature
    relations: HomogeneousIdeal
    theory: TheoryTag = TheoryTag.POLY

    @classmethod
    def of(cls, sig, relations: Sequence[SuperPoly] = (), theory=TheoryTag.POLY) -> "FinitePresentation":
        sig = Signature(*sig)
        return cls(sig, HomogeneousIdeal(sig, relations), TheoryTag(theory))

    @classmethod
    def free(cls, sig) -> "FinitePresentation":
        return cls.of(sig)

    @classmethod
    def terminal(cls) -> "FinitePresentation":
        """The zero algebra, presented by the relation 1 = 0."""
        sig = Signature(0, 0)
        return cls.of(sig, [SuperPoly.one(sig)])

    def quotient(self) -> QuotientAlgebra:
        _require_poly(self)
        return QuotientAlgebra(self.relations)

    def to_json(self) -> dict:
        return {"theory": self.theory.value, "sig": [self.sig.m, self.sig.n],
                "relations": [r.to_json() for r in self.relations.generators]}

    @classmethod
    def from_json(cls, data) -> "FinitePresentation":
        try:
            sig = Signature.of(*data["sig"])
            rels = [SuperPoly.from_json(r) for r in data.get("relations", [])]
            theory = TheoryTag(data.get("theory", "Poly"))
        except (KeyError, TypeError, ValueError) as exc:
            raise UserError(f"malformed presentation JSON: {exc}") from None
        return cls.of(sig, rels, theory)


def _require_poly(*pres: FinitePresentation):
    for p in pres:
        if p.theory is not TheoryTag.POLY:
            raise TheoryMismatch("only the polynomial theory has effective presentations")


def product_algebra(a: FinitePresentation, b: FinitePresentation) -> FinitePresentation:
    """Presentation of ``A x B``.

    Generators: those of A, then those of B, then idempotents ``e_a, e_b``
    (the last two even generators).  Relations: ``e_a + e_b = 1``,
    ``e_a e_b = 0``, ``e_a`` kills B's generators, ``e_b`` kills A's, and each
    factor's relations multiplied by its idempotent.
    """
    if a.theory != b.theory:
        raise TheoryMismatch("factors belong to different theories")
    sa, sb = a.sig, b.sig
    sig = Signature(sa.m + sb.m + 2, sa.n + sb.n)
    ea = SuperPoly.even_gen(sig, sig.m - 1)
    eb = SuperPoly.even_gen(sig, sig.m)
    _, inl, inr = coproduct_free(sa, sb)
    pad_l = _pad(inl, sig)
    pad_r = _pad(inr, sig)
    a_gens = [SuperPoly.even_gen(sig, i) for i in range(1, sa.m + 1)] + \
             [SuperPoly.odd_gen(sig, j) for j in range(1, sa.n + 1)]
    b_gens = [SuperPoly.even_gen(sig, sa.m + i) for i in range(1, sb.m + 1)] + \
             [SuperPoly.odd_gen(sig, sa.n + j) for j in range(1, sb.n + 1)]
    rels = [ea + eb - 1, ea * eb]
    rels += [ea * g for g in b_gens]
    rels += [eb * g for g in a_gens]
    rels += [ea * pad_l(r) for r in a.relations.generators]
    rels += [eb * pad_r(r) for r in b.relations.generators]
    return FinitePresentation.of(sig, rels, a.theory)


def _pad(inc: SuperMorphism, sig: Signature):
    """Compose an inclusion into the coproduct with the inclusion into ``sig``."""
    evens = [SuperPoly._make(sig, {(e + (0, 0), m): c for (e, m), c in img.terms.items()})
             for img in inc.even_images]
    odds = [SuperPoly._make(sig, {(e + (0, 0), m): c for (e, m), c in img.terms.items()})
            for img in inc.odd_images]
    return SuperMorphism(inc.source, sig, evens, odds)


def iota_lower_shriek(a: FinitePresentation) -> FinitePresentation:
    """View an even-only presentation as a superalgebra with zero odd part."""
    if a.sig.n:
        raise OddGeneratorPresent(f"presentation has {a.sig.n} odd generators")
    return a


def reduce_rd(a: FinitePresentation) -> FinitePresentation:
    """``A / (A_1)``: odd generators set to zero and dropped."""
    sig = Signature(a.sig.m, 0)
    rels = [_kill_odd(r, sig) for r in a.relations.generators]
    return FinitePresentation.of(sig, [r for r in rels if r], a.theory)


def _finite(pres: FinitePresentation, label: str) -> QuotientAlgebra:
    Q = pres.quotient()
    if Q.basis_cache is None:
        raise NotFiniteDimensional(f"{label} is infinite-dimensional")
    return Q


def check_product_preservation(a: FinitePresentation, b: FinitePresentation) -> bool:
    """Is ``(A x B)_rd`` isomorphic to ``A_rd x B_rd``?

    Both sides are presented on the same generators (those of A and B plus
    the two idempotents), so the identity on generators is the candidate
    isomorphism.  It is one exactly when both quotients have the same
    staircase basis and identical structure constants on it.
    """
    _require_poly(a, b)
    for pres, label in ((a, "A"), (b, "B")):
        _finite(pres, label)
    lhs = _finite(reduce_rd(product_algebra(a, b)), "(A x B)_rd")
    rhs = _finite(product_algebra(reduce_rd(a), reduce_rd(b)), "A_rd x B_rd")
    if lhs.sig != rhs.sig or lhs.basis_cache != rhs.basis_cache:
        return False
    if lhs.dimension != _finite(reduce_rd(a), "A_rd").dimension + _finite(reduce_rd(b), "B_rd").dimension:
        return False
    # the identity on generators must respect both relation sets
    if any(lhs.nf(r) for r in rhs.ideal.generators) or any(rhs.nf(r) for r in lhs.ideal.generators):
        return False
    return lhs.structure_constants() == rhs.structure_constants()


def structure_table(Q: QuotientAlgebra) -> list[list[dict]]:
    """Dense structure constants ``c[i][j] = {k: coef}`` on the staircase basis."""
    basis = Q.basis_cache
    if basis is None:
        raise NotFiniteDimensional("quotient is infinite-dimensional")
    index = {b.key: k for k, b in enumerate(basis)}
    table = []
    consts = Q.structure_constants()
    for bi in basis:
        row = []
        for bj in basis:
            prod = consts[(bi, bj)]
            row.append({index[key]: c for key, c in sorted(prod.terms.items(), key=lambda kv: order_key(kv[0]))})
        table.append(row)
    return table


def even_dimension(Q: QuotientAlgebra) -> int:
    basis = Q.basis_cache
    if basis is None:
        raise NotFiniteDimensional("quotient is infinite-dimensional")
    return sum(1 for b in basis if b.parity == Parity.EVEN)


def odd_dimension(Q: QuotientAlgebra) -> int:
    basis = Q.basis_cache
    if basis is None:
        raise NotFiniteDimensional("quotient is infinite-dimensional")
    return sum(1 for b in basis if b.parity == Parity.ODD)


__all__ = [
    "TheoryTag", "FreeAlgebra", "SuperMorphism", "FinitePresentation", "identity_morphism",
    "compose", "coproduct_free", "cotuple", "reduce_morphism", "product_algebra",
    "iota_lower_shriek", "reduce_rd", "check_product_preservation", "structure_table",
    "even_dimension", "odd_dimension",
]
