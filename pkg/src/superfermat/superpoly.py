"""Sparse elements of the free supercommutative algebra Q[x1..xm; xi1..xin].

A :class:`SuperPoly` stores its terms as ``{(exponents, oddmask): Fraction}``.
Odd generators inside a monomial are kept in ascending order; every
constructor applies the sign of the sorting permutation, so two equal
elements always have identical term dicts.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from . import kernels
from .coeff import rat
from .errors import ParityMismatch, SignatureMismatch, UserError


class Parity(enum.IntEnum):
    EVEN = 0
    ODD = 1

    def __add__(self, other):
        return Parity((int(self) + int(other)) % 2)

    def __str__(self):
        return self.name.lower()


class Signature(NamedTuple):
    """Number of even (``m``) and odd (``n``) generators."""

    m: int
    n: int

    @classmethod
    def of(cls, m: int, n: int) -> "Signature":
        if m < 0 or n < 0:
            raise UserError(f"signature counts must be non-negative, got ({m}|{n})")
        return cls(int(m), int(n))

    @classmethod
    def parse(cls, text: str) -> "Signature":
        try:
            m, n = (int(p) for p in text.replace("|", ",").split(","))
        except ValueError:
            raise UserError(f"bad signature {text!r}; expected 'm,n'") from None
        return cls.of(m, n)

    def __str__(self):
        return f"({self.m}|{self.n})"


def mask_of(odd: Iterable[int]) -> int:
    mask = 0
    for i in odd:
        mask |= 1 << (i - 1)
    return mask


def odd_indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def sort_odd(odd: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort a word in odd generators; returns (sign, sorted) with sign 0 on repeats."""
    if len(set(odd)) != len(odd):
        return 0, ()
    inversions = sum(1 for i in range(len(odd)) for j in range(i + 1, len(odd)) if odd[i] > odd[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(odd))


def grevlex_key(exps: tuple[int, ...]):
    """Larger key means larger monomial in graded reverse lexicographic order."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def display_key(key):
    """Printing order: grevlex descending on even part, then odd bitmask ascending."""
    exps, mask = key
    deg, rev = grevlex_key(exps)
    return (-deg, tuple(-r for r in rev), mask)


@dataclass(frozen=True, order=True)
class SuperMonomial:
    even: tuple[int, ...]
    odd: tuple[int, ...] = ()

    def __post_init__(self):
        if any(e < 0 for e in self.even):
            raise UserError("negative exponent")
        if any(b <= a for a, b in zip(self.odd, self.odd[1:])):
            raise UserError(f"odd indices must be strictly increasing, got {self.odd}")
        if self.odd and self.odd[0] < 1:
            raise UserError("odd indices are 1-based")

    @classmethod
    def from_key(cls, key) -> "SuperMonomial":
        exps, mask = key
        return cls(tuple(exps), odd_indices(mask))

    @property
    def key(self):
        return (self.even, mask_of(self.odd))

    @property
    def parity(self) -> Parity:
        return Parity(len(self.odd) % 2)

    def to_json(self) -> dict:
        return {"even": list(self.even), "odd": list(self.odd)}

    @classmethod
    def from_json(cls, data) -> "SuperMonomial":
        return cls(tuple(int(e) for e in data["even"]), tuple(int(i) for i in data.get("odd", ())))

    def format(self, names=None) -> str:
        return _format_mono((self.even, mask_of(self.odd)), names) or "1"


def mono_mul(a: SuperMonomial, b: SuperMonomial) -> tuple[int, SuperMonomial | None]:
    """Multiply two monomials: ``(sign, product)``, or ``(0, None)`` if an odd factor repeats."""
    if len(a.even) != len(b.even):
        raise SignatureMismatch("monomials over different even counts")
    ma, mb = mask_of(a.odd), mask_of(b.odd)
    sign = kernels.odd_sign(ma, mb)
    if sign == 0:
        return 0, None
    return sign, SuperMonomial(tuple(x + y for x, y in zip(a.even, b.even)), odd_indices(ma | mb))


def default_names(sig: Signature):
    return [f"x{i}" for i in range(1, sig.m + 1)], [f"xi{j}" for j in range(1, sig.n + 1)]


def _format_mono(key, names=None) -> str:
    exps, mask = key
    if names is None:
        even_names = [f"x{i}" for i in range(1, len(exps) + 1)]
        odd_names = None
    else:
        even_names, odd_names = names
    parts = []
    for name, e in zip(even_names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    for j in odd_indices(mask):
        parts.append(odd_names[j - 1] if odd_names else f"xi{j}")
    return "*".join(parts)


class SuperPoly:
    """An element of the free supercommutative algebra over ``sig``."""

    __slots__ = ("sig", "terms")

    def __init__(self, sig: Signature, terms: Mapping | None = None):
        sig = Signature(*sig)
        clean = {}
        for key, c in (terms or {}).items():
            if isinstance(key, SuperMonomial):
                key = key.key
            exps, mask = key
            exps = tuple(exps)
            if len(exps) != sig.m or mask >> sig.n:
                raise SignatureMismatch(f"monomial {key} does not fit signature {sig}")
            c = rat(c)
            if c:
                clean[(exps, mask)] = clean.get((exps, mask), 0) + c
        self.sig = sig
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _make(cls, sig, terms) -> "SuperPoly":
        """Wrap an already canonical term dict (no copy, no checks)."""
        obj = cls.__new__(cls)
        obj.sig = sig
        obj.terms = terms
        return obj

    # constructors

    @classmethod
    def zero(cls, sig) -> "SuperPoly":
        return cls._make(Signature(*sig), {})

    @classmethod
    def const(cls, sig, c) -> "SuperPoly":
        sig = Signature(*sig)
        c = rat(c)
        return cls._make(sig, {((0,) * sig.m, 0): c} if c else {})

    @classmethod
    def one(cls, sig) -> "SuperPoly":
        return cls.const(sig, 1)

    @classmethod
    def even_gen(cls, sig, i: int) -> "SuperPoly":
        sig = Signature(*sig)
        if not 1 <= i <= sig.m:
            raise SignatureMismatch(f"even generator x{i} not in {sig}")
        exps = tuple(1 if k == i - 1 else 0 for k in range(sig.m))
        return cls._make(sig, {(exps, 0): Fraction(1)})

    @classmethod
    def odd_gen(cls, sig, j: int) -> "SuperPoly":
        sig = Signature(*sig)
        if not 1 <= j <= sig.n:
            raise SignatureMismatch(f"odd generator xi{j} not in {sig}")
        return cls._make(sig, {((0,) * sig.m, 1 << (j - 1)): Fraction(1)})

    @classmethod
    def from_terms(cls, sig, items: Iterable) -> "SuperPoly":
        """Build from ``(even_exponents, odd_word, coef)`` triples.

        ``odd_word`` may be in any order; the sorting sign is applied and
        words with a repeated odd generator contribute nothing.
        """
        sig = Signature(*sig)
        acc = {}
        for exps, odd, c in items:
            sign, odd = sort_odd(tuple(odd))
            if sign == 0:
                continue
            if any(i < 1 or i > sig.n for i in odd):
                raise SignatureMismatch(f"odd index out of range for {sig}")
            key = (tuple(exps), mask_of(odd))
            acc[key] = acc.get(key, 0) + sign * rat(c)
        return cls(sig, acc)

    # basic protocol

    def __eq__(self, other):
        if isinstance(other, SuperPoly):
            return self.sig == other.sig and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == SuperPoly.const(self.sig, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.sig, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"SuperPoly({tuple(self.sig)}, {self.format()!r})"

    def __str__(self):
        return self.format()

    def _coerce(self, other) -> "SuperPoly":
        if isinstance(other, SuperPoly):
            if other.sig != self.sig:
                raise SignatureMismatch(f"{self.sig} vs {other.sig}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return SuperPoly.const(self.sig, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return SuperPoly._make(self.sig, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise UserError("exponent must be a non-negative integer")
        result = SuperPoly.one(self.sig)
        base = self
        while k:
            if k & 1:
                result = mul(result, base)
            k >>= 1
            if k:
                base = mul(base, base)
        return result

    def scale(self, c) -> "SuperPoly":
        c = rat(c)
        if not c:
            return SuperPoly.zero(self.sig)
        return SuperPoly._make(self.sig, {k: c * v for k, v in self.terms.items()})

    # inspection

    def monomials(self) -> list[SuperMonomial]:
        return [SuperMonomial.from_key(k) for k in self.sorted_keys()]

    def sorted_keys(self):
        return sorted(self.terms, key=display_key)

    def items(self):
        """(SuperMonomial, coefficient) pairs in printing order."""
        return [(SuperMonomial.from_key(k), self.terms[k]) for k in self.sorted_keys()]

    def coefficient(self, mono: SuperMonomial) -> Fraction:
        return self.terms.get(mono.key, Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get(((0,) * self.sig.m, 0), Fraction(0))

    def is_constant(self) -> bool:
        return all(not any(e) and not m for e, m in self.terms)

    def is_even_only(self) -> bool:
        """No odd generator occurs in any term."""
        return all(m == 0 for _, m in self.terms)

    def is_homogeneous(self, parity: Parity | None = None) -> bool:
        parities = {m.bit_count() & 1 for _, m in self.terms}
        if parity is None:
            return len(parities) <= 1
        return parities <= {int(parity)}

    def degree(self) -> int:
        """Total even degree (odd generators count zero); -1 for the zero element."""
        return max((sum(e) for e, _ in self.terms), default=-1)

    # rendering

    def format(self, names=None) -> str:
        if not self.terms:
            return "0"
        out = []
        for key in self.sorted_keys():
            c = self.terms[key]
            mono = _format_mono(key, names)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def to_json(self) -> dict:
        return {
            "sig": [self.sig.m, self.sig.n],
            "terms": [
                {"even": list(e), "odd": list(odd_indices(m)), "coef": str(self.terms[(e, m)])}
                for e, m in self.sorted_keys()
            ],
        }

    @classmethod
    def from_json(cls, data) -> "SuperPoly":
        try:
            sig = Signature.of(*data["sig"])
            terms = {}
            for t in data["terms"]:
                mono = SuperMonomial.from_json(t)
                key = mono.key
                if key in terms:
                    raise UserError(f"duplicate monomial {t}")
                terms[key] = rat(str(t["coef"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise UserError(f"malformed SuperPoly JSON: {exc}") from None
        return cls(sig, terms)


def _check_sig(f: SuperPoly, g: SuperPoly):
    if f.sig != g.sig:
        raise SignatureMismatch(f"{f.sig} vs {g.sig}")


def add(f: SuperPoly, g: SuperPoly) -> SuperPoly:
    _check_sig(f, g)
    if len(f.terms) < len(g.terms):
        f, g = g, f
    out = dict(f.terms)
    for k, v in g.terms.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return SuperPoly._make(f.sig, out)


def mul(f: SuperPoly, g: SuperPoly) -> SuperPoly:
    _check_sig(f, g)
    return SuperPoly._make(f.sig, kernels.mul_terms(f.terms, g.terms))


def parity_of(f: SuperPoly) -> Parity | None:
    """Common parity of all terms; ``None`` for mixed elements.  Zero is even."""
    parities = {m.bit_count() & 1 for _, m in f.terms}
    if not parities:
        return Parity.EVEN
    if len(parities) > 1:
        return None
    return Parity(parities.pop())


def even_part(f: SuperPoly) -> SuperPoly:
    return SuperPoly._make(f.sig, {k: v for k, v in f.terms.items() if not k[1].bit_count() & 1})


def odd_part(f: SuperPoly) -> SuperPoly:
    return SuperPoly._make(f.sig, {k: v for k, v in f.terms.items() if k[1].bit_count() & 1})


@dataclass(frozen=True)
class OddDecomposition:
    """``f = sum_I f^I xi^I`` with each ``f^I`` free of odd generators.

    Keys are ascending tuples of odd indices.
    """

    sig: Signature
    components: dict

    def reassemble(self) -> SuperPoly:
        terms = {}
        for odd, comp in self.components.items():
            mask = mask_of(odd)
            for (e, m), c in comp.terms.items():
                if m:
                    raise UserError("decomposition component contains odd generators")
                terms[(e, mask)] = terms.get((e, mask), 0) + c
        return SuperPoly(self.sig, terms)


def decompose_odd(f: SuperPoly) -> OddDecomposition:
    comps: dict[int, dict] = {}
    for (e, m), c in f.terms.items():
        comps.setdefault(m, {})[(e, 0)] = c
    return OddDecomposition(
        f.sig,
        {odd_indices(m): SuperPoly._make(f.sig, t) for m, t in sorted(comps.items())},
    )


def substitute(f: SuperPoly, even_args: Sequence[SuperPoly], odd_args: Sequence[SuperPoly],
               target: Signature | None = None) -> SuperPoly:
    """Evaluate ``f(x1..xp; xi1..xiq)`` at the given elements.

    ``even_args`` must be even and ``odd_args`` odd (zero qualifies as both).
    The result lives over the arguments' common signature, or ``target``
    when there are no arguments.
    """
    even_args, odd_args = list(even_args), list(odd_args)
    if len(even_args) != f.sig.m or len(odd_args) != f.sig.n:
        raise SignatureMismatch(
            f"need {f.sig.m} even and {f.sig.n} odd arguments, got {len(even_args)} and {len(odd_args)}")
    sigs = {a.sig for a in even_args + odd_args}
    if target is not None:
        sigs.add(Signature(*target))
    if len(sigs) != 1:
        raise SignatureMismatch("arguments do not share a signature" if sigs else
                                "target signature required when there are no arguments")
    sig = sigs.pop()
    for k, a in enumerate(even_args, 1):
        if not a.is_homogeneous(Parity.EVEN):
            raise ParityMismatch(f"image of x{k} must be even, got {a}")
    for k, a in enumerate(odd_args, 1):
        if not a.is_homogeneous(Parity.ODD):
            raise ParityMismatch(f"image of xi{k} must be odd, got {a}")

    one = {((0,) * sig.m, 0): Fraction(1)}
    powers = [[one] for _ in even_args]

    def power(i, k):
        table = powers[i]
        while len(table) <= k:
            table.append(kernels.mul_terms(table[-1], even_args[i].terms))
        return table[k]

    # group by odd mask so the odd products are shared
    by_mask: dict[int, dict] = {}
    for (e, m), c in f.terms.items():
        by_mask.setdefault(m, {})[e] = c

    result: dict = {}
    for mask, comp in by_mask.items():
        odd_prod = one
        for j in odd_indices(mask):
            odd_prod = kernels.mul_terms(odd_prod, odd_args[j - 1].terms)
            if not odd_prod:
                break
        if not odd_prod:
            continue
        even_sum: dict = {}
        for e, c in comp.items():
            term = {k: c * v for k, v in one.items()}
            for i, k in enumerate(e):
                if k:
                    term = kernels.mul_terms(term, power(i, k))
                    if not term:
                        break
            for k2, v in term.items():
                even_sum[k2] = even_sum.get(k2, 0) + v
        prod = kernels.mul_terms({k: v for k, v in even_sum.items() if v}, odd_prod)
        for k2, v in prod.items():
            result[k2] = result.get(k2, 0) + v
    return SuperPoly._make(sig, {k: v for k, v in result.items() if v})


def generators(sig) -> tuple[list[SuperPoly], list[SuperPoly]]:
    sig = Signature(*sig)
    return ([SuperPoly.even_gen(sig, i) for i in range(1, sig.m + 1)],
            [SuperPoly.odd_gen(sig, j) for j in range(1, sig.n + 1)])
