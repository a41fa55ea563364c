"""Pure-Python hot kernels.

Terms are dicts ``{(exponents, oddmask): Fraction}``.  ``oddmask`` has bit
``i - 1`` set when xi_i occurs; the odd factors are understood in ascending
index order.  ``_speedups.pyx`` implements the same functions.
"""
from operator import add


def odd_sign(a, b):
    """Sign of xi^A * xi^B relative to xi^(A|B); 0 when A and B intersect."""
    if a & b:
        return 0
    inversions = 0
    while b:
        low = b & -b
        inversions += (a >> low.bit_length()).bit_count()
        b ^= low
    return -1 if inversions & 1 else 1


def mul_terms(f, g):
    """Sparse supercommutative product of two term dicts."""
    out = {}
    get = out.get
    for (ea, ma), ca in f.items():
        for (eb, mb), cb in g.items():
            if ma & mb:
                continue
            c = ca * cb
            if odd_sign(ma, mb) < 0:
                c = -c
            key = (tuple(map(add, ea, eb)), ma | mb)
            prev = get(key)
            out[key] = c if prev is None else prev + c
    return {k: v for k, v in out.items() if v}


def submul_terms(dst, src, coef, shift):
    """In place: ``dst -= coef * x^shift * src``.  Only even shifts, so no signs."""
    get = dst.get
    for (e, m), c in src.items():
        key = (tuple(map(add, e, shift)), m)
        v = get(key, 0) - coef * c
        if v:
            dst[key] = v
        else:
            dst.pop(key, None)
