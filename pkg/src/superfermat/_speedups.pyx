# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_purekernels``."""

from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM, PyTuple_GET_ITEM, PyTuple_GET_SIZE
from cpython.ref cimport Py_INCREF

from . import _purekernels


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _sign64(unsigned long long a, unsigned long long b) noexcept nogil:
    cdef int inversions = 0
    cdef unsigned long long low
    cdef int j
    if a & b:
        return 0
    while b:
        low = b & (~b + 1)
        j = __builtin_popcountll(low - 1)
        inversions += __builtin_popcountll(a >> (j + 1)) if j < 63 else 0
        b ^= low
    return -1 if inversions & 1 else 1


def odd_sign(a, b):
    if a < (1 << 64) and b < (1 << 64):
        return _sign64(a, b)
    return _purekernels.odd_sign(a, b)


cdef tuple _add_exps(tuple ea, tuple eb):
    cdef Py_ssize_t n = PyTuple_GET_SIZE(ea)
    cdef Py_ssize_t i
    cdef tuple out = PyTuple_New(n)
    cdef object v
    for i in range(n):
        v = (<object>PyTuple_GET_ITEM(ea, i)) + (<object>PyTuple_GET_ITEM(eb, i))
        Py_INCREF(v)
        PyTuple_SET_ITEM(out, i, v)
    return out


def mul_terms(dict f, dict g):
    cdef dict out = {}
    cdef tuple ka, kb, key
    cdef object ca, cb, c, prev, ma_o, mb_o
    cdef unsigned long long ma, mb
    cdef int s
    for ka_o, ca in f.items():
        ka = <tuple>ka_o
        ma_o = ka[1]
        if ma_o >= (1 << 64):
            return _purekernels.mul_terms(f, g)
        ma = ma_o
        for kb_o, cb in g.items():
            kb = <tuple>kb_o
            mb_o = kb[1]
            if mb_o >= (1 << 64):
                return _purekernels.mul_terms(f, g)
            mb = mb_o
            if ma & mb:
                continue
            c = ca * cb
            s = _sign64(ma, mb)
            if s < 0:
                c = -c
            key = (_add_exps(<tuple>ka[0], <tuple>kb[0]), ma | mb)
            prev = out.get(key)
            if prev is None:
                out[key] = c
            else:
                out[key] = prev + c
    return {k: v for k, v in out.items() if v}


def submul_terms(dict dst, dict src, coef, tuple shift):
    cdef tuple k, key
    cdef object c, v
    for k_o, c in src.items():
        k = <tuple>k_o
        key = (_add_exps(<tuple>k[0], shift), k[1])
        v = dst.get(key, 0) - coef * c
        if v:
            dst[key] = v
        else:
            dst.pop(key, None)
