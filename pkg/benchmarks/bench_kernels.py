"""Compare the compiled kernels with the pure-Python fallback.

Micro benchmarks call both kernel modules directly on the same inputs and
check that they agree.  The end-to-end rows run a Groebner computation and a
jet evaluation in a subprocess, once with ``SUPERFERMAT_PURE_PYTHON=1``.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from superfermat import _purekernels

try:
    from superfermat import _speedups
except ImportError:
    _speedups = None


def random_terms(rng, m, n, count, max_deg):
    out = {}
    for _ in range(count):
        exps = tuple(rng.randint(0, max_deg) for _ in range(m))
        out[(exps, rng.getrandbits(n))] = Fraction(rng.randint(-9, 9) or 1, rng.choice([1, 2, 3]))
    return out


def micro_cases(rng):
    masks = [(rng.getrandbits(20), rng.getrandbits(20)) for _ in range(2000)]
    f = random_terms(rng, 3, 6, 60, 4)
    g = random_terms(rng, 3, 6, 60, 4)
    dst = random_terms(rng, 3, 6, 200, 6)
    src = random_terms(rng, 3, 6, 80, 3)

    def odd_sign(mod):
        sign = mod.odd_sign
        return lambda: [sign(a, b) for a, b in masks]

    def mul(mod):
        return lambda: mod.mul_terms(f, g)

    def submul(mod):
        def run():
            d = dict(dst)
            mod.submul_terms(d, src, Fraction(3, 2), (1, 0, 2))
            return d
        return run

    return [("odd_sign x2000", odd_sign), ("mul_terms 60x60", mul), ("submul_terms 80 into 200", submul)]


END_TO_END = r"""
import time
from superfermat import BACKEND, HomogeneousIdeal, QuotientAlgebra, RealWeilAlgebra, smooth_eval_jet
from superfermat.parser import parse_superpoly as P, parse_smooth
sig = (3, 4)
rels = [P(s, sig) for s in ("x1^4", "x2^4", "x3^3", "x1*x2 - xi1*xi2", "x3*xi1 + x1*xi3", "x2^2*xi4 - xi1*xi2*xi3")]
t0 = time.perf_counter()
for _ in range(3):
    A = QuotientAlgebra(HomogeneousIdeal(sig, rels))
    dim = A.dimension
t1 = time.perf_counter()
W = RealWeilAlgebra.from_relations((2, 2), [P(s, (2, 2)) for s in ("x1^4", "x2^3")])
e = parse_smooth("exp(u1)*sin(u2) + 1/(1 + u1^2*u2^2)", 2)
args = [W.element(P("1/2 + x1 + x2 + xi1*xi2", (2, 2))), W.element(P("1/3 + x1 - x2", (2, 2)))]
for _ in range(20):
    smooth_eval_jet(e, args)
t2 = time.perf_counter()
print(BACKEND, dim, t1 - t0, t2 - t1)
"""


def end_to_end(pure):
    env = dict(os.environ)
    if pure:
        env["SUPERFERMAT_PURE_PYTHON"] = "1"
    else:
        env.pop("SUPERFERMAT_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    backend, dim, gb, jet = out.stdout.split()
    return backend, int(dim), float(gb), float(jet)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _speedups is None:
        print("compiled kernels are not built; only the pure-Python fallback is available")
    rng = random.Random(0)
    print(f"{'kernel':<28}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, make in micro_cases(rng):
        py = make(_purekernels)
        t_py = min(timeit.repeat(py, number=10, repeat=args.repeat)) / 10 * 1e3
        if _speedups is None:
            print(f"{name:<28}{t_py:>14.3f}{'-':>14}{'-':>10}")
            continue
        cy = make(_speedups)
        if py() != cy():
            raise SystemExit(f"{name}: backends disagree")
        t_cy = min(timeit.repeat(cy, number=10, repeat=args.repeat)) / 10 * 1e3
        print(f"{name:<28}{t_py:>14.3f}{t_cy:>14.3f}{t_py / t_cy:>9.2f}x")

    print()
    print(f"{'end to end':<28}{'python (s)':>14}{'default (s)':>14}{'speedup':>10}")
    pb, pdim, pgb, pjet = end_to_end(pure=True)
    db, ddim, dgb, djet = end_to_end(pure=False)
    if pdim != ddim:
        raise SystemExit("backends disagree on the quotient dimension")
    print(f"{'groebner (3|4) x3':<28}{pgb:>14.3f}{dgb:>14.3f}{pgb / dgb:>9.2f}x")
    print(f"{'jet eval (2|2) x20':<28}{pjet:>14.3f}{djet:>14.3f}{pjet / djet:>9.2f}x")
    print(f"default backend: {db}; quotient dimension {ddim}")


if __name__ == "__main__":
    main()
