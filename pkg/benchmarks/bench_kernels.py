"""Time the pure-Python and compiled kernels on the same inputs.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit
from fractions import Fraction

from iterfe import kernels
from iterfe.apps import build_approximant


def cases():
    fr = [Fraction(k + 1, 2 * k + 3) for k in range(120)]
    ints = [(7 ** k) % 1000003 for k in range(400)]
    g = build_approximant(6)
    csr = (list(g.indptr), list(g.indices), g.origin)
    return {
        "mul_trunc (120 fractions)": lambda impl: impl.mul_trunc(fr, fr, 119),
        "int_conv_trunc (400 ints)": lambda impl: impl.int_conv_trunc(ints, ints, 399),
        "closed_walks (level 6, n=60)": lambda impl: impl.closed_walks(*csr, 60),
        "count_avoiders (1423, n=9)": lambda impl: impl.count_avoiders([0, 3, 1, 2], 9),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [kernels.python_backend]
    if kernels.compiled_backend is not None:
        backends.append(kernels.compiled_backend)
    else:
        print("compiled backend not built; timing the pure-Python kernels only")
    print(f"{'kernel':32} " + " ".join(f"{b.BACKEND:>10}" for b in backends) + "    speedup")
    for name, fn in cases().items():
        results = {b.BACKEND: fn(b) for b in backends}
        if len({repr(r) for r in results.values()}) != 1:
            raise SystemExit(f"backends disagree on {name}")
        times = [min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)) for b in backends]
        speed = f"{times[0] / times[1]:9.1f}x" if len(times) == 2 else ""
        print(f"{name:32} " + " ".join(f"{x * 1000:8.1f}ms" for x in times) + f"  {speed}")


if __name__ == "__main__":
    main()
