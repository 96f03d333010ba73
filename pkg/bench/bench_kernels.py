"""Compare the compiled elimination kernels against the pure-Python fallback.

    python3 bench/bench_kernels.py [--max-degree 4] [--random 20 40] [--repeat 3]

Both backends are imported directly, so no environment variable is needed.
The workloads are the boundary matrices d_n of the normalized chains on the
nerve of S3 (the matrices homology actually reduces) plus random dense
integer matrices, on which int64 elimination can overflow; the compiled
kernel then raises and the library falls back to Python, reported here as
"overflow".  Each row checks that both backends give the same answer.
"""
import argparse
import random
import sys
import timeit

from twistedbundles import _kernels_py as python_kernels
from twistedbundles.catnerve import FiniteCategory, nerve
from twistedbundles.groups import symmetric_group
from twistedbundles.simplicial import chain_complex

try:
    from twistedbundles import _kernels as compiled_kernels
except ImportError:
    compiled_kernels = None


def nerve_boundaries(max_degree):
    N = nerve(FiniteCategory.from_group(symmetric_group(3)), max_degree)
    C = chain_complex(N, bound=max_degree)
    for n in range(2, max_degree + 1):
        yield f"N(S3) d_{n}", C.differential_matrix(n).to_dense()


def random_matrices(rng, sizes):
    for n in sizes:
        yield f"random {n}x{n}", [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-degree", type=int, default=4, help="largest nerve degree (5 takes minutes in Python)")
    ap.add_argument("--random", type=int, nargs="*", default=[8, 20], help="sizes of random dense matrices")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--prime", type=int, default=101)
    args = ap.parse_args(argv)
    if compiled_kernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
        return 1
    rng = random.Random(args.seed)
    workloads = list(nerve_boundaries(args.max_degree)) + list(random_matrices(rng, args.random))
    print(f"{'matrix':<16} {'shape':>10} {'kernel':<9} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, M in workloads:
        shape = f"{len(M)}x{len(M[0])}"
        kernels = [("smith", lambda mod: mod.smith_invariants([r[:] for r in M])),
                   (f"rref/{args.prime}", lambda mod: mod.rref_mod_p(M, args.prime))]
        for kname, call in kernels:
            expected = call(python_kernels)
            tp = best(lambda: call(python_kernels), args.repeat)
            try:
                got = call(compiled_kernels)
            except OverflowError:
                print(f"{name:<16} {shape:>10} {kname:<9} {tp:>10.4f} {'overflow':>11} {'-':>8}")
                continue
            if got != expected:
                print(f"backends disagree on {kname} for {name}", file=sys.stderr)
                return 2
            tc = best(lambda: call(compiled_kernels), args.repeat)
            print(f"{name:<16} {shape:>10} {kname:<9} {tp:>10.4f} {tc:>11.4f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
