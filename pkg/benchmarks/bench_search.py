"""Compare the compiled and pure-Python search kernels on the even-N family.

    python3 benchmarks/bench_search.py [--max-N 10] [--repeat 3]
"""
import argparse
import time

from contexture import kernels
from contexture.contextuality import _SearchProblem
from contexture.empirical import exact_family_support


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-N", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not kernels.COMPILED:
        print("compiled kernel unavailable; timing the Python kernel only")
    print(f"{'N':>3} {'nodes':>9} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for N in range(2, args.max_N + 1, 2):
        problem = _SearchProblem(exact_family_support(N))
        t_py, (found, _, nodes) = best_of(lambda: problem.run(search=kernels.python_search), args.repeat)
        assert not found
        if kernels.COMPILED:
            t_c, (_, _, nodes_c) = best_of(lambda: problem.run(search=kernels.search), args.repeat)
            assert nodes_c == nodes
            print(f"{N:>3} {nodes:>9} {t_py:>10.4f} {t_c:>10.5f} {t_py / t_c:>7.0f}x")
        else:
            print(f"{N:>3} {nodes:>9} {t_py:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
