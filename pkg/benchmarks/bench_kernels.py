"""Compare the compiled and pure-Python lattice kernels.

Run with ``python3 benchmarks/bench_kernels.py``.
"""

import argparse
import math
import time

from gabor_janssen import _fallback

try:
    from gabor_janssen import _kernels
except ImportError:
    _kernels = None


def workload():
    """Order-15 box sums over a 41 x 41 slice of the safety grid, plus the diagonal."""
    steps = [0.05 + 0.03125 * i for i in range(41)]
    for a in steps:
        for b in steps:
            yield 15, 1 / (a * a), 1 / (b * b), 12
    for n in range(121):
        yield n, n + 1.0, n + 1.0, 5


def run(mod, jobs, repeat):
    best = math.inf
    total = 0.0
    for _ in range(repeat):
        t0 = time.perf_counter()
        total = sum(mod.box_sum(*job) for job in jobs)
        best = min(best, time.perf_counter() - t0)
    return best, total


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    jobs = list(workload())
    t_py, s_py = run(_fallback, jobs, args.repeat)
    print(f"python    {t_py * 1e3:9.1f} ms  ({len(jobs)} box sums)")
    if _kernels is None:
        print("compiled  not built")
        return 0
    t_c, s_c = run(_kernels, jobs, args.repeat)
    print(f"compiled  {t_c * 1e3:9.1f} ms  speedup {t_py / t_c:.1f}x")
    print(f"relative difference of checksums {abs(s_c - s_py) / abs(s_py):.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
