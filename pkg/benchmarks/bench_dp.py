"""Time the compiled DP kernel against the pure-Python fallback.

    python benchmarks/bench_dp.py [--sizes 50,100,200] [--repeat 3]
"""
import argparse
import time

import numpy as np

from smiwarp import _dp


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="50,100,200,400")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _dp.fast is None:
        raise SystemExit("compiled extension not built; reinstall with Cython available")

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>6} {'cython ms':>10} {'python ms':>10} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        v = rng.standard_normal((n, n))
        acc_f, st_f = _dp.fast.accumulate(v, True)
        acc_s, st_s = _dp.slow.accumulate(v, True)
        assert np.array_equal(st_f, st_s) and np.allclose(acc_f, acc_s, rtol=0, atol=1e-9)

        def run(mod):
            return lambda: mod.backtrack(mod.accumulate(v, True)[1])

        tf = best_of(run(_dp.fast), args.repeat)
        ts = best_of(run(_dp.slow), args.repeat)
        print(f"{n:>6} {1e3 * tf:>10.3f} {1e3 * ts:>10.1f} {ts / tf:>7.0f}x")


if __name__ == "__main__":
    main()
