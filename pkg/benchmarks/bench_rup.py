"""Compare the compiled and pure-Python RUP kernels on synthetic proofs.

Usage: python3 benchmarks/bench_rup.py [k ...]

Each ``k`` gives a proof over ``k`` equivalence blocks (about ``14k``
clauses); the best of ``--repeat`` full checks is reported.  The compiled
kernel is skipped when the extension is not built.
"""

import argparse
import gc
import time

from certcount import rup
from certcount.checker import FULL, check_proof
from certcount.cnf import parse_dimacs
from certcount.cpog import parse_cpog
from certcount.families import synthetic_proof


def time_check(cnf, steps, store_cls, repeat):
    best = float("inf")
    for _ in range(repeat):
        gc.collect()
        start = time.perf_counter()
        result = check_proof(cnf, steps, store=store_cls())
        best = min(best, time.perf_counter() - start)
        if result.verdict.status != FULL:
            raise SystemExit(f"unexpected verdict: {result.verdict}")
        del result
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("sizes", nargs="*", type=int, default=[1000, 10000, 70000])
    ap.add_argument("--repeat", type=int, default=3, help="report the best of this many runs")
    args = ap.parse_args()
    backends = [("python", rup.PyClauseStore)]
    if rup.CClauseStore is not None:
        backends.insert(0, ("compiled", rup.CClauseStore))
    print(f"{'k':>8} {'clauses':>9} " + " ".join(f"{name:>10}" for name, _ in backends) + "   speedup")
    for k in args.sizes:
        cnf_text, cpog_text = synthetic_proof(k)
        cnf, steps = parse_dimacs(cnf_text), parse_cpog(cpog_text)
        times = [time_check(cnf, steps, cls, args.repeat) for _, cls in backends]
        speedup = f"{times[-1] / times[0]:8.1f}x" if len(times) > 1 else "       -"
        print(f"{k:>8} {14 * k + 2:>9} " + " ".join(f"{t:>9.2f}s" for t in times) + f"  {speedup}")


if __name__ == "__main__":
    main()
