"""Compare word-evaluation lanes (python / numpy / numba) on quotient tables.

Run as a plain script:  python3 benchmarks/bench_kernels.py [--repeats N] [--batch N]
"""

import argparse
import random
import time

from burnmat import HAS_NUMBA, SContext, random_reduced_word
from burnmat.kernels import (KernelOverflow, eval_word_quotient, sigma_tables,
                             tables_for)


def _batch(rng, n, max_len):
    return [random_reduced_word(rng, max_len) for _ in range(n)]


def _time_lane(lane, words, tables, repeats):
    # warm up once so numba's compile time stays out of the measurement
    try:
        eval_word_quotient(words[0], tables, lane=lane)
    except KernelOverflow:
        return None, None
    best = None
    results = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        try:
            results = [eval_word_quotient(w, tables, lane=lane) for w in words]
        except KernelOverflow:
            return None, None
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, results


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--batch", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    workloads = [
        ("S(3), len<=40", tables_for(SContext.for_q(3)), _batch(rng, args.batch, 40)),
        ("S(9), len<=40", tables_for(SContext.for_q(9)), _batch(rng, args.batch, 40)),
        ("Sigma^8, len<=30", sigma_tables(8), _batch(rng, args.batch, 30)),
    ]
    lanes = ["python", "numpy"] + (["numba"] if HAS_NUMBA else [])
    if not HAS_NUMBA:
        print("numba not installed; timing python and numpy lanes only")

    header = f"{'workload':<18}" + "".join(f"{lane:>12}" for lane in lanes)
    print(header)
    print("-" * len(header))
    for label, tables, words in workloads:
        cells = []
        baseline = None
        for lane in lanes:
            dt, results = _time_lane(lane, words, tables, args.repeats)
            if dt is None:
                cells.append(f"{'overflow':>12}")
                continue
            if baseline is None:
                baseline = results
            elif results != baseline:
                raise SystemExit(f"{label}: {lane} lane disagrees with python lane")
            cells.append(f"{dt * 1000:>10.1f}ms")
        print(f"{label:<18}" + "".join(cells))
    print(f"\nbatch={args.batch} words, best of {args.repeats} runs, "
          "identical results checked across lanes")


if __name__ == "__main__":
    main()
