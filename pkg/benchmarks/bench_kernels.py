"""Time each JIT kernel against its fallback on one problem size.

    python3 benchmarks/bench_kernels.py -n 16 --repeat 3

The fallback column is the numpy version where one exists, otherwise the
same loop run by the interpreter. Expect the interpreted loops to be slow
above n = 18.
"""
import argparse
import time

import numpy as np

from lfsr_debruijn import _accel, kernels
from lfsr_debruijn.construction import LeafPolicy, run_algorithm1
from lfsr_debruijn.diagram import build_diagram
from lfsr_debruijn.joining import assemble_de_bruijn


def workloads(n):
    d = build_diagram(n)
    succ = np.ascontiguousarray(d.successor, dtype=np.int64)
    order = LeafPolicy.parse("lex").order(d).astype(np.int64)
    r = run_algorithm1(d)
    seq = assemble_de_bruijn(r)
    joined = r.modified_successor.copy()
    for p in seq.joins:
        joined[p.z], joined[p.z_hat] = joined[p.z_hat], joined[p.z]
    return {
        "label_cycles": (r.modified_successor,),
        "tree_roots": (succ, d.is_on_cycle),
        "path_extraction": (n, succ, d.is_on_cycle, order),
        "walk_first_bits": (joined, 0, n),
        "window_counts": (seq.bits, n),
        "cycle_contains": (succ, 0b011 << (n - 3), 0),
    }


def best_of(func, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-n", type=int, default=16)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--only", nargs="*", help="kernel names to run")
    args = ap.parse_args(argv)
    if not _accel.USE_NUMBA:
        print(f"note: {_accel.ENV_FLAG} is set, both columns run the fallback")
    loads = workloads(args.n)
    names = args.only or list(kernels.KERNEL_PAIRS)
    print(f"n={args.n}, best of {args.repeat}")
    print(f"{'kernel':<16} {'jit s':>10} {'fallback s':>12} {'speedup':>9}")
    for name in names:
        fast, slow = kernels.KERNEL_PAIRS[name]
        fast(*loads[name])  # compile outside the timing
        tf = best_of(fast, loads[name], args.repeat)
        ts = best_of(slow, loads[name], args.repeat)
        print(f"{name:<16} {tf:>10.4f} {ts:>12.4f} {ts / max(tf, 1e-9):>8.1f}x")


if __name__ == "__main__":
    main()
