"""Hot loops over the 2**n state space.

Each kernel has a numba loop version and a pure numpy (or plain Python)
version with identical output. The active one is chosen at import time from
``LFSR_DEBRUIJN_NO_JIT``; both stay importable so tests can cross-check them
and ``benchmarks/bench_kernels.py`` can time them.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._accel import USE_NUMBA, njit


# -- successor table ---------------------------------------------------------

def successor_chunk(n: int, lo: int, hi: int, dtype=np.int64) -> np.ndarray:
    s = np.arange(lo, hi, dtype=np.int64)
    mask = (1 << n) - 1
    return (((s << 1) & mask) | ((s ^ (s >> 1)) & 1)).astype(dtype, copy=False)


def successor_table(n: int, dtype=np.int64, workers: int = 1) -> np.ndarray:
    """Successor of every state, indexed by the integer encoding.

    ``workers > 1`` splits the range across threads; the result is identical.
    """
    size = 1 << n
    if workers <= 1 or size < 1 << 12:
        return successor_chunk(n, 0, size, dtype)
    out = np.empty(size, dtype=dtype)
    bounds = np.linspace(0, size, workers + 1).astype(np.int64)

    def fill(k):
        lo, hi = int(bounds[k]), int(bounds[k + 1])
        out[lo:hi] = successor_chunk(n, lo, hi, dtype)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(fill, range(workers)))
    return out


# -- functional-graph cycle labels -------------------------------------------

@njit
def _label_cycles_loop(succ):
    size = succ.shape[0]
    label = np.full(size, -1, np.int64)
    mark = np.zeros(size, np.int64)
    stack = np.empty(size, np.int64)
    for start in range(size):
        if label[start] >= 0:
            continue
        walk = start + 1
        top = 0
        cur = start
        while label[cur] < 0 and mark[cur] != walk:
            mark[cur] = walk
            stack[top] = cur
            top += 1
            cur = succ[cur]
        if label[cur] >= 0:
            lab = label[cur]
        else:
            # closed a new cycle at cur
            lab = cur
            x = succ[cur]
            while x != cur:
                if x < lab:
                    lab = x
                x = succ[x]
        for k in range(top):
            label[stack[k]] = lab
    return label


def _label_cycles_numpy(succ):
    """Pointer doubling: land on the cycle, then take the min over it."""
    size = succ.shape[0]
    jump = succ.astype(np.int64)
    low = np.arange(size, dtype=np.int64)
    span = 1
    while span < 2 * size:
        low = np.minimum(low, low[jump])
        jump = jump[jump]
        span *= 2
    # jump is now succ**span with span >= size: every state sits on its cycle
    return low[jump]


def label_cycles(succ: np.ndarray) -> np.ndarray:
    """For each state, the smallest state on the cycle it eventually enters."""
    if USE_NUMBA:
        return _label_cycles_loop(succ)
    return _label_cycles_numpy(succ)


# -- tree roots and depths ---------------------------------------------------

@njit
def _tree_roots_loop(succ, is_root_target):
    size = succ.shape[0]
    root = np.full(size, -1, np.int64)
    depth = np.full(size, -1, np.int64)
    stack = np.empty(size, np.int64)
    for start in range(size):
        if is_root_target[start] or root[start] >= 0:
            continue
        top = 0
        cur = start
        while True:
            if top >= size:
                return root, depth, False
            stack[top] = cur
            top += 1
            nxt = succ[cur]
            if is_root_target[nxt]:
                r = cur
                d = 0
                break
            if root[nxt] >= 0:
                r = root[nxt]
                d = depth[nxt] + 1
                break
            cur = nxt
        for k in range(top - 1, -1, -1):
            root[stack[k]] = r
            depth[stack[k]] = d
            d += 1
    return root, depth, True


def _tree_roots_numpy(succ, is_root_target):
    size = succ.shape[0]
    root = np.full(size, -1, np.int64)
    depth = np.full(size, -1, np.int64)
    cur = np.arange(size, dtype=np.int64)
    active = ~is_root_target
    d = 0
    while active.any():
        nxt = succ[cur]
        hit = active & is_root_target[nxt]
        root[hit] = cur[hit]
        depth[hit] = d
        active &= ~hit
        cur = np.where(active, nxt, cur)
        d += 1
        if d > size:
            return root, depth, False
    return root, depth, True


def tree_roots(succ: np.ndarray, targets: np.ndarray):
    """Root and depth of every non-target state.

    A state's root is the last state on its successor chain before the chain
    enters ``targets``. Returns ``(root, depth, ok)``; ``ok`` is False when
    some chain never reaches a target.
    """
    if USE_NUMBA:
        return _tree_roots_loop(succ, targets)
    return _tree_roots_numpy(succ, targets)


# -- path extraction ---------------------------------------------------------

ALG1_OK = 0
ALG1_POLICY_EXHAUSTED = 1
ALG1_NOT_LEAF = 2
ALG1_INVARIANT = 3


@njit
def _path_extraction(n, succ, is_s0, order):
    size = succ.shape[0]
    nleaves = size // 2
    in_u = np.zeros(size, np.bool_)
    used = np.zeros(size, np.bool_)
    first_seen = np.zeros(8, np.bool_)
    tails = np.full(nleaves, -1, np.int64)
    stop_l = np.zeros(nleaves, np.int64)
    starts = np.zeros(nleaves + 1, np.int64)
    path_cycle = np.zeros(nleaves, np.int64)
    cycle_starts = np.zeros(nleaves + 1, np.int64)
    buf = np.full(size, -1, np.int64)
    msucc = succ.astype(np.int64)
    guard = 2 * size
    visits = 0
    npaths = 0
    ncycles = 0
    pos = 0
    oi = 0
    norder = order.shape[0]
    while npaths < nleaves:
        while oi < norder and used[order[oi]]:
            oi += 1
        if oi == norder:
            return (ALG1_POLICY_EXHAUSTED, -1, npaths, ncycles, visits,
                    tails, stop_l, starts, path_cycle, cycle_starts, buf, msucc)
        y1 = order[oi]
        if (y1 & 1) == (((y1 >> 2) ^ (y1 >> 1)) & 1):
            return (ALG1_NOT_LEAF, y1, npaths, ncycles, visits,
                    tails, stop_l, starts, path_cycle, cycle_starts, buf, msucc)
        cycle_starts[ncycles] = npaths
        y = y1
        while True:
            if npaths >= nleaves or pos >= size:
                return (ALG1_INVARIANT, y, npaths, ncycles, visits,
                        tails, stop_l, starts, path_cycle, cycle_starts, buf, msucc)
            start = pos
            buf[pos] = y
            pos += 1
            cls = y & 7
            if not first_seen[cls]:
                # first leaf of its class: full walk down to the cycle state
                first_seen[cls] = True
                cur = y
                for _ in range(n - 2):
                    cur = succ[cur]
                    visits += 1
                    if pos >= size:
                        return (ALG1_INVARIANT, y, npaths, ncycles, visits,
                                tails, stop_l, starts, path_cycle, cycle_starts, buf, msucc)
                    buf[pos] = cur
                    pos += 1
                if not is_s0[cur]:
                    return (ALG1_INVARIANT, y, npaths, ncycles, visits,
                            tails, stop_l, starts, path_cycle, cycle_starts, buf, msucc)
                l = n - 2
                head = cur
                nxt = succ[cur] ^ 1
                visits += 1
            else:
                cur = y
                l = 0
                while True:
                    cur = succ[cur]
                    visits += 1
                    l += 1
                    if in_u[cur] or is_s0[cur]:
                        break
                    if l > n or pos >= size:
                        return (ALG1_INVARIANT, y, npaths, ncycles, visits,
                                tails, stop_l, starts, path_cycle, cycle_starts, buf, msucc)
                    buf[pos] = cur
                    pos += 1
                if in_u[cur]:
                    head = buf[pos - 1]
                    nxt = cur ^ 1
                else:
                    # unclaimed cycle state: keep it, leave through its successor
                    if pos >= size:
                        return (ALG1_INVARIANT, y, npaths, ncycles, visits,
                                tails, stop_l, starts, path_cycle, cycle_starts, buf, msucc)
                    buf[pos] = cur
                    pos += 1
                    head = cur
                    nxt = succ[cur] ^ 1
                    visits += 1
            for k in range(start + 1, pos):
                if in_u[buf[k]]:
                    return (ALG1_INVARIANT, buf[k], npaths, ncycles, visits,
                            tails, stop_l, starts, path_cycle, cycle_starts, buf, msucc)
                in_u[buf[k]] = True
            used[y] = True
            tails[npaths] = y
            stop_l[npaths] = l
            starts[npaths] = start
            path_cycle[npaths] = ncycles
            npaths += 1
            msucc[head] = nxt
            if visits > guard:
                return (ALG1_INVARIANT, y, npaths, ncycles, visits,
                        tails, stop_l, starts, path_cycle, cycle_starts, buf, msucc)
            if nxt == y1:
                break
            if used[nxt] or (nxt & 1) == (((nxt >> 2) ^ (nxt >> 1)) & 1):
                return (ALG1_INVARIANT, nxt, npaths, ncycles, visits,
                        tails, stop_l, starts, path_cycle, cycle_starts, buf, msucc)
            y = nxt
        ncycles += 1
    starts[npaths] = pos
    cycle_starts[ncycles] = npaths
    return (ALG1_OK, -1, npaths, ncycles, visits,
            tails, stop_l, starts, path_cycle, cycle_starts, buf, msucc)


def path_extraction(n: int, succ: np.ndarray, is_s0: np.ndarray, order: np.ndarray):
    """Raw path-extraction run; see :func:`lfsr_debruijn.construction.run_algorithm1`.

    Sequential by nature, so the non-JIT path is the same loop interpreted.
    """
    succ = np.ascontiguousarray(succ, dtype=np.int64)
    order = np.ascontiguousarray(order, dtype=np.int64)
    return _path_extraction(n, succ, is_s0, order)


# -- cycle walk --------------------------------------------------------------

@njit
def _walk_first_bits(succ, start, n):
    size = succ.shape[0]
    bits = np.zeros(size, np.uint8)
    cur = start
    steps = 0
    while True:
        if steps == size:
            return bits, -1
        bits[steps] = (cur >> (n - 1)) & 1
        steps += 1
        cur = succ[cur]
        if cur == start:
            return bits[:steps], steps


def walk_first_bits(succ: np.ndarray, start: int, n: int):
    """First components along the cycle through ``start`` and its length.

    Length is -1 if ``start`` is not on a cycle within 2**n steps.
    """
    return _walk_first_bits(np.ascontiguousarray(succ, dtype=np.int64), start, n)


# -- window census -----------------------------------------------------------

@njit
def _window_counts_loop(bits, n):
    size = bits.shape[0]
    mask = (1 << n) - 1
    counts = np.zeros(1 << n, np.int64)
    w = 0
    for k in range(n - 1):
        w = (w << 1) | bits[k % size]
    for i in range(size):
        w = ((w << 1) | bits[(i + n - 1) % size]) & mask
        counts[w] += 1
    return counts


def cyclic_windows(bits: np.ndarray, n: int) -> np.ndarray:
    """Integer value of the n-window starting at each position (cyclic)."""
    idx = np.arange(bits.shape[0])
    w = np.zeros(bits.shape[0], dtype=np.int64)
    for k in range(n):
        w = (w << 1) | bits[(idx + k) % bits.shape[0]].astype(np.int64)
    return w


def _window_counts_numpy(bits, n):
    return np.bincount(cyclic_windows(bits, n), minlength=1 << n)


def window_counts(bits: np.ndarray, n: int) -> np.ndarray:
    """Occurrence count of every n-bit word among the cyclic windows."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    if USE_NUMBA:
        return _window_counts_loop(bits, n)
    return _window_counts_numpy(bits, n)




# -- cycle membership --------------------------------------------------------

@njit
def _cycle_contains(succ, start, target):
    size = succ.shape[0]
    cur = start
    found = cur == target
    for _ in range(size):
        cur = succ[cur]
        if cur == target:
            found = True
        if cur == start:
            return 1 if found else 0
    return -1


def cycle_contains(succ: np.ndarray, start: int, target: int) -> int:
    """1 if ``target`` is on the cycle through ``start``, 0 if not, -1 if
    ``start`` is not on a cycle at all."""
    return int(_cycle_contains(np.ascontiguousarray(succ, dtype=np.int64), start, target))


# benchmark registry: name -> (jit callable, fallback callable)
KERNEL_PAIRS = {
    "label_cycles": (_label_cycles_loop, _label_cycles_numpy),
    "tree_roots": (_tree_roots_loop, _tree_roots_numpy),
    "path_extraction": (_path_extraction, _path_extraction.py_func),
    "walk_first_bits": (_walk_first_bits, _walk_first_bits.py_func),
    "window_counts": (_window_counts_loop, _window_counts_numpy),
    "cycle_contains": (_cycle_contains, _cycle_contains.py_func),
}
