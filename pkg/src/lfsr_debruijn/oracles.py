"""Slow, obviously-correct reference computations for small n.

Everything here works on plain tuples and sets and shares no code with the
numpy/numba paths, so tests can use it to check them.
"""
from __future__ import annotations

from itertools import product


def states(n):
    return list(product((0, 1), repeat=n))


def succ(y):
    return y[1:] + ((y[-2] + y[-1]) % 2,)


def to_int(y):
    return int("".join(map(str, y)), 2)


def diagram(n):
    return {y: succ(y) for y in states(n)}


def predecessors(n):
    preds = {y: [] for y in states(n)}
    for y, z in diagram(n).items():
        preds[z].append(y)
    return preds


def components(n):
    """Weak components as a list of sets of tuples (undirected BFS)."""
    adj = {y: set() for y in states(n)}
    for y, z in diagram(n).items():
        adj[y].add(z)
        adj[z].add(y)
    seen, comps = set(), []
    for y in adj:
        if y in seen:
            continue
        stack, comp = [y], set()
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            stack.extend(adj[u] - comp)
        seen |= comp
        comps.append(comp)
    return comps


def cycle_from(y, step=succ):
    """States on the cycle eventually reached from y, in walk order."""
    seen = []
    while y not in seen:
        seen.append(y)
        y = step(y)
    return seen[seen.index(y):]


def is_de_bruijn(text, n):
    if len(text) != 2 ** n:
        return False
    ext = text + text[: n - 1]
    return len({ext[i:i + n] for i in range(len(text))}) == 2 ** n


def permutation_cycles(succ_map):
    """Cycles of a permutation given as a dict or list."""
    keys = range(len(succ_map)) if isinstance(succ_map, list) else succ_map.keys()
    seen, cycles = set(), []
    for s in keys:
        if s in seen:
            continue
        cyc, cur = [], s
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = succ_map[cur]
        cycles.append(cyc)
    return cycles


def cross_pairs(cycles, n):
    """Unordered conjugate pairs {z, z ^ 2**(n-1)} split across cycles."""
    where = {s: k for k, cyc in enumerate(cycles) for s in cyc}
    top = 1 << (n - 1)
    return {(z, z | top) for z in range(top) if where[z] != where[z | top]}
