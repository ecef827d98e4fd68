"""Conjugate pairs between constructed cycles, cycle joining, de Bruijn output."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .construction import ConstructionResult
from .fsr import from_bitstring, to_bitstring


class JoinError(ValueError):
    """Pair does not straddle two distinct cycles."""


class NotJoinableError(RuntimeError):
    """The available pairs leave the cycles in more than one group."""

    def __init__(self, groups):
        self.groups = groups
        desc = "; ".join("{" + ",".join(f"C{c}" for c in g) + "}" for g in groups)
        super().__init__(f"cycles not joinable, {len(groups)} disconnected groups: {desc}")


class LengthError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ConjugatePair:
    """Two states differing in the first bit, on different cycles.

    ``z`` is the member whose first bit is 0; pairs sort by ``z``.
    """

    z: int
    z_hat: int
    cycle_of_z: int
    cycle_of_z_hat: int

    def states(self) -> frozenset:
        return frozenset((self.z, self.z_hat))

    def to_json(self, n: int) -> dict:
        return {
            "z": to_bitstring(self.z, n),
            "z_hat": to_bitstring(self.z_hat, n),
            "cycle_z": self.cycle_of_z,
            "cycle_z_hat": self.cycle_of_z_hat,
        }


def find_conjugate_pairs(r: ConstructionResult) -> list[ConjugatePair]:
    """Cross-cycle conjugate pairs, located through the path structure.

    A pair shares a successor, so both members sit in one tree or one is a
    cycle state and the other the root hanging off the next cycle state.
    Two screens cover this:

    * both members on full-length paths (n - 2 arcs, ending on a cycle
      state) whose tails are not in S100;
    * both members on paths whose tails share a leaf class.

    Screened candidates are kept only if the re-routed successor really
    places the members on different cycles.
    """
    n = r.n
    half = 1 << (n - 1)
    z = np.arange(half, dtype=np.int64)
    zh = z | half
    pz, ph = r.path_of_state[z], r.path_of_state[zh]
    cz, ch = r.path_cycle[pz], r.path_cycle[ph]
    arcs = np.diff(r.path_starts) - 1
    full = arcs == n - 2
    tail_cls = r.tails & 7
    case_full = full[pz] & full[ph] & (tail_cls[pz] != 0b100) & (tail_cls[ph] != 0b100)
    case_class = tail_cls[pz] == tail_cls[ph]
    candidate = (cz != ch) & (case_full | case_class)

    label = kernels.label_cycles(r.modified_successor)
    valid = candidate & (label[z] != label[zh])
    return [
        ConjugatePair(int(a), int(b), int(ca) + 1, int(cb) + 1)
        for a, b, ca, cb in zip(z[valid], zh[valid], cz[valid], ch[valid])
    ]


def oracle_cross_cycle_pairs(r: ConstructionResult) -> list[ConjugatePair]:
    """Brute force: every {z, conj z} whose members lie on different cycles.

    Cycles are recovered by walking the re-routed successor directly, with
    no use of the path bookkeeping.
    """
    n = r.n
    size = 1 << n
    succ = [int(x) for x in r.modified_successor]
    label = [0] * size
    count = 0
    for s in range(size):
        if label[s]:
            continue
        count += 1
        cur = s
        while not label[cur]:
            label[cur] = count
            cur = succ[cur]
        if cur != s:
            raise ValueError("re-routed successor is not a permutation")
    top = 1 << (n - 1)
    cyc = r.cycle_of_state
    return [
        ConjugatePair(z, z | top, int(cyc[z]), int(cyc[z | top]))
        for z in range(top)
        if label[z] != label[z | top]
    ]


def join_two(successor: np.ndarray, pair: ConjugatePair) -> np.ndarray:
    """Merge the two cycles through ``pair`` by swapping their successors.

    Returns a new successor array; the input is not modified. Swapping the
    same pair again splits the cycle back.
    """
    succ = np.array(successor, dtype=np.int64, copy=True)
    size = succ.shape[0]
    z, zh = int(pair.z), int(pair.z_hat)
    if not (0 <= z < size and 0 <= zh < size):
        raise JoinError("pair states out of range")
    if z ^ zh != size >> 1:
        raise JoinError(f"{z} and {zh} are not conjugate")
    where = kernels.cycle_contains(succ, z, zh)
    if where < 0 or kernels.cycle_contains(succ, zh, z) < 0:
        raise JoinError("pair state is not on a cycle")
    if where == 1:
        raise JoinError("pair states lie on the same cycle")
    succ[z], succ[zh] = succ[zh], succ[z]
    return succ


@dataclass(frozen=True, eq=False)
class DeBruijnSequence:
    n: int
    bits: np.ndarray
    start_state: int = 0
    joins: tuple = ()

    def __len__(self):
        return int(self.bits.shape[0])

    def __str__(self):
        return (self.bits.astype(np.uint8) + ord("0")).tobytes().decode()

    @classmethod
    def from_string(cls, text: str, n: int | None = None) -> DeBruijnSequence:
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError("sequence must be a non-empty string of 0 and 1")
        if n is None:
            n = len(text).bit_length() - 1
        bits = np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")
        start = from_bitstring(text[:n]) if len(text) >= n else 0
        return cls(n=n, bits=bits.astype(np.uint8), start_state=start)

    def normalized(self) -> str:
        """Rotation that starts with n zeros; equal for rotations of one cycle."""
        text = str(self)
        k = (text + text[: self.n - 1]).find("0" * self.n)
        if k < 0:
            raise ValueError("sequence has no all-zero window")
        return text[k:] + text[:k]

    def windows(self) -> list[str]:
        text = str(self)
        ext = text + text[: self.n - 1]
        return [ext[i:i + self.n] for i in range(len(text))]


def assemble_de_bruijn(r: ConstructionResult, pairs: list[ConjugatePair] | None = None) -> DeBruijnSequence:
    """Join all cycles of ``r`` into one and read off its first bits from 0^n.

    Pairs are tried smallest first and used whenever they connect two
    groups not yet joined (Kruskal over the cycle graph).
    """
    if pairs is None:
        pairs = find_conjugate_pairs(r)
    n = r.n
    t = r.num_cycles
    parent = list(range(t + 1))

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    succ = np.array(r.modified_successor, dtype=np.int64, copy=True)
    cyc = r.cycle_of_state
    used = []
    for p in sorted(pairs):
        if int(cyc[p.z]) != p.cycle_of_z or int(cyc[p.z_hat]) != p.cycle_of_z_hat:
            raise JoinError(f"pair {p} does not match this construction's cycles")
        a, b = find(p.cycle_of_z), find(p.cycle_of_z_hat)
        if a == b:
            continue
        # distinct groups are distinct current cycles, so the swap merges them
        succ[p.z], succ[p.z_hat] = succ[p.z_hat], succ[p.z]
        parent[max(a, b)] = min(a, b)
        used.append(p)
    groups: dict[int, list[int]] = {}
    for c in range(1, t + 1):
        groups.setdefault(find(c), []).append(c)
    if len(groups) > 1:
        raise NotJoinableError(sorted(groups.values()))
    bits, length = kernels.walk_first_bits(succ, 0, n)
    if length != 1 << n:
        raise RuntimeError(f"joined cycle has {length} states, expected {1 << n}")
    return DeBruijnSequence(n=n, bits=bits, start_state=0, joins=tuple(used))


def verify_de_bruijn(s: DeBruijnSequence) -> bool:
    """True iff every n-bit word occurs exactly once as a cyclic window."""
    if len(s) != 1 << s.n:
        raise LengthError(f"sequence has {len(s)} bits, order {s.n} needs {1 << s.n}")
    counts = kernels.window_counts(s.bits, s.n)
    return bool(np.all(counts == 1))


def first_repeated_window(s: DeBruijnSequence):
    """``(position, word)`` of the earliest window seen before, or None."""
    w = kernels.cyclic_windows(np.asarray(s.bits, dtype=np.uint8), s.n)
    _, first = np.unique(w, return_index=True)
    repeat = np.ones(w.shape[0], dtype=bool)
    repeat[first] = False
    if not repeat.any():
        return None
    k = int(np.flatnonzero(repeat)[0])
    return k, to_bitstring(int(w[k]), s.n)


def pairs_json(pairs: list[ConjugatePair], n: int) -> str:
    return json.dumps({"schema": 1, "n": n, "pairs": [p.to_json(n) for p in pairs]}, indent=2) + "\n"
