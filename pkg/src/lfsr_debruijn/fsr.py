"""Register states of the singular LFSR with feedback x_{n-1} + x_n.

A state (y1, ..., yn) is encoded as the unsigned integer sum(y_i * 2**(n - i)),
so y1 is the most significant bit and lexicographic order on bit tuples
coincides with numeric order. Every operation has an integer form (used by
the kernels) and a :class:`BitState` form for callers who prefer tuples.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MIN_STAGES = 3
MAX_STAGES = 28
HARD_MAX_STAGES = 32


class StageRangeError(ValueError):
    """Stage count outside the supported range."""


class DimensionError(ValueError):
    """State length does not match the stage count."""


class EmptyCycleError(ValueError):
    pass


def check_stages(n: int, force: bool = False) -> int:
    """Validate a stage count; ``force`` lifts the soft cap to 32."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise StageRangeError(f"stage count must be an integer, got {n!r}")
    n = int(n)
    cap = HARD_MAX_STAGES if force else MAX_STAGES
    if n < MIN_STAGES:
        raise StageRangeError(f"n must be >= {MIN_STAGES}, got {n}")
    if n > cap:
        hint = "" if force else " (use force to allow up to 32)"
        raise StageRangeError(f"n must be <= {cap}, got {n}{hint}")
    return n


def state_dtype(n: int):
    """Smallest signed dtype able to index all 2**n states."""
    return np.int32 if n <= 30 else np.int64


# -- integer form ------------------------------------------------------------

def successor_int(s: int, n: int) -> int:
    mask = (1 << n) - 1
    return ((s << 1) & mask) | ((s ^ (s >> 1)) & 1)


def shift_int(s: int, n: int, k: int) -> int:
    if k < 0:
        raise ValueError("shift count must be non-negative")
    for _ in range(k):
        s = successor_int(s, n)
    return s


def conjugate_int(s: int, n: int) -> int:
    return s ^ (1 << (n - 1))


def companion_int(s: int) -> int:
    return s ^ 1


def is_leaf_int(s: int) -> bool:
    """True iff the state has no predecessor: last bits (a, b, c) with c != a ^ b."""
    return (s & 1) != (((s >> 2) ^ (s >> 1)) & 1)


def cycle_states(n: int) -> tuple[int, int, int]:
    """The 3-cycle v1 -> v2 -> v3, v1 = (0, 1, 1, 0, 1, 1, ...)."""
    v1 = int(("011" * n)[:n], 2)
    v2 = successor_int(v1, n)
    v3 = successor_int(v2, n)
    return v1, v2, v3


def on_cycle_states(n: int) -> tuple[int, int, int, int]:
    """S0: the all-zero loop followed by v1, v2, v3."""
    return (0, *cycle_states(n))


def to_bitstring(s: int, n: int) -> str:
    return format(int(s), f"0{n}b")


def from_bitstring(text: str) -> int:
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {text!r}")
    return int(text, 2)


# -- tuple form --------------------------------------------------------------

@dataclass(frozen=True)
class BitState:
    """An n-bit register state; ``bits[0]`` is y1, the oldest stage."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"state components must be 0 or 1: {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_int(cls, value: int, n: int) -> BitState:
        if not 0 <= value < (1 << n):
            raise DimensionError(f"{value} does not fit in {n} bits")
        return cls(tuple((value >> (n - 1 - i)) & 1 for i in range(n)))

    @classmethod
    def from_str(cls, text: str) -> BitState:
        from_bitstring(text)
        return cls(tuple(int(c) for c in text))

    @property
    def n(self) -> int:
        return len(self.bits)

    def __int__(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value

    def __index__(self) -> int:
        return int(self)

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def _checked(s: BitState, n: int | None) -> BitState:
    if not isinstance(s, BitState):
        s = BitState(tuple(s))
    if n is not None and len(s) != n:
        raise DimensionError(f"state has {len(s)} components, expected {n}")
    if len(s) < MIN_STAGES:
        raise DimensionError(f"state needs at least {MIN_STAGES} components")
    return s


def successor(s: BitState | Sequence[int], n: int | None = None) -> BitState:
    """(s1, ..., sn) -> (s2, ..., sn, s_{n-1} ^ sn)."""
    s = _checked(s, n)
    b = s.bits
    return BitState(b[1:] + (b[-2] ^ b[-1],))


def shift_k(s: BitState | Sequence[int], k: int, n: int | None = None) -> BitState:
    """Apply :func:`successor` ``k`` times; ``k == 0`` is the identity."""
    if k < 0:
        raise ValueError("shift count must be non-negative")
    s = _checked(s, n)
    for _ in range(k):
        s = successor(s)
    return s


def conjugate(s: BitState | Sequence[int]) -> BitState:
    """Flip the first component."""
    s = _checked(s, None)
    return BitState((1 - s.bits[0],) + s.bits[1:])


def companion(s: BitState | Sequence[int]) -> BitState:
    """Flip the last component."""
    s = _checked(s, None)
    return BitState(s.bits[:-1] + (1 - s.bits[-1],))


@dataclass(frozen=True, eq=False)
class RingSequence:
    """Cyclic bit list; equality and hashing ignore rotation."""

    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))

    def canonical(self) -> tuple[int, ...]:
        """Lexicographically smallest rotation."""
        b = self.bits
        if not b:
            return b
        return min(b[i:] + b[:i] for i in range(len(b)))

    def __eq__(self, other):
        if isinstance(other, RingSequence):
            return len(self.bits) == len(other.bits) and self.canonical() == other.canonical()
        if isinstance(other, (list, tuple)):
            return self == RingSequence(tuple(other))
        return NotImplemented

    def __hash__(self):
        return hash(self.canonical())

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return "[" + ",".join(map(str, self.bits)) + "]"


def ring_sequence(states: Iterable[BitState | Sequence[int] | int], n: int | None = None) -> RingSequence:
    """First components of the states of a cycle, in order.

    Integer states need ``n`` to locate the first component.
    """
    firsts = []
    for s in states:
        if isinstance(s, (int, np.integer)):
            if n is None:
                raise ValueError("integer states need the stage count n")
            firsts.append((int(s) >> (n - 1)) & 1)
        else:
            firsts.append(_checked(s, n).bits[0])
    if not firsts:
        raise EmptyCycleError("a cycle has at least one state")
    return RingSequence(tuple(firsts))
