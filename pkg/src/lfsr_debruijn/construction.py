"""Leaf-rooted path extraction that turns the branched diagram into disjoint cycles.

Starting from a leaf, each step walks the successor chain until it meets a
state already claimed by an earlier path (or a cycle state), keeps the walk
as a path, and re-routes the path's last state to the companion of the
state it would have entered. That companion is always a fresh leaf, which
starts the next path. A cycle closes when the re-routed successor returns
to the cycle's first leaf; new cycles start from unused leaves until every
leaf heads exactly one path.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .diagram import LEAF_CLASS_OF_WINDOW, InvariantError, StateDiagram, build_diagram
from .fsr import from_bitstring, is_leaf_int, to_bitstring


class PolicyError(ValueError):
    """The leaf policy picked a non-leaf or ran out of starting leaves."""


TABLE1_SCRIPT = ("111111", "100100")


@dataclass(frozen=True)
class LeafPolicy:
    """How the next cycle's starting leaf is chosen among unused leaves.

    ``lex``: smallest unused leaf. ``scripted``: the given leaves in order,
    failing once they run out. ``random``: a seeded shuffle of all leaves.
    """

    mode: str = "lex"
    script: tuple[str, ...] = ()
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in ("lex", "scripted", "random"):
            raise PolicyError(f"unknown policy mode {self.mode!r}")
        if self.mode == "random" and self.seed is None:
            raise PolicyError("random policy needs a seed")

    @classmethod
    def parse(cls, text: str) -> LeafPolicy:
        """Parse ``lex``, ``table1-script``, ``random:SEED`` or ``script:B1,B2,...``."""
        text = text.strip()
        if text == "lex":
            return cls("lex")
        if text == "table1-script":
            return cls("scripted", script=TABLE1_SCRIPT)
        if text.startswith("random:"):
            try:
                return cls("random", seed=int(text.split(":", 1)[1]))
            except ValueError:
                raise PolicyError(f"bad seed in {text!r}") from None
        if text.startswith("script:"):
            return cls("scripted", script=tuple(p for p in text[7:].split(",") if p))
        raise PolicyError(f"unknown policy {text!r}")

    def __str__(self):
        if self.mode == "random":
            return f"random:{self.seed}"
        if self.mode == "scripted":
            return "table1-script" if self.script == TABLE1_SCRIPT else "script:" + ",".join(self.script)
        return self.mode

    def order(self, d: StateDiagram) -> np.ndarray:
        """Candidate starting leaves in priority order."""
        leaves = d.leaves()
        if self.mode == "lex":
            return leaves
        if self.mode == "random":
            return np.random.default_rng(self.seed).permutation(leaves)
        states = []
        for text in self.script:
            if len(text) != d.n:
                raise PolicyError(f"scripted state {text!r} has {len(text)} bits, expected {d.n}")
            s = from_bitstring(text)
            if not is_leaf_int(s):
                raise PolicyError(f"scripted state {text} is not a leaf")
            if s in states:
                raise PolicyError(f"scripted state {text} repeated")
            states.append(s)
        return np.array(states, dtype=np.int64)


@dataclass(frozen=True)
class DirectedPath:
    """Path ``tail -> L tail -> ...``; ``l`` is the stop index the walk ended at.

    For a path ending on a cycle state ``len(states) == l + 1``; for a path
    cut short before an already claimed state ``len(states) == l``.
    """

    cycle: int
    index: int
    states: tuple[int, ...]
    l: int

    @property
    def tail(self) -> int:
        return self.states[0]

    @property
    def head(self) -> int:
        return self.states[-1]

    @property
    def interior(self) -> frozenset:
        return frozenset(self.states[1:])

    @property
    def arcs(self) -> int:
        return len(self.states) - 1


@dataclass(frozen=True)
class ConstructedCycle:
    index: int
    paths: tuple[DirectedPath, ...]

    @property
    def states(self) -> list[int]:
        return [s for p in self.paths for s in p.states]

    def __len__(self):
        return sum(len(p.states) for p in self.paths)


@dataclass(frozen=True, eq=False)
class ConstructionResult:
    """Paths and cycles from one run, stored as flat arrays.

    ``states`` concatenates every path's states in cycle order; path ``k``
    occupies ``states[path_starts[k]:path_starts[k+1]]`` and cycle ``c`` owns
    paths ``cycle_starts[c]:cycle_starts[c+1]``. Cycle and path numbers in the
    object views are 1-based.
    """

    n: int
    policy: LeafPolicy
    tails: np.ndarray
    stop_l: np.ndarray
    path_starts: np.ndarray
    path_cycle: np.ndarray
    cycle_starts: np.ndarray
    states: np.ndarray
    modified_successor: np.ndarray
    visits: int
    original_successor: np.ndarray = field(repr=False)

    @property
    def num_paths(self) -> int:
        return int(self.tails.shape[0])

    @property
    def num_cycles(self) -> int:
        return int(self.cycle_starts.shape[0]) - 1

    def path_states(self, k: int) -> np.ndarray:
        return self.states[self.path_starts[k]:self.path_starts[k + 1]]

    def cycle_states(self, c: int) -> np.ndarray:
        """States of the 0-based cycle ``c`` in cycle order."""
        lo = self.path_starts[self.cycle_starts[c]]
        hi = self.path_starts[self.cycle_starts[c + 1]]
        return self.states[lo:hi]

    @cached_property
    def heads(self) -> np.ndarray:
        return self.states[self.path_starts[1:] - 1]

    @cached_property
    def path_of_state(self) -> np.ndarray:
        out = np.full(1 << self.n, -1, dtype=np.int64)
        lengths = np.diff(self.path_starts)
        out[self.states] = np.repeat(np.arange(self.num_paths), lengths)
        return out

    @cached_property
    def cycle_of_state(self) -> np.ndarray:
        """1-based cycle index of every state."""
        return self.path_cycle[self.path_of_state] + 1

    @cached_property
    def paths(self) -> list[DirectedPath]:
        counts = np.diff(self.cycle_starts)
        index = np.concatenate([np.arange(1, c + 1) for c in counts]) if len(counts) else []
        return [
            DirectedPath(
                cycle=int(self.path_cycle[k]) + 1,
                index=int(index[k]),
                states=tuple(int(s) for s in self.path_states(k)),
                l=int(self.stop_l[k]),
            )
            for k in range(self.num_paths)
        ]

    @cached_property
    def cycles(self) -> list[ConstructedCycle]:
        ps = self.paths
        return [
            ConstructedCycle(c + 1, tuple(ps[self.cycle_starts[c]:self.cycle_starts[c + 1]]))
            for c in range(self.num_cycles)
        ]

    def modified_delta(self) -> list[tuple[int, int, int]]:
        """``(state, old successor, new successor)`` for every re-routed state."""
        changed = np.flatnonzero(self.modified_successor != self.original_successor)
        return [
            (int(s), int(self.original_successor[s]), int(self.modified_successor[s]))
            for s in changed
        ]

    def to_json(self) -> dict:
        n = self.n
        bs = lambda s: to_bitstring(s, n)  # noqa: E731
        return {
            "schema": 1,
            "n": n,
            "policy": str(self.policy),
            "cycles": [
                [
                    {"cycle": p.cycle, "index": p.index, "tail": bs(p.tail),
                     "length": p.l, "states": [bs(s) for s in p.states]}
                    for p in cyc.paths
                ]
                for cyc in self.cycles
            ],
            "modified_successor": [
                {"state": bs(s), "old_successor": bs(a), "new_successor": bs(b)}
                for s, a, b in self.modified_delta()
            ],
        }


def run_algorithm1(d: StateDiagram, policy: LeafPolicy | str | None = None) -> ConstructionResult:
    """Split every leaf-to-cycle chain into paths and link them into cycles."""
    if policy is None:
        policy = LeafPolicy()
    elif isinstance(policy, str):
        policy = LeafPolicy.parse(policy)
    order = policy.order(d)
    (status, bad, npaths, ncycles, visits, tails, stop_l, starts,
     path_cycle, cycle_starts, buf, msucc) = kernels.path_extraction(
        d.n, d.successor, d.is_on_cycle, order)
    where = to_bitstring(bad, d.n) if bad >= 0 else "-"
    if status == kernels.ALG1_POLICY_EXHAUSTED:
        raise PolicyError(f"policy {policy} ran out of starting leaves after {ncycles} cycles")
    if status == kernels.ALG1_NOT_LEAF:
        raise PolicyError(f"policy {policy} chose non-leaf {where}")
    if status != kernels.ALG1_OK:
        raise InvariantError(f"path extraction broke at state {where} after {npaths} paths")
    return ConstructionResult(
        n=d.n,
        policy=policy,
        tails=tails[:npaths],
        stop_l=stop_l[:npaths],
        path_starts=starts[: npaths + 1],
        path_cycle=path_cycle[:npaths],
        cycle_starts=cycle_starts[: ncycles + 1],
        states=buf,
        modified_successor=msucc,
        visits=int(visits),
        original_successor=np.asarray(d.successor, dtype=np.int64),
    )


def construct(n: int, policy: LeafPolicy | str | None = None, **kw) -> ConstructionResult:
    return run_algorithm1(build_diagram(n, **kw), policy)


@dataclass
class Check:
    """Boolean outcome plus the states that caused a failure."""

    ok: bool
    offending: list = field(default_factory=list)
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_branchless(r: ConstructionResult, d: StateDiagram) -> Check:
    """True iff the re-routed successor is a permutation differing from the
    original exactly at path heads, each re-routed to the companion of its
    old successor, and every recorded cycle follows it."""
    size = d.size
    orig = np.asarray(d.successor, dtype=np.int64)
    new = np.asarray(r.modified_successor, dtype=np.int64)
    indeg = np.bincount(new, minlength=size)
    if np.any(indeg != 1):
        bad = np.flatnonzero(indeg != 1)
        return Check(False, [int(s) for s in bad[:32]], "in-degree != 1")
    changed = np.flatnonzero(new != orig)
    heads = np.unique(r.heads)
    if not np.array_equal(changed, heads):
        bad = np.setxor1d(changed, heads)
        return Check(False, [int(s) for s in bad[:32]], "modified states are not the path heads")
    wrong = changed[new[changed] != (orig[changed] ^ 1)]
    if wrong.size:
        return Check(False, [int(s) for s in wrong[:32]], "re-routed successor is not a companion")
    for c in range(r.num_cycles):
        cyc = r.cycle_states(c)
        if not np.array_equal(new[cyc], np.roll(cyc, -1)):
            return Check(False, [int(cyc[0])], f"cycle {c + 1} does not follow the re-routed successor")
    return Check(True)


def cycle_partition_check(r: ConstructionResult) -> Check:
    """True iff the cycles' states cover every state exactly once."""
    size = 1 << r.n
    parts = [r.cycle_states(c) for c in range(r.num_cycles)]
    flat = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    if flat.size != size or flat.min(initial=0) < 0 or flat.max(initial=0) >= size:
        return Check(False, [], f"cycles hold {flat.size} states, expected {size}")
    counts = np.bincount(flat, minlength=size)
    if np.any(counts != 1):
        return Check(False, [int(s) for s in np.flatnonzero(counts != 1)[:32]], "state not covered exactly once")
    return Check(True)


def tail_classes(r: ConstructionResult) -> dict:
    """``{(leaf class label, cycle): [(cycle, index), ...]}``, e.g. ``("111", 1)``."""
    out: dict = {}
    for p in r.paths:
        cls = LEAF_CLASS_OF_WINDOW[p.tail & 7]
        out.setdefault((cls.label, p.cycle), []).append((p.cycle, p.index))
    return out


def format_paths(r: ConstructionResult) -> str:
    n = r.n
    lines = [f"n: {n}  policy: {r.policy}  paths: {r.num_paths}  cycles: {r.num_cycles}  visits: {r.visits}"]
    for cyc in r.cycles:
        lines.append(f"C{cyc.index}: {len(cyc.paths)} paths, {len(cyc)} states")
        for p in cyc.paths:
            chain = " -> ".join(to_bitstring(s, n) for s in p.states)
            lines.append(f"  p[{p.cycle},{p.index}] tail={to_bitstring(p.tail, n)} l={p.l}  {chain}")
    return "\n".join(lines) + "\n"


def dump_json(r: ConstructionResult) -> str:
    return json.dumps(r.to_json(), indent=2) + "\n"
