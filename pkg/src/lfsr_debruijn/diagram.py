"""State diagram of the singular LFSR: classes, components, trees, DOT export."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .fsr import (
    check_stages,
    conjugate_int,
    cycle_states,
    on_cycle_states,
    ring_sequence,
    state_dtype,
    successor_int,
    to_bitstring,
)

DOT_MAX_STAGES = 10


class InvariantError(RuntimeError):
    """A structural property that must hold did not; indicates a bug."""


class StateClass(enum.IntEnum):
    TRIGEMINAL = 0
    ON_CYCLE = 1
    LEAF_100 = 2
    LEAF_001 = 3
    LEAF_010 = 4
    LEAF_111 = 5

    @property
    def is_leaf(self) -> bool:
        return self >= StateClass.LEAF_100

    @property
    def label(self) -> str:
        return self.name.split("_")[-1].lower()


# last-three-bit window -> leaf class, None for windows with predecessors
LEAF_CLASS_OF_WINDOW = {
    0b100: StateClass.LEAF_100,
    0b001: StateClass.LEAF_001,
    0b010: StateClass.LEAF_010,
    0b111: StateClass.LEAF_111,
}


def leaf_window(cls: StateClass) -> int:
    """Inverse of :data:`LEAF_CLASS_OF_WINDOW`."""
    for window, c in LEAF_CLASS_OF_WINDOW.items():
        if c == cls:
            return window
    raise ValueError(f"{cls!r} is not a leaf class")


def _classify(n: int, size: int) -> np.ndarray:
    s = np.arange(size, dtype=np.int64)
    a, b, c = (s >> 2) & 1, (s >> 1) & 1, s & 1
    classes = np.full(size, StateClass.TRIGEMINAL, dtype=np.int8)
    leaf = c != (a ^ b)
    window = s & 7
    for w, cls in LEAF_CLASS_OF_WINDOW.items():
        classes[leaf & (window == w)] = cls
    classes[list(on_cycle_states(n))] = StateClass.ON_CYCLE
    return classes


@dataclass(frozen=True, eq=False)
class StateDiagram:
    """Successor table and per-state class for all 2**n states.

    Predecessors are not stored: a state z has the two conjugate
    predecessors ``(z >> 1)`` and ``(z >> 1) | 2**(n-1)`` exactly when
    ``z_n == z_{n-2} ^ z_{n-1}``, and none otherwise.
    """

    n: int
    successor: np.ndarray
    classes: np.ndarray

    @property
    def size(self) -> int:
        return 1 << self.n

    def successor_of(self, s: int) -> int:
        return int(self.successor[s])

    def class_of(self, s: int) -> StateClass:
        return StateClass(int(self.classes[s]))

    def predecessors_of(self, z: int) -> tuple[int, ...]:
        if (z & 1) != (((z >> 2) ^ (z >> 1)) & 1):
            return ()
        y = z >> 1
        return (y, y | (1 << (self.n - 1)))

    def predecessor_counts(self) -> np.ndarray:
        return np.where(self.classes >= StateClass.LEAF_100, 0, 2)

    @cached_property
    def is_leaf(self) -> np.ndarray:
        return self.classes >= StateClass.LEAF_100

    @cached_property
    def is_on_cycle(self) -> np.ndarray:
        return self.classes == StateClass.ON_CYCLE

    def leaves(self) -> np.ndarray:
        return np.flatnonzero(self.is_leaf)

    def trigeminal(self) -> np.ndarray:
        """States with two predecessors, cycle states included."""
        return np.flatnonzero(~self.is_leaf)


def build_diagram(n: int, workers: int = 1, force: bool = False) -> StateDiagram:
    """Materialise the state diagram for ``n`` stages in Theta(2**n)."""
    n = check_stages(n, force=force)
    size = 1 << n
    succ = kernels.successor_table(n, dtype=state_dtype(n), workers=workers)
    return StateDiagram(n=n, successor=succ, classes=_classify(n, size))


@dataclass(frozen=True, eq=False)
class Component:
    id: int
    states: np.ndarray
    cycle: list[int]

    @property
    def size(self) -> int:
        return int(self.states.shape[0])

    def ring(self, n: int):
        return ring_sequence(self.cycle, n)


def find_cycle(d: StateDiagram, start: int) -> list[int]:
    """The cycle reached from ``start``, rotated to begin at its smallest state."""
    seen = {}
    order = []
    cur = int(start)
    while cur not in seen:
        seen[cur] = len(order)
        order.append(cur)
        cur = int(d.successor[cur])
    cycle = order[seen[cur]:]
    k = cycle.index(min(cycle))
    return cycle[k:] + cycle[:k]


def connected_components(d: StateDiagram) -> list[Component]:
    """Weakly connected components, ordered by their cycle's smallest state.

    Ids are 1-based, so the component holding the all-zero loop is id 1.
    """
    label = kernels.label_cycles(d.successor)
    reps = np.unique(label)
    comps = []
    for i, rep in enumerate(reps, start=1):
        states = np.flatnonzero(label == rep)
        comps.append(Component(id=i, states=states, cycle=find_cycle(d, int(rep))))
    return comps


@dataclass(frozen=True, eq=False)
class PerfectTree:
    """A perfect binary in-tree; arcs point child -> parent (successor direction)."""

    root: int
    depth: int
    vertices: np.ndarray
    parents: np.ndarray  # aligned with vertices; the root's entry is -1

    @property
    def size(self) -> int:
        return int(self.vertices.shape[0])

    @cached_property
    def parent_of(self) -> dict[int, int]:
        return {int(v): int(p) for v, p in zip(self.vertices, self.parents) if p >= 0}

    def leaves(self) -> np.ndarray:
        has_child = np.isin(self.vertices, self.parents)
        return self.vertices[~has_child]


def extract_trees(d: StateDiagram) -> list[PerfectTree]:
    """The four trees hanging off the cycles, rooted at conj(0), conj(v1..v3).

    Raises :class:`InvariantError` if any tree is not perfect of depth n-3.
    """
    n = d.n
    roots = [conjugate_int(v, n) for v in on_cycle_states(n)]
    root_of, depth_of, ok = kernels.tree_roots(d.successor, d.is_on_cycle)
    if not ok:
        raise InvariantError("some state never reaches a cycle state")
    trees = []
    covered = 0
    for r in roots:
        if root_of[r] != r:
            raise InvariantError(f"{to_bitstring(r, n)} is not a tree root")
        verts = np.flatnonzero(root_of == r)
        depths = depth_of[verts]
        parents = d.successor[verts].astype(np.int64)
        parents[verts == r] = -1
        tree = PerfectTree(root=r, depth=int(depths.max()), vertices=verts, parents=parents)
        _check_perfect(tree, depths, n)
        trees.append(tree)
        covered += tree.size
    if covered + len(on_cycle_states(n)) != d.size:
        raise InvariantError("trees and cycle states do not cover the state space")
    return trees


def _check_perfect(tree: PerfectTree, depths: np.ndarray, n: int) -> None:
    name = to_bitstring(tree.root, n)
    if tree.size != 2 ** (tree.depth + 1) - 1:
        raise InvariantError(f"tree at {name}: {tree.size} vertices for depth {tree.depth}")
    kids = np.bincount(
        np.searchsorted(tree.vertices, tree.parents[tree.parents >= 0]),
        minlength=tree.size,
    )
    if np.any((kids != 0) & (kids != 2)):
        raise InvariantError(f"tree at {name}: vertex with one child")
    if np.any(depths[kids == 0] != tree.depth):
        raise InvariantError(f"tree at {name}: leaves at unequal depth")


@dataclass(frozen=True)
class AdjacencyGraph:
    vertices: tuple[int, ...]
    edges: dict  # (i, j) with i < j -> number of conjugate pairs

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def adjacency_graph(components: list[Component]) -> AdjacencyGraph:
    """Count conjugate pairs straddling each pair of components."""
    size = sum(c.size for c in components)
    n = size.bit_length() - 1
    label = np.empty(size, dtype=np.int64)
    for c in components:
        label[c.states] = c.id
    low = np.arange(size >> 1)
    a, b = label[low], label[low | (1 << (n - 1))]
    cross = a != b
    edges = {}
    for i, j in zip(a[cross], b[cross]):
        key = (int(min(i, j)), int(max(i, j)))
        edges[key] = edges.get(key, 0) + 1
    return AdjacencyGraph(vertices=tuple(c.id for c in components), edges=dict(sorted(edges.items())))


# -- reports -----------------------------------------------------------------

def analysis_report(d: StateDiagram) -> dict:
    """Structural summary with a pass/fail flag per structural fact."""
    n = d.n
    comps = connected_components(d)
    rings = [str(c.ring(n)) for c in comps]
    checks = {
        "two_components": len(comps) == 2
        and rings == ["[0]", "[0,1,1]"]
        and comps[0].cycle == [0]
        and sorted(comps[1].cycle) == sorted(cycle_states(n)),
    }
    trees = []
    try:
        found = extract_trees(d)
    except InvariantError as exc:
        checks["perfect_trees"] = False
        checks["tree_error"] = str(exc)
    else:
        trees = [
            {"root": to_bitstring(t.root, n), "depth": t.depth, "vertices": t.size}
            for t in found
        ]
        checks["perfect_trees"] = len(found) == 4 and all(
            t.depth == n - 3 and t.size == 2 ** (n - 2) - 1 for t in found
        )
    adj = adjacency_graph(comps)
    checks["isolated_components"] = adj.edge_count == 0 and len(adj.vertices) == 2
    leaves = int(d.is_leaf.sum())
    return {
        "schema": 1,
        "n": n,
        "states": d.size,
        "leaves": leaves,
        "trigeminal": d.size - leaves,
        "components": [
            {"id": c.id, "size": c.size, "cycle": [to_bitstring(s, n) for s in c.cycle], "ring": ring}
            for c, ring in zip(comps, rings)
        ],
        "trees": trees,
        "adjacency_edges": [[i, j, m] for (i, j), m in adj.edges.items()],
        "checks": checks,
        "ok": all(v is True for k, v in checks.items() if k != "tree_error"),
    }


def format_report(report: dict) -> str:
    rings = ", ".join(c["ring"] for c in report["components"])
    lines = [f"n: {report['n']}  states: {report['states']}"]
    tree_part = "trees: none"
    if report["trees"]:
        depths = {t["depth"] for t in report["trees"]}
        sizes = {t["vertices"] for t in report["trees"]}
        if len(depths) == 1 and len(sizes) == 1:
            tree_part = f"trees: {len(report['trees'])} × depth {depths.pop()} ({sizes.pop()} vertices)"
        else:
            tree_part = "trees: " + ", ".join(f"depth {t['depth']} ({t['vertices']})" for t in report["trees"])
    lines.append(f"components: {len(report['components'])}; cycles: {rings}; {tree_part}")
    for c in report["components"]:
        lines.append(f"  G{c['id']}: {c['size']} states, cycle {c['ring']}")
    lines.append(f"leaves: {report['leaves']}  trigeminal: {report['trigeminal']}")
    lines.append(f"adjacency edges: {len(report['adjacency_edges'])}")
    for name, value in report["checks"].items():
        if name == "tree_error":
            lines.append(f"  error: {value}")
        else:
            lines.append(f"  {name}: {'ok' if value else 'FAILED'}")
    return "\n".join(lines) + "\n"


_DOT_STYLE = {
    StateClass.TRIGEMINAL: 'shape=box',
    StateClass.ON_CYCLE: 'shape=doublecircle, style=filled, fillcolor="#dddddd"',
}
_LEAF_STYLE = "shape=ellipse, style=dashed"


def export_dot(d: StateDiagram, force: bool = False, cap: int = DOT_MAX_STAGES) -> str:
    """Graphviz text: one cluster per component, one arc per state."""
    n = d.n
    if n > cap and not force:
        raise ValueError(f"refusing to render 2**{n} vertices (cap n={cap}); pass force to override")
    comps = connected_components(d)
    out = [f'digraph "lfsr_x{n - 1}_x{n}_n{n}" {{', '  node [fontname="monospace"];']
    for c in comps:
        out.append(f"  subgraph cluster_G{c.id} {{")
        out.append(f'    label="G{c.id}";')
        for s in c.states:
            s = int(s)
            cls = d.class_of(s)
            style = _LEAF_STYLE if cls.is_leaf else _DOT_STYLE[cls]
            out.append(f'    "{to_bitstring(s, n)}" [{style}];')
        for s in c.states:
            s = int(s)
            out.append(f'    "{to_bitstring(s, n)}" -> "{to_bitstring(successor_int(s, n), n)}";')
        out.append("  }")
    out.append("}")
    return "\n".join(out) + "\n"
