"""State diagrams of the singular n-stage LFSR with feedback x_{n-1} + x_n,
and de Bruijn sequences obtained by re-routing and joining its cycles."""

from .construction import LeafPolicy, cycle_partition_check, run_algorithm1, verify_branchless
from .diagram import (
    StateClass,
    StateDiagram,
    adjacency_graph,
    build_diagram,
    connected_components,
    export_dot,
    extract_trees,
    find_cycle,
)
from .fsr import BitState, RingSequence, companion, conjugate, ring_sequence, shift_k, successor
from .joining import (
    ConjugatePair,
    DeBruijnSequence,
    assemble_de_bruijn,
    find_conjugate_pairs,
    join_two,
    oracle_cross_cycle_pairs,
    verify_de_bruijn,
)

__version__ = "0.1.0"
