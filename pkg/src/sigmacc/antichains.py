"""Antichains of conditions: verification, maximum search and gadgets.

Antichains of a family are exactly the independent sets of its
compatibility graph, i.e. the cliques of the orthogonality graph, which is
what the clique kernel searches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from sigmacc import kernels
from sigmacc.conditions import Condition, Ray, canonicalize, format_condition, validate
from sigmacc.errors import CapExceeded
from sigmacc.order import blocking_witness
from sigmacc.tree import DEFAULT_CAPS, Caps, Node, format_node

EXACT_LIMIT = 40


@dataclass
class CompatGraph:
    vertices: list
    edges: set = field(default_factory=set)
    witnesses: dict = field(default_factory=dict)

    def orthogonality_masks(self) -> list:
        n = len(self.vertices)
        adj = [0] * n
        for i, j in self.witnesses:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj


def build_graph(family: Sequence[Condition]) -> CompatGraph:
    g = CompatGraph(list(family))
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            w = blocking_witness(family[i], family[j])
            if w is None:
                g.edges.add((i, j))
            else:
                g.witnesses[(i, j)] = w
    return g


@dataclass
class AntichainCheck:
    ok: bool
    witnesses: dict
    compatible_pairs: list


def is_antichain(family: Sequence[Condition]) -> AntichainCheck:
    g = build_graph(family)
    return AntichainCheck(not g.edges, g.witnesses, sorted(g.edges))


@dataclass
class AntichainResult:
    indices: list
    members: list
    exact: bool


def max_antichain(family: Sequence[Condition], budget: int = 1_000_000) -> AntichainResult:
    """Maximum antichain of ``family``.

    Exact for up to 40 members; larger families are searched with at most
    ``budget`` branch-and-bound nodes and ``exact`` reports whether the
    search completed.
    """
    n = len(family)
    if n == 0:
        return AntichainResult([], [], True)
    adj = build_graph(family).orthogonality_masks()
    degree = [bin(a).count("1") for a in adj]
    texts = [format_condition(F) for F in family]
    order = sorted(range(n), key=lambda v: (-degree[v], texts[v], v))
    pos = {v: p for p, v in enumerate(order)}
    radj = [0] * n
    for v in range(n):
        m = 0
        a = adj[v]
        while a:
            low = a & -a
            m |= 1 << pos[low.bit_length() - 1]
            a ^= low
        radj[pos[v]] = m
    mask, exact = kernels.max_clique(radj, 0 if n <= EXACT_LIMIT else budget)
    idx = sorted(order[p] for p in range(n) if mask >> p & 1)
    return AntichainResult(idx, [family[i] for i in idx], exact)


def ladder(s: Node, size: int, caps: Caps = DEFAULT_CAPS) -> list:
    """``size`` pairwise orthogonal fans above the children of ``s``.

    Member ``j`` has limit ``s+(j,)`` and carries every other ``s+(i,)`` as
    an isolated point, so ``s+(i,)`` separates members ``i`` and ``j``.
    """
    if caps.height is not None and len(s) + 2 > caps.height:
        raise CapExceeded(f"ladder at {format_node(s)} needs depth {len(s) + 2}")
    if caps.width is not None and size > caps.width:
        raise CapExceeded(f"ladder of size {size} exceeds width cap {caps.width}")
    family = []
    for j in range(size):
        lim = s + (j,)
        F = Condition((lim,), (Ray(lim, 0, ()),), tuple(s + (i,) for i in range(size) if i != j))
        validate(F, caps)
        family.append(canonicalize(F))
    return family


def pair_lines(indices: Sequence[int], family: Sequence[Condition]) -> list:
    """``i j ORTHO witness=<node>`` / ``i j COMPAT`` lines for all pairs."""
    lines = []
    for a in range(len(indices)):
        for b in range(a + 1, len(indices)):
            w = blocking_witness(family[a], family[b])
            i, j = indices[a], indices[b]
            lines.append(f"{i} {j} COMPAT" if w is None else f"{i} {j} ORTHO witness={format_node(w)}")
    return lines
