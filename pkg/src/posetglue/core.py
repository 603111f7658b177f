"""Finite posets as Hasse diagrams.

A ``Poset`` stores a sorted node tuple and the transitively reduced cover
relation; the full order is kept as precomputed up-sets. Values are immutable
after ``build`` and safe to share: every operation here is a pure function of
its inputs. All iteration is over sorted ids so results are reproducible
byte-for-byte.
"""

from __future__ import annotations

import graphlib
from typing import Iterable

from .errors import CycleDetected, DanglingNode, EmptyPoset, UnknownNode

NodeId = str
Chain = tuple[NodeId, ...]


class Poset:
    """Finite poset, normalized to its Hasse diagram at construction.

    Do not instantiate directly; go through :func:`build`, which validates,
    closes, and reduces the input relation.
    """

    __slots__ = ("nodes", "covers", "_up", "_down", "_heights", "_depths", "_chains")

    nodes: tuple[NodeId, ...]
    covers: frozenset[tuple[NodeId, NodeId]]

    def __init__(self, nodes, covers, up, down):
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "covers", covers)
        object.__setattr__(self, "_up", up)
        object.__setattr__(self, "_down", down)
        object.__setattr__(self, "_heights", None)
        object.__setattr__(self, "_depths", None)
        object.__setattr__(self, "_chains", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poset values are immutable")

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.nodes == other.nodes and self.covers == other.covers

    def __hash__(self):
        return hash((self.nodes, self.covers))

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, x):
        return x in self._up

    def __repr__(self):
        return f"Poset(nodes={list(self.nodes)!r}, covers={sorted(self.covers)!r})"

    def _check_node(self, x: NodeId) -> None:
        if x not in self._up:
            raise UnknownNode(f"unknown node {x!r}")

    def _check_nonempty(self) -> None:
        if not self.nodes:
            raise EmptyPoset("operation undefined on the empty poset")

    def leq(self, a: NodeId, b: NodeId) -> bool:
        """a <= b in the order generated by the cover relation."""
        self._check_node(a)
        self._check_node(b)
        return b in self._up[a]

    def lt(self, a: NodeId, b: NodeId) -> bool:
        return a != b and self.leq(a, b)

    def is_cover(self, a: NodeId, b: NodeId) -> bool:
        """True iff b covers a (a < b with empty open interval)."""
        self._check_node(a)
        self._check_node(b)
        return (a, b) in self.covers

    def upper_covers(self, x: NodeId) -> frozenset[NodeId]:
        self._check_node(x)
        return frozenset(b for (a, b) in self.covers if a == x)

    def lower_covers(self, x: NodeId) -> frozenset[NodeId]:
        self._check_node(x)
        return frozenset(a for (a, b) in self.covers if b == x)

    def up_set(self, x: NodeId) -> frozenset[NodeId]:
        """{u : x <= u}; contains x."""
        self._check_node(x)
        return self._up[x]

    def down_set(self, x: NodeId) -> frozenset[NodeId]:
        """{u : u <= x}; contains x."""
        self._check_node(x)
        return self._down[x]

    def min_nodes(self) -> frozenset[NodeId]:
        self._check_nonempty()
        lowers = {b for (_, b) in self.covers}
        return frozenset(x for x in self.nodes if x not in lowers)

    def max_nodes(self) -> frozenset[NodeId]:
        self._check_nonempty()
        uppers = {a for (a, _) in self.covers}
        return frozenset(x for x in self.nodes if x not in uppers)

    def _height_table(self) -> dict[NodeId, int]:
        if self._heights is None:
            heights: dict[NodeId, int] = {}
            for x in self._topo_order():
                below = [heights[a] for (a, b) in self.covers if b == x]
                heights[x] = 1 + max(below) if below else 0
            object.__setattr__(self, "_heights", heights)
        return self._heights

    def _depth_table(self) -> dict[NodeId, int]:
        # longest chain going up from a node, in edges
        if self._depths is None:
            depths: dict[NodeId, int] = {}
            for x in reversed(self._topo_order()):
                above = [depths[b] for (a, b) in self.covers if a == x]
                depths[x] = 1 + max(above) if above else 0
            object.__setattr__(self, "_depths", depths)
        return self._depths

    def height(self, x: NodeId) -> int:
        """Edge count of a longest chain from a minimal node up to x."""
        self._check_nonempty()
        self._check_node(x)
        return self._height_table()[x]

    def dim(self) -> int:
        """Edge count of a longest chain in the poset."""
        self._check_nonempty()
        return max(self._height_table().values())

    def on_maximal_length_chain(self, x: NodeId) -> bool:
        self._check_node(x)
        return self.height(x) + self._depth_table()[x] == self.dim()

    def _topo_order(self) -> list[NodeId]:
        order: dict[NodeId, set[NodeId]] = {x: set() for x in self.nodes}
        for a, b in self.covers:
            order[b].add(a)
        ts = graphlib.TopologicalSorter(order)
        return [x for x in ts.static_order()]

    def maximal_chains(self) -> list[Chain]:
        """All chains from a minimal to a maximal node, following covers.

        Exhaustive, duplicate-free, lexicographic by node sequence.
        """
        self._check_nonempty()
        if self._chains is None:
            succ: dict[NodeId, list[NodeId]] = {x: [] for x in self.nodes}
            for a, b in sorted(self.covers):
                succ[a].append(b)
            chains: list[Chain] = []

            def walk(path: list[NodeId]) -> None:
                ups = succ[path[-1]]
                if not ups:
                    chains.append(tuple(path))
                    return
                for b in ups:
                    path.append(b)
                    walk(path)
                    path.pop()

            for m in sorted(self.min_nodes()):
                walk([m])
            object.__setattr__(self, "_chains", chains)
        return list(self._chains)

    def is_antichain(self, S: Iterable[NodeId]) -> bool:
        S = frozenset(S)
        for x in S:
            self._check_node(x)
        return all(not self.lt(a, b) for a in S for b in S)

    def is_complete_subset(self, S: Iterable[NodeId]) -> bool:
        """True iff S is interval-closed: u <= y <= v with u, v in S forces y in S."""
        S = frozenset(S)
        for x in S:
            self._check_node(x)
        if not S:
            return True
        above = frozenset().union(*(self._up[s] for s in S))
        below = frozenset().union(*(self._down[s] for s in S))
        return (above & below) <= S

    def induced(self, S: Iterable[NodeId]) -> "Poset":
        """Subposet on S with the order inherited from self."""
        S = frozenset(S)
        for x in S:
            self._check_node(x)
        relation = {(a, b) for a in S for b in S if self.lt(a, b)}
        return build(S, relation)


def build(nodes: Iterable[NodeId], relation: Iterable[tuple[NodeId, NodeId]]) -> Poset:
    """Build a poset from any acyclic relation.

    The stored cover set is the transitive reduction of the input; the order
    is its reflexive-transitive closure. Raises CycleDetected if the closure
    is not antisymmetric, DanglingNode on pairs naming an unknown id.
    """
    node_set = frozenset(nodes)
    pairs = set()
    for a, b in relation:
        if a not in node_set or b not in node_set:
            raise DanglingNode(f"relation pair ({a!r}, {b!r}) references an unknown node")
        if a != b:
            pairs.add((a, b))

    succ: dict[NodeId, set[NodeId]] = {x: set() for x in node_set}
    for a, b in pairs:
        succ[a].add(b)

    try:
        order = list(graphlib.TopologicalSorter(succ).static_order())
    except graphlib.CycleError as exc:
        raise CycleDetected(f"relation closure has a cycle: {exc.args[1]}") from exc

    # static_order on successor sets emits upper elements first, so every
    # successor's up-set is ready when its predecessors are reached
    strict_up: dict[NodeId, frozenset[NodeId]] = {}
    for x in order:
        acc: set[NodeId] = set()
        for b in succ[x]:
            acc.add(b)
            acc |= strict_up[b]
        strict_up[x] = frozenset(acc)

    covers = frozenset(
        (a, b)
        for a in node_set
        for b in strict_up[a]
        if not any(b in strict_up[c] for c in strict_up[a] if c != b)
    )

    up = {x: strict_up[x] | {x} for x in node_set}
    down: dict[NodeId, set[NodeId]] = {x: {x} for x in node_set}
    for a in node_set:
        for b in strict_up[a]:
            down[b].add(a)

    return Poset(
        tuple(sorted(node_set)),
        covers,
        {x: frozenset(s) for x, s in up.items()},
        {x: frozenset(s) for x, s in down.items()},
    )


def is_chain_in(P: Poset, seq: Chain) -> bool:
    """Nonempty sequence whose consecutive pairs are covers of P."""
    if not seq:
        return False
    for x in seq:
        if x not in P:
            return False
    return all(P.is_cover(a, b) for a, b in zip(seq, seq[1:]))
