"""Gluing calculus: canonical quotients along interval-closed sets.

``glue_along_complete`` collapses one complete subset to a point; the class
keeps the lexicographically least member's id, every other node keeps its
own, so outputs are reproducible and quotient maps are readable. Collections
are glued one member at a time after merging overlapping members into their
unions. ``verify_gluing`` certifies an arbitrary (X, Y, g, collection) claim
by rebuilding the canonical quotient and checking the comparison map is an
isomorphism, which pins the claim up to unique iso.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import morphism
from .core import NodeId, Poset, build
from .errors import (
    EmptySet,
    InternalInvariantError,
    NotACover,
    NotAntichainCollection,
    NotCompatible,
    NotComplete,
    NotHeightZero,
    NotPosetMap,
    OverlappingCollection,
    UnknownNode,
)
from .morphism import PosetMap, compose, identity_map

CSequence = tuple[NodeId, ...]


@dataclass(frozen=True)
class GluingWitness:
    """A gluing of ``source`` onto ``target`` along ``collection``."""

    source: Poset
    target: Poset
    map: PosetMap
    collection: tuple[frozenset[NodeId], ...]


@dataclass(frozen=True)
class GluingReport:
    ok: bool
    reason: str = "ok"
    witness_pair: Optional[tuple[NodeId, NodeId]] = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class PreservationReport:
    dim_source: int
    dim_target: int
    min_source: frozenset[NodeId]
    min_preimage: frozenset[NodeId]


def normalize_collection(
    X: Poset, collection: Iterable[Iterable[NodeId]]
) -> tuple[frozenset[NodeId], ...]:
    """Merge overlapping members into unions, drop empties and singletons.

    Sorted by least member, so downstream gluing order is deterministic.
    """
    members = []
    for C in collection:
        C = frozenset(C)
        for x in C:
            if x not in X:
                raise UnknownNode(f"collection references unknown node {x!r}")
        if len(C) >= 1:
            members.append(set(C))
    merged = True
    while merged:
        merged = False
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                if members[i] & members[j]:
                    members[i] |= members[j]
                    del members[j]
                    merged = True
                    break
            if merged:
                break
    out = [frozenset(m) for m in members if len(m) >= 2]
    return tuple(sorted(out, key=min))


def fiber_collection(g: PosetMap) -> tuple[frozenset[NodeId], ...]:
    """Fibers of g with at least two elements, sorted by least member."""
    fibers: dict[NodeId, set[NodeId]] = {}
    for x, y in g.assignment.items():
        fibers.setdefault(y, set()).add(x)
    return tuple(sorted((frozenset(f) for f in fibers.values() if len(f) >= 2), key=min))


def glue_along_complete(X: Poset, S: Iterable[NodeId]) -> GluingWitness:
    """Quotient X by collapsing the complete subset S to one class.

    Class order: [x] <= [y] iff x <= y, or x lies below some member of S and
    y lies above some member. The class node is named by S's least member.
    """
    S = frozenset(S)
    if not S:
        raise EmptySet("cannot glue along the empty set")
    for x in S:
        if x not in X:
            raise UnknownNode(f"unknown node {x!r}")
    if not X.is_complete_subset(S):
        raise NotComplete(f"set {sorted(S)!r} is not interval-closed")

    class_name = min(S)
    name_of = {x: class_name if x in S else x for x in X.nodes}
    below_S = frozenset(x for x in X.nodes if any(X.leq(x, s) for s in S))
    above_S = frozenset(x for x in X.nodes if any(X.leq(s, x) for s in S))

    relation = set()
    for x in X.nodes:
        for y in X.nodes:
            if X.leq(x, y) or (x in below_S and y in above_S):
                if name_of[x] != name_of[y]:
                    relation.add((name_of[x], name_of[y]))
    try:
        Y = build(set(name_of.values()), relation)
    except Exception as exc:  # antisymmetry is guaranteed for complete S
        raise InternalInvariantError(f"quotient order failed to build: {exc}") from exc
    g = PosetMap(X, Y, name_of)
    return GluingWitness(X, Y, g, (S,))


def glue_along_collection(
    X: Poset, collection: Iterable[Iterable[NodeId]]
) -> GluingWitness:
    """Composite of successive single-set gluings over a normalized collection.

    Every member must be complete in X, and each member's image must stay
    complete at its stage (re-checked; NotComplete names the offender).
    """
    for C in collection:
        C = frozenset(C)
        if C and not X.is_complete_subset(C):
            raise NotComplete(f"member {sorted(C)!r} is not interval-closed in the source")
    members = normalize_collection(X, collection)
    current = X
    g = identity_map(X)
    for C in members:
        image = frozenset(g(x) for x in C)
        if not current.is_complete_subset(image):
            raise NotComplete(
                f"image {sorted(image)!r} of member {sorted(C)!r} is not interval-closed at its stage"
            )
        step = glue_along_complete(current, image)
        g = compose(g, step.map)
        current = step.target
    return GluingWitness(X, current, g, members)


def is_height_zero_gluing(w: GluingWitness) -> bool:
    """Every identified set consists of minimal nodes of the source."""
    if not w.collection:
        return True
    mins = w.source.min_nodes()
    return all(C <= mins for C in w.collection)


def compatibility_violation(g: PosetMap, h: PosetMap) -> Optional[tuple[NodeId, NodeId]]:
    """A pair where g agrees and h disagrees, or None."""
    by_image: dict[NodeId, NodeId] = {}
    for x in sorted(g.source.nodes):
        y = g(x)
        if y in by_image:
            if h(by_image[y]) != h(x):
                return (by_image[y], x)
        else:
            by_image[y] = x
    return None


def induced_map(w: GluingWitness, h: PosetMap) -> PosetMap:
    """The unique map phi with phi . g = h, for h compatible with w.map."""
    if h.source != w.source:
        raise UnknownNode("h must start at the gluing's source")
    if not morphism.is_poset_map(h):
        raise NotPosetMap(
            f"h is not order-preserving at {morphism.poset_map_violation(h)!r}"
        )
    pair = compatibility_violation(w.map, h)
    if pair is not None:
        raise NotCompatible(
            f"map disagrees on a fiber: {pair[0]!r} and {pair[1]!r} glue together "
            f"but map to {h(pair[0])!r} and {h(pair[1])!r}",
            pair=pair,
        )
    assignment = {}
    for y in w.target.nodes:
        x = min(w.map.fiber(y))
        assignment[y] = h(x)
    phi = PosetMap(w.target, h.target, assignment)
    if not morphism.is_poset_map(phi):
        raise InternalInvariantError(
            f"induced map is not order-preserving at {morphism.poset_map_violation(phi)!r}"
        )
    if any(phi(w.map(x)) != h(x) for x in w.source.nodes):
        raise InternalInvariantError("induced map does not factor the given map")
    return phi


def verify_gluing(
    X: Poset,
    Y: Poset,
    g: PosetMap | dict,
    collection: Iterable[Iterable[NodeId]],
) -> GluingReport:
    """Certify that (X, Y, g) is a gluing along the collection.

    Checks the two pointwise conditions directly (constant on members; any
    collapsed pair lies in a common merged member), then rebuilds the
    canonical quotient and requires the comparison map to be an isomorphism.
    """
    if not isinstance(g, PosetMap):
        g = PosetMap(X, Y, g)
    if g.source != X or g.target != Y:
        return GluingReport(False, "map endpoints do not match the claimed posets")
    if not morphism.is_poset_map(g):
        return GluingReport(False, "not a poset map", morphism.poset_map_violation(g))
    if not g.is_surjective():
        return GluingReport(False, "gluing map must be surjective")

    raw = [frozenset(C) for C in collection]
    for C in raw:
        images = {g(x) for x in C}
        if len(images) > 1:
            return GluingReport(False, f"map is not constant on member {sorted(C)!r}")
    try:
        members = normalize_collection(X, raw)
    except UnknownNode:
        return GluingReport(False, "collection references unknown nodes")

    member_of: dict[NodeId, frozenset[NodeId]] = {}
    for C in members:
        for x in C:
            member_of[x] = C
    for C in fiber_collection(g):
        xs = sorted(C)
        for x in xs[1:]:
            if member_of.get(xs[0]) is None or member_of.get(x) is not member_of.get(xs[0]):
                return GluingReport(
                    False,
                    "distinct nodes collapse outside every collection member",
                    (xs[0], x),
                )

    try:
        canonical = glue_along_collection(X, members)
    except NotComplete as exc:
        return GluingReport(False, f"no gluing exists along this collection: {exc}")

    if fiber_collection(canonical.map) != fiber_collection(g):
        return GluingReport(False, "fibers differ from the canonical quotient's")
    phi = induced_map(canonical, g)
    if not phi.is_surjective() or len(canonical.target.nodes) != len(Y.nodes):
        return GluingReport(False, "comparison map is not bijective")
    inverse = PosetMap(Y, canonical.target, {v: k for k, v in phi.assignment.items()})
    if not morphism.is_poset_map(inverse):
        return GluingReport(
            False,
            "comparison map is not an isomorphism",
            morphism.poset_map_violation(inverse),
        )
    return GluingReport(True)


def find_c_sequence(
    X: Poset,
    collection: Sequence[Iterable[NodeId]],
    x: NodeId,
    y: NodeId,
) -> Optional[CSequence]:
    """Shortest walk from x to y stepping up in order or jumping inside a member.

    Exists iff the images of x and y are comparable in the gluing along the
    (pairwise disjoint) collection; BFS makes the returned one canonical.
    """
    members = [frozenset(C) for C in collection]
    seen: set[NodeId] = set()
    for C in members:
        for v in C:
            if v not in X:
                raise UnknownNode(f"collection references unknown node {v!r}")
            if v in seen:
                raise OverlappingCollection(f"node {v!r} appears in two members")
        seen |= C
    X._check_node(x)
    X._check_node(y)

    member_of: dict[NodeId, frozenset[NodeId]] = {}
    for C in members:
        for v in C:
            member_of[v] = C

    def neighbors(u: NodeId) -> list[NodeId]:
        ups = set(X.up_set(u)) - {u}
        jumps = set(member_of.get(u, frozenset())) - {u}
        return sorted(ups | jumps)

    if x == y:
        return (x,)
    parent: dict[NodeId, NodeId] = {x: x}
    frontier = [x]
    while frontier:
        nxt = []
        for u in frontier:
            for v in neighbors(u):
                if v in parent:
                    continue
                parent[v] = u
                if v == y:
                    path = [y]
                    while path[-1] != x:
                        path.append(parent[path[-1]])
                    return tuple(reversed(path))
                nxt.append(v)
        frontier = nxt
    return None


def is_c_sequence(
    X: Poset, collection: Sequence[Iterable[NodeId]], seq: Sequence[NodeId]
) -> bool:
    members = [frozenset(C) for C in collection]
    if not seq:
        return False
    for u, v in zip(seq, seq[1:]):
        if X.leq(u, v):
            continue
        if any(u in C and v in C for C in members):
            continue
        return False
    return True


def lift_cover(
    w: GluingWitness, gx: NodeId, gy: NodeId
) -> tuple[NodeId, NodeId]:
    """Least source cover (x', y') mapping onto the target cover (gx, gy).

    Requires every collection member to be an antichain; existence is then
    guaranteed, so failure to find one is an internal error.
    """
    for C in w.collection:
        if not w.source.is_antichain(C):
            raise NotAntichainCollection(f"member {sorted(C)!r} is not an antichain")
    if not w.target.is_cover(gx, gy):
        raise NotACover(f"{gy!r} does not cover {gx!r} in the target")
    for a, b in sorted(w.source.covers):
        if w.map(a) == gx and w.map(b) == gy:
            return (a, b)
    raise InternalInvariantError(
        f"no source cover lifts ({gx!r}, {gy!r}); witness is not a valid gluing"
    )


def check_dim_min_preservation(w: GluingWitness) -> PreservationReport:
    """Height-zero gluings keep dimension and pull minima back exactly."""
    if not is_height_zero_gluing(w):
        raise NotHeightZero("collection members must consist of source minima")
    dim_s = w.source.dim()
    dim_t = w.target.dim()
    min_s = w.source.min_nodes()
    pre = frozenset(x for x in w.source.nodes if w.map(x) in w.target.min_nodes())
    if dim_s != dim_t:
        raise InternalInvariantError(
            f"height-zero gluing changed dimension: {dim_s} -> {dim_t}"
        )
    if min_s != pre:
        raise InternalInvariantError(
            "height-zero gluing broke the minima correspondence: "
            f"{sorted(min_s)!r} vs preimage {sorted(pre)!r}"
        )
    return PreservationReport(dim_s, dim_t, min_s, pre)
