"""Seeded poset generators and the small-poset enumerator.

``random_poset`` drives the property suites and the CLI; everything is a pure
function of its arguments. ``all_posets_upto_iso`` enumerates every poset on
n nodes once per isomorphism class, with two independent books kept on the
count (see the test suite).
"""

from __future__ import annotations

import random
from itertools import combinations, permutations

from .core import Poset, build
from .errors import InputError
from .morphism import find_isomorphism


def random_poset(seed: int, node_count: int, edge_probability: float) -> Poset:
    """Random DAG on a fixed topological order, transitively reduced."""
    if node_count < 1:
        raise InputError("node_count must be at least 1")
    if not 0.0 <= edge_probability <= 1.0:
        raise InputError("edge_probability must lie in [0, 1]")
    rng = random.Random(f"{seed}:{node_count}:{edge_probability}")
    width = len(str(node_count - 1))
    ids = [f"n{i:0{width}d}" for i in range(node_count)]
    relation = [
        (ids[i], ids[j])
        for i in range(node_count)
        for j in range(i + 1, node_count)
        if rng.random() < edge_probability
    ]
    return build(ids, relation)


def _closed_relations(n: int):
    """All transitive relations inside the natural order on 0..n-1.

    Yielded as frozensets of index pairs (i, j) with i < j.
    """
    all_pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(all_pairs)):
        rel = {all_pairs[k] for k in range(len(all_pairs)) if mask >> k & 1}
        ok = True
        for (a, b) in rel:
            for (c, d) in rel:
                if b == c and (a, d) not in rel:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield frozenset(rel)


def _as_poset(n: int, rel: frozenset) -> Poset:
    ids = [str(i) for i in range(n)]
    return build(ids, [(str(a), str(b)) for a, b in rel])


def all_posets_upto_iso(n: int) -> list[Poset]:
    """One representative per isomorphism class, first-seen order.

    Every poset admits a linear extension, so enumerating transitive
    relations compatible with the natural order hits each class at least
    once; duplicates are filtered with the isomorphism search, bucketed by a
    cheap invariant so few pairs are actually compared.
    """
    if n < 0:
        raise InputError("n must be nonnegative")
    if n == 0:
        return []
    buckets: dict[tuple, list[Poset]] = {}
    out: list[Poset] = []
    for rel in _closed_relations(n):
        P = _as_poset(n, rel)
        key = (
            len(P.covers),
            tuple(sorted((P.height(x), len(P.lower_covers(x)), len(P.upper_covers(x))) for x in P.nodes)),
        )
        bucket = buckets.setdefault(key, [])
        if any(find_isomorphism(P, Q) is not None for Q in bucket):
            continue
        bucket.append(P)
        out.append(P)
    return out


def count_closed_relations(n: int) -> int:
    return sum(1 for _ in _closed_relations(n))


def linear_extension_count(P: Poset) -> int:
    """Brute force over all orderings; independent of the enumeration path."""
    nodes = list(P.nodes)
    count = 0
    for perm in permutations(range(len(nodes))):
        rank = {nodes[i]: perm[i] for i in range(len(nodes))}
        if all(rank[a] < rank[b] for a, b in P.covers):
            count += 1
    return count


def automorphism_count(P: Poset) -> int:
    nodes = list(P.nodes)
    count = 0
    for perm in permutations(nodes):
        send = dict(zip(nodes, perm))
        if all((send[a], send[b]) in P.covers for a, b in P.covers):
            count += 1
    return count
