"""Shared fixtures and independent oracles.

The oracle functions deliberately avoid the library's own precomputed
tables: reachability by BFS over the cover edges, longest paths by explicit
enumeration, maximal chains by inclusion-maximality over all chains of the
order relation. Frozen expected values in the tests were produced by these.
"""

from __future__ import annotations

from itertools import combinations
from pathlib import Path

import pytest

from posetglue import Poset, build
from posetglue.documents import parse_poset

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name: str) -> Poset:
    return parse_poset((FIXTURES / name).read_text())


@pytest.fixture
def x9() -> Poset:
    return load_fixture("x9.poset")


@pytest.fixture
def diamond() -> Poset:
    return load_fixture("diamond.poset")


@pytest.fixture
def diamond_split() -> Poset:
    return load_fixture("diamond-split.poset")


@pytest.fixture
def gext_f1() -> Poset:
    return load_fixture("gext-f1.poset")


@pytest.fixture
def gext_z() -> Poset:
    return load_fixture("gext-z.poset")


@pytest.fixture
def gext_f2() -> Poset:
    return load_fixture("gext-f2.poset")


@pytest.fixture
def vee() -> Poset:
    return build(["a", "b", "t"], [("a", "t"), ("b", "t")])


def oracle_reachable(P: Poset, a: str, b: str) -> bool:
    """BFS over cover edges; a <= b."""
    if a == b:
        return True
    frontier = {a}
    seen = {a}
    while frontier:
        nxt = set()
        for x in frontier:
            for (lo, hi) in P.covers:
                if lo == x and hi not in seen:
                    nxt.add(hi)
                    seen.add(hi)
        if b in seen:
            return True
        frontier = nxt
    return False


def oracle_longest_path(P: Poset) -> int:
    """Longest cover-path edge count, by memoized recursion over edges."""
    memo: dict[str, int] = {}

    def down(x: str) -> int:
        if x not in memo:
            memo[x] = max((down(lo) + 1 for (lo, hi) in P.covers if hi == x), default=0)
        return memo[x]

    return max(down(x) for x in P.nodes)


def oracle_height(P: Poset, x: str) -> int:
    memo: dict[str, int] = {}

    def down(v: str) -> int:
        if v not in memo:
            memo[v] = max((down(lo) + 1 for (lo, hi) in P.covers if hi == v), default=0)
        return memo[v]

    return down(x)


def oracle_maximal_chains(P: Poset) -> set[tuple[str, ...]]:
    """All chains of the order relation, filtered to inclusion-maximal ones."""
    nodes = list(P.nodes)
    chains: list[tuple[str, ...]] = []

    def grow(chain: list[str], rest: list[str]) -> None:
        chains.append(tuple(chain))
        for i, x in enumerate(rest):
            if not chain or oracle_reachable(P, chain[-1], x):
                grow(chain + [x], rest[i + 1 :])

    # nodes in a linear extension so chains come out bottom-up
    ordered = sorted(nodes, key=lambda x: (oracle_height(P, x), x))
    grow([], ordered)
    nonempty = [c for c in chains if c]
    sets = [frozenset(c) for c in nonempty]
    maximal = set()
    for i, c in enumerate(nonempty):
        if not any(sets[i] < sets[j] for j in range(len(nonempty)) if j != i):
            maximal.add(c)
    return maximal


def oracle_transitive_reduction(P: Poset) -> set[tuple[str, str]]:
    """Covers recomputed from scratch: a < b with empty open interval."""
    out = set()
    for a in P.nodes:
        for b in P.nodes:
            if a == b or not oracle_reachable(P, a, b):
                continue
            if any(
                z not in (a, b) and oracle_reachable(P, a, z) and oracle_reachable(P, z, b)
                for z in P.nodes
            ):
                continue
            out.add((a, b))
    return out


def complete_closure(P: Poset, S: frozenset[str]) -> frozenset[str]:
    """Smallest interval-closed superset of S."""
    S = set(S)
    changed = True
    while changed:
        changed = False
        for y in P.nodes:
            if y in S:
                continue
            if any(P.leq(u, y) for u in S) and any(P.leq(y, v) for v in S):
                S.add(y)
                changed = True
    return frozenset(S)


def all_nonempty_subsets(items):
    items = sorted(items)
    for r in range(1, len(items) + 1):
        for combo in combinations(items, r):
            yield frozenset(combo)
