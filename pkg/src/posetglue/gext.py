"""Elevations, retractions, G-extension steps, and the certificate pipeline.

A retraction collapses the down-set of a height-one node z (all of whose
lower neighbors have z as their only cover) to a point; an elevation is the
inverse move, growing fresh minima under a minimal node. One G-extension
step = split shared minima under a pivot until each copy has a unique cover,
retract the pivot's down-set, and remember the height-zero gluing that undoes
the splits. Iterating to dimension zero and reversing yields a construction
script from a single point; replaying the script re-verifies every move and
certifies that the original poset sits inside the reconstruction as a
saturated subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import morphism
from .chains import split_for_cover
from .core import NodeId, Poset, build
from .errors import (
    BrokenEmbedding,
    EmptyPoset,
    InputError,
    InternalInvariantError,
    NotHeightOne,
    NotMinimal,
    NotUniqueCover,
    StepMismatch,
    ZeroDimensional,
)
from .gluing import (
    GluingWitness,
    check_dim_min_preservation,
    fiber_collection,
    glue_along_collection,
    glue_along_complete,
    is_height_zero_gluing,
    verify_gluing,
)
from .morphism import PosetMap, compose, identity_map, inclusion_map


@dataclass(frozen=True)
class ElevationWitness:
    """Z is X with fresh minima grown under r(z); r collapses them back."""

    Z: Poset
    z: NodeId
    X: Poset
    r: PosetMap  # Z -> X, glues the down-set of z
    e: PosetMap  # X -> Z, the unique section fixing z

    def validate(self) -> None:
        Z, z, X, r, e = self.Z, self.z, self.X, self.r, self.e
        if Z.height(z) != 1:
            raise InternalInvariantError(f"pivot {z!r} does not have height one")
        down = Z.down_set(z)
        for w in sorted(down - {z}):
            if Z.upper_covers(w) != {z}:
                raise InternalInvariantError(f"{z!r} is not the only cover of {w!r}")
        report = verify_gluing(Z, X, r, (down,))
        if not report:
            raise InternalInvariantError(f"r is not a gluing along the down-set: {report.reason}")
        if any(r(e(x)) != x for x in X.nodes):
            raise InternalInvariantError("r . e is not the identity")
        if e(r(z)) != z:
            raise InternalInvariantError("section does not fix the pivot")
        if not morphism.is_embedding(e):
            raise InternalInvariantError("elevation map is not an embedding")
        if frozenset(Z.nodes) != down | e.image():
            raise InternalInvariantError("Z is not the union of the down-set and the section image")
        fresh = down - {z}
        expected_min = fresh | frozenset(e(x) for x in X.min_nodes() if x != r(z))
        if Z.min_nodes() != expected_min:
            raise InternalInvariantError("minima of Z do not decompose as expected")


def retract(Z: Poset, z: NodeId) -> ElevationWitness:
    """Collapse the down-set of z to a point.

    z must have height one and be the only cover of everything below it.
    The collapsed class keeps the least id in the down-set; the section e
    sends each surviving node to its unique preimage and the class to z.
    """
    Z._check_node(z)
    if Z.height(z) != 1:
        raise NotHeightOne(f"{z!r} has height {Z.height(z)}, expected 1")
    down = Z.down_set(z)
    for w in sorted(down - {z}):
        if Z.upper_covers(w) != {z}:
            raise NotUniqueCover(
                f"{w!r} below {z!r} has covers {sorted(Z.upper_covers(w))!r}", node=w
            )
    witness = glue_along_complete(Z, down)
    X, r = witness.target, witness.map
    e_assignment = {}
    for x in X.nodes:
        fiber = r.fiber(x)
        e_assignment[x] = z if len(fiber) > 1 else min(fiber)
    e = PosetMap(X, Z, e_assignment)
    result = ElevationWitness(Z, z, X, r, e)
    result.validate()
    return result


def elevate(
    X: Poset, p: NodeId, n: int, fresh_ids: Optional[Sequence[NodeId]] = None
) -> ElevationWitness:
    """Grow n fresh minima under the minimal node p."""
    X._check_node(p)
    if p not in X.min_nodes():
        raise NotMinimal(f"{p!r} is not a minimal node")
    if n < 1:
        raise InputError("must grow at least one node")
    if fresh_ids is None:
        fresh_ids = _fresh_ids("q", n, frozenset(X.nodes))
    else:
        fresh_ids = list(fresh_ids)
        if len(fresh_ids) != n or len(set(fresh_ids)) != n:
            raise InputError("fresh_ids must be n distinct ids")
        for q in fresh_ids:
            if q in X:
                raise InputError(f"fresh id {q!r} already present")
    Z = build(
        list(X.nodes) + list(fresh_ids),
        set(X.covers) | {(q, p) for q in fresh_ids},
    )
    r = PosetMap(Z, X, {**{x: x for x in X.nodes}, **{q: p for q in fresh_ids}})
    e = inclusion_map(X, Z)
    result = ElevationWitness(Z, p, X, r, e)
    result.validate()
    return result


def _fresh_ids(prefix: str, n: int, used: frozenset[NodeId]) -> list[NodeId]:
    out = []
    taken = set(used)
    i = 0
    while len(out) < n:
        cand = f"{prefix}.{i}"
        while cand in taken:
            cand += "x"
        out.append(cand)
        taken.add(cand)
        i += 1
    return out


def m_count(F: Poset, x: NodeId) -> int:
    """Minimal nodes strictly below x for which x is not the unique cover."""
    F._check_node(x)
    return sum(
        1
        for u in F.min_nodes()
        if F.lt(u, x) and F.upper_covers(u) != {x}
    )


@dataclass(frozen=True)
class GExtension:
    """One growth-and-glue move: f1 = height-zero gluing h of an elevation Z of f2."""

    f1: Poset
    f2: Poset
    Z: Poset
    e: PosetMap  # f2 -> Z elevation map
    h: PosetMap  # Z -> f1 height-zero gluing map
    pivot: NodeId  # the retracted node, in Z
    retraction: ElevationWitness

    def gluing_witness(self) -> GluingWitness:
        return GluingWitness(self.Z, self.f1, self.h, fiber_collection(self.h))


def _pivot(F: Poset) -> NodeId:
    chains = [c for c in F.maximal_chains() if len(c) - 1 == F.dim()]
    return min(c[1] for c in chains)


def gextension_step(F1: Poset) -> GExtension:
    """Realize F1 as a G-extension of a smaller poset.

    Pivot: the least height-one node on a maximal-length chain. While some
    minimal node under the pivot has another cover, split the least such node;
    the shared-minima count strictly drops each round. Then retract the
    pivot's down-set.
    """
    if not F1.nodes:
        raise EmptyPoset("cannot extend the empty poset")
    if F1.dim() == 0:
        raise ZeroDimensional("poset has dimension zero")

    F = F1
    y = _pivot(F1)
    h = identity_map(F1)
    m = m_count(F, y)
    while m > 0:
        u = min(
            u
            for u in F.min_nodes()
            if F.is_cover(u, y) and F.upper_covers(u) != {y}
        )
        split = split_for_cover(F, u, y)
        y_fiber = split.f_F.fiber(y)
        if len(y_fiber) != 1:
            raise InternalInvariantError(f"pivot {y!r} did not lift uniquely")
        F = split.F
        y = min(y_fiber)
        h = compose(split.f_F, h)
        m_new = m_count(F, y)
        if m_new >= m:
            raise InternalInvariantError(f"shared-minima count failed to drop: {m} -> {m_new}")
        m = m_new
        if F.height(y) != 1 or not F.on_maximal_length_chain(y):
            raise InternalInvariantError("pivot left the maximal-length chains while splitting")

    Z = F
    witness = GluingWitness(Z, F1, h, fiber_collection(h))
    if not is_height_zero_gluing(witness):
        raise InternalInvariantError("accumulated gluing is not height zero")
    report = verify_gluing(Z, F1, h, witness.collection)
    if not report:
        raise InternalInvariantError(f"accumulated map is not a gluing: {report.reason}")
    check_dim_min_preservation(witness)

    retraction = retract(Z, y)
    return GExtension(
        f1=F1,
        f2=retraction.X,
        Z=Z,
        e=retraction.e,
        h=h,
        pivot=y,
        retraction=retraction,
    )


def _eta(F: Poset) -> int:
    d = F.dim()
    return sum(1 for c in F.maximal_chains() if len(c) - 1 == d)


def _check_lex_decrease(before: Poset, after: Poset) -> None:
    b = (before.dim(), _eta(before))
    a = (after.dim(), _eta(after))
    if not a < b:
        raise InternalInvariantError(f"(dim, eta) failed to decrease: {b} -> {a}")


def reduce_dimension(F1: Poset) -> list[Poset]:
    """Successive G-extensions from F1 until the dimension strictly drops."""
    if not F1.nodes:
        raise EmptyPoset("cannot reduce the empty poset")
    if F1.dim() == 0:
        raise ZeroDimensional("poset has dimension zero")
    seq = [F1]
    while seq[-1].dim() >= F1.dim():
        step = gextension_step(seq[-1])
        _check_lex_decrease(seq[-1], step.f2)
        seq.append(step.f2)
    return seq


@dataclass(frozen=True)
class WrapOptions:
    single_max: bool = True
    single_min: bool = False
    min_height: int = 0
    min_dim: int = 0


def wrap(X: Poset, options: WrapOptions) -> tuple[Poset, PosetMap]:
    """Embed X as a saturated subset of a padded poset K.

    Optional moves, each preserving saturation of the inclusion: a chain of
    length min_height under every original minimal node, a single fresh
    bottom under everything, a single fresh top over everything, and a
    trailing chain below the least minimum until dim K >= min_dim.
    """
    if not X.nodes:
        raise EmptyPoset("cannot wrap the empty poset")
    nodes = set(X.nodes)
    covers = set(X.covers)
    counter = [0]

    def fresh() -> NodeId:
        while True:
            cand = f"w.{counter[0]}"
            counter[0] += 1
            if cand not in nodes:
                return cand

    def minima() -> list[NodeId]:
        lowers = {b for (_, b) in covers}
        return sorted(x for x in nodes if x not in lowers)

    def maxima() -> list[NodeId]:
        uppers = {a for (a, _) in covers}
        return sorted(x for x in nodes if x not in uppers)

    def chain_below(m: NodeId, length: int) -> None:
        anchor = m
        for _ in range(length):
            q = fresh()
            nodes.add(q)
            covers.add((q, anchor))
            anchor = q

    if options.min_height > 0:
        for m in sorted(X.min_nodes()):
            chain_below(m, options.min_height)
    if options.single_min:
        bot = fresh()
        for m in minima():
            covers.add((bot, m))
        nodes.add(bot)
    if options.single_max:
        top = fresh()
        for m in maxima():
            covers.add((m, top))
        nodes.add(top)

    K = build(nodes, covers)
    deficit = options.min_dim - K.dim()
    if deficit > 0:
        chain_below(min(minima()), deficit)
        K = build(nodes, covers)

    inclusion = inclusion_map(X, K)
    if not morphism.is_saturated_embedding(inclusion):
        raise InternalInvariantError("padding broke the saturated inclusion")
    if not morphism.is_saturated_subset(K, X.nodes):
        raise InternalInvariantError("padding broke saturation of the image")
    if options.min_height > 0 and any(K.height(x) < options.min_height for x in X.nodes):
        raise InternalInvariantError("height padding fell short")
    if K.dim() < options.min_dim:
        raise InternalInvariantError("dimension padding fell short")
    return K, inclusion


@dataclass(frozen=True)
class ElevateStep:
    kind = "elevate"
    target: NodeId
    fresh_ids: tuple[NodeId, ...]
    before: Optional[Poset] = None
    after: Optional[Poset] = None
    step_map: Optional[PosetMap] = None  # saturated inclusion before -> after


@dataclass(frozen=True)
class GlueStep:
    kind = "glue"
    partition: tuple[frozenset[NodeId], ...]
    before: Optional[Poset] = None
    after: Optional[Poset] = None
    step_map: Optional[PosetMap] = None  # height-zero gluing map before -> after


Step = ElevateStep | GlueStep


@dataclass(frozen=True)
class ConstructionScript:
    """Forward build recipe from a one-point poset, plus the tracked embedding.

    ``embedding`` maps the nodes of ``source`` (the poset the script was
    derived from, when known) into ``final``.
    """

    start: Poset
    steps: tuple[Step, ...]
    final: Poset
    embedding: dict[NodeId, NodeId]
    source: Optional[Poset] = None


@dataclass(frozen=True)
class ReplayReport:
    lines: tuple[str, ...]

    def __str__(self):
        return "\n".join(self.lines)


def decompose_to_point(
    X: Poset, options: Optional[WrapOptions] = None
) -> ConstructionScript:
    """Tear X down to a point and record the forward rebuild.

    X is first padded to K (a single fresh maximum is always added so the
    terminal poset is a point), then G-extension steps run until dimension
    zero. The reversed run becomes elevate/glue steps with canonical ids;
    identity gluings are dropped.
    """
    if not X.nodes:
        raise EmptyPoset("cannot decompose the empty poset")
    if options is None:
        options = WrapOptions()
    if not options.single_max:
        options = WrapOptions(True, options.single_min, options.min_height, options.min_dim)
    K, _ = wrap(X, options)

    backward: list[GExtension] = []
    current = K
    while current.dim() > 0:
        step = gextension_step(current)
        _check_lex_decrease(current, step.f2)
        backward.append(step)
        current = step.f2
    if len(current.nodes) != 1:
        raise InternalInvariantError("terminal poset is not a point despite the fresh maximum")

    # forward rebuild with canonical ids; sigma maps raw ids of the current
    # backward-pass poset to ids of the forward replica
    start = build(["p0"], [])
    sigma = {min(current.nodes): "p0"}
    replica = start
    steps: list[Step] = []
    for gx in reversed(backward):
        step_no = len(steps) + 1
        raw_fresh = sorted(gx.Z.down_set(gx.pivot) - {gx.pivot})
        target = sigma[gx.retraction.r(gx.pivot)]
        fresh = _fresh_ids(f"q{step_no}", len(raw_fresh), frozenset(replica.nodes))
        witness = elevate(replica, target, len(raw_fresh), fresh_ids=fresh)
        sigma = {
            **{z_raw: sigma[x_raw] for x_raw, z_raw in gx.e.assignment.items()},
            **dict(zip(raw_fresh, fresh)),
        }
        steps.append(
            ElevateStep(
                target=target,
                fresh_ids=tuple(fresh),
                before=replica,
                after=witness.Z,
                step_map=witness.e,
            )
        )
        replica = witness.Z

        partition = tuple(
            sorted((frozenset(sigma[d] for d in part) for part in fiber_collection(gx.h)), key=min)
        )
        if partition:
            gwitness = glue_along_collection(replica, partition)
            sigma = {gx.h(v): gwitness.map(sigma[v]) for v in gx.Z.nodes}
            steps.append(
                GlueStep(
                    partition=partition,
                    before=replica,
                    after=gwitness.target,
                    step_map=gwitness.map,
                )
            )
            replica = gwitness.target
        else:
            sigma = {gx.h(v): sigma[v] for v in gx.Z.nodes}

    if set(sigma) != set(K.nodes):
        raise InternalInvariantError("forward rebuild lost track of the padded poset")
    if (
        frozenset(sigma.values()) != frozenset(replica.nodes)
        or len(K.covers) != len(replica.covers)
        or any((sigma[a], sigma[b]) not in replica.covers for a, b in K.covers)
    ):
        raise InternalInvariantError("forward rebuild is not isomorphic to the padded poset")

    script = ConstructionScript(
        start=start,
        steps=tuple(steps),
        final=replica,
        embedding={x: sigma[x] for x in X.nodes},
        source=X,
    )
    _verify_certificate(script, replica)
    return script


def _verify_certificate(script: ConstructionScript, final: Poset) -> None:
    image = set(script.embedding.values())
    missing = [y for y in image if y not in final]
    if missing:
        raise BrokenEmbedding(f"embedding lands outside the final poset: {missing[:3]!r}")
    if script.source is not None:
        tracked = PosetMap(script.source, final, script.embedding)
        if not morphism.is_poset_map(tracked):
            raise BrokenEmbedding(
                "tracked map does not preserve order",
                pair=morphism.poset_map_violation(tracked),
            )
        pair = morphism.embedding_violation(tracked)
        if pair is not None:
            raise BrokenEmbedding("tracked map does not reflect order", pair=pair)
        pair = morphism.saturation_violation(tracked)
        if pair is not None:
            raise BrokenEmbedding("tracked map drops a cover", pair=pair)
    pair = morphism.saturated_subset_violation(final, image)
    if pair is not None:
        raise BrokenEmbedding("embedded image is not saturated", pair=pair)


def replay(script: ConstructionScript) -> tuple[Poset, ReplayReport]:
    """Re-execute a script from its start poset, re-verifying every move.

    Raises StepMismatch when a rebuilt poset differs from a recorded one or a
    step's preconditions fail, BrokenEmbedding when the tracked embedding does
    not certify.
    """
    lines = []
    current = script.start
    for i, step in enumerate(script.steps, start=1):
        if step.before is not None and step.before != current:
            raise StepMismatch(f"step {i}: recorded input poset differs from the replayed one")
        if isinstance(step, ElevateStep):
            try:
                witness = elevate(current, step.target, len(step.fresh_ids), step.fresh_ids)
            except InputError as exc:
                raise StepMismatch(f"step {i}: elevate failed: {exc}") from exc
            if step.step_map is not None and step.step_map != witness.e:
                raise StepMismatch(f"step {i}: recorded step map differs from the replayed one")
            current = witness.Z
            lines.append(
                f"step {i}: elevate {step.target} by {len(step.fresh_ids)} -> {len(current.nodes)} nodes"
            )
        elif isinstance(step, GlueStep):
            mins = current.min_nodes()
            for part in step.partition:
                if not part <= mins:
                    raise StepMismatch(f"step {i}: glue partition is not height zero")
            try:
                witness = glue_along_collection(current, step.partition)
            except InputError as exc:
                raise StepMismatch(f"step {i}: glue failed: {exc}") from exc
            report = verify_gluing(current, witness.target, witness.map, step.partition)
            if not report:
                raise StepMismatch(f"step {i}: gluing failed verification: {report.reason}")
            if not is_height_zero_gluing(witness):
                raise StepMismatch(f"step {i}: gluing is not height zero")
            if step.step_map is not None and step.step_map != witness.map:
                raise StepMismatch(f"step {i}: recorded step map differs from the replayed one")
            check_dim_min_preservation(witness)
            current = witness.target
            lines.append(
                f"step {i}: glue {len(step.partition)} classes -> {len(current.nodes)} nodes"
            )
        else:
            raise StepMismatch(f"step {i}: unknown step kind")
        if step.after is not None and step.after != current:
            raise StepMismatch(f"step {i}: replayed poset differs from the recorded one")

    if current != script.final:
        raise StepMismatch("final poset differs from the recorded one")
    _verify_certificate(script, current)
    lines.append(f"final: {len(current.nodes)} nodes, dim {current.dim()}")
    lines.append(f"embedding: {len(script.embedding)} nodes, saturated subset verified")
    if script.source is not None:
        lines.append("saturated embedding of the source verified")
    return current, ReplayReport(tuple(lines))
