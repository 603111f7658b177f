from __future__ import annotations

import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posetglue import (
    BrokenEmbedding,
    ConstructionScript,
    ElevateStep,
    InputError,
    NotHeightOne,
    NotMinimal,
    NotUniqueCover,
    PosetMap,
    StepMismatch,
    WrapOptions,
    ZeroDimensional,
    build,
    decompose_to_point,
    elevate,
    find_isomorphism,
    gextension_step,
    is_embedding,
    is_isomorphism,
    is_poset_map,
    is_saturated_embedding,
    is_saturated_subset,
    m_count,
    reduce_dimension,
    replay,
    retract,
    verify_gluing,
    wrap,
)
from posetglue.gluing import fiber_collection, is_height_zero_gluing
from posetglue.generate import random_poset


def chain(*ids):
    return build(ids, list(zip(ids, ids[1:])))


def eta(P):
    d = P.dim()
    return sum(1 for c in P.maximal_chains() if len(c) - 1 == d)


class TestRetract:
    def test_inverted_vee_to_point(self):
        Z = build(["z", "q1", "q2"], [("q1", "z"), ("q2", "z")])
        w = retract(Z, "z")
        assert len(w.X.nodes) == 1

    def test_gext_z_retract_at_5_gives_f2_exactly(self, gext_z, gext_f2):
        w = retract(gext_z, "5")
        assert w.X == gext_f2

    def test_three_node_vee_retracts_to_point(self, gext_f1):
        V = build(["1", "2", "4"], [("4", "1"), ("2", "1")])
        w = retract(V, "1")
        assert len(w.X.nodes) == 1

    def test_height_requirement(self, diamond):
        with pytest.raises(NotHeightOne):
            retract(diamond, "4")

    def test_unique_cover_requirement(self, gext_f1):
        # 6 < 5 but 6 is also covered by 2
        with pytest.raises(NotUniqueCover) as err:
            retract(gext_f1, "5")
        assert err.value.node in {"6", "7"}

    def test_witness_invariants(self, gext_z):
        w = retract(gext_z, "5")
        assert all(w.r(w.e(x)) == x for x in w.X.nodes)
        assert w.e(w.r("5")) == "5"
        assert is_embedding(w.e)
        assert frozenset(w.Z.nodes) == w.Z.down_set("5") | w.e.image()


class TestElevate:
    def test_point_by_two_gives_vee(self):
        P = build(["p"], [])
        w = elevate(P, "p", 2)
        assert len(w.Z.nodes) == 3
        assert w.Z.min_nodes() == frozenset(w.Z.nodes) - {"p"}
        assert w.Z.max_nodes() == {"p"}

    def test_growth_sequence_first_step(self):
        # the first growth move: one point sprouts two minima
        P = build(["1"], [])
        w = elevate(P, "1", 2, fresh_ids=["2", "4"])
        expected = build(["1", "2", "4"], [("2", "1"), ("4", "1")])
        assert w.Z == expected

    def test_roundtrip_retract_elevate(self, diamond):
        w = elevate(diamond, "6", 3)
        back = retract(w.Z, "6")
        iso = find_isomorphism(back.X, diamond)
        assert iso is not None and is_isomorphism(iso)

    def test_min_decomposition(self, diamond_split):
        w = elevate(diamond_split, "6L", 2)
        fresh = frozenset(w.Z.nodes) - frozenset(diamond_split.nodes)
        assert w.Z.min_nodes() == fresh | (diamond_split.min_nodes() - {"6L"})

    def test_not_minimal_rejected(self, diamond):
        with pytest.raises(NotMinimal):
            elevate(diamond, "5", 1)

    def test_fresh_id_collision_rejected(self, diamond):
        with pytest.raises(InputError):
            elevate(diamond, "6", 1, fresh_ids=["5"])

    @pytest.mark.parametrize("seed", range(15))
    def test_dim_relation(self, seed):
        rng = random.Random(seed)
        X = random_poset(seed, 6, 0.35)
        p = rng.choice(sorted(X.min_nodes()))
        w = elevate(X, p, rng.randint(1, 3))
        up_depth = max(len(c) - 1 - c.index(p) for c in X.maximal_chains() if p in c)
        assert w.Z.dim() == max(X.dim(), up_depth + 1)


class TestElevationUniqueness:
    @pytest.mark.parametrize("seed", range(20))
    def test_section_unique_among_candidates(self, seed):
        rng = random.Random(seed)
        X = random_poset(seed, 5, 0.4)
        p = rng.choice(sorted(X.min_nodes()))
        w = elevate(X, p, rng.randint(1, 3))
        fibers = [sorted(w.r.fiber(x)) for x in w.X.nodes]
        count = 0
        for choice in product(*fibers):
            cand = PosetMap(w.X, w.Z, dict(zip(w.X.nodes, choice)))
            if not is_poset_map(cand):
                continue
            if cand(w.r(w.z)) != w.z:
                continue
            count += 1
            assert cand.assignment == w.e.assignment
        assert count == 1


class TestMCount:
    def test_vee_apex(self, vee):
        assert m_count(vee, "t") == 0

    def test_gext_f1_node5(self, gext_f1):
        assert m_count(gext_f1, "5") == 2

    def test_gext_z_node5(self, gext_z):
        assert m_count(gext_z, "5") == 0

    def test_unknown_node_rejected(self, gext_f1):
        from posetglue import UnknownNode

        with pytest.raises(UnknownNode):
            m_count(gext_f1, "zz")

    def test_matches_direct_enumeration(self, gext_f1):
        expected = sum(
            1
            for u in gext_f1.min_nodes()
            if gext_f1.lt(u, "5") and gext_f1.upper_covers(u) != {"5"}
        )
        assert m_count(gext_f1, "5") == expected == 2


class TestGExtensionStep:
    def test_vee_direct(self, vee):
        gx = gextension_step(vee)
        assert len(gx.f2.nodes) == 1
        assert gx.Z == vee
        assert gx.h.assignment == {x: x for x in vee.nodes}

    def test_gext_f1_matches_figures(self, gext_f1, gext_z, gext_f2):
        gx = gextension_step(gext_f1)
        assert find_isomorphism(gx.Z, gext_z) is not None
        assert find_isomorphism(gx.f2, gext_f2) is not None
        witness = gx.gluing_witness()
        assert is_height_zero_gluing(witness)
        assert verify_gluing(gx.Z, gext_f1, gx.h, witness.collection)
        assert is_embedding(gx.e)

    def test_zero_dimensional_rejected(self):
        with pytest.raises(ZeroDimensional):
            gextension_step(build(["a", "b"], []))

    @pytest.mark.parametrize("seed", range(25))
    def test_verified_g_extension_on_random_posets(self, seed):
        X = random_poset(seed, 7, 0.35)
        if X.dim() == 0:
            return
        gx = gextension_step(X)
        # elevation half
        assert gx.retraction.Z == gx.Z
        assert gx.retraction.X == gx.f2
        # gluing half
        assert is_height_zero_gluing(gx.gluing_witness())
        assert verify_gluing(gx.Z, X, gx.h, fiber_collection(gx.h))


class TestReduceDimension:
    def test_vee(self, vee):
        seq = reduce_dimension(vee)
        assert len(seq) == 2
        assert seq[0] == vee
        assert len(seq[1].nodes) == 1

    def test_gext_f1_drops_within_eta_plus_one_steps(self, gext_f1):
        assert gext_f1.dim() == 3
        assert eta(gext_f1) == 2
        seq = reduce_dimension(gext_f1)
        assert seq[-1].dim() < 3
        assert len(seq) - 1 <= eta(gext_f1) + 1

    def test_chain_single_step(self):
        P = chain("a", "b", "c", "d")
        seq = reduce_dimension(P)
        assert len(seq) == 2
        assert seq[1].dim() == P.dim() - 1

    def test_zero_dimensional_rejected(self):
        with pytest.raises(ZeroDimensional):
            reduce_dimension(build(["a"], []))

    @pytest.mark.parametrize("seed", range(20))
    def test_lex_decrease_every_step(self, seed):
        X = random_poset(seed, 7, 0.3)
        if X.dim() == 0:
            return
        gx = gextension_step(X)
        assert (gx.f2.dim(), eta(gx.f2)) < (X.dim(), eta(X))


class TestWrap:
    def test_point_single_max(self):
        P = build(["p"], [])
        K, f = wrap(P, WrapOptions(single_max=True))
        assert len(K.nodes) == 2
        assert K.dim() == 1

    def test_single_max_adds_exactly_one_node_even_if_present(self, diamond):
        # diamond already has one maximal node; the fresh top is still added
        K, f = wrap(diamond, WrapOptions(single_max=True))
        assert len(K.nodes) == len(diamond.nodes) + 1
        assert len(K.max_nodes()) == 1

    def test_x9_full_padding(self, x9):
        K, f = wrap(
            x9,
            WrapOptions(single_max=True, single_min=True, min_height=2, min_dim=3),
        )
        assert len(K.nodes) >= 12
        assert len(K.max_nodes()) == 1
        assert len(K.min_nodes()) == 1
        assert K.dim() >= 3
        assert all(K.height(x) >= 2 for x in x9.nodes)
        assert is_saturated_embedding(f)
        assert is_saturated_subset(K, f.image())

    def test_min_dim_padding(self):
        P = build(["p"], [])
        K, f = wrap(P, WrapOptions(single_max=True, min_dim=4))
        assert K.dim() >= 4

    @pytest.mark.parametrize("seed", range(15))
    def test_inclusion_saturated_on_random_posets(self, seed):
        X = random_poset(seed, 6, 0.35)
        K, f = wrap(X, WrapOptions(single_max=True, single_min=True, min_height=2, min_dim=3))
        assert is_saturated_embedding(f)
        assert is_saturated_subset(K, f.image())


class TestDecomposeToPoint:
    def test_point(self):
        P = build(["p"], [])
        script = decompose_to_point(P)
        # the wrap adds a top, so one elevate step rebuilds the 2-chain
        assert len(script.steps) == 1
        assert isinstance(script.steps[0], ElevateStep)
        final, report = replay(script)
        assert len(final.nodes) == 2

    def test_two_antichain(self):
        P = build(["a", "b"], [])
        script = decompose_to_point(P)
        assert len(script.steps) == 1
        assert len(script.steps[0].fresh_ids) == 2
        final, _ = replay(script)
        assert len(final.nodes) == 3

    def test_x9_certificate(self, x9):
        script = decompose_to_point(x9)
        final, report = replay(script)
        assert final == script.final
        image = set(script.embedding.values())
        assert is_saturated_subset(final, image)
        tracked = PosetMap(x9, final, script.embedding)
        assert is_saturated_embedding(tracked)

    def test_steps_chain(self, x9):
        script = decompose_to_point(x9)
        current = script.start
        for step in script.steps:
            assert step.before == current
            current = step.after
        assert current == script.final

    def test_step_maps_recorded_and_checked(self, x9):
        script = decompose_to_point(x9)
        for step in script.steps:
            assert step.step_map is not None
            assert step.step_map.source == step.before
            assert step.step_map.target == step.after
            if isinstance(step, ElevateStep):
                assert is_saturated_embedding(step.step_map)
        replay(script)

    def test_single_max_is_forced(self, vee):
        script = decompose_to_point(vee, WrapOptions(single_max=False))
        final, _ = replay(script)
        assert len(final.max_nodes()) == 1

    def test_adversarial_input_ids(self):
        # input ids shaped like the generated ones must not collide
        P = build(["p0", "q1.0", "w.0"], [("q1.0", "p0"), ("w.0", "p0")])
        script = decompose_to_point(P)
        final, _ = replay(script)
        tracked = PosetMap(P, final, script.embedding)
        assert is_saturated_embedding(tracked)


class TestReplay:
    def test_decompose_scripts_replay(self, diamond):
        script = decompose_to_point(diamond)
        final, report = replay(script)
        assert "saturated subset verified" in str(report)

    def test_handwritten_script_rebuilds_x9_exactly(self, x9):
        from posetglue.documents import parse_script
        from conftest import FIXTURES

        script = parse_script((FIXTURES / "x9-build.script").read_text())
        final, report = replay(script)
        assert final == x9

    def test_corrupted_final_detected(self, diamond):
        script = decompose_to_point(diamond)
        doctored_covers = set(script.final.covers)
        doctored_covers.pop()
        doctored = ConstructionScript(
            start=script.start,
            steps=tuple(
                type(s)(**{**s.__dict__, "before": None, "after": None})
                for s in script.steps
            ),
            final=build(script.final.nodes, doctored_covers),
            embedding=script.embedding,
            source=script.source,
        )
        with pytest.raises(StepMismatch):
            replay(doctored)

    def test_corrupted_intermediate_detected(self, diamond):
        script = decompose_to_point(diamond)
        steps = list(script.steps)
        target_idx = next(i for i, s in enumerate(steps) if isinstance(s, ElevateStep))
        step = steps[target_idx]
        covers = set(step.after.covers)
        covers.pop()
        steps[target_idx] = ElevateStep(
            target=step.target,
            fresh_ids=step.fresh_ids,
            before=step.before,
            after=build(step.after.nodes, covers),
        )
        doctored = ConstructionScript(
            start=script.start,
            steps=tuple(steps),
            final=script.final,
            embedding=script.embedding,
            source=script.source,
        )
        with pytest.raises(StepMismatch):
            replay(doctored)

    def test_bad_elevate_target_detected(self, diamond):
        script = decompose_to_point(diamond)
        steps = list(script.steps)
        step = steps[0]
        steps[0] = ElevateStep(target="missing", fresh_ids=step.fresh_ids)
        doctored = ConstructionScript(
            start=script.start,
            steps=tuple(steps),
            final=script.final,
            embedding=script.embedding,
            source=script.source,
        )
        with pytest.raises(StepMismatch):
            replay(doctored)

    def test_broken_embedding_detected(self, x9):
        script = decompose_to_point(x9)
        bad = dict(script.embedding)
        ks = sorted(bad)
        bad[ks[0]], bad[ks[1]] = bad[ks[1]], bad[ks[0]]
        doctored = ConstructionScript(
            start=script.start,
            steps=script.steps,
            final=script.final,
            embedding=bad,
            source=script.source,
        )
        with pytest.raises(BrokenEmbedding):
            replay(doctored)


def crown(n):
    nodes = [f"b{i}" for i in range(n)] + [f"t{i}" for i in range(n)]
    rel = [(f"b{i}", f"t{j}") for i in range(n) for j in range(n) if i != j]
    return build(nodes, rel)


def fence(n):
    nodes = [f"f{i}" for i in range(n)]
    rel = [
        (f"f{i}", f"f{i + 1}") if i % 2 == 0 else (f"f{i + 1}", f"f{i}")
        for i in range(n - 1)
    ]
    return build(nodes, rel)


class TestStructuredFamilies:
    # crowns maximize shared minima per cover; a crown plus a bottom node is
    # the family where a finer per-chain split stalls the (dim, eta) descent

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_crowns_certify(self, n):
        X = crown(n)
        script = decompose_to_point(X)
        final, _ = replay(script)
        assert is_saturated_embedding(PosetMap(X, final, script.embedding))

    @pytest.mark.parametrize("n", [3, 5, 7, 9])
    def test_fences_certify(self, n):
        X = fence(n)
        script = decompose_to_point(X)
        final, _ = replay(script)
        assert is_saturated_embedding(PosetMap(X, final, script.embedding))

    def test_bipartite_stack_certifies(self):
        nodes = [f"x{i}" for i in range(3)] + [f"y{i}" for i in range(3)] + [f"z{i}" for i in range(3)]
        rel = [(f"x{i}", f"y{j}") for i in range(3) for j in range(3)]
        rel += [(f"y{i}", f"z{j}") for i in range(3) for j in range(3)]
        X = build(nodes, rel)
        script = decompose_to_point(X)
        final, _ = replay(script)
        assert is_saturated_embedding(PosetMap(X, final, script.embedding))

    def test_crowned_bottom_strict_descent(self):
        # bottom node under every crown minimum: dim 3 wrapped, the measure
        # must still fall strictly at every extension step
        X = crown(2)
        nodes = list(X.nodes) + ["bot"]
        rel = list(X.covers) + [("bot", b) for b in X.min_nodes()]
        P = build(nodes, rel)
        seq = [P]
        while seq[-1].dim() > 0:
            gx = gextension_step(seq[-1])
            assert (gx.f2.dim(), eta(gx.f2)) < (seq[-1].dim(), eta(seq[-1]))
            seq.append(gx.f2)
        assert len(seq[-1].nodes) >= 1


class TestSeededRoundTrips:
    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=50, deadline=None)
    def test_elevate_retract_round_trip(self, seed):
        rng = random.Random(seed)
        X = random_poset(seed, 5, 0.4)
        p = rng.choice(sorted(X.min_nodes()))
        w = elevate(X, p, rng.randint(1, 3))
        back = retract(w.Z, p)
        assert find_isomorphism(back.X, X) is not None


class TestEndToEndSmall:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_all_posets_up_to_four_nodes(self, n):
        from posetglue.generate import all_posets_upto_iso

        for P in all_posets_upto_iso(n):
            script = decompose_to_point(P)
            final, _ = replay(script)
            tracked = PosetMap(P, final, script.embedding)
            assert is_saturated_embedding(tracked)
