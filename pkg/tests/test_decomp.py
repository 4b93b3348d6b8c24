"""Join containment, decomposition numbers, strictness, part structure."""

import itertools
import random

import pytest

from hgfactor import (
    BOUNDED,
    DecWitness,
    Decomposition,
    EXACT,
    EnumSpec,
    GeneratedBounded,
    HgError,
    all_decompositions,
    canonical_form,
    dec_number,
    embed_induced,
    enumerate_hypergraphs,
    enumerate_partitions,
    forbidden_property,
    ind_parts,
    induced,
    is_decomposition,
    is_isomorphic,
    is_strict,
    is_uniquely_decomposable,
    join_subset_of,
    member,
    min_forbidden_order,
    multiplicity,
    respects,
    respects_uniformly,
    simple_graph,
    simple_universe,
    strictify,
    strictness_witness,
    unique_decomposition,
)
from helpers import (
    brute_strict,
    image_triples,
    mapped_triples,
    oracle_join_fails,
    random_graph,
)

SEED = 995511


# --- decomposition container ------------------------------------------------

def test_decomposition_validation_and_ordering():
    with pytest.raises(ValueError):
        Decomposition(({0}, set()))
    with pytest.raises(ValueError):
        Decomposition(({0, 1}, {1, 2}))
    d = Decomposition(({3, 1}, {0, 2}))
    assert d.parts == (frozenset({0, 2}), frozenset({1, 3}))
    assert str(d) == "{0,2}|{1,3}"
    assert len(d) == 2
    assert d.ground == frozenset(range(4))
    assert d.key() == ((0, 2), (1, 3))


# --- join containment ---------------------------------------------------

def test_join_goldens(g, props):
    assert join_subset_of(props.trifree, [g.k1, g.k1])
    assert join_subset_of(props.edgeless, [g.k1])
    chk = join_subset_of(props.trifree, [g.k2, g.k1])
    assert not chk
    assert chk.confidence == EXACT
    w = chk.witness
    assert isinstance(w, DecWitness)
    assert w.forbidden == props.trifree.forbidden[0]
    assert tuple(len(b) for b in w.split) == (2, 1)


def test_join_witness_embeddings_are_real(g, props):
    chk = join_subset_of(props.trifree, [g.c4, g.k2])
    assert not chk
    parts = [g.c4, g.k2]
    for rec in chk.witness.components:
        comp_graph = induced(chk.witness.forbidden, rec.component)
        m = rec.embedding.mapping
        assert mapped_triples(comp_graph, m) \
            == image_triples(parts[rec.part_index], m)


def test_disconnected_slice_may_outgrow_its_part(g, props, u):
    # P3 splits into its two end vertices plus the centre; the ends form
    # an edgeless pair whose components land in separate copies of a
    # single-vertex part, so the join is not P3-free
    chk = join_subset_of(props.p3free, [g.k1, g.k1])
    assert not chk
    sizes = sorted(len(b) for b in chk.witness.split)
    assert sizes == [1, 2]
    # same effect with a single part and a disconnected forbidden graph
    m2 = forbidden_property(u, [g.two_k2])
    assert not join_subset_of(m2, [g.k2])
    assert dec_number(g.k2, m2).value == 0


def test_join_exact_matches_oracle(u, g, props):
    rng = random.Random(SEED)
    flips = 0
    for _ in range(30):
        a = random_graph(u, rng.randint(1, 3), 0.5, rng)
        b = random_graph(u, rng.randint(1, 3), 0.5, rng)
        for p in [props.trifree, props.p3free]:
            got = bool(join_subset_of(p, [a, b]))
            want = not oracle_join_fails(p.forbidden, [a, b], k_max=3)
            assert got == want
            flips += not got
    assert flips > 5


def test_join_bounded_agrees_with_exact_for_forbidden_sets(u, props):
    rng = random.Random(SEED + 1)
    for _ in range(20):
        a = random_graph(u, rng.randint(1, 3), 0.5, rng)
        b = random_graph(u, rng.randint(1, 3), 0.5, rng)
        exact = bool(join_subset_of(props.trifree, [a, b], EXACT))
        bounded = join_subset_of(props.trifree, [a, b], BOUNDED, k_max=3)
        assert exact == bool(bounded)
        if bounded:
            assert bounded.confidence == "bounded k_max=3"


def test_join_bounded_product_counterexample(g, props):
    chk = join_subset_of(props.two_colour, [g.k2, g.k1], BOUNDED, k_max=2)
    assert not chk
    assert chk.counterexample is not None
    assert not member(props.two_colour, chk.counterexample)


def test_join_mode_errors(g, props):
    with pytest.raises(HgError):
        join_subset_of(props.two_colour, [g.k1], EXACT)
    with pytest.raises(ValueError):
        join_subset_of(props.trifree, [])
    with pytest.raises(ValueError):
        join_subset_of(props.trifree, [g.k1], mode="quick")


def test_is_decomposition(g, props):
    assert is_decomposition(g.c4, [{0, 2}, {1, 3}], props.trifree)
    assert not is_decomposition(g.c4, [{0, 1}, {2, 3}], props.trifree)
    with pytest.raises(HgError):
        is_decomposition(g.c4, [{0, 1}], props.trifree)


# --- decomposition numbers ---------------------------------------------------

def test_dec_goldens(g, props):
    assert dec_number(g.k3, props.trifree).value == 0  # not a member
    assert dec_number(g.k2, props.trifree).value == 2
    assert dec_number(g.c4, props.trifree).value == 2
    assert dec_number(g.c5, props.trifree).value == 1
    assert dec_number(g.two_k2, props.trifree).value == 2
    assert dec_number(g.k1, props.edgeless).value == 1
    assert dec_number(g.k0, props.trifree).value == 0


def test_dec_reports_a_valid_maximizer(g, props):
    res = dec_number(g.c4, props.trifree)
    assert str(res.decomposition) == "{0,2}|{1,3}"
    assert is_decomposition(g.c4, res.decomposition, props.trifree)
    assert res.confidence == EXACT
    assert int(res) == 2


def test_dec_stays_below_min_forbidden_order(u, props):
    rng = random.Random(SEED + 2)
    for _ in range(25):
        g_ = random_graph(u, rng.randint(1, 5), 0.4, rng)
        for p in [props.edgeless, props.trifree, props.bip]:
            res = dec_number(g_, p)
            assert res.value < min_forbidden_order(p)


def test_dec_equals_max_over_all_partitions(u, props):
    # lattice walk must agree with a flat scan of every partition
    rng = random.Random(SEED + 3)
    for _ in range(15):
        g_ = random_graph(u, rng.randint(1, 5), 0.45, rng)
        for p in [props.trifree, props.p3free]:
            best = 0
            for parts in enumerate_partitions(g_.vertices, g_.n):
                if member(p, g_) and is_decomposition(g_, Decomposition(parts), p):
                    best = max(best, len(parts))
            assert dec_number(g_, p).value == best


def test_merging_parts_keeps_validity(u, props):
    # coarsening: any two parts of a valid decomposition can be merged
    rng = random.Random(SEED + 4)
    for _ in range(15):
        g_ = random_graph(u, rng.randint(2, 5), 0.45, rng)
        for p in [props.trifree, props.p3free]:
            if not member(p, g_):
                continue
            for parts in enumerate_partitions(g_.vertices, g_.n):
                d = Decomposition(parts)
                if not is_decomposition(g_, d, p):
                    continue
                for i, j in itertools.combinations(range(len(d.parts)), 2):
                    merged = [pt for k, pt in enumerate(d.parts) if k not in (i, j)]
                    merged.append(d.parts[i] | d.parts[j])
                    assert is_decomposition(g_, Decomposition(merged), p)


def test_dec_bounded_mode_on_products(g, props):
    res = dec_number(g.c4, props.two_colour, BOUNDED, k_max=1)
    assert res.value == 2
    assert res.confidence == "bounded k_max=1"
    assert dec_number(g.k3, props.two_colour, BOUNDED, k_max=1).value == 0


def test_all_decompositions_golden(g, props):
    got = all_decompositions(g.two_k2, props.trifree, 2)
    assert [str(d) for d in got] == ["{0,2}|{1,3}", "{0,3}|{1,2}"]
    assert all_decompositions(g.k3, props.trifree, 2) == []
    assert all_decompositions(g.c4, props.trifree, 2) == \
        [Decomposition(({0, 2}, {1, 3}))]


def test_uniqueness_goldens(g, props):
    assert is_uniquely_decomposable(g.c4, props.trifree)
    assert not is_uniquely_decomposable(g.two_k2, props.trifree)
    assert is_uniquely_decomposable(g.k1, props.edgeless)  # max 1 part
    assert not is_uniquely_decomposable(g.k3, props.trifree)  # non-member
    assert not is_uniquely_decomposable(g.k0, props.trifree)
    assert unique_decomposition(g.c4, props.trifree) \
        == Decomposition(({0, 2}, {1, 3}))
    with pytest.raises(HgError):
        unique_decomposition(g.two_k2, props.trifree)
    with pytest.raises(HgError):
        unique_decomposition(g.k3, props.trifree)


# --- strictness ---------------------------------------------------------

def test_strictness_goldens(g, props):
    assert not is_strict(g.k1, props.trifree)
    assert is_strict(g.k2, props.trifree)
    assert is_strict(g.k1, props.edgeless)
    assert is_strict(g.c5, props.trifree)
    with pytest.raises(HgError):
        is_strict(g.k3, props.trifree)


def test_strictness_matches_brute_force(u, props):
    rng = random.Random(SEED + 5)
    for _ in range(25):
        g_ = random_graph(u, rng.randint(0, 4), 0.4, rng)
        for p in [props.edgeless, props.trifree, props.p3free]:
            if not member(p, g_):
                continue
            assert is_strict(g_, p) == brute_strict(g_, lambda h: bool(member(p, h)))


def test_strictness_brute_force_for_products(g, props):
    assert is_strict(g.k2, props.two_colour)
    assert not is_strict(g.k1, props.two_colour)
    assert brute_strict(g.k2, lambda h: bool(member(props.two_colour, h)))


def test_strictness_witness_structure(g, props):
    w = strictness_witness(g.k2, props.trifree)
    assert w.forbidden == props.trifree.forbidden[0]
    rest = w.rest_to_graph()
    assert len(rest) == 2 and w.removed_vertex not in rest
    assert set(rest.values()) <= set(g.k2.vertices)
    assert strictness_witness(g.k1, props.trifree) is None


def test_strictify_properties(u, props):
    rng = random.Random(SEED + 6)
    for _ in range(20):
        g_ = random_graph(u, rng.randint(0, 4), 0.3, rng)
        for p in [props.trifree, props.bip]:
            if not member(p, g_):
                continue
            s = strictify(g_, p)
            assert member(p, s)
            assert is_strict(s, p)
            assert s.n < g_.n + min_forbidden_order(p)
            assert induced(s, range(g_.n)) == g_  # original kept as a prefix


def test_strictify_fixed_point(g, props):
    assert strictify(g.k2, props.trifree) == g.k2


# --- part structure -------------------------------------------------------

def test_ind_parts_golden(g, props):
    parts = ind_parts(g.c4, props.trifree)
    assert len(parts) == 2
    assert all(p.n == 2 and not p.edges for p in parts)


def test_multiplicity_golden(g, props):
    assert multiplicity(g.k1, g.c4, props.trifree) == 2
    assert multiplicity(g.k2, g.c4, props.trifree) == 0
    assert multiplicity(g.e2, g.c4, props.trifree) == 2


def test_respects(g):
    d0 = Decomposition(({0, 2}, {1, 3}))
    assert respects(Decomposition(({0,}, {2}, {1, 3})), d0)
    assert respects(d0, d0)
    assert not respects(Decomposition(({0, 1}, {2, 3})), d0)
    with pytest.raises(HgError):
        respects(Decomposition(({0, 1},)), d0)


def test_respects_uniformly():
    # two copies of a two-vertex base: copy 0 on {0,1}, copy 1 on {2,3}
    copies = [frozenset({0, 1}), frozenset({2, 3})]
    d0 = Decomposition(({0, 2}, {1, 3}))  # base part 0 in both copies, part 1 in both
    aligned = Decomposition(({0, 2}, {1, 3}))
    assert respects_uniformly(aligned, d0, copies)
    crossed = Decomposition(({0, 3}, {1, 2}))
    assert not respects_uniformly(crossed, d0, copies)
    with pytest.raises(HgError):
        respects_uniformly(aligned, d0, [frozenset({0, 1})])


def test_respects_uniformly_mixed_copy_choice():
    # part {0,3} takes d0-part 0 in copy 0 but d0-part 1 in copy 1, so it
    # respects per copy yet not uniformly
    copies = [frozenset({0, 1}), frozenset({2, 3})]
    d0 = Decomposition(({0, 3}, {1, 2}))
    d = Decomposition(({0, 2}, {1, 3}))
    for part in d.parts:
        for c in copies:
            assert any(part & c <= ref for ref in d0.parts)
    assert not respects_uniformly(d, d0, copies)


# --- generated properties in the decomposition machinery ------------------

def test_dec_with_generated_property(u, g):
    q = GeneratedBounded(u, (g.two_k2,), 4)
    res = dec_number(g.k2, q, BOUNDED, k_max=2)
    assert res.value >= 1
    assert dec_number(g.k3, q, BOUNDED, k_max=2).value == 0
