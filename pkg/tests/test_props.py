"""Property representations: membership, witnesses, additivity, files."""

import random

import pytest

from hgfactor import (
    BoundExceededError,
    FiniteForbidden,
    ForbiddenWitness,
    FormatError,
    GeneratedBounded,
    HgError,
    PartitionAssignment,
    ProductProperty,
    UniverseMismatchError,
    canonical_form,
    forbidden_property,
    forbidden_up_to,
    format_property,
    is_additive,
    load_property,
    member,
    min_forbidden_order,
    minimize_forbidden,
    parse_property,
    partition_solve,
    save_property,
    simple_graph,
)
from helpers import (
    brute_member_ff,
    image_triples,
    mapped_triples,
    random_graph,
    solve_by_assignment,
)

SEED = 77003


# --- construction and validation -------------------------------------------

def test_forbidden_set_validation(u, g):
    with pytest.raises(ValueError):
        FiniteForbidden(u, ())
    with pytest.raises(ValueError):
        FiniteForbidden(u, (g.k1,))  # single vertices cannot be forbidden
    with pytest.raises(ValueError):
        FiniteForbidden(u, (g.k2, g.k2))
    with pytest.raises(ValueError):
        FiniteForbidden(u, (g.p3, g.c4))  # P3 sits induced in C4


def test_forbidden_property_minimizes(u, g):
    p = forbidden_property(u, [g.k3, g.k2, g.c4])
    assert p.forbidden == (canonical_form(g.k2),)


def test_minimize_forbidden_goldens(g):
    assert minimize_forbidden([g.k2, g.k3]) == (canonical_form(g.k2),)
    got = minimize_forbidden([g.p3, g.k3, g.c4])
    assert len(got) == 2
    assert {h.n for h in got} == {3}


def test_product_validation(u, props):
    with pytest.raises(ValueError):
        ProductProperty((props.edgeless,))
    du = forbidden_property(u, [simple_graph(2, [(0, 1)])])
    assert ProductProperty((du, props.trifree)).universe == u


def test_generated_bounded_validation(u, g):
    with pytest.raises(ValueError):
        GeneratedBounded(u, (), 3)
    with pytest.raises(ValueError):
        GeneratedBounded(u, (g.k2,), 0)
    q = GeneratedBounded(u, (g.c4, g.k2, canonical_form(g.k2)), 4)
    assert len(q.generators) == 2  # duplicates collapse
    assert [h.n for h in q.generators] == [2, 4]


# --- membership -------------------------------------------------------------

def test_membership_goldens(g, props):
    assert member(props.edgeless, g.e3)
    assert not member(props.edgeless, g.k2)
    assert member(props.trifree, g.c5)
    assert not member(props.trifree, g.k3)
    assert member(props.two_colour, g.c4)
    assert not member(props.two_colour, g.k3)
    assert member(props.bip, g.c4)
    assert member(props.bip, g.two_k2)


def test_null_graph_in_every_property(g, props, u):
    for p in [props.edgeless, props.trifree, props.bip, props.two_colour,
              GeneratedBounded(u, (g.k2,), 3)]:
        assert member(p, g.k0)


def test_forbidden_witness_is_a_real_embedding(g, props):
    res = member(props.bip, g.c5)
    assert not res
    w = res.detail
    assert isinstance(w, ForbiddenWitness)
    assert w.forbidden in props.bip.forbidden
    m = w.embedding.mapping
    assert mapped_triples(w.forbidden, m) == image_triples(g.c5, m)


def test_product_witness_solves(g, props):
    res = member(props.two_colour, g.c4)
    pa = res.detail
    assert isinstance(pa, PartitionAssignment)
    assert pa.parts == (frozenset({0, 2}), frozenset({1, 3}))


def test_membership_matches_brute_force(u, props):
    rng = random.Random(SEED)
    for _ in range(80):
        g_ = random_graph(u, rng.randint(0, 5), 0.4, rng)
        for p in [props.edgeless, props.trifree, props.bip]:
            assert bool(member(p, g_)) == brute_member_ff(p.forbidden, g_)


def test_membership_universe_mismatch(props):
    from hgfactor import EdgeKind, Universe, Hypergraph
    other = Universe(frozenset({EdgeKind.UNORDERED}), frozenset({2}), ("x",))
    with pytest.raises(UniverseMismatchError):
        member(props.edgeless, Hypergraph(other, 1, frozenset()))


def test_generated_bounded_membership(u, g):
    q = GeneratedBounded(u, (g.c4,), 4)
    assert member(q, g.p3)
    assert member(q, g.e2)
    assert not member(q, g.k3)
    assert member(q, g.c4).detail == canonical_form(g.c4)
    with pytest.raises(BoundExceededError):
        member(q, g.c5)


# --- partition solving ------------------------------------------------------

def test_partition_solve_goldens(g, props):
    pa = partition_solve(g.c4, [props.edgeless, props.edgeless])
    assert pa.parts == (frozenset({0, 2}), frozenset({1, 3}))
    pa = partition_solve(g.k3, [props.trifree, props.edgeless])
    assert pa.parts == (frozenset({0, 1}), frozenset({2}))
    assert partition_solve(g.k3, [props.edgeless, props.edgeless]) is None


def test_partition_solve_allows_empty_blocks(g, props):
    pa = partition_solve(g.k1, [props.edgeless, props.edgeless])
    assert pa.parts == (frozenset({0}), frozenset())


def test_partition_solve_matches_assignment_scan(u, props):
    rng = random.Random(SEED + 1)
    fns = [lambda h: bool(member(props.edgeless, h)),
           lambda h: bool(member(props.trifree, h))]
    for _ in range(50):
        g_ = random_graph(u, rng.randint(1, 5), 0.45, rng)
        got = partition_solve(g_, [props.edgeless, props.trifree])
        want = solve_by_assignment(g_, fns)
        assert (got is None) == (want is None)
        if got is not None:
            assert got.assignment_vector() == want


def test_partition_assignment_validation():
    with pytest.raises(ValueError):
        PartitionAssignment(({0, 1}, {1, 2}))
    pa = PartitionAssignment(({1, 3}, {0, 2}))
    assert pa.assignment_vector() == (1, 0, 1, 0)


# --- derived facts ----------------------------------------------------------

def test_min_forbidden_order(props):
    assert min_forbidden_order(props.edgeless) == 2
    assert min_forbidden_order(props.trifree) == 3
    assert min_forbidden_order(props.bip) == 3
    with pytest.raises(HgError):
        min_forbidden_order(props.two_colour)


def test_additivity(u, g, props):
    assert is_additive(props.edgeless)
    assert is_additive(props.trifree)
    assert is_additive(props.p3free)
    assert not is_additive(forbidden_property(u, [g.two_k2]))
    with pytest.raises(HgError):
        is_additive(props.two_colour)
    assert is_additive(props.two_colour, search_bound=5)


def test_forbidden_up_to_goldens(g, props, u):
    assert forbidden_up_to(props.edgeless, 3) == (canonical_form(g.k2),)
    assert forbidden_up_to(props.trifree, 4) == (canonical_form(g.k3),)
    got = forbidden_up_to(props.two_colour, 5)
    assert [h.n for h in got] == [3, 5]
    assert got[0] == canonical_form(g.k3)
    assert got[1] == canonical_form(g.c5)


def test_forbidden_up_to_generated(u, g):
    q = GeneratedBounded(u, (g.k2,), 3)
    got = forbidden_up_to(q, 3)
    assert [h.n for h in got] == [2, 3]
    assert got[0] == canonical_form(g.e2)
    assert got[1] == canonical_form(g.k3)


# --- property files ---------------------------------------------------------

def test_forbidden_file_round_trip(tmp_path, props):
    path = tmp_path / "t.prop"
    save_property(props.trifree, str(path), "triangle-free")
    name, back = load_property(str(path))
    assert name == "triangle-free"
    assert back == props.trifree


def test_generated_file_round_trip(tmp_path, u, g):
    q = GeneratedBounded(u, (g.c4, g.k2), 6)
    path = tmp_path / "q.prop"
    save_property(q, str(path), "two-gen")
    name, back = load_property(str(path))
    assert back == q


def test_product_file_round_trip(tmp_path, props):
    path = tmp_path / "two.prop"
    save_property(props.two_colour, str(path), "two-colour")
    assert (tmp_path / "two.factor0.prop").exists()
    assert (tmp_path / "two.factor1.prop").exists()
    name, back = load_property(str(path))
    assert back == props.two_colour


def test_format_property_product_needs_names(props):
    with pytest.raises(ValueError):
        format_property(props.two_colour, "x")


def test_property_parse_errors():
    with pytest.raises(FormatError) as exc:
        parse_property("property v2\n")
    assert exc.value.line == 1

    with pytest.raises(FormatError) as exc:
        parse_property("property v1\nname: x\nrepr: waffles\n")
    assert exc.value.line == 3

    body = ("property v1\n"
            "name: x\n"
            "repr: forbidden\n"
            "universe: kinds=UNORDERED arities=2 colours=e\n"
            "begin forbidden\n"
            "hypergraph v1\n"
            "universe: kinds=UNORDERED arities=2 colours=e\n"
            "vertices: 2\n"
            "edge: UNORDERED 0 1 ; e\n")
    with pytest.raises(FormatError) as exc:
        parse_property(body)  # no 'end'
    assert "end" in str(exc.value)

    with pytest.raises(FormatError) as exc:
        parse_property(body + "end\nextra\n")
    assert exc.value.line == 11


def test_product_file_missing_factor(tmp_path):
    path = tmp_path / "p.prop"
    path.write_text("property v1\nname: p\nrepr: product\nfactor: nowhere.prop\n")
    with pytest.raises(FormatError) as exc:
        load_property(str(path))
    assert "cannot read factor file" in str(exc.value)
    assert exc.value.line == 4


def test_product_reference_cycle(tmp_path):
    path = tmp_path / "loop.prop"
    path.write_text("property v1\nname: loop\nrepr: product\nfactor: loop.prop\n")
    with pytest.raises(FormatError) as exc:
        load_property(str(path))
    assert "deep" in str(exc.value)
