"""Brute-force oracles, written independently of the library internals.

Everything here works on explicit edge triples and permutation search so
that library results (embeddings, canonical forms, join criteria,
strictness) can be checked against a second opinion that shares no code
with the implementation under test.
"""

from __future__ import annotations

import itertools

from hgfactor import EdgeKind, EdgeObject, Hypergraph


def edge_triple(e):
    verts = e.vertices if e.kind is EdgeKind.ORDERED else tuple(sorted(e.vertices))
    return (e.kind.value, verts, e.colour)


def graph_triples(g):
    return frozenset(edge_triple(e) for e in g.edges)


def mapped_triples(f, mapping):
    """f's triples with vertex i renamed to mapping[i]."""
    out = set()
    for e in f.edges:
        verts = tuple(mapping[v] for v in e.vertices)
        if e.kind is not EdgeKind.ORDERED:
            verts = tuple(sorted(verts))
        out.add((e.kind.value, verts, e.colour))
    return frozenset(out)


def image_triples(g, image):
    image = frozenset(image)
    return frozenset(edge_triple(e) for e in g.edges
                     if frozenset(e.vertices) <= image)


def brute_embeddings(f, g):
    for mapping in itertools.permutations(range(g.n), f.n):
        if mapped_triples(f, mapping) == image_triples(g, mapping):
            yield mapping


def brute_embed(f, g):
    for m in brute_embeddings(f, g):
        return m
    return None


def brute_iso(a, b):
    return a.n == b.n and len(a.edges) == len(b.edges) \
        and brute_embed(a, b) is not None


def brute_canonical_key(g):
    best = None
    for perm in itertools.permutations(range(g.n)):
        key = tuple(sorted(mapped_triples(g, perm)))
        if best is None or key < best:
            best = key
    return (g.n, best or ())


def brute_member_ff(forbidden, g):
    return all(brute_embed(f, g) is None for f in forbidden)


def admissible_edges(u, vertices):
    """Every edge the universe allows over the given vertex pool."""
    vertices = sorted(vertices)
    out = []
    for arity in sorted(u.arities):
        for combo in itertools.combinations(vertices, arity):
            for kind in sorted(u.kinds, key=lambda k: k.value):
                tuples = itertools.permutations(combo) \
                    if kind is EdgeKind.ORDERED else [combo]
                for verts in tuples:
                    for colour in u.colours:
                        out.append(EdgeObject(kind, verts, colour))
    return out


def random_graph(u, n, p, rng):
    """Random graph over u: each admissible edge kept with probability p."""
    pool = admissible_edges(u, range(n))
    return Hypergraph(u, n, frozenset(e for e in pool if rng.random() < p))


def all_labeled_graphs(u, n):
    pool = admissible_edges(u, range(n))
    for r in range(len(pool) + 1):
        for chosen in itertools.combinations(pool, r):
            yield Hypergraph(u, n, frozenset(chosen))


def count_unlabeled(u, n):
    return len({brute_canonical_key(g) for g in all_labeled_graphs(u, n)})


def oracle_join_fails(forbidden, parts, k_max):
    """Criterion oracle: does some member of a join of up to k_max copies
    of the parts contain a forbidden graph?

    Copies of the parts are laid out disjointly; every placement of a
    forbidden graph is tried; pairs falling across blocks are freely
    completable, so a placement works exactly when the within-block
    induced pattern matches.
    """
    for k in range(1, k_max + 1):
        # the k copies of one part form a single join block (their
        # disjoint union); crossing edges run only between different
        # parts, so pairs inside a block are fixed and everything across
        # blocks is freely completable
        block_of = {}
        total = 0
        edges = set()
        for i, part in enumerate(parts):
            for _ in range(k):
                for e in part.edges:
                    verts = tuple(v + total for v in e.vertices)
                    edges.add(EdgeObject(e.kind, verts, e.colour))
                for v in range(part.n):
                    block_of[v + total] = i
                total += part.n
        blown = Hypergraph(parts[0].universe, total, frozenset(edges))
        for f in forbidden:
            for mapping in itertools.permutations(range(total), f.n):
                want = {t for t in mapped_triples(f, mapping)
                        if len({block_of[v] for v in t[1]}) == 1}
                have = image_triples(blown, mapping)
                if want == have:
                    return True
    return False


def brute_one_vertex_extensions(g):
    """All members of the join of g with a single fresh vertex."""
    z = g.n
    cands = [e for e in admissible_edges(g.universe, range(g.n + 1))
             if z in e.vertices]
    out = []
    for r in range(len(cands) + 1):
        for chosen in itertools.combinations(cands, r):
            out.append(Hypergraph(g.universe, g.n + 1, g.edges | frozenset(chosen)))
    return out


def brute_strict(g, member_fn):
    if not member_fn(g):
        return False
    return any(not member_fn(m) for m in brute_one_vertex_extensions(g))


def all_assignments(n, k):
    return itertools.product(range(k), repeat=n)


def solve_by_assignment(g, factor_member_fns):
    """First vertex assignment whose blocks all pass, scanning all
    assignments in lexicographic order; None when none passes."""
    from hgfactor import induced
    k = len(factor_member_fns)
    for assign in all_assignments(g.n, k):
        blocks = [frozenset(v for v in range(g.n) if assign[v] == i)
                  for i in range(k)]
        if all(fn(induced(g, b)) for fn, b in zip(factor_member_fns, blocks)):
            return assign
    return None


def bell(n):
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def stirling2(n, k):
    if n == 0:
        return 1 if k == 0 else 0
    table = [[0] * (k + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, k + 1):
            table[i][j] = j * table[i - 1][j] + table[i - 1][j - 1]
    return table[n][k]
