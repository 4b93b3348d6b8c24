"""Exhaustive enumeration of small hypergraphs and vertex partitions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    CapExceededError,
    EdgeKind,
    EdgeObject,
    Hypergraph,
    Universe,
    canonical_form,
    canonical_key,
    is_connected,
)

__all__ = ["EnumSpec", "enumerate_hypergraphs", "enumerate_partitions"]

# Enumeration is strictly a desk-scale tool; counts explode soon after this.
HARD_VERTEX_CAP = 7


@dataclass(frozen=True)
class EnumSpec:
    """What to enumerate: all graphs over universe with up to max_vertices
    vertices, optionally connected ones only."""

    universe: Universe
    max_vertices: int
    connected_only: bool = False

    def __post_init__(self):
        if self.max_vertices < 0:
            raise ValueError("negative vertex bound")
        if self.max_vertices > HARD_VERTEX_CAP:
            raise CapExceededError(
                f"enumeration bound {self.max_vertices} exceeds hard cap {HARD_VERTEX_CAP}")


def _new_vertex_edges(u: Universe, n: int) -> list:
    """Admissible edges on vertex set range(n) that touch vertex n-1."""
    out = []
    for r in sorted(u.arities):
        if r > n:
            continue
        for rest in itertools.combinations(range(n - 1), r - 1):
            support = rest + (n - 1,)
            for kind in sorted(u.kinds, key=lambda k: k.value):
                tuples = itertools.permutations(support) if kind is EdgeKind.ORDERED else [support]
                for verts in tuples:
                    for colour in u.colours:
                        out.append(EdgeObject(kind, verts, colour))
    return out


def enumerate_hypergraphs(spec: EnumSpec):
    """Yield one representative per isomorphism class, smallest first.

    Vertex counts ascend; within a count, representatives come in
    canonical-key order.  Classes on n vertices are grown from classes on
    n-1 vertices by adding a vertex together with every subset of edges
    through it; every class is reached because deleting the last vertex
    of any graph gives a graph on one vertex fewer.
    """
    u = spec.universe
    layer = [Hypergraph(u, 0, frozenset())]
    if not spec.connected_only or spec.max_vertices == 0:
        yield layer[0]
    for n in range(1, spec.max_vertices + 1):
        seen = {}
        for g in layer:
            grown = Hypergraph(u, n, g.edges)
            for picks in _subsets(_new_vertex_edges(u, n)):
                h = Hypergraph(u, n, grown.edges | picks)
                key = canonical_key(h)
                if key not in seen:
                    seen[key] = canonical_form(h)
        layer = [seen[k] for k in sorted(seen)]
        for h in layer:
            if not spec.connected_only or is_connected(h):
                yield h


def _subsets(items: list):
    for r in range(len(items) + 1):
        yield from (frozenset(c) for c in itertools.combinations(items, r))


def enumerate_partitions(vertices, max_parts: int, min_parts: int = 1,
                         nonempty: bool = True):
    """All ordered partitions of the vertex collection into part tuples.

    Parts are canonically ordered by smallest member, which makes the
    stream duplicate-free over unordered partitions.  With nonempty set
    to False, each nonempty partition is also emitted padded with empty
    parts up to max_parts (empties at the end).
    """
    verts = sorted(set(vertices))
    if min_parts < 1 or max_parts < min_parts:
        raise ValueError("bad part-count range")
    if not verts:
        return
    # restricted growth strings: verts[0] always lands in part 0
    def rgs(prefix, used):
        if len(prefix) == len(verts):
            yield prefix
            return
        for c in range(min(used + 1, max_parts)):
            yield from rgs(prefix + [c], max(used, c + 1))

    for assignment in rgs([0], 1):
        k = max(assignment) + 1
        parts = tuple(tuple(v for v, c in zip(verts, assignment) if c == i)
                      for i in range(k))
        if nonempty:
            if k >= min_parts:
                yield parts
        else:
            for pad in range(max(k, min_parts), max_parts + 1):
                yield parts + ((),) * (pad - k)
