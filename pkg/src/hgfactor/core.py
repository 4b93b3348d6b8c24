"""Edge-coloured directed hypergraphs and their basic algebra.

Vertices are dense 0-based integers.  Every value in this module is
immutable and hashable, so graphs can be used as dict keys and cached.
Edge objects carry a kind (ordered tuple or unordered set), a colour and
at least two distinct vertices; parallel edges that differ only in tuple
order or colour are distinct objects, exact duplicates cannot exist
because edges live in a frozenset.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

__all__ = [
    "HgError",
    "UniverseMismatchError",
    "CapExceededError",
    "FormatError",
    "EdgeKind",
    "Universe",
    "EdgeObject",
    "Hypergraph",
    "Embedding",
    "simple_universe",
    "simple_graph",
    "induced",
    "relabel",
    "disjoint_union",
    "replicate",
    "connected_components",
    "is_connected",
    "embed_induced",
    "is_isomorphic",
    "canonical_key",
    "canonical_form",
    "join_members",
    "crossing_edge_candidates",
    "parse_hypergraph",
    "format_hypergraph",
    "DEFAULT_JOIN_EDGE_CAP",
    "CANONICAL_ORDER_CAP",
]

DEFAULT_JOIN_EDGE_CAP = 10**6

# Upper bound on candidate vertex orderings tried by canonical_form.  The
# bound is only reachable for highly symmetric graphs on ~10+ vertices.
CANONICAL_ORDER_CAP = 2_000_000


class HgError(Exception):
    """Base class for workbench errors."""


class UniverseMismatchError(HgError):
    """Operands live over different universes."""


class CapExceededError(HgError):
    """A configured size or search cap would be exceeded."""


class FormatError(HgError):
    """Malformed text input."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class EdgeKind(str, Enum):
    ORDERED = "ORDERED"
    UNORDERED = "UNORDERED"

    def __repr__(self) -> str:  # keeps dataclass reprs short
        return self.value


@dataclass(frozen=True)
class Universe:
    """Shape of the objects under study.

    kinds    : which edge-object kinds may appear
    arities  : allowed edge sizes, every arity is at least 2 (no loops)
    colours  : finite ordered alphabet; order matters for file output
    """

    kinds: frozenset
    arities: frozenset
    colours: tuple

    def __post_init__(self):
        kinds = frozenset(EdgeKind(k) for k in self.kinds)
        arities = frozenset(int(a) for a in self.arities)
        colours = tuple(self.colours)
        if not arities:
            raise ValueError("universe needs at least one arity")
        if any(a < 2 for a in arities):
            raise ValueError("arities must be at least 2")
        if not colours:
            raise ValueError("universe needs at least one colour")
        if len(set(colours)) != len(colours):
            raise ValueError("duplicate colour in universe")
        for c in colours:
            if not c or any(ch in c for ch in " \t,;\n"):
                raise ValueError(f"bad colour name: {c!r}")
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "arities", arities)
        object.__setattr__(self, "colours", colours)

    def colour_index(self, colour: str) -> int:
        return self.colours.index(colour)


@dataclass(frozen=True)
class EdgeObject:
    """One edge: ordered tuple or unordered set of distinct vertices."""

    kind: EdgeKind
    vertices: tuple
    colour: str

    def __post_init__(self):
        kind = EdgeKind(self.kind)
        verts = tuple(int(v) for v in self.vertices)
        if len(verts) < 2:
            raise ValueError("edge arity below 2")
        if len(set(verts)) != len(verts):
            raise ValueError(f"loop edge: {verts}")
        if kind is EdgeKind.UNORDERED:
            verts = tuple(sorted(verts))
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "vertices", verts)

    @property
    def support(self) -> frozenset:
        return frozenset(self.vertices)

    def sort_key(self) -> tuple:
        return (len(self.vertices), self.vertices, self.kind.value, self.colour)

    def __repr__(self) -> str:
        mark = "O" if self.kind is EdgeKind.ORDERED else "U"
        return f"{mark}({','.join(map(str, self.vertices))};{self.colour})"


@dataclass(frozen=True)
class Hypergraph:
    """A finite hypergraph over a universe.

    Invariants checked on construction: every edge fits the universe,
    vertices are in range, arity at least 2.  Isolated vertices are
    allowed and significant; the null graph has n == 0.
    """

    universe: Universe
    n: int
    edges: frozenset

    def __post_init__(self):
        edges = frozenset(self.edges)
        if self.n < 0:
            raise ValueError("negative vertex count")
        for e in edges:
            if not isinstance(e, EdgeObject):
                raise TypeError(f"not an edge object: {e!r}")
            if e.kind not in self.universe.kinds:
                raise ValueError(f"kind {e.kind.value} not in universe")
            if len(e.vertices) not in self.universe.arities:
                raise ValueError(f"arity {len(e.vertices)} not in universe")
            if e.colour not in self.universe.colours:
                raise ValueError(f"colour {e.colour!r} not in universe")
            if any(v < 0 or v >= self.n for v in e.vertices):
                raise ValueError(f"vertex out of range in {e!r}")
        object.__setattr__(self, "edges", edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def sorted_edges(self) -> list:
        return sorted(self.edges, key=EdgeObject.sort_key)

    def __repr__(self) -> str:
        es = " ".join(repr(e) for e in self.sorted_edges())
        return f"H(n={self.n}{'; ' + es if es else ''})"


@dataclass(frozen=True)
class Embedding:
    """Injective vertex map witnessing F as an induced subhypergraph of G.

    mapping[v] is the image of vertex v of F.
    """

    mapping: tuple

    def image(self) -> frozenset:
        return frozenset(self.mapping)


def simple_universe() -> Universe:
    """Plain undirected graphs: one unordered arity-2 kind, one colour."""
    return Universe(frozenset({EdgeKind.UNORDERED}), frozenset({2}), ("e",))


def simple_graph(n: int, pairs: Iterable = ()) -> Hypergraph:
    u = simple_universe()
    edges = frozenset(EdgeObject(EdgeKind.UNORDERED, (a, b), "e") for a, b in pairs)
    return Hypergraph(u, n, edges)


def _check_same_universe(*graphs: Hypergraph) -> Universe:
    u = graphs[0].universe
    for g in graphs[1:]:
        if g.universe != u:
            raise UniverseMismatchError("operands over different universes")
    return u


def _remap_edge(e: EdgeObject, mapping) -> EdgeObject:
    return EdgeObject(e.kind, tuple(mapping[v] for v in e.vertices), e.colour)


def relabel(g: Hypergraph, mapping: Sequence) -> Hypergraph:
    """Apply a total bijection mapping[old] = new to the vertices of g."""
    if sorted(mapping) != list(range(g.n)):
        raise ValueError("relabelling is not a bijection on the vertex range")
    return Hypergraph(g.universe, g.n, frozenset(_remap_edge(e, mapping) for e in g.edges))


def induced(g: Hypergraph, subset: Iterable) -> Hypergraph:
    """Induced subhypergraph on subset, relabelled to 0..k-1 in ascending order."""
    verts = sorted(set(int(v) for v in subset))
    if verts and (verts[0] < 0 or verts[-1] >= g.n):
        raise ValueError("subset not within the vertex range")
    pos = {v: i for i, v in enumerate(verts)}
    keep = frozenset(_remap_edge(e, pos) for e in g.edges if e.support <= set(verts))
    return Hypergraph(g.universe, len(verts), keep)


def disjoint_union(g: Hypergraph, h: Hypergraph) -> Hypergraph:
    _check_same_universe(g, h)
    shifted = frozenset(_remap_edge(e, {v: v + g.n for v in range(h.n)}) for e in h.edges)
    return Hypergraph(g.universe, g.n + h.n, g.edges | shifted)


def replicate(k: int, g: Hypergraph) -> Hypergraph:
    """k vertex-disjoint copies of g, copy c occupying [c*n, (c+1)*n)."""
    if k < 1:
        raise ValueError("need at least one copy")
    edges = set()
    for c in range(k):
        off = c * g.n
        for e in g.edges:
            edges.add(EdgeObject(e.kind, tuple(v + off for v in e.vertices), e.colour))
    return Hypergraph(g.universe, k * g.n, frozenset(edges))


@lru_cache(maxsize=65536)
def _incidence(g: Hypergraph):
    """(edges_at_vertex, edge_set) lookup tables for g."""
    at = [[] for _ in range(g.n)]
    for e in g.sorted_edges():
        for v in set(e.vertices):
            at[v].append(e)
    return tuple(tuple(es) for es in at), g.edges


def connected_components(g: Hypergraph) -> list:
    """Vertex sets of the components, ordered by smallest vertex.

    A vertex with no edges forms its own component; the null graph has
    no components at all.
    """
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in g.edges:
        vs = list(e.support)
        for w in vs[1:]:
            ra, rb = find(vs[0]), find(w)
            if ra != rb:
                parent[rb] = ra
    groups = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return sorted((frozenset(vs) for vs in groups.values()), key=min)


def is_connected(g: Hypergraph) -> bool:
    return len(connected_components(g)) == 1


def embed_induced(f: Hypergraph, g: Hypergraph) -> Optional[Embedding]:
    """First induced embedding of f into g in lexicographic order, or None.

    An embedding is induced when the image carries exactly the images of
    f's edges: edges of g inside the image must pull back to edges of f.
    """
    _check_same_universe(f, g)
    if f.n > g.n or len(f.edges) > len(g.edges):
        return None
    f_at, f_edges = _incidence(f)
    g_at, g_edges = _incidence(g)

    image = [-1] * f.n  # f vertex -> g vertex
    pre = {}  # g vertex -> f vertex

    def consistent(v: int) -> bool:
        u = image[v]
        for e in f_at[v]:
            if all(image[w] >= 0 for w in e.vertices):
                if _remap_edge(e, image) not in g_edges:
                    return False
        for e in g_at[u]:
            if all(w in pre for w in e.vertices):
                back = EdgeObject(e.kind, tuple(pre[w] for w in e.vertices), e.colour)
                if back not in f_edges:
                    return False
        return True

    def extend(v: int) -> bool:
        if v == f.n:
            return True
        for u in range(g.n):
            if u in pre:
                continue
            image[v] = u
            pre[u] = v
            if consistent(v) and extend(v + 1):
                return True
            image[v] = -1
            del pre[u]
        return False

    if extend(0):
        return Embedding(tuple(image))
    return None


def _refined_colours(g: Hypergraph) -> list:
    """Stable vertex colouring by iterated incidence-profile refinement.

    The profile of a vertex lists, per incident edge, the kind, colour,
    arity, own position (ordered edges only) and the current colours of
    the co-members.  Profiles are label-independent, so the final colour
    classes are respected by every isomorphism.
    """
    at, _ = _incidence(g)
    colours = [0] * g.n
    n_classes = 1 if g.n else 0
    while True:
        sigs = []
        for v in range(g.n):
            prof = []
            for e in at[v]:
                ci = g.universe.colour_index(e.colour)
                if e.kind is EdgeKind.ORDERED:
                    prof.append((0, ci, len(e.vertices), e.vertices.index(v),
                                 tuple(colours[w] for w in e.vertices)))
                else:
                    prof.append((1, ci, len(e.vertices), -1,
                                 tuple(sorted(colours[w] for w in e.vertices if w != v))))
            prof.sort()
            sigs.append((colours[v], tuple(prof)))
        order = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [order[s] for s in sigs]
        if len(order) == n_classes:
            return new
        colours, n_classes = new, len(order)


def _edge_key(g: Hypergraph, mapping) -> tuple:
    out = []
    for e in g.edges:
        verts = tuple(mapping[v] for v in e.vertices)
        if e.kind is EdgeKind.UNORDERED:
            verts = tuple(sorted(verts))
        out.append((len(verts), verts, e.kind.value, e.colour))
    out.sort()
    return tuple(out)


@lru_cache(maxsize=200_000)
def canonical_key(g: Hypergraph) -> tuple:
    """Hashable isomorphism invariant: equal keys iff isomorphic graphs.

    Refinement narrows the candidate vertex orderings, then every
    ordering compatible with the refined classes is tried and the least
    edge list wins.  Complete because isomorphisms preserve the refined
    classes.  Raises CapExceededError beyond CANONICAL_ORDER_CAP
    orderings (symmetric graphs on roughly 10+ vertices).
    """
    if not g.edges:
        return (g.n, ())
    colours = _refined_colours(g)
    cells = {}
    for v in range(g.n):
        cells.setdefault(colours[v], []).append(v)
    cell_list = [cells[c] for c in sorted(cells)]
    total = 1
    for cell in cell_list:
        for i in range(2, len(cell) + 1):
            total *= i
        if total > CANONICAL_ORDER_CAP:
            raise CapExceededError(
                f"canonical labelling would try more than {CANONICAL_ORDER_CAP} orderings")
    best = None
    mapping = [0] * g.n
    for combo in itertools.product(*(itertools.permutations(c) for c in cell_list)):
        i = 0
        for cell_perm in combo:
            for v in cell_perm:
                mapping[v] = i
                i += 1
        key = _edge_key(g, mapping)
        if best is None or key < best:
            best = key
    return (g.n, best)


def canonical_form(g: Hypergraph) -> Hypergraph:
    """Canonical representative of g's isomorphism class."""
    n, edge_key = canonical_key(g)
    edges = frozenset(EdgeObject(EdgeKind(kind), verts, colour)
                      for _, verts, kind, colour in edge_key)
    return Hypergraph(g.universe, n, edges)


def is_isomorphic(g: Hypergraph, h: Hypergraph) -> bool:
    _check_same_universe(g, h)
    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    return canonical_key(g) == canonical_key(h)


def crossing_edge_candidates(parts: Sequence, edge_cap: int = DEFAULT_JOIN_EDGE_CAP) -> list:
    """All universe-admissible edges on the concatenated vertex set whose
    support meets at least two parts, in a fixed deterministic order."""
    if not parts:
        raise ValueError("need at least one part")
    u = _check_same_universe(*parts)
    owner = []
    for i, p in enumerate(parts):
        owner.extend([i] * p.n)
    total = len(owner)
    cands = []
    for r in sorted(u.arities):
        if r > total:
            continue
        for support in itertools.combinations(range(total), r):
            if len({owner[v] for v in support}) < 2:
                continue
            for kind in sorted(u.kinds, key=lambda k: k.value):
                tuples = itertools.permutations(support) if kind is EdgeKind.ORDERED else [support]
                for verts in tuples:
                    for colour in u.colours:
                        cands.append(EdgeObject(kind, verts, colour))
                        if len(cands) > edge_cap:
                            raise CapExceededError(
                                f"more than {edge_cap} crossing edge candidates")
    return cands


def join_members(parts: Sequence, edge_cap: int = DEFAULT_JOIN_EDGE_CAP) -> Iterator[Hypergraph]:
    """Stream every hypergraph that restricts to the given parts.

    Members carry the parts on consecutive vertex blocks plus an
    arbitrary subset of crossing edges (edges meeting at least two
    blocks).  With a single part the stream is exactly that part.  The
    order is binary counting over the candidate list from
    crossing_edge_candidates, bit 0 first, so runs are reproducible.
    """
    u = _check_same_universe(*parts)
    base = set()
    off = 0
    for p in parts:
        for e in p.edges:
            base.add(EdgeObject(e.kind, tuple(v + off for v in e.vertices), e.colour))
        off += p.n
    cands = crossing_edge_candidates(parts, edge_cap)
    total = off
    for mask in range(1 << len(cands)):
        chosen = {cands[i] for i in range(len(cands)) if mask >> i & 1}
        yield Hypergraph(u, total, frozenset(base | chosen))


# --- text format ----------------------------------------------------------

def _format_universe(u: Universe) -> str:
    kinds = ",".join(sorted(k.value for k in u.kinds))
    arities = ",".join(str(a) for a in sorted(u.arities))
    colours = ",".join(u.colours)
    return f"kinds={kinds} arities={arities} colours={colours}"


def _parse_universe_spec(spec: str, line: int) -> Universe:
    fields = {}
    for token in spec.split():
        if "=" not in token:
            raise FormatError(f"bad universe token {token!r}", line)
        key, _, value = token.partition("=")
        if key in fields:
            raise FormatError(f"duplicate universe key {key!r}", line)
        fields[key] = value
    if set(fields) != {"kinds", "arities", "colours"}:
        raise FormatError("universe needs exactly kinds=, arities= and colours=", line)
    try:
        kinds = frozenset(EdgeKind(k) for k in fields["kinds"].split(",") if k)
        arities = frozenset(int(a) for a in fields["arities"].split(",") if a)
        colours = tuple(c for c in fields["colours"].split(",") if c)
        return Universe(kinds, arities, colours)
    except (ValueError, KeyError) as exc:
        raise FormatError(f"bad universe: {exc}", line) from None


def parse_hypergraph_block(lines, start: int):
    """Parse one hypergraph block from (lineno, text) pairs.

    Returns (graph, next_index).  The block is the header line, a
    universe line, a vertices line and any number of edge lines; it ends
    at the end of input or at the first line that opens no edge.
    """
    i = start
    if i >= len(lines) or lines[i][1] != "hypergraph v1":
        lineno = lines[i][0] if i < len(lines) else None
        raise FormatError("expected 'hypergraph v1' header", lineno)
    i += 1
    if i >= len(lines) or not lines[i][1].startswith("universe:"):
        raise FormatError("expected universe line", lines[i - 1][0] + 1)
    u = _parse_universe_spec(lines[i][1][len("universe:"):].strip(), lines[i][0])
    i += 1
    if i >= len(lines) or not lines[i][1].startswith("vertices:"):
        raise FormatError("expected vertices line", lines[i - 1][0] + 1)
    try:
        n = int(lines[i][1][len("vertices:"):].strip())
    except ValueError:
        raise FormatError("vertex count is not an integer", lines[i][0]) from None
    if n < 0:
        raise FormatError("negative vertex count", lines[i][0])
    i += 1
    edges = set()
    while i < len(lines) and lines[i][1].startswith("edge:"):
        lineno, text = lines[i]
        tokens = text[len("edge:"):].split()
        if len(tokens) < 4 or tokens[-2] != ";":
            raise FormatError("edge line needs 'edge: KIND v v ... ; colour'", lineno)
        try:
            kind = EdgeKind(tokens[0])
        except ValueError:
            raise FormatError(f"unknown edge kind {tokens[0]!r}", lineno) from None
        try:
            verts = tuple(int(t) for t in tokens[1:-2])
        except ValueError:
            raise FormatError("edge vertices must be integers", lineno) from None
        colour = tokens[-1]
        try:
            e = EdgeObject(kind, verts, colour)
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        if any(v < 0 or v >= n for v in verts):
            raise FormatError(f"vertex out of range in {e!r}", lineno)
        if e in edges:
            raise FormatError(f"duplicate edge {e!r}", lineno)
        edges.add(e)
        i += 1
    try:
        g = Hypergraph(u, n, frozenset(edges))
    except ValueError as exc:
        raise FormatError(str(exc), lines[start][0]) from None
    return g, i


def _numbered_lines(text: str) -> list:
    out = []
    for idx, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped:
            out.append((idx, stripped))
    return out


def parse_hypergraph(text: str) -> Hypergraph:
    """Strict parser for the hypergraph v1 text format."""
    lines = _numbered_lines(text)
    if not lines:
        raise FormatError("empty input")
    g, i = parse_hypergraph_block(lines, 0)
    if i != len(lines):
        raise FormatError(f"unexpected content {lines[i][1]!r}", lines[i][0])
    return g


def format_hypergraph(g: Hypergraph) -> str:
    """Byte-stable serialization; parse(format(g)) == g."""
    out = ["hypergraph v1",
           f"universe: {_format_universe(g.universe)}",
           f"vertices: {g.n}"]
    for e in g.sorted_edges():
        verts = " ".join(str(v) for v in e.vertices)
        out.append(f"edge: {e.kind.value} {verts} ; {e.colour}")
    return "\n".join(out) + "\n"
