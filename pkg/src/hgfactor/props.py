"""Hereditary property representations and membership decisions.

Three representations, each closed under induced subhypergraphs and
isomorphism:

* FiniteForbidden: everything avoiding a finite antichain of forbidden
  induced subhypergraphs.  Membership is exactly decidable.
* ProductProperty: graphs whose vertex set splits into ordered blocks,
  block i inducing a member of factor i; crossing edges are free.
* GeneratedBounded: graphs embedding induced into one of finitely many
  generators; queries allowed only up to a declared vertex bound.

The null graph belongs to every property.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import (
    Embedding,
    FormatError,
    HgError,
    Hypergraph,
    Universe,
    UniverseMismatchError,
    canonical_form,
    canonical_key,
    embed_induced,
    induced,
    is_connected,
    parse_hypergraph_block,
    _numbered_lines,
    _format_universe,
    _parse_universe_spec,
    format_hypergraph,
)
from .generate import EnumSpec, enumerate_hypergraphs

__all__ = [
    "BoundExceededError",
    "Property",
    "FiniteForbidden",
    "ProductProperty",
    "GeneratedBounded",
    "ForbiddenWitness",
    "PartitionAssignment",
    "MembershipResult",
    "forbidden_property",
    "member",
    "is_additive",
    "minimize_forbidden",
    "min_forbidden_order",
    "partition_solve",
    "forbidden_up_to",
    "parse_property",
    "format_property",
    "load_property",
    "save_property",
]


class BoundExceededError(HgError):
    """Membership query beyond a GeneratedBounded vertex bound."""


@dataclass(frozen=True)
class ForbiddenWitness:
    """A forbidden graph embedded induced in the queried graph."""

    forbidden: Hypergraph
    embedding: Embedding


@dataclass(frozen=True)
class PartitionAssignment:
    """Ordered vertex blocks, one per factor; blocks may be empty."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(frozenset(p) for p in self.parts)
        seen = set()
        for p in parts:
            if p & seen:
                raise ValueError("overlapping parts")
            seen |= p
        object.__setattr__(self, "parts", parts)

    def assignment_vector(self) -> tuple:
        spot = {}
        for i, p in enumerate(self.parts):
            for v in p:
                spot[v] = i
        return tuple(spot[v] for v in sorted(spot))


@dataclass(frozen=True)
class MembershipResult:
    """Boolean verdict plus the evidence that produced it.

    detail is a ForbiddenWitness on finite-forbidden failure, a
    PartitionAssignment on product success, a generator on bounded
    generated success, and None otherwise.
    """

    holds: bool
    detail: object = None

    def __bool__(self) -> bool:
        return self.holds


class Property:
    """Base class; concrete representations implement member()."""

    universe: Universe

    def member(self, g: Hypergraph) -> MembershipResult:
        raise NotImplementedError

    def _check_universe(self, g: Hypergraph):
        if g.universe != self.universe:
            raise UniverseMismatchError("graph and property universes differ")


def minimize_forbidden(graphs: Iterable) -> tuple:
    """Canonical duplicate-free antichain: drop any graph that contains
    another of the collection induced."""
    by_key = {}
    for g in graphs:
        by_key.setdefault(canonical_key(g), canonical_form(g))
    forms = [by_key[k] for k in sorted(by_key)]
    keep = []
    for g in forms:
        if not any(h is not g and embed_induced(h, g) for h in forms):
            keep.append(g)
    return tuple(sorted(keep, key=lambda g: (g.n, canonical_key(g))))


@dataclass(frozen=True)
class FiniteForbidden(Property):
    """Graphs avoiding every listed forbidden induced subhypergraph.

    The forbidden list must be an antichain of canonical forms, every
    member on at least 2 vertices (so single vertices are never
    excluded) and over the property's universe.
    """

    universe: Universe
    forbidden: tuple

    def __post_init__(self):
        forb = tuple(self.forbidden)
        if not forb:
            raise ValueError("need at least one forbidden graph")
        keys = set()
        for f in forb:
            if f.universe != self.universe:
                raise ValueError("forbidden graph over a different universe")
            if f.n < 2:
                raise ValueError("forbidden graphs need at least 2 vertices")
            k = canonical_key(f)
            if k in keys:
                raise ValueError("duplicate forbidden graph")
            keys.add(k)
        for a, b in itertools.permutations(forb, 2):
            if embed_induced(a, b):
                raise ValueError("forbidden set is not an antichain")
        ordered = tuple(sorted((canonical_form(f) for f in forb),
                               key=lambda g: (g.n, canonical_key(g))))
        object.__setattr__(self, "forbidden", ordered)

    def member(self, g: Hypergraph) -> MembershipResult:
        self._check_universe(g)
        for f in self.forbidden:
            emb = embed_induced(f, g)
            if emb is not None:
                return MembershipResult(False, ForbiddenWitness(f, emb))
        return MembershipResult(True)


def forbidden_property(universe: Universe, graphs: Iterable) -> FiniteForbidden:
    """FiniteForbidden from any finite family; minimizes it first."""
    return FiniteForbidden(universe, minimize_forbidden(graphs))


@dataclass(frozen=True)
class ProductProperty(Property):
    """Ordered composition of at least two factor properties."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if len(factors) < 2:
            raise ValueError("product needs at least 2 factors")
        u = factors[0].universe
        for f in factors:
            if f.universe != u:
                raise ValueError("factors over different universes")
        object.__setattr__(self, "factors", factors)

    @property
    def universe(self) -> Universe:
        return self.factors[0].universe

    def member(self, g: Hypergraph) -> MembershipResult:
        self._check_universe(g)
        pa = partition_solve(g, self.factors)
        if pa is None:
            return MembershipResult(False)
        return MembershipResult(True, pa)


@dataclass(frozen=True)
class GeneratedBounded(Property):
    """Everything embedding induced into some generator, queryable only
    for graphs with at most `bound` vertices."""

    universe: Universe
    generators: tuple
    bound: int

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("need at least one generator")
        if self.bound < 1:
            raise ValueError("bound must be positive")
        for g in gens:
            if g.universe != self.universe:
                raise ValueError("generator over a different universe")
        by_key = {canonical_key(g): canonical_form(g) for g in gens}
        ordered = tuple(sorted(by_key.values(), key=lambda g: (g.n, canonical_key(g))))
        object.__setattr__(self, "generators", ordered)

    def member(self, g: Hypergraph) -> MembershipResult:
        self._check_universe(g)
        if g.n > self.bound:
            raise BoundExceededError(
                f"query on {g.n} vertices exceeds the declared bound {self.bound}")
        if g.n == 0:
            return MembershipResult(True)
        for gen in self.generators:
            if embed_induced(g, gen) is not None:
                return MembershipResult(True, gen)
        return MembershipResult(False)


def member(p: Property, g: Hypergraph) -> MembershipResult:
    return p.member(g)


def min_forbidden_order(p: FiniteForbidden) -> int:
    """Smallest vertex count among the minimal forbidden graphs."""
    if not isinstance(p, FiniteForbidden):
        raise HgError("minimum forbidden order needs a finite forbidden set")
    return min(f.n for f in p.forbidden)


def is_additive(p: Property, search_bound: Optional[int] = None) -> bool:
    """Is the property closed under disjoint unions?

    Exact for FiniteForbidden: closure holds iff every minimal forbidden
    graph is connected (a disconnected minimal one splits into members
    whose union leaves the property; a connected graph inside a disjoint
    union lies inside one summand).  Other representations get a bounded
    verdict from forbidden_up_to and need an explicit search_bound.
    """
    if isinstance(p, FiniteForbidden):
        return all(is_connected(f) for f in p.forbidden)
    if search_bound is None:
        raise HgError("additivity for this representation needs a search bound")
    return all(is_connected(f) for f in forbidden_up_to(p, search_bound))


def partition_solve(g: Hypergraph, factors: Sequence) -> Optional[PartitionAssignment]:
    """First vertex partition (empty blocks allowed) whose i-th block
    induces a member of factors[i]; None when none exists.

    Complete backtracking over vertices in ascending order, trying block
    indices in ascending order, so the returned assignment vector is the
    lexicographically least solution.  Finite-forbidden and generated
    factors prune partial blocks (membership is hereditary, so a partial
    block that already fails can never recover); product factors are only
    checked on complete blocks.
    """
    for fac in factors:
        if fac.universe != g.universe:
            raise UniverseMismatchError("factor universe differs from the graph's")
    m = len(factors)
    if m == 0:
        raise ValueError("need at least one factor")
    parts = [set() for _ in range(m)]
    deferred = [i for i, fac in enumerate(factors)
                if not isinstance(fac, (FiniteForbidden, GeneratedBounded))]

    def part_ok(i: int) -> bool:
        fac = factors[i]
        sub = induced(g, parts[i])
        if isinstance(fac, FiniteForbidden):
            return not any(embed_induced(f, sub) for f in fac.forbidden)
        if isinstance(fac, GeneratedBounded):
            return sub.n <= fac.bound and bool(fac.member(sub))
        return True

    def place(v: int) -> bool:
        if v == g.n:
            return all(bool(factors[i].member(induced(g, parts[i]))) for i in deferred)
        for i in range(m):
            parts[i].add(v)
            if part_ok(i) and place(v + 1):
                return True
            parts[i].discard(v)
        return False

    if place(0):
        return PartitionAssignment(tuple(frozenset(p) for p in parts))
    return None


def forbidden_up_to(p: Property, n: int) -> tuple:
    """All minimal non-members with at most n vertices, canonical forms
    in enumeration order.

    A non-member F is minimal when every one-vertex deletion is a member;
    heredity makes that equivalent to all proper induced subgraphs being
    members.
    """
    out = []
    for g in enumerate_hypergraphs(EnumSpec(p.universe, n)):
        if p.member(g):
            continue
        if all(p.member(induced(g, set(g.vertices) - {v})) for v in g.vertices):
            out.append(g)
    return tuple(out)


# --- property text format -------------------------------------------------

def format_property(p: Property, name: str, factor_names: Optional[Sequence] = None) -> str:
    """Text form of a property.  Product factors are referenced by file
    name, so factor_names is required for products."""
    head = ["property v1", f"name: {name}"]
    if isinstance(p, FiniteForbidden):
        head.append("repr: forbidden")
        head.append(f"universe: {_format_universe(p.universe)}")
        head.append("begin forbidden")
        for f in p.forbidden:
            head.append(format_hypergraph(f).rstrip("\n"))
        head.append("end")
    elif isinstance(p, GeneratedBounded):
        head.append(f"repr: generated bound={p.bound}")
        head.append(f"universe: {_format_universe(p.universe)}")
        head.append("begin generators")
        for f in p.generators:
            head.append(format_hypergraph(f).rstrip("\n"))
        head.append("end")
    elif isinstance(p, ProductProperty):
        head.append("repr: product")
        if factor_names is None or len(factor_names) != len(p.factors):
            raise ValueError("product serialization needs one file name per factor")
        for fn in factor_names:
            head.append(f"factor: {fn}")
    else:
        raise TypeError(f"unknown property representation: {type(p).__name__}")
    return "\n".join(head) + "\n"


def _parse_blocks(lines, i, terminator: str):
    graphs = []
    while i < len(lines) and lines[i][1] != terminator:
        g, i = parse_hypergraph_block(lines, i)
        graphs.append(g)
    if i >= len(lines):
        raise FormatError(f"missing {terminator!r}", lines[-1][0])
    return graphs, i + 1


def parse_property(text: str, base_dir: str = ".", _depth: int = 0):
    """Parse a property file body.  Returns (name, property).

    Product factor files are resolved relative to base_dir; nesting
    deeper than 8 levels is treated as a reference cycle.
    """
    if _depth > 8:
        raise FormatError("factor files nest too deep (reference cycle?)")
    lines = _numbered_lines(text)
    if not lines or lines[0][1] != "property v1":
        raise FormatError("expected 'property v1' header", lines[0][0] if lines else None)
    if len(lines) < 3 or not lines[1][1].startswith("name:"):
        raise FormatError("expected name line", lines[1][0] if len(lines) > 1 else None)
    name = lines[1][1][len("name:"):].strip()
    if not lines[2][1].startswith("repr:"):
        raise FormatError("expected repr line", lines[2][0])
    kind = lines[2][1][len("repr:"):].strip()
    i = 3

    def take_universe(i):
        if i >= len(lines) or not lines[i][1].startswith("universe:"):
            raise FormatError("expected universe line", lines[i - 1][0] + 1)
        u = _parse_universe_spec(lines[i][1][len("universe:"):].strip(), lines[i][0])
        return u, i + 1

    if kind == "forbidden":
        u, i = take_universe(i)
        if i >= len(lines) or lines[i][1] != "begin forbidden":
            raise FormatError("expected 'begin forbidden'", lines[min(i, len(lines) - 1)][0])
        graphs, i = _parse_blocks(lines, i + 1, "end")
        _expect_eof(lines, i)
        try:
            return name, FiniteForbidden(u, tuple(graphs))
        except ValueError as exc:
            raise FormatError(str(exc), lines[0][0]) from None
    if kind.startswith("generated"):
        tokens = kind.split()
        if len(tokens) != 2 or not tokens[1].startswith("bound="):
            raise FormatError("generated repr needs 'generated bound=N'", lines[2][0])
        try:
            bound = int(tokens[1][len("bound="):])
        except ValueError:
            raise FormatError("bad bound", lines[2][0]) from None
        u, i = take_universe(i)
        if i >= len(lines) or lines[i][1] != "begin generators":
            raise FormatError("expected 'begin generators'", lines[min(i, len(lines) - 1)][0])
        graphs, i = _parse_blocks(lines, i + 1, "end")
        _expect_eof(lines, i)
        try:
            return name, GeneratedBounded(u, tuple(graphs), bound)
        except ValueError as exc:
            raise FormatError(str(exc), lines[0][0]) from None
    if kind == "product":
        factors = []
        while i < len(lines):
            lineno, text_i = lines[i]
            if not text_i.startswith("factor:"):
                raise FormatError(f"unexpected content {text_i!r}", lineno)
            path = os.path.join(base_dir, text_i[len("factor:"):].strip())
            try:
                with open(path, encoding="utf-8") as fh:
                    body = fh.read()
            except OSError as exc:
                raise FormatError(f"cannot read factor file: {exc}", lineno) from None
            _, fac = parse_property(body, os.path.dirname(path) or ".", _depth + 1)
            factors.append(fac)
            i += 1
        try:
            return name, ProductProperty(tuple(factors))
        except ValueError as exc:
            raise FormatError(str(exc), lines[0][0]) from None
    raise FormatError(f"unknown repr {kind!r}", lines[2][0])


def _expect_eof(lines, i):
    if i != len(lines):
        raise FormatError(f"unexpected content {lines[i][1]!r}", lines[i][0])


def load_property(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_property(fh.read(), os.path.dirname(path) or ".")


def save_property(p: Property, path: str, name: str):
    """Write a property file; product factors become sibling files."""
    factor_names = None
    if isinstance(p, ProductProperty):
        stem = os.path.splitext(os.path.basename(path))[0]
        factor_names = [f"{stem}.factor{i}.prop" for i in range(len(p.factors))]
        for fac, fn in zip(p.factors, factor_names):
            save_property(fac, os.path.join(os.path.dirname(path) or ".", fn),
                          f"{name}.{fn.split('.')[-2]}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_property(p, name, factor_names))
