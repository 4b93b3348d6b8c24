"""Bounded factorization of properties into irreducible factors.

Nothing here decides property equality in general: every verdict is
relative to an explicit vertex bound and says so.  A factorization
"verified at n" means both sides agree on every graph with at most n
vertices; a dec bracket (lower, upper) sandwiches the true minimum of
the maximal part count over all strict members.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    Hypergraph,
    HgError,
    canonical_form,
    canonical_key,
    embed_induced,
    induced,
)
from .generate import EnumSpec, enumerate_hypergraphs
from .props import (
    FiniteForbidden,
    GeneratedBounded,
    ProductProperty,
    Property,
    is_additive,
    min_forbidden_order,
)
from .decomp import (
    BOUNDED,
    EXACT,
    dec_number,
    ind_parts,
    is_strict,
    is_uniquely_decomposable,
    multiplicity,
    unique_decomposition,
)

__all__ = [
    "IRREDUCIBLE_CERTIFIED",
    "REDUCIBLE",
    "UNKNOWN",
    "FullMultiplicityError",
    "Factorisation",
    "VerifyResult",
    "DecBounds",
    "IrreducibilityVerdict",
    "verify_factorisation",
    "dec_bounds",
    "irreducibility_test",
    "factor_search",
    "ind_part_family",
    "case_split",
    "parallel_map",
]

IRREDUCIBLE_CERTIFIED = "IRREDUCIBLE_CERTIFIED"
REDUCIBLE = "REDUCIBLE"
UNKNOWN = "UNKNOWN"


class FullMultiplicityError(HgError):
    """The chosen graph hits every ind-part of some family member, so the
    bounded-multiplicity split does not apply."""


def parallel_map(fn, items: Sequence, workers: int = 1) -> list:
    """Order-preserving map, threaded when workers > 1; the result list
    is identical at every worker count."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _mode_for(p: Property) -> str:
    return EXACT if isinstance(p, FiniteForbidden) else BOUNDED


@dataclass(frozen=True)
class Factorisation:
    """factors verified to multiply to the target property on every
    graph with at most equality_bound vertices."""

    factors: tuple
    equality_bound: int
    dec_bracket: tuple

    def __post_init__(self):
        lo, hi = self.dec_bracket
        if lo > hi:
            raise ValueError("inverted dec bracket")
        for f in self.factors:
            if isinstance(f, FiniteForbidden) and not is_additive(f):
                raise ValueError("factor is not additive")


@dataclass(frozen=True)
class VerifyResult:
    holds: bool
    bound: int
    counterexample: Optional[Hypergraph] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class DecBounds:
    lower: int
    upper: int
    witness: Optional[tuple] = None  # (strict graph, its maximal decomposition)
    note: str = ""

    def __iter__(self):
        return iter((self.lower, self.upper))


@dataclass(frozen=True)
class IrreducibilityVerdict:
    status: str
    factorisations: tuple = ()
    witness: Optional[tuple] = None
    note: str = ""


def verify_factorisation(p: Property, factors: Sequence, n: int,
                         workers: int = 1) -> VerifyResult:
    """Do P and the product of the factors agree on every graph with at
    most n vertices?  The reported counterexample is always the first
    disagreeing graph in enumeration order, at any worker count."""
    prod = ProductProperty(tuple(factors))
    graphs = list(enumerate_hypergraphs(EnumSpec(p.universe, n)))

    def agree(g: Hypergraph) -> bool:
        return bool(p.member(g)) == bool(prod.member(g))

    if workers <= 1:
        for g in graphs:
            if not agree(g):
                return VerifyResult(False, n, g)
        return VerifyResult(True, n)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        for g, ok in zip(graphs, ex.map(agree, graphs)):
            if not ok:
                return VerifyResult(False, n, g)
    return VerifyResult(True, n)


def _syntactic_lower(p: Property) -> int:
    if isinstance(p, ProductProperty):
        return sum(_syntactic_lower(f) for f in p.factors)
    return 1


def _strict_members(p: Property, n: int):
    for g in enumerate_hypergraphs(EnumSpec(p.universe, n)):
        if g.n == 0 or not p.member(g):
            continue
        if is_strict(g, p):
            yield g


def dec_bounds(p: Property, n: int, k_max: int = 1) -> DecBounds:
    """Bracket the minimum maximal-part-count over strict members.

    upper scans every strict member with at most n vertices (the true
    value is a minimum over all strict members, so any finite scan only
    overshoots); lower comes from the syntactic factor count, each
    factor contributing at least one part.  Non-forbidden-set
    representations are scanned in bounded join mode (k_max), which for
    the shapes handled here is still exact on refutations.
    """
    mode = _mode_for(p)
    lower = max(1, _syntactic_lower(p))
    additive_ff = isinstance(p, FiniteForbidden) and is_additive(p)
    upper = None
    witness = None
    for g in _strict_members(p, n):
        res = dec_number(g, p, mode, k_max)
        if upper is None or res.value < upper:
            upper, witness = res.value, (g, res.decomposition)
        if upper == 0 or (upper == 1 and additive_ff):
            break
    note = ""
    if upper is None:
        if isinstance(p, FiniteForbidden):
            upper = min_forbidden_order(p) - 1
            note = (f"no strict member within {n} vertices; upper bound is the "
                    f"minimum forbidden order minus one")
        else:
            raise HgError(f"no strict member within {n} vertices")
    if upper == 0:
        # some strict member admits no decomposition at all, so even the
        # one-part join fails for it; only non-additive properties do
        # this and the factor calculus does not apply to them
        raise HgError("a strict member has no decomposition; "
                      "factor bounds need an additive property")
    if lower > upper:
        raise HgError("internal error: dec bracket inverted")
    return DecBounds(lower, upper, witness, note)


def _connected_candidates(p: Property, max_size: int) -> list:
    """Finite-forbidden properties with connected forbidden antichains
    drawn from graphs of 2..max_size vertices (additive by construction)."""
    conn = [g for g in enumerate_hypergraphs(
        EnumSpec(p.universe, max_size, connected_only=True)) if g.n >= 2]
    out = []
    for r in range(1, len(conn) + 1):
        for combo in itertools.combinations(conn, r):
            if all(embed_induced(a, b) is None
                   for a, b in itertools.permutations(combo, 2)):
                out.append(FiniteForbidden(p.universe, combo))
    return out


def _fingerprint(p: Property, n: int, universe_graphs) -> tuple:
    """Bounded extensional identity: the canonical keys of all members
    with at most n vertices."""
    return tuple(sorted(canonical_key(g) for g in universe_graphs if p.member(g)))


def factor_search(p: Property, candidate_forbidden_size: int, equality_bound: int,
                  workers: int = 1, _depth: int = 0) -> list:
    """Factorizations of P that verify at the equality bound.

    Candidate factors are finite-forbidden properties whose forbidden
    antichains use connected graphs of at most candidate_forbidden_size
    vertices (connectedness keeps every candidate additive).  Tuples up
    to the dec upper bound are verified extensionally; verified factors
    are refined recursively while they test reducible; results are
    deduplicated as unordered multisets under bounded property equality.
    """
    if _depth > 4:
        return []
    bracket = dec_bounds(p, equality_bound)
    if bracket.upper < 2:
        return []
    candidates = _connected_candidates(p, candidate_forbidden_size)
    combos = []
    for length in range(2, bracket.upper + 1):
        combos.extend(itertools.combinations_with_replacement(candidates, length))

    def check(combo) -> bool:
        return bool(verify_factorisation(p, combo, equality_bound))

    verdicts = parallel_map(check, combos, workers)
    verified = [combo for combo, ok in zip(combos, verdicts) if ok]

    def refine(factors) -> tuple:
        out = []
        for f in factors:
            verdict = irreducibility_test(f, equality_bound,
                                          candidate_forbidden_size,
                                          workers=1, _depth=_depth + 1)
            if verdict.status == REDUCIBLE and verdict.factorisations:
                out.extend(refine(verdict.factorisations[0].factors))
            else:
                out.append(f)
        return tuple(out)

    universe_graphs = list(enumerate_hypergraphs(EnumSpec(p.universe, equality_bound)))
    results = []
    seen = set()
    for combo in verified:
        refined = refine(combo)
        if refined != tuple(combo) and not verify_factorisation(p, refined, equality_bound):
            refined = tuple(combo)
        prints = sorted(_fingerprint(f, equality_bound, universe_graphs)
                        for f in refined)
        key = tuple(prints)
        if key in seen:
            continue
        seen.add(key)
        results.append(Factorisation(refined, equality_bound,
                                     (bracket.lower, bracket.upper)))
    return results


def irreducibility_test(p: Property, n: int, candidate_forbidden_size: int = 2,
                        workers: int = 1, _depth: int = 0) -> IrreducibilityVerdict:
    """Certify irreducibility via a strict member with maximal part
    count 1, or exhibit a verified factorization, or give up."""
    bracket = dec_bounds(p, n)
    if bracket.upper == 1:
        return IrreducibilityVerdict(
            IRREDUCIBLE_CERTIFIED, witness=bracket.witness,
            note="strict member with maximal part count 1")
    found = factor_search(p, candidate_forbidden_size, n, workers, _depth=_depth)
    if found:
        return IrreducibilityVerdict(REDUCIBLE, tuple(found))
    return IrreducibilityVerdict(
        UNKNOWN, note=f"no certificate either way at bound {n}")


def _strict_unique_family(p: Property, n: int, k_max: int) -> list:
    """Strict, uniquely decomposable members with the maximal part count
    equal to the dec upper bound, paired with their decompositions."""
    ub = dec_bounds(p, n, k_max).upper
    mode = _mode_for(p)
    fam = []
    for g in _strict_members(p, n):
        if dec_number(g, p, mode, k_max).value != ub:
            continue
        if not is_uniquely_decomposable(g, p, mode, k_max):
            continue
        fam.append((g, unique_decomposition(g, p, mode, k_max)))
    return fam


def ind_part_family(p: Property, n: int, k_max: int = 1) -> tuple:
    """Union of the ind-parts over every strict, uniquely decomposable
    member within the bound whose maximal part count meets the dec upper
    bound.  Needs an additive property (additivity checked exactly for
    forbidden sets, at the same bound otherwise)."""
    if not is_additive(p, search_bound=None if isinstance(p, FiniteForbidden) else n):
        raise HgError("the property is not additive")
    mode = _mode_for(p)
    parts = {}
    for g, d in _strict_unique_family(p, n, k_max):
        for part in ind_parts(g, p, mode, k_max):
            parts.setdefault(canonical_key(part), part)
    return tuple(sorted((canonical_form(parts[k]) for k in parts),
                        key=lambda h: (h.n, canonical_key(h))))


def case_split(p: Property, f: Hypergraph, n: int, k_max: int = 1) -> tuple:
    """Split by whether an ind-part contains f.

    Over the strict uniquely-decomposable family, f must appear in some
    ind-parts but never in all of them (full multiplicity defeats the
    split).  Members attaining the peak multiplicity contribute the
    union of their f-carrying parts as generators of the first returned
    property and the union of the rest as generators of the second; both
    come back bounded at n.
    """
    if not is_additive(p, search_bound=None if isinstance(p, FiniteForbidden) else n):
        raise HgError("the property is not additive")
    mode = _mode_for(p)
    ub = dec_bounds(p, n, k_max).upper
    fam = _strict_unique_family(p, n, k_max)
    mults = [(g, d, multiplicity(f, g, p, mode, k_max)) for g, d in fam]
    peak = max((m for _, _, m in mults), default=0)
    if peak == 0:
        raise HgError("the graph appears in no ind-part over the family")
    if peak == ub:
        raise FullMultiplicityError(
            "the graph hits every ind-part of some family member")
    with_gens = {}
    without_gens = {}
    for g, d, m in mults:
        if m != peak:
            continue
        carrying = [part for part in d.parts
                    if embed_induced(f, induced(g, part)) is not None]
        rest = [part for part in d.parts if part not in carrying]
        hit = induced(g, frozenset().union(*carrying))
        miss = induced(g, frozenset().union(*rest) if rest else frozenset())
        with_gens.setdefault(canonical_key(hit), canonical_form(hit))
        without_gens.setdefault(canonical_key(miss), canonical_form(miss))
    return (GeneratedBounded(p.universe, tuple(with_gens.values()), n),
            GeneratedBounded(p.universe, tuple(without_gens.values()), n))
