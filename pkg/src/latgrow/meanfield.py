"""Plane trees embedded in the lattice, and the identities they verify.

A mean-field configuration is a pair (T, phi): a rooted plane tree T with n
edges and a map phi sending the root to the origin and every other vertex to
a lattice neighbour of its parent's image.  There is no self-avoidance, so
each tree has exactly K^n embeddings.

Two exhaustive counts over configurations drive the verification suite:

* maps_onto_tree(L): the weight sum of configurations whose edge images hit
  the bonds of a lattice tree L bijectively.  Always exactly 1.
* maps_onto_cuttree(X): the number nu(X) of configurations matching a
  cut-tree X, where a tree edge may land on a half-bond only child-first
  onto the removed end, with the child a leaf of T.  Always prod_v b_v!.

Both are computed by a pruned depth-first matcher rather than brute force
over all K^n maps; the pruning only skips branches that provably cannot
match, so the counts are still exhaustive.  Tests cross-check against the
raw K^n sweep on tiny instances.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .cuttree import CutTree
from .enumeration import (
    DEFAULT_NODE_BUDGET,
    BondSubgraph,
    CountTable,
    count_trees,
    cycles,
)
from .errors import BudgetExceededError, IdentityError
from .lattice import LatticeSpec, Site, degree, make_bond, offsets, origin
from .planetree import PlaneTree, enumerate_plane_trees, w_sum, weight

DEFAULT_MAP_BUDGET = 10**8


@dataclass(frozen=True)
class MeanFieldConfig:
    """A plane tree with its vertices mapped to sites, indexed in preorder."""

    tree: PlaneTree
    phi: tuple[Site, ...]

    def __post_init__(self):
        if len(self.phi) != self.tree.n_vertices:
            raise ValueError(
                f"phi has {len(self.phi)} entries for {self.tree.n_vertices} vertices"
            )


def validate_config(spec: LatticeSpec, config: MeanFieldConfig) -> None:
    """Raise ValueError unless root maps to the origin and every child maps
    to a neighbour of its parent's image."""
    if config.phi[0] != origin(spec.d):
        raise ValueError(f"root maps to {config.phi[0]}, not the origin")
    par = config.tree.parents()
    from .lattice import adjacent

    for i in range(1, len(config.phi)):
        if not adjacent(spec, config.phi[par[i]], config.phi[i]):
            raise ValueError(
                f"vertex {i} at {config.phi[i]} is not adjacent to its parent "
                f"at {config.phi[par[i]]}"
            )


def enumerate_maps(
    spec: LatticeSpec,
    tree: PlaneTree,
    *,
    budget: int = DEFAULT_MAP_BUDGET,
) -> Iterator[MeanFieldConfig]:
    """All K^n embeddings of the tree, in offset-lexicographic order."""
    n = tree.n_edges
    total = degree(spec) ** n
    if total > budget:
        raise BudgetExceededError(
            f"K^n = {total} embeddings exceeds the map budget of {budget}",
            budget=budget, spent=total,
        )
    offs = offsets(spec)
    par = tree.parents()
    o = origin(spec.d)
    for choice in itertools.product(offs, repeat=n):
        phi = [o] * (n + 1)
        for i in range(1, n + 1):
            px = phi[par[i]]
            off = choice[i - 1]
            phi[i] = tuple(a + b for a, b in zip(px, off))
        yield MeanFieldConfig(tree, tuple(phi))


def image(config: MeanFieldConfig) -> tuple[BondSubgraph, dict]:
    """Edge images collapsed to a subgraph, plus per-bond multiplicities.

    Children always land on neighbours, never on the parent's own site, so
    the image multigraph has no self-loops by construction.
    """
    par = config.tree.parents()
    mult = Counter()
    for i in range(1, len(config.phi)):
        mult[make_bond(config.phi[par[i]], config.phi[i])] += 1
    dim = len(config.phi[0])
    return BondSubgraph(tuple(mult.keys()), dim), dict(mult)


# ---------------------------------------------------------------------------
# pruned exhaustive matchers

def _embeddings(tree, inc_full, inc_half, o, counter, budget):
    """Yield phi tuples for every embedding of `tree` using each item of
    inc_full/inc_half exactly once.

    inc_full maps a site to (item, next_site) pairs traversable from that
    site; inc_half likewise but only traversable parent-side, landing on the
    removed end, and only when the tree vertex is a leaf.  Since the item
    count equals the tree's edge count, completing all vertices forces a
    bijection onto the items.
    """
    xi = tree.xi
    par = tree.parents()
    nv = len(xi)
    phi = [o] * nv
    used = set()

    def go(i):
        if i == nv:
            yield tuple(phi)
            return
        p = phi[par[i]]
        options = inc_full.get(p, ())
        if xi[i] == 0:
            options = options + inc_half.get(p, ())
        for item, nxt in options:
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetExceededError(
                    f"map budget of {budget} matcher steps exceeded",
                    budget=budget, spent=counter[0],
                )
            if item in used:
                continue
            used.add(item)
            phi[i] = nxt
            yield from go(i + 1)
            used.discard(item)

    yield from go(1)


def maps_onto_tree(
    spec: LatticeSpec,
    lattice_tree: BondSubgraph,
    *,
    budget: int = DEFAULT_MAP_BUDGET,
) -> Fraction:
    """Weight sum of configurations whose edge images cover the bonds of the
    given lattice tree bijectively.  Exactly 1 for every lattice tree.

    "Bijectively" is forced: the plane tree has n edges and the lattice tree
    n bonds, so covering each bond at least once means exactly once.
    """
    if not lattice_tree.is_valid() or cycles(lattice_tree) != 0:
        raise ValueError("input must be a lattice tree containing the origin")
    inc_full: dict[Site, tuple] = {}
    for b in lattice_tree.bonds:
        inc_full.setdefault(b.lo, []).append((b, b.hi))
        inc_full.setdefault(b.hi, []).append((b, b.lo))
    inc_full = {s: tuple(v) for s, v in inc_full.items()}
    n = lattice_tree.n_bonds
    counter = [0]
    total = Fraction(0)
    o = origin(lattice_tree.dim)
    for tree in enumerate_plane_trees(n):
        hits = sum(1 for _ in _embeddings(tree, inc_full, {}, o, counter, budget))
        if hits:
            total += hits * weight(tree)
    return total


def matching_configs(
    spec: LatticeSpec,
    x: CutTree,
    *,
    budget: int = DEFAULT_MAP_BUDGET,
) -> Iterator[MeanFieldConfig]:
    """Every configuration matching the cut-tree x.

    A configuration matches when each full bond and each half-bond is the
    image of exactly one tree edge, and an edge landing on a half-bond does
    so parent-side from the retained end, with its child (mapped to the
    removed end) a leaf of the plane tree.
    """
    inc_full: dict[Site, tuple] = {}
    for b in x.full_bonds:
        inc_full.setdefault(b.lo, []).append((b, b.hi))
        inc_full.setdefault(b.hi, []).append((b, b.lo))
    inc_full = {s: tuple(v) for s, v in inc_full.items()}
    inc_half: dict[Site, tuple] = {}
    for h in x.half_bonds:
        inc_half.setdefault(h.retained_site(), []).append((h, h.removed_site()))
    inc_half = {s: tuple(v) for s, v in inc_half.items()}
    counter = [0]
    o = origin(x.dim)
    for tree in enumerate_plane_trees(x.n_items):
        for phi in _embeddings(tree, inc_full, inc_half, o, counter, budget):
            yield MeanFieldConfig(tree, phi)


def maps_onto_cuttree(
    spec: LatticeSpec,
    x: CutTree,
    *,
    budget: int = DEFAULT_MAP_BUDGET,
) -> int:
    """nu(x): the number of configurations matching the cut-tree x."""
    return sum(1 for _ in matching_configs(spec, x, budget=budget))


# ---------------------------------------------------------------------------
# sandwich bounds

def falling(K: int, n: int) -> int:
    """K (K-1) ... (K-n+1); zero when n > K."""
    out = 1
    for i in range(n):
        out *= K - i
    return out


def tn_sandwich(
    spec: LatticeSpec,
    n: int,
    *,
    table: CountTable | None = None,
    budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
) -> tuple[Fraction, int, Fraction]:
    """(lower, t_n, upper) with lower = K(K-1)...(K-n+1) w_n and
    upper = K^n w_n; raises IdentityError if t_n ever escapes the sandwich.

    The lower bound counts embeddings with all-distinct images (at least
    the falling factorial of them per tree); the upper bound is all K^n.
    For n > K the falling factorial is zero and the bound is vacuous.
    """
    K = degree(spec)
    w = w_sum(n)
    lower = falling(K, n) * w
    upper = Fraction(K**n) * w
    t_n = count_trees(spec, n, table=table, budget=budget, jobs=jobs)
    if not lower <= t_n <= upper:
        raise IdentityError(
            f"sandwich violated for {spec.spec_string()} n={n}: "
            f"{lower} <= {t_n} <= {upper} is false"
        )
    return lower, t_n, upper


def tn_over_Kn(
    spec: LatticeSpec,
    n: int,
    *,
    table: CountTable | None = None,
    budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
) -> Fraction:
    """Exact t_n / K^n.  Lies in [w_n (1 - n(n-1)/2K), w_n] and climbs
    toward w_n as the degree K grows."""
    t_n = count_trees(spec, n, table=table, budget=budget, jobs=jobs)
    return Fraction(t_n, degree(spec) ** n)
