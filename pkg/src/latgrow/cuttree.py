"""The cut transform: break every cycle of an animal into a dangling half-bond.

Repeatedly take the canonically smallest bond that lies on a cycle (i.e. is
not a bridge), drop its half at the lo endpoint, and keep the half at the hi
endpoint as a dangling arc.  After c rounds (c = cyclomatic number) the
result is a lattice tree decorated with c half-bonds: a CutTree.  The map is
a bijection from n-bond animals onto its image; reconstruct() inverts it and
rejects anything outside the image.

The bond order used for "smallest" is the canonical order frozen in the
lattice module.  Changing it would silently change every cut-tree, so it is
deliberately not a parameter.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator

from .enumeration import (
    DEFAULT_NODE_BUDGET,
    BondSubgraph,
    cycles,
    enumerate_subgraphs,
)
from .errors import InvalidCutTreeError
from .lattice import Bond, End, HalfBond, LatticeSpec, Site, adjacent, origin


@dataclass(frozen=True)
class CutTree:
    """A lattice tree plus dangling half-bonds, both stored sorted.

    Equality is structural: same full bonds, same half-bonds (underlying
    bond and retained end).
    """

    full_bonds: tuple[Bond, ...]
    half_bonds: tuple[HalfBond, ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "full_bonds", tuple(sorted(self.full_bonds)))
        object.__setattr__(
            self,
            "half_bonds",
            tuple(sorted(self.half_bonds, key=lambda h: (h.bond, h.retained_end.value))),
        )

    @property
    def n_items(self) -> int:
        """Total bonds plus half-bonds; equals the source animal's bond count."""
        return len(self.full_bonds) + len(self.half_bonds)

    def sites(self) -> frozenset[Site]:
        """Vertices of the cut-tree.  A site whose only appearance was the
        removed end of a half-bond is not a vertex."""
        out = {v for b in self.full_bonds for v in b}
        out.update(h.retained_site() for h in self.half_bonds)
        if not out:
            out = {origin(self.dim)}
        return frozenset(out)


# ---------------------------------------------------------------------------
# forward transform

def _non_bridges(bonds: list[Bond]) -> list[Bond]:
    """Bonds lying on at least one cycle, i.e. whose removal keeps the two
    endpoints connected.  Plain BFS per bond; inputs here have at most a few
    dozen bonds, so no need for a linear-time bridge algorithm."""
    adj = defaultdict(list)
    for b in bonds:
        adj[b.lo].append((b, b.hi))
        adj[b.hi].append((b, b.lo))
    out = []
    for b in bonds:
        seen = {b.lo}
        stack = [b.lo]
        found = False
        while stack and not found:
            v = stack.pop()
            for bb, w in adj[v]:
                if bb == b or w in seen:
                    continue
                if w == b.hi:
                    found = True
                    break
                seen.add(w)
                stack.append(w)
        if found:
            out.append(b)
    return out


def cut_tree(spec: LatticeSpec, animal: BondSubgraph) -> CutTree:
    """Transform an animal containing the origin into its cut-tree.

    Each round converts the smallest non-bridge bond into a half-bond
    retained at its hi end (the lo half is the one removed).  Removing a
    cycle bond never disconnects anything and never isolates a vertex, so
    the loop runs exactly cycles(animal) times.
    """
    if not animal.is_valid():
        raise ValueError("input must be a connected subgraph containing the origin")
    bonds = list(animal.bonds)
    halves = []
    while True:
        candidates = _non_bridges(bonds)
        if not candidates:
            break
        b = min(candidates)
        bonds.remove(b)
        halves.append(HalfBond(b, End.MAX))
    return CutTree(tuple(bonds), tuple(halves), animal.dim)


# ---------------------------------------------------------------------------
# inverse transform

def reconstruct(spec: LatticeSpec, x: CutTree) -> BondSubgraph:
    """The unique animal cutting to x; InvalidCutTreeError if there is none.

    Completing the half-bonds must give a connected bond set containing the
    origin that cuts back to exactly x.  The re-cut check is what rejects
    hand-built trees whose half-bonds sit on the wrong cycle bonds or retain
    the wrong end.
    """
    under = [h.bond for h in x.half_bonds]
    all_bonds = list(x.full_bonds) + under
    if len(set(all_bonds)) != len(all_bonds):
        raise InvalidCutTreeError("duplicate bonds between full and half sets")
    for b in all_bonds:
        if not adjacent(spec, b.lo, b.hi):
            raise InvalidCutTreeError(f"{b} is not a lattice bond for {spec.spec_string()}")
    g = BondSubgraph(tuple(all_bonds), x.dim)
    if not g.is_valid():
        raise InvalidCutTreeError(
            "completed bond set is disconnected or misses the origin"
        )
    if cut_tree(spec, g) != x:
        raise InvalidCutTreeError("completed animal does not cut back to the input")
    return g


def count_cut_trees(spec: LatticeSpec, n: int, *,
                    budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Cardinality of the cut-tree image over all n-bond animals.

    Injectivity of the transform means this must equal a_n.
    """
    found = set()
    for a in enumerate_subgraphs(spec, n, "animal", budget=budget):
        found.add(cut_tree(spec, a))
    return len(found)


# ---------------------------------------------------------------------------
# degrees and the map-count product

def degrees(x: CutTree) -> dict[Site, int]:
    """Forward degrees b_v of the cut-tree's vertices.

    The raw degree counts full bonds at both endpoints and half-bonds at
    their retained endpoint only.  b_origin is the raw degree; every other
    vertex gives up one for the edge toward the origin.
    """
    deg: dict[Site, int] = defaultdict(int)
    for b in x.full_bonds:
        deg[b.lo] += 1
        deg[b.hi] += 1
    for h in x.half_bonds:
        deg[h.retained_site()] += 1
    o = origin(x.dim)
    if not deg:
        return {o: 0}
    return {v: (c if v == o else c - 1) for v, c in deg.items()}


def nu_product(x: CutTree) -> int:
    """prod_v b_v! over the cut-tree's vertices."""
    out = 1
    for b in degrees(x).values():
        out *= math.factorial(b)
    return out


def nu_recursive(x: CutTree) -> int:
    """The same count via the root recursion: b_0! times the product over
    the root's full-bond branches, each re-rooted (translated so its top
    vertex sits at the origin).  Half-bonds at the root contribute dangling
    branches with nothing in them, i.e. factors of 1.

    Kept deliberately separate from nu_product: agreement of the two is one
    of the verification targets, so they must not share code.
    """
    o = origin(x.dim)
    root_full = [b for b in x.full_bonds if o in (b.lo, b.hi)]
    root_half = [h for h in x.half_bonds if h.retained_site() == o]
    out = math.factorial(len(root_full) + len(root_half))
    for b in root_full:
        child = b.hi if b.lo == o else b.lo
        out *= nu_recursive(_branch(x, o, child))
    return out


def _branch(x: CutTree, root: Site, child: Site) -> CutTree:
    # Component hanging below the root edge (root, child), translated by
    # -child.  The full-bond graph is a tree, so BFS from child avoiding the
    # root finds it.
    adj = defaultdict(list)
    for b in x.full_bonds:
        adj[b.lo].append((b, b.hi))
        adj[b.hi].append((b, b.lo))
    keep_sites = {child}
    keep_bonds = []
    stack = [child]
    while stack:
        v = stack.pop()
        for b, w in adj[v]:
            if w == root or w in keep_sites:
                continue
            keep_sites.add(w)
            keep_bonds.append(b)
            stack.append(w)
    halves = [h for h in x.half_bonds if h.retained_site() in keep_sites]

    def shift(s):
        return tuple(a - c for a, c in zip(s, child))

    full = tuple(Bond(shift(b.lo), shift(b.hi)) for b in keep_bonds)
    half = tuple(HalfBond(Bond(shift(h.bond.lo), shift(h.bond.hi)), h.retained_end)
                 for h in halves)
    return CutTree(full, half, x.dim)


# ---------------------------------------------------------------------------
# text serialization (fixture format)

def to_text(x: CutTree) -> str:
    """Canonical text form: a dim header, then sorted full bonds, then
    sorted half-bonds with their retained-end flag.

        dim 2
        bond (0,0) (1,0)
        half (0,0) (0,1) max
    """
    lines = [f"dim {x.dim}"]
    for b in x.full_bonds:
        lines.append(f"bond {_site_text(b.lo)} {_site_text(b.hi)}")
    for h in x.half_bonds:
        lines.append(
            f"half {_site_text(h.bond.lo)} {_site_text(h.bond.hi)} {h.retained_end.value}"
        )
    return "\n".join(lines) + "\n"


def from_text(text: str) -> CutTree:
    dim = None
    full = []
    half = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == "dim" and len(words) == 2 and dim is None:
                dim = int(words[1])
            elif words[0] == "bond" and len(words) == 3:
                full.append(Bond(_site_parse(words[1]), _site_parse(words[2])))
            elif words[0] == "half" and len(words) == 4:
                half.append(
                    HalfBond(Bond(_site_parse(words[1]), _site_parse(words[2])),
                             End(words[3]))
                )
            else:
                raise ValueError("unrecognized line")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc} in {raw!r}") from None
    if dim is None or dim < 1:
        raise ValueError("missing or bad dim header")
    for b in full + [h.bond for h in half]:
        if len(b.lo) != dim or len(b.hi) != dim or not b.lo < b.hi:
            raise ValueError(f"bond {b} is not canonical for dim {dim}")
    return CutTree(tuple(full), tuple(half), dim)


def _site_text(s: Site) -> str:
    return "(" + ",".join(str(c) for c in s) + ")"


def _site_parse(text: str) -> Site:
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"bad site {text!r}")
    return tuple(int(c) for c in text[1:-1].split(","))
