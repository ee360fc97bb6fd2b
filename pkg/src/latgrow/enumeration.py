"""Exact enumeration of lattice trees and bond animals containing the origin.

The counter is an ordered-growth search over bond subgraphs, adapted from the
classic fixed-polyomino scheme to bond sets anchored at a vertex: bonds enter
an "untried" frontier list the first time they become incident to the growing
subgraph, and a subgraph may only append frontier entries that arrived no
earlier than its last appended bond.  Every connected bond set containing the
origin is generated exactly once, with no hashing and no duplicate checks.

Counts t_n (acyclic) and a_n (all) are exact Python integers.  A CountTable
persists them in an append-only text cache, one `spec,kind,n,count` record
per line.

Sizing note: n bonds never reach farther than n * reach from the origin in
any coordinate (reach = 1 nearest-neighbour, L spread-out), so the search
lives in a fixed box and sites/bonds get dense integer indices.  Bond index
order equals the canonical bond order, which is what makes "ordered growth"
mean the same thing here as in the cut transform.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

from .errors import BudgetExceededError, CacheIntegrityError
from .lattice import (
    Bond,
    Family,
    LatticeSpec,
    Site,
    origin,
    parse_spec,
    positive_offsets,
)

DEFAULT_NODE_BUDGET = 10**9

KINDS = ("tree", "animal")


@dataclass(frozen=True)
class BondSubgraph:
    """A finite set of lattice bonds, stored sorted in canonical bond order.

    The vertex set is derived: all bond endpoints, or the origin alone when
    the bond set is empty (the n=0 object).
    """

    bonds: tuple[Bond, ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "bonds", tuple(sorted(self.bonds)))

    @cached_property
    def vertices(self) -> frozenset[Site]:
        if not self.bonds:
            return frozenset([origin(self.dim)])
        return frozenset(v for b in self.bonds for v in b)

    @property
    def n_bonds(self) -> int:
        return len(self.bonds)

    def adjacency(self) -> dict[Site, list[Site]]:
        adj: dict[Site, list[Site]] = {v: [] for v in self.vertices}
        for lo, hi in self.bonds:
            adj[lo].append(hi)
            adj[hi].append(lo)
        return adj

    def is_connected(self) -> bool:
        verts = self.vertices
        adj = self.adjacency()
        seen = {next(iter(verts))}
        stack = list(seen)
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(verts)

    def is_valid(self) -> bool:
        """Connected and contains the origin."""
        return origin(self.dim) in self.vertices and self.is_connected()


def cycles(g: BondSubgraph) -> int:
    """Cyclomatic number |bonds| - |vertices| + 1 of a connected subgraph.

    Zero exactly when g is a lattice tree.
    """
    return len(g.bonds) - len(g.vertices) + 1


class CountTable:
    """Exact counts keyed by (spec string, kind, n), optionally file-backed.

    The cache file is append-only text, one record per line in the form
    ``spec-string,kind,n,count`` with the count in decimal.  Entries are
    immutable: writing a different value for an existing key, in memory or
    on disk, raises CacheIntegrityError.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = os.fspath(path) if path is not None else None
        self._mem: dict[tuple[str, str, int], int] = {}
        if self.path is not None and os.path.exists(self.path):
            self._load()

    def _load(self):
        with open(self.path, "r", encoding="ascii") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != 4:
                    raise CacheIntegrityError(
                        f"{self.path}:{lineno}: malformed record {line!r}"
                    )
                spec_string, kind, n_text, count_text = parts
                if kind not in KINDS or not n_text.isdigit() or not count_text.isdigit():
                    raise CacheIntegrityError(
                        f"{self.path}:{lineno}: malformed record {line!r}"
                    )
                self._store(spec_string, kind, int(n_text), int(count_text),
                            where=f"{self.path}:{lineno}")

    def _store(self, spec_string, kind, n, value, where="memory"):
        key = (spec_string, kind, n)
        old = self._mem.get(key)
        if old is not None and old != value:
            raise CacheIntegrityError(
                f"{where}: conflicting count for {key}: had {old}, got {value}"
            )
        self._mem[key] = value
        return old is None

    def get(self, spec_string: str, kind: str, n: int) -> int | None:
        return self._mem.get((spec_string, kind, n))

    def put(self, spec_string: str, kind: str, n: int, value: int) -> None:
        if kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
        fresh = self._store(spec_string, kind, n, value)
        if fresh and self.path is not None:
            with open(self.path, "a", encoding="ascii") as fh:
                fh.write(f"{spec_string},{kind},{n},{value}\n")

    def put_many(self, records) -> None:
        """records: iterable of (spec_string, kind, n, value)."""
        lines = []
        for spec_string, kind, n, value in records:
            if kind not in KINDS:
                raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
            if self._store(spec_string, kind, n, value):
                lines.append(f"{spec_string},{kind},{n},{value}\n")
        if lines and self.path is not None:
            with open(self.path, "a", encoding="ascii") as fh:
                fh.writelines(lines)

    def __len__(self):
        return len(self._mem)


# ---------------------------------------------------------------------------
# dense index tables

@dataclass(frozen=True)
class _Tables:
    d: int
    W: int
    side: int
    npos: int
    bond_lo: list  # bond id -> lo site index
    bond_hi: list
    inc: list      # site index -> sorted bond ids incident inside the box
    origin_idx: int
    pos: tuple[Site, ...]

    def coords_of(self, ix: int) -> Site:
        cs = []
        for _ in range(self.d):
            cs.append(ix % self.side - self.W)
            ix //= self.side
        return tuple(reversed(cs))

    def bond_of(self, b: int) -> Bond:
        # lo + positive offset is always lexicographically above lo, so the
        # pair is already canonical.
        lo = self.coords_of(self.bond_lo[b])
        off = self.pos[b % self.npos]
        hi = tuple(a + v for a, v in zip(lo, off))
        return Bond(lo, hi)


@lru_cache(maxsize=32)
def _tables(spec: LatticeSpec, n_max: int) -> _Tables:
    pos = positive_offsets(spec)
    npos = len(pos)
    reach = spec.L if spec.family is Family.SPREAD_OUT else 1
    W = n_max * reach
    side = 2 * W + 1
    d = spec.d
    nsites = side**d

    def site_idx(coords):
        ix = 0
        for c in coords:
            ix = ix * side + (c + W)
        return ix

    def in_box(coords):
        return all(-W <= c <= W for c in coords)

    def coords_of(ix):
        cs = []
        for _ in range(d):
            cs.append(ix % side - W)
            ix //= side
        return tuple(reversed(cs))

    # Site index preserves lexicographic site order, and bond id
    # lo_idx * npos + offset_rank preserves canonical bond order.
    nbonds = nsites * npos
    bond_lo = [0] * nbonds
    bond_hi = [0] * nbonds
    inc: list = [None] * nsites
    for s in range(nsites):
        cs = coords_of(s)
        lst = []
        for j, v in enumerate(pos):
            other = tuple(a + b for a, b in zip(cs, v))
            if in_box(other):
                b = s * npos + j
                bond_lo[b] = s
                bond_hi[b] = site_idx(other)
                lst.append(b)
        for j, v in enumerate(pos):
            other = tuple(a - b for a, b in zip(cs, v))
            if in_box(other):
                lst.append(site_idx(other) * npos + j)
        lst.sort()
        inc[s] = lst
    return _Tables(d, W, side, npos, bond_lo, bond_hi, inc,
                   site_idx(origin(d)), pos)


# ---------------------------------------------------------------------------
# counting pass

def _count_core(spec, n_max, budget, first_lo=0, first_hi=None):
    """Count subgraphs with 1..n_max bonds; returns (trees, animals, nodes).

    first_lo/first_hi restrict the top-level choice to a slice of the
    origin's initial frontier; (0, None) means the whole search.  Workers
    partitioned by disjoint slices sum to exactly the sequential result
    because each top-level branch restores all shared state before the next.
    """
    tab = _tables(spec, n_max)
    trees = [0] * (n_max + 1)
    animals = [0] * (n_max + 1)
    if n_max == 0:
        return trees, animals, 0
    blo = tab.bond_lo
    bhi = tab.bond_hi
    inc = tab.inc
    ref = [0] * len(inc)
    ref[tab.origin_idx] = 1
    reached = bytearray(len(blo))
    stack = []
    for b in inc[tab.origin_idx]:
        reached[b] = 1
        stack.append(b)
    if first_hi is None:
        first_hi = len(stack)
    nodes = 0

    def rec(first, last, depth, cyc):
        nonlocal nodes
        st = stack
        rf = ref
        rc = reached
        for i in range(first, last):
            b = st[i]
            p = blo[b]
            q = bhi[b]
            newp = rf[p] == 0
            newq = rf[q] == 0
            rf[p] += 1
            rf[q] += 1
            c2 = cyc
            if not (newp or newq):
                c2 += 1
            animals[depth] += 1
            if c2 == 0:
                trees[depth] += 1
            nodes += 1
            if nodes > budget:
                raise BudgetExceededError(
                    f"enumeration budget of {budget} search nodes exceeded "
                    f"for {spec.spec_string()} n_max={n_max}",
                    budget=budget, spent=nodes,
                )
            if depth < n_max:
                e = last
                if newp:
                    for c in inc[p]:
                        if not rc[c]:
                            rc[c] = 1
                            st.append(c)
                if newq:
                    for c in inc[q]:
                        if not rc[c]:
                            rc[c] = 1
                            st.append(c)
                e2 = len(st)
                rec(i + 1, e2, depth + 1, c2)
                for k in range(e, e2):
                    rc[st[k]] = 0
                del st[e:]
            rf[p] -= 1
            rf[q] -= 1

    rec(first_lo, first_hi, 1, 0)
    return trees, animals, nodes


def _count_worker(args):
    spec_string, n_max, budget, lo, hi = args
    return _count_core(parse_spec(spec_string), n_max, budget, lo, hi)


def count_up_to(
    spec: LatticeSpec,
    n_max: int,
    *,
    table: CountTable | None = None,
    budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
) -> tuple[list[int], list[int]]:
    """Exact (t_0..t_n_max, a_0..a_n_max) for subgraphs containing the origin.

    One search produces both kinds for every n at once, so bulk callers
    should prefer this over per-n calls.  Consults and updates `table`.
    With jobs > 1 the search is split by the top-level frontier slot and the
    partial counts are summed; the result is identical to the sequential one.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    ss = spec.spec_string()
    if table is not None:
        trees = [table.get(ss, "tree", n) for n in range(n_max + 1)]
        animals = [table.get(ss, "animal", n) for n in range(n_max + 1)]
        if all(v is not None for v in trees) and all(v is not None for v in animals):
            return trees, animals

    if jobs == 1 or n_max == 0:
        trees, animals, _ = _count_core(spec, n_max, budget)
    else:
        width = len(_tables(spec, n_max).inc[_tables(spec, n_max).origin_idx])
        jobs = min(jobs, width)
        bounds = [round(i * width / jobs) for i in range(jobs + 1)]
        args = [
            (ss, n_max, budget, bounds[i], bounds[i + 1])
            for i in range(jobs)
            if bounds[i] < bounds[i + 1]
        ]
        trees = [0] * (n_max + 1)
        animals = [0] * (n_max + 1)
        total_nodes = 0
        with ProcessPoolExecutor(max_workers=len(args)) as pool:
            for part_t, part_a, part_nodes in pool.map(_count_worker, args):
                total_nodes += part_nodes
                for n in range(n_max + 1):
                    trees[n] += part_t[n]
                    animals[n] += part_a[n]
        if total_nodes > budget:
            raise BudgetExceededError(
                f"enumeration budget of {budget} search nodes exceeded "
                f"for {ss} n_max={n_max}",
                budget=budget, spent=total_nodes,
            )
    trees[0] = 1
    animals[0] = 1
    if table is not None:
        table.put_many(
            [(ss, "tree", n, trees[n]) for n in range(n_max + 1)]
            + [(ss, "animal", n, animals[n]) for n in range(n_max + 1)]
        )
    return trees, animals


def count_trees(spec: LatticeSpec, n: int, *, table: CountTable | None = None,
                budget: int = DEFAULT_NODE_BUDGET, jobs: int = 1) -> int:
    """t_n: lattice trees with n bonds containing the origin.  t_0 = 1."""
    if table is not None:
        hit = table.get(spec.spec_string(), "tree", n)
        if hit is not None:
            return hit
    trees, _ = count_up_to(spec, n, table=table, budget=budget, jobs=jobs)
    return trees[n]


def count_animals(spec: LatticeSpec, n: int, *, table: CountTable | None = None,
                  budget: int = DEFAULT_NODE_BUDGET, jobs: int = 1) -> int:
    """a_n: lattice animals (cycles allowed) with n bonds containing the
    origin.  a_0 = 1."""
    if table is not None:
        hit = table.get(spec.spec_string(), "animal", n)
        if hit is not None:
            return hit
    _, animals = count_up_to(spec, n, table=table, budget=budget, jobs=jobs)
    return animals[n]


# ---------------------------------------------------------------------------
# streaming enumeration

def enumerate_subgraphs(
    spec: LatticeSpec,
    n: int,
    kind: str,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
) -> Iterator[BondSubgraph]:
    """Yield every n-bond subgraph of the given kind exactly once.

    kind "tree" restricts to acyclic subgraphs (and prunes cyclic branches
    early, since the cyclomatic number never decreases as bonds are added);
    kind "animal" yields everything.  The order is a fixed depth-first order
    determined by the frozen bond indexing, identical across runs.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        yield BondSubgraph((), spec.d)
        return
    tab = _tables(spec, n)
    blo = tab.bond_lo
    bhi = tab.bond_hi
    inc = tab.inc
    ref = [0] * len(inc)
    ref[tab.origin_idx] = 1
    reached = bytearray(len(blo))
    stack = []
    for b in inc[tab.origin_idx]:
        reached[b] = 1
        stack.append(b)
    chosen = []
    trees_only = kind == "tree"
    state = {"nodes": 0}

    def rec(first, last, depth, cyc):
        for i in range(first, last):
            b = stack[i]
            p = blo[b]
            q = bhi[b]
            newp = ref[p] == 0
            newq = ref[q] == 0
            c2 = cyc + (0 if (newp or newq) else 1)
            state["nodes"] += 1
            if state["nodes"] > budget:
                raise BudgetExceededError(
                    f"enumeration budget of {budget} search nodes exceeded "
                    f"for {spec.spec_string()} n={n}",
                    budget=budget, spent=state["nodes"],
                )
            if trees_only and c2 > 0:
                continue
            ref[p] += 1
            ref[q] += 1
            chosen.append(b)
            if depth == n:
                yield BondSubgraph(tuple(tab.bond_of(c) for c in chosen), spec.d)
            else:
                e = last
                if newp:
                    for c in inc[p]:
                        if not reached[c]:
                            reached[c] = 1
                            stack.append(c)
                if newq:
                    for c in inc[q]:
                        if not reached[c]:
                            reached[c] = 1
                            stack.append(c)
                e2 = len(stack)
                yield from rec(i + 1, e2, depth + 1, c2)
                for k in range(e, e2):
                    reached[stack[k]] = 0
                del stack[e:]
            chosen.pop()
            ref[p] -= 1
            ref[q] -= 1

    yield from rec(0, len(stack), 1, 0)
