"""Shared test fixtures: an independent brute-force subgraph oracle and
small geometry builders.

The oracle deliberately shares no code or algorithm with the package: it
grows bond sets breadth-first from the origin and deduplicates whole sets,
which is slow but has no ordering logic to get wrong.
"""
from itertools import product

from hypothesis import settings

from latgrow.enumeration import BondSubgraph
from latgrow.lattice import Family, LatticeSpec, make_bond

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

NN1 = LatticeSpec(Family.NEAREST_NEIGHBOUR, 1)
NN2 = LatticeSpec(Family.NEAREST_NEIGHBOUR, 2)
NN3 = LatticeSpec(Family.NEAREST_NEIGHBOUR, 3)
NN4 = LatticeSpec(Family.NEAREST_NEIGHBOUR, 4)
SO1 = LatticeSpec(Family.SPREAD_OUT, 2, 1)
SO2 = LatticeSpec(Family.SPREAD_OUT, 2, 2)
SO3 = LatticeSpec(Family.SPREAD_OUT, 2, 3)


def brute_layers(spec, n_max):
    """layers[n] = set of frozensets of bonds: every connected n-bond set
    containing the origin, built by unordered growth with set dedup."""
    so = spec.family is Family.SPREAD_OUT
    reach = spec.L if so else 1
    offs = [
        v
        for v in product(range(-reach, reach + 1), repeat=spec.d)
        if any(v) and (so or sum(map(abs, v)) == 1)
    ]
    origin = (0,) * spec.d

    def nbrs(x):
        return [tuple(a + b for a, b in zip(x, v)) for v in offs]

    layers = [{frozenset()}]
    for _ in range(n_max):
        nxt = set()
        for g in layers[-1]:
            verts = {origin} | {v for b in g for v in b}
            for v in verts:
                for w in nbrs(v):
                    b = (v, w) if v < w else (w, v)
                    if b not in g:
                        nxt.add(g | {b})
        layers.append(nxt)
    return layers


def brute_counts(spec, n_max):
    """(trees, animals) per n, derived from brute_layers."""
    layers = brute_layers(spec, n_max)
    trees, animals = [], []
    for g_set in layers:
        animals.append(len(g_set))
        nt = 0
        for g in g_set:
            verts = {v for b in g for v in b}
            if not g or len(g) == len(verts) - 1:
                nt += 1
        trees.append(nt)
    return trees, animals


def subgraph(pairs, d=2):
    """BondSubgraph from unordered site pairs."""
    return BondSubgraph(tuple(make_bond(x, y) for x, y in pairs), d)


def unit_square():
    return subgraph([((0, 0), (1, 0)), ((0, 0), (0, 1)),
                     ((1, 0), (1, 1)), ((0, 1), (1, 1))])


def two_squares():
    # two unit squares sharing the bond (1,0)-(1,1): 7 bonds, 6 vertices
    return subgraph([
        ((0, 0), (1, 0)), ((0, 0), (0, 1)), ((1, 0), (1, 1)),
        ((0, 1), (1, 1)), ((1, 0), (2, 0)), ((2, 0), (2, 1)),
        ((1, 1), (2, 1)),
    ])
