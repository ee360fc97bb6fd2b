"""Rooted plane trees, their reciprocal-factorial weights, and the counts f_n.

A plane tree with n edges is encoded by its preorder forward-degree sequence
xi = (xi_0, ..., xi_n): the root's child count first, then each vertex's
child count in depth-first, left-to-right order.  A nonnegative sequence
encodes a single rooted tree exactly when the prefix sums satisfy the ballot
condition xi_0 + ... + xi_{k-1} >= k for every proper prefix and the total
equals n = len - 1.

The weight of a tree is prod_i 1 / xi_i!, w_n is the weight sum over all
n-edge plane trees, and f_n = K^n * w_n for a lattice of degree K.  w_n has
the closed form (n+1)^{n-1} / n!, which is what w_sum returns;
w_sum_by_enumeration recomputes it the long way for cross-checking.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from mpmath import mp

from ._mp import as_mpf
from .lattice import LatticeSpec, degree


@dataclass(frozen=True)
class PlaneTree:
    """Preorder forward-degree encoding of a rooted plane tree."""

    xi: tuple[int, ...]

    def __post_init__(self):
        xi = tuple(self.xi)
        object.__setattr__(self, "xi", xi)
        if not xi:
            raise ValueError("xi must have at least the root entry")
        n = len(xi) - 1
        running = 0
        for k in range(1, n + 1):  # proper prefixes only
            x = xi[k - 1]
            if x < 0:
                raise ValueError(f"negative forward degree in {xi}")
            running += x
            if running < k:
                raise ValueError(f"ballot condition fails at prefix {k} of {xi}")
        if xi[-1] < 0:
            raise ValueError(f"negative forward degree in {xi}")
        if running + xi[-1] != n:
            raise ValueError(f"degree sum {running + xi[-1]} != edge count {n}")

    @classmethod
    def _unchecked(cls, xi: tuple[int, ...]) -> "PlaneTree":
        # Constructor for the enumerator, whose output is valid by
        # construction; skips the O(n) ballot validation.
        self = object.__new__(cls)
        object.__setattr__(self, "xi", xi)
        return self

    @property
    def n_edges(self) -> int:
        return len(self.xi) - 1

    @property
    def n_vertices(self) -> int:
        return len(self.xi)

    def parents(self) -> tuple[int, ...]:
        """parents[i] = preorder index of vertex i's parent; parents[0] = -1."""
        xi = self.xi
        par = [-1] * len(xi)
        stack = [0]
        rem = [xi[0]]
        for i in range(1, len(xi)):
            while rem[-1] == 0:
                stack.pop()
                rem.pop()
            par[i] = stack[-1]
            rem[-1] -= 1
            stack.append(i)
            rem.append(xi[i])
        return tuple(par)

    def is_leaf(self, i: int) -> bool:
        return self.xi[i] == 0


def enumerate_plane_trees(n: int) -> Iterator[PlaneTree]:
    """All n-edge rooted plane trees, in ascending lexicographic xi order.

    There are Catalan(n) of them.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    buf = [0] * (n + 1)

    def rec(k, s):
        # k slots filled, degree sum s so far
        if k == n:
            # the last preorder vertex never has children; the ballot
            # condition already forces s == n here
            yield PlaneTree._unchecked(tuple(buf))
            return
        lo = max(0, k + 1 - s)  # keep prefix sums >= prefix length
        for x in range(lo, n - s + 1):
            buf[k] = x
            yield from rec(k + 1, s + x)
        buf[k] = 0

    yield from rec(0, 0)


def weight(tree: PlaneTree) -> Fraction:
    """prod_i 1 / xi_i! as an exact rational."""
    den = 1
    for x in tree.xi:
        den *= math.factorial(x)
    return Fraction(1, den)


def w_sum(n: int) -> Fraction:
    """w_n = sum of weight(T) over n-edge plane trees = (n+1)^{n-1} / n!."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return Fraction(1)
    return Fraction((n + 1) ** (n - 1), math.factorial(n))


def w_sum_by_enumeration(n: int) -> Fraction:
    """w_n recomputed by direct enumeration, for cross-checking w_sum.

    Each weight has denominator dividing n! (the multinomial n!/prod xi_i!
    is an integer), so the sum is accumulated as an integer numerator over
    the common denominator n!.
    """
    nfact = math.factorial(n)
    num = 0
    for tree in enumerate_plane_trees(n):
        den = 1
        for x in tree.xi:
            den *= math.factorial(x)
        num += nfact // den
    return Fraction(num, nfact)


def f_count(spec: LatticeSpec, n: int) -> Fraction:
    """f_n = K^n * w_n; depends on the spec only through its degree K."""
    return Fraction(degree(spec) ** n) * w_sum(n)


def gw_probability(tree: PlaneTree) -> tuple[Fraction, int]:
    """(r, m) with the tree's branching probability equal to r * e^{-m}.

    This is the probability of the tree under critical Poisson(1) offspring:
    prod_i e^{-1}/xi_i! over the m = n+1 vertices.  The e-power is kept
    symbolic so the rational part stays exact.
    """
    return weight(tree), tree.n_vertices


def f_partial_sum(spec: LatticeSpec, N: int, z, *, dps: int = 50):
    """sum_{n<=N} f_n z^n evaluated to dps significant digits.

    At z = 1/(K e) the value is sum_{n<=N} w_n e^{-n}, independent of K, and
    increases with N toward e.  The tail at that point decays only like
    n^{-3/2}, so convergence in N is slow; see the asymptotics module notes.
    """
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    K = degree(spec)
    with mp.workdps(dps):
        zz = as_mpf(z)
        if zz < 0:
            raise ValueError(f"z must be >= 0, got {z}")
        total = mp.mpf(0)
        zpow = mp.mpf(1)
        for n in range(N + 1):
            w = w_sum(n)
            total += mp.mpf(K**n * w.numerator) / w.denominator * zpow
            zpow *= zz
        return +total
