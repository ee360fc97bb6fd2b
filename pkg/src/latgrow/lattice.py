"""Lattice graph families on Z^d: sites, bonds, half-bonds, frozen orderings.

Two families are supported.  The nearest-neighbour graph joins x and y when
||x - y||_1 = 1 and has degree K = 2d.  The spread-out graph joins x and y
when 0 < ||x - y||_inf <= L and has degree K = (2L+1)^d - 1.

Sites are ordered coordinate-lexicographically, and bonds as (lo, hi) pairs
under that site order.  These orderings are load-bearing: the enumeration
order, the cut transform, and cache keys all depend on them, so they are
fixed here once and must never change.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import NamedTuple

from .errors import SpecParseError

Site = tuple[int, ...]


class Family(Enum):
    NEAREST_NEIGHBOUR = "nn"
    SPREAD_OUT = "so"


@dataclass(frozen=True)
class LatticeSpec:
    """Which lattice graph: family, dimension d, range L (spread-out only)."""

    family: Family
    d: int
    L: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.family is Family.SPREAD_OUT:
            if self.L < 1:
                raise ValueError(f"range must be >= 1, got {self.L}")
        else:
            # L is meaningless for nearest-neighbour; normalize it so that
            # equality and cache keys cannot depend on a stray value.
            object.__setattr__(self, "L", 1)

    def spec_string(self) -> str:
        if self.family is Family.NEAREST_NEIGHBOUR:
            return f"nn:d={self.d}"
        return f"so:d={self.d}:L={self.L}"


def parse_spec(text: str) -> LatticeSpec:
    """Parse "nn:d=2" or "so:d=2:L=3" (the exact CLI and cache-key encoding)."""
    parts = text.split(":")
    try:
        if parts and parts[0] == "nn" and len(parts) == 2:
            return LatticeSpec(Family.NEAREST_NEIGHBOUR, _int_field(parts[1], "d"))
        if parts and parts[0] == "so" and len(parts) == 3:
            return LatticeSpec(
                Family.SPREAD_OUT, _int_field(parts[1], "d"), _int_field(parts[2], "L")
            )
    except ValueError as exc:
        raise SpecParseError(f"bad lattice spec {text!r}: {exc}") from None
    raise SpecParseError(f"bad lattice spec {text!r} (want nn:d=D or so:d=D:L=L)")


def _int_field(part, name):
    key, _, val = part.partition("=")
    if key != name or not val.isdigit():
        raise ValueError(f"expected {name}=<positive integer>, got {part!r}")
    return int(val)


class Bond(NamedTuple):
    """A lattice bond in canonical form: lo < hi lexicographically."""

    lo: Site
    hi: Site


class End(Enum):
    """Which endpoint of a bond; MIN is lo, MAX is hi."""

    MIN = "min"
    MAX = "max"


class HalfBond(NamedTuple):
    """Half of a bond's arc, attached at retained_end; the other half is gone.

    The cut transform always removes the half at lo, so cut output retains
    MAX, but the type admits either end.
    """

    bond: Bond
    retained_end: End

    def retained_site(self) -> Site:
        return self.bond.hi if self.retained_end is End.MAX else self.bond.lo

    def removed_site(self) -> Site:
        return self.bond.lo if self.retained_end is End.MAX else self.bond.hi


def origin(d: int) -> Site:
    return (0,) * d


def degree(spec: LatticeSpec) -> int:
    """The common degree K of every site."""
    if spec.family is Family.NEAREST_NEIGHBOUR:
        return 2 * spec.d
    return (2 * spec.L + 1) ** spec.d - 1


@lru_cache(maxsize=None)
def offsets(spec: LatticeSpec) -> tuple[Site, ...]:
    """All K neighbour offsets of a site, in ascending lexicographic order."""
    if spec.family is Family.NEAREST_NEIGHBOUR:
        out = []
        for i in range(spec.d):
            for s in (-1, 1):
                v = [0] * spec.d
                v[i] = s
                out.append(tuple(v))
    else:
        out = [
            v
            for v in itertools.product(range(-spec.L, spec.L + 1), repeat=spec.d)
            if any(v)
        ]
    return tuple(sorted(out))


def positive_offsets(spec: LatticeSpec) -> tuple[Site, ...]:
    """The K/2 offsets that are lexicographically positive; each bond is
    lo + one of these."""
    z = origin(spec.d)
    return tuple(o for o in offsets(spec) if o > z)


def neighbors(spec: LatticeSpec, x: Site) -> list[Site]:
    """The degree(spec) sites adjacent to x, ascending.

    Translating by x preserves lexicographic order, so the translated offset
    list is already sorted.
    """
    if len(x) != spec.d:
        raise ValueError(f"site {x} has dimension {len(x)}, spec wants {spec.d}")
    return [tuple(a + b for a, b in zip(x, o)) for o in offsets(spec)]


def adjacent(spec: LatticeSpec, x: Site, y: Site) -> bool:
    if len(x) != spec.d or len(y) != spec.d:
        raise ValueError(f"sites {x}, {y} do not match dimension {spec.d}")
    diff = [abs(a - b) for a, b in zip(x, y)]
    if spec.family is Family.NEAREST_NEIGHBOUR:
        return sum(diff) == 1
    return 0 < max(diff) <= spec.L


def make_bond(x: Site, y: Site) -> Bond:
    """Canonicalize an unordered site pair into a Bond."""
    if x == y:
        raise ValueError(f"degenerate bond at {x}")
    return Bond(x, y) if x < y else Bond(y, x)


def bond_compare(b1: Bond, b2: Bond) -> int:
    """Total order on canonical bonds: compare (lo, hi) lexicographically.

    Returns -1, 0, or 1.  Since Bond is a tuple of tuples, plain tuple
    comparison implements the same order; this function exists to give the
    order a name and a spot for its tests.
    """
    if b1 == b2:
        return 0
    return -1 if b1 < b2 else 1
