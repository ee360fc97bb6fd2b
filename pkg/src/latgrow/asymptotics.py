"""Growth-constant machinery: reference activity, degree bounds, the
high-dimension series, and finite-n estimators over exact counts.

Everything numeric here evaluates through mpmath at a configurable number of
significant digits (default 50).  The series coefficients themselves are
stored exactly, as rationals and rational multiples of 1/e and 1/e^2, and
only become floats at evaluation time.

The estimators make no convergence claims: they report n-th roots and
consecutive ratios of the exact counts, and the g1 diagnostic is labelled as
a finite-n quantity wherever it is surfaced.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from mpmath import mp

from ._mp import as_mpf
from .enumeration import DEFAULT_NODE_BUDGET, CountTable, count_up_to
from .lattice import LatticeSpec, degree

# Exponent coefficients of the degree-series for the tree growth constant:
# tau ~ sigma e exp(-sum_i TAU_EXPONENT_COEFFS[i-1] sigma^-i), sigma = 2d-1.
# Exact values; no further orders are known, hence the hard cap at 5.
TAU_EXPONENT_COEFFS: tuple[Fraction, ...] = (
    Fraction(1, 2),
    Fraction(8, 3),
    Fraction(85, 12),
    Fraction(931, 20),
    Fraction(2777, 10),
)

# Same shape for the animal growth constant; each coefficient is
# r0 + r1/e + r2/e^2 stored as the triple (r0, r1, r2).
ALPHA_EXPONENT_COEFFS: tuple[tuple[Fraction, Fraction, Fraction], ...] = (
    (Fraction(1, 2), Fraction(0), Fraction(0)),
    (Fraction(8, 3), Fraction(-1, 2), Fraction(0)),
    (Fraction(85, 12), Fraction(-1, 4), Fraction(0)),
    (Fraction(931, 20), Fraction(-139, 48), Fraction(-1, 8)),
    (Fraction(2777, 10), Fraction(177, 32), Fraction(-29, 12)),
)

MAX_SERIES_ORDER = len(TAU_EXPONENT_COEFFS)


def z0(spec: LatticeSpec, *, dps: int = 50):
    """The reference activity 1/(K e); lower bound for both critical points."""
    with mp.workdps(dps):
        return +(1 / (degree(spec) * mp.e))


class PenroseBounds(NamedTuple):
    upper: object      # K^K / (K-1)^(K-1)
    main_term: object  # K e


def penrose_bounds(K: int, *, dps: int = 50) -> PenroseBounds:
    """The exact degree-K upper bound for the animal growth constant and its
    large-K main term.

    upper/main_term = (1 + 1/(K-1))^{K-1} / e, which decreases strictly to 1
    as K grows.
    """
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    with mp.workdps(dps):
        upper = mp.mpf(K**K) / (K - 1) ** (K - 1)
        return PenroseBounds(+upper, +(K * mp.e))


@dataclass(frozen=True)
class SeriesValue:
    """A truncated degree-series evaluation: sigma = 2d - 1, the truncation
    order, and the value at the working precision."""

    sigma: int
    order: int
    value: object

    def __post_init__(self):
        if not 0 <= self.order <= MAX_SERIES_ORDER:
            raise ValueError(f"order must be in 0..{MAX_SERIES_ORDER}")


def tau_series(d: int, order: int, *, dps: int = 50) -> SeriesValue:
    """Truncated series for the tree growth constant at dimension d.

    sigma e times exp of minus the first `order` exponent terms.  Orders
    beyond 5 are rejected: no further coefficients exist.
    """
    coeffs = [(c, Fraction(0), Fraction(0)) for c in TAU_EXPONENT_COEFFS]
    return _eval_series(d, order, coeffs, dps)


def alpha_series(d: int, order: int, *, dps: int = 50) -> SeriesValue:
    """Truncated series for the animal growth constant at dimension d.

    Same shape as tau_series; the exponent coefficients pick up exact 1/e
    and 1/e^2 corrections from order 2 on.
    """
    return _eval_series(d, order, list(ALPHA_EXPONENT_COEFFS), dps)


def _eval_series(d, order, coeffs, dps):
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if not 0 <= order <= MAX_SERIES_ORDER:
        raise ValueError(
            f"order must be in 0..{MAX_SERIES_ORDER}; no coefficients beyond "
            f"order {MAX_SERIES_ORDER} are available"
        )
    sigma = 2 * d - 1
    with mp.workdps(dps):
        s = mp.mpf(sigma)
        expo = mp.mpf(0)
        for i in range(1, order + 1):
            r0, r1, r2 = coeffs[i - 1]
            c = as_mpf(r0) + as_mpf(r1) / mp.e + as_mpf(r2) / mp.e**2
            expo -= c / s**i
        value = +(s * mp.e * mp.exp(expo))
    return SeriesValue(sigma=sigma, order=order, value=value)


@dataclass(frozen=True)
class GrowthEstimate:
    """Finite-n growth estimators: root_estimates[i] is counts[i+1]^{1/(i+1)}
    and ratio_estimates[i] is counts[i+1]/counts[i].  No extrapolation."""

    n_max: int
    root_estimates: tuple
    ratio_estimates: tuple


def growth_estimates(counts: Sequence[int], *, dps: int = 50) -> GrowthEstimate:
    """Roots and ratios of a positive count sequence counts[0..n_max]."""
    if not counts:
        raise ValueError("need at least counts[0]")
    for n, c in enumerate(counts):
        if c <= 0:
            raise ValueError(f"counts[{n}] = {c} is not positive")
    n_max = len(counts) - 1
    with mp.workdps(dps):
        roots = tuple(
            +mp.power(counts[n], mp.mpf(1) / n) for n in range(1, n_max + 1)
        )
        ratios = tuple(
            +(mp.mpf(counts[n + 1]) / counts[n]) for n in range(n_max)
        )
    return GrowthEstimate(n_max=n_max, root_estimates=roots, ratio_estimates=ratios)


def one_point_partial(
    spec: LatticeSpec,
    z,
    N: int,
    kind: str,
    *,
    table: CountTable | None = None,
    dps: int = 50,
    budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
):
    """Partial sum sum_{n<=N} c_n z^n of the one-point series, with c_n the
    exact tree or animal counts."""
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    trees, animals = count_up_to(spec, N, table=table, budget=budget, jobs=jobs)
    if kind == "tree":
        counts = trees
    elif kind == "animal":
        counts = animals
    else:
        raise ValueError(f"kind must be 'tree' or 'animal', got {kind!r}")
    with mp.workdps(dps):
        zz = as_mpf(z)
        if zz < 0:
            raise ValueError(f"z must be >= 0, got {z}")
        total = mp.mpf(0)
        zpow = mp.mpf(1)
        for n in range(N + 1):
            total += counts[n] * zpow
            zpow *= zz
        return +total


def g1_diagnostic(
    spec: LatticeSpec,
    N: int,
    kind: str = "tree",
    *,
    table: CountTable | None = None,
    dps: int = 50,
    budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
):
    """K zhat ghat with zhat = counts[N]/counts[N+1] and ghat the partial
    one-point sum at zhat.

    A finite-n diagnostic only: zhat is a ratio proxy for the critical
    activity and ghat a truncated series, so no convergence toward any limit
    is claimed and callers must label the output accordingly.
    """
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    if kind not in ("tree", "animal"):
        raise ValueError(f"kind must be 'tree' or 'animal', got {kind!r}")
    trees, animals = count_up_to(spec, N + 1, table=table, budget=budget, jobs=jobs)
    counts = trees if kind == "tree" else animals
    with mp.workdps(dps):
        zhat = mp.mpf(counts[N]) / counts[N + 1]
        ghat = mp.mpf(0)
        zpow = mp.mpf(1)
        for n in range(N + 1):
            ghat += counts[n] * zpow
            zpow *= zhat
        return +(degree(spec) * zhat * ghat)
