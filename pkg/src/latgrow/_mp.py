"""Small shared helpers for mpmath-based evaluation."""
from fractions import Fraction

from mpmath import mp


def as_mpf(x):
    """Convert int, float, str, Fraction, or mpf to mpf at current precision."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)
