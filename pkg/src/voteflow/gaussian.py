"""Standard normal CDF helpers with stable tails.

Everything is routed through the complementary error function, which keeps
absolute error at machine level over the whole real line and, crucially,
lets differences of CDFs deep in a tail be formed without catastrophic
cancellation: for an interval entirely in the right tail the difference is
taken between two complementary CDFs (both small), never between two values
that are each within rounding of 1.
"""

import math

_SQRT2 = math.sqrt(2.0)


def normal_cdf(z: float) -> float:
    """P(Z <= z) for standard normal Z; accepts +-inf."""
    return 0.5 * math.erfc(-z / _SQRT2)


def normal_sf(z: float) -> float:
    """P(Z > z), the complementary CDF; accepts +-inf."""
    return 0.5 * math.erfc(z / _SQRT2)


def normal_cdf_diff(lo: float, hi: float) -> float:
    """P(lo < Z <= hi) = Phi(hi) - Phi(lo), stable in both tails.

    Requires lo <= hi; endpoints may be infinite. An interval in the right
    tail is formed from two complementary CDFs (both small) so the result
    stays positive and monotone even when both CDF values round to 1. The
    left tail is already safe: normal_cdf evaluates erfc at a positive
    argument there, so the plain difference carries full precision.
    """
    if lo >= 0.0:
        return normal_sf(lo) - normal_sf(hi)
    return normal_cdf(hi) - normal_cdf(lo)
