"""Effective degree-bound machinery.

Given the degree d and the two lower Euler-characteristic coefficients
(c, c') of a polarization, a dimension count produces, for any rational
threshold a with a^2 < d, a multiplier M and a degree bound B = M*d such
that every curve whose degree/multiplicity ratio is at most a has degree
at most B.  That bound turns the possible (multiplicity, degree) pairs,
hence the possible ratios up to any alpha < sqrt(d), into a finite
explicitly enumerable set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .values import Rational, RationalLike

DEFAULT_SEARCH_CAP = 10**6


class BoundError(ValueError):
    pass


@dataclass(frozen=True)
class RRData:
    """Degree and Euler-characteristic data of a polarized surface:
    chi(L^n) = n^2*d/2 + n*c/2 + c'.

    vanishing_multiplier is the integer l for which the model certifies
    h^0((L^l)^n) = chi for all n >= 1; bounds computed from this data
    apply to L^l and are reported with l attached.
    """

    d: int
    c: int
    c_prime: int
    vanishing_multiplier: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise BoundError(f"degree must be positive, got {self.d}")
        if self.vanishing_multiplier < 1:
            raise BoundError("vanishing_multiplier must be a positive integer")


@dataclass(frozen=True)
class DegreeBound:
    """Certified degree bound B = M*d for curves of ratio <= a.

    M is the least admissible multiplier (n with n*a integral) whose
    dimension count l(n) is positive; all smaller admissible n have
    l(n) <= 0 by construction.
    """

    a: Rational
    M: int
    B: int
    vanishing_multiplier: int = 1


def l_poly(rr: RRData, a: RationalLike, n: int) -> Rational:
    """The excess-dimension count l(n) = (d - a^2)n^2/2 + (c - 3a)n/2 + (c' - 1).

    Positive l(n) guarantees a member of |L^n| with multiplicity > n*a at
    any prescribed point.  n*a must be an integer for the count to make
    sense.
    """
    a = Fraction(a)
    if n < 1:
        raise BoundError(f"n must be positive, got {n}")
    if (n * a).denominator != 1:
        raise BoundError(f"n*a must be integral, got {n}*{a}")
    return (
        Fraction(rr.d - a * a) * n * n / 2
        + Fraction(rr.c - 3 * a) * n / 2
        + (rr.c_prime - 1)
    )


def minimal_M(rr: RRData, a: RationalLike, search_cap: int = DEFAULT_SEARCH_CAP) -> DegreeBound:
    """Smallest admissible multiplier M with l(M) > 0, and B = M*d.

    Admissible n are exactly the multiples of the reduced denominator of
    a.  Termination is guaranteed by the positive leading coefficient
    (d - a^2)/2; the cap only guards against misuse and exceeding it is a
    hard error, never an approximation.
    """
    a = Fraction(a)
    if a <= 0:
        raise BoundError(f"threshold must be positive, got {a}")
    if a * a >= rr.d:
        raise BoundError(
            f"threshold^2 must be strictly below the degree: {a}^2 >= {rr.d}"
        )
    q = a.denominator
    n = q
    steps = 0
    while l_poly(rr, a, n) <= 0:
        steps += 1
        if steps >= search_cap:
            raise BoundError(f"multiplier search exceeded {search_cap} steps")
        n += q
    return DegreeBound(a=a, M=n, B=n * rr.d, vanishing_multiplier=rr.vanishing_multiplier)


def multiplicity_target(M: int, a: RationalLike) -> int:
    """The forced multiplicity M*a + 1 of the auxiliary divisor in the
    bound argument; exposed for report transparency."""
    a = Fraction(a)
    Ma = M * a
    if Ma.denominator != 1:
        raise BoundError(f"M*a must be integral, got {M}*{a}")
    return int(Ma) + 1


def candidate_pairs(
    B: int, alpha: RationalLike, require_m_le_t: bool = True
) -> set:
    """The finite set of reduced (degree, multiplicity) pairs with
    1 <= m <= t <= B and t/m <= alpha.  These are the only pairs a curve
    realizing a ratio <= alpha can produce once its degree is bounded by
    B, which is what makes the attainable value set finite."""
    if B < 1:
        raise BoundError(f"B must be positive, got {B}")
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise BoundError(f"alpha must be positive, got {alpha}")
    p, q = alpha.numerator, alpha.denominator
    gcd = math.gcd
    seen = set()
    add = seen.add
    if require_m_le_t:
        # reducing (t, m) with m <= t <= B lands on a coprime pair that
        # is itself admissible, so the coprime pairs are exactly the set
        for t in range(1, B + 1):
            # t/m <= alpha  <=>  m >= t*q/p
            m_lo = -((-t * q) // p)
            for m in range(max(1, m_lo), t + 1):
                if gcd(t, m) == 1:
                    add((t, m))
        return seen
    for t in range(1, B + 1):
        m_lo = -((-t * q) // p)
        for m in range(max(1, m_lo), B + 1):
            g = gcd(t, m)
            add((t // g, m // g))
    return seen


def candidate_ratios(
    B: int, alpha: RationalLike, require_m_le_t: bool = True
) -> List[Rational]:
    """All ratios t/m <= alpha with 1 <= m <= t <= B, deduplicated and
    ascending.  This is a finite superset of every attainable local
    Seshadri value <= alpha for families whose curves obey the degree
    bound B (under the very-ampleness normalization m <= t).

    With require_m_le_t=False the multiplicity ranges over 1..B
    independently; that exploratory mode is not a certified superset.
    """
    return sorted(
        Fraction(t, m) for t, m in candidate_pairs(B, alpha, require_m_le_t)
    )


def mediant_bounds(
    parts: Sequence[Tuple[RationalLike, RationalLike]]
) -> Tuple[Rational, Rational, Rational]:
    """min, mediant and max of a list of positive ratios a_i/b_i:
    min_i a_i/b_i <= (sum a_i)/(sum b_i) <= max_i a_i/b_i.

    This is the inequality that passes from a reducible limit curve to
    one of its irreducible components without increasing the ratio.
    """
    if not parts:
        raise BoundError("mediant_bounds requires a nonempty list")
    ratios = []
    num = Fraction(0)
    den = Fraction(0)
    for a, b in parts:
        a, b = Fraction(a), Fraction(b)
        if a <= 0 or b <= 0:
            raise BoundError(f"all entries must be positive, got ({a}, {b})")
        ratios.append(a / b)
        num += a
        den += b
    lo, mid, hi = min(ratios), num / den, max(ratios)
    assert lo <= mid <= hi
    return lo, mid, hi
