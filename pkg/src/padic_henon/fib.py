"""Fibonacci utilities: exact big-integer values, Cassini-type identities,
golden-ratio comparisons, and the alternating growth schedule used by the
slow-regime escape bounds.

Indexing starts F(-2) = 1, F(-1) = 0, F(0) = F(1) = 1, F(n) = F(n-1) + F(n-2).
"""

from __future__ import annotations

__all__ = [
    "fib",
    "cassini",
    "cassini2",
    "golden_cmp",
    "golden_bracket_holds",
    "growth_schedule",
]

_fib_memo = [1, 0, 1, 1]  # F(-2), F(-1), F(0), F(1)


def fib(n: int) -> int:
    """F(n) for n >= -2, memoized exact integers."""
    if n < -2:
        raise ValueError(f"Fibonacci index must be >= -2, got {n}")
    k = n + 2
    while len(_fib_memo) <= k:
        _fib_memo.append(_fib_memo[-1] + _fib_memo[-2])
    return _fib_memo[k]


def cassini(n: int) -> int:
    """F(n)F(n-2) - F(n-1)^2 for n >= 1; equals (-1)^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return fib(n) * fib(n - 2) - fib(n - 1) ** 2


def cassini2(n: int) -> int:
    """F(n+1)F(n-2) - F(n)F(n-1) for n >= 1; equals (-1)^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return fib(n + 1) * fib(n - 2) - fib(n) * fib(n - 1)


def golden_cmp(b: int, a: int) -> int:
    """Sign of beta*b - a where beta = (1+sqrt5)/2, computed exactly.

    beta*b - a has the sign of b*sqrt5 - (2a - b).  Since sqrt5 is irrational
    the result is 0 only for (a, b) = (0, 0); integer norm profiles never sit
    on the golden line.
    """
    r = 2 * a - b
    if b == 0:
        return (r < 0) - (r > 0)
    lhs2, rhs2 = 5 * b * b, r * r
    if b > 0:
        if r <= 0:
            return 1
        return (lhs2 > rhs2) - (lhs2 < rhs2)
    if r >= 0:
        return -1
    return (rhs2 > lhs2) - (rhs2 < lhs2)


def golden_bracket_holds(n: int) -> bool:
    """Check F(2n+1)/F(2n) < F(2n+3)/F(2n+2) < beta < F(2n+4)/F(2n+3) < F(2n+2)/F(2n+1).

    All four inequalities are evaluated by exact cross-multiplication; the two
    involving beta reduce to golden_cmp on (numerator, denominator) pairs.
    """
    lo1 = fib(2 * n + 1) * fib(2 * n + 2) < fib(2 * n + 3) * fib(2 * n)
    # F(2n+3)/F(2n+2) < beta  <=>  beta*F(2n+2) - F(2n+3) > 0
    lo2 = golden_cmp(fib(2 * n + 2), fib(2 * n + 3)) > 0
    hi1 = golden_cmp(fib(2 * n + 3), fib(2 * n + 4)) < 0
    hi2 = fib(2 * n + 4) * fib(2 * n + 1) < fib(2 * n + 2) * fib(2 * n + 3)
    return lo1 and lo2 and hi1 and hi2


def growth_schedule(n_max: int) -> list:
    """K(0..n_max) with K0 = K1 = 1, K(2i) = K(2i-1) + 1, K(2i+1) = K(2i) + K(2i-1).

    These exponents bound coordinate growth along the 2-cycle of bands that
    escaping orbits enter when |c| < 1; K(2i) = 2^i and K(2i+1) = 2^(i+1) - 1.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    ks = [1, 1]
    for m in range(2, n_max + 1):
        if m % 2 == 0:
            ks.append(ks[m - 1] + 1)
        else:
            ks.append(ks[m - 1] + ks[m - 2])
    return ks[: n_max + 1]
