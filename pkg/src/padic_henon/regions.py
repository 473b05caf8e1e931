"""Named valuation regions of Q_p^2 and their one-step backward transitions.

A point (x, y) is classified purely through its *norm profile* (a, b) =
(log_p|x|, log_p|y|) relative to d = log_p|c|.  Three regimes exist: SMALL
(|c| < 1, d < 0), UNIT (|c| = 1, d = 0) and LARGE (|c| > 1, d > 0), each with
its own total partition of the marker-free profiles.

Every region is described twice, deliberately:

* ``REGION_TABLE``/``region_branches`` hold the verbatim defining
  inequalities, one declarative constraint tuple per <=/< choice, in the form
  ca*a + cb*b OP cd*d + c1 (plus golden-ratio comparisons, which are exact
  integer sign computations).
* ``classify`` is an independent decision tree with a bounded ascending index
  search for the Fibonacci-indexed families.

The grid checker replays the declarative table over whole windows and
certifies that the two agree and that the partition is exact.  Boundaries
along the irrational line |y| = |x|^(1/beta) are never attained by integer
profiles, which is what makes the index search terminate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .fib import fib, golden_cmp
from .padics import Point, sample_with_norm

__all__ = [
    "Regime",
    "RegionLabel",
    "EmptyRegionError",
    "regime_of_d",
    "classify",
    "classify_point",
    "region_branches",
    "profile_in_region",
    "iter_region_labels",
    "region_profiles",
    "sample_in_region",
    "t_profile",
    "AbstractPreimage",
    "abstract_inverse",
    "expected_preimage_regions",
    "export_transition_table",
]


class Regime(str, Enum):
    SMALL = "small"  # |c| < 1
    UNIT = "unit"  # |c| = 1
    LARGE = "large"  # |c| > 1


def regime_of_d(d: int) -> Regime:
    if d < 0:
        return Regime.SMALL
    if d == 0:
        return Regime.UNIT
    return Regime.LARGE


@dataclass(frozen=True)
class RegionLabel:
    """Identifier (regime, name, index); index is present exactly for indexed families."""

    regime: Regime
    name: str
    index: int | None = None

    def __str__(self):
        return self.name if self.index is None else f"{self.name}{self.index}"

    def to_json(self) -> dict:
        return {"regime": self.regime.value, "name": self.name, "index": self.index}

    @classmethod
    def from_json(cls, obj: dict) -> "RegionLabel":
        return cls(Regime(obj["regime"]), obj["name"], obj.get("index"))


class EmptyRegionError(ValueError):
    """The requested region contains no admissible profile for these parameters."""


# ---------------------------------------------------------------------------
# Declarative region table.
#
# A linear constraint is (ca, cb, cd, c1, op) meaning  ca*a + cb*b  OP  cd*d + c1
# with op one of "<", "<=", "==", ">=", ">".  GOLDEN_BELOW / GOLDEN_ABOVE stand
# for beta*b < a and beta*b > a.  A region is a union (list) of conjunction
# branches (lists of constraints).
# ---------------------------------------------------------------------------

GOLDEN_BELOW = ("golden", -1)
GOLDEN_ABOVE = ("golden", 1)

_SMALL_TABLE = {
    ("Z", None): [[(1, 0, 0, 0, "=="), (0, 1, 0, 0, "==")]],
    ("R", None): [[(1, 0, 1, 0, "=="), (0, 1, 1, 0, "==")]],
    ("A", 1): [[(1, 0, 1, 0, "<="), (0, 1, 0, 0, ">=")]],
    ("A", 2): [[(1, 0, 0, 0, ">="), (0, 1, 1, 0, "<=")]],
    ("A", 3): [[(1, 0, 0, 0, ">"), (0, 1, 0, 0, "==")]],
    ("A", 4): [[(1, 0, 0, 0, "=="), (0, 1, 0, 0, ">")]],
    ("A", 5): [[(1, 0, 0, 0, ">="), (0, 1, 1, 0, ">"), (0, 1, 0, 0, "<")]],
    ("A", 6): [[(1, 0, 1, 0, ">"), (1, 0, 0, 0, "<"), (0, 1, 0, 0, ">=")]],
    ("B", 1): [[(1, 0, 0, 0, ">"), (0, 1, 0, 0, ">"), GOLDEN_BELOW]],
    ("B", 2): [[(1, 0, 0, 0, ">"), (0, 1, 0, 0, ">"), GOLDEN_ABOVE]],
    ("P", 1): [[(1, 0, 1, 0, "<"), (0, 1, 1, 0, "<=")]],
    ("P", 2): [[(1, 0, 1, 0, ">"), (1, 0, 0, 0, "<"), (0, 1, 1, 0, "<=")]],
    ("P", 3): [[(1, 0, 1, 0, "<"), (0, 1, 1, 0, ">"), (0, 1, 0, 0, "<")]],
    ("P", 4): [[(1, 0, 1, 0, ">"), (1, 0, 0, 0, "<"), (0, 1, 1, 0, ">"), GOLDEN_BELOW]],
    ("P", 5): [[(1, 0, 1, 0, ">"), (1, 0, 0, 0, "<"), GOLDEN_ABOVE, (0, 1, 0, 0, "<")]],
    # Read as |x| = |c| and (|y| < |c| or |c| < |y| < 1): the grouping that
    # makes the partition exact.
    ("P", 6): [
        [(1, 0, 1, 0, "=="), (0, 1, 1, 0, "<")],
        [(1, 0, 1, 0, "=="), (0, 1, 1, 0, ">"), (0, 1, 0, 0, "<")],
    ],
}


def _unit_m_branches(i: int):
    if i % 2:  # i = 2n+1, n >= 0, with F(-2) = 1 and F(-1) = 0
        n = (i - 1) // 2
        return [[
            (fib(2 * n - 2), -fib(2 * n - 1), 0, 0, ">"),
            (-fib(2 * n - 1), fib(2 * n), 0, 0, ">"),
            (fib(2 * n), -fib(2 * n + 1), 0, 0, "<="),
        ]]
    n = (i - 2) // 2
    return [[
        (-fib(2 * n - 1), fib(2 * n), 0, 0, ">"),
        (fib(2 * n), -fib(2 * n + 1), 0, 0, ">"),
        (-fib(2 * n + 1), fib(2 * n + 2), 0, 0, "<="),
    ]]


_UNIT_TABLE = {
    ("C", 0): [
        [(1, 0, 0, 0, "=="), (0, 1, 0, 0, "<=")],
        [(1, 0, 0, 0, "<="), (0, 1, 0, 0, "==")],
    ],
    ("F", None): [[(1, 0, 0, 0, "<"), (0, 1, 0, 0, "<")]],
    ("G", None): [[(1, 0, 0, 0, "<="), (0, 1, 0, 0, ">")]],
    ("H", None): [[(1, 0, 0, 0, ">"), (0, 1, 0, 0, "<=")]],
}


def _large_indexed_branches(name: str, i: int):
    if name == "C" and i == 0:
        return [
            [(1, 0, 1, 0, "<"), (0, 1, 0, 0, "==")],
            [(1, 0, 1, 0, "<"), (0, 1, 1, 0, "==")],
            [(1, 0, 1, 0, "=="), (0, 1, 1, 0, "<=")],
        ]
    odd = i % 2 == 1
    if name == "C":
        n = (i - 1) // 2 if odd else (i - 2) // 2
        if odd:
            return [[
                (1, 0, fib(2 * n), 0, ">"),
                (1, 0, fib(2 * n + 2), 0, "<="),
                (fib(2 * n), -fib(2 * n + 1), 1, 0, "=="),
            ]]
        return [[
            (1, 0, fib(2 * n + 1), 0, ">"),
            (1, 0, fib(2 * n + 3), 0, "<="),
            (-fib(2 * n + 1), fib(2 * n + 2), 1, 0, "=="),
        ]]
    if name == "D":
        if i < 2:
            raise KeyError("D family starts at index 2")
        n = (i - 1) // 2 if odd else (i - 2) // 2
        if odd:
            return [[
                (1, 0, fib(2 * n), 0, ">"),
                (1, 0, fib(2 * n + 1), 0, "<"),
                (fib(2 * n - 2), -fib(2 * n - 1), 1, 0, "=="),
            ]]
        return [[
            (1, 0, fib(2 * n + 1), 0, ">"),
            (1, 0, fib(2 * n + 2), 0, "<"),
            (-fib(2 * n - 1), fib(2 * n), 1, 0, "=="),
        ]]
    if name == "B":
        if i < 1:
            raise KeyError("B family starts at index 1")
        if not odd:  # B_{2n}, n >= 1
            n = i // 2
            return [[
                (1, 0, fib(2 * n), 0, ">"),
                (1, 0, fib(2 * n + 1), 0, "<="),
                (fib(2 * n), -fib(2 * n + 1), 1, 0, "<"),
                (-fib(2 * n - 2), fib(2 * n - 1), -1, 0, "<"),
            ]]
        n = (i - 1) // 2  # B_{2n+1}, n >= 0 (n = 0 is the first rung)
        return [[
            (1, 0, fib(2 * n + 1), 0, ">"),
            (1, 0, fib(2 * n + 2), 0, "<"),
            (fib(2 * n), -fib(2 * n + 1), 1, 0, "<"),
            (-fib(2 * n - 1), fib(2 * n), 1, 0, "<"),
        ]]
    if name == "A":
        if i < 1:
            raise KeyError("A family starts at index 1")
        if odd:  # A_{2n+1}, n >= 0
            n = (i - 1) // 2
            return [[
                (1, 0, fib(2 * n + 1), 0, ">"),
                (1, 0, fib(2 * n + 2), 0, "<="),
                (-fib(2 * n - 1), fib(2 * n), 1, 0, ">"),
                (-fib(2 * n + 1), fib(2 * n + 2), 1, 0, "<"),
            ]]
        n = (i - 2) // 2  # A_{2n+2}, n >= 0
        return [[
            (1, 0, fib(2 * n + 2), 0, ">"),
            (1, 0, fib(2 * n + 3), 0, "<"),
            (fib(2 * n), -fib(2 * n + 1), 1, 0, "<"),
            (-fib(2 * n + 1), fib(2 * n + 2), 1, 0, "<"),
        ]]
    if name == "M":
        if i < 1:
            raise KeyError("M family starts at index 1")
        if odd:  # M_{2n+1}, n >= 0
            n = (i - 1) // 2
            return [[
                (1, 0, fib(2 * n), 0, ">"),
                (0, 1, fib(2 * n - 1), 0, ">"),
                (0, 1, fib(2 * n + 1), 0, "<="),
                (fib(2 * n), -fib(2 * n + 1), 1, 0, ">"),
            ]]
        n = (i - 2) // 2  # M_{2n+2}, n >= 0
        return [[
            (1, 0, fib(2 * n + 1), 0, ">"),
            (1, 0, fib(2 * n + 3), 0, "<="),
            (-fib(2 * n + 1), fib(2 * n + 2), 1, 0, ">"),
        ]]
    if name == "T":
        # Overlay family for d >= 2: the norm sphere pair scaled by (d-1).
        if i < 0:
            raise KeyError("T family starts at index 0")
        return [[
            (1, 0, fib(i + 1), -fib(i + 1), "=="),
            (0, 1, fib(i), -fib(i), "=="),
        ]]
    raise KeyError(f"unknown indexed family {name!r}")


_LARGE_TABLE = {
    ("F", None): [[(1, 0, 1, 0, "<"), (0, 1, 0, 0, "<")]],
    ("G", None): [[(1, 0, 1, 0, "<="), (0, 1, 1, 0, ">")]],
    ("H", None): [[(1, 0, 1, 0, ">"), (0, 1, 0, 0, "<=")]],
    ("J", 0): [[(1, 0, 1, 0, "<"), (0, 1, 0, 0, ">"), (0, 1, 1, 0, "<")]],
}


def region_branches(label: RegionLabel):
    """The region's defining inequalities as a union of conjunction branches."""
    key = (label.name, label.index)
    if label.regime is Regime.SMALL:
        try:
            return _SMALL_TABLE[key]
        except KeyError:
            raise KeyError(f"unknown SMALL region {label}") from None
    if label.regime is Regime.UNIT:
        if label.name == "M":
            if label.index is None or label.index < 1:
                raise KeyError(f"unknown UNIT region {label}")
            return _unit_m_branches(label.index)
        try:
            return _UNIT_TABLE[key]
        except KeyError:
            raise KeyError(f"unknown UNIT region {label}") from None
    if key in _LARGE_TABLE:
        return _LARGE_TABLE[key]
    if label.name in ("C", "D", "B", "A", "M", "T") and label.index is not None:
        return _large_indexed_branches(label.name, label.index)
    raise KeyError(f"unknown LARGE region {label}")


def _eval_constraint(con, a: int, b: int, d: int) -> bool:
    if con[0] == "golden":
        return golden_cmp(b, a) == con[1]
    ca, cb, cd, c1, op = con
    lhs = ca * a + cb * b
    rhs = cd * d + c1
    if op == "<":
        return lhs < rhs
    if op == "<=":
        return lhs <= rhs
    if op == "==":
        return lhs == rhs
    if op == ">=":
        return lhs >= rhs
    return lhs > rhs


def profile_in_region(label: RegionLabel, a: int, b: int, d: int) -> bool:
    """Evaluate the declarative inequalities of `label` on the integer profile (a, b)."""
    return any(
        all(_eval_constraint(con, a, b, d) for con in branch)
        for branch in region_branches(label)
    )


# ---------------------------------------------------------------------------
# The classifier: an independent decision tree over (a, b, d).
# ---------------------------------------------------------------------------

_NEG_INF = float("-inf")


def classify(profile, d: int) -> RegionLabel:
    """Total classification of a norm profile into exactly one region.

    `profile` is (a, b) with None marking a zero coordinate.  b = None (y = 0)
    yields the distinguished OutsideQ label; a = None (x = 0) is treated as
    a = -infinity.  d = log_p|c| must be an integer, so c = 0 has no regime
    partition (construct MapParams with nonzero c for classification).
    """
    a, b = profile
    regime = regime_of_d(d)
    if b is None:
        return RegionLabel(regime, "OutsideQ", None)
    if a is None:
        a = _NEG_INF
    if regime is Regime.SMALL:
        return _classify_small(a, b, d)
    if regime is Regime.UNIT:
        return _classify_unit(a, b)
    return _classify_large(a, b, d)


def classify_point(point: Point, d: int) -> RegionLabel:
    return classify(point.profile(), d)


def _classify_small(a, b: int, d: int) -> RegionLabel:
    S = Regime.SMALL
    if b > 0:
        if a <= d:
            return RegionLabel(S, "A", 1)
        if a < 0:
            return RegionLabel(S, "A", 6)
        if a == 0:
            return RegionLabel(S, "A", 4)
        return RegionLabel(S, "B", 1 if golden_cmp(b, int(a)) < 0 else 2)
    if b == 0:
        if a <= d:
            return RegionLabel(S, "A", 1)
        if a < 0:
            return RegionLabel(S, "A", 6)
        if a == 0:
            return RegionLabel(S, "Z", None)
        return RegionLabel(S, "A", 3)
    if b <= d:
        if a >= 0:
            return RegionLabel(S, "A", 2)
        if a == d:
            return RegionLabel(S, "R", None) if b == d else RegionLabel(S, "P", 6)
        if a < d:
            return RegionLabel(S, "P", 1)
        return RegionLabel(S, "P", 2)
    # d < b < 0
    if a >= 0:
        return RegionLabel(S, "A", 5)
    if a == d:
        return RegionLabel(S, "P", 6)
    if a < d:
        return RegionLabel(S, "P", 3)
    return RegionLabel(S, "P", 4 if golden_cmp(b, int(a)) < 0 else 5)


def _classify_unit(a, b: int) -> RegionLabel:
    U = Regime.UNIT
    if b > 0:
        if a <= 0:
            return RegionLabel(U, "G", None)
    elif b == 0:
        return RegionLabel(U, "H", None) if a > 0 else RegionLabel(U, "C", 0)
    else:
        if a > 0:
            return RegionLabel(U, "H", None)
        return RegionLabel(U, "C", 0) if a == 0 else RegionLabel(U, "F", None)
    a = int(a)
    # a, b > 0: Fibonacci bands around the golden line, searched outward.
    if b >= a:
        return RegionLabel(U, "M", 1)
    if 2 * b <= a:
        return RegionLabel(U, "M", 2)
    n = 1
    while fib(2 * n - 2) <= 3 * (a + b):
        if a * fib(2 * n) <= b * fib(2 * n + 1) and b * fib(2 * n - 1) < a * fib(2 * n - 2):
            return RegionLabel(U, "M", 2 * n + 1)
        if a * fib(2 * n - 1) < b * fib(2 * n) and b * fib(2 * n + 2) <= a * fib(2 * n + 1):
            return RegionLabel(U, "M", 2 * n + 2)
        n += 1
    raise RuntimeError(f"band search failed for profile ({a}, {b})")  # pragma: no cover


def _classify_large(a, b: int, d: int) -> RegionLabel:
    L = Regime.LARGE
    if a < d:
        if b < 0:
            return RegionLabel(L, "F", None)
        if b == 0 or b == d:
            return RegionLabel(L, "C", 0)
        if b < d:
            return RegionLabel(L, "J", 0)
        return RegionLabel(L, "G", None)
    if a == d:
        return RegionLabel(L, "G", None) if b > d else RegionLabel(L, "C", 0)
    if b <= 0:
        return RegionLabel(L, "H", None)
    a = int(a)
    n = 0
    while True:
        f2n_2, f2n_1 = fib(2 * n - 2), fib(2 * n - 1)
        f2n, f2n1 = fib(2 * n), fib(2 * n + 1)
        f2n2, f2n3 = fib(2 * n + 2), fib(2 * n + 3)
        if a > d * f2n and d * f2n_1 < b <= d * f2n1 and a * f2n - b * f2n1 > d:
            return RegionLabel(L, "M", 2 * n + 1)
        if d * f2n1 < a <= d * f2n3 and b * f2n2 - a * f2n1 > d:
            return RegionLabel(L, "M", 2 * n + 2)
        if d * f2n < a <= d * f2n2 and a * f2n - b * f2n1 == d:
            return RegionLabel(L, "C", 2 * n + 1)
        if d * f2n1 < a <= d * f2n3 and b * f2n2 - a * f2n1 == d:
            return RegionLabel(L, "C", 2 * n + 2)
        if n >= 1 and d * f2n < a < d * f2n1 and a * f2n_2 - b * f2n_1 == d:
            return RegionLabel(L, "D", 2 * n + 1)
        if d * f2n1 < a < d * f2n2 and b * f2n - a * f2n_1 == d:
            return RegionLabel(L, "D", 2 * n + 2)
        if n >= 1 and d * f2n < a <= d * f2n1 and a * f2n - b * f2n1 < d and b * f2n_1 - a * f2n_2 < -d:
            return RegionLabel(L, "B", 2 * n)
        if d * f2n1 < a < d * f2n2 and a * f2n - b * f2n1 < d and b * f2n - a * f2n_1 < d:
            return RegionLabel(L, "B", 2 * n + 1)
        if d * f2n1 < a <= d * f2n2 and b * f2n - a * f2n_1 > d and b * f2n2 - a * f2n1 < d:
            return RegionLabel(L, "A", 2 * n + 1)
        if d * f2n2 < a < d * f2n3 and a * f2n - b * f2n1 < d and b * f2n2 - a * f2n1 < d:
            return RegionLabel(L, "A", 2 * n + 2)
        n += 1
        if d * fib(2 * n) > a and d * fib(2 * n - 1) > b:
            raise RuntimeError(
                f"partition hole at profile ({a}, {b}), d={d}"
            )  # pragma: no cover


# ---------------------------------------------------------------------------
# Region enumeration and sampling.
# ---------------------------------------------------------------------------


def iter_region_labels(regime: Regime, d: int, window: int, include_t: bool = False):
    """All region labels that can meet the window |a|, |b| <= window.

    Indexed families are enumerated until Fibonacci growth pushes them past
    the window; one extra (possibly empty) index is included for safety.
    """
    W = window
    if regime is Regime.SMALL:
        yield RegionLabel(regime, "Z", None)
        yield RegionLabel(regime, "R", None)
        for i in range(1, 7):
            yield RegionLabel(regime, "A", i)
        for i in (1, 2):
            yield RegionLabel(regime, "B", i)
        for i in range(1, 7):
            yield RegionLabel(regime, "P", i)
        return
    if regime is Regime.UNIT:
        yield RegionLabel(regime, "C", 0)
        for name in ("F", "G", "H"):
            yield RegionLabel(regime, name, None)
        i = 1
        while fib(i - 1) <= W:
            yield RegionLabel(regime, "M", i)
            i += 1
        return
    for name in ("F", "G", "H"):
        yield RegionLabel(regime, name, None)
    yield RegionLabel(regime, "J", 0)
    yield RegionLabel(regime, "C", 0)
    for name, start in (("C", 1), ("D", 2), ("B", 1), ("A", 1), ("M", 1)):
        i = start
        while d * fib(i - 2) <= W:
            yield RegionLabel(regime, name, i)
            i += 1
    if include_t and d >= 2:
        n = 0
        while (d - 1) * fib(n + 1) <= W:
            yield RegionLabel(regime, "T", n)
            n += 1


def t_profile(n: int, d: int):
    """The unique norm profile of the n-th overlay sphere pair, defined for d >= 2."""
    if d < 2:
        raise EmptyRegionError(f"overlay family requires d >= 2, got d={d}")
    if n < 0:
        raise ValueError("n must be >= 0")
    return ((d - 1) * fib(n + 1), (d - 1) * fib(n))


@lru_cache(maxsize=4096)
def region_profiles(label: RegionLabel, d: int, window: int):
    """All integer profiles of the region with |a|, |b| <= window (memoized)."""
    if label.name == "T":
        prof = t_profile(label.index, d)
        return (prof,) if max(abs(prof[0]), abs(prof[1])) <= window else ()
    out = []
    for a in range(-window, window + 1):
        for b in range(-window, window + 1):
            if profile_in_region(label, a, b, d):
                out.append((a, b))
    return tuple(out)


def sample_in_region(
    label: RegionLabel,
    d: int,
    p: int,
    window: int,
    digit_count: int,
    rng: random.Random,
) -> Point:
    """Draw an exact point whose profile is uniform over the region's window slice.

    The result is re-classified as a self-check; a mismatch would mean the
    sampler and classifier disagree and raises immediately.
    """
    if regime_of_d(d) is not label.regime:
        raise ValueError(f"d={d} is not in regime {label.regime.value}")
    profiles = region_profiles(label, d, window)
    if not profiles:
        raise EmptyRegionError(f"region {label} has no profile with window {window} (d={d})")
    a, b = profiles[rng.randrange(len(profiles))]
    pt = Point(
        sample_with_norm(a, digit_count, rng, p),
        sample_with_norm(b, digit_count, rng, p),
    )
    if label.name != "T":
        got = classify(pt.profile(), d)
        if got != label:
            raise AssertionError(f"sampler/classifier mismatch: wanted {label}, got {got}")
    return pt


# ---------------------------------------------------------------------------
# Profile-level inverse and the transition table.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbstractPreimage:
    """Norm-profile image of one backward step.

    When a != d the ultrametric gives the single profile (b, max(a, d) - b).
    When a = d the difference x - c can cancel to any depth: the outcomes form
    the symbolic set {(b, e - b) : e <= d} together with the x = c branch, on
    which the next inverse is undefined (the point was outside the domain).
    """

    b: int
    d: int
    exact: tuple | None  # None iff cancellation

    @property
    def is_cancellation(self) -> bool:
        return self.exact is None

    def outcomes(self, depth: int = 0):
        """Concrete outcome profiles; `depth` bounds the cancellation enumeration e >= d - depth."""
        if self.exact is not None:
            return [self.exact]
        return [(self.b, e - self.b) for e in range(self.d, self.d - depth - 1, -1)]


def abstract_inverse(profile, d: int) -> AbstractPreimage:
    """One backward step on norm profiles; requires b != None (y != 0)."""
    a, b = profile
    if b is None:
        raise ValueError("inverse undefined on profiles with y = 0")
    if a is not None and a == d:
        return AbstractPreimage(b=b, d=d, exact=None)
    e = d if (a is None or a < d) else a
    return AbstractPreimage(b=b, d=d, exact=(b, e - b))


def _j_component_labels(j: int) -> frozenset:
    """Labels of the j-th bounded Fibonacci shell: J0, then B/A decompositions."""
    L = Regime.LARGE
    if j == 0:
        return frozenset({RegionLabel(L, "J", 0)})
    if j == 1:
        return frozenset({RegionLabel(L, "B", 1)})
    if j % 2:  # J_{2m+1} = B_{2m} u B_{2m+1}
        return frozenset({RegionLabel(L, "B", j - 1), RegionLabel(L, "B", j)})
    if j == 2:
        return frozenset({RegionLabel(L, "A", 1), RegionLabel(L, "A", 2)})
    return frozenset({RegionLabel(L, "A", j - 1), RegionLabel(L, "A", j)})


def _shell_index(label: RegionLabel) -> int:
    """The Fibonacci-shell index j with label contained in the j-th shell."""
    i = label.index
    if label.name == "B":
        return i if i % 2 else i + 1
    if label.name == "A":
        return i + 1 if i % 2 else i
    raise KeyError(label)


_SMALL_TRANSITIONS = {
    ("Z", None): [("Z", None)],
    ("A", 1): [("A", 2)],
    ("A", 2): [("A", 1)],
    ("A", 3): [("A", 4)],
    ("A", 4): [("A", 2), ("A", 5)],
    ("A", 5): [("A", 6)],
    ("A", 6): [("A", 2), ("A", 5)],
    ("B", 1): [("B", 2)],
    ("B", 2): [("B", 1), ("A", 2), ("A", 3), ("A", 5)],
    ("P", 1): [("A", 1)],
    ("P", 2): [("A", 1)],
    ("P", 3): [("P", 4), ("P", 5)],
    ("P", 4): [("P", 5), ("A", 6)],
    ("P", 5): [("P", 4)],
    # Both |y| sub-cases of the boundary column, taken together.
    ("P", 6): [("P", 1), ("P", 2), ("P", 3), ("P", 4), ("P", 5), ("A", 1)],
}


def expected_preimage_regions(label: RegionLabel, depth: int = 1) -> frozenset:
    """The admissible regions of f^(-depth) of the region, per the transition claims.

    Depth 2 exists only for the SMALL band A5.  Regions without a one-step
    claim (R and the boundary C/D families) raise KeyError.
    """
    regime = label.regime
    if depth == 2:
        if regime is Regime.SMALL and (label.name, label.index) == ("A", 5):
            return frozenset({RegionLabel(regime, "A", 2)})
        raise KeyError(f"no depth-2 claim for {label}")
    if depth != 1:
        raise ValueError("depth must be 1 or 2")
    if regime is Regime.SMALL:
        try:
            names = _SMALL_TRANSITIONS[(label.name, label.index)]
        except KeyError:
            raise KeyError(f"no transition claim for {label}") from None
        return frozenset(RegionLabel(regime, n, i) for n, i in names)
    if regime is Regime.UNIT:
        if label.name == "F":
            return frozenset({RegionLabel(regime, "G", None)})
        if label.name == "G":
            return frozenset({RegionLabel(regime, "H", None)})
        if label.name == "H":
            return frozenset({RegionLabel(regime, "G", None)})
        if label.name == "M":
            if label.index == 1:
                return frozenset({RegionLabel(regime, "H", None)})
            return frozenset({RegionLabel(regime, "M", label.index - 1)})
        raise KeyError(f"no transition claim for {label}")
    # LARGE
    if label.name == "F":
        return frozenset({RegionLabel(regime, "G", None)})
    if label.name == "G":
        return frozenset({RegionLabel(regime, "H", None)})
    if label.name == "H":
        return frozenset({RegionLabel(regime, "G", None)})
    if (label.name, label.index) == ("J", 0):
        return frozenset({RegionLabel(regime, "J", 0)})
    if label.name == "M":
        i = label.index
        if i == 1:
            return frozenset({RegionLabel(regime, "G", None)})
        if i == 2:
            # The one-step derivation lands in H u M1 (the H part is reached
            # whenever |y| >= |x|).
            return frozenset({RegionLabel(regime, "H", None), RegionLabel(regime, "M", 1)})
        if i % 2:
            return frozenset({RegionLabel(regime, "M", i - 1)})
        n = (i - 2) // 2
        targets = {RegionLabel(regime, "H", None)}
        targets.update(RegionLabel(regime, "M", 2 * k + 1) for k in range(n + 1))
        return frozenset(targets)
    if label.name in ("B", "A"):
        return _j_component_labels(_shell_index(label) - 1)
    if label.name == "T":
        if label.index is None or label.index < 1:
            raise KeyError(f"no transition claim for {label}")
        return frozenset({RegionLabel(regime, "T", label.index - 1)})
    raise KeyError(f"no transition claim for {label}")


def export_transition_table(regime: Regime, d: int, max_window: int = 60) -> list:
    """The transition table as JSON-able rows, for documentation and test generation."""
    rows = []
    for label in iter_region_labels(regime, d, max_window, include_t=True):
        for depth in (1, 2):
            try:
                targets = expected_preimage_regions(label, depth=depth)
            except KeyError:
                continue
            rows.append(
                {
                    "source": label.to_json(),
                    "depth": depth,
                    "targets": sorted((t.to_json() for t in targets), key=str),
                }
            )
    return rows
