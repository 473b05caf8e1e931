"""Window-exhaustive checks over integer norm profiles, vectorized with numpy.

These routines replay the declarative region table over a whole window
|a|, |b| <= W at once: partition exactness (every profile in exactly one
region), agreement with the scalar classifier, and profile-level transition
claims including full enumeration of the cancellation column a = d.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .regions import (
    RegionLabel,
    Regime,
    classify,
    expected_preimage_regions,
    iter_region_labels,
    region_branches,
    regime_of_d,
    t_profile,
)

__all__ = [
    "region_mask",
    "region_masks",
    "PartitionReport",
    "check_partition",
    "label_grid",
    "classifier_agreement",
    "TransitionCounterexample",
    "TransitionCheck",
    "check_transition_profiles",
    "check_all_transitions",
]


def _golden_below(A, B):
    # beta*b < a, elementwise, exact: sign of b*sqrt(5) vs (2a - b).
    R = 2 * A - B
    L2 = 5 * B * B
    R2 = R * R
    pos = (B >= 0) & (R > 0) & (L2 < R2)
    neg = (B < 0) & ((R >= 0) | (L2 > R2))
    return pos | neg


def _compare(lhs, rhs, op: str):
    if op == "<":
        return lhs < rhs
    if op == "<=":
        return lhs <= rhs
    if op == "==":
        return lhs == rhs
    if op == ">=":
        return lhs >= rhs
    return lhs > rhs


def _eval_branch(branch, A, B, d: int):
    out = np.ones(A.shape, dtype=bool)
    for con in branch:
        if con[0] == "golden":
            m = _golden_below(A, B)
            out &= m if con[1] < 0 else (~m & ((A != 0) | (B != 0)))
        else:
            ca, cb, cd, c1, op = con
            out &= _compare(ca * A + cb * B, cd * d + c1, op)
    return out


def eval_region(label: RegionLabel, A, B, d: int):
    """Boolean membership of the region on arbitrary integer arrays (A, B)."""
    branches = region_branches(label)
    out = np.zeros(A.shape, dtype=bool)
    for branch in branches:
        out |= _eval_branch(branch, A, B, d)
    return out


def window_arrays(window: int):
    coords = np.arange(-window, window + 1, dtype=np.int64)
    A, B = np.meshgrid(coords, coords, indexing="ij")
    return A, B


def _axis_range(cons, coords, d: int):
    """Index range [i0, i1) of a 1-D coordinate axis cut out by pure-axis constraints."""
    mask = np.ones(coords.size, dtype=bool)
    for c_axis, cd, c1, op in cons:
        mask &= _compare(c_axis * coords, cd * d + c1, op)
    nz = np.flatnonzero(mask)
    if nz.size == 0:
        return 0, 0
    return int(nz[0]), int(nz[-1]) + 1


def _branch_blocks(branch, window: int, d: int):
    """Evaluate one branch on its bounding sub-block of the window grid.

    Indexed families are confined to narrow Fibonacci strips in a (and bands
    in b), so pure-a and pure-b constraints are turned into row/column slices
    before the mixed constraints are evaluated densely.
    """
    coords = np.arange(-window, window + 1, dtype=np.int64)
    a_cons, b_cons, mixed = [], [], []
    for con in branch:
        if con[0] == "golden":
            mixed.append(con)
        else:
            ca, cb, cd, c1, op = con
            if cb == 0 and ca != 0:
                a_cons.append((ca, cd, c1, op))
            elif ca == 0 and cb != 0:
                b_cons.append((cb, cd, c1, op))
            else:
                mixed.append(con)
    i0, i1 = _axis_range(a_cons, coords, d)
    j0, j1 = _axis_range(b_cons, coords, d)
    if i0 >= i1 or j0 >= j1:
        return None
    A = coords[i0:i1, None]
    B = coords[None, j0:j1]
    sub = np.ones((i1 - i0, j1 - j0), dtype=bool)
    for con in mixed:
        if con[0] == "golden":
            m = _golden_below(A, B)
            sub &= m if con[1] < 0 else (~m & ((A != 0) | (B != 0)))
        else:
            ca, cb, cd, c1, op = con
            sub &= _compare(ca * A + cb * B, cd * d + c1, op)
    return i0, i1, j0, j1, sub


def region_mask(label: RegionLabel, window: int, d: int):
    out = np.zeros((2 * window + 1, 2 * window + 1), dtype=bool)
    for branch in region_branches(label):
        block = _branch_blocks(branch, window, d)
        if block is not None:
            i0, i1, j0, j1, sub = block
            out[i0:i1, j0:j1] |= sub
    return out


def region_masks(d: int, window: int, include_t: bool = False):
    regime = regime_of_d(d)
    masks = {}
    for label in iter_region_labels(regime, d, window, include_t=include_t):
        masks[label] = region_mask(label, window, d)
    return masks


@dataclass
class PartitionReport:
    d: int
    window: int
    cells: int
    uncovered: list = field(default_factory=list)
    overlaps: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return not self.uncovered and not self.overlaps


def check_partition(d: int, window: int, max_witnesses: int = 10) -> PartitionReport:
    """Certify that the declarative regions tile the window with no overlap."""
    regime = regime_of_d(d)
    count = np.zeros((2 * window + 1, 2 * window + 1), dtype=np.uint8)
    for label in iter_region_labels(regime, d, window):
        count += region_mask(label, window, d)
    report = PartitionReport(d=d, window=window, cells=count.size)
    if (count == 1).all():
        return report
    masks = region_masks(d, window)
    for kind, where in (("uncovered", count == 0), ("overlaps", count > 1)):
        idx = np.argwhere(where)[:max_witnesses]
        witnesses = []
        for i, j in idx:
            a, b = int(i) - window, int(j) - window
            labels = [str(lbl) for lbl, m in masks.items() if m[i, j]]
            witnesses.append({"a": a, "b": b, "labels": labels})
        getattr(report, kind).extend(witnesses)
    return report


def label_grid(d: int, window: int):
    """(labels, id-grid) where grid[i, j] indexes the unique region of each cell.

    Requires the partition to be exact; cells are asserted covered exactly once.
    """
    regime = regime_of_d(d)
    labels = list(iter_region_labels(regime, d, window))
    grid = np.full((2 * window + 1, 2 * window + 1), -1, dtype=np.int32)
    for k, label in enumerate(labels):
        m = region_mask(label, window, d)
        if (grid[m] != -1).any():
            raise AssertionError(f"overlap while assigning {label}")
        grid[m] = k
    if (grid == -1).any():
        raise AssertionError("uncovered cells in label grid")
    return labels, grid


def classifier_agreement(d: int, window: int, sample: int = 0, rng=None) -> int:
    """Check the scalar classifier against the declarative label grid.

    Exhaustive over the window; optionally `sample` extra random cells of a
    larger implicit window are checked one by one.  Returns cells checked.
    """
    labels, grid = label_grid(d, window)
    checked = 0
    for i in range(grid.shape[0]):
        a = i - window
        row = grid[i]
        for j in range(grid.shape[1]):
            b = j - window
            if classify((a, b), d) != labels[row[j]]:
                raise AssertionError(
                    f"classifier disagrees with region table at ({a}, {b}), d={d}: "
                    f"{classify((a, b), d)} vs {labels[row[j]]}"
                )
            checked += 1
    if sample and rng is not None:
        W2 = 4 * window
        A, B = window_arrays(W2)
        for _ in range(sample):
            a = rng.randrange(-W2, W2 + 1)
            b = rng.randrange(-W2, W2 + 1)
            lbl = classify((a, b), d)
            arr_a = np.array([[a]], dtype=np.int64)
            arr_b = np.array([[b]], dtype=np.int64)
            if not eval_region(lbl, arr_a, arr_b, d)[0, 0]:
                raise AssertionError(f"classifier label {lbl} fails its own inequalities at ({a}, {b})")
            checked += 1
    return checked


# ---------------------------------------------------------------------------
# Profile-level transition checks.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionCounterexample:
    source_profile: tuple
    outcome_profile: tuple
    cancellation_exponent: int | None  # e with |x - c| = p^e when a = d, else None


@dataclass
class TransitionCheck:
    source: RegionLabel
    d: int
    window: int
    depth: int
    profiles_checked: int = 0
    outcomes_checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _targets_mask(targets, A, B, d: int):
    out = np.zeros(A.shape, dtype=bool)
    for t in targets:
        out |= eval_region(t, A, B, d)
    return out


def _source_cells(label: RegionLabel, d: int, window: int):
    if label.name == "T":
        # A single cell; checked even when it sits outside the window, since
        # exhaustiveness costs nothing here.
        a, b = t_profile(label.index, d)
        return np.array([a], dtype=np.int64), np.array([b], dtype=np.int64)
    parts = []
    for branch in region_branches(label):
        block = _branch_blocks(branch, window, d)
        if block is None:
            continue
        i0, _, j0, _, sub = block
        ii, jj = np.nonzero(sub)
        parts.append(np.stack([ii + (i0 - window), jj + (j0 - window)], axis=1))
    if not parts:
        return np.array([], dtype=np.int64), np.array([], dtype=np.int64)
    cells = np.unique(np.concatenate(parts, axis=0), axis=0).astype(np.int64)
    return cells[:, 0], cells[:, 1]


def _step_profiles(A, B, SA, SB, e0, d: int, cancel_depth: int):
    """One abstract backward step on profile arrays.

    Yields (A', B', e, SA', SB') groups: the deterministic group plus one
    group per enumerated cancellation exponent e <= d for the a = d cells.
    SA/SB track the originating source profiles; e records the first
    cancellation exponent taken along the branch (None if none).
    """
    det = A != d
    if det.any():
        Ad, Bd = A[det], B[det]
        E = np.maximum(Ad, d)
        yield Bd, E - Bd, e0, SA[det], SB[det]
    canc = ~det
    if canc.any():
        Ac, Bc, SAc, SBc = A[canc], B[canc], SA[canc], SB[canc]
        for e in range(d, d - cancel_depth - 1, -1):
            yield Bc, e - Bc, e, SAc, SBc


def check_transition_profiles(
    source: RegionLabel,
    d: int,
    window: int,
    depth: int = 1,
    cancel_depth: int | None = None,
    targets=None,
) -> TransitionCheck:
    """Exhaustively verify one transition claim on every window profile.

    Applies the abstract inverse `depth` times to every profile of the source
    region inside the window and requires each outcome to satisfy the
    inequalities of some expected target region.  The cancellation column
    a = d is enumerated down to e = d - cancel_depth (default: the window).
    """
    if cancel_depth is None:
        cancel_depth = window
    if targets is None:
        targets = expected_preimage_regions(source, depth=depth)
    check = TransitionCheck(source=source, d=d, window=window, depth=depth)
    As, Bs = _source_cells(source, d, window)
    check.profiles_checked = int(As.size)
    if As.size == 0:
        return check

    # Each frontier entry: (A, B, first cancellation exponent, source A, source B)
    frontier = [(As, Bs, None, As, Bs)]
    for _ in range(depth):
        new_frontier = []
        for A, B, e0, SA, SB in frontier:
            for A2, B2, e, SA2, SB2 in _step_profiles(A, B, SA, SB, e0, d, cancel_depth):
                new_frontier.append((A2, B2, e0 if e0 is not None else e, SA2, SB2))
        frontier = new_frontier

    for A, B, e, SA, SB in frontier:
        ok = _targets_mask(targets, A, B, d)
        check.outcomes_checked += int(A.size)
        bad = ~ok
        if bad.any():
            idx = np.argwhere(bad)[:25]
            for (k,) in idx:
                check.counterexamples.append(
                    TransitionCounterexample(
                        source_profile=(int(SA[k]), int(SB[k])),
                        outcome_profile=(int(A[k]), int(B[k])),
                        cancellation_exponent=e,
                    )
                )
    return check


def transition_sources(regime: Regime, d: int, window: int, include_t: bool = True):
    """All labels in the window that carry a depth-1 transition claim."""
    for label in iter_region_labels(regime, d, window, include_t=include_t):
        try:
            expected_preimage_regions(label, depth=1)
        except KeyError:
            continue
        if label.name == "T" and (d < 2 or label.index < 1):
            continue
        yield label


def check_all_transitions(d: int, window: int, include_t: bool = True, cancel_depth=None):
    """Run every depth-1 window transition check for this d; returns the list of checks."""
    regime = regime_of_d(d)
    checks = []
    for label in transition_sources(regime, d, window, include_t=include_t):
        checks.append(
            check_transition_profiles(label, d, window, depth=1, cancel_depth=cancel_depth)
        )
    return checks
