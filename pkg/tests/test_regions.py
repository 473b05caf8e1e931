import random

import pytest

from padic_henon.fib import fib
from padic_henon.regions import (
    EmptyRegionError,
    Regime,
    RegionLabel,
    abstract_inverse,
    classify,
    classify_point,
    expected_preimage_regions,
    export_transition_table,
    iter_region_labels,
    profile_in_region,
    region_profiles,
    sample_in_region,
    t_profile,
)

S, U, L = Regime.SMALL, Regime.UNIT, Regime.LARGE


def lbl(regime, name, index=None):
    return RegionLabel(regime, name, index)


# --- pinned classifications ---------------------------------------------------


@pytest.mark.parametrize(
    "d,profile,name,index",
    [
        (-1, (0, 0), "Z", None),
        (-1, (-1, -1), "R", None),
        (-2, (-2, -3), "P", 6),
        (-2, (-3, -2), "P", 1),
        (-1, (-2, 1), "A", 1),
        (-1, (1, -2), "A", 2),
        (-1, (2, 0), "A", 3),
        (-1, (0, 3), "A", 4),
        (-3, (0, -1), "A", 5),
        (-3, (-1, 2), "A", 6),
        (-1, (5, 2), "B", 1),  # beta*2 < 5
        (-1, (2, 5), "B", 2),
        (-1, (3, 2), "B", 2),  # beta*2 > 3
        (2, (1, 1), "J", 0),
        (1, (1, 0), "C", 0),
        (1, (0, 1), "C", 0),
        (1, (0, 0), "C", 0),
        (2, (-1, 3), "G", None),
        (2, (3, -1), "H", None),
        (2, (-1, -1), "F", None),
        (0, (3, 2), "M", 3),  # 2a <= 3b with b < a
        (0, (4, 2), "M", 2),  # 2b <= a
        (0, (2, 3), "M", 1),
        (0, (0, 0), "C", 0),
        (0, (-4, 0), "C", 0),
        (1, (2, 1), "C", 1),
        (1, (2, 2), "M", 2),
        (1, (3, 1), "M", 1),
    ],
)
def test_classify_pinned(d, profile, name, index):
    got = classify(profile, d)
    assert (got.name, got.index) == (name, index)


def test_zero_coordinates():
    assert classify((None, 0), -1) == lbl(S, "A", 1)  # x = 0: a = -infinity
    assert classify((None, -3), -1) == lbl(S, "P", 1)
    assert classify((3, None), -1).name == "OutsideQ"
    assert classify((None, None), 2).name == "OutsideQ"
    assert classify((None, 2), 1) == lbl(L, "G", None)


def test_classify_point_uses_norms():
    from padic_henon.padics import PadicRational, Point

    pt = Point(PadicRational(1, 9, 3), PadicRational(3, 1, 3))  # profile (2, -1)
    assert pt.profile() == (2, -1)
    assert classify_point(pt, 1) == lbl(L, "H", None)


# --- exhaustive agreement between classifier and declarative table ------------


@pytest.mark.parametrize("d", [-3, -2, -1, 0, 1, 2, 3])
def test_classifier_label_satisfies_own_inequalities(d):
    for a in range(-25, 26):
        for b in range(-25, 26):
            label = classify((a, b), d)
            assert profile_in_region(label, a, b, d), (a, b, d, str(label))


@pytest.mark.parametrize("d", [-2, 0, 2])
def test_exactly_one_region_per_profile(d):
    regime = classify((0, 1), d).regime
    labels = list(iter_region_labels(regime, d, 25))
    for a in range(-25, 26):
        for b in range(-25, 26):
            hits = [str(l) for l in labels if profile_in_region(l, a, b, d)]
            assert len(hits) == 1, (a, b, d, hits)


# --- Fibonacci shells decompose exactly into their components -----------------


def _j_shell_member(j, a, b, d):
    """Membership in the j-th bounded shell straight from its three-inequality form."""
    if j == 0:
        return a < d and 0 < b < d
    if j == 1:
        return a > d and b < d and b < a < d + b
    if j == 2:
        return b > d and a < d + b and a < 2 * b < d + a
    if j % 2:  # j = 2n+1, n >= 1
        n = (j - 1) // 2
        return (
            a * fib(2 * n - 2) > d + b * fib(2 * n - 1)
            and b * fib(2 * n) < d + a * fib(2 * n - 1)
            and b * fib(2 * n + 1) < a * fib(2 * n) < d + b * fib(2 * n + 1)
        )
    n = (j - 2) // 2  # j = 2n+2, n >= 1
    return (
        b * fib(2 * n) > d + a * fib(2 * n - 1)
        and a * fib(2 * n) < d + b * fib(2 * n + 1)
        and a * fib(2 * n + 1) < b * fib(2 * n + 2) < d + a * fib(2 * n + 1)
    )


@pytest.mark.parametrize("d", [1, 2, 3])
def test_shell_decomposition(d):
    # Shell 2n+1 splits exactly into B(2n) u B(2n+1); shell 2n+2 into
    # A(2n+1) u A(2n+2); the components are disjoint.
    W = 40
    for j in range(1, 8):
        if j == 1:
            comps = [lbl(L, "B", 1)]
        elif j % 2:
            comps = [lbl(L, "B", j - 1), lbl(L, "B", j)]
        elif j == 2:
            comps = [lbl(L, "A", 1), lbl(L, "A", 2)]
        else:
            comps = [lbl(L, "A", j - 1), lbl(L, "A", j)]
        for a in range(-W, W + 1):
            for b in range(-W, W + 1):
                member = _j_shell_member(j, a, b, d)
                hits = [c for c in comps if profile_in_region(c, a, b, d)]
                assert member == (len(hits) == 1), (j, a, b, d)
                assert len(hits) <= 1


# --- profile-level inverse -----------------------------------------------------


def test_abstract_inverse_deterministic_case():
    r = abstract_inverse((2, 0), 1)
    assert not r.is_cancellation
    assert r.outcomes() == [(0, 2)]


def test_abstract_inverse_cancellation_case():
    r = abstract_inverse((1, 0), 1)
    assert r.is_cancellation
    assert r.outcomes(3) == [(0, 1), (0, 0), (0, -1), (0, -2)]


def test_abstract_inverse_torus_stays():
    r = abstract_inverse((0, 0), -1)
    assert r.outcomes() == [(0, 0)]


def test_abstract_inverse_zero_x():
    r = abstract_inverse((None, 2), 1)
    assert r.outcomes() == [(2, -1)]


def test_abstract_inverse_requires_y():
    with pytest.raises(ValueError):
        abstract_inverse((1, None), 1)


# --- transition table -----------------------------------------------------------


def test_small_transition_entries():
    assert expected_preimage_regions(lbl(S, "A", 1)) == {lbl(S, "A", 2)}
    assert expected_preimage_regions(lbl(S, "A", 4)) == {lbl(S, "A", 2), lbl(S, "A", 5)}
    assert expected_preimage_regions(lbl(S, "B", 2)) == {
        lbl(S, "B", 1), lbl(S, "A", 2), lbl(S, "A", 3), lbl(S, "A", 5)
    }
    assert expected_preimage_regions(lbl(S, "Z")) == {lbl(S, "Z")}
    assert expected_preimage_regions(lbl(S, "A", 5), depth=2) == {lbl(S, "A", 2)}


def test_large_transition_entries():
    assert expected_preimage_regions(lbl(L, "G")) == {lbl(L, "H")}
    assert expected_preimage_regions(lbl(L, "J", 0)) == {lbl(L, "J", 0)}
    assert expected_preimage_regions(lbl(L, "M", 1)) == {lbl(L, "G")}
    # The even first rung reaches H as well as M1 (per the one-step derivation).
    assert expected_preimage_regions(lbl(L, "M", 2)) == {lbl(L, "H"), lbl(L, "M", 1)}
    assert expected_preimage_regions(lbl(L, "M", 4)) == {
        lbl(L, "H"), lbl(L, "M", 1), lbl(L, "M", 3)
    }
    assert expected_preimage_regions(lbl(L, "M", 5)) == {lbl(L, "M", 4)}
    # Shell descent through the B/A decomposition.
    assert expected_preimage_regions(lbl(L, "B", 1)) == {lbl(L, "J", 0)}
    assert expected_preimage_regions(lbl(L, "B", 2)) == {lbl(L, "A", 1), lbl(L, "A", 2)}
    assert expected_preimage_regions(lbl(L, "B", 3)) == {lbl(L, "A", 1), lbl(L, "A", 2)}
    assert expected_preimage_regions(lbl(L, "A", 1)) == {lbl(L, "B", 1)}
    assert expected_preimage_regions(lbl(L, "A", 4)) == {lbl(L, "B", 2), lbl(L, "B", 3)}
    assert expected_preimage_regions(lbl(L, "T", 3)) == {lbl(L, "T", 2)}


def test_unit_transition_entries():
    assert expected_preimage_regions(lbl(U, "M", 1)) == {lbl(U, "H")}
    assert expected_preimage_regions(lbl(U, "M", 2)) == {lbl(U, "M", 1)}
    assert expected_preimage_regions(lbl(U, "M", 6)) == {lbl(U, "M", 5)}
    assert expected_preimage_regions(lbl(U, "F")) == {lbl(U, "G")}


def test_no_claim_for_boundary_regions():
    with pytest.raises(KeyError):
        expected_preimage_regions(lbl(S, "R"))
    with pytest.raises(KeyError):
        expected_preimage_regions(lbl(L, "C", 0))
    with pytest.raises(KeyError):
        expected_preimage_regions(lbl(L, "D", 2))
    with pytest.raises(KeyError):
        expected_preimage_regions(lbl(L, "T", 0))


def test_transition_table_export_is_jsonable():
    import json

    rows = export_transition_table(Regime.LARGE, 2, max_window=30)
    text = json.dumps(rows)
    assert '"depth": 2' not in text  # depth 2 exists only in the SMALL regime
    rows_small = export_transition_table(Regime.SMALL, -2, max_window=10)
    assert any(r["depth"] == 2 for r in rows_small)


# --- samplers --------------------------------------------------------------------


def test_sample_in_region_self_check():
    rng = random.Random(17)
    d = 2
    labels = [l for l in iter_region_labels(L, d, 10) if region_profiles(l, d, 10)]
    draws = 0
    while draws < 1200:
        for label in labels:
            pt = sample_in_region(label, d, 3, 10, 5, rng)
            assert classify(pt.profile(), d) == label
            draws += 1


def test_sample_every_label_all_regimes():
    rng = random.Random(23)
    for d in (-2, 0, 2):
        regime = classify((0, 1), d).regime
        for label in iter_region_labels(regime, d, 8):
            try:
                pt = sample_in_region(label, d, 5, 8, 4, rng)
            except EmptyRegionError:
                continue
            assert classify(pt.profile(), d) == label


def test_sample_torus_is_unit_profile():
    rng = random.Random(1)
    pt = sample_in_region(lbl(S, "Z"), -1, 3, 5, 4, rng)
    assert pt.profile() == (0, 0)


def test_sample_inner_box_profiles():
    rng = random.Random(1)
    for _ in range(20):
        pt = sample_in_region(lbl(L, "J", 0), 2, 3, 2, 4, rng)
        a, b = pt.profile()
        assert a < 2 and 0 < b < 2


def test_inner_box_empty_when_d_is_one():
    rng = random.Random(1)
    with pytest.raises(EmptyRegionError):
        sample_in_region(lbl(L, "J", 0), 1, 3, 8, 4, rng)


def test_overlay_profile_values():
    assert t_profile(0, 2) == (1, 1)
    assert t_profile(1, 3) == (4, 2)
    with pytest.raises(EmptyRegionError):
        t_profile(1, 1)


def test_overlay_sampling():
    rng = random.Random(9)
    pt = sample_in_region(lbl(L, "T", 2), 3, 3, 40, 4, rng)
    assert pt.profile() == t_profile(2, 3)
