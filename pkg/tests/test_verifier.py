import json

import pytest

from padic_henon.dynamics import MapParams, inverse
from padic_henon.padics import PadicRational, Point
from padic_henon.regions import Regime, RegionLabel, classify
from padic_henon.verifier import (
    LemmaSpec,
    builtin_campaign,
    builtin_campaign_names,
    campaign_summary,
    load_campaign,
    parse_rational,
    run_campaign,
    run_spec,
    verify_escape,
    verify_worked_orbits,
    verify_sandwich,
    verify_transition,
    verify_transition_exhaustive,
)


def lbl(regime, name, index=None):
    return RegionLabel(regime, name, index)


def test_parse_rational():
    x = parse_rational("-22/7", 5)
    assert (x.numerator, x.denominator) == (-22, 7)
    assert parse_rational("9", 5) == PadicRational(9, 1, 5)


def test_transition_inner_box_sampled():
    spec = LemmaSpec("inner-box", "transition", p=3, c="1/9",
                     source=lbl(Regime.LARGE, "J", 0), samples=300, window=10, seed=11)
    report = verify_transition(spec)
    assert report.ok and report.passes == 300
    assert report.passes + len(report.failures) + report.skipped == spec.samples


def test_transition_depth_two_band():
    spec = LemmaSpec("two-step", "transition", p=3, c="9/1",
                     source=lbl(Regime.SMALL, "A", 5), depth=2, samples=200, window=10, seed=3)
    report = verify_transition(spec)
    assert report.ok


def test_transition_empty_region_skips():
    spec = LemmaSpec("empty", "transition", p=3, c="1/3",
                     source=lbl(Regime.LARGE, "J", 0), samples=50, window=8, seed=1)
    report = verify_transition(spec)
    assert report.ok  # skipped, not failed
    assert report.skipped == 50
    assert any("empty region" in n for n in report.notes)


def test_negative_control_produces_counterexamples():
    spec = LemmaSpec("control", "transition", p=3, c="1/9",
                     source=lbl(Regime.LARGE, "J", 0), samples=100, window=8, seed=2,
                     expected=frozenset({lbl(Regime.LARGE, "F")}))
    report = verify_transition(spec)
    assert not report.ok
    assert len(report.failures) == 100


def test_counterexamples_replay_from_report():
    spec = LemmaSpec("control", "transition", p=3, c="1/9",
                     source=lbl(Regime.LARGE, "J", 0), samples=20, window=8, seed=2,
                     expected=frozenset({lbl(Regime.LARGE, "F")}))
    report = verify_transition(spec)
    params = MapParams(parse_rational(report.spec.c, report.spec.p))
    for failure in report.failures[:5]:
        pt = Point(
            PadicRational.from_json(failure["start"]["x"]),
            PadicRational.from_json(failure["start"]["y"]),
        )
        image = inverse(pt, params)
        assert list(image.profile()) == failure["image_profile"]
        assert str(classify(image.profile(), params.d)) == failure["got"]


def test_determinism_same_seed_same_report():
    spec = LemmaSpec("det", "transition", p=3, c="2/1",
                     source=lbl(Regime.UNIT, "M", 2), samples=150, window=9, seed=77)
    r1, r2 = verify_transition(spec), verify_transition(spec)
    j1, j2 = r1.to_json(), r2.to_json()
    j1.pop("wall_time"), j2.pop("wall_time")
    j1["spec"].pop("seed"), j2["spec"].pop("seed")
    assert j1 == j2


def test_exhaustive_runner_matches_gridcheck():
    spec = LemmaSpec("window", "exhaustive", p=3, c="1/9",
                     source=lbl(Regime.LARGE, "G"), window=40)
    report = verify_transition_exhaustive(spec)
    assert report.ok and report.passes > 0


def test_escape_with_doubling_bound():
    spec = LemmaSpec("tall-band", "escape", p=3, c="1/9",
                     source=lbl(Regime.LARGE, "G"), samples=100, window=8, seed=5,
                     steps=60, escape_exponent=500, growth_check="doubling")
    report = verify_escape(spec)
    assert report.ok and report.passes + report.skipped == 100


def test_escape_schedule_bound_small_regime():
    spec = LemmaSpec("flat-corner", "escape", p=3, c="3/1",
                     source=lbl(Regime.SMALL, "A", 1), samples=100, window=8, seed=5,
                     steps=60, escape_exponent=500, growth_check="schedule")
    report = verify_escape(spec)
    assert report.ok


def test_invariant_region_never_escapes():
    spec = LemmaSpec("torus-control", "escape", p=3, c="3/1",
                     source=lbl(Regime.SMALL, "Z"), samples=50, window=6, seed=5,
                     steps=40, escape_exponent=8)
    report = verify_escape(spec)
    # Negative control: the unit torus is invariant, so nothing escapes.
    assert len(report.failures) == 50
    assert report.passes == 0


@pytest.mark.parametrize("p,expect_ok", [(5, True), (3, False), (7, False)])
def test_worked_orbits_by_prime(p, expect_ok):
    report = verify_worked_orbits(p)
    assert report.ok is expect_ok
    if not expect_ok:
        # only the norm-bounded example degenerates away from p = 5
        assert [f["orbit"] for f in report.failures] == ["large-bounded"]


def test_sandwich_small_regime():
    spec = LemmaSpec("sandwich", "sandwich", p=3, c="3/1", samples=24, window=6,
                     seed=3, steps=40, escape_exponent=300)
    report = verify_sandwich(spec)
    assert report.ok
    assert any("invariance of Z certified" in n for n in report.notes)


def test_sandwich_large_regime():
    spec = LemmaSpec("sandwich", "sandwich", p=3, c="1/9", samples=24, window=6,
                     seed=3, steps=50, escape_exponent=2000)
    report = verify_sandwich(spec)
    assert report.ok
    assert any("invariance of J0 certified" in n for n in report.notes)


def test_sandwich_unit_regime():
    spec = LemmaSpec("sandwich", "sandwich", p=3, c="2/1", samples=24, window=6,
                     seed=3, steps=50, escape_exponent=1000)
    report = verify_sandwich(spec)
    assert report.ok


# --- campaigns -------------------------------------------------------------------


def test_builtin_campaign_names():
    names = builtin_campaign_names()
    assert {"all-lemmas", "negative-control", "known-anomalies"} <= set(names)


def test_campaign_spec_roundtrip(tmp_path):
    specs = builtin_campaign("negative-control")
    path = tmp_path / "campaign.json"
    path.write_text(json.dumps({"specs": [s.to_json() for s in specs]}))
    reloaded = load_campaign(path)
    assert [s.to_json() for s in reloaded] == [s.to_json() for s in specs]


def test_negative_control_campaign_fails():
    reports = run_campaign(builtin_campaign("negative-control"), samples_override=50)
    summary = campaign_summary(reports)
    assert not summary["ok"]
    assert summary["failures"] >= 1


def test_known_anomalies_campaign_fails():
    reports = run_campaign(builtin_campaign("known-anomalies"), samples_override=60)
    summary = campaign_summary(reports)
    assert not summary["ok"]
    by_id = {r.spec.identifier: r for r in reports}
    assert not by_id["overlay-descent-k2-n1-window"].ok
    assert not by_id["two-step-band-collapse-d-3-window"].ok


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        run_spec(LemmaSpec("bad", "nonsense", p=3))
