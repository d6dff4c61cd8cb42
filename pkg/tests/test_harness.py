import random
from fractions import Fraction

import pytest

from parbundles.equivariant import equiv_semistable, from_parabolic
from parbundles.errors import UsageError
from parbundles.harness import (
    NOTE_SINGLE_POINT_GAP,
    CampaignConfig,
    counterexample_report,
    enumerate_line_sums,
    find_min_counterexample,
    random_gauge,
    run_identity_campaign,
    run_theorem_campaign,
)
from parbundles.parabolic import oracle_semistable_line_sum, par_line, parabolic_degree
from parbundles.projline import INFINITY, ORIGIN, split
from parbundles.raynaud import Mode

P0, PINF = ORIGIN, INFINITY
HALF = Fraction(1, 2)


def cfg(r, d, n, mode, window=1, gauge=2, seed=7, samples=40):
    return CampaignConfig(
        r=r, d=Fraction(d), n=n, mode=Mode(mode), degree_window=window,
        gauge_samples=gauge, random_seed=seed, identity_sample_size=samples,
    )


# --- enumeration -------------------------------------------------------------------

def test_enumerate_rank1_two_point_window1():
    instances = enumerate_line_sums(cfg(1, 0, 2, "two-point", gauge=0))
    assert [inst.parts for inst in instances] == [
        (par_line(0),),
        (par_line(-1, {P0: HALF, PINF: HALF}),),
    ]


def test_enumerate_contains_expected_single_point_instances():
    instances = enumerate_line_sums(cfg(2, 1, 2, "single-point", window=2, gauge=0))
    families = {inst.parts for inst in instances}
    assert (par_line(0, {P0: HALF}), par_line(0, {P0: HALF})) in families
    assert (par_line(1, {P0: HALF}), par_line(-1, {P0: HALF})) in families


def test_enumerate_pardeg_filter():
    for inst in enumerate_line_sums(cfg(2, 1, 2, "two-point", gauge=1)):
        assert parabolic_degree(inst.bundle) == 1
        for copy in inst.gauge_copies:
            assert parabolic_degree(copy) == 1


def test_enumeration_window_can_be_empty():
    # degree 3/2 is unreachable from two degree-0 lines with weights in {0, 1/2}
    instances = enumerate_line_sums(cfg(2, Fraction(3, 2), 2, "single-point",
                                        window=0, gauge=0))
    assert instances == []
    report = run_theorem_campaign(cfg(2, Fraction(3, 2), 2, "single-point",
                                      window=0, gauge=0))
    assert report.checked == 0 and report.disagreements == []


def test_gauge_copies_deterministic():
    a = enumerate_line_sums(cfg(2, 1, 2, "two-point", gauge=3, seed=11))
    b = enumerate_line_sums(cfg(2, 1, 2, "two-point", gauge=3, seed=11))
    assert a == b
    c = enumerate_line_sums(cfg(2, 1, 2, "two-point", gauge=3, seed=12))
    assert any(x.gauge_copies != y.gauge_copies for x, y in zip(a, c))


def test_random_gauge_is_invertible_automorphism():
    rng = random.Random(99)
    from parbundles.exactlin import rank

    for degrees in [(0,), (1, 0), (2, 0, 0), (1, 1, -1)]:
        bundle = split(degrees)
        for _ in range(10):
            g = random_gauge(rng, bundle)
            assert g.source == bundle and g.target == bundle
            assert rank(g.eval_fiber(P0)) == bundle.rank


# --- theorem campaigns ----------------------------------------------------------------

def test_theorem_two_point_no_disagreements():
    report = run_theorem_campaign(cfg(2, 1, 2, "two-point", window=1, gauge=2))
    assert report.disagreements == []
    assert report.checked == report.agreements > 0
    assert report.notes == []


def test_theorem_single_point_on_lattice_clean():
    report = run_theorem_campaign(cfg(2, 1, 2, "single-point", window=1, gauge=2))
    assert report.disagreements == []
    assert report.notes == []


def test_theorem_single_point_off_lattice_documents_finding():
    report = run_theorem_campaign(cfg(2, HALF, 2, "single-point", window=1, gauge=0))
    assert NOTE_SINGLE_POINT_GAP in report.notes
    assert report.disagreements  # the documented witness family
    witnessed = {
        tuple(d["bundle"]["splitting"]): (d["criterion"], d["oracle"])
        for d in report.disagreements
    }
    assert (0, 0) in witnessed
    # criterion says semistable, oracle says unstable
    assert witnessed[(0, 0)] == (True, False)


def test_gauge_copies_never_flip_verdicts():
    # every copy is compared against its representative's oracle, so a
    # gauge-dependent criterion would show up as a disagreement
    for mode in ("two-point", "single-point"):
        report = run_theorem_campaign(cfg(2, 1, 2, mode, window=1, gauge=4))
        assert report.disagreements == []


def test_oracle_cross_check_two_point():
    for inst in enumerate_line_sums(cfg(2, 1, 2, "two-point", window=1, gauge=0)):
        assert oracle_semistable_line_sum(inst.parts) == \
            equiv_semistable(from_parabolic(inst.parts, 2))


# --- identity campaigns ----------------------------------------------------------------

def test_identity_campaign_all_clean():
    for n in (2, 3):
        report = run_identity_campaign(cfg(2, 1, n, "two-point", samples=60))
        assert report.identity_failures == []
        assert set(report.identities) == {
            "degree_relation", "round_trip", "tensor_dual_functoriality",
            "invariant_sections", "sections_as_hom", "detector_bridge",
            "detector_multiplicity", "pushforward_filtration",
        }
        for fam in report.identities.values():
            assert fam.failed == 0 and fam.checked > 0


def test_identity_campaign_filtration_counts():
    report = run_identity_campaign(cfg(1, 0, 3, "two-point", samples=5))
    assert report.identities["pushforward_filtration"].checked == 6  # 2 points x 3 steps


# --- determinism -------------------------------------------------------------------------

def test_reports_byte_identical():
    a = run_theorem_campaign(cfg(2, 1, 2, "two-point", window=1, gauge=2, seed=3))
    b = run_theorem_campaign(cfg(2, 1, 2, "two-point", window=1, gauge=2, seed=3))
    assert a.to_json() == b.to_json()
    c = run_identity_campaign(cfg(2, 1, 2, "two-point", samples=25, seed=3))
    d = run_identity_campaign(cfg(2, 1, 2, "two-point", samples=25, seed=3))
    assert c.to_json() == d.to_json()


def test_report_schema_and_invariants():
    report = run_theorem_campaign(cfg(1, 0, 2, "two-point", gauge=1))
    obj = report.to_obj()
    assert list(obj) == ["campaign", "config", "checked", "agreements",
                         "disagreements", "identities", "identity_failures",
                         "notes", "seed"]
    assert obj["checked"] == obj["agreements"] + len(obj["disagreements"])
    assert "elapsed" not in report.to_json()


# --- counterexample search ----------------------------------------------------------------

def test_counterexample_found_off_lattice():
    witness = find_min_counterexample(cfg(2, HALF, 2, "single-point", window=1))
    assert witness is not None
    assert witness["bundle"]["splitting"] == [0, 0]
    assert witness["criterion"] is True and witness["oracle"] is False
    weights = [w for part in witness["summands"] for w in part["weights"].values()]
    assert weights == ["1/2"]


def test_counterexample_none_on_lattice():
    assert find_min_counterexample(cfg(2, 1, 2, "single-point", window=1)) is None
    assert find_min_counterexample(cfg(1, 1, 2, "two-point", window=1)) is None


def test_counterexample_report_envelope():
    rep = counterexample_report(cfg(2, HALF, 2, "single-point", window=1))
    assert rep["campaign"] == "counterexample"
    assert rep["witness"] is not None
    assert NOTE_SINGLE_POINT_GAP in rep["notes"]


def test_config_validation():
    with pytest.raises(UsageError):
        CampaignConfig(r=2, d=Fraction(1, 3), n=2, mode=Mode.TWO_POINT)
    with pytest.raises(UsageError):
        CampaignConfig(r=0, d=Fraction(0), n=2, mode=Mode.TWO_POINT)
