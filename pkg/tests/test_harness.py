"""Claim checkers, report aggregation, serialization, and exit codes."""

import json

import pytest

from sigmaperm.errors import UnknownClaimError
from sigmaperm.harness import (
    CLAIM_IDS,
    CLAIM_TITLES,
    STATUS_FAIL,
    STATUS_INAPPLICABLE,
    STATUS_PASS,
    SuiteResult,
    VerificationReport,
    WitnessRecord,
    check_conjecture1,
    reports_to_jsonl,
    run_suite,
    summary_text,
    validate_claims,
    verify_claim,
    write_report_files,
)
from sigmaperm.lattice import lattice_of
from sigmaperm.sigma import canonicalize_sigma, singleton_partition


def test_claim_registry_is_complete():
    assert len(CLAIM_IDS) == 18
    assert set(CLAIM_TITLES) == set(CLAIM_IDS)
    assert all(CLAIM_TITLES[c] for c in CLAIM_IDS)


def test_validate_claims():
    assert validate_claims(None) == CLAIM_IDS
    assert validate_claims(["T1", "T1", " T2 "]) == ("T1", "T2")
    with pytest.raises(UnknownClaimError):
        validate_claims(["T9"])
    with pytest.raises(UnknownClaimError):
        validate_claims([""])
    with pytest.raises(UnknownClaimError):
        verify_claim(None, None, "nope")


def test_every_claim_passes_on_s4(make):
    G = make("S4")
    lat = lattice_of(G)
    sigma = singleton_partition(G)
    for cid in CLAIM_IDS:
        report = verify_claim(G, sigma, cid, lat)
        assert report.status in (STATUS_PASS, STATUS_INAPPLICABLE), cid
        assert report.claim_id == cid
        assert report.group_id == "order24:deg4"
        assert report.sigma == "2|3"
        assert report.timing_ms >= 0
        assert report.witnesses == ()


def test_suite_over_s4_and_a5_is_green(make):
    result = run_suite([("S4", make("S4")), ("A5", make("A5"))])
    assert result.exit_code == 0
    counts = result.counts
    assert counts[STATUS_FAIL] == 0
    assert counts[STATUS_PASS] > 0
    # S4 sweeps 2 partitions, A5 sweeps 5, 18 claims each
    assert len(result.reports) == (2 + 5) * 18


def test_single_sigma_restricts_the_sweep(make):
    G = make("S4")
    sigma = canonicalize_sigma([{2, 3}], G)
    result = run_suite([("S4", G)], claims=["T1"], sigma=sigma)
    assert [r.sigma for r in result.reports] == ["2,3"]
    assert result.reports[0].status == STATUS_PASS


def test_singleton_gated_claims_are_inapplicable_elsewhere(make):
    G = make("A5")
    lat = lattice_of(G)
    sigma = canonicalize_sigma([{2, 5}, {3}], G)
    for cid in ("C1", "C4", "C5", "C7"):
        report = verify_claim(G, sigma, cid, lat)
        assert report.status == STATUS_INAPPLICABLE, cid


def test_skiba_gated_claim_is_inapplicable_without_halls(make):
    G = make("A5")
    lat = lattice_of(G)
    report = verify_claim(G, canonicalize_sigma([{2, 5}, {3}], G), "C2", lat)
    assert report.status == STATUS_INAPPLICABLE


def test_conjugacy_completeness_gate_for_c6(make):
    G = make("A5")
    lat = lattice_of(G)
    report = verify_claim(G, canonicalize_sigma([{2, 3}, {5}], G), "C6", lat)
    assert report.status == STATUS_INAPPLICABLE
    S4 = make("S4")
    assert (
        verify_claim(S4, singleton_partition(S4), "C6", lattice_of(S4)).status
        == STATUS_PASS
    )


def test_conjecture_scan_is_quiet_on_small_groups(catalog24):
    findings = [
        r for r in check_conjecture1(catalog24) if r.status == STATUS_FAIL
    ]
    assert findings == []


def _fake(claim_id, status):
    return VerificationReport(
        group_id="order6:deg3",
        sigma="2|3",
        claim_id=claim_id,
        status=status,
        witnesses=(),
        timing_ms=1.0,
    )


def test_exit_code_ranking():
    assert SuiteResult([_fake("T1", STATUS_PASS)]).exit_code == 0
    assert SuiteResult([_fake("CONJ1", STATUS_FAIL)]).exit_code == 3
    assert SuiteResult([_fake("T1", STATUS_FAIL)]).exit_code == 1
    both = SuiteResult([_fake("CONJ1", STATUS_FAIL), _fake("T1", STATUS_FAIL)])
    assert both.exit_code == 1
    assert SuiteResult([_fake("T1", STATUS_INAPPLICABLE)]).exit_code == 0


def test_jsonl_round_trip(make):
    result = run_suite([("S3", make("S3"))], claims=["T1", "T4"])
    text = reports_to_jsonl(result.reports)
    records = [json.loads(line) for line in text.splitlines()]
    assert len(records) == len(result.reports)
    for rec, rep in zip(records, result.reports):
        assert rec["claim_id"] == rep.claim_id
        assert rec["status"] == rep.status
        assert set(rec) == {
            "group_id", "sigma", "claim_id", "status", "witnesses", "timing_ms",
        }


def test_reports_are_deterministic_modulo_timing(make):
    a = run_suite([("S4", make("S4"))]).reports
    b = run_suite([("S4", make("S4"))]).reports
    assert reports_to_jsonl(a, include_timing=False) == reports_to_jsonl(
        b, include_timing=False
    )
    stripped = json.loads(reports_to_jsonl(a, include_timing=False).splitlines()[0])
    assert "timing_ms" not in stripped


def test_summary_text_shape(make):
    result = run_suite([("S3", make("S3"))], claims=["T1", "CONJ1"])
    text = summary_text(result.reports)
    assert "T1" in text and "CONJ1" in text
    assert "exit code 0" in text
    assert "total" in text


def test_witness_records_serialize():
    w = WitnessRecord(subject="order 2: <(1 2)>", block="2", offender="-", detail="x")
    assert w.to_record() == {
        "subject": "order 2: <(1 2)>",
        "block": "2",
        "offender": "-",
        "detail": "x",
    }


def test_write_report_files(make, tmp_path):
    result = run_suite([("S3", make("S3"))], claims=["T1", "T2"])
    paths = write_report_files(result.reports, tmp_path)
    names = sorted(p.split("/")[-1] for p in map(str, paths))
    assert names == [
        "reports.jsonl",
        "status_matrix.png",
        "summary.txt",
        "timing_by_claim.png",
    ]
    for p in paths:
        content = open(p, "rb").read()
        assert content, p
    for p in paths:
        if str(p).endswith(".png"):
            assert open(p, "rb").read(8) == b"\x89PNG\r\n\x1a\n"
