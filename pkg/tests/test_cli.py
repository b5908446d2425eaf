"""End-to-end exercises of every subcommand via main()."""

import json

import pytest

from sigmaperm.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_info_human_and_json_agree(capsys):
    code, out, _ = run(capsys, "info", "S4")
    assert code == 0
    assert "order 24" in out
    code, out, _ = run(capsys, "info", "S4", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["order"] == 24
    assert payload["primes"] == [2, 3]
    assert payload["soluble"] is True
    assert [n["order"] for n in payload["normal_subgroups"]] == [1, 4, 12, 24]


def test_subgroups_listing(capsys):
    code, out, _ = run(capsys, "subgroups", "S4", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 30
    assert len(payload["subgroups"]) == 30
    assert payload["conjugacy_classes"] == 11
    normal_orders = sorted(
        r["order"] for r in payload["subgroups"] if r["normal"]
    )
    assert normal_orders == [1, 4, 12, 24]


def test_projectors_subcommand(capsys):
    code, out, _ = run(capsys, "projectors", "A5", "--pi", "2,5", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 11
    assert sorted(p["order"] for p in payload["projectors"]) == [4] * 5 + [10] * 6


def test_permutable_false_with_witness(capsys):
    code, out, _ = run(
        capsys, "permutable", "S3", "--h", "(1 2)", "--sigma", "s1", "--level", "1"
    )
    assert code == 0
    assert "false" in out
    assert "offender" in out
    code, out, _ = run(
        capsys, "permutable", "S3", "--h", "(1 2)", "--sigma", "s1",
        "--level", "1", "--json",
    )
    payload = json.loads(out)
    assert payload["verdict"] is False
    assert payload["witness"]["offender"]


def test_permutable_true_cases(capsys):
    code, out, _ = run(
        capsys, "permutable", "S3", "--h", "(1 2 3)", "--sigma", "s1", "--level", "1"
    )
    assert code == 0 and "true" in out
    code, out, _ = run(
        capsys, "permutable", "S4", "--h", "(1 2)(3 4);(1 3)(2 4)",
        "--sigma", "2,3", "--level", "3", "--json",
    )
    assert code == 0
    assert json.loads(out)["verdict"] is True


def test_permutable_undefined_skiba(capsys):
    code, out, _ = run(
        capsys, "permutable", "A5", "--h", "(1 2 3 4 5)",
        "--sigma", "2,5|3", "--level", "skiba",
    )
    assert code == 0
    assert "undefined" in out


def test_verify_single_claim(capsys):
    code, out, _ = run(capsys, "verify", "--group", "S4", "--sigma", "s1", "--claims", "T4")
    assert code == 0
    assert "T4" in out and "pass" in out
    assert "exit code 0" in out


def test_verify_sweeps_all_partitions_by_default(capsys):
    code, out, _ = run(capsys, "verify", "--group", "S3", "--claims", "T1", "--json")
    assert code == 0
    payload = json.loads(out)
    assert sorted(r["sigma"] for r in payload["reports"]) == ["2,3", "2|3"]
    assert payload["summary"]["exit_code"] == 0


def test_scan_conjecture_is_quiet(capsys):
    code, out, _ = run(capsys, "scan", "--max-order", "12", "--claims", "CONJ1", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["summary"]["fail"] == 0
    assert all(r["claim_id"] == "CONJ1" for r in payload["reports"])


def test_report_dir_writes_all_artifacts(capsys, tmp_path):
    outdir = tmp_path / "out"
    code, _, err = run(
        capsys, "verify", "--group", "S3", "--claims", "T1,T4",
        "--report-dir", str(outdir),
    )
    assert code == 0
    names = sorted(p.name for p in outdir.iterdir())
    assert names == [
        "reports.jsonl", "status_matrix.png", "summary.txt", "timing_by_claim.png",
    ]
    lines = (outdir / "reports.jsonl").read_text().splitlines()
    assert len(lines) == 4  # 2 claims x 2 partitions
    assert all(json.loads(line)["status"] == "pass" for line in lines)
    assert (outdir / "status_matrix.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert "wrote" in err


def test_usage_errors_exit_two(capsys):
    code, _, err = run(capsys, "info", "E7")
    assert code == 2 and "error:" in err
    code, _, err = run(capsys, "verify", "--group", "S3", "--claims", "T9")
    assert code == 2 and "unknown claim" in err
    code, _, err = run(capsys, "permutable", "S3", "--h", "(1 2", "--sigma", "s1")
    assert code == 2
    code, _, err = run(capsys, "permutable", "S3", "--h", "(1 2)", "--sigma", "2|2")
    assert code == 2
    code, _, err = run(capsys, "scan", "--max-order", "0")
    assert code == 2


def test_order_cap_env_is_respected(capsys, monkeypatch):
    monkeypatch.setenv("SIGMAPERM_ORDER_CAP", "16")
    code, _, err = run(capsys, "info", "S4")
    assert code == 2
    assert "16" in err


def test_version_flag(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert "sigmaperm" in out


def test_missing_subcommand_exits_nonzero(capsys):
    assert run(capsys, )[0] == 2
