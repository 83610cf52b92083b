"""End-to-end tests of the command-line interface (direct main() calls)."""

import json
from pathlib import Path

from torsioncert.cli import main
from torsioncert.groebner import MembershipCertificate

DATA = Path(__file__).resolve().parent.parent / "data" / "relations"


def scrub_timing(node):
    if isinstance(node, dict):
        return {k: scrub_timing(v) for k, v in node.items() if k != "timing"}
    if isinstance(node, list):
        return [scrub_timing(v) for v in node]
    return node


def test_verify_kernel_ok(capsys):
    assert main(["verify", "--identity", "kernel", "--k", "0..2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] is True
    assert report["status"] == "VERIFIED"
    assert [t["name"] for t in report["tasks"]] == [
        "kernel k=0",
        "kernel k=1",
        "kernel k=2",
    ]


def test_verify_binomial_box(capsys):
    assert main(["verify", "--identity", "binom-alternating", "--box", "0..5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["tasks"][0]["outcome"]["failures"] == []


def test_verify_resource_cap_exit_code():
    assert main(["verify", "--identity", "kernel", "--k", "100000"]) == 3


def test_verify_usage_errors(capsys):
    assert main(["verify", "--identity", "unknown-id"]) == 2
    assert main(["verify", "--identity", "kernel", "--box", "0..3"]) == 2
    assert main(["verify", "--identity", "kernel", "--k", "3..1"]) == 2
    capsys.readouterr()


def test_conjecture_expect_exhausted(capsys):
    code = main(
        [
            "conjecture",
            str(DATA / "hypersurface.json"),
            "--primes",
            "2,3",
            "--k-max",
            "2",
            "--expect-exhausted",
        ]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert all(t["outcome"]["status"] == "EXHAUSTED" for t in report["tasks"])


def test_conjecture_expectation_violated(capsys):
    code = main(
        [
            "conjecture",
            str(DATA / "minors.json"),
            "--primes",
            "2",
            "--k-max",
            "0",
            "--expect-found",
        ]
    )
    assert code == 1
    capsys.readouterr()


def test_conjecture_found_embeds_certificate(capsys):
    code = main(
        [
            "conjecture",
            str(DATA / "minors.json"),
            "--primes",
            "2",
            "--k-max",
            "1",
            "--expect-found",
        ]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    outcome = report["tasks"][0]["outcome"]
    assert outcome["status"] == "FOUND" and outcome["k"] == 1
    cert = MembershipCertificate.from_json(outcome["certificate"])
    assert cert.verified


def test_conjecture_malformed_relation(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vars": ["x", "y"], "F": ["x", "y"], "G": ["x", "y"]}))
    assert main(["conjecture", str(bad), "--primes", "2", "--k-max", "1"]) == 2
    err = capsys.readouterr().err
    assert "residual" in err and "x^2 + y^2" in err


def test_conjecture_resource_cap(capsys):
    code = main(
        [
            "conjecture",
            str(DATA / "minors.json"),
            "--primes",
            "2",
            "--k-max",
            "1",
            "--max-pairs",
            "1",
        ]
    )
    assert code == 3
    capsys.readouterr()


def test_witness_plucker_artifact_reloads(tmp_path, capsys):
    out = tmp_path / "cert.json"
    code = main(["witness", "plucker", "--prime", "2", "--power", "1", "-o", str(out)])
    assert code == 0
    capsys.readouterr()
    artifact = json.loads(out.read_text())
    assert artifact["kind"] == "plucker" and artifact["d"] == 3
    cert = MembershipCertificate.from_json(artifact["certificate"])
    assert cert.verified


def test_witness_regular_with_negative_beta(capsys):
    code = main(
        [
            "witness",
            "regular",
            "--relation",
            str(DATA / "minors.json"),
            "--alpha",
            "y",
            "--beta",
            "-x",
            "--prime",
            "2",
        ]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["tasks"][0]["outcome"]["k"] == 1


def test_witness_minors_cross_check(capsys):
    code = main(
        [
            "witness",
            "minors",
            "--relation",
            str(DATA / "minors.json"),
            "--prime",
            "2",
            "--cross-check-gb",
        ]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["tasks"][0]["outcome"]["cross_check_gb"] is True


def test_witness_missing_arguments(capsys):
    assert main(["witness", "regular", "--prime", "2"]) == 2
    assert main(["witness", "minors", "--prime", "2"]) == 2
    capsys.readouterr()


def test_json_reports_are_deterministic(capsys):
    argv = [
        "conjecture",
        str(DATA / "koszul.json"),
        "--primes",
        "2,3",
        "--k-max",
        "1",
        "--expect-found",
    ]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    dump = lambda text: json.dumps(scrub_timing(json.loads(text)), sort_keys=True)
    assert dump(first) == dump(second)


def test_plain_report_has_no_timing(capsys):
    argv = ["verify", "--identity", "minor", "--k", "0..1", "--format", "plain"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    assert first.endswith("overall: VERIFIED\n")


def test_workers_do_not_change_the_report(capsys):
    base = ["verify", "--identity", "cyclic", "--k", "0..3"]
    assert main(base) == 0
    solo = capsys.readouterr().out
    assert main(base + ["--workers", "4"]) == 0
    pooled = capsys.readouterr().out
    dump = lambda text: json.dumps(scrub_timing(json.loads(text)), sort_keys=True)
    # worker count is echoed in the config; compare everything else
    a, b = json.loads(solo), json.loads(pooled)
    a["config"]["options"].pop("workers")
    b["config"]["options"].pop("workers")
    assert json.dumps(scrub_timing(a), sort_keys=True) == json.dumps(
        scrub_timing(b), sort_keys=True
    )


def test_report_battery(capsys):
    assert main(["report", "--format", "plain"]) == 0
    out = capsys.readouterr().out
    assert out.endswith("overall: VERIFIED\n")
    assert "scan hypersurface p=2: VERIFIED" in out


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()
