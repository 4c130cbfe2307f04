import json

from nodal_kit import cli
from nodal_kit.reporting import CheckRecord, Report


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_factorize_passes(capsys):
    code, out, _ = run_cli(
        capsys, "factorize", "--ring", "fp:5", "--gamma", "1", "--delta", "0", "--s", "0", "--t", "0"
    )
    assert code == 0
    assert "PASS mf.construction-identities" in out
    assert out.strip().endswith("checks passed")


def test_fiber_report(capsys):
    code, out, _ = run_cli(capsys, "fiber", "--ring", "q", "--gamma", "3", "--delta", "2")
    assert code == 0
    assert "fiber.decomposition" in out


def test_normal_form_series_literal(capsys):
    code, out, _ = run_cli(
        capsys,
        "normal-form",
        "--ring", "q", "--gamma", "0", "--delta", "-1", "--precision", "6",
        "--series", '[[2,0,"1"],[0,2,"-1"],[3,0,"1"]]',
    )
    assert code == 0
    assert "residual_order_at_least=8" in out


def test_structured_output_schema(capsys):
    code, out, _ = run_cli(
        capsys, "division", "--ring", "fp:7", "--gamma", "3", "--delta", "2", "--format", "structured"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["overall"] == "pass"
    names = [c["name"] for c in doc["checks"]]
    assert names == sorted(names)
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_structured_determinism(capsys):
    args = ["check-all", "--ring", "fp:5", "--gamma", "1", "--delta", "0", "--format", "structured"]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_seed_changes_nothing_structural(capsys):
    args = ["dual", "--ring", "fp:7", "--gamma", "1", "--delta", "0", "--format", "structured"]
    _, out1, _ = run_cli(capsys, *args, "--seed", "1")
    _, out2, _ = run_cli(capsys, *args, "--seed", "2")
    d1, d2 = json.loads(out1), json.loads(out2)
    assert d1["overall"] == d2["overall"] == "pass"


class TestExitCodes:
    def test_bad_ring_is_config_error(self, capsys):
        code, _, err = run_cli(capsys, "factorize", "--ring", "fp:4")
        assert code == 2
        assert "not prime" in err

    def test_degenerate_discriminant_is_config_error(self, capsys):
        code, _, err = run_cli(capsys, "factorize", "--ring", "q", "--gamma", "2", "--delta", "1")
        assert code == 2
        assert "discriminant" in err

    def test_fiber_requires_origin(self, capsys):
        code, _, err = run_cli(capsys, "fiber", "--ring", "q", "--gamma", "3", "--delta", "2", "--s", "1")
        assert code == 2
        assert "s = t = 0" in err

    def test_fiber_requires_split_roots(self, capsys):
        code, _, err = run_cli(capsys, "fiber", "--ring", "q", "--gamma", "0", "--delta", "1")
        assert code == 2
        assert "split" in err

    def test_bad_series_literal(self, capsys):
        code, _, err = run_cli(
            capsys, "normal-form", "--ring", "q", "--gamma", "0", "--delta", "-1",
            "--series", '[[2,0,"1"]]',
        )
        assert code == 2
        assert "degree-2" in err

    def test_bad_precision(self, capsys):
        code, _, err = run_cli(capsys, "division", "--precision", "0")
        assert code == 2
        assert "precision" in err

    def test_failing_check_maps_to_exit_1(self, capsys, monkeypatch):
        failing = Report(
            subcommand="factorize",
            config={},
            records=[CheckRecord(name="x", params={}, passed=False)],
        )
        monkeypatch.setattr(cli, "run", lambda cfg: failing)
        code, out, _ = run_cli(capsys, "factorize")
        assert code == 1
        assert "FAIL" in out


def test_check_all_covers_all_modules(capsys):
    code, out, _ = run_cli(
        capsys, "check-all", "--ring", "fp:5", "--gamma", "1", "--delta", "0",
        "--format", "structured",
    )
    assert code == 0
    doc = json.loads(out)
    prefixes = {c["name"].split(".")[0] for c in doc["checks"]}
    assert {"rings", "series", "nf", "dp", "mf", "dual", "exactness", "charts", "fiber"} <= prefixes


def test_check_all_over_rationals(capsys):
    code, out, _ = run_cli(capsys, "check-all", "--ring", "q", "--gamma", "3", "--delta", "2")
    assert code == 0


def test_truncated_ring_skips_field_only_suites(capsys):
    code, out, _ = run_cli(
        capsys, "dual", "--ring", "loc:q:s,t:3", "--gamma", "3", "--delta", "2",
        "--s", "s", "--t", "t",
    )
    assert code == 0
    assert "dual.applicability" in out


def test_empty_report_is_vacuously_passing():
    rep = Report(subcommand="division", config={}, records=[])
    assert rep.overall_pass
    assert rep.to_structured()["overall"] == "pass"
    assert rep.to_structured()["checks"] == []


def test_report_counterexample_rendering():
    rep = Report(
        subcommand="dual",
        config={"ring": "q"},
        records=[
            CheckRecord(name="b", params={}, passed=True, details={"dim": 3}),
            CheckRecord(name="a", params={}, passed=False, counterexample="witness"),
        ],
    )
    text = rep.to_text()
    assert text.index("FAIL a") < text.index("PASS b")  # sorted by name
    assert "counterexample: witness" in text
    doc = rep.to_structured()
    assert doc["overall"] == "fail"
    assert doc["checks"][0]["counterexample"] == "witness"
