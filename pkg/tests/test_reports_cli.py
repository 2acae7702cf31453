import json
from pathlib import Path

import pytest

from config import config
from core.commands import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, Command, run
from core.reports import RunReport, report_schema
from main import main

SPECS = Path(__file__).resolve().parent.parent / "specs"
M2Z2 = str(SPECS / "m2z2.spec")
M3Z3 = str(SPECS / "m3z3.spec")
M11E = str(SPECS / "m11e.spec")
WITNESS = "x1[g]*x2[g] - x2[g]*x1[g]"


def run_json(capsys, *argv):
    code = main([*argv, "--json"])
    report = json.loads(capsys.readouterr().out)
    assert report["exit_code"] == code
    return code, report


class TestVerbs:
    def test_check_central_neither(self, capsys):
        code, report = run_json(capsys, "check-central", WITNESS, "--algebra", M2Z2)
        assert code == EXIT_OK
        assert report["status"] == "Neither"
        evidence = report["verdict"]["evidence"]
        assert evidence["against"] is not None
        assert report["polynomial"] == WITNESS

    def test_check_identity(self, capsys):
        code, report = run_json(capsys, "check-identity", "[x1, x2]", "--algebra", M2Z2)
        assert code == EXIT_OK
        assert report["status"] == "Identity"

    def test_check_identity_reports_stability(self, capsys):
        code, report = run_json(capsys, "check-identity", "x1[g]*x2[g] + x2[g]*x1[g]", "--algebra", M11E)
        assert report["status"] == "NotIdentity"
        assert report["details"]["stable_at_budget"] == 8
        assert report["details"]["stable"]

    def test_classify_fails_with_certificate(self, capsys):
        code, report = run_json(capsys, "classify", "--algebra", M2Z2)
        assert code == EXIT_OK
        assert report["status"] == "Fails"
        cert = report["certificate"]
        assert cert["P"] == ["1", "-1"]
        assert cert["k"] == 2
        assert cert["lambda"] == {"e": "1", "(1 2)": "-1"}
        assert cert["checks"]["product of 2 copies"] == "Central"

    def test_classify_depends_on_conductor(self, capsys):
        code, report = run_json(capsys, "classify", "--algebra", M3Z3)
        assert report["status"] == "Holds"
        assert report["certificate"] is None
        code, report = run_json(capsys, "classify", "--algebra", M3Z3, "--conductor", "3")
        assert report["status"] == "Fails"
        assert report["conductor"] == 3
        assert report["certificate"]["P"] == ["1", "z3^1", "-1 - z3^1"]
        assert report["certificate"]["k"] == 3

    def test_classify_repeated_entries_unsupported(self, capsys):
        code, report = run_json(capsys, "classify", "--algebra", "kind = MnF; n = 2; group = Z2; tuple = e, e")
        assert code == EXIT_INPUT
        assert report["status"] == "Unsupported"

    def test_budget_exceeded(self, capsys):
        code, report = run_json(capsys, "check-central", "x1[g]*x2[g]", "--algebra", M11E, "--budget", "2")
        assert code == EXIT_BUDGET
        assert report["status"] == "BudgetExceeded"
        assert report["details"] == {"needed": 3, "budget": 2}

    def test_eval(self, capsys):
        code, report = run_json(capsys, "eval", "x1[g]*x2[g]", "--algebra", M2Z2, "--at", "x1=E12,x2=E21")
        assert code == EXIT_OK
        assert report["details"]["value"] == "E11"
        assert report["details"]["central"] is False

    def test_eval_rejects_wrong_degree(self, capsys):
        code, report = run_json(capsys, "eval", "x1[g]", "--algebra", M2Z2, "--at", "x1=E11")
        assert code == EXIT_INPUT

    def test_transform_star(self, capsys):
        code, report = run_json(capsys, "transform", WITNESS, "--algebra", M2Z2)
        assert report["details"]["result"] == "x1[g]*x2[g] + x2[g]*x1[g]"

    def test_transform_h_needs_map(self, capsys):
        code, report = run_json(capsys, "transform", WITNESS, "--mode", "h")
        assert code == EXIT_INPUT
        code, report = run_json(capsys, "transform", WITNESS, "--mode", "h", "--h", "x1=g,x2=g")
        assert report["status"] == "Transformed"

    def test_witness(self, capsys):
        code, report = run_json(capsys, "witness", "--algebra", M2Z2)
        assert report["status"] == "Built"
        assert report["details"]["value_at_cycle"] == "E11 - E22"
        assert report["details"]["value_line"] == "E11 - E22"

    def test_witness_needs_failure_or_diagonal(self, capsys):
        code, report = run_json(capsys, "witness", "--algebra", M3Z3)
        assert code == EXIT_INPUT
        code, report = run_json(capsys, "witness", "--algebra", M3Z3, "--conductor", "3", "--p", "1, z3^1, z3^2")
        assert report["status"] == "Built"
        assert report["details"]["lambda"] is not None

    def test_aut_group(self, capsys):
        code, report = run_json(capsys, "aut-group", "--algebra", M3Z3)
        assert report["status"] == "CrossedProduct"
        assert report["details"]["order"] == 3
        assert report["details"]["substitutions_in_H"] == report["details"]["nonzero_substitutions"]

    def test_envelope_check(self, capsys):
        code, report = run_json(capsys, "envelope-check", WITNESS, "[x1, x2]", "--algebra", M2Z2, "--budget", "4")
        assert code == EXIT_OK
        assert report["status"] == "Agree"
        assert report["details"]["envelope"] == "M_{1,1}(E)"
        assert len(report["details"]["transfers"]) == 2

    def test_primeness_scan(self, capsys):
        code, report = run_json(capsys, "primeness-scan", "--algebra", M2Z2, "--maxdeg", "2", "--coeffs", "1,-1")
        assert code == EXIT_OK
        assert report["status"] == "Consistent"
        assert report["details"]["expected"] == "Fails"
        assert report["details"]["counterexample_count"] >= 1

    def test_mne_check(self, capsys):
        code, report = run_json(capsys, "mne-check", "--algebra", str(SPECS / "m2z2e.spec"))
        assert code == EXIT_OK
        assert report["details"]["matrix_grading"] == "Fails"
        assert report["details"]["witness_on_MnE"] == "Neither"

    def test_mne_check_needs_mne(self, capsys):
        code, report = run_json(capsys, "mne-check", "--algebra", M2Z2)
        assert code == EXIT_INPUT

    @pytest.mark.parametrize("realization, minimal", [("pauli:m=2", True), ("grassmann:budget=4", True),
                                                      ("clock:m=2", False)])
    def test_regular_check(self, capsys, realization, minimal):
        code, report = run_json(capsys, "regular-check", "--realization", realization)
        assert code == EXIT_OK
        assert report["status"] == "Regular"
        assert report["details"]["minimal"] is minimal
        assert report["details"]["P1_failures"] == []

    def test_regular_check_applies_configured_conductor(self, capsys, monkeypatch):
        monkeypatch.setattr(config.field, "conductor", 1)
        code, report = run_json(capsys, "regular-check", "--realization", "pauli:m=3")
        assert code == EXIT_INPUT
        assert report["conductor"] == 1
        assert "primitive 3-th root" in report["error"]
        code, report = run_json(capsys, "regular-check", "--realization", "pauli:m=3", "--conductor", "3")
        assert code == EXIT_OK
        assert report["details"]["center_matches_radical"]

    def test_ordinary_centrality(self, capsys):
        code, report = run_json(capsys, "check-central", "[x1, x2]^2", "--ordinary", "--companion", "[x1, x2]^2",
                                "--algebra", "kind = MnF; n = 2")
        assert report["status"] == "Central"
        assert report["details"]["product"] == "Central"

    def test_suite(self, capsys):
        code, report = run_json(capsys, "suite", "--cases", "3", "--seed", "1")
        assert code == EXIT_OK
        assert report["status"] == "Passed"

    def test_schema(self, capsys):
        code, report = run_json(capsys, "schema")
        assert "exit_code" in report["details"]["schema"]["properties"]


class TestInputErrors:
    @pytest.mark.parametrize("argv", [
        ["check-central", "x1[h]", "--algebra", M2Z2],
        ["check-central", "x1 + * x2", "--algebra", M2Z2],
        ["check-identity", "--algebra", M2Z2],
        ["classify"],
        ["classify", "--algebra", M2Z2, "--conductor", "0"],
        ["classify", "--algebra", "kind = MnF; n = 2; group = S3"],
        ["classify", "--algebra", str(SPECS / "missing.spec")],
    ])
    def test_exit_code_two(self, capsys, argv):
        code, report = run_json(capsys, *argv)
        assert code == EXIT_INPUT
        assert report["error"]

    def test_unknown_verb(self):
        code, report = run(Command(verb="frobnicate"))
        assert code == EXIT_INPUT
        assert "unknown verb" in report.error


class TestReports:
    def test_text_output(self, capsys):
        assert main(["classify", "--algebra", M2Z2]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("classify: Fails")
        assert f"witness f = {WITNESS}, P = diag(1, -1), k = 2" in out

    def test_json_round_trip(self):
        code, report = run(Command(verb="classify", algebra=M2Z2))
        restored = RunReport.model_validate(json.loads(report.to_json()))
        assert restored.certificate.lambda_ == report.certificate.lambda_
        assert restored.status == "Fails"

    def test_schema_lists_alias(self):
        schema = report_schema()
        assert "lambda" in schema["$defs"]["CertificateReport"]["properties"]
