import hashlib
import json
import subprocess
import sys

import pytest

from cmverify.cli import run
from cmverify.specfile import resolve_spec_path


def out_of(capsys):
    captured = capsys.readouterr()
    return captured.out, captured.err


class TestExitCodes:
    def test_clean_suite_exits_zero(self, capsys):
        assert run(["check", "axioms", "sphere3"]) == 0

    def test_failing_suite_exits_two(self, capsys):
        assert run(["check", "identities", "example3d"]) == 2

    def test_needs_input_does_not_fail(self, capsys):
        assert run(["check", "identities", "sphere3"]) == 0

    def test_solve_phi_on_example_is_clean(self, capsys):
        assert run(["solve", "recurrence", "--kind", "phi",
                    "example3d"]) == 0

    def test_degenerate_solve_is_clean(self, capsys):
        assert run(["solve", "recurrence", "flat3"]) == 0

    def test_pipeline_audit_fails_on_example(self, capsys):
        assert run(["pipeline", "example3d"]) == 2

    def test_pipeline_unavailable_is_clean(self, capsys):
        assert run(["pipeline", "sphere3"]) == 0

    def test_all_collects_failures(self, capsys):
        assert run(["all", "example3d"]) == 2

    def test_dependent_frame_is_an_error(self, capsys):
        assert run(["check", "axioms", "example3d-vector"]) == 1
        _, err = out_of(capsys)
        assert "determinant is identically zero" in err

    def test_missing_file_is_an_error(self, capsys):
        assert run(["check", "axioms", "nope"]) == 1
        _, err = out_of(capsys)
        assert "sphere3" in err  # bundled names are listed

    def test_bad_override_expression(self, capsys):
        assert run(["check", "identities", "sphere3", "--mu", "2 +"]) == 1

    def test_unknown_symbol_in_override(self, capsys):
        assert run(["check", "identities", "sphere3", "--mu", "w"]) == 1

    def test_usage_error_exits_one(self, capsys):
        with pytest.raises(SystemExit) as info:
            run(["check", "nonsense", "sphere3"])
        assert info.value.code == 1


def test_negative_overrides_survive_option_parsing(capsys):
    assert run(["check", "identities", "example3d",
                "--k", "-1/y", "--mu", "-1/y"]) == 2
    out, _ = out_of(capsys)
    assert "using declared k = -1/y, mu = -1/y" in out


def test_deta_factor_one_flips_sphere_verdict(capsys):
    assert run(["check", "axioms", "sphere3", "--deta-factor", "one"]) == 2


def test_text_report_shape(capsys):
    run(["check", "axioms", "sphere3"])
    out, err = out_of(capsys)
    lines = out.splitlines()
    assert lines[0].startswith("manifold file: ")
    assert "(sha256 " in lines[0]
    assert lines[-1].startswith("summary: ")
    assert "[       PASS] I2.1" in out
    assert err == ""


def test_solve_text_report_has_solution_block(capsys):
    run(["solve", "recurrence", "--kind", "phi", "example3d"])
    out, _ = out_of(capsys)
    assert "A = (-2/y, 0, 0)" in out
    assert "B = (0, 0, 0)" in out
    assert "k = -1/y" in out
    assert "classification: φ-recurrent, not φ-symmetric" in out


class TestJson:
    def doc(self, capsys, argv):
        run(argv)
        out, _ = out_of(capsys)
        return json.loads(out)

    def test_document_shape(self, capsys):
        doc = self.doc(capsys, ["all", "example3d", "--format", "json"])
        assert set(doc) == {"version", "spec_hash", "checks", "solutions",
                            "classification"}
        assert doc["version"] == "0.1.0"
        first = doc["checks"][0]
        assert set(first) == {"id", "verdict", "residual_symbolic",
                              "residual_sampled_max", "notes"}

    def test_spec_hash_is_file_sha256(self, capsys):
        doc = self.doc(capsys, ["check", "axioms", "sphere3",
                                "--format", "json"])
        digest = hashlib.sha256(
            resolve_spec_path("sphere3").read_bytes()).hexdigest()
        assert doc["spec_hash"] == digest

    def test_solutions_and_classification(self, capsys):
        doc = self.doc(capsys, ["solve", "recurrence", "--kind", "phi",
                                "example3d", "--format", "json"])
        assert doc["solutions"] == {"A": ["-2/y", "0", "0"],
                                    "B": ["0", "0", "0"],
                                    "k": "-1/y", "mu": "-1/y"}
        assert doc["classification"] == "φ-recurrent, not φ-symmetric"

    def test_indeterminate_values_serialize_as_null(self, capsys):
        doc = self.doc(capsys, ["check", "identities", "sphere3",
                                "--format", "json"])
        assert doc["solutions"]["mu"] is None
        assert doc["solutions"]["A"] is None

    def test_byte_identical_reruns(self, capsys):
        run(["all", "example3d", "--format", "json"])
        first, _ = out_of(capsys)
        run(["all", "example3d", "--format", "json"])
        second, _ = out_of(capsys)
        assert first == second
        run(["all", "example3d", "--format", "json", "--seed", "7"])
        third, _ = out_of(capsys)
        assert third != first  # sampling is seed-controlled

    def test_verdicts_by_id(self, capsys):
        doc = self.doc(capsys, ["all", "example3d", "--format", "json"])
        verdicts = {}
        for c in doc["checks"]:
            verdicts.setdefault(c["id"], []).append(c["verdict"])
        assert verdicts["I2.1"] == ["fail"]
        assert verdicts["I2.4"] == ["fail", "fail"]  # both h variants
        assert verdicts["REC-FULL"] == ["pass"]
        assert verdicts["PIPE-5.8"] == ["fail"]
        assert "T4.17" in verdicts


def test_console_script_help():
    proc = subprocess.run([sys.executable, "-m", "cmverify.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "check" in proc.stdout and "pipeline" in proc.stdout
