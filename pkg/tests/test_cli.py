import json

import pytest

from lodeg.cli import (
    EXIT_INPUT,
    EXIT_OK,
    build_parser,
    main,
)

from conftest import data_path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert err == ""
    return code, json.loads(out)


class TestReports:
    def test_bidegrees_sphere(self, capsys):
        code, report = run_json(capsys, "bidegrees", data_path("sphere.json"))
        assert code == EXIT_OK
        assert report["command"] == "bidegrees"
        assert report["results"]["bidegrees"]["values"] == [2, 2, 2]
        assert report["results"]["bidegrees"]["kind"] == "bidegree"
        assert report["input"]["variables"] == ["x1", "x2", "x3"]
        assert len(report["input"]["sha256"]) == 64
        assert report["config"]["seed"] == 0
        assert report["config"]["trials"] == 2
        assert "timings" in report

    def test_lodeg_with_covector(self, capsys):
        code, report = run_json(
            capsys, "lodeg", data_path("sphere.json"), "--covector", "10,5,17"
        )
        assert code == EXIT_OK
        assert report["results"]["lo_degree"] == 2
        assert any("explicit covector" in w for w in report["warnings"])

    def test_sectional(self, capsys):
        code, report = run_json(capsys, "sectional", data_path("sphere.json"))
        assert code == EXIT_OK
        assert report["results"]["sectional"]["values"] == [2, 2, 2]

    def test_polar(self, capsys):
        code, report = run_json(capsys, "polar", data_path("sphere.json"))
        assert code == EXIT_OK
        assert report["results"]["polar"]["values"] == [2, 2, 2]

    def test_chern_mather(self, capsys):
        code, report = run_json(
            capsys, "chern_mather", data_path("cubic_binomial.json")
        )
        assert code == EXIT_OK
        assert report["results"]["bidegrees"]["values"] == [1, 4, 5, 3]
        assert report["results"]["chern_mather"]["values"] == [1, 3, 4, 3]

    def test_euler_obstruction(self, capsys):
        code, report = run_json(
            capsys, "euler_obstruction", data_path("quadric_cone.json")
        )
        assert code == EXIT_OK
        assert report["results"]["euler_obstruction"] == 0

    def test_dual_infinity_false(self, capsys):
        code, report = run_json(capsys, "dual_infinity", data_path("sphere.json"))
        assert code == EXIT_OK
        assert report["results"]["dual_contains_hyperplane_at_infinity"] is False

    def test_correspondence_worked_example(self, capsys):
        code, report = run_json(
            capsys,
            "correspondence",
            data_path("sphere.json"),
            "--i", "1",
            "--covector", "10,5,17",
            "--slice", "x3-6",
        )
        assert code == EXIT_OK
        body = report["results"]["correspondence"]
        assert body["count_critical"] == 2
        assert body["count_conormal"] == 2
        assert body["generic"] is True

    def test_verify_passes(self, capsys):
        code, report = run_json(capsys, "verify", data_path("sphere.json"))
        assert code == EXIT_OK
        assert report["results"]["all_passed"] is True
        identities = [r["identity"] for r in report["results"]["reports"]]
        assert len(identities) == len(set(identities)) == 3


class TestDeterminism:
    def test_reports_are_byte_identical_without_timings(self, capsys):
        args = ("bidegrees", data_path("space_curve.json"), "--no-timings")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second
        assert "timings" not in json.loads(first)

    def test_prime_and_trials_flags(self, capsys):
        code, report = run_json(
            capsys,
            "bidegrees",
            data_path("sphere.json"),
            "--prime", "2147483647",
            "--trials", "1",
        )
        assert code == EXIT_OK
        assert report["config"]["primes"] == [2147483647]
        assert report["config"]["trials"] == 1
        assert report["results"]["bidegrees"]["values"] == [2, 2, 2]


class TestTextFormat:
    def test_bidegrees_text(self, capsys):
        code, out, err = run_cli(
            capsys, "bidegrees", data_path("sphere.json"), "--format", "text"
        )
        assert code == EXIT_OK
        assert "bidegrees: (2, 2, 2)" in out
        assert "command: bidegrees" in out

    def test_verify_text_lists_identities(self, capsys):
        code, out, err = run_cli(
            capsys, "verify", data_path("quadric_cone.json"), "--format", "text"
        )
        assert code == EXIT_OK
        assert out.count("[pass]") == 4


class TestFailures:
    def test_missing_file(self, capsys):
        code, out, err = run_cli(capsys, "bidegrees", "no_such_file.json")
        assert code == EXIT_INPUT
        assert "input error" in err

    def test_invalid_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run_cli(capsys, "bidegrees", str(bad))
        assert code == EXIT_INPUT
        assert "invalid JSON" in err

    def test_bad_polynomial(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"variables": ["x"], "polynomials": ["x +* 1"]}))
        code, _, err = run_cli(capsys, "bidegrees", str(bad))
        assert code == EXIT_INPUT
        assert "parse error" in err

    def test_false_homogeneity_claim(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(
            json.dumps(
                {
                    "variables": ["x", "y"],
                    "polynomials": ["x^2 + y - 1"],
                    "homogeneous": True,
                }
            )
        )
        code, _, err = run_cli(capsys, "bidegrees", str(bad))
        assert code == EXIT_INPUT
        assert "declared homogeneous" in err

    def test_euler_obstruction_needs_cone(self, capsys):
        code, _, err = run_cli(
            capsys, "euler_obstruction", data_path("sphere.json")
        )
        assert code == EXIT_INPUT
        assert "homogeneous" in err

    def test_covector_width(self, capsys):
        code, _, err = run_cli(
            capsys, "lodeg", data_path("sphere.json"), "--covector", "1,2"
        )
        assert code == EXIT_INPUT

    def test_nonaffine_slice_form(self, capsys):
        code, _, err = run_cli(
            capsys,
            "correspondence",
            data_path("sphere.json"),
            "--i", "1",
            "--slice", "x3^2-6",
        )
        assert code == EXIT_INPUT
        assert "not affine" in err


class TestParser:
    def test_commands_registered(self):
        parser = build_parser()
        args = parser.parse_args(["bidegrees", "foo.json", "--seed", "4"])
        assert args.command == "bidegrees"
        assert args.seed == 4

    def test_correspondence_requires_i(self, capsys):
        parser = build_parser()
        with pytest.raises(SystemExit):
            parser.parse_args(["correspondence", "foo.json"])
        capsys.readouterr()
