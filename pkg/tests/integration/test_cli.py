"""Integration tests for the command-line driver."""

import argparse
import json
from fractions import Fraction
from pathlib import Path

import pytest

from qvwp import EvalPoint, HeckeParams, Phi, eigenvalue, specialize_R, theta
from qvwp.cli import (
    EXIT_EVALUATION,
    EXIT_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    FUNCTIONS,
    main,
    parse_complex,
    parse_real,
    parse_step,
)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep QVWP_* variables of the host out of the tests."""
    for name in ("QVWP_SEED", "QVWP_TOL", "QVWP_POINTS", "QVWP_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


def _json_value(text: str) -> complex:
    data = json.loads(text)
    return complex(data["value"]["re"], data["value"]["im"])


class TestParsers:
    """Test argument parsers."""

    def test_parse_complex(self) -> None:
        """i and j both mark the imaginary unit."""
        assert parse_complex("1+2i") == 1 + 2j
        assert parse_complex("-0.5-3j") == -0.5 - 3j
        assert parse_complex("2i") == 2j
        assert parse_complex("0.25") == 0.25

    def test_parse_complex_rejects_expressions(self) -> None:
        """Only numeric literals are accepted."""
        with pytest.raises(argparse.ArgumentTypeError, match="not a complex number"):
            parse_complex("-(kappa+lambda)")

    def test_parse_complex_rejects_overflow(self) -> None:
        """Literals that overflow to infinity are rejected."""
        with pytest.raises(argparse.ArgumentTypeError, match="not a finite number"):
            parse_complex("1e400")
        with pytest.raises(argparse.ArgumentTypeError, match="not a finite number"):
            parse_real("-1e999")

    def test_parse_step(self) -> None:
        """Steps are positive rationals."""
        assert parse_step("1/2") == Fraction(1, 2)
        with pytest.raises(argparse.ArgumentTypeError, match="s must be positive"):
            parse_step("0")


class TestList:
    """Test qvwp list."""

    def test_lists_functions_and_identities(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Every function and all 22 identities are listed."""
        assert main(["list"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len([line for line in lines if line.startswith("check_")]) == 22
        assert len(lines) == 22 + len(FUNCTIONS)
        assert any(line.startswith("check_eigen_phi — ") for line in lines)


class TestEval:
    """Test qvwp eval."""

    def test_constant_polynomial(self, capsys: pytest.CaptureFixture[str]) -> None:
        """P_0 = 1."""
        code = main(["eval", "P_n", "--n", "0", "--x", "0.3", "--format", "json"])
        assert code == EXIT_OK
        assert _json_value(capsys.readouterr().out) == 1

    def test_theta_json(self, capsys: pytest.CaptureFixture[str]) -> None:
        """JSON output carries the value and diagnostics."""
        code = main(["eval", "theta", "--u", "0.5+0.2i", "--q", "0.4", "--format", "json"])
        assert code == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["function"] == "theta"
        assert data["diagnostics"]["converged"] is True
        expected = theta(0.5 + 0.2j, 0.4).value
        assert complex(data["value"]["re"], data["value"]["im"]) == pytest.approx(expected)

    def test_table_output(self, capsys: pytest.CaptureFixture[str]) -> None:
        """The default table shows one field per line."""
        assert main(["eval", "W", "--kappa", "0.1", "--x", "0.2", "--z", "0.3"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("function       W\n")
        assert "converged      true" in out

    def test_negative_complex_with_equals(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Values starting with '-' are passed as --x=VALUE."""
        assert main(["eval", "St", "--x=-1+2i", "--q", "0.3"]) == EXIT_OK

    def test_apply_d_is_eigenvalue(self, capsys: pytest.CaptureFixture[str]) -> None:
        """apply_D of Phi equals the eigenvalue times Phi."""
        args = ["--kappa", "0.137", "--lambda", "-0.213", "--upsilon", "0.291"]
        args += ["--varsigma", "0.117"]
        args += ["--q", "0.45", "--x", "0.3+0.2i", "--z", "0.25-0.4i", "--format", "json"]
        assert main(["eval", "apply_D", *args]) == EXIT_OK
        value = _json_value(capsys.readouterr().out)
        params = HeckeParams(0.137, -0.213, 0.291, 0.117, q=0.45)
        pt = EvalPoint(0.3 + 0.2j, 0.25 - 0.4j)
        expected = eigenvalue(pt.z, params).value * Phi(pt, params).value
        assert value == pytest.approx(expected, rel=1e-8)

    def test_apply_l_on_rahman_phi(self, capsys: pytest.CaptureFixture[str]) -> None:
        """apply_L of Phi_R equals (q**(z/2) + q**(-z/2)) Phi_R."""
        args = ["--kappa", "0.2", "--lambda", "-0.15", "--q", "0.5", "--s", "2"]
        args += ["--x", "0.4+0.1i", "--z", "0.3+0.5i", "--format", "json"]
        assert main(["eval", "apply_L", *args]) == EXIT_OK
        value = _json_value(capsys.readouterr().out)
        z = 0.3 + 0.5j
        phi_r = Phi(EvalPoint(0.4 + 0.1j, z / 2), specialize_R(0.2, -0.15, 0.5, 2)).value
        mu = 0.5 ** (z / 2) + 0.5 ** (-z / 2)
        assert value == pytest.approx(mu * phi_r, rel=1e-8)

    def test_unknown_function(self) -> None:
        """Unknown functions are usage errors."""
        assert main(["eval", "bogus"]) == EXIT_USAGE

    def test_symbolic_parameter(self) -> None:
        """Parameters must be numeric literals."""
        assert main(["eval", "W", "--x=-(kappa+lambda)"]) == EXIT_USAGE
        assert main(["eval", "Phi", "--kappa", "-(kappa+lambda)"]) == EXIT_USAGE

    def test_missing_input(self, capsys: pytest.CaptureFixture[str]) -> None:
        """theta without --u is a usage error."""
        assert main(["eval", "theta"]) == EXIT_USAGE
        assert "needs --u" in capsys.readouterr().err

    def test_invalid_route(self) -> None:
        """Unknown routes are usage errors."""
        assert main(["eval", "Psi", "--x", "0.2", "--route", "fast"]) == EXIT_USAGE

    def test_evaluation_error(self, capsys: pytest.CaptureFixture[str]) -> None:
        """theta at u = 0 is an evaluation error."""
        assert main(["eval", "theta", "--u", "0"]) == EXIT_EVALUATION
        assert "evaluation error (domain)" in capsys.readouterr().err

    def test_pole(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Phi where St(x) vanishes reports the pole."""
        assert main(["eval", "Phi", "--x=-1", "--z", "0.2"]) == EXIT_EVALUATION
        assert "evaluation error (pole)" in capsys.readouterr().err

    def test_overflowing_argument(self) -> None:
        """Inputs that overflow to infinity are usage errors, not tracebacks."""
        assert main(["eval", "W", "--x=1e400"]) == EXIT_USAGE
        assert main(["eval", "Phi", "--z", "1e400i"]) == EXIT_USAGE
        assert main(["eval", "Phi", "--kappa", "1e999"]) == EXIT_USAGE

    def test_value_error_is_usage(
        self, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """A ValueError raised while building the inputs maps to exit code 2."""

        def rejecting(*args: object) -> None:
            raise ValueError("EvalPoint components must be finite")

        monkeypatch.setattr("qvwp.cli.evaluate_function", rejecting)
        assert main(["eval", "W", "--x", "0.2"]) == EXIT_USAGE
        assert "EvalPoint components must be finite" in capsys.readouterr().err


class TestCheck:
    """Test qvwp check."""

    def test_single_identity(self, capsys: pytest.CaptureFixture[str]) -> None:
        """A passing identity exits 0 and prints its summary."""
        assert main(["check", "W_recurrence", "--n-points", "3", "--seed", "1"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("PASS W_recurrence: ")

    def test_singh_degrees(self, capsys: pytest.CaptureFixture[str]) -> None:
        """--n sets the top degree of the terminating checks."""
        assert main(["check", "singh", "--n", "6", "--n-points", "7"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("PASS singh: ")

    def test_check_prefix_accepted(self, capsys: pytest.CaptureFixture[str]) -> None:
        """check_ names work on the command line."""
        assert main(["check", "check_W_recurrence", "--n-points", "2"]) == EXIT_OK

    def test_json_report(self, capsys: pytest.CaptureFixture[str]) -> None:
        """JSON output is a list of reports."""
        code = main(["check", "c_periodicity", "--n-points", "3", "--format", "json"])
        assert code == EXIT_OK
        reports = json.loads(capsys.readouterr().out)
        assert reports[0]["identity_id"] == "c_periodicity"
        assert reports[0]["points_requested"] == 3
        assert set(reports[0]["worst_point"]["params"]) == {
            "kappa",
            "lambda",
            "upsilon",
            "varsigma",
            "q",
            "s",
        }

    def test_failing_identity(self, capsys: pytest.CaptureFixture[str]) -> None:
        """An impossible tolerance makes the check fail with exit code 1."""
        code = main(["check", "c_periodicity", "--n-points", "3", "--tol", "1e-300"])
        assert code == EXIT_FAILED
        assert capsys.readouterr().out.startswith("FAIL c_periodicity")

    def test_unknown_identity(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Unknown identities are usage errors."""
        assert main(["check", "bogus"]) == EXIT_USAGE
        assert "Unknown identity 'bogus'" in capsys.readouterr().err

    def test_concurrent(self, capsys: pytest.CaptureFixture[str]) -> None:
        """--concurrent gives the same report."""
        argv = ["check", "W_recurrence", "--n-points", "3", "--format", "json"]
        assert main(argv) == EXIT_OK
        sequential = json.loads(capsys.readouterr().out)
        assert main([*argv, "--concurrent"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out) == sequential

    @pytest.mark.slow
    def test_full_suite_passes(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Every identity passes at seed 42 with 100 points."""
        code = main(["check", "all", "--seed", "42", "--n-points", "100"])
        out = capsys.readouterr().out
        assert code == EXIT_OK, out
        assert len(out.splitlines()) == 22
        assert all(line.startswith("PASS ") for line in out.splitlines())

    @pytest.mark.slow
    def test_json_is_byte_identical(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Two runs with the same seed print the same JSON bytes."""
        argv = ["check", "all", "--seed", "42", "--n-points", "10", "--format", "json"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first
        assert json.loads(first)[0]["seed"] == 42


class TestConfiguration:
    """Test flag, environment and config file layering."""

    def _points(self, capsys: pytest.CaptureFixture[str], argv: list[str]) -> int:
        assert main(["check", "W_recurrence", "--format", "json", *argv]) == EXIT_OK
        return int(json.loads(capsys.readouterr().out)[0]["points_requested"])

    def test_environment(
        self, capsys: pytest.CaptureFixture[str], monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """QVWP_POINTS applies when no flag is given."""
        monkeypatch.setenv("QVWP_POINTS", "2")
        assert self._points(capsys, []) == 2

    def test_flag_beats_environment(
        self, capsys: pytest.CaptureFixture[str], monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """Flags override environment variables."""
        monkeypatch.setenv("QVWP_POINTS", "2")
        assert self._points(capsys, ["--n-points", "3"]) == 3

    def test_config_file(self, capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
        """The JSON config file fills unset values."""
        path = tmp_path / "qvwp.json"
        path.write_text(json.dumps({"n_points": 4, "seed": 9}), encoding="utf-8")
        assert self._points(capsys, ["--config", str(path)]) == 4

    def test_environment_beats_config_file(
        self,
        capsys: pytest.CaptureFixture[str],
        monkeypatch: pytest.MonkeyPatch,
        tmp_path: Path,
    ) -> None:
        """Environment variables override the config file."""
        path = tmp_path / "qvwp.json"
        path.write_text(json.dumps({"n_points": 4}), encoding="utf-8")
        monkeypatch.setenv("QVWP_POINTS", "2")
        assert self._points(capsys, ["--config", str(path)]) == 2

    def test_unknown_config_key(self, tmp_path: Path) -> None:
        """Unknown keys in the config file are usage errors."""
        path = tmp_path / "qvwp.json"
        path.write_text(json.dumps({"points": 4}), encoding="utf-8")
        assert main(["check", "W_recurrence", "--config", str(path)]) == EXIT_USAGE

    def test_missing_config_file(self, tmp_path: Path) -> None:
        """An unreadable config file is a usage error."""
        missing = str(tmp_path / "absent.json")
        assert main(["check", "W_recurrence", "--config", missing]) == EXIT_USAGE

    def test_invalid_environment_value(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Non-numeric environment values are usage errors."""
        monkeypatch.setenv("QVWP_SEED", "abc")
        assert main(["check", "W_recurrence"]) == EXIT_USAGE

    def test_invalid_policy_value(self) -> None:
        """Values rejected by SamplePolicy are usage errors."""
        assert main(["check", "W_recurrence", "--n-points", "0"]) == EXIT_USAGE
