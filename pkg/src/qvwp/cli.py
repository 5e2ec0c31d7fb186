"""Command-line driver: ``qvwp eval``, ``qvwp check`` and ``qvwp list``.

Exit codes: 0 success, 1 failed identity, 2 usage or configuration error,
3 evaluation error. Reports and values go to stdout, diagnostics to stderr.
"""

import argparse
import asyncio
import cmath
import json
import math
import os
import re
import sys
from collections.abc import Mapping, Sequence
from fractions import Fraction
from typing import Any

from .api import run_identities, run_identities_async
from .awcore import HeckeParams, apply_D, apply_L, specialize_J, specialize_R
from .config import LoggingConfig, RunConfig, SamplePolicy, Tolerance
from .eigenfun import (
    E_aw,
    Phi,
    Psi,
    St,
    St_dual,
    W_fn,
    aw_polynomial,
    cfun,
    phi_tilde,
)
from .exceptions import ConfigError, QVWPError
from .idcheck.registry import REGISTRY
from .logging import setup_logger
from .qcore import phi_series, qpochhammer_finite, qpochhammer_inf, theta, w8_7
from .types import ERoute, EvalPoint, OutputFormat, PsiRoute, SeriesValue

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_EVALUATION = 3

FUNCTIONS: dict[str, str] = {
    "theta": "modified theta function theta(u; q)  [--u --q]",
    "pochhammer": "(a; q)_n, or (a; q)_inf without --n  [--a --q --n]",
    "phi_series": "basic hypergeometric series  [--num --den --q --z]",
    "w8_7": "very-well-poised 8W7  [--a0 --params --q --z]",
    "W": "elementary factor W(x, z)",
    "St": "singular term St(x)",
    "St_dual": "dual singular term St^d(z)",
    "Psi": "holomorphic part Psi(x, z)  [--route auto|w87|phi43]",
    "Phi": "asymptotically free eigenfunction Phi(x, z)",
    "Phi_tilde": "renormalized eigenfunction c(x, z) Phi(x, z)",
    "E": "Askey-Wilson function E(x, z)  [--route auto|series|expansion]",
    "c": "normalized c-function c(x, z)",
    "P_n": "normalized Askey-Wilson polynomial  [--n]",
    "apply_D": "Askey-Wilson operator applied to Phi(., z), at x",
    "apply_L": "half-step operator L applied to Phi_R(., z), at x",
}

ENV_VARS = {
    "seed": "QVWP_SEED",
    "tol": "QVWP_TOL",
    "n_points": "QVWP_POINTS",
    "log_level": "QVWP_LOG_LEVEL",
}

_CONVERTERS: dict[str, Any] = {
    "seed": int,
    "tol": float,
    "n_points": int,
    "rel_tol": float,
    "term_cap": int,
    "pole_guard": float,
    "log_level": str,
    "format": str,
}

_NUMBER = re.compile(r"^[0-9eE.+-]*[ij]?$")

_EVAL_KEYS = (
    "kappa",
    "lambda_",
    "upsilon",
    "varsigma",
    "q",
    "s",
    "x",
    "z",
    "u",
    "a",
    "a0",
    "n",
    "num",
    "den",
    "params",
    "route",
)


def parse_complex(text: str) -> complex:
    """Parse "a+bi", "a-bi", "a", "bi" (with j accepted for i).

    Raises:
        argparse.ArgumentTypeError: On anything but a numeric literal
    """
    literal = text.strip().replace(" ", "")
    if not literal or not _NUMBER.match(literal):
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")
    try:
        value = complex(literal.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None
    if not cmath.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def parse_complex_list(text: str) -> list[complex]:
    """Comma-separated list of complex numbers."""
    return [parse_complex(part) for part in text.split(",")]


def parse_real(text: str) -> float:
    """Finite real number (Hecke parameters)."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def parse_q(text: str) -> float:
    """Deformation parameter in (0, 1)."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"q must lie in (0, 1), got {text}")
    return value


def parse_step(text: str) -> Fraction:
    """Positive rational step size such as "1", "2" or "1/2"."""
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"s must be positive, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the eval, check and list subcommands."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    common.add_argument("--config", default=None, help="JSON config file")
    common.add_argument("--log-level", dest="log_level", default=None)
    common.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    common.add_argument("--term-cap", dest="term_cap", type=int, default=None)
    common.add_argument("--pole-guard", dest="pole_guard", type=float, default=None)

    parser = argparse.ArgumentParser(
        prog="qvwp",
        description="Askey-Wilson functions: evaluation and identity checks.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("eval", parents=[common], help="evaluate a function")
    evaluate.add_argument("target", choices=list(FUNCTIONS), metavar="function")
    evaluate.add_argument("--kappa", type=parse_real, default=0.0)
    evaluate.add_argument("--lambda", dest="lambda_", type=parse_real, default=0.0)
    evaluate.add_argument("--upsilon", type=parse_real, default=0.0)
    evaluate.add_argument("--varsigma", type=parse_real, default=0.0)
    evaluate.add_argument("--q", type=parse_q, default=0.5)
    evaluate.add_argument("--s", type=parse_step, default=Fraction(1))
    evaluate.add_argument("--x", type=parse_complex, default=0j)
    evaluate.add_argument("--z", type=parse_complex, default=0j)
    evaluate.add_argument("--u", type=parse_complex, default=None)
    evaluate.add_argument("--a", type=parse_complex, default=None)
    evaluate.add_argument("--a0", type=parse_complex, default=None)
    evaluate.add_argument("--n", type=int, default=None)
    evaluate.add_argument("--num", type=parse_complex_list, default=None)
    evaluate.add_argument("--den", type=parse_complex_list, default=None)
    evaluate.add_argument("--params", type=parse_complex_list, default=None)
    evaluate.add_argument("--route", default=None)

    check = commands.add_parser("check", parents=[common], help="run identity checks")
    check.add_argument("target", metavar="identity", help='identity name or "all"')
    check.add_argument("--seed", type=int, default=None)
    check.add_argument("--n-points", dest="n_points", type=int, default=None)
    check.add_argument("--tol", type=float, default=None, help="pass/fail relative tolerance")
    check.add_argument("--n", dest="max_degree", type=int, default=None)
    check.add_argument("--concurrent", action="store_true", help="run checks in threads")

    commands.add_parser("list", parents=[common], help="list functions and identities")
    return parser


def load_config_file(path: str) -> dict[str, Any]:
    """Read the optional JSON config file (one object, CLI field names).

    Raises:
        ConfigError: If the file is unreadable, not an object or has unknown keys
    """
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}", config_key="config") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}", config_key="config") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object", config_key="config")
    unknown = sorted(set(data) - set(_CONVERTERS))
    if unknown:
        raise ConfigError(f"Unknown config keys: {', '.join(unknown)}", config_key=unknown[0])
    return data


def _layered(
    key: str,
    flag: Any,
    environ: Mapping[str, str],
    file_values: Mapping[str, Any],
) -> Any:
    """Value of one setting by precedence flags > environment > config file."""
    if flag is not None:
        return flag
    env_name = ENV_VARS.get(key)
    if env_name is not None and env_name in environ:
        raw: Any = environ[env_name]
    elif key in file_values:
        raw = file_values[key]
    else:
        return None
    try:
        return _CONVERTERS[key](raw)
    except (TypeError, ValueError):
        raise ConfigError(f"Invalid value for {key}: {raw!r}", config_key=key) from None


def resolve_config(args: argparse.Namespace, environ: Mapping[str, str]) -> RunConfig:
    """Merge flags, environment and config file into a RunConfig.

    Raises:
        ConfigError: On any invalid value
    """
    file_values = load_config_file(args.config) if args.config else {}

    def setting(key: str, flag_name: str | None = None) -> Any:
        return _layered(key, getattr(args, flag_name or key, None), environ, file_values)

    try:
        tolerance = Tolerance(
            **{
                key: value
                for key in ("rel_tol", "term_cap", "pole_guard")
                if (value := setting(key)) is not None
            }
        )
    except ValueError as e:
        raise ConfigError(str(e), config_key="tolerance") from e

    policy_fields: dict[str, Any] = {}
    for key, field_name in (("seed", "seed"), ("n_points", "n_points"), ("tol", "check_tol")):
        value = setting(key)
        if value is not None:
            policy_fields[field_name] = value
    if getattr(args, "max_degree", None) is not None:
        policy_fields["max_degree"] = args.max_degree
    try:
        policy = SamplePolicy(**policy_fields)
    except ValueError as e:
        raise ConfigError(str(e), config_key="policy") from e

    try:
        logging_config = LoggingConfig(level=setting("log_level") or "WARNING")
    except ValueError as e:
        raise ConfigError(str(e), config_key="log_level") from e

    try:
        output = OutputFormat(setting("format") or OutputFormat.TABLE.value)
    except ValueError as e:
        raise ConfigError(str(e), config_key="format") from e

    eval_args = {key: getattr(args, key) for key in _EVAL_KEYS if hasattr(args, key)}
    try:
        return RunConfig(
            command=args.command,
            target=getattr(args, "target", None),
            tolerance=tolerance,
            policy=policy,
            logging=logging_config,
            output=output,
            eval_args=eval_args,
            concurrent=bool(getattr(args, "concurrent", False)),
        )
    except ValueError as e:
        raise ConfigError(str(e), config_key="command") from e


def _require(values: Mapping[str, Any], key: str, function: str) -> Any:
    value = values.get(key)
    if value is None:
        raise ConfigError(f"eval {function} needs --{key}", config_key=key)
    return value


def _route(enum: type[PsiRoute] | type[ERoute], value: Any) -> Any:
    if value is None:
        return enum("auto")
    try:
        return enum(value)
    except ValueError:
        choices = ", ".join(member.value for member in enum)
        raise ConfigError(f"route must be one of {choices}", config_key="route") from None


def evaluate_function(name: str, values: Mapping[str, Any], tol: Tolerance) -> SeriesValue:
    """Evaluate one named function from parsed eval inputs.

    Raises:
        ConfigError: If a required input is missing or invalid
        QVWPError: If the evaluation itself fails
    """
    q = values["q"]
    if name == "theta":
        return theta(_require(values, "u", name), q, tol)
    if name == "pochhammer":
        a = _require(values, "a", name)
        n = values.get("n")
        if n is None:
            return qpochhammer_inf(a, q, tol)
        if n < 0:
            raise ConfigError("--n must be >= 0", config_key="n")
        return SeriesValue(qpochhammer_finite(a, q, n), n)
    if name == "phi_series":
        num = _require(values, "num", name)
        den = _require(values, "den", name)
        return phi_series(num, den, q, values["z"], tol)
    if name == "w8_7":
        a0 = _require(values, "a0", name)
        return w8_7(a0, _require(values, "params", name), q, values["z"], tol)

    params = HeckeParams(
        values["kappa"], values["lambda_"], values["upsilon"], values["varsigma"], q, values["s"]
    )
    pt = EvalPoint(values["x"], values["z"])
    if name == "W":
        return SeriesValue.exact(W_fn(pt, params))
    if name == "St":
        return St(pt.x, params, tol)
    if name == "St_dual":
        return St_dual(pt.z, params, tol)
    if name == "Psi":
        return Psi(pt, params, tol, _route(PsiRoute, values.get("route")))
    if name == "Phi":
        return Phi(pt, params, tol, _route(PsiRoute, values.get("route")))
    if name == "Phi_tilde":
        return phi_tilde(pt, params, tol)
    if name == "E":
        return E_aw(pt, params, tol, _route(ERoute, values.get("route")))
    if name == "c":
        return cfun(pt, params, tol)
    if name == "P_n":
        n = _require(values, "n", name)
        if n < 0:
            raise ConfigError("--n must be >= 0", config_key="n")
        return SeriesValue.exact(aw_polynomial(n, pt.x, params, tol))
    if name == "apply_D":
        value = apply_D(lambda y: Phi(EvalPoint(y, pt.z), params, tol).value, pt.x, params, tol)
        return SeriesValue.exact(value)
    if name == "apply_L":
        jacobi = specialize_J(params.kappa, params.lambda_, q, params.s)
        rahman = specialize_R(params.kappa, params.lambda_, q, params.s)
        value = apply_L(
            lambda y: Phi(EvalPoint(y, pt.z / 2), rahman, tol).value, pt.x, jacobi, tol
        )
        return SeriesValue.exact(value)
    raise ConfigError(f"Unknown function '{name}'", config_key="function")


def format_value(name: str, result: SeriesValue, output: OutputFormat) -> str:
    """Render an evaluated value as JSON or as an aligned table."""
    if output is OutputFormat.JSON:
        return json.dumps(
            {
                "function": name,
                "value": {"re": result.value.real, "im": result.value.imag},
                "diagnostics": {
                    "terms_used": result.terms_used,
                    "tail_estimate": result.tail_estimate,
                    "converged": result.converged,
                },
            },
            indent=2,
        )
    rows = [
        ("function", name),
        ("value", f"{result.value.real:.16g}{result.value.imag:+.16g}i"),
        ("terms_used", str(result.terms_used)),
        ("tail_estimate", f"{result.tail_estimate:.3e}"),
        ("converged", str(result.converged).lower()),
    ]
    return "\n".join(f"{key:<15}{value}" for key, value in rows)


def cmd_eval(config: RunConfig) -> int:
    """Evaluate the configured function and print it."""
    assert config.target is not None
    try:
        result = evaluate_function(config.target, config.eval_args, config.tolerance)
    except ConfigError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_USAGE
    except QVWPError as e:
        print(f"evaluation error ({e.kind}): {e.message}", file=sys.stderr)
        return EXIT_EVALUATION
    except ArithmeticError as e:
        print(f"evaluation error (arithmetic): {e}", file=sys.stderr)
        return EXIT_EVALUATION
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    print(format_value(config.target, result, config.output))
    return EXIT_OK


def cmd_check(config: RunConfig) -> int:
    """Run the selected identities; exit code 0 only if every report passed."""
    names = None if config.target == "all" else [config.target or ""]
    try:
        if config.concurrent:
            reports = asyncio.run(
                run_identities_async(names, config.policy, config.tolerance, config.logging)
            )
        else:
            reports = run_identities(names, config.policy, config.tolerance, config.logging)
    except ConfigError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_USAGE
    if config.output is OutputFormat.JSON:
        print(json.dumps([report.to_json_dict() for report in reports], indent=2))
    else:
        for report in reports:
            print(report.summary())
    return EXIT_OK if all(report.passed for report in reports) else EXIT_FAILED


def cmd_list() -> int:
    """Print the evaluable functions and the identities in registry order."""
    for name, description in FUNCTIONS.items():
        print(f"{name} — {description}")
    for entry in REGISTRY:
        print(entry.listing())
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``qvwp`` console script."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        config = resolve_config(args, os.environ)
    except ConfigError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_USAGE

    logger = setup_logger("qvwp.cli", config.logging)
    logger.debug(f"Resolved configuration: {config}")
    if config.command == "eval":
        return cmd_eval(config)
    if config.command == "check":
        return cmd_check(config)
    return cmd_list()


if __name__ == "__main__":
    sys.exit(main())
