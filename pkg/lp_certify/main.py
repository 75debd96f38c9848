import argparse
import json
import logging
import os
import secrets
import sys
from datetime import datetime
from pathlib import Path

from lp_certify.config import OUTPUT_FORMATS, RunConfig
from lp_certify.constants import (
    NAMED_POLYNOMIALS,
    c_n,
    c_n_table,
    check_esta,
    check_nu_k,
    check_psi_positive,
    estqq_threshold,
    largest_real_root,
    mu_k,
    q_infinity,
    verify_c_interleaving,
)
from lp_certify.criteria import CRITERIA, DEFAULT_N_CHECK, HYPOTHESES_NOT_MET, run_criterion
from lp_certify.errors import (
    EXIT_HYPOTHESES_NOT_MET,
    EXIT_OK,
    EXIT_UNRESOLVED,
    EXIT_USAGE,
    DegreeError,
    HypothesesNotMetError,
    LPCertifyError,
    UsageError,
)
from lp_certify.reports import build_report, dumps, emit_plot_data, plot_frame
from lp_certify.series import make_family, quotients, truncate
from lp_certify.zeros import (
    classify_real,
    disk_counts,
    nonreal_census,
    roots_of_truncation,
    quartic_grid,
    sign_alternation_check,
)

logger = logging.getLogger(__name__)


class JsonFormatter(logging.Formatter):
    """
    Custom formatter that outputs log records as JSON.
    """

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        # Add any extra fields from the log record
        if hasattr(record, "extra_fields"):
            log_data.update(record.extra_fields)

        return json.dumps(log_data)


def setup_logging(log_file: str = None, logs_dir: str = None, verbose: bool = False) -> str | None:
    """
    Set up logging. Returns the log file path, or None when only stderr is used.

    The console handler writes to stderr so the report on stdout stays clean.
    A JSON log file is written only when log_file or logs_dir is given.
    """
    console_formatter = logging.Formatter("%(asctime)s - %(levelname)s - %(message)s")
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(console_formatter)
    handlers = [console_handler]

    log_path = None
    if log_file is not None or logs_dir is not None:
        logs_dir = Path(logs_dir) if logs_dir is not None else Path.cwd() / "logs"
        logs_dir.mkdir(parents=True, exist_ok=True)

        if log_file is None:
            timestamp = datetime.now().strftime("%Y%m%d:%H:%M")
            random_hex = secrets.token_hex(4)
            log_file = f"lp-certify-{timestamp}-{random_hex}.log"

        if os.sep not in log_file and "/" not in log_file:
            log_path = logs_dir / log_file
        else:
            log_path = Path(log_file)

        file_handler = logging.FileHandler(log_path, mode="a")
        file_handler.setFormatter(JsonFormatter())
        handlers.append(file_handler)

    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, handlers=handlers, force=True)
    return str(log_path) if log_path else None


class CLIParser(argparse.ArgumentParser):
    """ArgumentParser whose errors become UsageError (exit 64) instead of exit 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _int_range(text: str) -> tuple:
    """'4..10' -> (4, 10)."""
    try:
        lo, hi = (int(part) for part in text.split("..", 1))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 4..10, got {text!r}")
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _scan_nodes(text: str) -> int:
    try:
        nodes = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if nodes < 3:
        raise argparse.ArgumentTypeError(f"a scan needs at least 3 nodes, got {nodes}")
    return nodes


def _function(text: str) -> dict:
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"--function is not valid JSON ({e.msg} at position {e.pos})") from e
    if not isinstance(spec, dict):
        raise UsageError("--function must be a JSON object with a 'family' field")
    return spec


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        dest="output_format",
        choices=OUTPUT_FORMATS,
        default=None,
        help="Output format (default: json)",
    )
    common.add_argument(
        "--precision",
        dest="dps",
        type=int,
        default=None,
        help="Working decimal digits (default: $LP_CERTIFY_PRECISION or 34)",
    )
    common.add_argument(
        "--escalations",
        dest="max_escalations",
        type=int,
        default=None,
        help="Precision doublings allowed before giving up (default: 2)",
    )
    common.add_argument(
        "--workers",
        dest="workers",
        type=int,
        default=None,
        help="Worker processes for tables and census rows (default: 1)",
    )
    common.add_argument(
        "--csv",
        dest="csv_path",
        default=None,
        help="Also write plot data (census, c_n table, interleaving, disk counts) to this CSV file",
    )
    common.add_argument(
        "--log",
        dest="log_file",
        default=None,
        help="JSON log file name (no log file unless --log or --logs-dir is given)",
    )
    common.add_argument(
        "--logs-dir",
        dest="logs_dir",
        default=None,
        help="Directory for log files (defaults to logs/)",
    )
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    return common


def build_parser() -> CLIParser:
    common = _common_options()
    parser = CLIParser(
        prog="lp-certify",
        description="lp-certify - membership tests for the Laguerre-Polya class of type I",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=CLIParser)

    test = commands.add_parser("test", parents=[common], help="Run a membership criterion")
    test.add_argument("--criterion", choices=CRITERIA, required=True, help="Criterion to apply")
    test.add_argument("--function", required=True, help="Family descriptor as JSON")
    test.add_argument(
        "--n-max",
        dest="n_max",
        type=int,
        default=DEFAULT_N_CHECK,
        help=f"Quotient indices to check (default: {DEFAULT_N_CHECK})",
    )
    test.add_argument(
        "--scan-nodes", dest="scan_nodes", type=_scan_nodes, default=None, help="Sign-scan nodes (at least 3)"
    )

    zeros = commands.add_parser("zeros", parents=[common], help="Roots of a section and disk counts")
    zeros.add_argument("--function", required=True, help="Family descriptor as JSON")
    zeros.add_argument("--degree", type=int, required=True, help="Section degree")
    zeros.add_argument("--disks", type=_int_range, default=None, help="Count zeros in |z| < rho_j for j1..j2")
    zeros.add_argument("--census", action="store_true", help="Run the nonreal census over --disks")
    zeros.add_argument("--experimental", action="store_true", help="Allow 1 < q_2 < 2*2^(1/3) in the census")

    census = commands.add_parser("census", parents=[common], help="Nonreal-zero census over rho_j disks")
    census.add_argument("--function", required=True, help="Family descriptor as JSON")
    census.add_argument("--j-range", dest="j_range", type=_int_range, default=(4, 10), help="j1..j2 (default 4..10)")
    census.add_argument("--degree", type=int, required=True, help="Section degree used for the real roots")
    census.add_argument("--experimental", action="store_true", help="Allow 1 < q_2 < 2*2^(1/3)")

    constants = commands.add_parser("constants", help="Partial theta constants and proof polynomials")
    which = constants.add_subparsers(dest="which", required=True, parser_class=CLIParser)
    q_inf = which.add_parser("q-inf", parents=[common], help="q_infinity by bisection")
    q_inf.add_argument("--tol", type=float, default=1e-6, help="Bracket width (default 1e-6)")
    cn = which.add_parser("c-n", parents=[common], help="c_n for one n")
    cn.add_argument("--n", type=int, required=True, help="Section degree n >= 2")
    cn.add_argument("--tol", type=float, default=1e-8, help="Bracket width (default 1e-8)")
    table = which.add_parser("table", parents=[common], help="c_n for a range of n with gaps to q_infinity")
    table.add_argument("--n-range", dest="n_range", type=_int_range, default=(2, 12), help="n1..n2 (default 2..12)")
    table.add_argument("--tol", type=float, default=1e-8, help="Bracket width (default 1e-8)")
    inter = which.add_parser("interleaving", parents=[common], help="Check the c_n interleaving around q_infinity")
    inter.add_argument("--n-max", dest="n_max", type=int, default=9, help="Largest n (default 9)")
    inter.add_argument("--tol", type=float, default=1e-8, help="Bracket width (default 1e-8)")
    roots = which.add_parser("roots", parents=[common], help="Largest real roots of the proof polynomials")
    roots.add_argument("--poly", choices=sorted(NAMED_POLYNOMIALS), default=None, help="One polynomial (default all)")

    verify = commands.add_parser("verify-inequalities", parents=[common], help="Evaluate the proof inequalities")
    verify.add_argument(
        "--family", default=None, help="Family descriptor as JSON (without it only family-free checks run)"
    )
    verify.add_argument("--j-range", dest="j_range", type=_int_range, default=(4, 20), help="j1..j2 (default 4..20)")
    verify.add_argument(
        "--sign-alternation",
        dest="sign_alternation",
        action="store_true",
        help="Also certify (-1)^k phi(rho_k) >= 0 for k = 2..j2",
    )
    return parser


def _config(args) -> RunConfig:
    try:
        return RunConfig.from_env(
            dps=args.dps,
            max_escalations=args.max_escalations,
            output_format=args.output_format,
            workers=args.workers,
        )
    except ValueError as e:
        raise UsageError(str(e)) from e


# ---------------------------------------------------------------------- commands


def _cmd_test(args, config):
    seq = make_family(_function(args.function))
    verdict = run_criterion(args.criterion, seq, args.n_max, args.scan_nodes, config)
    logger.info(f"{args.criterion}: {verdict.outcome}")
    code = EXIT_HYPOTHESES_NOT_MET if verdict.outcome == HYPOTHESES_NOT_MET else EXIT_OK
    return "verdict", verdict, None, code


def _cmd_zeros(args, config):
    seq = make_family(_function(args.function))
    if args.census:
        return _census(seq, args.disks or (4, 10), args.degree, args.experimental, config)
    report = classify_real(
        roots_of_truncation(truncate(seq, args.degree, dps=config.dps)),
        config.tol("real_classification"),
    )
    if args.disks:
        report = disk_counts(seq, report, args.disks, config)
    logger.info(
        f"Degree {report.degree}: {report.count_real} real, {report.count_nonreal} nonreal, "
        f"{report.count_unresolved} unresolved"
    )
    code = EXIT_UNRESOLVED if report.count_unresolved else EXIT_OK
    return "zeros", report, report if args.disks else None, code


def _census(seq, j_range, degree, experimental, config):
    census = nonreal_census(seq, j_range, degree, config, experimental=experimental)
    logger.info(f"Census stabilized: {census.stabilized}, empirical j0: {census.empirical_j0}")
    return "census", census, census, EXIT_OK


def _cmd_census(args, config):
    seq = make_family(_function(args.function))
    return _census(seq, args.j_range, args.degree, args.experimental, config)


def _cmd_constants(args, config):
    if args.which == "q-inf":
        return "q-inf", q_infinity(args.tol, config), None, EXIT_OK
    if args.which == "c-n":
        return "c-n", c_n(args.n, args.tol, config), None, EXIT_OK
    if args.which == "table":
        lo, hi = args.n_range
        table = c_n_table(range(lo, hi + 1), args.tol, config)
        return "c-n-table", table, table, EXIT_OK
    if args.which == "interleaving":
        reports = verify_c_interleaving(args.n_max, args.tol, config)
        result = {"all_hold": all(r.holds for r in reports), "checks": reports}
        return "interleaving", result, reports, EXIT_OK
    poly_ids = [args.poly] if args.poly else sorted(NAMED_POLYNOMIALS)
    reports = [largest_real_root(poly_id, max(config.dps, 40)) for poly_id in poly_ids]
    return "roots", reports, None, EXIT_OK


def _cmd_verify(args, config):
    result = {
        "named_polynomials": [largest_real_root(poly_id, max(config.dps, 40)) for poly_id in sorted(NAMED_POLYNOMIALS)],
        "quartic_grid": quartic_grid(config=config),
    }
    code = EXIT_OK
    if args.family is None:
        return "inequalities", result, None, code

    seq = make_family(_function(args.family))
    lo, hi = args.j_range
    if lo < 2:
        raise UsageError("--j-range must start at 2 or later")
    profile = quotients(seq, hi + 4, dps=config.dps)
    result["j_range"] = [lo, hi]
    if hi >= 4:
        result["estqq"] = estqq_threshold(seq, (lo, hi), config.dps)
    result["nu_k"] = [
        check_nu_k(profile.window(k - 1, k + 3), config.dps, k=k) for k in range(max(lo, 3), hi + 1)
    ]
    result["psi"] = [
        check_psi_positive(profile.q_at(j), profile.q_at(j + 1), config.dps) for j in range(lo, hi + 1)
    ]
    result["mu_k"] = [{"k": k, "mu_k": mu_k(seq, k, config.dps)} for k in range(lo, hi + 1)]
    limit = seq.quotient_limit()
    result["esta"] = check_esta(limit, config.dps) if limit is not None and limit > 1 else None
    if args.sign_alternation:
        checks = sign_alternation_check(seq, hi, config)
        result["sign_alternation"] = checks
        if any(check.status == "unresolved" for check in checks):
            code = EXIT_UNRESOLVED
    return "inequalities", result, None, code


COMMANDS = {
    "test": _cmd_test,
    "zeros": _cmd_zeros,
    "census": _cmd_census,
    "constants": _cmd_constants,
    "verify-inequalities": _cmd_verify,
}


def _emit(kind, result, plot_source, config, args):
    if config.output_format == "csv":
        if plot_source is None:
            raise UsageError(f"--format csv is not available for {kind} reports")
        sys.stdout.write(plot_frame(plot_source).to_csv(index=False, float_format="%.17e", lineterminator="\n"))
    else:
        report = build_report(kind, result, config)
        sys.stdout.write(dumps(report, pretty=config.output_format == "pretty") + "\n")
    if args.csv_path:
        if plot_source is None:
            raise UsageError(f"--csv is not available for {kind} reports")
        emit_plot_data(plot_source, args.csv_path)


def _error_report(error: LPCertifyError) -> dict:
    result = {"error": type(error).__name__, "message": str(error), "exit_code": error.exit_code}
    if isinstance(error, HypothesesNotMetError):
        result["hypotheses"] = error.hypotheses
    if isinstance(error, DegreeError):
        result["recommended_degree"] = error.recommended_degree
    return result


def run(argv=None) -> int:
    """Parse argv, run one command, print its report. Returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    setup_logging(args.log_file, args.logs_dir, args.verbose)
    config = RunConfig()
    try:
        config = _config(args)
        kind, result, plot_source, code = COMMANDS[args.command](args, config)
        _emit(kind, result, plot_source, config, args)
        return code
    except LPCertifyError as e:
        logger.error(f"{type(e).__name__}: {e}")
        if not isinstance(e, UsageError):
            sys.stdout.write(dumps(build_report("error", _error_report(e), config)) + "\n")
        return e.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
