# Standard library imports
import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

# Third-party imports
from pydantic import ValidationError

from asymptotic_evaluator import CLOSED_FORM_FLOORS, closed_form, estimate, table_rows
from config import Config
from constants_kernel import build_constant_set, constant_lines, render_report
from contour_oracle import RESIDUAL_LIMIT, check_decomposition, minor_arc_profile
from exact_sequence import open_cache
from inequality_certifier import (
    analytic_threshold,
    certify_logconcavity,
    hermite,
    hermite_renormalize,
    is_hyperbolic,
    jensen_poly,
    turan_check_range,
)
from reports import render_template, sci_filter
from schemas import CertReport, CliConfig, ConstantSet
from utils import (
    DomainError,
    InvalidArgumentError,
    PlcertError,
    error_fields,
    format_record,
    format_records,
    log_operation,
)

logger = logging.getLogger("plcert")

EXIT_OK = 0
EXIT_NOT_CERTIFIED = 1
EXIT_USAGE = 2
EXIT_RESOURCES = 3


# ---------------------------------------------------------------------------
# Validation helpers
# ---------------------------------------------------------------------------


def _errors_dict(validation_error: ValidationError) -> Dict[str, str]:
    errors: Dict[str, str] = {}
    for item in validation_error.errors():
        field = item.get("loc")[-1] if item.get("loc") else "config"
        message = item.get("msg")
        if isinstance(field, str) and isinstance(message, str):
            errors.setdefault(field, message)
    return errors


def build_config(args: argparse.Namespace) -> CliConfig:
    """Flags override Config defaults; anything not given falls back to the schema default."""
    values: Dict[str, Any] = {
        "precision": args.precision,
        "cache_path": args.cache,
        "output_format": args.format,
        "r": args.r,
        "store": Config.store_enabled(args.store),
        "published_constants": args.published_constants or Config.USE_PUBLISHED_CONSTANTS,
        "verbose": args.verbose,
    }
    return CliConfig(**{key: value for key, value in values.items() if value is not None})


def configure_logging(cfg: CliConfig) -> None:
    level = logging.INFO if cfg.verbose and Config.LOG_LEVEL != "DEBUG" else Config.LOG_LEVEL
    logging.basicConfig(stream=sys.stderr, level=level, format="%(name)s: %(message)s")


def emit(text: str) -> None:
    if text:
        print(text)


def constants_for(cfg: CliConfig, r: Optional[int] = None) -> ConstantSet:
    return build_constant_set(
        r or cfg.r,
        cfg.precision,
        published=cfg.published_constants,
        store=cfg.store,
    )


def persist_report(cfg: CliConfig, report: CertReport) -> None:
    if not cfg.store:
        return
    from data_operations import record_certification_run
    from database import init_db

    init_db()
    outcome = record_certification_run(report)
    if not outcome.ok:
        log_operation("persist_report", outcome.error or "store failed", level="WARNING", logger=logger)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_exact(args: argparse.Namespace, cfg: CliConfig) -> int:
    last = args.n if args.to is None else args.to
    if args.n < 0 or last < args.n:
        raise InvalidArgumentError(f"exact needs 0 <= n <= to, got {args.n}..{last}")
    cache = open_cache(cfg.cache_path, last)
    rows = [{"n": n, "pl": cache[n]} for n in range(args.n, last + 1)]
    if cfg.output_format == "records":
        emit(format_records(rows))
    else:
        emit("\n".join(f"{row['n']}\t{row['pl']}" for row in rows))
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace, cfg: CliConfig) -> int:
    k = constants_for(cfg)
    enclosure = estimate(args.n, cfg.r, k)
    if not enclosure.valid:
        raise DomainError(
            f"estimate for r={cfg.r} is proven for n >= {enclosure.floor}, got n={args.n}", enclosure.floor
        )
    closed = None
    if args.n >= CLOSED_FORM_FLOORS.get(cfg.r, float("inf")):
        closed = closed_form(args.n, cfg.r, k)
    exact = open_cache(cfg.cache_path, args.n)[args.n] if args.exact else None

    if cfg.output_format == "records":
        record = {
            "n": args.n,
            "r": cfg.r,
            "main": enclosure.main.format(16),
            "major": enclosure.major_radius.format(6),
            "minor": enclosure.minor_radius.format(6),
            "lower": sci_filter(enclosure.lower, 10),
            "upper": sci_filter(enclosure.upper, 10),
        }
        if args.ledger:
            record.update({
                "X": enclosure.ledger.X_r.format(6),
                "Y": enclosure.ledger.Y_r.format(6),
                "Z": enclosure.ledger.Z_r.format(6),
            })
        if closed is not None:
            record.update({"closed": sci_filter(closed.main, 10), "envelope": sci_filter(closed.envelope, 4)})
        if exact is not None:
            record["contains"] = enclosure.contains(exact)
        emit(format_record(record))
    else:
        emit(render_template("estimate.txt.j2", e=enclosure, ledger=args.ledger, closed=closed, exact=exact))
    if exact is not None and not enclosure.contains(exact):
        return EXIT_NOT_CERTIFIED
    return EXIT_OK


def cmd_tables(args: argparse.Namespace, cfg: CliConfig) -> int:
    r = 1 if args.which == 1 else 2
    cache = open_cache(cfg.cache_path, 1000 if r == 2 else 500)
    k = constants_for(cfg, r)
    rows = table_rows(args.which, cache, k)
    if cfg.output_format == "records":
        if args.which == 1:
            lines = [
                {"n": row["n"], "error": sci_filter(row["error"], 3),
                 "bound": sci_filter(row["bound"], 3), "within": row["within"]}
                for row in rows
            ]
        else:
            lines = [
                {"n": row["n"], "lower": sci_filter(row["lower"], 4),
                 "pl": sci_filter(row["value"], 4), "upper": sci_filter(row["upper"], 4),
                 "contains": row["contains"]}
                for row in rows
            ]
        emit(format_records(lines))
    else:
        emit(render_template("tables.txt.j2", which=args.which, rows=rows))
    inside = all(row["within"] if args.which == 1 else row["contains"] for row in rows)
    return EXIT_OK if inside else EXIT_NOT_CERTIFIED


def _certify_logconcave(args: argparse.Namespace, cfg: CliConfig) -> CertReport:
    k = constants_for(cfg)
    exact_from = Config.LOGCONCAVE_EXACT_START if args.start is None else args.start
    threshold, analytic_records = analytic_threshold(cfg.r, k, store=cfg.store)
    if threshold is None:
        end = args.exact_to if args.exact_to is not None else exact_from
    else:
        end = max(threshold - 1, args.exact_to or 0)
    cache = open_cache(cfg.cache_path, end + 1)
    return certify_logconcavity(
        cfg.r, cache, k,
        exact_from=exact_from,
        exact_to=args.exact_to,
        threshold=threshold,
        analytic_records=analytic_records,
    )


def _certify_turan(args: argparse.Namespace, cfg: CliConfig) -> CertReport:
    if args.to is None:
        raise InvalidArgumentError("certify turan needs --to")
    if args.d is None:
        raise InvalidArgumentError("certify turan needs --d")
    start = max(1, -args.shift) if args.start is None else args.start
    cache = open_cache(cfg.cache_path, args.to + args.shift + args.d)
    return turan_check_range(args.d, start, args.to, cache, shift=args.shift)


def cmd_certify(args: argparse.Namespace, cfg: CliConfig) -> int:
    report = _certify_logconcave(args, cfg) if args.claim == "logconcave" else _certify_turan(args, cfg)
    persist_report(cfg, report)
    if cfg.output_format == "records":
        record = report.summary()
        if report.status != "certified":
            record["reason"] = "failures" if report.status == "refuted" else "no_analytic_threshold"
        emit(format_record(record))
    else:
        emit(render_template("certify.txt.j2", report=report))
    return EXIT_OK if report.status == "certified" else EXIT_NOT_CERTIFIED


def cmd_jensen(args: argparse.Namespace, cfg: CliConfig) -> int:
    cache = open_cache(cfg.cache_path, args.n + args.d + 1)
    poly = jensen_poly(args.d, args.n, cache)
    hyperbolic = is_hyperbolic(poly)
    renorm = hermite_renormalize(args.d, args.n, cache) if args.renormalize else None
    if cfg.output_format == "records":
        record: Dict[str, Any] = {"d": args.d, "n": args.n, "coeffs": list(poly.coeffs), "hyperbolic": hyperbolic}
        if renorm is not None:
            record.update({
                "A": renorm.A_n,
                "delta": renorm.delta_n,
                "renormalized": renorm.renormalized_coeffs,
                "distance": renorm.hermite_distance,
            })
        emit(format_record(record))
    else:
        emit(render_template(
            "jensen.txt.j2", d=args.d, n=args.n, poly=poly, hyperbolic=hyperbolic,
            renorm=renorm, hermite=hermite(args.d),
        ))
    return EXIT_OK


def cmd_hermite(args: argparse.Namespace, cfg: CliConfig) -> int:
    poly = hermite(args.d)
    if cfg.output_format == "records":
        emit(format_record({"d": args.d, "coeffs": list(poly.coeffs)}))
    else:
        emit(f"H_{args.d}(X) = {poly}")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace, cfg: CliConfig) -> int:
    if args.n > Config.ORACLE_MAX_N:
        raise InvalidArgumentError(f"oracle is limited to n <= {Config.ORACLE_MAX_N}, got n={args.n}")
    cache = open_cache(cfg.cache_path, args.n)
    check = check_decomposition(args.n, cache[args.n])
    profile = minor_arc_profile(args.n) if args.profile else None
    if cfg.output_format == "records":
        record = {key: check[key] for key in ("n", "J", "E_min", "PL", "residual")}
        if check["minor_bound"] is not None:
            record["minor_bound"] = check["minor_bound"]
        if profile is not None:
            record["profile_holds"] = profile.holds
        emit(format_record(record))
    else:
        emit(render_template("oracle.txt.j2", check=check, profile=profile))

    ok = check["residual"] <= RESIDUAL_LIMIT
    if check["minor_bound"] is not None:
        ok = ok and abs(check["E_min"]) <= check["minor_bound"]
    if profile is not None:
        ok = ok and profile.holds
    return EXIT_OK if ok else EXIT_NOT_CERTIFIED


def cmd_constants(args: argparse.Namespace, cfg: CliConfig) -> int:
    k = constants_for(cfg)
    if cfg.output_format == "records":
        emit(format_records({"name": name, "value": value} for name, value in constant_lines(k)))
    else:
        emit(render_report(k))
    return EXIT_OK


def cmd_runs(args: argparse.Namespace, cfg: CliConfig) -> int:
    from data_operations import list_certification_runs
    from database import init_db

    init_db()
    runs = list_certification_runs(claim=args.claim, limit=args.limit)
    if cfg.output_format == "records":
        emit(format_records({
            "id": run.id,
            "claim": run.claim,
            "degree": run.degree,
            "range": f"{run.n_min}..{run.n_max}",
            "certified_from": run.certified_from,
            "status": run.status,
        } for run in runs))
    else:
        emit(render_template("runs.txt.j2", runs=runs))
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, CliConfig], int]] = {
    "exact": cmd_exact,
    "estimate": cmd_estimate,
    "tables": cmd_tables,
    "certify": cmd_certify,
    "jensen": cmd_jensen,
    "hermite": cmd_hermite,
    "oracle": cmd_oracle,
    "constants": cmd_constants,
    "runs": cmd_runs,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help=f"Working precision in bits (default: {Config.DEFAULT_PRECISION}).")
    common.add_argument("--cache", default=None, help="PL cache file, read and extended in place.")
    common.add_argument("--format", choices=["text", "records"], default=None, help="Output format.")
    common.add_argument("--r", type=int, default=None, help=f"Truncation order (default: {Config.DEFAULT_R}).")
    common.add_argument("--store", action="store_true", default=None, help="Persist runs and constants.")
    common.add_argument("--published-constants", action="store_true", dest="published_constants",
                        help="Use the published C_2, D_2 instead of computing them.")
    common.add_argument("--verbose", action="store_true", help="Log progress to stderr.")

    parser = argparse.ArgumentParser(prog="plcert", description="Certified numerics for plane partitions.")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("exact", parents=[common], help="Exact PL(n).")
    p.add_argument("n", type=int)
    p.add_argument("--to", type=int, default=None, help="Print every value from n to this index.")

    p = commands.add_parser("estimate", parents=[common], help="Certified enclosure of PL(n).")
    p.add_argument("n", type=int)
    p.add_argument("--ledger", action="store_true", help="Show the X, Y, Z components.")
    p.add_argument("--exact", action="store_true", help="Compare against the exact value.")

    p = commands.add_parser("tables", parents=[common], help="Reproduce the r = 1 or r = 2 table.")
    p.add_argument("which", type=int, choices=[1, 2])

    p = commands.add_parser("certify", parents=[common], help="Certify log-concavity or a Turan inequality.")
    p.add_argument("claim", choices=["logconcave", "turan"])
    p.add_argument("--d", type=int, default=None, help="Turan degree.")
    p.add_argument("--from", type=int, default=None, dest="start", help="First n to check exactly.")
    p.add_argument("--to", type=int, default=None, help="Last n for turan.")
    p.add_argument("--exact-to", type=int, default=None, dest="exact_to", help="Extend the exact phase to here.")
    p.add_argument("--shift", type=int, default=-1, help="Turan index shift (default: -1).")

    p = commands.add_parser("jensen", parents=[common], help="Jensen polynomial J^(d,n).")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--renormalize", action="store_true", help="Compare with the Hermite limit.")

    p = commands.add_parser("hermite", parents=[common], help="Hermite polynomial H_d.")
    p.add_argument("d", type=int)

    p = commands.add_parser("oracle", parents=[common], help="Floating-point contour check of PL(n) = J + E_min.")
    p.add_argument("n", type=int)
    p.add_argument("--profile", action="store_true", help="Also sample the minor-arc bounds.")

    commands.add_parser("constants", parents=[common], help="Dump the constant set.")

    p = commands.add_parser("runs", parents=[common], help="List stored certification runs.")
    p.add_argument("--claim", choices=["logconcave", "turan"], default=None)
    p.add_argument("--limit", type=int, default=20)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = build_config(args)
    except ValidationError as e:
        for field, message in _errors_dict(e).items():
            print(f"plcert: {field}: {message}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(cfg)

    try:
        return COMMANDS[args.command](args, cfg)
    except PlcertError as e:
        log_operation(args.command, str(e), level="ERROR", logger=logger)
        if cfg.output_format == "records":
            emit(format_record(error_fields(e)))
        else:
            print(f"plcert: {e}", file=sys.stderr)
        return e.exit_code
    except MemoryError:
        print("plcert: out of memory; the cache holds every value computed so far", file=sys.stderr)
        return EXIT_RESOURCES


if __name__ == "__main__":
    sys.exit(main())
