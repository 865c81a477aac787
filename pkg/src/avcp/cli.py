"""Command-line entry point: ``avcp run``, ``avcp verify``, ``avcp builtins``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import Experiment, builtins_catalog, config_echo, load_config
from .errors import AVCPError, AVCPViolation, ConfigError
from .report import build_report, summary_table, to_csv, to_json
from .suites import DEFAULT_SEED, SUITES, verify_suite

EXIT_OK, EXIT_CONFIG, EXIT_FAILED = 0, 1, 2
CONFIG_DIR = Path(__file__).parent / "configs"


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _emit(report: dict, out: str | None, fmt: str) -> None:
    text = to_json(report) if fmt == "json" else to_csv(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def resolve_config(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    bundled = CONFIG_DIR / (path if path.endswith(".toml") else path + ".toml")
    return bundled if bundled.exists() else p


def run_experiment(config_path: str, out: str | None = None, fmt: str = "json", seed: int | None = None,
                   runs: int | None = None, tol: float | None = None) -> int:
    try:
        cfg = load_config(resolve_config(config_path))
        exp = Experiment(cfg, seed=seed, runs=runs, tol=tol)
        records, mc = exp.run_checks()
    except AVCPViolation as e:
        print(f"error: AVCP violation: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as e:
        print(f"error: invalid config {config_path}:\n{e}", file=sys.stderr)
        return EXIT_CONFIG
    except AVCPError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CONFIG
    notes = sorted({n for a in exp.arrangements.values() for n in a.notes})
    report = build_report(records, seed=exp.seed, config=config_echo(cfg), mc=mc, notes=notes)
    _emit(report, out, fmt)
    print(summary_table(records), file=sys.stderr)
    return EXIT_OK if report["summary"]["passed"] else EXIT_FAILED


def run_verify(seed: int = DEFAULT_SEED, filter: str | None = None, out: str | None = None,
               fmt: str = "json") -> int:
    try:
        records = verify_suite(seed, filter)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    print(summary_table(records))
    if out:
        _emit(build_report(records, seed=seed), out, fmt)
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="avcp", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run the checks in a TOML experiment config")
    r.add_argument("config", help="path to a config, or the name of a bundled one (e.g. a_squared)")
    r.add_argument("--seed", type=_u64, default=None, help="override the config seed")
    r.add_argument("--runs", type=int, default=None, help="override the Monte Carlo run count")
    r.add_argument("--tol", type=float, default=None, help="override every check tolerance")
    r.add_argument("--out", default=None, help="write the report here instead of stdout")
    r.add_argument("--format", choices=("json", "csv"), default="json")

    v = sub.add_parser("verify", help="run the built-in invariant suites")
    v.add_argument("--seed", type=_u64, default=DEFAULT_SEED)
    v.add_argument("--filter", default=None, help=f"only suites whose name contains this ({', '.join(SUITES)})")
    v.add_argument("--out", default=None, help="also write a full report here")
    v.add_argument("--format", choices=("json", "csv"), default="json")

    b = sub.add_parser("builtins", help="list builtin operators, check kinds and bundled configs")
    b.set_defaults()
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        if args.runs is not None and args.runs < 1:
            print("error: --runs must be >= 1", file=sys.stderr)
            return EXIT_CONFIG
        return run_experiment(args.config, args.out, args.format, args.seed, args.runs, args.tol)
    if args.command == "verify":
        return run_verify(args.seed, args.filter, args.out, args.format)
    print(builtins_catalog())
    print("\nbundled configs:")
    for p in sorted(CONFIG_DIR.glob("*.toml")):
        print(f"  {p.stem}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
