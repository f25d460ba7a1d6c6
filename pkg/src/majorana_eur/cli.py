"""Command-line entry point: ``majorana-eur {verify,sweep,witness}``."""
from __future__ import annotations

import argparse
import sys
import time

from . import sweep, verify

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_IO = 3


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with default values for the flags below")
    p.add_argument("--tolerance", type=float, help="maximum allowed numeric deviation")


def _add_grid(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fixed", help="comma-separated values of the held-fixed parameter")
    p.add_argument("--range", help="swept parameter as start:stop:count")
    p.add_argument("--scale", choices=("log", "linear"))
    p.add_argument("--out", help="CSV output path (stdout when omitted)")
    p.add_argument("--workers", type=int, help="evaluate grid points in N processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="majorana-eur", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run the self-verification suite")
    _add_common(pv)
    pv.add_argument("--seed", type=int, help="seed of the random (omega, lambda) grid")
    pv.add_argument("--grid-size", type=int, default=200)
    pv.add_argument("--corrupt-hamiltonian", action="store_true", help=argparse.SUPPRESS)

    ps = sub.add_parser("sweep", help="tabulate every term of the uncertainty relation")
    _add_common(ps)
    ps.add_argument("--mode", choices=[m for m in sweep.MODES if m not in ("verify", "witness")])
    _add_grid(ps)

    pw = sub.add_parser("witness", help="scan the quantum witness over omega/lambda")
    _add_common(pw)
    _add_grid(pw)
    return parser


def _load(args) -> dict:
    return sweep.load_config_file(args.config) if args.config else {}


def cmd_verify(args) -> int:
    file_values = _load(args)
    seed = args.seed if args.seed is not None else int(file_values.get("seed", 0))
    tol = args.tolerance if args.tolerance is not None else float(file_values.get("tolerance", 1e-9))
    start = time.perf_counter()
    checks = verify.run_checks(seed=seed, n_grid=args.grid_size, tolerance=tol, corrupt=args.corrupt_hamiltonian)
    print(verify.format_report(checks))
    print(f"elapsed {time.perf_counter() - start:.2f} s")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY_FAILED


def _run_grid(args, mode: str | None) -> int:
    overrides = {
        "mode": mode,
        "fixed": args.fixed,
        "range": args.range,
        "scale": args.scale,
        "out": args.out,
        "tolerance": args.tolerance,
        "workers": args.workers,
    }
    cfg = sweep.build_config(None, _load(args), overrides)
    text, worst = sweep.run_sweep(cfg)
    if cfg.output_path:
        sweep.write_csv(text, cfg.output_path)
    else:
        sys.stdout.write(text)
    if worst > cfg.tolerance:
        print(f"numeric deviation {worst:.3e} exceeds tolerance {cfg.tolerance:.1e}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "sweep":
            return _run_grid(args, args.mode)
        return _run_grid(args, "witness")
    except sweep.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
