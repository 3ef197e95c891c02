"""Command-line entry points: batch runs, config validation, synthetic data
generation, and the HTTP service.

Exit codes: 0 ok, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import report, syngen
from .dataset import save_dataset
from .errors import InvalidSpec, WealthsimError
from .report import ConfigError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _cmd_validate(args) -> int:
    raw = _read_json(args.config)
    diagnostics = report.validate_config(raw)
    for diag in diagnostics:
        print(diag)
    errors = [d for d in diagnostics if d.level == "error"]
    if errors:
        return EXIT_CONFIG
    print("config ok")
    return EXIT_OK


def _apply_overrides(raw: dict, args) -> dict:
    if args.seed is not None:
        raw = {**raw, "seed": args.seed}
    if args.out is not None:
        raw = {**raw, "output_dir": args.out}
    return raw


def _cmd_run(args) -> int:
    raw = _apply_overrides(_read_json(args.config), args)
    diagnostics = report.validate_config(raw)
    errors = [d for d in diagnostics if d.level == "error"]
    for diag in diagnostics:
        print(diag, file=sys.stderr)
    if errors:
        return EXIT_CONFIG
    cfg = report.RunConfig.from_dict(raw)
    written = report.run(cfg)
    for path in written:
        print(path)
    return EXIT_OK


def _cmd_synth(args) -> int:
    block = _read_json(args.spec)
    try:
        spec = report._synth_spec(block, block.get("seed", 0))
    except (InvalidSpec, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid synthetic spec: {exc}") from exc
    ds = syngen.generate(spec)
    save_dataset(ds, args.out)
    print(args.out)
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    raw = _read_json(args.config)
    diagnostics = report.validate_config(raw)
    errors = [d for d in diagnostics if d.level == "error"]
    for diag in diagnostics:
        print(diag, file=sys.stderr)
    if errors:
        return EXIT_CONFIG
    cfg = report.RunConfig.from_dict(raw)
    print("building snapshot ...", file=sys.stderr)
    snapshot = report.build_snapshot(cfg)
    print(
        f"snapshot ready: {snapshot.corrected.n_records} records per implicate",
        file=sys.stderr,
    )
    app = create_app(snapshot)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wealthsim",
        description="Wealth-tax microsimulation workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a batch simulation")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None)
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="validate a run config")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(func=_cmd_validate)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset CSV")
    p_synth.add_argument("--spec", required=True)
    p_synth.add_argument("--out", required=True)
    p_synth.set_defaults(func=_cmd_synth)

    p_serve = sub.add_parser("serve", help="serve the simulation API")
    p_serve.add_argument("--config", required=True)
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WealthsimError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
