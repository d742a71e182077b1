"""Command-line entry point.

Subcommands: ``preset``, ``sweep``, ``dof``, ``validate-config``. On failure a
machine-readable JSON error is printed to stderr and the exit code is nonzero.
"""
from __future__ import annotations

import argparse
import json
import sys

from .config import load_config, parse_override
from .errors import NfbmError
from .presets import PRESET_NAMES, SWEEP_AXES, run_dof, run_preset, run_sweep


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="master seed override")
    p.add_argument("--trials", type=int, default=None, help="Monte Carlo trials override")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="config override, repeatable",
    )
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")


def _collect_overrides(args) -> dict[str, str]:
    overrides = dict(parse_override(item) for item in args.override)
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    if args.trials is not None:
        overrides["trials"] = str(args.trials)
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nfbm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preset", help="run a named figure preset")
    p.add_argument("name", help=f"one of: {', '.join(PRESET_NAMES)}")
    _add_common(p)

    p = sub.add_parser("sweep", help="sweep one axis of a base preset")
    p.add_argument("--axis", required=True, help=f"one of: {', '.join(SWEEP_AXES)}")
    p.add_argument("--values", required=True, help="comma-separated axis values")
    p.add_argument("--preset", default="fig3", help="base preset (default fig3)")
    _add_common(p)

    p = sub.add_parser("dof", help="export a DoF-vs-distance profile")
    p.add_argument("--analytic-only", action="store_true", help="skip the SVD-based numeric count")
    _add_common(p)

    p = sub.add_parser("validate-config", help="parse a config file and echo it as JSON")
    p.add_argument("path")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "preset":
            manifest = run_preset(
                args.name,
                args.out,
                overrides=_collect_overrides(args),
                render_figures=not args.no_figures,
            )
            print(json.dumps({"ok": True, "outputs": manifest["outputs"]}))
        elif args.command == "sweep":
            values = [float(v) for v in args.values.split(",") if v.strip()]
            manifest = run_sweep(
                args.axis,
                values,
                base_preset=args.preset,
                out_dir=args.out,
                overrides=_collect_overrides(args),
                render_figures=not args.no_figures,
            )
            print(json.dumps({
                "ok": True,
                "outputs": manifest["outputs"],
                "failures": manifest["failures"],
            }))
        elif args.command == "dof":
            manifest = run_dof(
                args.out,
                overrides=_collect_overrides(args),
                numeric=not args.analytic_only,
                render_figures=not args.no_figures,
            )
            print(json.dumps({"ok": True, "outputs": manifest["outputs"]}))
        elif args.command == "validate-config":
            cfg = load_config(args.path)
            print(json.dumps({"ok": True, "config": cfg.to_dict()}, sort_keys=True))
    except NfbmError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    except OSError as exc:
        print(json.dumps({"error": "IOError", "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
