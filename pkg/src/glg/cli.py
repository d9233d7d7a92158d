"""Command-line entry point: ``glg prepare | run | run-all | mmd``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench
from . import datasets as ds


def _glg_overrides(pairs):
    out = {}
    for item in pairs or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise SystemExit(f"--glg expects KEY=VALUE, got {item!r}")
        out[key] = json.loads(value)
    return out


def cmd_prepare(args) -> int:
    status = ds.verify(args.data_dir)
    width = max(len(k) for k in status)
    for fname, state in status.items():
        print(f"{fname:<{width}}  {state}")
    bad = [f for f, s in status.items() if s in ("missing", "mismatch")]
    needed = {f for key in ("german", "australian", "co", "cd") for f in ds.dataset_catalog()[key]["files"]}
    if any(s == "mismatch" for s in status.values()) or needed & set(bad):
        print("some required files are missing or corrupt; see scripts/fetch_data.py", file=sys.stderr)
        return 1
    return 0


def cmd_run(args) -> int:
    cfg = bench.RunConfig(
        tasks=(args.task,),
        models=(args.model,),
        runs=args.runs,
        seed=args.seed,
        glg=_glg_overrides(args.glg),
        subspace_dim=args.d,
        data_dir=args.data_dir,
        out=args.out,
        workers=args.workers,
    )
    code = bench.run_all(cfg)
    print((Path(cfg.out) / "summary.txt").read_text(), end="")
    return code


def cmd_run_all(args) -> int:
    cfg = bench.RunConfig.from_json(args.config)
    code = bench.run_all(cfg)
    print((Path(cfg.out) / "summary.txt").read_text(), end="")
    return code


def cmd_mmd(args) -> int:
    cfg = bench.RunConfig(
        tasks=(args.task,), models=(args.model,), runs=1, seed=args.seed,
        glg=_glg_overrides(args.glg), subspace_dim=args.d, data_dir=args.data_dir,
    )
    diag = bench.mmd_diagnostic(args.task, args.seed, cfg, model=args.model, permutations=args.permutations)
    if args.json:
        print(json.dumps(diag, indent=2, sort_keys=True))
    else:
        print(bench.format_mmd(diag), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="glg", description="Heterogeneous domain adaptation with linear monotonic maps")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--data-dir", default=str(ds.default_data_dir()))
        sp.add_argument("--glg", action="append", metavar="KEY=VALUE", help="GlgConfig override (JSON value)")
        sp.add_argument("--d", type=int, default=None, help="GFK subspace dimension")

    sp = sub.add_parser("prepare", help="verify dataset files against their checksums")
    sp.add_argument("--data-dir", default=str(ds.default_data_dir()))
    sp.set_defaults(func=cmd_prepare)

    sp = sub.add_parser("run", help="run one model on one task")
    sp.add_argument("--task", required=True)
    sp.add_argument("--model", default="GLG", type=str.upper, choices=bench.MODELS)
    sp.add_argument("--runs", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default="reports")
    sp.add_argument("--workers", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("run-all", help="run the sweep described by a JSON config")
    sp.add_argument("--config", required=True)
    sp.set_defaults(func=cmd_run_all)

    sp = sub.add_parser("mmd", help="MMD two-sample tests for one run")
    sp.add_argument("--task", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--model", default="GLG", type=str.upper, choices=("DG", "RMG", "RLG", "GLG"))
    sp.add_argument("--permutations", type=int, default=1000)
    sp.add_argument("--json", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_mmd)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ds.DataMissingError, KeyError, ValueError) as exc:
        print(f"glg: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
