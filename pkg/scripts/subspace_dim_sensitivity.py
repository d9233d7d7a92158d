"""Accuracy of RLG and GLG as a function of the GFK subspace dimension d.

The default d = max(1, r // 2) is a fixed design choice; this script shows how
much the transfer accuracy moves with d.  It reports on target labels, so it is
an analysis tool, not a way to pick d.

    python scripts/subspace_dim_sensitivity.py --task G2A --runs 10 --models RLG GLG
"""

import argparse
import json

import numpy as np

from glg import bench
from glg import datasets as ds
from glg.gfk import default_subspace_dim


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--task", default="G2A")
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--models", nargs="+", default=["RLG"])
    ap.add_argument("--dims", nargs="+", type=int, default=None)
    ap.add_argument("--data-dir", default="data")
    ap.add_argument("--json", default=None, help="also write the table here")
    args = ap.parse_args()

    task = ds.get_task(args.task)
    m = ds.load_dataset(task.source, args.data_dir).shape[1]
    n = ds.load_dataset(task.target, args.data_dir).shape[1]
    r = min(m, n)
    dims = args.dims or sorted({1, 2, default_subspace_dim(r)})
    table = {}
    for model in args.models:
        for d in dims:
            cfg = bench.RunConfig(tasks=(task.code,), models=(model,), runs=args.runs, seed=args.seed,
                                  subspace_dim=d, data_dir=args.data_dir)
            rep = bench.run_task(task, model, cfg)
            table[f"{model} d={d}"] = {"avg": rep.avg, "std": rep.std, "min": rep.min, "max": rep.max}
            print(f"{task.code} {model:<4} d={d:<2} {100 * rep.avg:6.2f}% +- {100 * rep.std:5.2f}%  "
                  f"[{100 * rep.min:.2f}, {100 * rep.max:.2f}]", flush=True)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(table, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
