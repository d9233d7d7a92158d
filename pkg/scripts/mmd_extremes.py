"""MMD verdicts for the lowest- and highest-accuracy runs of a cell.

Reads a JSON report written by ``glg run`` and reruns the MMD diagnostic on the
two extreme seeds, mirroring the mapped-vs-adapted comparison.

    glg run --task CD2CO --model RMG --runs 50 --out reports/rmg
    python scripts/mmd_extremes.py reports/rmg/CD2CO_RMG.json
"""

import argparse
import json

import numpy as np

from glg import bench


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("report")
    ap.add_argument("--data-dir", default="data")
    ap.add_argument("--permutations", type=int, default=1000)
    args = ap.parse_args()

    rep = json.load(open(args.report))
    accs = np.array(rep["accuracies"])
    cfg = bench.RunConfig(tasks=(rep["task"],), models=(rep["model"],), runs=1,
                          glg=rep["config"].get("glg", {}), subspace_dim=rep["config"].get("subspace_dim"),
                          data_dir=args.data_dir)
    for label, idx in (("lowest", int(np.argmin(accs))), ("highest", int(np.argmax(accs)))):
        diag = bench.mmd_diagnostic(rep["task"], rep["seeds"][idx], cfg, model=rep["model"],
                                    permutations=args.permutations)
        print(f"{label} accuracy run:")
        print(bench.format_mmd(diag), end="")


if __name__ == "__main__":
    main()
