"""Run the full task x model sweep and print the summary grid.

    python scripts/reproduce_tables.py                      # configs/tables.json
    python scripts/reproduce_tables.py --config configs/quick.json --workers 4
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from glg import bench
from glg import datasets as ds


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--config", default=str(Path(__file__).resolve().parents[1] / "configs" / "tables.json"))
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--skip-missing", action="store_true", help="drop tasks whose data files are absent")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    cfg = bench.RunConfig.from_json(args.config)
    if args.workers:
        cfg = dataclasses.replace(cfg, workers=args.workers)
    if args.skip_missing:
        status = ds.verify(cfg.data_dir)
        cat = ds.dataset_catalog()

        def present(code):
            t = ds.get_task(code)
            return all(status[f] in ("ok", "unchecked") for k in (t.source, t.target) for f in cat[k]["files"])

        cfg = dataclasses.replace(cfg, tasks=tuple(c for c in cfg.tasks if present(c)))
    code = bench.run_all(cfg)
    print((Path(cfg.out) / "summary.txt").read_text(), end="")
    sys.exit(code)


if __name__ == "__main__":
    main()
