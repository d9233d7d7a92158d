"""Materialize the four UCI datasets used by the benchmark into a data directory.

The UCI archive is not reachable from every machine, so the files are pulled out
of PyPI packages that redistribute them verbatim:

    german.data-numeric  <- imbalanced-databases (UCI Statlog German, numeric form)
    australian.dat       <- keel-ds (UCI Statlog Australian, KEEL export)
    biopsy.csv           <- pydataset (R MASS::biopsy = Wisconsin Original, 699 rows)
    wdbc.csv             <- scikit-learn (Wisconsin Diagnostic, 569 rows)

Run ``glg prepare --data-dir DIR`` afterwards to verify checksums.
The Reuters text domains are not redistributed on PyPI and have to be placed
in the data directory by hand (see README).
"""

import argparse
import io
import subprocess
import sys
import tarfile
import tempfile
import zipfile
from pathlib import Path


def _download(package, dest):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "-q", package, "-d", str(dest)],
        check=True,
    )
    return next(p for p in dest.iterdir() if p.name.lower().startswith(package.replace("-", "_").lower())
                or p.name.lower().startswith(package.lower()))


def fetch_german(tmp, out):
    whl = _download("imbalanced-databases", tmp)
    with zipfile.ZipFile(whl) as z:
        raw = z.read("imbalanced_databases/data/german/german.data-numeric.txt")
    (out / "german.data-numeric").write_bytes(raw)


def fetch_australian(tmp, out):
    whl = _download("keel-ds", tmp)
    with zipfile.ZipFile(whl) as z:
        raw = z.read("keel_ds/data/balanced/raw/australian.dat")
    (out / "australian.dat").write_bytes(raw)


def fetch_biopsy(tmp, out):
    sdist = _download("pydataset", tmp)
    with tarfile.open(sdist) as outer:
        member = next(m for m in outer.getmembers() if m.name.endswith("pydataset/resources.tar.gz"))
        inner_bytes = outer.extractfile(member).read()
    with tarfile.open(fileobj=io.BytesIO(inner_bytes)) as inner:
        member = next(m for m in inner.getmembers() if m.name.endswith("csv/MASS/biopsy.csv"))
        raw = inner.extractfile(member).read()
    (out / "biopsy.csv").write_bytes(raw)


def fetch_wdbc(out):
    from importlib import resources

    text = resources.files("sklearn.datasets").joinpath("data/breast_cancer.csv").read_text()
    lines = text.splitlines()[1:]
    rows = []
    for line in lines:
        *feats, target = line.split(",")
        rows.append(",".join(feats + ["M" if target.strip() == "0" else "B"]))
    (out / "wdbc.csv").write_text("\n".join(rows) + "\n")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data-dir", default="data")
    args = parser.parse_args(argv)
    out = Path(args.data_dir)
    out.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for fetch in (fetch_german, fetch_australian, fetch_biopsy):
            sub = tmp / fetch.__name__
            sub.mkdir()
            fetch(sub, out)
    fetch_wdbc(out)
    for p in sorted(out.iterdir()):
        print(p)


if __name__ == "__main__":
    main()
