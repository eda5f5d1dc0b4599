#!/usr/bin/env python3
"""Write MovieLens 100K as a ratings.csv in the ml-latest-small layout.

GroupLens downloads are not always reachable, so this pulls the copy of
ml-100k bundled inside the RecBole wheel on PyPI and rewrites it as
`userId,movieId,rating,timestamp` with one header row.

    python3 tools/fetch_ml100k.py data/ml-100k/ratings.csv
"""
import glob
import os
import subprocess
import sys
import tempfile
import zipfile

INTER = "recbole/dataset_example/ml-100k/ml-100k.inter"


def main() -> int:
    out = sys.argv[1] if len(sys.argv) > 1 else "data/ml-100k/ratings.csv"
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "-q", "--no-deps",
             "-d", tmp, "recbole==1.2.1"],
            check=True)
        wheel = glob.glob(os.path.join(tmp, "*.whl"))[0]
        raw = zipfile.ZipFile(wheel).read(INTER).decode("utf-8")
    rows = raw.splitlines()[1:]
    os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
    with open(out, "w", newline="\n") as f:
        f.write("userId,movieId,rating,timestamp\n")
        for row in rows:
            user, item, rating, ts = row.split("\t")
            f.write(f"{user},{item},{float(rating):.1f},{int(float(ts))}\n")
    print(f"wrote {len(rows)} ratings to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
