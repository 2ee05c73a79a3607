"""Download the five UCI binary datasets and rewrite them as topolabel CSVs.

Output files have a header, float feature columns and a final ``label``
column holding 1 or 2. Needs network access; nothing in the package or the
test suite calls this script.

    python scripts/fetch_uci.py --out-dir data/uci
"""
import argparse
import csv
import io
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"

# name -> (url, label column index, value mapped to class 1, columns to drop)
DATASETS = {
    "banknote": (f"{UCI}/00267/data_banknote_authentication.txt", -1, "0", ()),
    "breast_cancer": (f"{UCI}/breast-cancer-wisconsin/breast-cancer-wisconsin.data", -1, "2", (0,)),
    "ionosphere": (f"{UCI}/ionosphere/ionosphere.data", -1, "g", ()),
    "sonar": (f"{UCI}/undocumented/connectionist-bench/sonar/sonar.all-data", -1, "R", ()),
    # Pima Indians diabetes is no longer hosted by UCI; supply the CSV yourself
}


def convert(text: str, label_col: int, class1: str, drop: tuple[int, ...]) -> list[list[str]]:
    rows = []
    for raw in csv.reader(io.StringIO(text)):
        if not raw or "?" in raw:
            continue
        label = raw[label_col].strip()
        feats = [v.strip() for i, v in enumerate(raw) if i not in drop and i != len(raw) + label_col]
        rows.append(feats + ["1" if label == class1 else "2"])
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="data/uci")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, (url, label_col, class1, drop) in DATASETS.items():
        with urllib.request.urlopen(url) as resp:
            text = resp.read().decode("utf-8")
        rows = convert(text, label_col, class1, drop)
        n_feat = len(rows[0]) - 1
        with (out / f"{name}.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([f"f{i}" for i in range(n_feat)] + ["label"])
            w.writerows(rows)
        print(f"{name}: {len(rows)} rows, {n_feat} features")


if __name__ == "__main__":
    main()
