"""Writes data/diabetes.csv from the raw (unscaled) diabetes data bundled with scikit-learn."""
import csv
import pathlib
import sys

from sklearn.datasets import load_diabetes

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/diabetes.csv")
d = load_diabetes(scaled=False)
names = ["age", "sex", "bmi", "bp", "s1", "s2", "s3", "s4", "s5", "s6"]
with out.open("w", newline="") as f:
    w = csv.writer(f)
    w.writerow(names + ["y"])
    for row, target in zip(d.data, d.target):
        w.writerow([repr(float(v)).rstrip("0").rstrip(".") if float(v) != int(v) else int(v) for v in row] + [int(target)])
