"""Export the Wisconsin Diagnostic Breast Cancer data to data/wdbc.csv.

Uses the copy bundled with scikit-learn (UCI WDBC, 569 rows, 30 features,
original file order). Malignant rows get label 1, benign rows label 0.
The unsupervised benchmark variant keeps all 357 benign rows and the first
10 malignant rows; `gdba` applies that step with `--keep-anomalies 10`.
"""
import csv
import sys

from sklearn.datasets import load_breast_cancer


def main(path):
    data = load_breast_cancer()
    names = [n.replace(" ", "_") for n in data.feature_names]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names + ["label"])
        for row, target in zip(data.data, data.target):
            w.writerow([repr(float(v)) for v in row] + [1 if target == 0 else 0])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/wdbc.csv")
