#!/usr/bin/env python3
"""Convert the raw UCI Adult and German credit files into headered CSVs.

The raw files are taken from the `responsibly` wheel, which ships verbatim
copies of adult.data, adult.test and german.data. Missing markers ("?") are
kept so that `fairtab prepare` performs the row cleaning itself.

Usage:
    python3 scripts/extract_datasets.py [--wheel PATH] [--out data/]
"""
import argparse
import csv
import glob
import os
import subprocess
import sys
import tempfile
import zipfile

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]

GERMAN_COLUMNS = [
    "checking_status", "duration", "credit_history", "purpose",
    "credit_amount", "savings_status", "employment", "installment_rate",
    "personal_status", "other_parties", "residence_since",
    "property_magnitude", "age", "other_payment_plans", "housing",
    "existing_credits", "job", "num_dependents", "own_telephone",
    "foreign_worker", "class",
]

# A91/A93/A94: male, A92/A95: female
GERMAN_SEX = {"A91": "male", "A92": "female", "A93": "male", "A94": "male", "A95": "female"}


def locate_wheel(explicit):
    if explicit:
        return explicit
    found = glob.glob(os.path.join(tempfile.gettempdir(), "fairtab-wheel", "responsibly-*.whl"))
    if found:
        return found[0]
    dest = os.path.join(tempfile.gettempdir(), "fairtab-wheel")
    subprocess.check_call([sys.executable, "-m", "pip", "download", "--no-deps",
                           "responsibly==0.1.2", "-d", dest])
    return glob.glob(os.path.join(dest, "responsibly-*.whl"))[0]


def adult_rows(text, skip_first):
    lines = text.splitlines()
    if skip_first:
        lines = lines[1:]
    for line in lines:
        line = line.strip()
        if not line:
            continue
        cells = [c.strip() for c in line.split(",")]
        cells[-1] = cells[-1].rstrip(".")
        yield cells


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--wheel")
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    wheel = zipfile.ZipFile(locate_wheel(args.wheel))

    train = wheel.read("responsibly/dataset/adult/adult.data").decode()
    test = wheel.read("responsibly/dataset/adult/adult.test").decode()
    with open(os.path.join(args.out, "adult.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(ADULT_COLUMNS)
        n = 0
        for row in list(adult_rows(train, False)) + list(adult_rows(test, True)):
            assert len(row) == len(ADULT_COLUMNS), row
            w.writerow(row)
            n += 1
    print(f"adult.csv: {n} rows")

    german = wheel.read("responsibly/dataset/german/german.data").decode()
    with open(os.path.join(args.out, "german.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(GERMAN_COLUMNS[:-1] + ["sex", "class"])
        n = 0
        for line in german.splitlines():
            cells = line.split()
            if not cells:
                continue
            assert len(cells) == len(GERMAN_COLUMNS), cells
            label = "good" if cells[-1] == "1" else "bad"
            w.writerow(cells[:-1] + [GERMAN_SEX[cells[8]], label])
            n += 1
    print(f"german.csv: {n} rows")


if __name__ == "__main__":
    main()
