"""Runs the CLI over a spread of commands and validates every JSON report
against the shipped schemas. Usage: validate_reports.py <fraclie> <schema dir>"""

import csv
import io
import json
import pathlib
import subprocess
import sys

from jsonschema import Draft202012Validator

RUNS = [
    (["tables", "--case", "1", "--format", "json"], 0),
    (["tables", "--case", "2.1", "--m", "2", "--alpha", "1/3", "--format", "json"], 0),
    (["tables", "--case", "2.2", "--format", "json"], 0),
    (["tables", "--case", "2.2", "--alpha", "1/2", "--format", "json"], 3),
    (["optimal", "--case", "2.2", "--alpha", "1/3", "--format", "json"], 0),
    (["optimal", "--case", "2.1", "--m", "2", "--alpha", "1/3", "--format", "json"], 0),
    (["optimal", "--case", "1", "--alpha", "1/2", "--format", "json"], 0),
    (["verify", "--family", "19", "--m", "2", "--alpha", "1/3"], 0),
    (["verify", "--family", "19", "--m", "1", "--alpha", "1/3"], 3),
    (["verify", "--family", "5.1", "--a", "1", "--alpha", "1/2"], 0),
    (["verify", "--family", "5.5", "--c1", "3"], 0),
    (["verify", "--family", "20", "--m", "2", "--c1", "1", "--psi-lo", "-1", "--psi-hi", "2"], 0),
    (["verify", "--family", "lemma2", "--m", "2", "--a1", "2", "--a2", "-1/3", "--b1", "1", "--b2", "1"], 0),
    (["evolve", "--steps", "10"], 0),
    (["evolve", "--steps", "1"], 0),
]


def main():
    exe, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    report = Draft202012Validator(json.loads((schema_dir / "report.schema.json").read_text()))
    catalog = Draft202012Validator(json.loads((schema_dir / "catalog.schema.json").read_text()))
    failures = 0
    for args, expected in RUNS:
        proc = subprocess.run([exe, *args], capture_output=True, text=True)
        label = " ".join(args)
        problems = []
        if proc.returncode != expected:
            problems.append(f"exit {proc.returncode}, expected {expected}")
        try:
            doc = json.loads(proc.stdout)
        except json.JSONDecodeError as e:
            doc = None
            if expected != 3 or args[0] in ("verify", "evolve") or "--format" in args:
                problems.append(f"stdout is not JSON: {e}")
        if doc is not None:
            problems += [f"report: {e.message}" for e in report.iter_errors(doc)]
            if "catalog" in doc:
                problems += [f"catalog: {e.message}" for e in catalog.iter_errors(doc["catalog"])]
        print(("ok   " if not problems else "FAIL ") + label)
        for p in problems:
            print("     " + p)
        failures += bool(problems)

    proc = subprocess.run([exe, "evolve", "--steps", "4", "--format", "csv"], capture_output=True, text=True)
    rows = list(csv.reader(io.StringIO(proc.stdout)))
    csv_ok = proc.returncode == 0 and rows and rows[0] == ["t", "x", "u", "v"] and len(rows) == 1 + 5 * 41
    print(("ok   " if csv_ok else "FAIL ") + "evolve csv columns t,x,u,v")
    failures += not csv_ok
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
