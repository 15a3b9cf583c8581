#!/usr/bin/env python3
"""Merge JSON-lines output of DECLAB_DERIVE runs into tests/data/envelopes.json."""
import argparse
import json
import sys


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("table")
    ap.add_argument("derived", nargs="+")
    ap.add_argument("--overwrite", action="store_true", help="replace keys already in the table")
    args = ap.parse_args()
    with open(args.table) as f:
        table = json.load(f)
    for path in args.derived:
        with open(path) as f:
            for line in f:
                if not line.strip():
                    continue
                row = json.loads(line)
                key = row["key"]
                if key in table and not args.overwrite:
                    if table[key]["value"] != row["value"]:
                        print(f"kept {key}={table[key]['value']} (derived {row['value']})", file=sys.stderr)
                    continue
                table[key] = {"value": row["value"]}
    with open(args.table, "w") as f:
        json.dump(dict(sorted(table.items())), f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
