"""Validate crsbench JSON output against the schemas in schemas/."""
import json
import pathlib
import subprocess
import sys

import jsonschema

exe, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
schemas = {name: json.loads((schema_dir / f"{name}-report.schema.json").read_text())
           for name in ("verify", "bounds", "herbrand")}
for s in schemas.values():
    jsonschema.Draft202012Validator.check_schema(s)

runs = [
    ("verify", ["verify", "lemma-coeff", "--p", "3", "--s", "0", "--trials", "5", "--deg", "4", "--seed", "7"]),
    ("verify", ["verify", "delta-ideal", "--p", "3,5", "--s", "0..2", "--coords", "z"]),
    ("verify", ["verify", "tau-stability", "--p", "3", "--s", "0..2"]),
    ("verify", ["verify", "is-mod-pn", "--p", "3", "--e", "2", "--eisenstein", "u^2-3", "--n", "1", "--s", "2"]),
    ("verify", ["verify", "is-mod-pn", "--p", "3,5", "--e", "1..3", "--n", "1..2", "--s", "0..3"]),
    ("verify", ["verify", "blowup-generator", "--p", "3", "--e", "2", "--s", "0..1", "--trials", "3"]),
    ("verify", ["verify", "delta-laws", "--p", "3", "--trials", "2"]),
    ("verify", ["verify", "koszul", "--random", "3", "--seed", "11"]),
    ("verify", ["verify", "koszul", "--ring", "Z/9[u]/(u^2)", "--seq", "3,u"]),
    ("verify", ["verify", "disjointness", "--p", "3", "--k", "1", "--l", "1", "--trials", "3"]),
    ("bounds", ["bounds", "--p", "5", "--e", "1", "--i", "1"]),
    ("bounds", ["bounds", "--p", "3", "--e", "6", "--i", "2", "--field", "cyclotomic:3:2"]),
    ("bounds", ["bounds", "--p", "3", "--e", "2", "--i", "5", "--check"]),
    ("bounds", ["bounds", "--p", "3,5", "--e", "1..2", "--i", "1..2", "--c0", "1/2", "--s0", "1"]),
    ("herbrand", ["herbrand", "--builtin", "cyclotomic:3:2"]),
    ("herbrand", ["herbrand", "--breaks", "[[1,6],[3,3]]", "--e", "6"]),
    ("herbrand", ["herbrand", "--breaks", "[]"]),
    ("herbrand", ["herbrand", "--breaks", "[[\"1/2\",4],[2,2]]", "--e", "5"]),
]

failed = 0
for kind, args in runs:
    out = subprocess.run([exe, *args], capture_output=True, text=True)
    label = " ".join(args)
    if out.returncode != 0:
        print(f"FAIL {label}: exit {out.returncode}\n{out.stderr}")
        failed += 1
        continue
    try:
        jsonschema.validate(json.loads(out.stdout), schemas[kind])
        print(f"ok   {label}")
    except jsonschema.ValidationError as e:
        print(f"FAIL {label}: {e.message} at {list(e.absolute_path)}")
        failed += 1
sys.exit(1 if failed else 0)
