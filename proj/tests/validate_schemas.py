"""Validate fixtures and CLI output against schemas/."""
import json
import pathlib
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource

root = pathlib.Path(sys.argv[1])
cli = sys.argv[2]
schemas = {p.name: json.loads(p.read_text()) for p in (root / "schemas").glob("*.schema.json")}
registry = Registry().with_resources((name, Resource.from_contents(s)) for name, s in schemas.items())


def validator(name):
    return jsonschema.Draft202012Validator(schemas[name], registry=registry)


failures = 0


def expect(ok, what):
    global failures
    print(("ok   " if ok else "FAIL ") + what)
    failures += not ok


for path in sorted((root / "fixtures").glob("*.json")):
    doc = json.loads(path.read_text())
    kind = ("algebra" if path.name.endswith(".algebra.json")
            else "bimodule" if path.name.endswith(".bimodule.json") else "matrix")
    valid = validator(kind + ".schema.json").is_valid(doc)
    expect(valid == (path.name != "malformed.algebra.json"), path.name)

runs = [
    ["check", "fixtures/q_z2.algebra.json"],
    ["check", "fixtures/m2_unscaled.algebra.json"],
    ["check", "fixtures/z2_scaled_coaction.bimodule.json"],
    ["check", "fixtures/malformed.algebra.json"],
    ["tensor", "fixtures/m2_row.bimodule.json", "fixtures/m2_column.bimodule.json"],
    ["split", "fixtures/m2_row_column.epsilon.json"],
    ["unitalize", "fixtures/span.algebra.json"],
    ["morita", "fixtures/q_z2.algebra.json", "fixtures/q.algebra.json"],
    ["dual", "fixtures/m2_column.bimodule.json"],
    ["chain", "--algebra", "fixtures/m3.algebra.json", "--length", "5"],
]
for args in runs:
    out = subprocess.run([cli, *args], cwd=root, capture_output=True, text=True).stdout
    expect(validator("report.schema.json").is_valid(json.loads(out)), " ".join(args))

out = subprocess.run([cli, "battery", "--filter", "unitalization"], cwd=root, capture_output=True, text=True).stdout
expect(validator("battery.schema.json").is_valid(json.loads(out)), "battery --filter unitalization")
sys.exit(1 if failures else 0)
