"""CLI contract: JSON schemas, exit codes, output formats, determinism, config files.

usage: cli_tests.py ZMC_BINARY SCHEMA_DIR
"""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

ZMC = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])

registry = Registry()
for path in SCHEMAS.glob("*.schema.json"):
    registry = registry.with_resource(path.name, Resource.from_contents(json.loads(path.read_text())))


def validator(command):
    schema = json.loads((SCHEMAS / f"{command}.schema.json").read_text())
    return jsonschema.Draft202012Validator(schema, registry=registry)


VALIDATORS = {c: validator(c) for c in ("generate", "classify", "characteristic", "verify")}
failures = []


def run(*args):
    p = subprocess.run([ZMC, *map(str, args)], capture_output=True, text=True)
    return p.returncode, p.stdout, p.stderr


def check(cond, what):
    if not cond:
        failures.append(what)
        print("FAIL", what)


def expect(command, args, code, validate=True):
    rc, out, err = run(command, *args)
    check(rc == code, f"{command} {' '.join(map(str, args))}: exit {rc}, expected {code}; stderr: {err.strip()}")
    if validate and rc in (0, 1) and out:
        doc = json.loads(out)
        errors = sorted(VALIDATORS[command].iter_errors(doc), key=lambda e: e.path)
        check(not errors, f"{command} {args}: schema: {[e.message for e in errors[:3]]}")
        return doc
    return None


tmp = pathlib.Path(tempfile.mkdtemp(prefix="zmc_cli_"))

# classify
d = expect("classify", ["--family", "euclidean-general", "--a", 1, "--b", 3], 0)
check(d and d["predicted"] == ["spacelike"] and d["agreement"], "classify euclidean a=1 b=3")
d = expect("classify", ["--family", "hyperbola-ii", "--a", 0, "--b", 1, "--delta", 1, "--r", "0.01:0.99:60"], 0)
check(d and d["predicted"] == ["timelike", "lightlike"] and [l["kind"] for l in d["loci"]] == ["line"], "classify hyperbola-ii on the bounded component with delta = c")
d = expect("classify", ["--family", "parabola-singular", "--a", -2, "--b", 0, "--p", 0], 0)
check(d and [l["kind"] for l in d["loci"]] == ["line"], "classify parabola singular p=0")
d = expect("classify", ["--family", "hyperbola", "--variant", "II", "--a", 0, "--b", -1, "--delta", 0.5], 0)
check(d and len(d["sampled"]) == 3, "hyperbola-ii a=0 b=-1 delta=0.5 shows all three characters")
d = expect("classify", ["--family", "entire-graph", "--a", -2, "--p", -1], 0)
check(d and len(d["sampled"]) == 3, "entire graph classify")
for fam, extra in [("euclidean-singular", ["--a", 2]), ("hyperbola-singular-ii", ["--a", 0.2, "--b", 1]),
                   ("parabola-gen-pos", ["--a", 1, "--b", 0.5, "--p", 0.5]), ("parabola-gen-zero", ["--b", 1])]:
    expect("classify", ["--family", fam, *extra], 0)

# characteristic
for args, mu, kind in [
    (["--family", "euclidean-general", "--a", 1, "--b", 2], 1.0, "alpha_plus"),
    (["--family", "euclidean-singular", "--a", 1], -1.0, "alpha_minus_III"),
    (["--family", "parabola-gen-neg", "--a", -1, "--b", 0, "--p", 0], -2.0, "alpha_minus_I"),
]:
    d = expect("characteristic", args, 0)
    check(d and abs(d["mu"] - mu) < 1e-4 and d["alpha_type"] == kind, f"characteristic {args}")
expect("characteristic", ["--family", "euclidean-general", "--a", 1, "--b", 3], 4, validate=False)
expect("characteristic", ["--family", "entire-graph"], 4, validate=False)

# verify
for args in (["--family", "euclidean-general", "--a", 1, "--b", -2],
             ["--family", "hyperbola-i", "--a", 1, "--b", 0.2, "--delta", 0.5],
             ["--family", "parabola-gen-neg", "--a", -1, "--b", 0.5, "--p", 0],
             ["--family", "parabola-gen-zero", "--b", 0.5, "--p", 1],
             ["--family", "entire-graph"]):
    d = expect("verify", args, 0)
    check(d and d["pass"], f"verify {args}")
d = expect("verify", ["--family", "entire-graph"], 0)
check(d and d["info"]["ruled"] is False and d["info"]["helicoid_ruled"] is True, "verify ruledness verdicts")
expect("verify", ["--family", "euclidean-general", "--a", 1, "--b", 3, "--tol", 1e-30], 1)

# input and I/O errors
rc, _, err = run("classify", "--family", "euclidean-general", "--a", -1)
check(rc == 2 and "a > 0" in err, "invalid params names the invariant")
expect("classify", ["--family", "torus"], 2, validate=False)
expect("generate", ["--family", "euclidean-general", "--r", "3:1:10", "--out", tmp / "x.ply"], 2, validate=False)
expect("generate", ["--family", "euclidean-general", "--bogus", 1], 2, validate=False)
expect("generate", ["--family", "euclidean-general"], 2, validate=False)
expect("generate", ["--family", "euclidean-general", "--out", tmp / "missing" / "x.ply"], 3, validate=False)
expect("classify", ["--config", tmp / "missing.json"], 3, validate=False)

# generate: formats and determinism
grid = ["--r", "0.05:3:60", "--theta", "0:6.2832:48"]
base = ["--family", "euclidean-general", "--a", 1, "--b", 2, *grid]
outputs = {}
for threads in (1, 3, 8):
    for ext in ("ply", "csv"):
        path = tmp / f"m{threads}.{ext}"
        d = expect("generate", [*base, "--threads", threads, "--out", path], 0)
        outputs[(threads, ext)] = path.read_bytes()
        check(d and d["vertices"] == 60 * 48 and d["lightlike"] == 60, f"generate counts {threads} {ext}")
for ext in ("ply", "csv"):
    check(len({outputs[(t, ext)] for t in (1, 3, 8)}) == 1, f"{ext} byte-identical across thread counts")
ply = outputs[(1, "ply")].decode()
header = ply.split("end_header\n")[0]
check(header == ("ply\nformat ascii 1.0\nelement vertex 2880\nproperty double x\nproperty double y\n"
                 "property double t\nproperty uchar red\nproperty uchar green\nproperty uchar blue\n"
                 "element face 2773\nproperty list uchar int vertex_indices\n"), "PLY header")
body = ply.split("end_header\n")[1].splitlines()
colours = {tuple(line.split()[3:]) for line in body[:2880]}
check(colours == {("0", "0", "255"), ("0", "255", "0")}, f"PLY colours {colours}")
check(all(0 <= int(i) < 2880 for line in body[2880:] for i in line.split()[1:]), "face indices in range")
csv = outputs[(1, "csv")].decode().splitlines()
check(csv[0] == "p1,p2,x,y,t,causal" and {r.rsplit(",", 1)[1] for r in csv[1:]} == {"S", "L"}, "CSV layout")

cls = {run("classify", "--family", "entire-graph", "--threads", t)[1] for t in (1, 2, 5)}
check(len(cls) == 1, "classify byte-identical across thread counts")

d = expect("generate", ["--family", "hyperbola-ii", "--a", 0, "--b", -1, "--delta", 0.5, "--out", tmp / "f1.ply"], 0)
check(d and d["spacelike"] > 0 and d["timelike"] > 0 and d["lightlike"] > 0, "hyperbola-ii a=0 b=-1 delta=0.5 mesh has all three colours")
d = expect("generate", ["--family", "entire-graph", "--a", -2, "--p", -1, "--out", tmp / "eg.ply"], 0)
check(d and d["lightlike"] > 0, "entire graph mesh has lightlike vertices")

# config file with flag override
cfg = tmp / "run.json"
cfg.write_text(json.dumps({"family": "euclidean-general", "a": 1, "b": 3}))
d = expect("classify", ["--config", cfg], 0)
check(d and d["params"]["b"] == 3.0, "config file read")
d = expect("classify", ["--config", cfg, "--b", 2], 0)
check(d and d["params"]["b"] == 2.0 and "lightlike" in d["predicted"], "flags override config")
cfg.write_text(json.dumps({"family": "euclidean-general", "colour": 1}))
expect("classify", ["--config", cfg], 2, validate=False)

# --json writes the same report to a file
out_json = tmp / "report.json"
rc, out, _ = run("verify", "--family", "euclidean-singular", "--json", out_json)
check(rc == 0 and out_json.read_text() == out, "--json file matches stdout")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
