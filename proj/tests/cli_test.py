"""End-to-end checks of the command-line tool: exit codes, output shape, determinism."""

import json
import os
import subprocess
import sys
import tempfile

EXE, CONFIGS = sys.argv[1], sys.argv[2]
failures = []


def run(*args):
    return subprocess.run([EXE, *args], capture_output=True, text=True)


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + (f": {detail}" if detail and not cond else ""))
    if not cond:
        failures.append(name)


def cfg(name):
    return os.path.join(CONFIGS, name)


r = run("inertia", cfg("buckling.json"), "--lambda", "50")
check("inertia exit 0", r.returncode == 0, r.stderr)
check("inertia between lambda_1 and lambda_2 is 1", json.loads(r.stdout)["ind"] == 1)

r = run("spectrum", cfg("c_minus50.json"))
check("spectrum exit 0", r.returncode == 0, r.stderr)
spec = json.loads(r.stdout)
check("two negative eigenvalues at c=-50", len(spec["spectrum"]["negatives"]) == 2)

r = run("admissible", cfg("buckling.json"))
check("admissible exit 0", r.returncode == 0, r.stderr)

r = run("oscillation", cfg("c_minus500.json"), "--index", "-3")
check("oscillation exit 0", r.returncode == 0, r.stderr)
check("lambda_-3 has two zeros", len(json.loads(r.stdout)["zero_report"]["zeros"]) == 2)

r = run("spectrum", cfg("does_not_exist.json"))
check("missing config exits 1", r.returncode == 1)
check("missing config names the file", "does_not_exist" in r.stderr)

r = run()
check("no subcommand exits 1", r.returncode == 1)

with tempfile.TemporaryDirectory() as tmp:
    bad = os.path.join(tmp, "bad.json")
    with open(bad, "w") as f:
        json.dump({"p": {"poly": [1, -2]}, "r": {"const": 1}, "c": -5, "alpha": 0,
                   "bc": "clamped_clamped"}, f)
    r = run("spectrum", bad)
    check("non-positive p exits 1", r.returncode == 1)

    strict = os.path.join(tmp, "strict.json")
    with open(cfg("c_minus50.json")) as f:
        doc = json.load(f)
    doc["tolerances"] = {"kernel_ratio": 1e30}
    with open(strict, "w") as f:
        json.dump(doc, f)
    r = run("verify", strict)
    check("failed theorem exits 2", r.returncode == 2, r.stderr)

    outs = []
    for k in range(2):
        path = os.path.join(tmp, f"v{k}.json")
        r = run("verify", cfg("variable.json"), "--pair", "--out", path,
                "--emit-eigenfunctions", os.path.join(tmp, f"ef{k}"))
        check(f"verify run {k} exit 0", r.returncode == 0, r.stderr)
        with open(path) as f:
            doc = json.load(f)
        check(f"verify run {k} has timings", "timings" in doc)
        doc.pop("timings", None)
        outs.append(json.dumps(doc, sort_keys=False))
    check("verify is deterministic modulo timings", outs[0] == outs[1])
    check("eigenfunction CSVs written", len(os.listdir(os.path.join(tmp, "ef0"))) > 0)
    with open(os.path.join(tmp, "ef0", sorted(os.listdir(os.path.join(tmp, "ef0")))[0])) as f:
        check("CSV header", f.readline().strip() == "x,y,dy,ddy")

for name in sorted(os.listdir(CONFIGS)):
    r = run("verify", cfg(name), "--pair")
    check(f"verify --pair {name} exit 0", r.returncode == 0, r.stdout[-400:] + r.stderr)

sys.exit(1 if failures else 0)
