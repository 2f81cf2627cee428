"""Exit-code and file-format checks for the gsav command-line tool."""
import json
import os
import subprocess
import sys
import tempfile

GSAV = sys.argv[1]
failures = []


def expect(code, *args, check=None):
    proc = subprocess.run([GSAV, *args], capture_output=True, text=True)
    ok = proc.returncode == code
    if ok and check is not None:
        ok = check(proc)
    status = "ok  " if ok else "FAIL"
    print(f"{status} exit {proc.returncode} (want {code}): gsav {' '.join(args)}")
    if not ok:
        failures.append(args)
        sys.stdout.write(proc.stdout[-2000:])
        sys.stdout.write(proc.stderr[-2000:])


with tempfile.TemporaryDirectory() as tmp:
    out = os.path.join(tmp, "run")
    small = ["--grid-m", "16", "--t-end", "0.05", "--tau", "0.01"]

    expect(1)
    expect(1, "run", "--no-such-flag")
    expect(1, "run", "--boundary", "dirichlet")
    expect(1, "run", "--grid-m", "1")
    expect(1, "run", *small, "--potential", "flory-huggins", "--theta", "2", "--theta-c", "1")
    expect(1, "run", *small, "--kappa", "0.5", "--check-invariants")
    expect(1, "run", *small, "--init", "random", "--lo", "-1.5")
    expect(1, "verify", "--profile", "bogus")

    def header_ok(_):
        with open(os.path.join(out, "diagnostics.csv")) as f:
            lines = f.read().splitlines()
        return lines[0] == "step,t,tau,sup_norm,energy,modified_energy,s,g" and len(lines) == 7

    expect(0, "run", *small, "--scheme", "ei2", "--out", out, check=header_ok)
    expect(0, "run", *small, "--adaptive", "--tau-min", "0.001", "--tau-max", "0.01",
           "--boundary", "neumann", "--potential", "flory-huggins", "--sigma", "tanh",
           "--out", out, "--check-invariants")
    expect(0, "run", *small, "--snapshot-every", "2", "--out", out,
           check=lambda _: os.path.exists(os.path.join(out, "u_4.csv")))

    expect(2, "run", "--grid-m", "16", "--potential", "flory-huggins", "--kappa", "0.01",
           "--tau", "1", "--t-end", "50", "--init", "random", "--out", out,
           check=lambda p: "step " in p.stderr)

    expect(0, "converge", "--grid-m", "16", "--t-end", "0.25", "--taus", "0.0625,0.03125",
           "--tau-ref", "0.0009765625", check=lambda p: "slope" in p.stdout)
    expect(1, "converge", "--grid-m", "16", "--t-end", "0.25", "--taus", "0.0625",
           "--tau-ref", "0.0625")

    def report_ok(p):
        doc = json.loads(p.stdout)
        return doc["passed"] is True and doc["failures"] == [] and len(doc["checks"]) > 0

    expect(0, "verify", "--profile", "lemmas", check=report_ok)
    expect(0, "verify", "--profile", "", check=lambda p: json.loads(p.stdout)["checks"] == [])

sys.exit(1 if failures else 0)
