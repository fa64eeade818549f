import io
import json
import re
from pathlib import Path

import pytest

from fvskernel.cli import main

DATA = Path(__file__).parent / "data"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def fields(report: str) -> dict[str, str]:
    return dict(line.split(" ", 1) for line in report.splitlines() if " " in line)


def stable(report: str) -> str:
    return re.sub(r"elapsed_s \S+", "elapsed_s -", report)


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p

    return write


def test_solve_triangle():
    code, rep = run("solve", DATA / "k3.graph")
    f = fields(rep)
    assert code == 0 and f["fvs"] == "1" and f["schema"] == "1" and f["command"] == "solve"


def test_solve_constrained_with_oracle():
    code, rep = run("solve", DATA / "k4.graph", "--require", "0", "--separate", "1,2", "--oracle")
    f = fields(rep)
    assert code == 0 and f["fvs"] == "2" and f["oracle_agrees"] == "yes"
    assert f["answer"] in ("yes", "no")


def test_solve_eta_too_small(files):
    code, _ = run("solve", DATA / "k4.graph", "--eta", "1")
    assert code == 1


def test_missing_file_and_bad_syntax(files):
    assert run("solve", "no-such-file")[0] == 1
    assert run("solve", files("bad.graph", "p 2 1\n0 7\n"))[0] == 1
    assert run("frobnicate")[0] == 1


def test_ed_cap(files):
    code, rep = run("ed", DATA / "k5.graph", "--cap", "1")
    assert code == 3
    code, rep = run("ed", DATA / "k4.graph")
    assert code == 0 and fields(rep)["ed"] == "2"


def test_ed_output_validates(files):
    _, rep = run("ed", DATA / "grid3x3.graph")
    forest = "\n".join(line[len("forest "):] for line in rep.splitlines() if line.startswith("forest "))
    eta = fields(rep)["ed"]
    code, rep = run("validate", DATA / "grid3x3.graph", files("g.ef", forest), "--eta", eta)
    assert code == 0 and fields(rep)["valid"] == "yes"


def test_validate_reports_violations(files):
    ef = files("bad.ef", "node 0 parent - bag 0\nnode 1 parent 0 bag 0,1\nnode 2 parent 0 bag 2\n")
    code, rep = run("validate", DATA / "k3.graph", ef, "--eta", "1")
    assert code == 2
    assert "violation partition violated" in rep and "violation ancestry violated" in rep


def test_kernelize_verified(files, tmp_path):
    x = files("x.txt", "0 # modulator\n")
    out = tmp_path / "kernel.json"
    code, rep = run("kernelize", DATA / "wheel6.graph", DATA / "wheel6.mod", "--eta", "1", "--verify", "--output", out)
    f = fields(rep)
    assert code == 0 and f["verified"] == "yes"
    record = json.loads(out.read_text())
    assert list(record) == ["schema", "eta", "delta", "modulator", "rounds", "round_stats", "graph"]
    code, rep = run("kernelize", DATA / "k3.graph", x, "--eta", "1")
    assert code == 0 and fields(rep)["delta"] == "1"


def test_kernelize_invalid_modulator(files):
    code, rep = run("kernelize", DATA / "k5.graph", files("x.txt", "0"), "--eta", "1")
    assert code == 2 and fields(rep)["valid_modulator"] == "no"
    code, _ = run("kernelize", DATA / "k3.graph", files("y.txt", "9"), "--eta", "1")
    assert code == 2


def test_kernelize_needs_eta(files):
    assert run("kernelize", DATA / "k3.graph", files("x.txt", "0"))[0] == 1


def test_reduce_sat(files, tmp_path):
    cnf = files("f.cnf", "p cnf 2 1\n1 -2 0\n")
    code, rep = run("reduce-sat", cnf, "--verify", "--output", tmp_path / "inst")
    f = fields(rep)
    assert code == 0
    assert (f["vertices"], f["modulator_size"], f["budget"]) == ("25", "11", "6")
    assert f["equivalence"].startswith("holds: SAT")
    assert (tmp_path / "inst.graph").exists() and (tmp_path / "inst.json").exists()
    unsat = files("u.cnf", "p cnf 1 2\n1 0\n-1 0\n")
    code, rep = run("reduce-sat", unsat, "--verify")
    assert code == 0 and fields(rep)["equivalence"].startswith("holds: UNSAT")


def test_reduce_sat_rejects_other_patterns(files):
    assert run("reduce-sat", files("f.cnf", "p cnf 1 1\n1 0\n"), "--pattern", "k4")[0] == 1
    assert run("reduce-sat", files("g.cnf", "p cnf 1 1\n3 0\n"))[0] == 1


def test_config_file_supplies_defaults(files):
    conf = files("c.json", json.dumps({"defaults": {"eta": 1}, "ed": {"cap": 1}}))
    x = files("x.txt", "0")
    code, _ = run("--config", conf, "kernelize", DATA / "k3.graph", x)
    assert code == 0
    assert run("--config", conf, "ed", DATA / "k4.graph")[0] == 3
    # explicit flags win over the file
    assert run("--config", conf, "ed", DATA / "k4.graph", "--cap", "3")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ("solve", DATA / "petersen.graph", "--separate", "0,5"),
        ("ed", DATA / "two_triangles_bridge.graph"),
        ("kernelize", DATA / "wheel6.graph", DATA / "wheel6.mod", "--eta", "1"),
    ],
)
def test_reports_are_deterministic(argv):
    first, second = run(*argv), run(*argv)
    assert first[0] == second[0]
    assert stable(first[1]) == stable(second[1])


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "fvskernel", "solve", str(DATA / "k3.graph")], capture_output=True, text=True)
    assert res.returncode == 0 and "fvs 1" in res.stdout
