import json
import subprocess
import sys
from pathlib import Path

import pytest

from divcodes.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_usage(capsys, *argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    capsys.readouterr()
    return exc.value.code


def test_feasible_text(capsys):
    code, out, _ = run(capsys, "feasible", "--q", "8", "--a", "2", "--b", "1", "--n", "195")
    assert code == 0 and out.strip() == "infeasible (leading coefficient -3)"
    code, out, _ = run(capsys, "feasible", "--q", "8", "--delta", "32", "--n", "1049")
    assert code == 0 and out.strip() == "feasible (leading coefficient 26)"
    code, out, _ = run(capsys, "feasible", "--q", "8", "--delta", "6", "--n", "10")
    assert code == 0 and out.startswith("infeasible")


def test_feasible_json(capsys):
    code, out, _ = run(capsys, "feasible", "--q", "4", "--delta", "2", "--n", "3", "--json")
    d = json.loads(out)
    assert code == 0 and d["feasible"] is False and d["delta"] == 2


def test_frobenius_and_expand(capsys):
    assert run(capsys, "frobenius", "--q", "4", "--a", "2", "--b", "1")[1].strip() == "43"
    assert run(capsys, "frobenius", "--q", "8", "--delta", "2")[1].strip() == "7"
    code, out, _ = run(capsys, "expand", "--q", "8", "--a", "2", "--b", "1", "--n", "0", "--json")
    d = json.loads(out)
    assert d["coefficients"] == [0, 0, 0] and d["cross_sum"] == 0 and d["feasible"]
    d = json.loads(run(capsys, "expand", "--q", "8", "--a", "2", "--b", "1", "--n", "1049", "--json")[1])
    assert set(d) == {"n", "q", "a", "b", "delta", "coefficients", "leading", "cross_sum", "feasible"}
    assert d["coefficients"] == [1, 4, 26]


def test_usage_errors(capsys):
    assert run_usage(capsys, "feasible", "--q", "6", "--a", "1", "--n", "3") == 2
    assert run_usage(capsys, "feasible", "--q", "8", "--a", "1", "--b", "3", "--n", "3") == 2
    assert run_usage(capsys, "feasible", "--q", "8", "--a", "1", "--n", "-1") == 2
    assert run_usage(capsys, "feasible", "--q", "8", "--n", "3") == 2
    assert run_usage(capsys, "feasible", "--q", "8", "--a", "1", "--delta", "2", "--n", "3") == 2
    assert run_usage(capsys, "nonsense") == 2
    assert run_usage(capsys, "search", "--q", "8", "--v", "3", "--delta", "2", "--n", "3", "--bogus") == 2
    assert run_usage(capsys, "search", "--q", "8", "--v", "0", "--delta", "2", "--n", "3") == 2


def test_domain_errors(capsys, tmp_path):
    assert run(capsys, "frobenius", "--q", "8", "--delta", "6")[0] == 1
    assert run(capsys, "construct", "--q", "8", "--delta", "2", "--n", "7")[0] == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("q=8\n12\n1\n")
    assert run(capsys, "verify", "--matrix", str(bad))[0] == 1
    assert run(capsys, "verify", "--matrix", str(tmp_path / "missing.txt"))[0] == 1


def test_verify_fixture(capsys):
    code, out, _ = run(capsys, "verify", "--matrix", str(FIXTURES / "f9_n27.txt"), "--json")
    d = json.loads(out)
    assert code == 0
    assert d == {"n": 27, "effective_n": 27, "k": 3, "divisibility_gcd": d["divisibility_gcd"], "projective": True, "spanning": True}
    assert d["divisibility_gcd"] % 3 == 0


def test_construct_pipes_into_verify(capsys, tmp_path):
    for q, delta, n in [(8, 32, 1049), (4, 2, 7), (8, 6, 18)]:
        code, out, _ = run(capsys, "construct", "--q", str(q), "--delta", str(delta), "--n", str(n), "--json")
        assert code == 0
        f = tmp_path / "m.json"
        f.write_text(out)
        d = json.loads(run(capsys, "verify", "--matrix", str(f), "--delta", str(delta), "--json")[1])
        assert d["effective_n"] == n and d["divisible"] and d["divisibility_gcd"] % delta == 0
        # matrix format as well
        code, out, _ = run(capsys, "construct", "--q", str(q), "--delta", str(delta), "--n", str(n))
        f.write_text(out)
        assert json.loads(run(capsys, "verify", "--matrix", str(f), "--json")[1])["n"] == n


def test_profile(capsys):
    d = json.loads(run(capsys, "profile", "--matrix", str(FIXTURES / "f8_n12.txt"), "--json")[1])
    assert d["hyperplane_profile"] == {"0": 22, "2": 48, "4": 3}
    assert d["km_arc"] is True and d["hyperoval"] is False


def test_search_and_classify(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--q", "8", "--v", "3", "--delta", "2", "--n", "11", "--projective", "--json")
    d = json.loads(out)
    assert code == 0 and d["status"] == "absent" and {"status", "nodes", "seconds"} <= set(d)
    code, out, _ = run(capsys, "search", "--q", "4", "--v", "3", "--delta", "2", "--n", "5", "--projective", "--json")
    d = json.loads(out)
    assert d["status"] == "exists" and sum(p["mult"] for p in d["witness"]["points"]) == 5
    reps = tmp_path / "reps"
    code, out, _ = run(capsys, "classify", "--q", "8", "--v", "3", "--delta", "2", "--n", "10", "--projective",
                       "--emit-reps", str(reps), "--json")
    d = json.loads(out)
    assert code == 0 and d["count"] == 1
    files = sorted(reps.iterdir())
    assert len(files) == 1
    v = json.loads(run(capsys, "verify", "--matrix", str(files[0]), "--json")[1])
    assert v["n"] == 10 and v["divisibility_gcd"] % 2 == 0 and v["projective"]


def test_budget_env_reaches_search(capsys, monkeypatch):
    monkeypatch.setenv("DIVCODES_NODE_BUDGET", "1")
    code, out, _ = run(capsys, "search", "--q", "8", "--v", "3", "--delta", "2", "--n", "11", "--no-bounds", "--json")
    assert code == 0 and json.loads(out)["status"] == "inconclusive"


def test_deterministic_output():
    argv = [sys.executable, "-m", "divcodes.cli", "search", "--q", "4", "--v", "3", "--delta", "2",
            "--n", "7", "--json", "--no-timing"]
    a = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, text=True, check=True).stdout
    assert a == b and json.loads(a)["seconds"] is None
    argv = [sys.executable, "-m", "divcodes.cli", "expand", "--q", "8", "--a", "2", "--b", "1", "--n", "195"]
    assert subprocess.run(argv, capture_output=True, text=True).stdout == subprocess.run(argv, capture_output=True, text=True).stdout
