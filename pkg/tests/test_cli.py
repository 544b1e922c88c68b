import json

import pytest

from torica.cli import main
from torica.fan import dump_fan, realize_profile


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    out = {
        "p2": write("p2.json", {"rays": [[1, 0], [0, 1], [-1, -1]]}),
        "f0": write("f0.json", {"rays": [[1, 0], [0, 1], [-1, 0], [0, -1]]}),
        "bad": write("bad.json", {"rays": [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [1, -2]]}),
        "o3": write("o3.json", {"degrees": [3, 3, 3]}),
        "o4": write("o4.json", {"degrees": [4, 4, 4]}),
        "neg": write("neg.json", {"coefficients": [0, 0, -1]}),
        "q13": write("q13.json", {"degrees": [3, 1, 3, 1]}),
        "q23": write("q23.json", {"degrees": [3, 2, 3, 2]}),
        "alt": write("alt.json", {"coefficients": [3, 5] * 6}),
        "dir": tmp_path,
    }
    twelve = tmp_path / "twelve.json"
    dump_fan(realize_profile((-3, -1) * 6), twelve)
    out["twelve"] = str(twelve)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_fan_info(files, capsys):
    code, cap = run(capsys, "fan", "info", files["p2"])
    js = json.loads(cap.out)
    assert code == 0 and js["e"] == 3 and js["K2"] == 9 and js["picard_rank"] == 1
    code, cap = run(capsys, "fan", "info", files["twelve"])
    js = json.loads(cap.out)
    assert js["e"] == 12 and js["K2"] == 0 and js["picard_rank"] == 10


def test_fan_validation_failure(files, capsys):
    code, cap = run(capsys, "fan", "validate", files["bad"])
    assert code == 2
    assert "NotUnimodular" in cap.err and "v[4]" in cap.err


def test_missing_file_is_config_error(files, capsys):
    code, _ = run(capsys, "fan", "info", str(files["dir"] / "nope.json"))
    assert code == 1


def test_bad_flags_are_config_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "--r", "0", "--e", "13"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["nosuch"])
    assert exc.value.code == 1


def test_divisor_check(files, capsys):
    code, cap = run(capsys, "divisor", "check", "--fan", files["twelve"], "--div", files["alt"])
    js = json.loads(cap.out)
    assert code == 0 and js["form"] == "coefficients" and js["square"] == 48 and js["genus"] == 19
    code, _ = run(capsys, "divisor", "check", "--fan", files["p2"], "--div", files["neg"])
    assert code == 3


def test_adjoin(files, capsys):
    code, cap = run(capsys, "adjoin", "--fan", files["p2"], "--div", files["o3"])
    js = json.loads(cap.out)
    assert code == 0 and js["b"] == 0 and js["steps"][0]["outcome"] == "anticanonical"
    code, cap = run(capsys, "adjoin", "--fan", files["f0"], "--div", files["q23"])
    js = json.loads(cap.out)
    assert js["terminal"]["outcome"] == "fibration" and js["terminal"]["fiber_degree"] == 2
    code, cap = run(capsys, "adjoin", "--fan", files["f0"], "--div", files["q13"])
    assert json.loads(cap.out)["terminal"]["outcome"] == "terminal_low_euler"
    code, cap = run(capsys, "adjoin", "--fan", files["twelve"], "--div", files["alt"])
    js = json.loads(cap.out)
    assert js["b"] == 1 and js["telescoped_genus"]["ok"]
    code, _ = run(capsys, "adjoin", "--fan", files["p2"], "--div", files["neg"])
    assert code == 3


def test_bounds_eval(capsys):
    code, cap = run(capsys, "bounds", "--r", "2", "--e", "13")
    js = json.loads(cap.out)
    assert code == 0 and js["bound"] == 179 and js["c2_lower_bound_rank2"] == "179/4"
    code, _ = run(capsys, "bounds", "eval", "--r", "2", "--e", "5")
    assert code == 1


def test_bounds_surface(files, capsys):
    out = files["dir"] / "s.csv"
    code, _ = run(capsys, "bounds", "surface", "--rmin", "1", "--rmax", "20", "--emin", "13", "--emax", "100",
                  "--scaled", "--out", str(out))
    lines = out.read_text().splitlines()
    assert code == 0 and len(lines) == 1761
    assert lines[1] == "1,13,1,56,1,0.615384615385"


def test_bounds_claims_reports_the_failing_claim(files, capsys):
    out = files["dir"] / "claims.json"
    code, _ = run(capsys, "bounds", "claims", "--out", str(out))
    js = json.loads(out.read_text())
    assert code == 4
    failed = [c["claim"] for c in js if c["verdict"] == "fail"]
    assert failed == ["5r^2e, r<=10, e>=100"]
    assert set(js[0]) == {"claim", "grid", "verdict", "failures"}


def test_table1(capsys):
    code, cap = run(capsys, "table1")
    js = json.loads(cap.out)
    assert code == 0 and len(js) == 14
    assert js[-1]["c2"] == ">=7 open"


def test_bogomolov(files, capsys):
    code, cap = run(capsys, "bogomolov", "search", "--fan", files["p2"], "--h", files["o4"], "--c2", "3", "--box", "4")
    js = json.loads(cap.out)
    assert code == 0 and len(js["candidates"]) == 1 and js["candidates"][0]["deg_Z"] == 0
    code, cap = run(capsys, "bogomolov", "restrict", "--fan", files["p2"], "--h", files["o4"], "--c2", "3")
    assert code == 0 and json.loads(cap.out)["verdict"] == "pass"
    code, _ = run(capsys, "bogomolov", "search", "--fan", files["p2"], "--h", files["o3"], "--c2", "3")
    assert code == 1


def test_enumerate_and_verify(files, capsys):
    out = files["dir"] / "inv.json"
    code, _ = run(capsys, "enumerate", "--emax", "6", "--amax", "2", "--out", str(out))
    js = json.loads(out.read_text())
    assert code == 0 and js["surface_count"] == len(js["entries"])
    rep = files["dir"] / "rep.json"
    code, _ = run(capsys, "verify", "--emax", "7", "--amax", "2", "--tmax", "3", "--r", "1,2", "--workers", "1",
                  "--out", str(rep))
    js = json.loads(rep.read_text())
    assert code == 0 and js["counterexamples"] == []
    assert js["params"]["r"] == [1, 2]


def test_outputs_are_deterministic(files, capsys):
    a = files["dir"] / "a.json"
    b = files["dir"] / "b.json"
    main(["verify", "--emax", "7", "--amax", "2", "--tmax", "3", "--workers", "1", "--out", str(a)])
    main(["verify", "--emax", "7", "--amax", "2", "--tmax", "3", "--workers", "2", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
