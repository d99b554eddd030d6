import json

import pytest

from qalg import builtins
from qalg.cli import main, verify


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def corrupted(tmp_path):
    text = builtins.builtin_file_text("uso22").replace("[K,C2] = C1 - tau*D^2", "[K,C2] = C1")
    assert text != builtins.builtin_file_text("uso22")
    path = tmp_path / "broken.qalg"
    path.write_text(text)
    return path


def test_verify_all_passes(capsys):
    code, out, _ = run(capsys, "verify", "--algebra", "uso22", "--checks", "all", "--order", "6")
    assert code == 0
    assert out.rstrip().endswith("PASS")


def test_verify_uiso21_hopf_rmatrix(capsys):
    code, out, _ = run(capsys, "verify", "--algebra", "uiso21", "--checks", "hopf,rmatrix", "--order", "4")
    assert code == 0
    assert "[pass] intertwining" in out and "[pass] qybe" in out


def test_verify_corrupted_file_names_triple(capsys, corrupted):
    code, out, _ = run(capsys, "verify", "--algebra", str(corrupted), "--checks", "jacobi", "--order", "3")
    assert code == 1
    failing = [line for line in out.splitlines() if line.startswith("[fail] jacobi")]
    assert any("(H,K,C2)" in line for line in failing)
    assert all("C2" in line for line in failing)
    assert "residual:" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--checks", "nonsense"],
        ["verify", "--algebra", "nope"],
        ["verify", "--algebra", "usl2", "--checks", "realization"],
        ["verify", "--order", "-1"],
        ["frobnicate"],
        [],
        ["expand", "H (x) P"],
        ["expand", "Q + 1"],
        ["act", "casimir", "t^3", "--order", "2"],
        ["act", "Z", "x"],
        ["act", "K-deformed", "t", "--kind", "classical"],
        ["contract", "--map", "no-such-map"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_parse_error_file_exit_2(capsys, tmp_path):
    path = tmp_path / "bad.qalg"
    path.write_text("generators: A B\nbrackets:\n  [A,B] = \n")
    code, _, err = run(capsys, "verify", "--algebra", str(path))
    assert code == 2
    assert "3:11" in err and "missing expression" in err


def test_help_exit_0(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "--version")[0] == 0


def test_contract_poincare_map(capsys):
    code, out, _ = run(capsys, "contract", "--source", "uso22", "--target", "uiso21", "--order", "4")
    assert code == 0
    assert "[pass] rmatrix R" in out


def test_contract_no_rescale_diverges(capsys):
    code, out, _ = run(capsys, "contract", "--no-param-rescale", "--order", "4")
    assert code == 1
    assert "[diverged] relation [K,H]" in out


def test_contract_identity(capsys):
    code, _, _ = run(capsys, "contract", "--map", "identity", "--target", "uso22", "--order", "4")
    assert code == 0


def test_contract_map_from_file(capsys, tmp_path):
    path = tmp_path / "m.qalg"
    path.write_text(builtins.builtin_file_text("uso22"))
    code, _, _ = run(capsys, "contract", "--map", str(path), "--target", "uiso21", "--order", "3")
    assert code == 0


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "(exp(tau*H)-1)/tau", "--order", "3")
    assert code == 0
    assert out.strip() == "H + 1/2 tau H^2 + 1/6 tau^2 H^3 + 1/24 tau^3 H^4 + O(tau^4)"
    _, out2, _ = run(capsys, "expand", "K*P - P*K", "--order", "3")
    assert out2 == out
    _, out3, _ = run(capsys, "expand", "S(P)", "--order", "3")
    assert out3.strip() == "-P + tau H P - 1/2 tau^2 H^2 P + 1/6 tau^3 H^3 P + O(tau^4)"


def test_act(capsys):
    assert run(capsys, "act", "casimir-deformed", "x^2 + t^2") == (0, "0\nsolution\n", "")
    assert run(capsys, "act", "K-deformed", "t") == (0, "-x\n", "")
    assert run(capsys, "act", "casimir-classical", "x^2") == (0, "2\nnot a solution\n", "")
    assert run(capsys, "act", "casimir", "t^3", "--kind", "deformed")[1] == "-6 t - 6 tau\nnot a solution\n"


def test_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "--algebra", "usl2", "--checks", "jacobi,subalgebras", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"tool_version", "command", "algebra", "order", "status", "items", "notes"}
    assert doc["status"] == "pass" and doc["algebra"] == "usl2"
    for item in doc["items"]:
        assert {"check", "subject", "status", "seconds"} <= set(item)
        assert item["status"] in ("pass", "fail", "diverged")


def test_json_fractions_not_decimals(capsys, corrupted):
    _, out, _ = run(capsys, "verify", "--algebra", str(corrupted), "--checks", "jacobi", "--order", "2", "--format", "json")
    doc = json.loads(out)
    residuals = [i["residual"] for i in doc["items"] if i["status"] == "fail"]
    assert residuals and all(isinstance(r, str) and "." not in r for r in residuals)


def test_deterministic_and_jobs(capsys):
    argv = ["verify", "--algebra", "uso22", "--order", "3", "--deterministic", "--format", "json"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    _, c, _ = run(capsys, *argv, "--jobs", "3")
    assert a == b == c
    assert "seconds" not in a


def test_order_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("QALG_ORDER", "2")
    _, out, _ = run(capsys, "verify", "--algebra", "usl2", "--checks", "jacobi")
    assert "(order 2)" in out
    monkeypatch.setenv("QALG_ORDER", "banana")
    assert run(capsys, "verify", "--checks", "jacobi")[0] == 2


@pytest.mark.parametrize("name", builtins.BUILTIN_NAMES)
def test_every_builtin_verifies(name):
    assert verify(name, "all", 3).ok


def test_skipped_groups_are_noted():
    report = verify("uiso21", "all", 2)
    assert any(n.startswith("skipped realization") for n in report.notes)
