import json
import subprocess
import sys

import pytest

from quatsplit.cli import EXIT_DIVISION, EXIT_INAPPLICABLE, EXIT_INVALID, EXIT_IO, EXIT_OK, SCHEMA, main, parse_alpha
from quatsplit.errors import InvalidArgument
from quatsplit.quadfield import make_field


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    env = json.loads(out) if out.strip() and not argv[:2] == ("--format", "human") else None
    return code, env, out


@pytest.mark.parametrize(
    "argv,value",
    [
        (("symbol", "legendre", "-a", "5", "-p", "7"), -1),
        (("symbol", "hilbert", "-a", "2", "-b", "5", "-p", "5"), -1),
        (("symbol", "biquadratic", "-a", "2", "-p", "17"), -1),
        (("symbol", "hilbert", "-a", "-1", "-b", "-1", "-p", "inf"), -1),
        (("oracle", "local", "-a", "2", "-b", "5", "-p", "5"), -1),
    ],
)
def test_symbol_values(capsys, argv, value):
    code, env, _ = run(capsys, *argv)
    assert code == EXIT_OK
    assert env["schema"] == SCHEMA
    assert env["result"]["value"] == value


def test_residue_k(capsys):
    code, env, _ = run(capsys, "symbol", "residue-K", "-d", "13", "--alpha", "4+sqrt(13)", "-p", "3", "--ideal", "1")
    assert code == EXIT_OK
    assert env["result"] == {"value": -1, "ideal": "P3'", "splitting": "split", "residue_degree": 1, "valuation": 0}


@pytest.mark.parametrize(
    "argv,code,verdict",
    [
        (("decide", "pq", "-d", "3", "-p", "7", "-q", "47"), EXIT_OK, "split"),
        (("decide", "general", "-d", "5", "--alpha", "3", "-m", "13"), EXIT_OK, "split"),
        (("decide", "unit", "-d", "3", "-m", "13"), EXIT_DIVISION, "division"),
        (("decide", "general", "-d", "13", "--alpha", "4 + sqrt(13)", "-m", "5"), EXIT_DIVISION, "division"),
        (("decide", "rational-alpha", "-d", "5", "--alpha", "3", "-m", "13"), EXIT_OK, "split"),
        (("decide", "biquadratic", "-d", "3", "--alpha", "2+sqrt(3)", "-m", "13"), EXIT_DIVISION, "division"),
        (("decide", "quartic", "-d", "5", "--alpha", "5+2*sqrt(5)", "-m", "41", "--abc", "5,2,1"), EXIT_OK, "split"),
        (("decide", "unit", "-d", "5", "-m", "29"), EXIT_OK, "split"),
    ],
)
def test_decide(capsys, argv, code, verdict):
    got, env, _ = run(capsys, *argv)
    assert got == code
    assert env["result"]["verdict"] == verdict
    assert isinstance(env["evidence"], list)


def test_decide_unit_falls_back_to_general(capsys):
    code, env, _ = run(capsys, "decide", "unit", "-d", "3", "-m", "5")
    assert env["result"]["rule"] == "general"
    assert "fallback" in env["result"]
    assert code in (EXIT_OK, EXIT_DIVISION)


def test_exit_codes_for_errors(capsys):
    assert run(capsys, "decide", "general", "-d", "13", "--alpha", "4+sqrt(13)", "-m", "7")[0] == EXIT_INAPPLICABLE
    assert run(capsys, "decide", "general", "-d", "13", "--alpha", "4+sqrt(12)", "-m", "5")[0] == EXIT_INVALID
    assert run(capsys, "decide", "general", "-d", "12", "--alpha", "1", "-m", "5")[0] == EXIT_INVALID
    assert run(capsys, "symbol", "biquadratic", "-a", "3", "-p", "17")[0] == EXIT_INVALID
    assert run(capsys, "oracle", "local", "-a", "2", "-b", "5", "-p", "97")[0] == EXIT_INVALID
    assert run(capsys, "decide", "quartic", "-d", "5", "--alpha", "3", "-m", "29", "--abc", "5,2,1")[0] == EXIT_INAPPLICABLE
    with pytest.raises(SystemExit) as info:
        main(["decide", "nonsense", "-d", "5"])
    assert info.value.code == EXIT_INVALID


def test_oracle_conic(capsys):
    code, env, _ = run(capsys, "oracle", "conic", "-d", "3", "--alpha", "1", "-m", "5", "--height", "10")
    assert code == EXIT_OK
    assert env["result"]["found"] and env["result"]["x"] == "1" and env["result"]["y"] == "0"
    code, env, _ = run(capsys, "oracle", "conic", "-d", "13", "--alpha", "4+sqrt(13)", "-m", "5", "--height", "6")
    assert code == EXIT_OK
    assert env["result"]["found"] is False
    assert "verdict" not in env["result"]


def test_fib_lists(capsys, tmp_path):
    store = tmp_path / "fib.jsonl"
    code, env, _ = run(capsys, "fib", "--max-p", "50", "--list", "1", "--store", str(store))
    assert code == EXIT_OK and env["result"]["p"] == [13]
    code, env, _ = run(capsys, "fib", "--max-p", "100", "--list", "4", "--store", str(store), "--resume")
    assert env["result"]["p"] == [7, 23, 43, 47, 83]
    code, env, _ = run(capsys, "fib", "--max-p", "600", "--list", "2")
    assert env["result"]["p"] == [17, 137, 449, 569]
    code, env, _ = run(capsys, "fib", "--max-p", "100")
    assert env["result"]["lists"]["none"] == [29]


def test_fib_store_env_and_io_error(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("QUATSPLIT_STORE", str(tmp_path / "env.jsonl"))
    code, env, _ = run(capsys, "fib", "--max-p", "30")
    assert code == EXIT_OK and (tmp_path / "env.jsonl").exists()
    code, _, _ = run(capsys, "fib", "--max-p", "30", "--store", str(tmp_path / "no" / "such" / "dir.jsonl"))
    assert code == EXIT_IO


def test_json_roundtrip(capsys):
    for argv in (
        ("decide", "pq", "-d", "3", "-p", "7", "-q", "47"),
        ("symbol", "residue-K", "-d", "13", "--alpha", "4+sqrt(13)", "-p", "3"),
        ("oracle", "conic", "-d", "3", "--alpha", "2+sqrt(3)", "-m", "3", "--height", "5"),
    ):
        _, env, out = run(capsys, *argv)
        assert json.loads(json.dumps(env, indent=2)) == env
        assert json.dumps(env, indent=2) == out.strip()


def test_human_format(capsys):
    code = main(["--format", "human", "decide", "general", "-d", "13", "--alpha", "4+sqrt(13)", "-m", "5"])
    out = capsys.readouterr().out
    assert code == EXIT_DIVISION
    assert "result.verdict" in out and '"division"' in out and "[FAIL]" in out


def test_parse_alpha_grammar():
    K = make_field(13)
    assert parse_alpha("4+sqrt(13)", K) == K.from_sqrt(4, 1)
    assert parse_alpha(" 4 + 1 * sqrt( 13 ) ", K) == K.from_sqrt(4, 1)
    assert parse_alpha("-3*sqrt(13)", K) == K.from_sqrt(0, -3)
    assert parse_alpha("2-w", K) == K(2, -1)
    assert parse_alpha("7", K) == K(7)
    for bad in ("", "4+", "4 sqrt(13)", "x", "4+sqrt(5)", "4++w"):
        with pytest.raises(InvalidArgument):
            parse_alpha(bad, K)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "quatsplit", "decide", "pq", "-d", "3", "-p", "7", "-q", "47"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["verdict"] == "split"
