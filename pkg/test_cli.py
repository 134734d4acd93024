"""Tests for the cobham command-line interface."""

import os

import pytest

from cobhamkit.cli import main
from cobhamkit.dfao import parse_dfao

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
CONFIG = os.path.join(os.path.dirname(__file__), "config")


def fixture(name: str) -> str:
    return os.path.join(FIXTURES, name)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_indep_dependent(capsys):
    assert run_cli(capsys, "indep", "4", "8") == (0, "dependent: 4^3 = 8^2\n", "")


def test_indep_independent(capsys):
    code, out, _ = run_cli(capsys, "indep", "2", "3")
    assert code == 0
    assert out == "independent\n"


def test_approx(capsys):
    code, out, _ = run_cli(capsys, "approx", "2", "3", "1/2")
    assert code == 0
    fields = dict(line.split(" ", 1) for line in out.splitlines())
    m, n, difference = int(fields["m"]), int(fields["n"]), int(fields["difference"])
    assert difference == 2 ** m - 3 ** n
    assert abs(difference) * 2 <= 3 ** n


@pytest.mark.parametrize("eps", ["0", "abc", "0.25"])
def test_approx_bad_tolerance_is_usage_error(capsys, eps):
    code, _, err = run_cli(capsys, "approx", "2", "3", eps)
    assert code == 2
    assert "error" in err


def test_eval_and_prefix(capsys):
    assert run_cli(capsys, "eval", fixture("parity.dfao"), "5")[:2] == (0, "o\n")
    code, out, _ = run_cli(capsys, "prefix", fixture("periodic_3_12_base3.dfao"), "7")
    assert code == 0
    assert out.split("\n")[:-1] == ["3", "1", "2", "1", "2", "1", "2"]


def test_mkperiodic_then_prefix(capsys, tmp_path):
    path = str(tmp_path / "seq.dfao")
    assert run_cli(capsys, "mkperiodic", "5", "--pre", "a b", "--per", "x y z", "-o", path)[0] == 0
    code, out, _ = run_cli(capsys, "prefix", path, "8")
    assert code == 0
    assert out.split() == ["a", "b", "x", "y", "z", "x", "y", "z"]


def test_extend_and_reverse(capsys):
    code, out, _ = run_cli(capsys, "extend", fixture("parity.dfao"), "4")
    assert code == 0
    extended = parse_dfao(out)
    assert extended.digits == (0, 1, 2, 3, 4)
    assert extended.outputs[extended.run([3])] == "o"

    code, out, _ = run_cli(capsys, "reverse", fixture("parity.dfao"))
    assert code == 0
    assert "order lsd" in out
    assert parse_dfao(out).evaluate(6) == "e"


def test_extract_then_verify(capsys, tmp_path):
    cert = str(tmp_path / "cert.txt")
    code, out, _ = run_cli(
        capsys, "extract",
        "--a", fixture("periodic_3_12_base2.dfao"),
        "--b", fixture("periodic_3_12_base3.dfao"),
        "--verify", "1000", "-o", cert,
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("threshold ")
    period = int(lines[1].split()[1])
    assert period > 0 and period % 2 == 0
    assert lines[-1].startswith("PASS")

    for dfao in ("periodic_3_12_base2.dfao", "periodic_3_12_base5.json"):
        code, out, _ = run_cli(capsys, "verify", "--dfao", fixture(dfao), "--cert", cert, "--samples", "200")
        assert code == 0
        assert out.startswith("PASS")


def test_extract_output_is_deterministic(capsys):
    argv = ["extract", "--a", fixture("periodic_3_12_base2.dfao"), "--b", fixture("periodic_3_12_base3.dfao")]
    first = run_cli(capsys, *argv)
    second = run_cli(capsys, *argv)
    assert first == second


def test_extract_dependent_bases(capsys):
    code, out, err = run_cli(
        capsys, "extract", "--a", fixture("parity.dfao"), "--b", fixture("parity.dfao"),
    )
    assert code == 1
    assert out == ""
    assert "multiplicatively dependent" in err
    assert len(err.strip().splitlines()) == 1


def test_teleport(capsys):
    code, out, _ = run_cli(capsys, "teleport", "--dfao", fixture("parity.dfao"), "--x", "1", "--y", "3", "--n", "2")
    assert code == 0
    assert out.startswith("PASS")


def test_teleport_state_mismatch(capsys):
    code, _, err = run_cli(capsys, "teleport", "--dfao", fixture("parity.dfao"), "--x", "1", "--y", "2", "--n", "2")
    assert code == 1
    assert "does not reach state" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "eval", str(tmp_path / "absent.dfao"), "3")
    assert code == 1
    assert err.startswith("cobham eval:")


def test_invalid_dfao_file(capsys, tmp_path):
    path = tmp_path / "bad.dfao"
    path.write_text("base 2\nstates 1\ninitial 0\noutputs a\ntrans 0 0 0\n")
    code, _, err = run_cli(capsys, "eval", str(path), "3")
    assert code == 1
    assert "no transition" in err


def test_usage_errors(capsys):
    assert run_cli(capsys, "frobnicate")[0] == 2
    assert run_cli(capsys)[0] == 2
    assert run_cli(capsys, "eval", fixture("parity.dfao"))[0] == 2
    assert run_cli(capsys, "indep", "4", "eight")[0] == 2


def test_config_file(capsys):
    settings = os.path.join(CONFIG, "example_settings.json")
    code, out, _ = run_cli(
        capsys, "--config", settings, "extract",
        "--a", fixture("periodic_3_12_base2.dfao"),
        "--b", fixture("periodic_3_12_base3.dfao"),
        "--verify", "100",
    )
    assert code == 0
    assert "PASS: 101 window and 250 sampled indices" in out


def test_missing_config_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "--config", str(tmp_path / "nope.yaml"), "indep", "2", "3")
    assert code == 1
    assert "does not exist" in err
