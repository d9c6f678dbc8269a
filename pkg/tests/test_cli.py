"""Command-line interface: exit codes and output."""

import json
import subprocess
import sys

import pytest

from vpconf.cli import main
from vpconf.core import enumerate_language
from vpconf.modelio import load


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ioco_failure(capsys):
    code, out, _ = run(capsys, "ioco", "--spec", "drink_spec.json", "--impl", "iut_a.json")
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "fail" and lines[1].split()[-1] == "chg"


def test_ioco_reflexive(capsys):
    code, out, _ = run(capsys, "ioco", "--spec", "drink_spec.json", "--impl", "drink_spec.json")
    assert code == 0 and out.strip() == "conforms"


def test_ioco_json(capsys):
    code, out, _ = run(capsys, "ioco", "--spec", "drink_spec", "--impl", "iut_b", "--json")
    doc = json.loads(out)
    assert code == 1 and doc["verdict"] == "fail" and doc["witness"][-1] == "dco"
    assert set(doc["stats"]) >= {"states", "transitions", "saturation_pairs"}


def test_conf(capsys):
    args = ["conf", "--spec", "fig2_spec", "--desired", "fig10_desired",
            "--forbidden", "forbidden_anbn1"]
    code, out, _ = run(capsys, *args, "--impl", "fig4_impl")
    assert code == 1 and out.splitlines()[1] == "a a b b x"
    code, out, _ = run(capsys, *args, "--impl", "fig4_iso")
    assert code == 0


def test_empty(capsys):
    code, out, _ = run(capsys, "empty", "fig8_fault_language.json")
    assert code == 1 and out.splitlines() == ["nonempty", "x"]
    code, out, _ = run(capsys, "empty", "fig8_fault_language", "--json")
    assert json.loads(out)["witness"] == ["x"]


def test_constructions_write_models(capsys, tmp_path):
    o = tmp_path / "out.json"
    assert run(capsys, "complement", "fig10_desired", "-o", str(o))[0] == 0
    assert tuple("aabx") in enumerate_language(load(o), 4)
    assert run(capsys, "intersect", "fig10_desired", "fig7_complement", "-o", str(o))[0] == 0
    assert run(capsys, "union", "fig10_desired", "forbidden_anbn1", "-o", str(o))[0] == 0
    assert enumerate_language(load(o), 5) == {("b",), tuple("abb"), tuple("abx"), tuple("aabbx"),
                                              tuple("aabbb")}
    assert run(capsys, "product", "fig10_desired", "fig10_desired", "-o", str(o))[0] == 0
    assert run(capsys, "concat", "fig10_desired", "--suffix-set", "x", "-o", str(o))[0] == 0
    assert enumerate_language(load(o), 4) == {tuple("abxx")}
    assert run(capsys, "fault-model", "--spec", "drink_spec", "-o", str(o))[0] == 0
    assert load(o).fail_state == "_fail"
    assert run(capsys, "contract", "fig1", "-o", str(o))[0] == 0


def test_balanced(capsys):
    code, out, _ = run(capsys, "balanced", "fig2_spec", "--from", "s0", "--to", "s2")
    assert code == 0 and out.split() == ["a", "x"]
    code, out, _ = run(capsys, "balanced", "fig2_spec", "--from", "s2", "--to", "s0")
    assert code == 1 and out.strip() == "none"


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "fig10_desired", "--max-len", "5")
    assert code == 0 and out.splitlines() == ["a b x", "a a b b x"]


@pytest.mark.parametrize("argv", [
    ["empty", "no_such_model"],
    ["enumerate", "fig10_desired", "--max-len", "11"],
    ["complement", "fig2_spec", "-o", "/dev/null"],
    ["balanced", "fig4_impl", "--from", "q0", "--to", "q1"],
])
def test_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["ioco", "--spec", "drink_spec"])
    assert e.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "vpconf", "empty", "fig8_fault_language"],
                       capture_output=True, text=True)
    assert r.returncode == 1 and r.stdout.split() == ["nonempty", "x"]
