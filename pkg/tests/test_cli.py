import subprocess
import sys

import pytest
from golden_runner import INPUTS, expected, load_cases, run

from kuroda_hol.cli import main
from kuroda_hol.deduction import check
from kuroda_hol.prooffile import load

CASES = load_cases()


def test_corpus_spans_exit_codes():
    assert len(CASES) >= 12
    assert {expected(c["name"])[0] for c in CASES} == {0, 1, 2}


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden(case):
    first = run(case["argv"])
    second = run(case["argv"])
    assert first == second
    assert first == expected(case["name"])


def test_translate_example(capsys):
    code = main(["translate", "--formula", "forall x:i. P x", "--normalize",
                 "--signature", str(INPUTS / "sig.txt")])
    assert code == 0
    assert capsys.readouterr().out == "~~(forall x:i. ~~(P x))\n"


def test_demo_writes_checkable_file(tmp_path, capsys):
    out = tmp_path / "rc.proof"
    assert main(["demo", "reverse-counterexample", "-o", str(out)]) == 0
    assert "Gamma:" in capsys.readouterr().out
    assert main(["check", str(out)]) == 0


def test_pem_declared_intuitionistic(capsys):
    assert main(["check", str(INPUTS / "pem_intuitionistic.proof")]) == 1
    assert "PEM-not-admitted" in capsys.readouterr().out


@pytest.mark.parametrize("cmd", [
    ["transform", "all_pem.proof"],
    ["lemma", "10", "--pred", "\\x:i. P x", "--signature", "sig.txt"],
    ["charac", "forall x:i. P x", "--signature", "sig.txt"],
    ["reverse", "all_pem_ku.proof", "--goal", "forall x:i. P x \\/ ~(P x)"],
])
def test_outputs_check(cmd, tmp_path):
    out = tmp_path / "out.proof"
    code, _, err = run(cmd + ["-o", str(out)])
    assert code == 0, err
    pf = load(out)
    assert check(pf.derivation, pf.settings)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kuroda_hol", "check", "pem_intuitionistic.proof"],
                          cwd=INPUTS, capture_output=True, text=True)
    assert proc.returncode == 1
    assert proc.stdout == "reject at root: PEM-not-admitted\n"
