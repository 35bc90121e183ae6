import io
import subprocess
import sys

import pytest

from certcount.cli import GEN_FAILURE, OK, PARSE_ERROR, REJECTED, run
from certcount.cnf import format_dimacs
from certcount.cpog import parse_cpog, serialize_cpog
from certcount.families import equivalence_blocks
from support import DATA, read

CNF = str(DATA / "example.cnf")
CPOG = str(DATA / "example.cpog")
NNF = str(DATA / "example.nnf")


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out)
    return code, out.getvalue()


def lines(text):
    return dict(line.split(" ", 1) for line in text.splitlines() if " " in line)


@pytest.fixture
def tampered(tmp_path):
    path = tmp_path / "tampered.cpog"
    path.write_text(read("example.cpog").replace("12 s 7 5 6 7 10 0", "12 s 7 5 6 3 10 0"))
    return path


def test_check_worked_example():
    code, out = call("check", CNF, CPOG)
    assert code == OK
    assert out.strip() == "VERIFIED FULL"


def test_check_tampered_sum_hint(tampered):
    code, out = call("check", CNF, tampered)
    assert code == REJECTED
    assert out.startswith("REJECTED step=3 reason=")
    assert "non-defining" in out


def test_count_worked_example():
    code, out = call("count", CNF, CPOG)
    assert code == OK
    assert out.splitlines() == ["VERIFIED FULL", "models 6"]


def test_count_weighted_and_hash(tmp_path):
    w = tmp_path / "w.txt"
    w.write_text("1 0.8\n-1 0.2\n")
    code, out = call("count", CNF, CPOG, "--weights", w, "--mod", (1 << 61) - 1, "--seed", 3)
    assert code == OK
    got = lines(out)
    assert got["weighted-count"] == "0.3"
    assert 0 <= int(got["hash"]) < (1 << 61) - 1


def test_count_refuses_rejected_proof(tampered):
    code, out = call("count", CNF, tampered)
    assert code == REJECTED
    assert "models" not in out


def test_count_refuses_reverse_only(tmp_path):
    proof = tmp_path / "one.cpog"
    assert call("gen", CNF, NNF, "-o", proof, "--mode", "one-sided")[0] == OK
    code, out = call("check", CNF, proof, "--one-sided")
    assert (code, out.strip()) == (OK, "VERIFIED REVERSE-ONLY")
    code, out = call("count", CNF, proof)
    assert code == REJECTED and "models" not in out


def test_print_flags_reprint_canonical_text():
    code, out = call("check", CNF, CPOG, "--print-cpog")
    assert code == OK
    assert out == serialize_cpog(parse_cpog(read("example.cpog"))) + "VERIFIED FULL\n"
    code, out = call("check", CNF, CPOG, "--print-cnf")
    assert out.startswith("p cnf 4 5\n")


@pytest.mark.parametrize("mode", ["hybrid", "structural", "mono", "monolithic"])
def test_gen_then_check(tmp_path, mode):
    proof = tmp_path / "out.cpog"
    code, out = call("gen", CNF, NNF, "-o", proof, "--mode", mode)
    assert code == OK
    stats = lines(out)
    assert int(stats["steps"]) == len(parse_cpog(proof.read_text()))
    for key in ("mode", "forward-steps", "assertions", "deletions", "lemmas", "lemma-applications",
                "sat-calls", "expansions-max"):
        assert key in stats
    assert call("check", CNF, proof) == (OK, "VERIFIED FULL\n")


def test_gen_structural_matches_golden(tmp_path):
    proof = tmp_path / "out.cpog"
    assert call("gen", CNF, NNF, "-o", proof, "--mode", "structural", "--no-lemmas")[0] == OK
    assert parse_cpog(proof.read_text()) == parse_cpog(read("example.cpog"))


def test_gen_threshold_switch(tmp_path):
    cnf, g = equivalence_blocks(3)
    (tmp_path / "b.cnf").write_text(format_dimacs(cnf))
    (tmp_path / "b.nnf").write_text(g.to_text())
    code, out = call("gen", tmp_path / "b.cnf", tmp_path / "b.nnf", "-o", tmp_path / "b.cpog",
                     "--threshold", 10)
    assert code == OK
    assert lines(out)["mode"] == "structural+monolithic"


def test_gen_failure_on_wrong_graph(tmp_path):
    (tmp_path / "a.cnf").write_text("p cnf 3 1\n1 3 0\n")
    (tmp_path / "b.nnf").write_text("o 1 0\nt 2 0\n1 2 -3 0\n1 2 3 2 0\n")
    code, out = call("gen", tmp_path / "a.cnf", tmp_path / "b.nnf", "-o", tmp_path / "x.cpog",
                     "--mode", "structural")
    assert code == GEN_FAILURE
    assert out.startswith("error ")


def test_oracle(tmp_path):
    assert call("oracle", CNF) == (OK, "models 6\n")
    w = tmp_path / "w.txt"
    w.write_text("1 0.8\n-1 0.2\n")
    assert lines(call("oracle", CNF, "--weights", w)[1])["weighted-count"] == "0.3"
    big = tmp_path / "big.cnf"
    big.write_text("p cnf 40 1\n1 2 0\n")
    assert call("oracle", big)[0] == PARSE_ERROR


@pytest.mark.parametrize("argv", [
    ["check", "missing.cnf", CPOG],
    ["frobnicate"],
    [],
])
def test_parse_errors(argv):
    assert call(*argv)[0] == PARSE_ERROR


def test_bad_proof_text(tmp_path):
    bad = tmp_path / "bad.cpog"
    bad.write_text("25 q 1 0\n")
    code, out = call("check", CNF, bad)
    assert code == PARSE_ERROR and out.startswith("error ")


def test_bad_weights(tmp_path):
    w = tmp_path / "w.txt"
    w.write_text("1 1/3\n")
    assert call("count", CNF, CPOG, "--weights", w)[0] == PARSE_ERROR


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "certcount", "check", CNF, CPOG],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "VERIFIED FULL"
