import pytest
from hypothesis import given

from certcount.cnf import CnfFormula, DimacsError, clause_is_tautology, format_dimacs, parse_dimacs
from support import cnfs, read

EXAMPLE_CLAUSES = [(-1, 3, -4), (-1, -3, 4), (3, -4), (1, -3, 4), (-1, -2)]


def test_parse_worked_example():
    f = parse_dimacs(read("example.cnf"))
    assert f.var_count == 4
    assert f.clause_count == 5
    assert f.clauses == EXAMPLE_CLAUSES
    assert f.clause(1) == (-1, 3, -4)
    assert list(f.ids()) == [1, 2, 3, 4, 5]


def test_parse_accepts_bytes():
    f = parse_dimacs(read("example.cnf").encode())
    assert f.clauses == EXAMPLE_CLAUSES


def test_empty_formula():
    f = parse_dimacs("p cnf 0 0\n")
    assert (f.var_count, f.clause_count) == (0, 0)
    assert format_dimacs(f) == "p cnf 0 0\n"


def test_tautological_clause_is_flagged():
    f = parse_dimacs("p cnf 2 1\n1 -1 0\n")
    assert f.clauses == [(1, -1)]
    assert f.tautologies == {1}


def test_duplicate_literals_preserved_and_flagged():
    f = parse_dimacs("p cnf 2 1\n1 1 2 0\n")
    assert f.clauses == [(1, 1, 2)]
    assert f.duplicates == {1}
    assert format_dimacs(f) == "p cnf 2 1\n1 1 2 0\n"


def test_empty_clause():
    f = parse_dimacs("p cnf 1 1\n0\n")
    assert f.clauses == [()]
    assert parse_dimacs(format_dimacs(f)).clauses == [()]


def test_clause_spanning_lines():
    f = parse_dimacs("p cnf 3 2\n1 2\n 3 0 -1\n0\n")
    assert f.clauses == [(1, 2, 3), (-1,)]


@pytest.mark.parametrize("clause,expected", [((1, -1), True), ((1, 3, -4), False), ((), False)])
def test_clause_is_tautology(clause, expected):
    assert clause_is_tautology(clause) is expected


def test_weight_comments_captured():
    text = "c p weight 1 0.8 0\nc p weight -1 0.2 0\np cnf 2 1\n1 2 0\n"
    f = parse_dimacs(text)
    assert f.weights == {1: "0.8", -1: "0.2"}
    again = parse_dimacs(format_dimacs(f, weights=True))
    assert again.weights == f.weights


@pytest.mark.parametrize("text,line,column", [
    ("1 2 0\n", 1, 1),                      # clause before header
    ("p cnf 2\n", 1, 1),                    # short header
    ("p cnf 2 1\n1 3 0\n", 2, 3),           # literal out of range
    ("p cnf 2 1\n1 x 0\n", 2, 3),           # non-integer token
    ("p cnf 2 2\n1 0\n", 2, 0),             # clause count mismatch
    ("p cnf 2 1\n1 2\n", 2, 0),             # unterminated clause
    ("p cnf 2 1\np cnf 2 1\n1 0\n", 2, 1),  # duplicate header
])
def test_rejections_carry_position(text, line, column):
    with pytest.raises(DimacsError) as info:
        parse_dimacs(text)
    assert info.value.line == line
    assert info.value.column == column
    assert f"line {line}" in str(info.value)


def test_missing_header():
    with pytest.raises(DimacsError, match="missing"):
        parse_dimacs("c only a comment\n")


def test_from_clauses_checks_range():
    with pytest.raises(DimacsError):
        CnfFormula.from_clauses(2, [(1, 5)])


def test_worked_example_round_trip():
    f = parse_dimacs(read("example.cnf"))
    g = parse_dimacs(format_dimacs(f))
    assert (g.var_count, g.clauses) == (f.var_count, f.clauses)


@given(cnfs(max_vars=12, max_clauses=30))
def test_format_then_parse_is_identity(f):
    g = parse_dimacs(format_dimacs(f))
    assert g.var_count == f.var_count
    assert g.clauses == f.clauses
    assert g.tautologies == f.tautologies
