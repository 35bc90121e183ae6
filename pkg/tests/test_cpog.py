import pytest
from hypothesis import given, strategies as st

from certcount.cpog import (AddRup, CpogParseError, DeclareProduct, DeclareRoot, DeclareSum, DeleteRup,
                            clause_span, expand_defining, format_step, parse_cpog, serialize_cpog)
from certcount.pog import pog_size
from support import read


def test_parse_sum_root_and_addition():
    assert parse_cpog("12 s 7 5 6 7 10 0") == [DeclareSum(12, 7, 5, 6, (7, 10))]
    assert parse_cpog("r 10") == [DeclareRoot(10)]
    assert parse_cpog("25 a 5 1 3 0 3 6 0") == [AddRup(25, (5, 1, 3), (3, 6))]
    assert parse_cpog("d 1 36 8 10 0") == [DeleteRup(1, (36, 8, 10))]
    assert parse_cpog("9 p 20 0") == [DeclareProduct(9, 20, ())]


def test_comments_and_blank_lines_are_ignored():
    assert parse_cpog("c hello\n\n  \nr 3\nc bye\n") == [DeclareRoot(3)]


def test_worked_example_counts(example_steps):
    kinds = [type(s).__name__ for s in example_steps]
    assert kinds.count("DeclareProduct") == 4
    assert kinds.count("DeclareSum") == 2
    assert kinds.count("AddRup") == 12
    assert kinds.count("DeleteRup") == 16


def test_expand_product():
    step = parse_cpog("6 p 5 -3 -4 0")[0]
    assert expand_defining(step) == [(6, (5, 3, 4)), (7, (-5, -3)), (8, (-5, -4))]


def test_expand_sum():
    step = parse_cpog("12 s 7 5 6 7 10 0")[0]
    assert expand_defining(step) == [(12, (-7, 5, 6)), (13, (7, -5)), (14, (7, -6))]


def test_expand_empty_product():
    assert expand_defining(parse_cpog("9 p 20 0")[0]) == [(9, (20,))]


def test_expand_rejects_non_declarations():
    with pytest.raises(TypeError):
        expand_defining(DeclareRoot(1))


def test_defining_clause_total_matches_graph_size(example_steps, example_pog):
    decls = [s for s in example_steps if isinstance(s, (DeclareProduct, DeclareSum))]
    total = sum(len(expand_defining(s)) for s in decls)
    assert total == sum(clause_span(s) for s in decls) == pog_size(example_pog) == 19


@pytest.mark.parametrize("text,line", [
    ("12 s 7 5 6 0", 1),              # sum without hints
    ("12 s 7 5 0", 1),                # sum with one argument
    ("25 a 5 1 3 0 3 6", 1),          # missing hint terminator
    ("25 a 5 1 3", 1),                # missing clause terminator
    ("25 a 5 1 3 0 3 6 0 7", 1),      # trailing tokens
    ("c\n25 a 5 x 0 0", 2),           # non-integer
    ("25 a 5 a 0 0", 1),              # keyword in literal position
    ("25 q 1 0", 1),                  # unknown keyword
    ("d 25 0 3", 1),                  # trailing tokens after deletion
    ("5 d 1 0", 1),                   # leading ID on a deletion
    ("r", 1),                         # root without literal
    ("r 0", 1),
    ("r 1\nr 2", 2),                  # second root
    ("0 a 1 0 0", 1),                 # zero ID
    ("d 1 -3 0", 1),                  # negative hint
    ("6 p 0 0", 1),                   # product variable zero
])
def test_malformed_lines(text, line):
    with pytest.raises(CpogParseError) as info:
        parse_cpog(text)
    assert info.value.line == line


def test_format_rejects_unknown_objects():
    with pytest.raises(TypeError):
        format_step(object())


def test_worked_example_round_trip(example_steps):
    assert parse_cpog(serialize_cpog(example_steps)) == example_steps
    body = [l for l in read("example.cpog").splitlines() if l and not l.startswith("c")]
    assert serialize_cpog(example_steps).splitlines() == body


ids = st.integers(1, 10 ** 12)
lits = st.integers(-10 ** 12, 10 ** 12).filter(bool)
steps = st.one_of(
    st.builds(AddRup, ids, st.lists(lits, max_size=6).map(tuple), st.lists(ids, max_size=6).map(tuple)),
    st.builds(DeleteRup, ids, st.lists(ids, max_size=6).map(tuple)),
    st.builds(DeclareProduct, ids, ids, st.lists(lits, max_size=6).map(tuple)),
    st.builds(DeclareSum, ids, ids, lits, lits, st.lists(ids, min_size=1, max_size=6).map(tuple)),
)


@given(st.lists(steps, max_size=20), st.one_of(st.none(), lits))
def test_serialize_then_parse_is_identity(seq, root):
    if root is not None:
        seq = [*seq, DeclareRoot(root)]
    assert parse_cpog(serialize_cpog(seq)) == seq
