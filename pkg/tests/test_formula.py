import pytest
from hypothesis import given, strategies as st

from nestcount.formula import (Clause, CnfFormula, DimacsError, Literal, formula_hypergraph,
                               isolated_variables, parse_dimacs, serialize_dimacs)
from nestcount.hypergraph import Hypergraph


def test_parse_simple_clause():
    f = parse_dimacs("p cnf 2 1\n1 -2 0")
    assert f.declared_var_count == 2
    assert f.clauses == (Clause((Literal(1, True), Literal(2, False))),)


def test_parse_drops_tautology():
    f = parse_dimacs("p cnf 1 1\n1 -1 0")
    assert f.clauses == ()
    assert f.tautology_count == 1


def test_parse_merges_duplicates_and_counts_empty():
    f = parse_dimacs("p cnf 3 2\n1 1 2 0\n0")
    assert f.clauses == (Clause.from_ints([1, 2]),)
    assert f.empty_clause_count == 1


def test_parse_accepts_bytes_comments_and_multiline_clauses():
    f = parse_dimacs(b"c hello\np cnf 3 2\n1 2\n 3 0 -1\n0\n")
    assert [sorted(map(int, c)) for c in f.clauses] == [[1, 2, 3], [-1]]


def test_parse_satlib_trailer():
    f = parse_dimacs("p cnf 2 1\n1 2 0\n%\n0\n")
    assert len(f.clauses) == 1 and f.empty_clause_count == 0


@pytest.mark.parametrize("text, line", [
    ("p cnf x 1\n1 0", 1),
    ("p dnf 2 1\n1 0", 1),
    ("c x\np cnf 2 1\n3 0", 3),
    ("p cnf 2 1\n1 a 0", 2),
    ("p cnf 2 2\n1 0\n2", 3),
    ("1 2 0", 1),
    ("p cnf 2 1\n-0", 2),
])
def test_parse_errors_report_line(text, line):
    with pytest.raises(DimacsError) as info:
        parse_dimacs(text)
    assert info.value.line == line


def test_header_clause_count_mismatch_is_only_a_warning(caplog):
    f = parse_dimacs("p cnf 2 5\n1 0\n")
    assert len(f.clauses) == 1
    assert "declares 5 clauses" in caplog.text


def test_formula_hypergraph():
    f = CnfFormula.from_clauses(3, [[1, -2], [2, 3]])
    assert formula_hypergraph(f) == Hypergraph.from_edges([{1, 2}, {2, 3}])
    g = CnfFormula.from_clauses(2, [[1, 2], [-1, -2]])
    assert formula_hypergraph(g).edges == {frozenset({1, 2})}
    assert formula_hypergraph(CnfFormula(0)) == Hypergraph(frozenset(), frozenset())


def test_isolated_variables():
    assert isolated_variables(parse_dimacs("p cnf 5 1\n1 0")) == 4
    assert isolated_variables(CnfFormula(3)) == 3
    assert isolated_variables(parse_dimacs("p cnf 2 1\n1 2 0")) == 0


def test_clause_falsifier():
    c = Clause.from_ints([3, -1])
    assert c.falsifier() == {1: 1, 3: 0}
    assert not c.satisfied_by(c.falsifier())


def test_serializer_format():
    f = CnfFormula.from_clauses(3, [[2, -1], [3], []])
    assert serialize_dimacs(f) == "p cnf 3 3\n-1 2 0\n3 0\n0\n"


raw_clause = st.lists(st.integers(1, 6).flatmap(lambda v: st.sampled_from([v, -v])), max_size=5)


@given(st.lists(raw_clause, max_size=8))
def test_roundtrip_and_clause_accounting(clauses):
    text = "p cnf 6 %d\n" % len(clauses) + "".join(" ".join(map(str, c)) + " 0\n" for c in clauses)
    f = parse_dimacs(text)
    assert len(f.clauses) + f.tautology_count + f.empty_clause_count == len(clauses)
    once = parse_dimacs(serialize_dimacs(f))
    assert (once.clauses, once.empty_clause_count, once.declared_var_count) == \
        (f.clauses, f.empty_clause_count, f.declared_var_count)
    assert parse_dimacs(serialize_dimacs(once)) == once
    h = formula_hypergraph(f)
    assert frozenset() not in h.edges
