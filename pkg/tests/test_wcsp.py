import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from nestcount.formula import CnfFormula, formula_hypergraph, parse_dimacs
from nestcount.gen import random_edges, random_formula, random_wcsp
from nestcount.oracle import brute_total, brute_w
from nestcount.wcsp import (EvalMode, WcspdError, WcspInstance, WeightedConstraint, cnf_to_count_instance,
                            cnf_to_max_instance, eval_total, merge_equal_scopes, parse_wcspd,
                            serialize_wcspd)

SUM, MAX = EvalMode.SUM, EvalMode.MAX
X, Y = 1, 2


def only(instance):
    (c,) = instance.constraints
    return c


def test_count_encoding_of_binary_clause():
    c = only(cnf_to_count_instance(CnfFormula.from_clauses(2, [[X, -Y]])))
    assert c.scope == (X, Y) and c.default == 1
    assert dict(c.support) == {(0, 1): 0}


def test_count_encoding_of_unit_clause():
    c = only(cnf_to_count_instance(CnfFormula.from_clauses(1, [[X]])))
    assert c.scope == (X,) and c.default == 1 and dict(c.support) == {(0,): 0}


def test_count_encoding_partition_function():
    inst = cnf_to_count_instance(CnfFormula.from_clauses(2, [[X, Y], [-X]]))
    assert brute_total(inst) == 1


def test_count_encoding_rejects_empty_clause():
    with pytest.raises(ValueError):
        cnf_to_count_instance(parse_dimacs("p cnf 1 2\n1 0\n0\n"))


def test_max_encoding_of_unit_clause():
    c = only(cnf_to_max_instance(CnfFormula.from_clauses(1, [[X]])))
    assert c.default == 2 and dict(c.support) == {(0,): 1}


def test_max_encoding_values():
    assert brute_total(cnf_to_max_instance(CnfFormula.from_clauses(1, [[X], [-X]])), MAX) == 2
    assert brute_total(cnf_to_max_instance(CnfFormula(0)), MAX) == 1


def test_merge_pointwise_product():
    a = WeightedConstraint.make(0, [X], 1, {(0,): 0})
    b = WeightedConstraint.make(1, [X], 1, {(1,): 0})
    c = only(merge_equal_scopes(WcspInstance(2, [a, b])))
    assert c.default == 1 and dict(c.support) == {(0,): 0, (1,): 0}


def test_merge_with_defaults():
    a = WeightedConstraint.make(0, [X], 2, {(0,): 1})
    b = WeightedConstraint.make(1, [X], 3, {(0,): 5})
    c = only(merge_equal_scopes(WcspInstance(2, [a, b])))
    assert c.default == 6 and dict(c.support) == {(0,): 5}


def test_merge_folds_empty_scopes_and_reorders_keys():
    a = WeightedConstraint.make(0, [Y, X], 1, {(1, 0): 3})
    b = WeightedConstraint.make(1, [X, Y], 2, {(0, 1): 5})
    e = WeightedConstraint.make(2, [], Fraction(1, 3), {(): Fraction(7, 2)})
    m = merge_equal_scopes(WcspInstance(2, [a, b, e]))
    assert m.scalar == Fraction(7, 2)
    c = only(m)
    assert c.scope == (X, Y) and c.default == 2 and dict(c.support) == {(0, 1): 15}


def random_instance(seed, max_vars=5):
    rng = random.Random(seed)
    n = rng.randint(1, max_vars)
    D = rng.randint(1, 3)
    scopes = random_edges(rng, n, rng.randint(1, 4), max_arity=3)
    scopes = scopes + [rng.choice(scopes) for _ in range(rng.randint(0, 3))]
    return random_wcsp(rng, scopes, D, max_num=5, max_den=4)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_merge_preserves_semantics(seed):
    inst = random_instance(seed)
    merged = merge_equal_scopes(inst)
    assert merged.size <= inst.size
    scopes = [c.scope for c in merged.constraints]
    assert len(scopes) == len(set(scopes))
    vs = sorted(inst.variables)
    for values in product(range(inst.domain_size), repeat=len(vs)):
        a = dict(zip(vs, values))
        for mode in EvalMode:
            assert inst.scalar * brute_w(inst.constraints, a, mode, inst.domain_size) == \
                merged.scalar * brute_w(merged.constraints, a, mode, inst.domain_size)


def test_eval_total():
    assert eval_total(WcspInstance(2)) == 1
    inst = WcspInstance(2, [WeightedConstraint.make(0, [X], 1, {(1,): 3})])
    assert eval_total(inst, SUM) == 4 and eval_total(inst, MAX) == 3
    zero = WcspInstance(2, [inst.constraints[0], WeightedConstraint.make(1, [X, Y], 0)])
    assert eval_total(zero, SUM) == 0


def test_weights_are_lowest_terms_and_nonnegative():
    c = WeightedConstraint.make(0, [X], "4/6", {(0,): Fraction(10, 4)})
    assert (c.default.numerator, c.default.denominator) == (2, 3)
    assert (c.support[(0,)].numerator, c.support[(0,)].denominator) == (5, 2)
    with pytest.raises(ValueError):
        WeightedConstraint.make(0, [X], -1)


UNIT = "p wcspd 2 2 1\ncon 1 1 default 1/1\nt 0 0/1\n"


def test_parse_wcspd_unit_clause():
    inst = parse_wcspd(UNIT)
    ref = cnf_to_count_instance(CnfFormula.from_clauses(2, [[1]]))
    assert inst.domain_size == 2 and inst.num_vars == 2
    assert only(inst).same_table(only(ref))


def test_wcspd_roundtrip_canonical():
    text = ("p wcspd 4 3 3\ncon 0 default 3/2\ncon 2 1 3 default 1/2\nt 0 2 0/1\nt 2 1 7/3\n"
            "con 1 4 default 2/1\n")
    assert serialize_wcspd(parse_wcspd(text)) == text
    assert serialize_wcspd(parse_wcspd(UNIT)) == UNIT


def test_serializer_omits_default_entries_and_normalises():
    inst = parse_wcspd("# c\np wcspd 1 2 1\ncon 1 1 default 2/4\nt 0 1/2\nt 1 6/4 # x\n")
    assert serialize_wcspd(inst) == "p wcspd 1 2 1\ncon 1 1 default 1/2\nt 1 3/2\n"


def test_serializer_writes_scalar():
    inst = WcspInstance(2, [], scalar=Fraction(5, 3))
    assert parse_wcspd(serialize_wcspd(inst)).constraints[0].value(()) == Fraction(5, 3)


@pytest.mark.parametrize("text", [
    "p wcspd 2 2 1\ncon 1 1 default 1/1\nt 5 1/1\n",
    "p wcspd 2 2 1\ncon 1 1 default 1/1\nt 0 1 1/1\n",
    "p wcspd 2 2 1\ncon 2 1 default 1/1\n",
    "p wcspd 2 2 1\ncon 1 1 default 1/0\n",
    "p wcspd 2 2 1\ncon 1 1 default -1/2\n",
    "p wcspd 2 2 1\ncon 1 1 default 1/1\nt 0 1/1\nt 0 2/1\n",
    "p wcspd 2 2 1\ncon 1 3 default 1/1\n",
    "p wcspd 2 2 2\ncon 1 1 default 1/1\n",
    "p wcspd 2 2 1\nt 0 1/1\n",
    "con 1 1 default 1/1\n",
    "p wcspd 2 2 1\ncon 2 1 1 default 1/1\n",
])
def test_parse_wcspd_rejects(text):
    with pytest.raises(WcspdError):
        parse_wcspd(text)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_wcspd_roundtrip_random(seed):
    inst = random_instance(seed)
    text = serialize_wcspd(inst)
    again = parse_wcspd(text)
    assert serialize_wcspd(again) == text
    assert brute_total(again) == brute_total(inst)


def random_cnf(seed, max_vars=12):
    rng = random.Random(seed)
    n = rng.randint(1, max_vars)
    return random_formula(rng, random_edges(rng, n, rng.randint(1, 10), max_arity=4), n)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_count_and_max_encodings_pointwise(seed):
    f = random_cnf(seed)
    count_inst, max_inst = cnf_to_count_instance(f), cnf_to_max_instance(f)
    assert count_inst.hypergraph() == formula_hypergraph(f)
    assert max_inst.hypergraph() == formula_hypergraph(f)
    assert count_inst.size == count_inst.structural_size == len(f)
    vs = sorted(f.variables)
    for values in product((0, 1), repeat=len(vs)):
        a = dict(zip(vs, values))
        satisfied = sum(c.satisfied_by(a) for c in f.clauses)
        assert brute_w(count_inst.constraints, a, SUM, 2) == (satisfied == len(f.clauses))
        assert brute_w(max_inst.constraints, a, MAX, 2) == 2 ** satisfied
