import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from certcount.cnf import CnfFormula
from certcount.evaluator import (EvaluationError, FractionRing, PrimeField, Q25Ring, density, function_hash,
                                 is_prime, normalized_weights, parse_weights, ring_eval, unweighted_count,
                                 weighted_count)
from certcount.generator import generate
from certcount.checker import check_proof
from certcount.oracle import brute_count, brute_literal_weighted, brute_weighted, pog_mask
from certcount.pog import Pog, assignments, evaluate, evaluate_all
from certcount.q25 import HALF, ONE, ZERO, Q25
from support import compiled, random_pog

MERSENNE = (1 << 61) - 1


def constant(value: bool, n: int = 4) -> Pog:
    p = Pog(n)
    p.add_product(n + 1, ())
    p.set_root(n + 1 if value else -(n + 1))
    return p


def test_worked_example_density(example_pog):
    trace = {}
    d = ring_eval(example_pog, 10, lambda v: HALF, Q25Ring(), trace)
    assert d == Fraction(3, 8)
    quarter, half, eighth = Fraction(1, 4), Fraction(1, 2), Fraction(1, 8)
    assert {v: x.to_fraction() for v, x in trace.items()} == {
        5: quarter, 6: quarter, 7: half, 8: quarter, 9: eighth, 10: Fraction(3, 8)}
    assert density(example_pog) == Q25(3, -3, 0)


def test_worked_example_counts(example_pog):
    assert unweighted_count(example_pog, 4) == 6
    assert weighted_count(example_pog, {}, 4) == Fraction(3, 8)
    W = {1: Q25.parse("0.8"), -1: Q25.parse("0.2")}
    assert weighted_count(example_pog, W, 4).to_decimal() == "0.3"
    unit = {lit: ONE for v in range(1, 5) for lit in (v, -v)}
    assert weighted_count(example_pog, unit, 4) == 6


def test_constants():
    assert unweighted_count(constant(False), 4) == 0
    assert unweighted_count(constant(True), 4) == 16
    assert ring_eval(constant(True), 5, {}, Q25Ring()) == ONE
    for p in (MERSENNE, 101):
        assert function_hash(constant(False), 1, p) == 0
        assert function_hash(constant(True), 1, p) == 1


def test_negated_reference(example_pog):
    assert ring_eval(example_pog, -10, lambda v: HALF) == Fraction(5, 8)


def test_missing_weight(example_pog):
    with pytest.raises(EvaluationError):
        ring_eval(example_pog, 10, {1: HALF})


def test_scaling_uses_declared_variable_count(example_pog):
    assert unweighted_count(example_pog, 6) == 24


def test_weight_errors():
    with pytest.raises(EvaluationError, match="zero"):
        normalized_weights({1: Q25(1), -1: Q25(-1)}, 1)
    with pytest.raises(EvaluationError, match="finite decimal"):
        normalized_weights({1: Q25(1), -1: Q25(2)}, 1)
    with pytest.raises(EvaluationError, match="outside"):
        normalized_weights({3: Q25(1)}, 1)


def test_weight_defaults():
    w, scale = normalized_weights({2: Q25.parse("0.3")}, 2)
    assert w == {1: HALF, 2: Q25.parse("0.3")}
    assert scale == ONE


def test_prime_field():
    assert is_prime(MERSENNE) and is_prime(2) and not is_prime(1) and not is_prime(MERSENNE + 2)
    with pytest.raises(EvaluationError):
        PrimeField(0)
    with pytest.raises(EvaluationError):
        PrimeField(15)
    with pytest.raises(EvaluationError):
        PrimeField(1 << 63)
    f = PrimeField(7)
    assert f.convert(Fraction(1, 2)) == 4
    assert f.convert(HALF) == 4


def test_hash_modulus_must_cover_twice_n(example_pog):
    with pytest.raises(EvaluationError):
        function_hash(example_pog, 0, 7, 4)


def test_equal_functions_hash_equal(example_cnf, example_pog, example_graph):
    tree = generate(example_cnf, example_graph, mode="structural").pog
    mono = check_proof(example_cnf, generate(example_cnf, example_graph, mode="monolithic").steps).pog
    for seed in range(20):
        h = function_hash(example_pog, seed, MERSENNE)
        assert h == function_hash(tree, seed, MERSENNE) == function_hash(mono, seed, MERSENNE)


def test_parse_weights():
    W = parse_weights("c comment\n1 0.8\n-1 0.2\nc p weight 2 0.25 0\np cnf 2 0\n")
    assert W == {1: Q25.parse("0.8"), -1: Q25.parse("0.2"), 2: Q25.parse("0.25")}
    with pytest.raises(EvaluationError):
        parse_weights("1\n")
    with pytest.raises(EvaluationError):
        parse_weights("0 0.5\n")
    with pytest.raises(EvaluationError):
        parse_weights("1 1/3\n")


@settings(max_examples=60)
@given(st.integers(0, 2 ** 32), st.integers(1, 8))
def test_node_values_follow_the_operations(seed, n):
    rng = random.Random(seed)
    p = random_pog(rng, n)
    w = {v: Fraction(rng.randint(0, 20), 20) for v in range(1, n + 1)}
    trace = {}
    ring_eval(p, p.root, w, FractionRing(), trace)

    def val(a):
        x = trace[abs(a)] if abs(a) in trace else w[abs(a)]
        return x if a > 0 else 1 - x

    for nd in p.nodes:
        if nd.var not in trace:
            continue
        if nd.is_product:
            want = Fraction(1)
            for a in nd.args:
                want *= val(a)
        else:
            want = val(nd.args[0]) + val(nd.args[1])
        assert trace[nd.var] == want
        # each node value is the weighted sum over its own models
        total = Fraction(0)
        for assignment in assignments(n):
            if evaluate_all(p, assignment)[nd.var]:
                term = Fraction(1)
                for v, bit in enumerate(assignment, 1):
                    term *= w[v] if bit else 1 - w[v]
                total += term
        assert trace[nd.var] == total


@given(st.integers(0, 2 ** 32), st.integers(1, 12))
def test_unweighted_count_matches_enumeration(seed, n):
    p = random_pog(random.Random(seed), n)
    models = sum(1 for a in assignments(n) if evaluate(p, p.root, a)) if n <= 8 else pog_mask(p).bit_count()
    assert unweighted_count(p, n) == models


@settings(max_examples=40)
@given(st.integers(0, 2 ** 32), st.sampled_from([2, 5, 10]))
def test_weighted_count_scales_per_variable(seed, k):
    rng = random.Random(seed)
    cnf = CnfFormula.from_clauses(4, [[rng.choice((-1, 1)) * rng.randint(1, 4) for _ in range(3)]
                                      for _ in range(rng.randint(0, 6))])
    pog = generate(cnf, compiled(cnf), mode="structural").pog
    # keep W(x)/(W(x)+W(-x)) a finite decimal by drawing the sum from powers of 2 and 5
    W = {}
    for v in range(1, 5):
        r = Q25.parse(rng.choice(["0.5", "1", "2", "10"]))
        W[v] = Q25.parse(rng.choice(["0.1", "0.25", "0.5", "0.75", "1", "3.5"]))
        W[-v] = r - W[v]
    base = weighted_count(pog, W, 4)
    assert base == brute_literal_weighted(cnf, W)
    scaled = set(rng.sample(range(1, 5), rng.randint(1, 4)))
    W2 = {lit: x * k if abs(lit) in scaled else x for lit, x in W.items()}
    assert weighted_count(pog, W2, 4) == base * Q25(k ** len(scaled))


def test_unit_weights_count_models():
    rng = random.Random(3)
    for _ in range(20):
        cnf = CnfFormula.from_clauses(5, [[rng.choice((-1, 1)) * rng.randint(1, 5) for _ in range(3)]
                                          for _ in range(rng.randint(0, 8))])
        pog = generate(cnf, compiled(cnf)).pog
        unit = {lit: ONE for v in range(1, 6) for lit in (v, -v)}
        assert weighted_count(pog, unit, 5) == brute_count(cnf)
        assert ring_eval(pog, pog.root, lambda v: HALF) == brute_weighted(cnf, lambda v: HALF)


def test_zero_weighted_result():
    p = constant(False, 2)
    assert weighted_count(p, {1: Q25.parse("0.3")}, 2) == ZERO
