"""Brute-force reference implementations for small instances.

Model sets are represented as Python integers used as bitsets over all
``2**n`` assignments: bit ``i`` stands for the assignment in which variable
``v`` is true iff bit ``v-1`` of ``i`` is set.
"""

from __future__ import annotations

from .cnf import CnfFormula
from .evaluator import Q25Ring
from .pog import Pog
from .q25 import HALF, ONE, ZERO, Q25

COUNT_LIMIT = 24
WEIGHT_LIMIT = 20
EQUIV_LIMIT = 16


class OracleLimitError(ValueError):
    pass


def _guard(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise OracleLimitError(f"{what} enumerates 2^{n} assignments; limit is n <= {limit}")


def _var_masks(n: int) -> tuple:
    full = (1 << (1 << n)) - 1
    masks = [0]
    for v in range(1, n + 1):
        half = 1 << (v - 1)
        block = ((1 << half) - 1) << half
        repunit = full // ((1 << (2 * half)) - 1)
        masks.append(block * repunit)
    return full, masks


def _lit_mask(lit: int, full: int, masks: list) -> int:
    m = masks[abs(lit)]
    return m if lit > 0 else full ^ m


def model_mask(cnf: CnfFormula, limit: int = COUNT_LIMIT) -> int:
    n = cnf.var_count
    _guard(n, limit, "model enumeration")
    full, masks = _var_masks(n)
    models = full
    for clause in cnf.clauses:
        sat = 0
        for lit in clause:
            sat |= _lit_mask(lit, full, masks)
        models &= sat
        if not models:
            break
    return models


def pog_mask(pog: Pog, lit: int | None = None, limit: int = EQUIV_LIMIT) -> int:
    n = pog.input_var_count
    _guard(n, limit, "graph enumeration")
    lit = pog.root if lit is None else lit
    full, masks = _var_masks(n)
    masks = list(masks)
    val = {}

    def arg(a):
        v = abs(a)
        m = val[v] if v in val else masks[v]
        return m if a > 0 else full ^ m

    for v in pog.sub_dag(abs(lit)):
        nd = pog.node(v)
        if nd.is_product:
            m = full
            for a in nd.args:
                m &= arg(a)
        else:
            m = arg(nd.args[0]) | arg(nd.args[1])
        val[v] = m
    return arg(lit)


def brute_count(cnf: CnfFormula) -> int:
    return model_mask(cnf).bit_count()


def iter_models(cnf: CnfFormula, limit: int = COUNT_LIMIT):
    """Yield each model as a tuple of booleans (index v-1 for variable v)."""
    n = cnf.var_count
    models = model_mask(cnf, limit)
    while models:
        low = models & -models
        i = low.bit_length() - 1
        models ^= low
        yield tuple(bool(i >> k & 1) for k in range(n))


def brute_weighted(cnf: CnfFormula, w, ring=None):
    """Sum over models of the product of literal weights.

    ``w[v]`` is the weight of the positive literal; the negative literal
    weighs ``one - w[v]``.
    """
    ring = ring or Q25Ring()
    get = w if callable(w) else w.__getitem__
    pos = {v: get(v) for v in range(1, cnf.var_count + 1)}
    neg = {v: ring.sub(ring.one, x) for v, x in pos.items()}
    total = ring.zero
    for assignment in iter_models(cnf, WEIGHT_LIMIT):
        term = ring.one
        for v, bit in enumerate(assignment, 1):
            term = ring.mul(term, pos[v] if bit else neg[v])
        total = ring.add(total, term)
    return total


def brute_literal_weighted(cnf: CnfFormula, W: dict) -> Q25:
    """Sum over models of the product of per-literal weights ``W[lit]``.

    Unlike the evaluator this never normalizes: both literal weights are used
    as given.  A variable with no entry weighs 1/2 on each literal; if only
    one literal has an entry the other gets its complement.
    """
    pos, neg = {}, {}
    for v in range(1, cnf.var_count + 1):
        wp, wn = W.get(v), W.get(-v)
        if wp is None and wn is None:
            wp = wn = HALF
        elif wp is None:
            wp = ONE - Q25.coerce(wn)
        elif wn is None:
            wn = ONE - Q25.coerce(wp)
        pos[v], neg[v] = Q25.coerce(wp), Q25.coerce(wn)
    total = ZERO
    for assignment in iter_models(cnf, WEIGHT_LIMIT):
        term = ONE
        for v, bit in enumerate(assignment, 1):
            term = term * (pos[v] if bit else neg[v])
        total = total + term
    return total


def extend_assignment(pog: Pog, assignment) -> dict:
    """Extend a total input assignment to every extension variable."""
    val = {v: bool(assignment[v - 1]) for v in range(1, pog.input_var_count + 1)}

    def lit(a):
        x = val[abs(a)]
        return x if a > 0 else not x

    for nd in pog.nodes:
        if nd.is_product:
            val[nd.var] = all(lit(a) for a in nd.args)
        else:
            val[nd.var] = lit(nd.args[0]) or lit(nd.args[1])
    return val


def equiv_over_x(cnf: CnfFormula, pog: Pog, lit: int | None = None) -> bool:
    if pog.input_var_count != cnf.var_count:
        raise ValueError("formula and graph disagree on the number of input variables")
    return model_mask(cnf, EQUIV_LIMIT) == pog_mask(pog, lit)
