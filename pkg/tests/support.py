"""Shared test helpers: data files, random formulas and random graphs."""

from __future__ import annotations

import random
from pathlib import Path

from hypothesis import strategies as st

from certcount.checker import check_proof
from certcount.cnf import CnfFormula, parse_dimacs
from certcount.compiler import compile_cnf
from certcount.cpog import parse_cpog
from certcount.ddnnf import parse_d4
from certcount.oracle import pog_mask, model_mask
from certcount.pog import Pog

DATA = Path(__file__).parent / "data"


def read(name: str) -> str:
    return (DATA / name).read_text()


def example_cnf() -> CnfFormula:
    return parse_dimacs(read("example.cnf"))


def example_steps() -> list:
    return parse_cpog(read("example.cpog"))


def example_graph():
    return parse_d4(read("example.nnf"))


def example_pog() -> Pog:
    """The verified six-node graph of the worked example."""
    return check_proof(example_cnf(), example_steps()).pog


def random_clauses(rng: random.Random, n: int, m: int | None = None, width: int = 4) -> list:
    if m is None:
        m = rng.randint(0, int(n * rng.uniform(0.5, 5)) + 1)
    return [[rng.choice((-1, 1)) * rng.randint(1, n) for _ in range(rng.randint(1, width))]
            for _ in range(m)]


def random_cnf(rng: random.Random, n_max: int, n_min: int = 1) -> CnfFormula:
    n = rng.randint(n_min, n_max)
    return CnfFormula.from_clauses(n, random_clauses(rng, n))


def compiled(cnf: CnfFormula):
    """Compile and round-trip the graph through its text form."""
    return parse_d4(compile_cnf(cnf).to_text())


@st.composite
def cnfs(draw, max_vars: int = 8, max_clauses: int = 20, max_width: int = 4, min_vars: int = 1):
    n = draw(st.integers(min_vars, max_vars))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from((v, -v)))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=max_width), max_size=max_clauses))
    return CnfFormula.from_clauses(n, clauses)


def random_pog(rng: random.Random, n: int, share: float = 0.3, negate: float = 0.2) -> Pog:
    """A random partitioned graph over ``1..n``.

    Products split a variable set into disjoint blocks; sums branch on a
    decision variable, which makes their arguments exclusive whatever the
    sub-graphs are.  Nodes over the same variable set are reused with
    probability *share*; node references are negated with probability *negate*.
    """
    pog = Pog(n)
    nxt = [n + 1]
    by_vars = {}

    def fresh():
        v = nxt[0]
        nxt[0] += 1
        return v

    def ref(lit):
        if abs(lit) > n and rng.random() < negate:
            return -lit
        return lit

    def build(vs: tuple) -> int:
        if len(vs) == 1 and rng.random() < 0.7:
            return rng.choice((vs[0], -vs[0]))
        pool = by_vars.get(vs)
        if pool and rng.random() < share:
            return ref(rng.choice(pool))
        if len(vs) >= 2 and rng.random() < 0.5:
            shuffled = list(vs)
            rng.shuffle(shuffled)
            cuts = sorted(rng.sample(range(1, len(vs)), rng.randint(1, min(3, len(vs) - 1))))
            blocks = [tuple(sorted(shuffled[a:b])) for a, b in zip([0, *cuts], [*cuts, len(vs)])]
            args = [build(b) for b in blocks]
            v = fresh()
            pog.add_product(v, args)
        else:
            x = rng.choice(vs)
            rest = tuple(u for u in vs if u != x)
            sides = []
            for lit in (x, -x):
                if rest and rng.random() < 0.85:
                    v = fresh()
                    pog.add_product(v, (lit, build(rest)))
                    sides.append(v)
                else:
                    sides.append(lit)
            v = fresh()
            pog.add_sum(v, sides[0], sides[1])
        by_vars.setdefault(vs, []).append(v)
        return ref(v)

    used = tuple(sorted(rng.sample(range(1, n + 1), rng.randint(1, n))))
    root = build(used)
    if abs(root) <= n:
        v = fresh()
        pog.add_product(v, (root,))
        root = v
    pog.set_root(root)
    return pog


def agrees(cnf: CnfFormula, pog: Pog) -> bool:
    """Extensional equivalence of a formula and a graph (small n)."""
    return model_mask(cnf) == pog_mask(pog)
