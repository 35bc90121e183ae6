"""Partitioned-operation graphs.

A :class:`Pog` is a flat, declaration-ordered array of product and sum nodes
over input variables ``1..n``.  Each node owns an extension variable; an
argument is a signed literal over an input variable or an earlier node.
Constants are expressed through the empty product (true) and its negation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

PRODUCT = "p"
SUM = "s"


class PogError(ValueError):
    pass


@dataclass(frozen=True)
class PogNode:
    kind: str  # PRODUCT or SUM
    var: int
    args: tuple

    @property
    def is_product(self) -> bool:
        return self.kind == PRODUCT


@dataclass
class Pog:
    input_var_count: int
    nodes: list = field(default_factory=list)
    root: int | None = None
    index: dict = field(default_factory=dict)  # extension var -> position in nodes

    def add_node(self, kind: str, var: int, args: Sequence[int]) -> PogNode:
        if kind not in (PRODUCT, SUM):
            raise PogError(f"unknown node kind {kind!r}")
        if var <= self.input_var_count or var in self.index:
            raise PogError(f"variable {var} is not fresh")
        if kind == SUM and len(args) != 2:
            raise PogError("sum node needs exactly two arguments")
        for lit in args:
            if not self.is_known(abs(lit)):
                raise PogError(f"argument {lit} refers to an undeclared variable")
        node = PogNode(kind, var, tuple(args))
        self.index[var] = len(self.nodes)
        self.nodes.append(node)
        return node

    def add_product(self, var: int, args: Sequence[int]) -> PogNode:
        return self.add_node(PRODUCT, var, args)

    def add_sum(self, var: int, left: int, right: int) -> PogNode:
        return self.add_node(SUM, var, (left, right))

    def set_root(self, lit: int) -> None:
        if not self.is_known(abs(lit)):
            raise PogError(f"root {lit} refers to an undeclared variable")
        self.root = lit

    def is_known(self, var: int) -> bool:
        return 1 <= var <= self.input_var_count or var in self.index

    def is_input(self, var: int) -> bool:
        return 1 <= var <= self.input_var_count

    def node(self, var: int) -> PogNode:
        try:
            return self.nodes[self.index[var]]
        except KeyError:
            raise PogError(f"variable {var} is not a declared node") from None

    def _check(self, lit: int) -> int:
        var = abs(lit)
        if lit == 0 or not self.is_known(var):
            raise PogError(f"undeclared literal {lit}")
        return var

    def sub_dag(self, lit: int) -> list:
        """Extension variables reachable from *lit*, in declaration order."""
        var = self._check(lit)
        if self.is_input(var):
            return []
        seen = {var}
        stack = [var]
        while stack:
            for arg in self.node(stack.pop()).args:
                v = abs(arg)
                if v in self.index and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return sorted(seen, key=self.index.__getitem__)

    def indegrees(self, lit: int | None = None) -> dict:
        """Number of parent edges for each node reachable from the root."""
        lit = self.root if lit is None else lit
        deg = {v: 0 for v in self.sub_dag(lit)}
        for v in deg:
            for arg in self.node(v).args:
                if abs(arg) in deg:
                    deg[abs(arg)] += 1
        return deg


# Dependency sets are stored as spans ``(lo, bits)``: bit ``i`` of ``bits``
# stands for variable ``lo + i``.  Memory then follows the spread of a set
# rather than its largest variable, which matters when many small nodes sit
# over high-numbered variables.

EMPTY_SPAN = (0, 0)


def span_of(v: int) -> tuple:
    return v, 1


def span_union(a: tuple, b: tuple) -> tuple:
    (la, ma), (lb, mb) = a, b
    if not ma:
        return b
    if not mb:
        return a
    if la <= lb:
        return la, ma | (mb << (lb - la))
    return lb, mb | (ma << (la - lb))


def span_overlaps(a: tuple, b: tuple) -> bool:
    (la, ma), (lb, mb) = a, b
    if la <= lb:
        return bool((ma >> (lb - la)) & mb)
    return bool((mb >> (la - lb)) & ma)


def span_contains(s: tuple, v: int) -> bool:
    lo, m = s
    return v >= lo and bool(m >> (v - lo) & 1)


def span_vars(s: tuple):
    lo, m = s
    while m:
        low = m & -m
        yield lo + low.bit_length() - 1
        m ^= low


def dependency_spans(p: Pog) -> dict:
    """Dependency set of every node as a span over input variables."""
    spans = {}
    for nd in p.nodes:
        acc = EMPTY_SPAN
        for arg in nd.args:
            v = abs(arg)
            acc = span_union(acc, spans[v] if v in spans else span_of(v))
        spans[nd.var] = acc
    return spans


def dependency_set(p: Pog, lit: int) -> frozenset:
    var = p._check(lit)
    if p.is_input(var):
        return frozenset([var])
    spans = {}
    for v in p.sub_dag(var):
        acc = EMPTY_SPAN
        for arg in p.node(v).args:
            a = abs(arg)
            acc = span_union(acc, spans[a] if a in spans else span_of(a))
        spans[v] = acc
    return frozenset(span_vars(spans[var]))


def pog_size(p: Pog) -> int:
    return sum(1 + len(nd.args) for nd in p.nodes)


def tree_sizes(p: Pog) -> dict:
    sizes = {}
    for nd in p.nodes:
        sizes[nd.var] = len(nd.args) + 1 + sum(sizes.get(abs(a), 0) for a in nd.args)
    return sizes


def tree_size(p: Pog, lit: int) -> int:
    var = p._check(lit)
    if p.is_input(var):
        return 0
    return tree_sizes(p)[var]


def tree_ratio(p: Pog) -> Fraction:
    size = pog_size(p)
    if size == 0:
        raise ZeroDivisionError("tree ratio of an empty graph")
    return Fraction(tree_size(p, p.root), size)


def evaluate_all(p: Pog, assignment: Sequence[bool]) -> dict:
    """Values of all extension variables; ``assignment[v-1]`` is input variable v."""
    val = {}

    def lit_value(lit):
        v = abs(lit)
        x = val[v] if v in val else bool(assignment[v - 1])
        return x if lit > 0 else not x

    for nd in p.nodes:
        if nd.is_product:
            val[nd.var] = all(lit_value(a) for a in nd.args)
        else:
            val[nd.var] = any(lit_value(a) for a in nd.args)
    return val


def evaluate(p: Pog, lit: int, assignment: Sequence[bool]) -> bool:
    var = p._check(lit)
    if len(assignment) < p.input_var_count:
        raise PogError("assignment does not cover all input variables")
    x = bool(assignment[var - 1]) if p.is_input(var) else evaluate_all(p, assignment)[var]
    return x if lit > 0 else not x


def assignments(n: int) -> Iterable[tuple]:
    return itertools.product((False, True), repeat=n)


def check_partitioned(p: Pog, semantic_limit: int = 16):
    """Return None if *p* is partitioned, else ``(var, message)`` for the first bad node.

    Product disjointness is structural; sum disjointness is checked by
    enumeration and only when ``n <= semantic_limit``.
    """
    spans = dependency_spans(p)
    for nd in p.nodes:
        if nd.is_product:
            acc = EMPTY_SPAN
            for a in nd.args:
                m = spans.get(abs(a)) or span_of(abs(a))
                if span_overlaps(acc, m):
                    return nd.var, "product arguments share variables"
                acc = span_union(acc, m)
    if p.input_var_count > semantic_limit:
        return None
    sums = [nd for nd in p.nodes if not nd.is_product]
    if not sums:
        return None
    bad = set()
    for assignment in assignments(p.input_var_count):
        val = evaluate_all(p, assignment)
        for nd in sums:
            l1, l2 = nd.args
            x1 = val.get(abs(l1), assignment[abs(l1) - 1] if abs(l1) <= p.input_var_count else None)
            x2 = val.get(abs(l2), assignment[abs(l2) - 1] if abs(l2) <= p.input_var_count else None)
            if (x1 if l1 > 0 else not x1) and (x2 if l2 > 0 else not x2):
                bad.add(nd.var)
    for nd in sums:
        if nd.var in bad:
            return nd.var, "sum arguments share a model"
    return None
