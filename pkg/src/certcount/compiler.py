"""A small top-down decision-DNNF compiler used to produce test inputs.

It alternates unit propagation, splitting into variable-disjoint components
and Shannon expansion on a chosen variable.  Sub-formulas are cached by
their simplified clause set, so identical residual formulas reached along
different paths share one node.  Arcs carry the decision literal followed
by the literals implied by unit propagation.
"""

from __future__ import annotations

from collections import Counter

from .cnf import CnfFormula
from .ddnnf import AND, FALSE, OR, TRUE, DdnnfGraph, _infer_decision


def _propagate(clauses: frozenset, lits=()):
    """Simplify by *lits* and unit-propagate.

    Returns ``(clauses', implied)`` or ``None`` on conflict; *implied* lists
    the propagated literals (excluding *lits*) in derivation order.
    """
    assigned = set(lits)
    implied = []
    current = clauses
    pending = list(lits)
    while True:
        if pending:
            out = set()
            for c in current:
                if any(l in assigned for l in c):
                    continue
                if any(-l in assigned for l in c):
                    c = frozenset(l for l in c if -l not in assigned)
                    if not c:
                        return None
                out.add(c)
            current = frozenset(out)
            pending = []
        units = [c for c in current if len(c) == 1]
        if not units:
            return current, implied
        for c in sorted(units, key=lambda c: (abs(next(iter(c))), next(iter(c)))):
            (l,) = c
            if -l in assigned:
                return None
            if l not in assigned:
                assigned.add(l)
                implied.append(l)
                pending.append(l)


def _components(clauses: frozenset) -> list:
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in clauses:
        vs = [abs(l) for l in c]
        for v in vs:
            parent.setdefault(v, v)
        for v in vs[1:]:
            a, b = find(vs[0]), find(v)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for c in clauses:
        groups.setdefault(find(abs(next(iter(c)))), set()).add(c)
    return [frozenset(groups[k]) for k in sorted(groups)]


class Compiler:
    """Compile with an optional static variable order (default: most frequent first)."""

    def __init__(self, order=None):
        self.rank = {v: i for i, v in enumerate(order)} if order else None
        self.graph = DdnnfGraph()
        self.cache = {}
        self._next = 1
        self._true = None
        self._false = None

    def _node(self, kind: str) -> int:
        nid = self._next
        self._next += 1
        self.graph.add_node(nid, kind)
        return nid

    def _const(self, value: bool) -> int:
        if value:
            if self._true is None:
                self._true = self._node(TRUE)
            return self._true
        if self._false is None:
            self._false = self._node(FALSE)
        return self._false

    def _choose(self, clauses) -> int:
        if self.rank is not None:
            return min({abs(l) for c in clauses for l in c}, key=lambda v: (self.rank.get(v, 1 << 62), v))
        freq = Counter(abs(l) for c in clauses for l in c)
        return min(freq, key=lambda v: (-freq[v], v))

    def _compile(self, clauses: frozenset):
        """Node for a propagated, conflict-free clause set; None means false."""
        if not clauses:
            return self._const(True)
        if clauses in self.cache:
            return self.cache[clauses]
        comps = _components(clauses)
        if len(comps) > 1:
            kids = []
            for comp in comps:
                k = self._compile(comp)
                if k is None:
                    self.cache[clauses] = None
                    return None
                kids.append(k)
            nid = self._node(AND)
            for k in kids:
                self.graph.add_arc(nid, k)
        else:
            x = self._choose(clauses)
            arcs = []
            for lit in (x, -x):
                res = _propagate(clauses, [lit])
                if res is None:
                    continue
                sub, implied = res
                k = self._compile(sub)
                if k is not None:
                    arcs.append((k, [lit] + implied))
            if not arcs:
                self.cache[clauses] = None
                return None
            nid = self._node(OR)
            for k, lits in arcs:
                self.graph.add_arc(nid, k, lits)
        self.cache[clauses] = nid
        return nid

    def compile(self, cnf: CnfFormula) -> DdnnfGraph:
        base = set()
        for c in cnf.clauses:
            s = frozenset(c)
            if any(-l in s for l in s):
                continue
            base.add(s)
        root = self._node(AND)
        res = None if frozenset() in base else _propagate(frozenset(base))
        if res is None:
            self.graph.add_arc(root, self._const(False))
            return self.graph
        sub, implied = res
        k = self._compile(sub)
        if k is None:
            self.graph.add_arc(root, self._const(False))
        else:
            self.graph.add_arc(root, k, implied)
        return self.graph


def compile_cnf(cnf: CnfFormula, order=None) -> DdnnfGraph:
    g = Compiler(order).compile(cnf)
    for nid in g.order:
        _infer_decision(g, nid)
    return g
