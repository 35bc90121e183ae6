"""Proof generation from a decision-DNNF graph and its input formula.

The output is a complete CPOG step list: node declarations, the root, a
forward-implication proof ending in the unit root clause, and deletions of
every asserted and input clause.

Forward proofs come in two flavours.  The *structural* method walks the
graph top-down.  Each call ``validate(u, context, scope)`` takes the literals
assumed on the path from the root (*context*) and the IDs of the input
clauses still relevant there (*scope*).  It asserts the target clause
``u | ~context`` from the targets of the children, using unit propagation
for literals forced by the scope under the context and the SAT oracle
otherwise.  The
*monolithic* method asks the SAT oracle to refute the input together with
the clauses of the negated graph and lifts that refutation.  The hybrid
policy picks between them from tree size and tree ratio.

Two refinements reduce structural proofs: literal grouping (one SAT call
per product node, through an auxiliary product) and lemmas (shared nodes
are proved once under guard literals and reused at each parent).
"""

from __future__ import annotations

import heapq
import logging
import sys
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from . import satproof
from .cnf import CnfFormula
from .cpog import AddRup, DeclareProduct, DeclareRoot, DeleteRup, expand_defining
from .ddnnf import DdnnfGraph, ddnnf_to_pog
from .pog import Pog, dependency_spans, pog_size, span_contains, span_vars, tree_sizes

STRUCTURAL = "structural"
MONOLITHIC = "monolithic"
HYBRID = "hybrid"
ONE_SIDED = "one-sided"
MODES = (HYBRID, STRUCTURAL, MONOLITHIC, ONE_SIDED)
_ALIASES = {"mono": MONOLITHIC, "one_sided": ONE_SIDED}

log = logging.getLogger(__name__)

RATIO_LIMIT = Fraction(5)
TREE_THRESHOLD = 10 ** 6
SAT_CLAUSE_CAP = 10 ** 7


class GenerationError(RuntimeError):
    pass


@dataclass
class Options:
    mode: str = HYBRID
    lemmas: bool = True
    grouping: bool = True
    threshold: int = TREE_THRESHOLD
    sat_cap: int = SAT_CLAUSE_CAP
    solver: object = None  # callable(clauses) -> SolveResult; default is the built-in solver
    budget: int | None = None


@dataclass
class GenResult:
    steps: list
    pog: Pog
    stats: dict = field(default_factory=dict)


def select_mode(pog: Pog, threshold: int = TREE_THRESHOLD, sat_clauses: int = 0,
                sat_cap: int = SAT_CLAUSE_CAP) -> str:
    """The hybrid policy: which forward method to use for this graph.

    Returns ``monolithic``, ``structural`` or ``structural+monolithic`` (a
    structural walk that switches to the monolithic method below the
    tree-size threshold).
    """
    size = pog_size(pog)
    if size == 0 or pog.root is None or pog.is_input(abs(pog.root)):
        return STRUCTURAL
    tree = tree_sizes(pog)[abs(pog.root)]
    if Fraction(tree, size) > RATIO_LIMIT:
        return STRUCTURAL
    if tree < threshold and sat_clauses <= sat_cap:
        return MONOLITHIC
    return STRUCTURAL + "+" + MONOLITHIC


class Propagation:
    """Unit propagation over an ordered candidate list.

    At every step the lowest-index candidate that is unit (or falsified) is
    used, so hints prefer earlier candidates.  ``run`` returns a strict hint
    chain (only the clauses needed for the conflict, in propagation order)
    or ``None`` when no conflict is reached.
    """

    def __init__(self, candidates):
        self.ids = []
        self.clauses = []
        seen = set()
        for cid, clause in candidates:
            if cid in seen:
                continue
            seen.add(cid)
            self.ids.append(cid)
            self.clauses.append(tuple(dict.fromkeys(clause)))
        occ = {}
        for k, c in enumerate(self.clauses):
            for lit in c:
                occ.setdefault(lit, []).append(k)
        self.occ = occ
        self.true = set()
        self.implied = []
        self.conflict = None

    def _status(self, k):
        true = self.true
        unit = None
        for lit in self.clauses[k]:
            if lit in true:
                return None, False
            if -lit in true:
                continue
            if unit is not None:
                return None, False
            unit = lit
        return unit, unit is None

    def run(self, seeds):
        true = self.true
        for lit in seeds:
            if -lit in true:
                self.conflict = []
                return []
            true.add(lit)
        reason = {}
        heap = []
        for k in range(len(self.clauses)):
            unit, conflict = self._status(k)
            if unit is not None or conflict:
                heap.append(k)
        heapq.heapify(heap)
        used = set()
        order = []
        occ = self.occ
        while heap:
            k = heapq.heappop(heap)
            if k in used:
                continue
            unit, conflict = self._status(k)
            if conflict:
                needed = set()
                stack = [k]
                while stack:
                    for lit in self.clauses[stack.pop()]:
                        r = reason.get(-lit)
                        if r is not None and r not in needed:
                            needed.add(r)
                            stack.append(r)
                chain = [self.ids[j] for j in order if j in needed]
                chain.append(self.ids[k])
                self.conflict = chain
                return chain
            if unit is None:
                continue
            used.add(k)
            order.append(k)
            true.add(unit)
            reason[unit] = k
            self.implied.append(unit)
            for j in occ.get(-unit, ()):
                if j not in used:
                    heapq.heappush(heap, j)
        return None


def _simplify(clause, true: set):
    """Clause under an assignment: None if satisfied, else remaining literals."""
    out = []
    for lit in clause:
        if lit in true:
            return None
        if -lit not in true and lit not in out:
            out.append(lit)
    for lit in out:
        if -lit in out:
            return None
    return tuple(out)


@dataclass
class Lemma:
    target: int
    guards: list  # [(guard var, first clause ID, argument clause)]


class Generator:
    def __init__(self, cnf: CnfFormula, graph: DdnnfGraph, options: Options | None = None):
        self.cnf = cnf
        self.opt = options or Options()
        self.opt.mode = _ALIASES.get(self.opt.mode, self.opt.mode)
        if self.opt.mode not in MODES:
            raise GenerationError(f"unknown mode {self.opt.mode!r}")
        tr = ddnnf_to_pog(graph, cnf.var_count, cnf.clause_count + 1)
        self.pog = tr.pog
        self.decl_id = dict(tr.decl_id)
        self.next_id = tr.next_id
        self.next_var = tr.next_var
        self.clauses = {cid: tuple(c) for cid, c in cnf.items()}
        self.steps = list(tr.declarations)
        for step in tr.declarations:
            self.clauses.update(expand_defining(step))
        self.steps.append(DeclareRoot(self.pog.root))
        self.asserted = []
        self.expansions = Counter()
        self.lemmas = {}
        self.stats = Counter()
        self.spans = dependency_spans(self.pog)
        self.tree = tree_sizes(self.pog)
        self.indeg = self.pog.indegrees() if self.pog.nodes else {}
        self.node_threshold = None
        self.solver = self.opt.solver or (lambda cl: satproof.solve(cl, self.opt.budget))

    # emission

    def _add(self, clause, hint) -> int:
        cid = self.next_id
        self.next_id += 1
        step = AddRup(cid, tuple(clause), tuple(hint))
        self.steps.append(step)
        self.asserted.append(step)
        self.clauses[cid] = tuple(clause)
        self.stats["assertions"] += 1
        return cid

    def _declare_product(self, args) -> tuple:
        v = self.next_var
        self.next_var += 1
        cid = self.next_id
        step = DeclareProduct(cid, v, tuple(args))
        self.next_id += len(args) + 1
        self.steps.append(step)
        self.clauses.update(expand_defining(step))
        self.decl_id[v] = cid
        self.stats["aux_products"] += 1
        return v, cid

    def _derive(self, target, candidate_ids, what="step") -> int:
        chain = self._chain(target, candidate_ids)
        if chain is None:
            raise GenerationError(f"cannot justify {what} {tuple(target)} by unit propagation")
        return self._add(target, chain)

    def _chain(self, target, candidate_ids):
        prop = Propagation((cid, self.clauses[cid]) for cid in candidate_ids if cid is not None)
        return prop.run([-l for l in target])

    # helpers

    @staticmethod
    def _neg(context) -> list:
        return [-l for l in context]

    def _target(self, u, context) -> list:
        return list(dict.fromkeys([u, *self._neg(context)]))

    def _closure(self, scope, context) -> Propagation:
        prop = Propagation((cid, self.clauses[cid]) for cid in scope)
        prop.run(context)
        return prop

    def _is_input(self, lit) -> bool:
        return self.pog.is_input(abs(lit))

    # SAT-backed derivations

    def _sat_lift(self, prefix, context, scope, extra=(), defining=()) -> int:
        """Refute the scope under *context* plus *extra*, lifting each proof clause by ``prefix | ~context``.

        *extra* holds ``(clause, cpog_id_or_None)`` pairs; clauses mapped to None
        are implied by the seeds of every lifted step and dropped from hints.
        *defining* lists additional CPOG clause IDs simplified like *scope*.
        """
        true = set(context) | {-l for l in prefix}
        local, mapping, seen = [], [None], {}
        for cid in list(scope) + list(defining):
            c = _simplify(self.clauses[cid], true)
            if c is None:
                continue
            key = frozenset(c)
            if key in seen:
                continue
            seen[key] = cid
            local.append(c)
            mapping.append(cid)
        for clause, cid in extra:
            local.append(tuple(clause))
            mapping.append(cid)
        lift = list(dict.fromkeys([*prefix, *self._neg(context)]))
        chain = self._chain(lift, [cid for cid in mapping if cid is not None])
        if chain is not None:
            return self._add(lift, chain)
        if len(local) > self.opt.sat_cap:
            raise GenerationError(f"SAT problem with {len(local)} clauses exceeds the cap")
        self.stats["sat_calls"] += 1
        res = self.solver(local)
        if res.status == satproof.SAT:
            raise GenerationError("SAT oracle found a counter-model: graph does not cover the formula")
        if res.status != satproof.UNSAT:
            raise GenerationError("SAT oracle exceeded its budget")
        last = None
        for clause, hint in res.proof:
            lits = list(dict.fromkeys([*prefix, *clause, *self._neg(context)]))
            last = self._add(lits, [mapping[h] for h in hint if mapping[h] is not None])
            mapping.append(last)
        return last

    def _sat_literal(self, lit, context, scope) -> int:
        return self._sat_lift([lit], context, scope, extra=[((-lit,), None)])

    def _sat_group(self, lits, context, scope) -> list:
        v, vid = self._declare_product(lits)
        group = tuple(-l for l in lits)
        target = self._sat_lift([v], context, scope, extra=[(group, vid)])
        return [target] + [vid + j for j in range(1, len(lits) + 1)]

    def monolithic(self, u, context, scope) -> int:
        """Target ``u | ~context`` through one lifted refutation."""
        self.stats["monolithic_calls"] += 1
        defining = []
        if not self._is_input(u):
            for v in self.pog.sub_dag(abs(u)):
                i = self.decl_id[v]
                defining.extend(range(i, i + len(self.pog.node(v).args) + 1))
        return self._sat_lift([u], context, scope, defining=defining)

    # structural validation

    def validate(self, u, context, scope):
        """Assert ``u | ~context`` (or return an existing clause subsuming it)."""
        if u in context:
            return None
        if self._is_input(u):
            allowed = {u, *self._neg(context)}
            for cid in scope:
                if set(self.clauses[cid]) <= allowed:
                    return cid
            chain = self._chain(self._target(u, context), scope)
            if chain is not None:
                return self._add(self._target(u, context), chain)
            return self._sat_literal(u, context, scope)
        if u < 0:
            return self.monolithic(u, context, scope)
        closure = self._closure(scope, context)
        if closure.conflict is not None:
            return self._derive(self._target(u, context), scope, "conflict target")
        if self.node_threshold is not None and self.tree[u] < self.node_threshold:
            return self.monolithic(u, context, scope)
        if self.opt.lemmas and self.indeg.get(u, 0) > 1:
            return self._apply_lemma(u, context, scope, closure)
        return self._expand(u, context, scope, closure)

    def _decision(self, c1, c2) -> int:
        def lits(c):
            if self._is_input(c):
                return [c]
            if c < 0 or not self.pog.node(c).is_product:
                raise GenerationError(f"sum child {c} is not a literal or product")
            return [a for a in self.pog.node(c).args if self._is_input(a)]

        second = set(lits(c2))
        for lit in lits(c1):
            if -lit in second:
                return lit
        raise GenerationError(f"no decision variable between {c1} and {c2}")

    def _expand(self, u, context, scope, closure) -> int:
        self.expansions[u] += 1
        nd = self.pog.node(u)
        i = self.decl_id[u]
        if not nd.is_product:
            c1, c2 = nd.args
            d = self._decision(c1, c2)
            if d in context or -d in context:
                raise GenerationError(f"decision literal {d} already assigned at node {u}")
            t1 = self.validate(c1, [*context, d], scope)
            t2 = self.validate(c2, [*context, -d], scope)
            a = self._derive(list(dict.fromkeys([-d, u, *self._neg(context)])), [i + 1, t1], "sum branch")
            return self._derive(self._target(u, context), [a, i + 2, t2], "sum")
        lits = [a for a in nd.args if self._is_input(a)]
        kids = [a for a in nd.args if not self._is_input(a)]
        if any(k < 0 for k in kids):
            raise GenerationError(f"product {u} has a negated node argument")
        context_set = set(context)
        hard = []
        for lit in lits:
            if lit in context_set or lit in closure.true:
                continue
            if -lit in context_set or -lit in closure.true:
                raise GenerationError(f"literal {lit} of node {u} is refuted by propagation")
            hard.append(lit)
        sat_ids = []
        if hard:
            if self.opt.grouping and len(hard) > 1:
                sat_ids = self._sat_group(hard, context, scope)
            else:
                sat_ids = [self._sat_literal(l, context, scope) for l in hard]
        rho2 = [*context, *hard]
        targets = []
        if len(kids) == 1:
            targets.append(self.validate(kids[0], rho2, scope))
        elif kids:
            targets.extend(self._split(u, kids, rho2, scope))
        return self._derive(self._target(u, context), [*scope, *sat_ids, *targets, i], "product")

    def _split(self, u, kids, context, scope) -> list:
        full = self._closure(scope, context)
        if full.conflict is not None:
            raise GenerationError(f"context of node {u} is contradictory")
        owner = {}
        for k, kid in enumerate(kids):
            for v in span_vars(self.spans[kid]):
                owner[v] = k
        parts = [[] for _ in kids]
        part_vars = [set() for _ in kids]
        for cid in scope:
            c = _simplify(self.clauses[cid], full.true)
            if c is None:
                continue
            homes = {owner[abs(l)] for l in c if abs(l) in owner}
            if len(homes) != 1:
                raise GenerationError(
                    f"clause {cid} does not fall inside one child of product {u}")
            k = homes.pop()
            parts[k].append(cid)
            part_vars[k].update(abs(l) for l in self.clauses[cid])
        # closure literals go to the child owning the variable and to every
        # child whose clauses mention it
        home = {v: {k} for v, k in owner.items()}
        for k, vs in enumerate(part_vars):
            for v in vs:
                home.setdefault(v, set()).add(k)
        context_set = set(context)
        extra = [[] for _ in kids]
        for lit in full.implied:
            if lit not in context_set:
                for k in sorted(home.get(abs(lit), ())):
                    extra[k].append(lit)
        return [self.validate(kid, [*context, *extra[k]], parts[k]) for k, kid in enumerate(kids)]

    # lemmas

    def _build_lemma(self, u, scope, closure) -> Lemma:
        # reduced: the simplified clauses, in order of their lowest provenance ID.  When
        # every one of them is an unaltered input clause they are used as they
        # are; otherwise each gets a guarded synthetic clause.
        reduced, index = [], {}
        for cid in scope:
            c = _simplify(self.clauses[cid], closure.true)
            if c is None:
                continue
            key = frozenset(c)
            unchanged = cid <= self.cnf.clause_count and key == frozenset(self.clauses[cid])
            k = index.get(key)
            if k is None:
                index[key] = len(reduced)
                reduced.append([c, cid if unchanged else None])
            elif unchanged and reduced[k][1] is None:
                reduced[k][1] = cid
        # context literals the node itself mentions (arc literals merged into a shared product)
        deps = self.spans[u]
        for lit in sorted(closure.true, key=abs):
            if span_contains(deps, abs(lit)) and frozenset((lit,)) not in index:
                index[frozenset((lit,))] = len(reduced)
                reduced.append([(lit,), None])
        guards, hyp = [], []
        direct = all(cid is not None for _, cid in reduced)
        for c, cid in reduced:
            if direct:
                hyp.append(cid)
                continue
            v, vid = self._declare_product([-l for l in c])
            guards.append((v, vid, c))
            hyp.append(vid)
        guard_lits = [-v for v, _, _ in guards]
        self.stats["lemmas"] += 1
        inner = self._closure(hyp, guard_lits)
        if inner.conflict is not None:
            target = self._derive(self._target(u, guard_lits), hyp, "lemma")
        else:
            target = self._expand(u, guard_lits, hyp, inner)
        return Lemma(target, guards)

    def _apply_lemma(self, u, context, scope, closure) -> int:
        lemma = self.lemmas.get(u)
        if lemma is None:
            lemma = self.lemmas[u] = self._build_lemma(u, scope, closure)
        neg_context = self._neg(context)
        chains = []
        for v, vid, c in lemma.guards:
            cset = set(c) | set(neg_context)
            direct = [cid for cid in scope if set(self.clauses[cid]) <= cset][:1]
            defs = [vid + j for j in range(1, len(c) + 1)]
            chain = self._chain([-v, *neg_context], [*defs, *direct, *scope])
            if chain is None:
                self.stats["lemma_fallbacks"] += 1
                return self._expand(u, context, scope, closure)
            chains.append(([-v, *neg_context], chain))
        self.stats["lemma_applications"] += 1
        if not chains:
            return lemma.target
        acts = [self._add(list(dict.fromkeys(t)), ch) for t, ch in chains]
        return self._derive(self._target(u, context), [*acts, lemma.target], "lemma application")

    # whole proofs

    def _input_ids(self):
        return list(self.cnf.ids())

    def forward(self, method: str) -> int:
        root = self.pog.root
        scope = self._input_ids()
        if method == MONOLITHIC:
            t = self.monolithic(root, [], scope)
        else:
            if method == STRUCTURAL + "+" + MONOLITHIC:
                self.node_threshold = self.opt.threshold
            t = self.validate(root, [], scope)
        if t is None or self.clauses.get(t) != (root,) or t <= self.cnf.clause_count:
            t = self._add([root], [t] if t is not None else [])
        return t

    def assume_root(self) -> int:
        cid = self.next_id
        self.next_id += 1
        step = AddRup(cid, (self.pog.root,), ())
        self.steps.append(step)
        self.clauses[cid] = (self.pog.root,)
        return cid

    def reverse(self, root_unit: int) -> None:
        self._reverse_index()
        for step in reversed(self.asserted):
            if step.id != root_unit:
                self.steps.append(DeleteRup(step.id, step.hint))
        for cid, clause in self.cnf.items():
            self.steps.append(DeleteRup(cid, tuple(self._deletion_hint(clause, root_unit))))
        self.stats["deletions"] = len(self.asserted) - 1 + self.cnf.clause_count

    def _reverse_index(self) -> None:
        """Parent lists and argument positions over the root's sub-graph."""
        self._users = {}  # argument literal -> [(parent var, position)]
        for v in self.pog.sub_dag(self.pog.root):
            for j, a in enumerate(self.pog.node(v).args):
                self._users.setdefault(a, []).append((v, j))

    def _deletion_hint(self, clause, root_unit) -> list:
        """Root unit plus the defining clauses that force the root false under ``~clause``.

        Marking runs upward from the clause literals: a product is marked by
        any marked argument (the hint cites its first one), a sum when both
        arguments are marked.
        """
        cset = set(clause)
        if any(-l in cset for l in cset):
            return []
        root = self.pog.root
        if self._is_input(root):
            return [root_unit]
        if root < 0:
            return [root_unit, self.decl_id[-root]]
        first = {}  # product -> position of its first marked argument
        count = {}  # sum -> number of marked arguments
        marked = set()
        stack = [l for l in cset if self._is_input(l)]
        while stack:
            a = stack.pop()
            for v, j in self._users.get(a, ()):
                if self.pog.node(v).is_product:
                    if v not in first or j < first[v]:
                        first[v] = j
                    if v not in marked:
                        marked.add(v)
                        stack.append(v)
                else:
                    count[v] = count.get(v, 0) + 1
                    if count[v] == 2 and v not in marked:
                        marked.add(v)
                        stack.append(v)
        if root not in marked:
            raise GenerationError(f"reverse implication fails for input clause {tuple(clause)}")
        hint, stack, seen = [], [root], {root}
        while stack:
            v = stack.pop()
            nd = self.pog.node(v)
            i = self.decl_id[v]
            if nd.is_product:
                hint.append(i + 1 + first[v])
                kids = [nd.args[first[v]]]
            else:
                hint.append(i)
                kids = nd.args
            for a in kids:
                if not self._is_input(a) and a not in seen:
                    seen.add(a)
                    stack.append(a)
        hint.sort()
        return [root_unit, *hint]

    def run(self) -> GenResult:
        mode = self.opt.mode
        method = mode
        if mode == HYBRID:
            method = select_mode(self.pog, self.opt.threshold,
                                 self.cnf.clause_count + pog_size(self.pog), self.opt.sat_cap)
        self.stats["mode"] = method
        log.info("generation mode %s (requested %s)", method, mode)
        limit = max(sys.getrecursionlimit(), 50 * (len(self.pog.nodes) + 100))
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(limit)
        try:
            if mode == ONE_SIDED:
                unit = self.assume_root()
            else:
                unit = self.forward(method)
            self.reverse(unit)
        finally:
            sys.setrecursionlimit(old)
        self.stats["expansions_max"] = max(self.expansions.values(), default=0)
        self.stats["steps"] = len(self.steps)
        return GenResult(self.steps, self.pog, dict(self.stats))


def generate(cnf: CnfFormula, graph: DdnnfGraph, mode: str = HYBRID, lemmas: bool = True,
             grouping: bool = True, threshold: int = TREE_THRESHOLD, solver=None,
             budget: int | None = None) -> GenResult:
    opts = Options(mode=mode, lemmas=lemmas, grouping=grouping, threshold=threshold,
                   solver=solver, budget=budget)
    return Generator(cnf, graph, opts).run()


def forward_step_count(result: GenResult) -> int:
    """Number of forward-implication steps (assertions and auxiliary declarations)."""
    return sum(1 for s in result.steps if isinstance(s, AddRup)) + result.stats.get("aux_products", 0)
