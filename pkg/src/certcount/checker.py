"""Proof checker: replays CPOG steps against an input formula.

The checker maintains the active clause set, the graph under construction
and per-node dependency sets.  Every added clause and every deletion must
pass a strict RUP check; sum declarations may only cite defining clauses.
A proof is accepted when, after the last step, the only active non-defining
clause is the unit root clause and every input clause has been deleted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import rup
from .cnf import CnfFormula
from .cpog import AddRup, DeclareProduct, DeclareRoot, DeclareSum, DeleteRup
from .pog import EMPTY_SPAN, Pog, PogError, span_of, span_overlaps, span_union

FULL = "full"
REVERSE_ONLY = "reverse-only"
REJECTED = "rejected"


@dataclass(frozen=True)
class Verdict:
    status: str
    step: int | None = None  # 1-based step index for rejections
    reason: str = ""

    @property
    def accepted(self) -> bool:
        return self.status != REJECTED

    def __str__(self) -> str:
        if self.status == FULL:
            return "VERIFIED FULL"
        if self.status == REVERSE_ONLY:
            return "VERIFIED REVERSE-ONLY"
        return f"REJECTED step={self.step} reason={self.reason}"


@dataclass
class CheckResult:
    verdict: Verdict
    pog: Pog | None
    steps: int = 0


class StepError(Exception):
    pass


class Checker:
    def __init__(self, cnf: CnfFormula, one_sided: bool = False, store=None):
        self.n = cnf.var_count
        self.one_sided = one_sided
        self.store = store if store is not None else rup.ClauseStore()
        self.pog = Pog(cnf.var_count)
        self.root = None
        self.top = 0
        self.assumption = None
        self.active_inputs = 0
        self.active_asserted = 0
        self.first_asserted = None
        self._dense = {}
        self._orig = [0]
        self.masks = {}  # extension var -> dependency span over dense input indices
        for cid, clause in cnf.items():
            self.top = cid
            self.store.add(cid, self._map_clause(clause), rup.INPUT)
            self.active_inputs += 1

    # variable numbering

    def _idx(self, var: int) -> int:
        d = self._dense.get(var)
        if d is None:
            d = len(self._orig)
            self._dense[var] = d
            self._orig.append(var)
        return d

    def _map_clause(self, clause) -> list:
        idx = self._idx
        return [idx(l) if l > 0 else -idx(-l) for l in clause]

    def _unmap(self, lits) -> tuple:
        orig = self._orig
        return tuple(orig[l] if l > 0 else -orig[-l] for l in lits)

    def _known(self, var: int) -> bool:
        return 1 <= var <= self.n or var in self.masks

    def _mask(self, var: int) -> int:
        m = self.masks.get(var)
        return m if m is not None else span_of(self._idx(var))

    # steps

    def _next_id(self, cid: int, span: int) -> None:
        if cid != self.top + 1:
            raise StepError(f"clause ID {cid} out of sequence (expected {self.top + 1})")
        self.top += span

    def _rup(self, target, hint, defining_only=False) -> None:
        try:
            status, pos = self.store.rup(target, hint, defining_only)
        except OverflowError:
            status, pos = rup.BAD_ID, -1
        if status != rup.OK:
            where = f" at hint position {pos + 1} (clause {hint[pos]})" if 0 <= pos < len(hint) else ""
            raise StepError(f"RUP failed: {rup.REASONS[status]}{where}")

    def add(self, step: AddRup) -> None:
        for lit in step.clause:
            if lit == 0 or not self._known(abs(lit)):
                raise StepError(f"clause mentions undeclared variable {abs(lit)}")
        if step.id != self.top + 1:
            raise StepError(f"clause ID {step.id} out of sequence (expected {self.top + 1})")
        target = self._map_clause(step.clause)
        if (not step.hint and self.one_sided and self.root is not None
                and set(step.clause) == {self.root}):
            self.assumption = step.id
        else:
            self._rup(target, step.hint)
        self.top += 1
        self.store.add(step.id, target, rup.ASSERTED)
        self.active_asserted += 1
        if self.first_asserted is None:
            self.first_asserted = step.id

    def delete(self, step: DeleteRup) -> None:
        store, cid = self.store, step.id
        if not store.is_active(cid):
            raise StepError(f"clause {cid} is not active")
        origin = store.origin(cid)
        if origin == rup.DEFINING:
            raise StepError(f"clause {cid} is a defining clause and cannot be deleted")
        store.set_active(cid, False)
        try:
            self._rup(store.clause(cid), step.hint)
        except StepError:
            store.set_active(cid, True)
            raise
        if origin == rup.INPUT:
            self.active_inputs -= 1
        else:
            self.active_asserted -= 1

    def _declare(self, step, kind: str) -> None:
        var = step.var
        if var <= self.n or var in self.masks:
            raise StepError(f"extension variable {var} is not fresh")
        for lit in step.args:
            if lit == 0 or not self._known(abs(lit)):
                raise StepError(f"argument {lit} refers to an undeclared variable")

    def product(self, step: DeclareProduct) -> None:
        self._declare(step, "p")
        acc = EMPTY_SPAN
        for lit in step.args:
            m = self._mask(abs(lit))
            if span_overlaps(acc, m):
                raise StepError(f"product {step.var} arguments have overlapping dependency sets")
            acc = span_union(acc, m)
        self._next_id(step.id, len(step.args) + 1)
        self._install(step, acc)

    def sum(self, step: DeclareSum) -> None:
        self._declare(step, "s")
        if step.id != self.top + 1:
            raise StepError(f"clause ID {step.id} out of sequence (expected {self.top + 1})")
        if not step.hint:
            raise StepError("sum declaration needs a hint")
        self._rup(self._map_clause((-step.left, -step.right)), step.hint, defining_only=True)
        self.top += 3
        self._install(step, span_union(self._mask(abs(step.left)), self._mask(abs(step.right))))

    def _install(self, step, mask: int) -> None:
        v = step.var
        self.masks[v] = mask
        i = step.id
        if isinstance(step, DeclareProduct):
            self.pog.add_product(v, step.args)
            self.store.add(i, self._map_clause((v, *(-a for a in step.args))), rup.DEFINING)
            for j, a in enumerate(step.args, 1):
                self.store.add(i + j, self._map_clause((-v, a)), rup.DEFINING)
        else:
            self.pog.add_sum(v, step.left, step.right)
            l1, l2 = step.left, step.right
            self.store.add(i, self._map_clause((-v, l1, l2)), rup.DEFINING)
            self.store.add(i + 1, self._map_clause((v, -l1)), rup.DEFINING)
            self.store.add(i + 2, self._map_clause((v, -l2)), rup.DEFINING)

    def declare_root(self, step: DeclareRoot) -> None:
        if self.root is not None:
            raise StepError("duplicate root declaration")
        if not self._known(abs(step.lit)):
            raise StepError(f"root {step.lit} refers to an undeclared variable")
        self.root = step.lit

    def apply(self, step) -> None:
        if isinstance(step, AddRup):
            self.add(step)
        elif isinstance(step, DeleteRup):
            self.delete(step)
        elif isinstance(step, DeclareProduct):
            self.product(step)
        elif isinstance(step, DeclareSum):
            self.sum(step)
        elif isinstance(step, DeclareRoot):
            self.declare_root(step)
        else:
            raise StepError(f"unknown step {step!r}")

    def final(self, index: int) -> Verdict:
        if self.root is None:
            return Verdict(REJECTED, index, "no root declared")
        if self.active_inputs:
            return Verdict(REJECTED, index, f"{self.active_inputs} input clauses still active")
        if self.active_asserted != 1:
            return Verdict(REJECTED, index,
                           f"expected exactly one asserted clause, found {self.active_asserted}")
        store = self.store
        last = None
        for cid in range(self.first_asserted, self.top + 1):
            if store.is_active(cid) and store.origin(cid) == rup.ASSERTED:
                last = cid
                break
        if set(self._unmap(store.clause(last))) != {self.root}:
            return Verdict(REJECTED, index, "remaining asserted clause is not the unit root clause")
        self.pog.set_root(self.root)
        if self.assumption is not None and last == self.assumption:
            return Verdict(REVERSE_ONLY)
        return Verdict(FULL)


def check_proof(cnf: CnfFormula, steps: Iterable, one_sided: bool = False, store=None) -> CheckResult:
    """Replay *steps* and return the verdict plus the verified graph (if accepted)."""
    chk = Checker(cnf, one_sided=one_sided, store=store)
    index = 0
    for index, step in enumerate(steps, 1):
        try:
            chk.apply(step)
        except (StepError, PogError) as exc:
            return CheckResult(Verdict(REJECTED, index, str(exc)), None, index)
    verdict = chk.final(index + 1)
    return CheckResult(verdict, chk.pog if verdict.accepted else None, index)
