"""Proof-emitting SAT oracle.

:func:`solve` is a small CDCL solver (two watched literals, first-UIP
learning, activity-based decisions, geometric restarts).  Every learned
clause is emitted together with the exact chain of clauses that derives it
by unit propagation, so the resulting refutation can be replayed under the
strict hint semantics of the checker without any search.

Clause numbering in a proof: input clauses are ``1..m`` in the order given;
the k-th proof step has ID ``m + k``.
"""

from __future__ import annotations

import heapq
import os
import re
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field

from . import _rup_py

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"


class ProofError(ValueError):
    pass


@dataclass
class SolveResult:
    status: str
    model: dict | None = None  # var -> bool, for SAT
    proof: list = field(default_factory=list)  # [(clause, hint)], for UNSAT
    conflicts: int = 0

    @property
    def is_unsat(self) -> bool:
        return self.status == UNSAT


class _Solver:
    def __init__(self, clauses):
        self.m = len(clauses)
        self.var_of = {}
        self.vars = [0]
        self.clauses = [None]  # id -> list of literal codes
        self.proof = []
        self.watches = [[], []]
        self.lval = [0, 0]
        self.level = [0]
        self.reason = [0]
        self.trail_pos = [0]
        self.activity = [0.0]
        self.phase = [False]
        self.trail = []
        self.limits = []  # trail length at each decision level
        self.qhead = 0
        self.inc = 1.0
        self.heap = []
        self.unit_ids = {}
        self.empty = None
        self.pending_units = []
        for cid, clause in enumerate(clauses, 1):
            lits = []
            seen = set()
            taut = False
            for lit in clause:
                if -lit in seen:
                    taut = True
                if lit not in seen:
                    seen.add(lit)
                    lits.append(self._code(lit))
            if taut:
                self.clauses.append(None)
                continue
            self.clauses.append(lits)
            if not lits:
                if self.empty is None:
                    self.empty = cid
            elif len(lits) == 1:
                self.pending_units.append(cid)
            else:
                self.watches[lits[0]].append(cid)
                self.watches[lits[1]].append(cid)

    def _code(self, lit: int) -> int:
        v = abs(lit)
        i = self.var_of.get(v)
        if i is None:
            i = len(self.vars)
            self.var_of[v] = i
            self.vars.append(v)
            self.watches += [[], []]
            self.lval += [0, 0]
            self.level.append(0)
            self.reason.append(0)
            self.trail_pos.append(0)
            self.activity.append(0.0)
            self.phase.append(False)
            self.heap.append((0.0, i))
        return 2 * i + (lit < 0)

    def _lit(self, code: int) -> int:
        v = self.vars[code >> 1]
        return -v if code & 1 else v

    def _assign(self, code: int, reason: int) -> None:
        i = code >> 1
        self.lval[code] = 1
        self.lval[code ^ 1] = -1
        self.level[i] = len(self.limits)
        self.reason[i] = reason
        self.trail_pos[i] = len(self.trail)
        self.phase[i] = not (code & 1)
        self.trail.append(code)

    def _propagate(self) -> int:
        """Return the ID of a falsified clause, or 0."""
        lval, clauses, watches, trail = self.lval, self.clauses, self.watches, self.trail
        while self.qhead < len(trail):
            false_lit = trail[self.qhead] ^ 1
            self.qhead += 1
            ws = watches[false_lit]
            j = 0
            k = 0
            n = len(ws)
            while k < n:
                cid = ws[k]
                k += 1
                c = clauses[cid]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                if lval[first] == 1:
                    ws[j] = cid
                    j += 1
                    continue
                for t in range(2, len(c)):
                    if lval[c[t]] != -1:
                        c[1], c[t] = c[t], c[1]
                        watches[c[1]].append(cid)
                        break
                else:
                    ws[j] = cid
                    j += 1
                    if lval[first] == -1:
                        while k < n:
                            ws[j] = ws[k]
                            j += 1
                            k += 1
                        del ws[j:]
                        return cid
                    self._assign(first, cid)
            del ws[j:]
        return 0

    def _emit(self, codes, hint) -> int:
        self.proof.append((tuple(self._lit(c) for c in codes), list(hint)))
        self.clauses.append(codes)
        return self.m + len(self.proof)

    def _unit_id(self, i: int) -> int:
        """ID of a clause that is the unit of level-0 variable index *i*."""
        uid = self.unit_ids.get(i)
        if uid is not None:
            return uid
        # collect dependencies, then derive in trail order
        need = []
        stack = [i]
        seen = {i}
        while stack:
            x = stack.pop()
            need.append(x)
            for code in self.clauses[self.reason[x]]:
                y = code >> 1
                if y != x and y not in seen and y not in self.unit_ids:
                    seen.add(y)
                    stack.append(y)
        need.sort(key=self.trail_pos.__getitem__)
        for x in need:
            r = self.reason[x]
            c = self.clauses[r]
            if len(c) == 1:
                self.unit_ids[x] = r
                continue
            hint = [self.unit_ids[code >> 1] for code in c if code >> 1 != x]
            hint.append(r)
            code = 2 * x + (self.lval[2 * x] == -1)
            self.unit_ids[x] = self._emit([code], hint)
        return self.unit_ids[i]

    def _refute(self, conflict: int) -> None:
        hint = [self._unit_id(code >> 1) for code in self.clauses[conflict]]
        hint.append(conflict)
        self._emit([], hint)

    def _bump(self, i: int) -> None:
        self.activity[i] += self.inc
        if self.activity[i] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.inc *= 1e-100
            self.heap = [(-self.activity[x], x) for x in range(1, len(self.vars))]
            heapq.heapify(self.heap)
        heapq.heappush(self.heap, (-self.activity[i], i))

    def _analyze(self, conflict: int):
        level = self.level
        cur = len(self.limits)
        seen = set()
        learned = []
        zero_vars = []
        resolved = []
        counter = 0
        c = self.clauses[conflict]
        idx = len(self.trail) - 1
        pivot = -1
        while True:
            for code in c:
                x = code >> 1
                if x == pivot or x in seen:
                    continue
                seen.add(x)
                self._bump(x)
                if level[x] == 0:
                    zero_vars.append(x)
                elif level[x] == cur:
                    counter += 1
                else:
                    learned.append(code)
            while (self.trail[idx] >> 1) not in seen:
                idx -= 1
            p = self.trail[idx]
            pivot = p >> 1
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            resolved.append(pivot)
            c = self.clauses[self.reason[pivot]]
        uip = p ^ 1
        learned.insert(0, uip)
        hint = [self._unit_id(x) for x in zero_vars]
        resolved.sort(key=self.trail_pos.__getitem__)
        hint.extend(self.reason[x] for x in resolved)
        hint.append(conflict)
        back = 0
        if len(learned) > 1:
            best = max(range(1, len(learned)), key=lambda t: level[learned[t] >> 1])
            learned[1], learned[best] = learned[best], learned[1]
            back = level[learned[1] >> 1]
        self.inc *= 1.05
        return learned, hint, back

    def _backjump(self, lvl: int) -> None:
        if len(self.limits) <= lvl:
            return
        stop = self.limits[lvl]
        for code in self.trail[stop:]:
            i = code >> 1
            self.lval[code] = 0
            self.lval[code ^ 1] = 0
            self.reason[i] = 0
            heapq.heappush(self.heap, (-self.activity[i], i))
        del self.trail[stop:]
        del self.limits[lvl:]
        self.qhead = len(self.trail)

    def _decide(self) -> int:
        heap, lval = self.heap, self.lval
        while heap:
            _, i = heapq.heappop(heap)
            if lval[2 * i] == 0:
                return 2 * i + (0 if self.phase[i] else 1)
        return -1

    def run(self, budget: int | None) -> SolveResult:
        if self.empty is not None:
            return SolveResult(UNSAT, proof=[((), [self.empty])])
        for cid in self.pending_units:
            code = self.clauses[cid][0]
            if self.lval[code] == 1:
                continue
            if self.lval[code] == -1:
                self._refute(cid)
                return SolveResult(UNSAT, proof=self.proof)
            self._assign(code, cid)
        conflicts = 0
        restart_at = 100
        since_restart = 0
        while True:
            conflict = self._propagate()
            if conflict:
                conflicts += 1
                since_restart += 1
                if not self.limits:
                    self._refute(conflict)
                    return SolveResult(UNSAT, proof=self.proof, conflicts=conflicts)
                if budget is not None and conflicts > budget:
                    return SolveResult(UNKNOWN, conflicts=conflicts)
                learned, hint, back = self._analyze(conflict)
                cid = self._emit(learned, hint)
                self._backjump(back)
                if len(learned) > 1:
                    self.watches[learned[0]].append(cid)
                    self.watches[learned[1]].append(cid)
                self._assign(learned[0], cid)
                continue
            if since_restart >= restart_at:
                since_restart = 0
                restart_at = int(restart_at * 1.5)
                self._backjump(0)
                continue
            code = self._decide()
            if code < 0:
                model = {self.vars[i]: self.lval[2 * i] == 1 for i in range(1, len(self.vars))}
                return SolveResult(SAT, model=model, conflicts=conflicts)
            self.limits.append(len(self.trail))
            self._assign(code, 0)


def solve(clauses, budget: int | None = None) -> SolveResult:
    """Decide satisfiability of a list of clauses (iterables of DIMACS literals)."""
    clauses = [tuple(c) for c in clauses]
    result = _Solver(clauses).run(budget)
    if result.status == SAT:
        for v in {abs(l) for c in clauses for l in c}:
            result.model.setdefault(v, False)
    return result


def check_model(clauses, model: dict) -> bool:
    return all(any(model.get(abs(l), False) == (l > 0) for l in c) for c in clauses)


def replay(clauses, proof) -> None:
    """Re-verify a refutation under strict hint semantics; raise ProofError on failure."""
    store = _rup_py.ClauseStore()
    for cid, c in enumerate(clauses, 1):
        store.add(cid, list(c), _rup_py.INPUT)
    m = len(clauses)
    if not proof or proof[-1][0]:
        raise ProofError("proof does not end with the empty clause")
    for k, (lits, hint) in enumerate(proof, 1):
        status, pos = store.rup(list(lits), list(hint))
        if status != _rup_py.OK:
            raise ProofError(f"proof step {m + k} fails RUP (status {status}, hint position {pos})")
        store.add(m + k, list(lits), _rup_py.ASSERTED)


def _format_dimacs(clauses, nvars: int) -> str:
    out = [f"p cnf {nvars} {len(clauses)}"]
    out += [" ".join(map(str, c)) + (" 0" if c else "0") for c in clauses]
    return "\n".join(out) + "\n"


def parse_lrat(text: str, m: int) -> list:
    """Parse a hinted proof; deletion lines are skipped and IDs renumbered densely."""
    remap = {}
    proof = []
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks or toks[0] == "c":
            continue
        if len(toks) > 1 and toks[1] == "d":
            continue
        try:
            nums = [int(t) for t in toks]
        except ValueError:
            raise ProofError(f"proof line {lineno}: non-integer token") from None
        cid, rest = nums[0], nums[1:]
        if 0 not in rest:
            raise ProofError(f"proof line {lineno}: missing terminator")
        k = rest.index(0)
        lits, hints = rest[:k], rest[k + 1:]
        if not hints or hints[-1] != 0:
            raise ProofError(f"proof line {lineno}: missing hint terminator")
        hints = hints[:-1]
        new_hint = []
        for h in hints:
            if h <= 0:
                raise ProofError(f"proof line {lineno}: RAT hints are not accepted")
            if h <= m:
                new_hint.append(h)
            elif h in remap:
                new_hint.append(remap[h])
            else:
                raise ProofError(f"proof line {lineno}: hint {h} refers to an unknown clause")
        proof.append((tuple(lits), new_hint))
        remap[cid] = m + len(proof)
        if not lits:
            break
    return proof


def default_solver_command() -> str | None:
    return os.environ.get("CERTCOUNT_SOLVER") or None


def external_solve(clauses, command: str, timeout: float | None = None) -> SolveResult:
    """Run an external solver; its proof is replayed locally before it is returned.

    *command* may contain ``{cnf}`` and ``{proof}`` placeholders.
    """
    clauses = [tuple(c) for c in clauses]
    nvars = max((abs(l) for c in clauses for l in c), default=0)
    with tempfile.TemporaryDirectory() as tmp:
        cnf_path = os.path.join(tmp, "in.cnf")
        proof_path = os.path.join(tmp, "out.lrat")
        with open(cnf_path, "w") as fh:
            fh.write(_format_dimacs(clauses, nvars))
        argv = [a.format(cnf=cnf_path, proof=proof_path) for a in shlex.split(command)]
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise ProofError(f"external solver failed: {exc}") from None
        out = proc.stdout
        if re.search(r"^s SATISFIABLE", out, re.M) or proc.returncode == 10:
            model = {}
            for line in out.splitlines():
                if line.startswith("v "):
                    for tok in line.split()[1:]:
                        lit = int(tok)
                        if lit:
                            model[abs(lit)] = lit > 0
            if not check_model(clauses, model):
                raise ProofError("external solver reported an invalid model")
            return SolveResult(SAT, model=model)
        if not (re.search(r"^s UNSATISFIABLE", out, re.M) or proc.returncode == 20):
            raise ProofError(f"external solver exited with status {proc.returncode}")
        try:
            with open(proof_path) as fh:
                text = fh.read()
        except OSError:
            raise ProofError("external solver wrote no proof") from None
    proof = parse_lrat(text, len(clauses))
    replay(clauses, proof)
    return SolveResult(UNSAT, proof=proof)
