"""Pure-Python clause store and strict RUP check (fallback backend).

Literals handed to the store are already mapped to dense variable indices
by the caller.  The interface mirrors the compiled backend exactly.
"""

OK = 0
BAD_ID = 1
INACTIVE = 2
NOT_DEFINING = 3
SATISFIED = 4
NOT_UNIT = 5
EARLY_CONFLICT = 6
NO_CONFLICT = 7

INPUT = 0
DEFINING = 1
ASSERTED = 2


class ClauseStore:
    def __init__(self):
        self._clauses = [None]
        self._active = bytearray(1)
        self._origin = bytearray(1)

    def capacity(self):
        return len(self._clauses) - 1

    def add(self, cid, lits, origin):
        grow = cid + 1 - len(self._clauses)
        if grow > 0:
            self._clauses.extend([None] * grow)
            self._active.extend(bytes(grow))
            self._origin.extend(bytes(grow))
        elif self._clauses[cid] is not None:
            raise ValueError(f"clause {cid} already exists")
        self._clauses[cid] = tuple(lits)
        self._active[cid] = 1
        self._origin[cid] = origin

    def exists(self, cid):
        return 0 < cid < len(self._clauses) and self._clauses[cid] is not None

    def is_active(self, cid):
        return self.exists(cid) and self._active[cid] == 1

    def set_active(self, cid, flag):
        self._active[cid] = 1 if flag else 0

    def origin(self, cid):
        return self._origin[cid]

    def clause(self, cid):
        return self._clauses[cid]

    def rup(self, target, hints, defining_only=False):
        """Return ``(status, position)``; position indexes *hints* or is -1."""
        clauses = self._clauses
        active = self._active
        origin = self._origin
        size = len(clauses)
        true = set()
        seed_conflict = False
        for lit in target:
            if lit in true:
                seed_conflict = True
            true.add(-lit)
        last = len(hints) - 1
        for pos, cid in enumerate(hints):
            if cid <= 0 or cid >= size or clauses[cid] is None:
                return BAD_ID, pos
            if not active[cid]:
                return INACTIVE, pos
            if defining_only and origin[cid] != DEFINING:
                return NOT_DEFINING, pos
            if seed_conflict:
                continue
            unit = 0
            for lit in clauses[cid]:
                if lit in true:
                    return SATISFIED, pos
                if -lit in true:
                    continue
                if unit == 0:
                    unit = lit
                elif unit != lit:
                    return NOT_UNIT, pos
            if unit == 0:
                return (OK, -1) if pos == last else (EARLY_CONFLICT, pos)
            true.add(unit)
        if seed_conflict:
            return OK, -1
        return NO_CONFLICT, last
