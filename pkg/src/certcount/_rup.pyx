# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled clause store and strict RUP check.

Same interface and status codes as the pure-Python backend.  Literals are
dense signed ints; clause literals live in one growable int64 buffer.
"""

from libc.stdlib cimport realloc, free
from libc.string cimport memset
from libc.stdint cimport int64_t, int32_t, uint32_t

cdef enum:
    OK = 0
    BAD_ID = 1
    INACTIVE = 2
    NOT_DEFINING = 3
    SATISFIED = 4
    NOT_UNIT = 5
    EARLY_CONFLICT = 6
    NO_CONFLICT = 7
    DEFINING_ORIGIN = 1


cdef inline Py_ssize_t lit_slot(int64_t lit):
    return 2 * lit if lit > 0 else -2 * lit + 1


cdef class ClauseStore:
    cdef int64_t *lits
    cdef Py_ssize_t nlits, lits_cap
    cdef int64_t *start
    cdef int32_t *length
    cdef char *active
    cdef char *origin_
    cdef Py_ssize_t ncap  # clause slots allocated (ids 0..ncap-1)
    cdef uint32_t *stamp
    cdef Py_ssize_t nslots
    cdef uint32_t epoch

    def __cinit__(self):
        self.lits = NULL
        self.start = NULL
        self.length = NULL
        self.active = NULL
        self.origin_ = NULL
        self.stamp = NULL
        self.nlits = self.lits_cap = self.ncap = self.nslots = 0
        self.epoch = 0

    def __dealloc__(self):
        free(self.lits)
        free(self.start)
        free(self.length)
        free(self.active)
        free(self.origin_)
        free(self.stamp)

    cdef void _grow_ids(self, Py_ssize_t need) except *:
        cdef Py_ssize_t i, cap = self.ncap if self.ncap else 1024
        while cap <= need:
            cap *= 2
        self.start = <int64_t *> realloc(self.start, cap * sizeof(int64_t))
        self.length = <int32_t *> realloc(self.length, cap * sizeof(int32_t))
        self.active = <char *> realloc(self.active, cap)
        self.origin_ = <char *> realloc(self.origin_, cap)
        if self.start == NULL or self.length == NULL or self.active == NULL or self.origin_ == NULL:
            raise MemoryError()
        for i in range(self.ncap, cap):
            self.length[i] = -1
            self.active[i] = 0
            self.origin_[i] = 0
        self.ncap = cap

    cdef void _grow_lits(self, Py_ssize_t need) except *:
        cdef Py_ssize_t cap = self.lits_cap if self.lits_cap else 4096
        while cap < need:
            cap *= 2
        self.lits = <int64_t *> realloc(self.lits, cap * sizeof(int64_t))
        if self.lits == NULL:
            raise MemoryError()
        self.lits_cap = cap

    cdef void _grow_slots(self, Py_ssize_t need) except *:
        cdef Py_ssize_t cap = self.nslots if self.nslots else 1024
        while cap <= need:
            cap *= 2
        self.stamp = <uint32_t *> realloc(self.stamp, cap * sizeof(uint32_t))
        if self.stamp == NULL:
            raise MemoryError()
        memset(self.stamp + self.nslots, 0, (cap - self.nslots) * sizeof(uint32_t))
        self.nslots = cap

    def capacity(self):
        return self.ncap - 1 if self.ncap else 0

    def add(self, Py_ssize_t cid, lits, int origin):
        cdef Py_ssize_t k, n = len(lits)
        cdef int64_t lit, top = 0
        if cid <= 0:
            raise ValueError("clause IDs are positive")
        if cid >= self.ncap:
            self._grow_ids(cid)
        elif self.length[cid] >= 0:
            raise ValueError(f"clause {cid} already exists")
        if self.nlits + n > self.lits_cap:
            self._grow_lits(self.nlits + n)
        for k in range(n):
            lit = lits[k]
            self.lits[self.nlits + k] = lit
            if lit_slot(lit) > top:
                top = lit_slot(lit)
        if top + 1 >= self.nslots:
            self._grow_slots(top + 1)
        self.start[cid] = self.nlits
        self.length[cid] = <int32_t> n
        self.nlits += n
        self.active[cid] = 1
        self.origin_[cid] = <char> origin

    def exists(self, Py_ssize_t cid):
        return 0 < cid < self.ncap and self.length[cid] >= 0

    def is_active(self, Py_ssize_t cid):
        return 0 < cid < self.ncap and self.length[cid] >= 0 and self.active[cid] == 1

    def set_active(self, Py_ssize_t cid, flag):
        self.active[cid] = 1 if flag else 0

    def origin(self, Py_ssize_t cid):
        return self.origin_[cid]

    def clause(self, Py_ssize_t cid):
        cdef int64_t s = self.start[cid]
        return tuple([self.lits[s + k] for k in range(self.length[cid])])

    cdef inline bint _true(self, int64_t lit):
        cdef Py_ssize_t s = lit_slot(lit)
        return s < self.nslots and self.stamp[s] == self.epoch

    cdef inline void _set(self, int64_t lit) except *:
        cdef Py_ssize_t s = lit_slot(lit)
        if s >= self.nslots:
            self._grow_slots(s)
        self.stamp[s] = self.epoch

    cdef void _next_epoch(self):
        self.epoch += 1
        if self.epoch == 0:
            memset(self.stamp, 0, self.nslots * sizeof(uint32_t))
            self.epoch = 1

    def rup(self, target, hints, bint defining_only=False):
        cdef Py_ssize_t pos, last, nh, k, cid, s, e
        cdef int64_t lit, unit
        cdef bint seed_conflict = False
        self._next_epoch()
        for obj in target:
            lit = obj
            if self._true(lit):
                seed_conflict = True
            self._set(-lit)
        nh = len(hints)
        last = nh - 1
        for pos in range(nh):
            cid = hints[pos]
            if cid <= 0 or cid >= self.ncap or self.length[cid] < 0:
                return BAD_ID, pos
            if not self.active[cid]:
                return INACTIVE, pos
            if defining_only and self.origin_[cid] != DEFINING_ORIGIN:
                return NOT_DEFINING, pos
            if seed_conflict:
                continue
            unit = 0
            s = self.start[cid]
            e = s + self.length[cid]
            for k in range(s, e):
                lit = self.lits[k]
                if self._true(lit):
                    return SATISFIED, pos
                if self._true(-lit):
                    continue
                if unit == 0:
                    unit = lit
                elif unit != lit:
                    return NOT_UNIT, pos
            if unit == 0:
                if pos == last:
                    return OK, -1
                return EARLY_CONFLICT, pos
            self._set(unit)
        if seed_conflict:
            return OK, -1
        return NO_CONFLICT, last
