"""Backend selection for the clause store.

The compiled extension is used when it was built; setting the environment
variable ``CERTCOUNT_PURE=1`` forces the pure-Python implementation.
"""

import os

from ._rup_py import (ASSERTED, BAD_ID, DEFINING, EARLY_CONFLICT, INACTIVE, INPUT,
                      NO_CONFLICT, NOT_DEFINING, NOT_UNIT, OK, SATISFIED)
from ._rup_py import ClauseStore as PyClauseStore

try:
    from ._rup import ClauseStore as CClauseStore
except ImportError:  # extension not built
    CClauseStore = None

if CClauseStore is not None and os.environ.get("CERTCOUNT_PURE", "") not in ("1", "true", "yes"):
    ClauseStore = CClauseStore
    BACKEND = "compiled"
else:
    ClauseStore = PyClauseStore
    BACKEND = "python"

REASONS = {
    BAD_ID: "unknown clause ID in hint",
    INACTIVE: "hint cites an inactive clause",
    NOT_DEFINING: "hint cites a non-defining clause",
    SATISFIED: "hint clause already satisfied",
    NOT_UNIT: "hint clause is not unit",
    EARLY_CONFLICT: "conflict reached before the last hint",
    NO_CONFLICT: "no conflict after the last hint",
}

__all__ = ["ClauseStore", "PyClauseStore", "CClauseStore", "BACKEND", "REASONS",
           "OK", "BAD_ID", "INACTIVE", "NOT_DEFINING", "SATISFIED", "NOT_UNIT",
           "EARLY_CONFLICT", "NO_CONFLICT", "INPUT", "DEFINING", "ASSERTED"]
