"""Reader and writer for CPOG proof files.

One step per line::

    <id> a <lits> 0 <hints> 0       clause addition
    d <id> <hints> 0                clause deletion
    <id> p <v> <lits> 0             product declaration
    <id> s <v> <l1> <l2> <hints> 0  sum declaration
    r <lit>                         root declaration

Lines starting with ``c`` and blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class CpogParseError(ValueError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True, slots=True)
class AddRup:
    id: int
    clause: tuple
    hint: tuple


@dataclass(frozen=True, slots=True)
class DeleteRup:
    id: int
    hint: tuple


@dataclass(frozen=True, slots=True)
class DeclareProduct:
    id: int
    var: int
    args: tuple


@dataclass(frozen=True, slots=True)
class DeclareSum:
    id: int
    var: int
    left: int
    right: int
    hint: tuple

    @property
    def args(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class DeclareRoot:
    lit: int


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        bad = next(t for t in tokens if not t.lstrip("-").isdigit())
        raise CpogParseError(f"expected an integer, found {bad!r}", lineno) from None


def _split_zero(nums, lineno, what):
    try:
        k = nums.index(0)
    except ValueError:
        raise CpogParseError(f"missing 0 terminating {what}", lineno) from None
    return nums[:k], nums[k + 1:]


def _terminated(nums, lineno, what):
    body, rest = _split_zero(nums, lineno, what)
    if rest:
        raise CpogParseError(f"trailing tokens after {what}", lineno)
    return tuple(body)


def _positive(ids, lineno):
    for i in ids:
        if i <= 0:
            raise CpogParseError(f"clause ID must be positive, got {i}", lineno)
    return ids


def parse_line(tokens: list, lineno: int = 0):
    head = tokens[0]
    if head == "r":
        if len(tokens) != 2:
            raise CpogParseError("root declaration takes exactly one literal", lineno)
        (lit,) = _ints(tokens[1:], lineno)
        if lit == 0:
            raise CpogParseError("root literal must be nonzero", lineno)
        return DeclareRoot(lit)
    if head == "d":
        nums = _ints(tokens[1:], lineno)
        if not nums or nums[0] <= 0:
            raise CpogParseError("deletion needs a positive clause ID", lineno)
        return DeleteRup(nums[0], _positive(_terminated(nums[1:], lineno, "hint"), lineno))
    if len(tokens) < 2:
        raise CpogParseError("truncated step", lineno)
    kind = tokens[1]
    (cid,) = _ints(tokens[:1], lineno)
    if cid <= 0:
        raise CpogParseError(f"clause ID must be positive, got {cid}", lineno)
    if kind == "a":
        clause, rest = _split_zero(_ints(tokens[2:], lineno), lineno, "clause")
        return AddRup(cid, tuple(clause), _positive(_terminated(rest, lineno, "hint"), lineno))
    if kind == "p":
        nums = _ints(tokens[2:], lineno)
        if not nums or nums[0] <= 0:
            raise CpogParseError("product needs a positive variable", lineno)
        return DeclareProduct(cid, nums[0], _terminated(nums[1:], lineno, "arguments"))
    if kind == "s":
        nums = _ints(tokens[2:], lineno)
        if len(nums) < 4 or nums[0] <= 0 or 0 in nums[1:3]:
            raise CpogParseError("sum needs a variable and two nonzero arguments", lineno)
        hint = _positive(_terminated(nums[3:], lineno, "hint"), lineno)
        if not hint:
            raise CpogParseError("sum declaration needs a nonempty hint", lineno)
        return DeclareSum(cid, nums[0], nums[1], nums[2], hint)
    if kind == "d":
        raise CpogParseError("deletion lines do not take a leading ID", lineno)
    raise CpogParseError(f"unknown step keyword {kind!r}", lineno)


def iter_cpog(text) -> Iterator:
    """Yield steps in file order; a second root declaration is an error."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("ascii", errors="replace")
    lines = text.splitlines() if isinstance(text, str) else text
    seen_root = False
    for lineno, line in enumerate(lines, 1):
        tokens = line.split()
        if not tokens or tokens[0].startswith("c"):
            continue
        step = parse_line(tokens, lineno)
        if isinstance(step, DeclareRoot):
            if seen_root:
                raise CpogParseError("duplicate root declaration", lineno)
            seen_root = True
        yield step


def parse_cpog(text) -> list:
    return list(iter_cpog(text))


def _join(nums) -> str:
    return " ".join(map(str, nums))


def format_step(step) -> str:
    if isinstance(step, AddRup):
        parts = [str(step.id), "a", *map(str, step.clause), "0", *map(str, step.hint), "0"]
    elif isinstance(step, DeleteRup):
        parts = ["d", str(step.id), *map(str, step.hint), "0"]
    elif isinstance(step, DeclareProduct):
        parts = [str(step.id), "p", str(step.var), *map(str, step.args), "0"]
    elif isinstance(step, DeclareSum):
        parts = [str(step.id), "s", str(step.var), str(step.left), str(step.right),
                 *map(str, step.hint), "0"]
    elif isinstance(step, DeclareRoot):
        parts = ["r", str(step.lit)]
    else:
        raise TypeError(f"not a CPOG step: {step!r}")
    return " ".join(parts)


def serialize_cpog(steps: Iterable) -> str:
    return "".join(format_step(s) + "\n" for s in steps)


def expand_defining(step) -> list:
    """The implicit ``(id, clause)`` pairs introduced by a declaration."""
    if not isinstance(step, (DeclareProduct, DeclareSum)):
        raise TypeError("only declarations have defining clauses")
    v, i = step.var, step.id
    if isinstance(step, DeclareProduct):
        out = [(i, (v, *(-a for a in step.args)))]
        out.extend((i + j, (-v, a)) for j, a in enumerate(step.args, 1))
        return out
    return [(i, (-v, step.left, step.right)), (i + 1, (v, -step.left)), (i + 2, (v, -step.right))]


def clause_span(step) -> int:
    """How many clause IDs a step allocates."""
    if isinstance(step, DeclareProduct):
        return len(step.args) + 1
    if isinstance(step, DeclareSum):
        return 3
    if isinstance(step, AddRup):
        return 1
    return 0
