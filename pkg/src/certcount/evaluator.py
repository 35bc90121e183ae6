"""Ring evaluation of graphs: model counts, weighted counts and hashing.

A single bottom-up pass computes one value per node: products multiply,
sums add, and a negated reference yields ``one - value``.  Because sums are
over disjoint models and products over disjoint variables, the result equals
the sum over all models of the product of literal weights.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .pog import Pog, PogError
from .q25 import HALF, ONE, Q25, ZERO


class EvaluationError(ValueError):
    pass


class Q25Ring:
    zero = ZERO
    one = ONE

    @staticmethod
    def add(x, y):
        return x + y

    @staticmethod
    def sub(x, y):
        return x - y

    @staticmethod
    def mul(x, y):
        return x * y

    @staticmethod
    def convert(x):
        return Q25.coerce(x)

    def __repr__(self):
        return "Q25Ring()"


class FractionRing:
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(x, y):
        return x + y

    @staticmethod
    def sub(x, y):
        return x - y

    @staticmethod
    def mul(x, y):
        return x * y

    @staticmethod
    def convert(x):
        if isinstance(x, Q25):
            return x.to_fraction()
        return Fraction(x)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    zero = 0
    one = 1

    def __init__(self, modulus: int):
        if modulus <= 0:
            raise EvaluationError("modulus must be positive")
        if modulus >= 1 << 63:
            raise EvaluationError("modulus must be below 2^63")
        if not is_prime(modulus):
            raise EvaluationError(f"modulus {modulus} is not prime")
        self.p = modulus

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return x * y % self.p

    def convert(self, x):
        if isinstance(x, Q25):
            x = x.to_fraction()
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def __repr__(self):
        return f"PrimeField({self.p})"


def ring_eval(pog: Pog, lit: int, w, ring=None, trace: dict | None = None):
    """Evaluate *lit* with input weights ``w[var]`` (mapping or callable).

    When *trace* is given it receives the value of every evaluated node.
    """
    ring = ring or Q25Ring()
    var = abs(lit)
    if lit == 0 or not pog.is_known(var):
        raise PogError(f"undeclared literal {lit}")
    get = w if callable(w) else w.__getitem__
    one, sub, mul, add = ring.one, ring.sub, ring.mul, ring.add
    val = {}

    def arg_value(a):
        v = abs(a)
        x = val.get(v)
        if x is None:
            try:
                x = get(v)
            except KeyError:
                raise EvaluationError(f"no weight for variable {v}") from None
            val[v] = x
        return x if a > 0 else sub(one, x)

    for v in pog.sub_dag(var):
        nd = pog.node(v)
        if nd.is_product:
            acc = one
            for a in nd.args:
                acc = mul(acc, arg_value(a))
        else:
            acc = add(arg_value(nd.args[0]), arg_value(nd.args[1]))
        val[v] = acc
    if trace is not None:
        trace.update((v, val[v]) for v in pog.index if v in val)
    return arg_value(lit)


def density(pog: Pog, lit: int | None = None) -> Q25:
    lit = pog.root if lit is None else lit
    return ring_eval(pog, lit, lambda v: HALF, Q25Ring())


def unweighted_count(pog: Pog, n: int | None = None, lit: int | None = None) -> int:
    n = pog.input_var_count if n is None else n
    scaled = density(pog, lit) * Q25(1, n, 0)
    if not scaled.is_integer() or scaled.a < 0:
        raise EvaluationError(f"internal error: model count {scaled} is not a nonnegative integer")
    return scaled.to_int()


def normalized_weights(W: dict, n: int) -> tuple:
    """Split literal weights into per-variable ``w(x) = W(x)/r(x)`` and ``prod r(x)``.

    Missing variables default to 1/2 on both literals; if only one literal of
    a variable is given, the other defaults to its complement.
    """
    w = {}
    scale = ONE
    for x in range(1, n + 1):
        wp, wn = W.get(x), W.get(-x)
        if wp is None and wn is None:
            w[x] = HALF
            continue
        wp = Q25.coerce(wp) if wp is not None else ONE - Q25.coerce(wn)
        wn = Q25.coerce(wn) if wn is not None else ONE - wp
        r = wp + wn
        if r.is_zero():
            raise EvaluationError(f"variable {x}: W(x) + W(-x) is zero")
        try:
            w[x] = Q25.from_fraction(wp.to_fraction() / r.to_fraction())
        except ValueError:
            raise EvaluationError(
                f"variable {x}: W(x)/(W(x)+W(-x)) = {wp.to_fraction() / r.to_fraction()} "
                "is not a finite decimal") from None
        scale = scale * r
    for lit in W:
        if lit == 0 or abs(lit) > n:
            raise EvaluationError(f"weight given for literal {lit} outside 1..{n}")
    return w, scale


def weighted_count(pog: Pog, W: dict, n: int | None = None, lit: int | None = None) -> Q25:
    n = pog.input_var_count if n is None else n
    lit = pog.root if lit is None else lit
    w, scale = normalized_weights(W, n)
    return ring_eval(pog, lit, w, Q25Ring()) * scale


def hash_weights(n: int, seed, modulus: int) -> dict:
    rng = random.Random(seed)
    return {x: rng.randrange(modulus) for x in range(1, n + 1)}


def function_hash(pog: Pog, seed, modulus: int, n: int | None = None, lit: int | None = None) -> int:
    """Evaluate over GF(modulus) with pseudorandom weights drawn from *seed*."""
    n = pog.input_var_count if n is None else n
    lit = pog.root if lit is None else lit
    field = PrimeField(modulus)
    if modulus < 2 * n:
        raise EvaluationError(f"modulus {modulus} is smaller than 2n = {2 * n}")
    return ring_eval(pog, lit, hash_weights(n, seed, modulus), field)


def parse_weights(text: str) -> dict:
    """Read ``<lit> <decimal>`` lines or ``c p weight <lit> <decimal> 0`` lines."""
    W = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if parts[:3] == ["c", "p", "weight"]:
            parts = parts[3:5]
        elif parts[0].startswith("c") or parts[0] == "p":
            continue
        if len(parts) < 2:
            raise EvaluationError(f"line {lineno}: expected '<lit> <weight>'")
        try:
            lit = int(parts[0])
            W[lit] = Q25.parse(parts[1])
        except ValueError as exc:
            raise EvaluationError(f"line {lineno}: {exc}") from None
        if lit == 0:
            raise EvaluationError(f"line {lineno}: literal must be nonzero")
    return W
