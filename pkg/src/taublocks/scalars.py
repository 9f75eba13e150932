"""Exact scalar arithmetic: rationals, the quadratic extension by sqrt(2),
parameter points, and random-evaluation identity testing.

Rationals are gmpy2.mpq throughout (arbitrary precision, always in lowest
terms with positive denominator).  QuadExt models a + b*sqrt(2) with
rational a, b and mixes freely with ints and rationals.  High-precision
floats live in `gammafun` on top of decimal.Decimal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

from gmpy2 import mpq, mpz

QQ = mpq

# Symbols a ParameterPoint may carry.  theta_star is the starred parameter of
# the one-irregular-point family, theta_ss the doubly-starred one appearing
# further down the degeneration ladder.
KNOWN_SYMBOLS = (
    "theta_0", "theta_t", "theta_1", "theta_inf",
    "theta", "theta_star", "theta_ss",
    "sigma", "beta", "s", "c",
)


class NonGenericPoint(ValueError):
    """A denominator or genericity condition failed at the given point."""


class DomainError(ValueError):
    """Argument outside the operation's domain (pole, zero parameter, ...)."""


def as_qq(x) -> mpq:
    if isinstance(x, (int, mpz)):
        return mpq(x)
    if isinstance(x, mpq):
        return x
    if isinstance(x, str):
        return mpq(x)
    raise TypeError(f"cannot coerce {x!r} to an exact rational")


def qq_str(x: mpq) -> str:
    return str(mpq(x))


class QuadExt:
    """a + b*sqrt(2) with exact rational a, b.

    Closed under ring operations and division; conjugation flips the sign
    of b and is a ring homomorphism.
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = as_qq(a)
        self.b = as_qq(b)

    @staticmethod
    def _lift(x) -> "QuadExt":
        if isinstance(x, QuadExt):
            return x
        return QuadExt(as_qq(x), 0)

    def __add__(self, other):
        o = self._lift(other)
        return QuadExt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QuadExt(self.a * o.a + 2 * self.b * o.b,
                       self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(2))")
        conj = o.conj()
        num = self * conj
        return QuadExt(num.a / n, num.b / n)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return QuadExt(1) / self ** (-n)
        out = QuadExt(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "QuadExt":
        return QuadExt(self.a, -self.b)

    def norm(self) -> mpq:
        """Field norm a^2 - 2 b^2."""
        return self.a * self.a - 2 * self.b * self.b

    def is_rational(self) -> bool:
        return self.b == 0

    def rational_part(self) -> mpq:
        return self.a

    def __eq__(self, other):
        o = self._lift(other) if isinstance(other, (QuadExt, int, mpz, mpq)) else None
        return o is not None and self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b})"

    def to_json(self) -> Dict[str, str]:
        return {"a": qq_str(self.a), "b": qq_str(self.b)}


SQRT2 = QuadExt(0, 1)
INV_SQRT2 = QuadExt(0, mpq(1, 2))


@dataclass
class ParameterPoint:
    """Exact assignment of values to the parameter symbols."""

    values: Dict[str, mpq] = field(default_factory=dict)

    @classmethod
    def of(cls, **kwargs) -> "ParameterPoint":
        return cls({k: as_qq(v) for k, v in kwargs.items()})

    def get(self, symbol: str) -> mpq:
        try:
            return self.values[symbol]
        except KeyError:
            raise NonGenericPoint(f"missing symbol {symbol!r} in parameter point")

    def has(self, symbol: str) -> bool:
        return symbol in self.values

    def with_values(self, **kwargs) -> "ParameterPoint":
        out = dict(self.values)
        out.update({k: as_qq(v) for k, v in kwargs.items()})
        return ParameterPoint(out)

    def require_nonzero(self, symbol: str, value) -> None:
        if value == 0:
            raise NonGenericPoint(f"value attached to {symbol} vanishes at this point")

    def to_json(self) -> Dict[str, str]:
        return {k: qq_str(v) for k, v in sorted(self.values.items())}

    @classmethod
    def from_json(cls, data: Dict[str, str]) -> "ParameterPoint":
        vals = {}
        for k, v in data.items():
            try:
                vals[k] = mpq(str(v))
            except ValueError:
                raise ValueError(f"symbol {k!r}: malformed rational {v!r}")
        return cls(vals)


# Bound on numerators and denominators of sampled rationals.  Degrees in this
# package stay below ~40, so collisions of distinct polynomials across even a
# single sample are vanishingly rare; several samples make them impossible in
# practice.
PIT_BOUND = 64


def random_rational(rng: random.Random, bound: int = PIT_BOUND) -> mpq:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, bound)
    return mpq(num, den)


def random_point(rng: random.Random, symbols: Sequence[str],
                 bound: int = PIT_BOUND) -> ParameterPoint:
    return ParameterPoint({s: random_rational(rng, bound) for s in symbols})


@dataclass
class PitResult:
    equal: bool
    trials_run: int
    skipped: int
    witness: Optional[ParameterPoint] = None

    def __bool__(self) -> bool:
        return self.equal


def pit_check(f: Callable[[ParameterPoint], object],
              g: Callable[[ParameterPoint], object],
              symbols: Sequence[str],
              trials: int = 8,
              seed: int = 0,
              bound: int = PIT_BOUND) -> PitResult:
    """Schwartz-Zippel style identity test by exact random evaluation.

    Draws `trials` pseudo-random rational points from `seed`, skipping points
    where either side raises NonGenericPoint (or divides by zero).  Equality
    must be exact at every surviving point.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    run = 0
    skipped = 0
    attempts = 0
    while run < trials:
        attempts += 1
        if attempts > 50 * trials:
            raise NonGenericPoint("all sampled points were non-generic")
        p = random_point(rng, symbols, bound)
        try:
            fv = f(p)
            gv = g(p)
        except (NonGenericPoint, DomainError, ZeroDivisionError):
            skipped += 1
            continue
        run += 1
        if fv != gv:
            return PitResult(False, run, skipped, witness=p)
    return PitResult(True, run, skipped)
