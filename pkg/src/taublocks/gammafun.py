"""High-precision Gamma machinery on top of decimal floats, plus the exact
Gamma-ratio algebra needed for Barnes-G shift ratios.

The Barnes G-function itself is never evaluated: every structure-constant
ratio in the package reduces to integer-shift ratios G(1+x+n)/G(1+x), which
telescope into finite products of Gamma values, and often further into plain
rationals.
"""

from __future__ import annotations

import decimal
from decimal import Decimal, localcontext
from typing import Dict, List, Union

from gmpy2 import mpq

from .scalars import DomainError, QuadExt, as_qq

DEFAULT_DIGITS = 60
_GUARD = 15

Scalar = Union[mpq, Decimal, QuadExt]

_pi_cache: Dict[int, Decimal] = {}
_bernoulli_cache: List[mpq] = []


def _ctx_prec(digits: int) -> int:
    return digits + _GUARD + max(5, digits // 10)


def pi_hp(digits: int) -> Decimal:
    """pi by the arithmetic-geometric-mean iteration (quadratic convergence)."""
    prec = _ctx_prec(digits)
    if prec in _pi_cache:
        return _pi_cache[prec]
    with localcontext() as ctx:
        ctx.prec = prec + 10
        a = Decimal(1)
        b = Decimal(1) / Decimal(2).sqrt()
        t = Decimal(1) / Decimal(4)
        p = Decimal(1)
        for _ in range(prec.bit_length() + 4):
            an = (a + b) / 2
            b = (a * b).sqrt()
            t -= p * (a - an) ** 2
            a = an
            p *= 2
        pi = (a + b) ** 2 / (4 * t)
    with localcontext() as ctx:
        ctx.prec = prec
        pi = +pi
    _pi_cache[prec] = pi
    return pi


def sqrt2_hp(digits: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = _ctx_prec(digits)
        return Decimal(2).sqrt()


def bernoulli(m: int) -> mpq:
    """Exact Bernoulli number B_m (B_1 = -1/2 convention)."""
    while len(_bernoulli_cache) <= m:
        k = len(_bernoulli_cache)
        if k == 0:
            _bernoulli_cache.append(mpq(1))
            continue
        acc = mpq(0)
        binom = mpq(1)  # C(k+1, j) built incrementally
        for j in range(k):
            acc += binom * _bernoulli_cache[j]
            binom = binom * (k + 1 - j) / (j + 1)
        _bernoulli_cache.append(-acc / (k + 1))
    return _bernoulli_cache[m]


def to_decimal(x, digits: int = DEFAULT_DIGITS) -> Decimal:
    """Convert an exact scalar (or Decimal) to a Decimal at `digits` digits."""
    with localcontext() as ctx:
        ctx.prec = _ctx_prec(digits)
        if isinstance(x, Decimal):
            return +x
        if isinstance(x, QuadExt):
            a = Decimal(int(x.a.numerator)) / Decimal(int(x.a.denominator))
            b = Decimal(int(x.b.numerator)) / Decimal(int(x.b.denominator))
            return a + b * Decimal(2).sqrt()
        q = as_qq(x)
        return Decimal(int(q.numerator)) / Decimal(int(q.denominator))


def _is_nonpositive_integer(z: Decimal) -> bool:
    return z <= 0 and z == z.to_integral_value()


def ln_gamma_hp(z: Decimal, digits: int = DEFAULT_DIGITS) -> Decimal:
    """log Gamma(z) for z > 0 via argument lifting into the Stirling regime.

    The asymptotic series is truncated when the next term drops below the
    target precision; the Stirling remainder is bounded by the first omitted
    term for real positive argument, so the guard digits absorb it.
    """
    prec = _ctx_prec(digits)
    with localcontext() as ctx:
        ctx.prec = prec
        if z <= 0:
            raise DomainError("ln_gamma_hp requires a positive argument")
        # lift until w is large enough that the Stirling tail dips below
        # 10^-prec; the minimum achievable term is ~ exp(-2 pi w)
        target = Decimal(prec) * Decimal("0.3665") + 12
        m = 0
        if z < target:
            m = int(target - z) + 1
        w = z + m
        lnw = w.ln()
        acc = (w - Decimal("0.5")) * lnw - w
        acc += (2 * pi_hp(digits)).ln() / 2
        wpow = w  # w^(2k-1)
        w2 = w * w
        tol = Decimal(1).scaleb(-prec)
        converged = False
        for k in range(1, 400):
            b = bernoulli(2 * k)
            coeff = Decimal(int(b.numerator)) / Decimal(int(b.denominator))
            term = coeff / (2 * k * (2 * k - 1) * wpow)
            acc += term
            if abs(term) < tol:
                converged = True
                break
            wpow *= w2
        if not converged:
            raise ArithmeticError("Stirling series failed to reach tolerance")
        # undo the lift: ln Gamma(z) = ln Gamma(z + m) - sum ln(z + k)
        for k in range(m):
            acc -= (z + k).ln()
        return acc


def gamma_hp(z, digits: int = DEFAULT_DIGITS) -> Decimal:
    """Gamma(z) to `digits` decimal digits; poles at non-positive integers."""
    if digits < 50:
        raise ValueError("digits must be >= 50")
    zq = None
    if not isinstance(z, Decimal):
        zq = as_qq(z)
        if zq.denominator == 1 and zq <= 0:
            raise DomainError(f"Gamma pole at z = {zq}")
        z = to_decimal(zq, digits)
    elif _is_nonpositive_integer(z):
        raise DomainError(f"Gamma pole at z = {z}")
    prec = _ctx_prec(digits)
    with localcontext() as ctx:
        ctx.prec = prec
        if z > 0:
            val = ln_gamma_hp(z, digits).exp()
        else:
            # reflect via Gamma(z) = Gamma(z + m) / prod_{k<m} (z + k)
            m = int(-z) + 2
            denom = Decimal(1)
            for k in range(m):
                denom *= (z + k)
            if denom == 0:
                raise DomainError(f"Gamma pole at z = {z}")
            val = ln_gamma_hp(z + m, digits).exp() / denom
    with localcontext() as ctx:
        ctx.prec = digits
        return +val


def gamma_ratio_exact(x, a: int, b: int):
    """Gamma(x + a) / Gamma(x + b) as an exact finite product, for integer
    shifts a, b.  Works over any ring with 1 (rationals, QuadExt, ...)."""
    out = 1
    if a >= b:
        for j in range(b, a):
            out = out * (x + j)
        return out
    inv = 1
    for j in range(a, b):
        inv = inv * (x + j)
    if inv == 0:
        raise DomainError("Gamma ratio hits a pole (zero factor in denominator)")
    if isinstance(inv, int):
        return mpq(1, inv)
    return mpq(1) / inv if isinstance(inv, mpq) else 1 / inv


def barnes_shift_ratio(x, n: int, digits: int = DEFAULT_DIGITS):
    """G(1+x+n)/G(1+x) via G(z+1) = Gamma(z) G(z).

    Equals prod_{j=0}^{n-1} Gamma(1+x+j) for n >= 0 and the reciprocal
    telescoping product for n < 0.  Returns an exact rational whenever x is
    an integer making every factor a factorial; a Decimal otherwise.
    """
    xq = as_qq(x) if not isinstance(x, Decimal) else None
    if n == 0:
        return mpq(1)
    if xq is not None and xq.denominator == 1:
        xi = int(xq)
        out = mpq(1)
        if n > 0:
            for j in range(n):
                arg = 1 + xi + j
                if arg <= 0:
                    raise DomainError(f"Gamma pole in shift ratio at argument {arg}")
                out *= _factorial_q(arg - 1)
        else:
            for j in range(1, -n + 1):
                arg = 1 + xi - j
                if arg <= 0:
                    raise DomainError(f"Gamma pole in shift ratio at argument {arg}")
                out /= _factorial_q(arg - 1)
        return out
    xd = x if isinstance(x, Decimal) else to_decimal(xq, digits)
    with localcontext() as ctx:
        ctx.prec = _ctx_prec(digits)
        out = Decimal(1)
        if n > 0:
            for j in range(n):
                out *= gamma_hp(xd + 1 + j, digits)
        else:
            for j in range(1, -n + 1):
                out /= gamma_hp(xd + 1 - j, digits)
    with localcontext() as ctx:
        ctx.prec = digits
        return +out


def barnes_shift_relative(x, n: int, step: int):
    """Exact rational part of a Barnes shift ratio after absorbing the
    geometric n-dependence.

    For step = +1 this is [G(1+x+n)/G(1+x)] * [G(1+x+1)/G(1+x)]^(-n) and for
    step = -1 the analogue with unit downward shifts; both telescope into
    finite products of rational factors for any n in Z.
    """
    out = 1
    if step == -1:
        if n >= 0:
            # prod_{j=1}^{n} Gamma(x)/Gamma(x+1-j)
            for j in range(1, n + 1):
                out = out * gamma_ratio_exact(x, 0, 1 - j)
        else:
            # prod_{j=0}^{|n|-1} Gamma(1+x+j)/Gamma(x)
            for j in range(-n):
                out = out * gamma_ratio_exact(x, 1 + j, 0)
        return out
    if step == 1:
        if n >= 0:
            for j in range(1, n):
                out = out * gamma_ratio_exact(x, 1 + j, 1)
        else:
            for j in range(1, -n + 1):
                out = out * gamma_ratio_exact(x, 1, 1 - j)
        return out
    raise ValueError("step must be +1 or -1")


def _factorial_q(n: int) -> mpq:
    out = mpq(1)
    for k in range(2, n + 1):
        out *= k
    return out
