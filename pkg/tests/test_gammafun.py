from decimal import Decimal, localcontext

import mpmath
import pytest
from gmpy2 import mpq

from taublocks.gammafun import (barnes_shift_ratio, barnes_shift_relative,
                                gamma_hp, gamma_ratio_exact, pi_hp, to_decimal)
from taublocks.scalars import DomainError


def close(a: Decimal, b: Decimal, digits: int) -> bool:
    with localcontext() as ctx:
        ctx.prec = digits + 20
        scale = max(abs(a), abs(b), Decimal(1))
        return abs(a - b) <= scale * Decimal(10) ** -(digits - 5)


def test_gamma_trivial_values():
    assert gamma_hp(1, 60) == 1
    assert gamma_hp(5, 60) == 24
    with pytest.raises(DomainError):
        gamma_hp(0, 60)
    with pytest.raises(DomainError):
        gamma_hp(-3, 60)


def test_gamma_half_is_sqrt_pi():
    # cross-check against an independently computed sqrt(pi)
    with localcontext() as ctx:
        ctx.prec = 90
        ref = pi_hp(80).sqrt()
        assert close(gamma_hp(mpq(1, 2), 80), +ref, 80)


def test_gamma_against_mpmath():
    mpmath.mp.dps = 75
    for z in (mpq(7, 3), mpq(1, 7), mpq(-5, 2), mpq(19, 4)):
        zf = mpmath.mpf(int(z.numerator)) / mpmath.mpf(int(z.denominator))
        ref = Decimal(mpmath.nstr(mpmath.gamma(zf), 70, strip_zeros=False))
        assert close(gamma_hp(z, 60), ref, 60)


def test_gamma_functional_equation(rng):
    for _ in range(10):
        z = mpq(rng.randint(1, 99), 10)
        lhs = gamma_hp(z + 1, 60)
        with localcontext() as ctx:
            ctx.prec = 80
            rhs = to_decimal(z, 60) * gamma_hp(z, 60)
        assert close(lhs, rhs, 60)


def test_barnes_shift_ratio_examples():
    assert barnes_shift_ratio(mpq(5, 7), 0) == 1
    assert barnes_shift_ratio(1, 2) == 2  # Gamma(2) Gamma(3)
    assert close(barnes_shift_ratio(mpq(1, 2), 1, 60), gamma_hp(mpq(3, 2), 60), 60)


def test_barnes_shift_ratio_exact_integer_case():
    # downward shifts telescope through reciprocals of factorials
    assert barnes_shift_ratio(3, -2) == mpq(1, 2)  # 1/(Gamma(3) Gamma(2))
    with pytest.raises(DomainError):
        barnes_shift_ratio(0, -1)


def test_barnes_telescoping(rng):
    digits = 60
    for _ in range(5):
        x = mpq(rng.randint(1, 40), rng.randint(7, 13))
        for n in range(-3, 4):
            for m in range(-3, 4):
                with localcontext() as ctx:
                    ctx.prec = 80
                    lhs = (to_decimal(barnes_shift_ratio(x, n, digits), digits)
                           * to_decimal(barnes_shift_ratio(x + n, m, digits), digits))
                    rhs = to_decimal(barnes_shift_ratio(x, n + m, digits), digits)
                assert close(lhs, rhs, digits)


def test_gamma_ratio_exact():
    x = mpq(3, 7)
    assert gamma_ratio_exact(x, 3, 0) == x * (x + 1) * (x + 2)
    assert gamma_ratio_exact(x, 0, 2) == 1 / (x * (x + 1))
    assert gamma_ratio_exact(x, 1, 1) == 1


def test_barnes_shift_relative_consistency():
    # the absorbed ratio times the geometric part recovers the raw ratio
    digits = 60
    x = mpq(4, 9)
    for n in (-3, -1, 2, 3):
        rel = barnes_shift_relative(x, n, -1)
        with localcontext() as ctx:
            ctx.prec = 80
            raw = to_decimal(barnes_shift_ratio(x, -n, digits), digits)
            unit = to_decimal(barnes_shift_ratio(x, -1, digits), digits)
            assert close(raw, to_decimal(rel, digits) * unit ** n, digits)
        rel_up = barnes_shift_relative(x, n, +1)
        with localcontext() as ctx:
            ctx.prec = 80
            raw = to_decimal(barnes_shift_ratio(x, n, digits), digits)
            unit = to_decimal(barnes_shift_ratio(x, 1, digits), digits)
            assert close(raw, to_decimal(rel_up, digits) * unit ** n, digits)
