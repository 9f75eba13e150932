import pytest
from gmpy2 import mpq

from taublocks.scalars import (INV_SQRT2, SQRT2, NonGenericPoint,
                               ParameterPoint, QuadExt, pit_check)


def test_quadext_arithmetic():
    x = QuadExt(mpq(1, 2), mpq(1, 3))
    y = QuadExt(2, mpq(-1, 5))
    assert (x * y).a == mpq(1, 2) * 2 + 2 * mpq(1, 3) * mpq(-1, 5)
    assert (x * y).b == mpq(1, 2) * mpq(-1, 5) + mpq(1, 3) * 2
    assert x + y - y == x
    assert (x / y) * y == x
    assert SQRT2 * SQRT2 == QuadExt(2, 0)
    assert INV_SQRT2 * SQRT2 == QuadExt(1, 0)
    assert (SQRT2 ** -2) == QuadExt(mpq(1, 2), 0)


def test_quadext_conjugation_is_ring_hom(rng):
    for _ in range(20):
        vals = [QuadExt(mpq(rng.randint(-9, 9), rng.randint(1, 9)),
                        mpq(rng.randint(-9, 9), rng.randint(1, 9)))
                for _ in range(3)]
        x, y, z = vals
        assert ((x + y) * z).conj() == (x.conj() + y.conj()) * z.conj()
        assert (x * y).conj() == x.conj() * y.conj()


def test_quadext_norm_multiplicative(rng):
    for _ in range(10):
        x = QuadExt(rng.randint(-5, 5), rng.randint(-5, 5))
        y = QuadExt(rng.randint(-5, 5), rng.randint(-5, 5))
        assert (x * y).norm() == x.norm() * y.norm()


def test_parameter_point_json_round_trip():
    p = ParameterPoint.of(theta_0=mpq(2, 5), beta=mpq(-1, 3))
    assert ParameterPoint.from_json(p.to_json()).values == p.values
    with pytest.raises(ValueError):
        ParameterPoint.from_json({"theta_0": "not-a-rational"})


def test_parameter_point_missing_symbol():
    p = ParameterPoint.of(theta_0=1)
    with pytest.raises(NonGenericPoint, match="sigma"):
        p.get("sigma")


def test_pit_check_accepts_identities():
    f = lambda p: p.get("x") ** 2 - 1
    g = lambda p: (p.get("x") - 1) * (p.get("x") + 1)
    assert pit_check(f, g, ["x"], trials=5, seed=1)
    f2 = lambda p: (p.get("x") + 1) ** 2
    g2 = lambda p: p.get("x") ** 2 + 2 * p.get("x") + 1
    assert pit_check(f2, g2, ["x"], trials=5, seed=1)


def test_pit_check_refutes_with_witness():
    res = pit_check(lambda p: p.get("x"), lambda p: p.get("x") ** 2,
                    ["x"], trials=5, seed=2)
    assert not res
    w = res.witness.get("x")
    assert w != w ** 2


def test_pit_check_deterministic():
    f = lambda p: p.get("x") * p.get("y")
    g = lambda p: p.get("y") * p.get("x") + 1
    r1 = pit_check(f, g, ["x", "y"], trials=3, seed=7)
    r2 = pit_check(f, g, ["x", "y"], trials=3, seed=7)
    assert r1.witness.values == r2.witness.values


def test_pit_check_skips_non_generic():
    def f(p):
        if p.get("x").denominator % 2 == 0:
            raise NonGenericPoint("synthetic")
        return p.get("x")

    res = pit_check(f, f, ["x"], trials=4, seed=3)
    assert res.equal and res.trials_run == 4
