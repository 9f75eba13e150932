"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line (run with -s to see them).

Criteria 7a and 9a are implemented exactly as stated -- the residual of the
single-channel (s = 0) tau is required to vanish on the trusted window --
and are expected to fail at generic points: a lone channel is not a
solution of the Hamiltonian ODE (the top residual cell is the quartic
obstruction 4((beta-theta)^2-theta_0^2)(beta^2-theta_t^2), confirmed here),
and only the full channel sum cancels it.  They are marked strict-xfail so
the suite documents the defect without going red; criteria 7b/9b verify the
mathematically correct statement exactly (all trusted residual cells of the
multi-channel sum vanish identically, channels beyond the window included
with exact rationalized constants).
"""

import random
from decimal import Decimal

import pytest
from gmpy2 import mpq

from taublocks.cache import Cache, job_key
from taublocks.linalg import det_dense
from taublocks.nekrasov import (DEGENERATION_EDGES, NekrasovKind,
                                agt_equivalence_check, block_sum,
                                degeneration_limit_check,
                                hypergeometric_coefficient)
from taublocks.scalars import ParameterPoint, pit_check
from taublocks.skew import solve_c, verify_observed
from taublocks.tau import TauFamily, ode_residual, tau_series
from taublocks.verma import four_point_block, gram_matrix
from taublocks.whittaker import icb_series, irregular_descendants, relation_residual
from conftest import rational

pytestmark = pytest.mark.acceptance


def report(criterion, ok, detail=""):
    print(f"\nCRITERION {criterion}: {'PASS' if ok else 'FAIL'}"
          + (f" - {detail}" if detail else ""))
    assert ok, f"criterion {criterion}: {detail}"


def sample_points(seed, symbols, count, avoid_half_integer=()):
    rng = random.Random(seed)
    points = []
    while len(points) < count:
        p = ParameterPoint({s: rational(rng, 5, 9) for s in symbols})
        if any((2 * p.get(s)).denominator == 1 for s in avoid_half_integer):
            continue
        points.append(p)
    return points


# -- 1: block recursion agrees with the dressed combinatorial sum ----------

def test_criterion_1_agt_equivalence():
    points = sample_points(101, ("theta_0", "theta_t", "sigma",
                                 "theta_1", "theta_inf"), 5,
                           avoid_half_integer=("sigma",))
    for p in points:
        rep = agt_equivalence_check(p, 6)
        assert rep.equal, (p.to_json(), rep.first_mismatch)
    report(1, True, "block recursion == dressed pair sum through t^6 at 5 points")


def test_criterion_1_regression_dressing_exponent():
    # the insertion-charge exponent is forced; theta_0 theta_1 fails already
    # at order 1 (documents the misprint the equivalence check corrects)
    [p] = sample_points(102, ("theta_0", "theta_t", "sigma",
                              "theta_1", "theta_inf"), 1,
                        avoid_half_integer=("sigma",))
    t0, tt = p.get("theta_0"), p.get("theta_t")
    t1, ti, sg = p.get("theta_1"), p.get("theta_inf"), p.get("sigma")
    block = four_point_block(t0 ** 2, tt ** 2, sg ** 2, t1 ** 2, ti ** 2, 1, 1)
    raw = block_sum(NekrasovKind.FULL4, p, 1)
    assert block[1] == raw[1] - 2 * tt * t1
    assert block[1] != raw[1] - 2 * t0 * t1


# -- 2: hypergeometric specialization --------------------------------------

def test_criterion_2_hypergeometric():
    rng = random.Random(202)
    p = ParameterPoint({s: rational(rng, 5, 9)
                        for s in ("theta_0", "theta_1", "theta_inf")})
    p = p.with_values(theta_t=mpq(1, 2), sigma=p.get("theta_0") + mpq(1, 2))
    coeffs = block_sum(NekrasovKind.FULL4, p, 8)
    for n in range(9):
        assert coeffs[n] == hypergeometric_coefficient(n, p)
    report(2, True, "pair sum equals the closed product through t^8")


# -- 3: classical leading tau coefficient -----------------------------------

def test_criterion_3_jimbo_regression():
    points = sample_points(303, ("theta_0", "theta_t", "sigma",
                                 "theta_1", "theta_inf"), 5,
                           avoid_half_integer=("sigma",))
    for p in points:
        tau = tau_series(TauFamily.PVI, p, n_max=0, order=1, mode="exact")
        t0, tt, sg = p.get("theta_0"), p.get("theta_t"), p.get("sigma")
        t1, ti = p.get("theta_1"), p.get("theta_inf")
        expected = (t0 ** 2 - tt ** 2 - sg ** 2) * \
            (ti ** 2 - t1 ** 2 - sg ** 2) / (2 * sg ** 2)
        assert tau.cell(0, -1) == expected
    report(3, True, "channel-0 t-coefficient matches the classical term at 5 points")


# -- 4: degeneration ladder --------------------------------------------------

def test_criterion_4_degeneration_ladder():
    rng = random.Random(404)
    syms = ("theta_0", "theta_t", "sigma", "theta_1", "theta_inf",
            "theta_star", "theta_ss")
    p = ParameterPoint({s: mpq(rng.choice([1, -1, 2, -2, 3]), rng.randint(4, 11))
                        for s in syms})
    scales = [mpq(100), mpq(1000), mpq(10000)]
    accelerated = (NekrasovKind.PIII_D7, NekrasovKind.PIII_D8)
    for (parent, child) in DEGENERATION_EDGES:
        rep = degeneration_limit_check(parent, child, p, scales, 3)
        for k in range(4):
            assert rep.deviations[-1][0] == 0  # constant terms exact
            if k == 0:
                continue
            for i in range(2):
                a, b = rep.deviations[i][k], rep.deviations[i + 1][k]
                if (parent, child) == accelerated:
                    # the sigma-only target converges one order faster:
                    # the 1/L term cancels identically (k=1 deviations are
                    # exactly zero; higher ones contract ~100x per decade)
                    if k == 1:
                        assert a == 0 and b == 0
                    else:
                        assert mpq(80) <= a / b <= mpq(120), (parent, child, k)
                else:
                    assert mpq(8) <= a / b <= mpq(12), (parent, child, k, float(a / b))
    report(4, True, "all five limits contract per decade as expected")


# -- 5/6: reference irregular block series ----------------------------------

def test_criterion_5_rank1_regression():
    from test_whittaker import a1_rank1, a2_rank1
    rng = random.Random(505)
    for _ in range(10):
        b, th, t0, tt = (rational(rng, 5, 9) for _ in range(4))
        series = icb_series(1, t0 ** 2, tt ** 2, (th, mpq(1, 4)), b, 1, 2)
        assert series.coeffs[1] == a1_rank1(b, th, t0, tt)
        assert series.coeffs[2] == a2_rank1(b, th, t0, tt)
    report(5, True, "reference degree-3 and degree-6 coefficients at 10 points")


def test_criterion_6_rank2_regression():
    from test_whittaker import a2_rank2, a4_rank2
    rng = random.Random(606)
    for _ in range(5):
        b, th, tt = (rational(rng, 5, 9) for _ in range(3))
        series = icb_series(2, None, tt ** 2, (th, 0, mpq(1, 4)), b / 2, 1, 7)
        assert series.coeffs[2] == a2_rank2(b, th, tt)
        assert series.coeffs[4] == a4_rank2(b, th, tt)
        assert all(series.coeffs[k] == 0 for k in (1, 3, 5, 7))
    report(6, True, "reference coefficients match; odd orders vanish through t^-7")


# -- 7/8/9: Hamiltonian-ODE residuals ---------------------------------------

PV_SYMS = ("theta", "theta_0", "theta_t", "beta")


@pytest.fixture(scope="module")
def ode_points():
    return sample_points(707, PV_SYMS, 3)


@pytest.mark.xfail(strict=True, reason=(
    "unattainable as stated: the s=0 single channel is not a tau function; its top "
    "residual cell equals 4((beta-theta)^2-theta_0^2)(beta^2-theta_t^2), "
    "which the channel sum cancels through the +-1 channels (see the "
    "structure-constant telescoping identity); criterion 7b verifies the "
    "corrected exact statement"))
def test_criterion_7a_pv_single_channel_as_stated(ode_points):
    for p in ode_points:
        tau = tau_series(TauFamily.PV, p, n_max=0, order=10, mode="exact",
                         closed=True)
        rep = ode_residual(TauFamily.PV, tau, p)
        assert min(rep.window.values()) <= -6
        assert rep.exact_zero, f"nonzero trusted cells: {rep.cells}"


def test_criterion_7_pv_single_channel_obstruction_identity(ode_points):
    # the failure of 7a is structural: top cell == the quartic, and the
    # +-1-channel structure constants satisfy exactly the telescoping needed
    # to cancel it in the full sum
    from taublocks.tau import channel_constant_exact
    for p in ode_points:
        tau = tau_series(TauFamily.PV, p, n_max=0, order=6, mode="exact",
                         closed=True)
        rep = ode_residual(TauFamily.PV, tau, p)
        th, t0, tt, b = (p.get(s) for s in PV_SYMS)
        quart = 4 * ((b - th) ** 2 - t0 ** 2) * (b ** 2 - tt ** 2)
        assert rep.cells.get((0, 0), mpq(0)) == quart
        g = channel_constant_exact(TauFamily.PV, -1, p)
        assert g == -((th - b) ** 2 - t0 ** 2) * (tt ** 2 - b ** 2)
    report("7-analysis", True,
           "single-channel obstruction equals the quartic; constants telescope")


def test_criterion_7b_pv_exact_channel_sum(ode_points):
    for p in ode_points:
        tau = tau_series(TauFamily.PV, p, n_max=1, order=10, mode="exact")
        rep = ode_residual(TauFamily.PV, tau, p)
        assert rep.window[0] <= -6
        assert rep.exact_zero, {k: str(v) for k, v in rep.cells.items()}
    report("7 (exact channel sum)", True,
           "residual vanishes exactly on the trusted window through offset -6 "
           "at 3 points")


def test_criterion_8_pv_numeric(ode_points):
    p = ode_points[0]
    tau = tau_series(TauFamily.PV, p, n_max=1, order=10, mode="bigfloat",
                     digits=60)
    rep = ode_residual(TauFamily.PV, tau, p, digits=60)
    bound = Decimal(10) ** -40
    assert rep.window[0] <= -6
    assert abs(rep.max_abs) < bound, rep.max_abs
    report(8, True, f"max |trusted cell| = {rep.max_abs} < 1e-40 at 60 digits")


@pytest.mark.xfail(strict=True, reason=(
    "unattainable as stated, same mechanism as criterion 7a: the lone channel's top "
    "residual cell is 32 rho (rho - theta - theta_t)(rho - 2 theta_t) with "
    "rho = theta_t + beta, nonzero at generic beta"))
def test_criterion_9a_piv_single_channel_as_stated(ode_points):
    for p in ode_points:
        tau = tau_series(TauFamily.PIV, p, n_max=0, order=10, mode="exact",
                         closed=True)
        rep = ode_residual(TauFamily.PIV, tau, p)
        assert rep.exact_zero, f"nonzero trusted cells: {rep.cells}"


def test_criterion_9b_piv_exact_and_numeric(ode_points):
    for p in ode_points:
        tau = tau_series(TauFamily.PIV, p, n_max=1, order=10, mode="exact")
        rep = ode_residual(TauFamily.PIV, tau, p)
        assert rep.exact_zero, {k: str(v) for k, v in rep.cells.items()}
    p = ode_points[0]
    taub = tau_series(TauFamily.PIV, p, n_max=1, order=10, mode="bigfloat",
                      digits=60)
    repb = ode_residual(TauFamily.PIV, taub, p, digits=60)
    assert abs(repb.max_abs) < Decimal(10) ** -40, repb.max_abs
    report(9, True, "exact channel-sum residual zero at 3 points; "
           f"numeric max = {repb.max_abs} < 1e-40")


# -- 10: skew-pair coefficient reconstruction -------------------------------

def test_criterion_10_skew_coefficients():
    reports = [solve_c(k, seed=1010) for k in range(1, 6)]
    for rep in reports:
        assert rep.consistent
        for v in rep.determined.values():
            assert v.denominator == 1 and v >= 0
    det = {}
    for rep in reports:
        det.update(rep.determined)
    # reference constants of the t^-1..t^-4 decompositions
    assert det[((1,), (), (), ())] == 1
    assert det[((1,), (1,), (1,), (1,))] == 2
    assert all(det[key] == 4 for key in det
               if sum(key[0]) + sum(key[1]) == 3 and sum(key[2]) == 1)
    assert det[((2,), (2,), (2,), (2,))] == 4
    assert det[((1, 1), (1, 1), (1, 1), (1, 1))] == 4
    assert det[((2,), (1, 1), (2,), (1, 1))] == 12
    assert det[((1, 1), (2,), (1, 1), (2,))] == 12
    assert all(det[key] == 6 for key in det
               if sum(key[0]) + sum(key[1]) == 4 and sum(key[2]) == 1
               and (sum(key[0]) == 3 or sum(key[1]) == 3))
    assert all(det[key] == 8 for key in det
               if sum(key[0]) == 2 and sum(key[1]) == 2 and sum(key[2]) == 1)
    obs = verify_observed(reports)
    assert obs.ok and not obs.undetermined
    report(10, True, "reference decompositions, integrality, non-negativity, "
           "observed families and symmetries through k=5")


# -- 11: property bundle -----------------------------------------------------

def test_criterion_11_property_suites(tmp_path):
    # Gram symmetry and level-1 determinant
    rng = random.Random(1111)
    d, c = rational(rng), rational(rng)
    g = gram_matrix(d, c, 3)
    assert all(g[i][j] == g[j][i] for i in range(len(g)) for j in range(len(g)))
    assert pit_check(lambda p: det_dense(gram_matrix(p.get("d"), p.get("c"), 1)),
                     lambda p: 2 * p.get("d"), ["d", "c"], trials=5, seed=5)

    # full mode-relation consistency of the irregular descendants, m <= 5
    b, th, tt = (rational(rng, 5, 9) for _ in range(3))
    ws = irregular_descendants(1, tt ** 2, (th, mpq(1, 4)), b, 5)
    for m in range(6):
        for n in range(1, m + 3):
            assert relation_residual(1, tt ** 2, (th, mpq(1, 4)), b, ws, n, m) == {}

    # U-multiplicativity over nested shapes
    from taublocks.skew import u_factor
    p = ParameterPoint.of(beta=rational(rng), theta=rational(rng),
                          theta_0=rational(rng), theta_t=rational(rng))
    assert u_factor((3, 2, 1), (1,), p) == \
        u_factor((3, 2, 1), (2, 1), p) * u_factor((2, 1), (1,), p)

    # channel-ring Leibniz and truncation stability
    from taublocks.channels import ChannelSeries, ChannelSpec
    spec = ChannelSpec(1, mpq(1, 2), mpq(1), mpq(-1, 2), mpq(-2), -2)
    coeffs = {n: [rational(rng, 4, 5) for _ in range(7)] for n in (-1, 0, 1)}
    for n in coeffs:
        coeffs[n][0] = mpq(1)
    s_small = ChannelSeries.from_channel_lists(
        spec, {n: lst[:5] for n, lst in coeffs.items()})
    s_big = ChannelSeries.from_channel_lists(spec, coeffs)

    def pipeline(s):
        return s.mul(s.derive()).mul(s.tshift(1))

    small, big = pipeline(s_small), pipeline(s_big)
    for n, lo in small.trust_lo.items():
        top = small.top_bound(n)
        for k in range(lo, (top if top is not None else lo) + 1):
            assert small.cell(n, k) == big.cell(n, k)
    a, bb = s_small, s_small.derive()
    assert a.mul(bb).derive().data == \
        a.derive().mul(bb).add(a.mul(bb.derive())).data

    # cache determinism and thread independence
    cache = Cache(tmp_path / "acc")
    key = job_key("acceptance", {"n": 1})
    cache.put(key, {"r": "1"})
    assert cache.get(key) == {"r": "1"}
    pt = ParameterPoint.of(theta_0=mpq(2, 5), theta_t=mpq(3, 7),
                           sigma=mpq(4, 9), theta_1=mpq(1, 3),
                           theta_inf=mpq(5, 11))
    assert block_sum(NekrasovKind.FULL4, pt, 3, threads=1) == \
        block_sum(NekrasovKind.FULL4, pt, 3, threads=4)
    report(11, True, "gram/determinant, mode relations, skew factors, "
           "ring laws, cache and threading properties")
