"""Fourier-expanded tau functions for the three families with a regular or
irregular expansion point, their structure-constant ratios, and the
Hamiltonian-ODE residual checks.

Two evaluation modes:

  * exact  -- all channel constants are rationalized.  The raw constants are
    transcendental (finite Gamma-products), but they differ from an exact
    rational family g_n only by a geometric factor kappa^n, and rescaling
    channel n by kappa^n is precisely the freedom of redefining the Fourier
    parameter s.  Residual cells then vanish exactly iff they vanish for the
    true constants.
  * bigfloat -- decimal floats at a requested precision, with the true
    Gamma-product constants.

The residual of the Hamiltonian ODE is always formed on the denominator-
cleared homogeneous polynomial in tau and its derivatives (degree 8 for the
three-parameter family with one exponential channel, degree 6 for the
two-parameter one), never by series division, so the trusted-window
bookkeeping of the channel ring applies verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from enum import Enum
from typing import Dict, List, Optional, Tuple

from gmpy2 import mpq

from .channels import ChannelSeries, ChannelSpec, EmptyTrustedWindow
from .gammafun import (DEFAULT_DIGITS, _ctx_prec, barnes_shift_ratio,
                       barnes_shift_relative, to_decimal)
from .scalars import DomainError, ParameterPoint, as_qq
from .verma import four_point_block
from .whittaker import icb_series


class TauFamily(Enum):
    PVI = "pvi"
    PV = "pv"
    PIV = "piv"


def _working_digits(digits: int) -> int:
    """Internal precision for bigfloat pipelines; the extra headroom covers
    the dynamic range of the cancellations in the cleared ODE polynomials."""
    return 2 * digits + 30


# ---------------------------------------------------------------------------
# structure constants
# ---------------------------------------------------------------------------

def _pv_g_bases(point: ParameterPoint) -> List[Tuple[mpq, int]]:
    """(base x, direction) pairs: each channel constant is a product of
    G(1 + x + dir*n)-type factors over these bases."""
    t0, tt = point.get("theta_0"), point.get("theta_t")
    th, b = point.get("theta"), point.get("beta")
    return [(t0 + th - b, -1), (-t0 + th - b, -1), (tt + b, +1), (tt - b, -1)]


def _piv_g_bases(point: ParameterPoint) -> List[Tuple[mpq, int]]:
    tt, th, b = point.get("theta_t"), point.get("theta"), point.get("beta")
    return [(th - b, -1), (tt + b, +1), (tt - b, -1)]


def structure_ratio(family: TauFamily, n: int, point: ParameterPoint,
                    digits: int = DEFAULT_DIGITS):
    """C_n / C_0 as a finite product of Gamma-function shift ratios.

    Exact rational when every shift ratio collapses (integer bases), Decimal
    otherwise.  The alternating sign of the three-parameter irregular family
    is included; argument-scale constants are not (see tau_series).
    """
    if n == 0:
        return mpq(1)
    with localcontext() as ctx:
        ctx.prec = _ctx_prec(digits)
        if family is TauFamily.PVI:
            t0, tt = point.get("theta_0"), point.get("theta_t")
            t1, ti, sg = point.get("theta_1"), point.get("theta_inf"), point.get("sigma")
            num = []
            for eps in (1, -1):
                num.append((tt + eps * t0 + sg, n))
                num.append((tt + eps * t0 - sg, -n))
                num.append((t1 + eps * ti + sg, n))
                num.append((t1 + eps * ti - sg, -n))
            den = [(2 * sg, 2 * n), (-2 * sg, -2 * n)]
            out = mpq(1)
            for x, shift in num:
                out = _mul_scalar(out, barnes_shift_ratio(x, shift, digits))
            for x, shift in den:
                out = _div_scalar(out, barnes_shift_ratio(x, shift, digits))
            return out
        if family is TauFamily.PV:
            sign = mpq(-1) ** ((n * (n + 1) // 2) % 2)
            out = sign
            for x, direction in _pv_g_bases(point):
                out = _mul_scalar(out, barnes_shift_ratio(x, direction * n, digits))
            return out
        if family is TauFamily.PIV:
            out = mpq(1)
            for x, direction in _piv_g_bases(point):
                out = _mul_scalar(out, barnes_shift_ratio(x, direction * n, digits))
            return out
    raise ValueError(family)


def channel_constant_exact(family: TauFamily, n: int, point: ParameterPoint) -> mpq:
    """Exact rational channel constant g_n with the geometric part absorbed.

    g_n = (C_n/C_0) * (C_1/C_0)^(-n) including, for the two-parameter family,
    the power-of-two constants from the sqrt(2) argument scale; every
    Gamma-shift ratio telescopes to a rational.  Substituting g_n for the
    true constants amounts to replacing s by s/kappa, under which per-cell
    residual vanishing is invariant.
    """
    if family is TauFamily.PV:
        sign = mpq(-1) ** ((n * (n - 1) // 2) % 2)
        out = sign
        for x, direction in _pv_g_bases(point):
            out *= barnes_shift_relative(x, n, direction)
        return out
    if family is TauFamily.PIV:
        out = mpq(2) ** (-3 * (n * (n - 1) // 2))
        for x, direction in _piv_g_bases(point):
            out *= barnes_shift_relative(x, n, direction)
        return out
    raise DomainError("exact absorbed constants are provided for the irregular families")


def _mul_scalar(a, b):
    if isinstance(a, mpq) and isinstance(b, Decimal):
        return to_decimal(a) * b if a != 1 else b
    if isinstance(a, Decimal) and isinstance(b, mpq):
        return a * to_decimal(b)
    return a * b


def _div_scalar(a, b):
    if isinstance(a, mpq) and isinstance(b, Decimal):
        return to_decimal(a) / b
    if isinstance(a, Decimal) and isinstance(b, mpq):
        return a / to_decimal(b)
    return a / b


# ---------------------------------------------------------------------------
# channel specs and tau assembly
# ---------------------------------------------------------------------------

def channel_spec(family: TauFamily, point: ParameterPoint,
                 numeric_digits: Optional[int] = None) -> ChannelSpec:
    """Exponent/rate bookkeeping of the family's Fourier channels.

    For the regular family the series runs in ascending powers; it is stored
    in descending-offset convention (offset -k holds the t^k coefficient),
    i.e. as a series in 1/t, which flips the sign of the exponent data."""
    if family is TauFamily.PV:
        th, b = point.get("theta"), point.get("beta")
        r0 = b - th / 2
        vals = dict(r=1, rate0=r0, rate1=mpq(1),
                    texp0=-2 * r0 ** 2, texp1=-4 * r0, texp2=-2)
    elif family is TauFamily.PIV:
        th, tt, b = point.get("theta"), point.get("theta_t"), point.get("beta")
        vals = dict(r=2, rate0=tt + b, rate1=mpq(1),
                    texp0=tt ** 2 + 2 * th * b - 3 * b ** 2,
                    texp1=2 * th - 6 * b, texp2=-3)
    elif family is TauFamily.PVI:
        t0, tt, sg = point.get("theta_0"), point.get("theta_t"), point.get("sigma")
        vals = dict(r=1, rate0=mpq(0), rate1=mpq(0),
                    texp0=-(sg ** 2 - t0 ** 2 - tt ** 2), texp1=-2 * sg, texp2=-1)
    else:
        raise ValueError(family)
    if numeric_digits is not None:
        for key in ("rate0", "rate1", "texp0", "texp1"):
            vals[key] = to_decimal(vals[key], numeric_digits)
    return ChannelSpec(vals["r"], vals["rate0"], vals["rate1"],
                       vals["texp0"], vals["texp1"], vals["texp2"])


def _pv_channel_coeffs(point: ParameterPoint, n: int, order: int) -> List[mpq]:
    t0, tt = point.get("theta_0"), point.get("theta_t")
    th, b = point.get("theta"), point.get("beta")
    series = icb_series(1, t0 ** 2, tt ** 2, (th, mpq(1, 4)), b + n,
                        scale=1, order=order)
    return [as_qq(x) for x in series.coeffs]


def _piv_channel_coeffs(point: ParameterPoint, n: int, order: int) -> List[mpq]:
    """Block coefficients at argument scale 1/sqrt(2): odd orders vanish and
    even orders pick up exact powers of 1/2, so the list is rational."""
    tt, th, b = point.get("theta_t"), point.get("theta"), point.get("beta")
    series = icb_series(2, None, tt ** 2, (th, mpq(0), mpq(1, 4)), (b + n) / 2,
                        scale=1, order=order)
    out = []
    half = mpq(1, 2)
    for k, ak in enumerate(series.coeffs):
        ak = as_qq(ak)
        if k % 2 == 1:
            if ak != 0:
                raise DomainError("odd-order block coefficient failed to vanish")
            out.append(mpq(0))
        else:
            out.append(ak * half ** (k // 2))
    return out


def tau_series(family: TauFamily, point: ParameterPoint, n_max: int,
               order: int, digits: int = DEFAULT_DIGITS, mode: str = "exact",
               closed: bool = False) -> ChannelSeries:
    """Degree-1 channel series of the family's tau function.

    Channel n of the irregular families carries the n-shifted block series
    weighted by the structure-constant ratio (exact absorbed constants in
    exact mode, Gamma-products in bigfloat mode); the regular family carries
    the n-shifted four-point block.  `closed=True` declares the truncation
    to be the whole object (used to probe single-channel candidates).
    """
    if mode not in ("exact", "bigfloat"):
        raise ValueError(f"unknown mode {mode!r}")
    numeric = mode == "bigfloat"
    # The cleared ODE polynomials cancel summands dozens of orders larger
    # than the result; carry enough headroom that reported digits are real.
    wdig = _working_digits(digits) if numeric else None
    spec = channel_spec(family, point, wdig)
    coeffs: Dict[int, list] = {}
    if family is TauFamily.PVI:
        t0, tt = point.get("theta_0"), point.get("theta_t")
        t1, ti, sg = point.get("theta_1"), point.get("theta_inf"), point.get("sigma")
        if not numeric and n_max > 0:
            raise DomainError("multi-channel regular tau requires bigfloat mode")
        for n in range(-n_max, n_max + 1):
            block = four_point_block(t0 ** 2, tt ** 2, (sg + n) ** 2,
                                     t1 ** 2, ti ** 2, 1, order)
            cn = structure_ratio(family, n, point, wdig) if n and numeric else mpq(1)
            if numeric:
                with localcontext() as ctx:
                    ctx.prec = _ctx_prec(wdig)
                    cnd = to_decimal(cn, wdig)
                    coeffs[n] = [cnd * to_decimal(x, wdig) for x in block]
            else:
                coeffs[n] = block
        return ChannelSeries.from_channel_lists(spec, coeffs, closed=closed)
    chan_fn = _pv_channel_coeffs if family is TauFamily.PV else _piv_channel_coeffs
    for n in range(-n_max, n_max + 1):
        a = chan_fn(point, n, order)
        if numeric:
            cn = structure_ratio(family, n, point, wdig)
            with localcontext() as ctx:
                ctx.prec = _ctx_prec(wdig)
                cnd = to_decimal(cn, wdig)
                if family is TauFamily.PIV:
                    # constants from the sqrt(2) argument scale: 2^(-(alpha_n - alpha_0)/2)
                    th, b = point.get("theta"), point.get("beta")
                    expo = to_decimal(n * (6 * b - 2 * th) + 3 * n * n, wdig) / 2
                    cnd *= (-expo * Decimal(2).ln()).exp()
                coeffs[n] = [cnd * to_decimal(x, wdig) for x in a]
        else:
            g = channel_constant_exact(family, n, point)
            coeffs[n] = [g * x for x in a]
    return ChannelSeries.from_channel_lists(spec, coeffs, closed=closed)


# ---------------------------------------------------------------------------
# Hamiltonian-ODE residuals
# ---------------------------------------------------------------------------

@dataclass
class ResidualReport:
    family: TauFamily
    mode: str
    window: Dict[int, int]
    cells: Dict[Tuple[int, int], object]
    max_abs: object
    digits: Optional[int] = None

    @property
    def exact_zero(self) -> bool:
        return self.max_abs == 0


def _pv_residual_series(p0: ChannelSeries, th, th0, tht) -> ChannelSeries:
    """Denominator-cleared sigma-form residual, homogeneous of degree 8.

    With h = t (log tau)~' the equation contains h'' (thus tau'''), h - t h'
    and a quartic in h'; clearing tau^8 yields the combination below, where
    X = p2 p0 - p1^2, NH = p1 p0 + t X (so h' = NH / p0^2), and
    Y = p3 p0^2 - 3 p2 p1 p0 + 2 p1^3.
    """
    p1 = p0.derive()
    p2 = p1.derive()
    p3 = p2.derive()
    X = p2.mul(p0).add(p1.mul(p1), sub=True)
    NH = p1.mul(p0).add(X.tshift(1))
    Y = (p3.mul(p0.mul(p0))
         .add(p2.mul(p1.mul(p0)).scale(-3))
         .add(p1.mul(p1.mul(p1)).scale(2)))
    NA = X.mul(p0).tshift(1).scale(2).add(Y.tshift(2))
    p0sq = p0.mul(p0)
    NB = X.mul(p0sq).tshift(2).scale(-1).add(NH.mul(NH).scale(2))
    p04 = p0sq.mul(p0sq)
    q_minus = NH.scale(2).add(p0sq.scale(th), sub=True)
    q_plus = NH.scale(2).add(p0sq.scale(th))
    f1 = q_minus.mul(q_minus).add(p04.scale(4 * th0 * th0), sub=True)
    f2 = q_plus.mul(q_plus).add(p04.scale(4 * tht * tht), sub=True)
    quart = f1.mul(f2).scale(_quarter(th))
    return NA.mul(NA).mul(p0sq).add(NB.mul(NB), sub=True).add(quart)


def _piv_residual_series(p0: ChannelSeries, th, tht) -> ChannelSeries:
    """Denominator-cleared residual for H = (log tau)', degree 6 in tau."""
    p1 = p0.derive()
    p2 = p1.derive()
    p3 = p2.derive()
    n1 = p2.mul(p0).add(p1.mul(p1), sub=True)
    n2 = (p3.mul(p0.mul(p0))
          .add(p2.mul(p1.mul(p0)).scale(-3))
          .add(p1.mul(p1.mul(p1)).scale(2)))
    p0sq = p0.mul(p0)
    w = n1.tshift(1).add(p1.mul(p0), sub=True)
    term2 = w.mul(w).mul(p0sq).scale(-4)
    fa = n1.add(p0sq.scale(2 * (th + tht)), sub=True)
    fb = n1.add(p0sq.scale(4 * tht), sub=True)
    term3 = n1.mul(fa.mul(fb)).scale(4)
    return n2.mul(n2).add(term2).add(term3)


def _quarter(like):
    return Decimal("0.25") if isinstance(like, Decimal) else mpq(1, 4)


def ode_residual(family: TauFamily, tau: ChannelSeries, point: ParameterPoint,
                 digits: Optional[int] = None) -> ResidualReport:
    """Expand the family's cleared Hamiltonian ODE on the tau series and
    report every trusted residual cell.

    Exact mode demands literal zeros; bigfloat mode reports the max
    magnitude (compare against 10^-(digits-15))."""
    numeric = digits is not None
    wdig = _working_digits(digits) if numeric else None
    if family is TauFamily.PV:
        th, t0, tt = point.get("theta"), point.get("theta_0"), point.get("theta_t")
        if numeric:
            with localcontext() as ctx:
                ctx.prec = _ctx_prec(wdig)
                res = _pv_residual_series(tau, to_decimal(th, wdig),
                                          to_decimal(t0, wdig), to_decimal(tt, wdig))
        else:
            res = _pv_residual_series(tau, th, t0, tt)
    elif family is TauFamily.PIV:
        th, tt = point.get("theta"), point.get("theta_t")
        if numeric:
            with localcontext() as ctx:
                ctx.prec = _ctx_prec(wdig)
                res = _piv_residual_series(tau, to_decimal(th, wdig),
                                           to_decimal(tt, wdig))
        else:
            res = _piv_residual_series(tau, th, tt)
    else:
        raise DomainError("the regular family has no Hamiltonian-ODE check here")
    window = {}
    for n, lo in res.trusted_window().items():
        top = res.top_bound(n)
        if top is not None and lo <= top:
            window[n] = lo
    if not window:
        raise EmptyTrustedWindow(
            "no residual cell survives the truncation analysis; "
            "increase the channel window or the series order")
    return ResidualReport(family, "bigfloat" if numeric else "exact",
                          window, res.trusted_cells(), res.max_abs_trusted(),
                          digits)
