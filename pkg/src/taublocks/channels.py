"""Truncated Fourier-Laurent series with exponential channel markers: the
differential ring where tau functions are assembled and ODE residuals are
checked.

An element of degree d with channel index N represents

    marker(d, N) * sum_k  a[N][k] * t^(ref(d,N) + k),
    marker(d, N) = s^N exp((d*rate0 + rate1*N) t^r),
    ref(d, N)    = d*texp0 + texp1*N + texp2*N^2,

with integer offsets k.  texp2 is an integer, so products of channels fold
their exponent defect

    ref(da,Na) + ref(db,Nb) - ref(da+db, Na+Nb)
        = texp2 * ((Na^2 + Nb^2) - (Na+Nb)^2)

into integer offset shifts.  Note the defect is positive for same-sign
channel pairs (texp2 < 0), so per-channel support tops are *not* uniform:
channel N of a degree-d product can reach up to

    shift + |texp2| * (N^2 - min sum of squares of d ints summing to N).

Truncation honesty is tracked per cell: each series carries, per channel, a
lower trusted offset (cells at or above it are exactly the true values) and
an upper support bound; operations propagate both conservatively, so any
cell reported trusted is provably unaffected by the dropped channels and
offsets of the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from gmpy2 import mpq

TOP_WINDOW = 24  # channels tracked exactly for support bounds


class SpecMismatch(ValueError):
    pass


class EmptyTrustedWindow(ValueError):
    pass


@dataclass(frozen=True)
class ChannelSpec:
    exp_degree: int          # r: the exponential carries t^r
    rate0: object            # rho_n = rate0 + n*rate1
    rate1: object
    texp0: object            # gamma_n = texp0 + n*texp1 + n^2*texp2
    texp1: object
    texp2: int

    def __post_init__(self):
        if not isinstance(self.texp2, int):
            raise TypeError("texp2 must be an integer")

    def ref_exponent(self, degree: int, channel: int):
        return degree * self.texp0 + self.texp1 * channel + self.texp2 * channel ** 2

    def rate(self, degree: int, channel: int):
        return degree * self.rate0 + self.rate1 * channel

    def defect(self, na: int, nb: int) -> int:
        return self.texp2 * ((na * na + nb * nb) - (na + nb) ** 2)


class ChannelSeries:
    """See module docstring.  `closed=True` declares that channels outside
    the trusted set are exactly zero (the series is the whole object, not a
    truncation of a larger channel sum)."""

    def __init__(self, spec: ChannelSpec, degree: int,
                 data: Dict[int, Dict[int, object]],
                 trust_lo: Dict[int, int],
                 tops: Dict[int, int],
                 shift: int = 0,
                 closed: bool = False):
        self.spec = spec
        self.degree = degree
        self.trust_lo = dict(trust_lo)
        self.tops = dict(tops)
        self.shift = shift
        self.closed = closed
        self.data = {}
        for n, cells in data.items():
            if n not in self.trust_lo:
                continue
            lo = self.trust_lo[n]
            kept = {k: v for k, v in cells.items() if k >= lo and v != 0}
            if kept:
                self.data[n] = kept

    @classmethod
    def from_channel_lists(cls, spec: ChannelSpec, coeffs: Dict[int, list],
                           closed: bool = False) -> "ChannelSeries":
        """Degree-1 series from per-channel coefficient lists [a_0, a_1, ...]
        placed at offsets 0, -1, -2, ...; trusted down to the list length."""
        data, trust, tops = {}, {}, {}
        for n, lst in coeffs.items():
            data[n] = {-k: v for k, v in enumerate(lst)}
            trust[n] = -(len(lst) - 1)
            tops[n] = 0
        return cls(spec, 1, data, trust, tops, shift=0, closed=closed)

    # -- support bounds ------------------------------------------------
    def top_bound(self, n: int) -> Optional[int]:
        """Upper bound for possibly-nonzero true offsets in channel n;
        None means the channel is empty (closed series, unkept channel)."""
        if n in self.tops:
            return self.tops[n]
        if self.closed:
            return None
        d = self.degree
        quad = -self.spec.texp2 * (n * n - _min_sq_sum(n, d))
        return self.shift + quad

    def cell(self, n: int, k: int):
        return self.data.get(n, {}).get(k, 0)

    def trusted_window(self) -> Dict[int, int]:
        """Channel -> lowest trusted offset (trust extends upward)."""
        return dict(self.trust_lo)

    def trusted_cells(self) -> Dict[Tuple[int, int], object]:
        """All stored trusted cells (missing trusted cells are exact zeros)."""
        return {(n, k): v for n, cells in self.data.items()
                for k, v in cells.items()}

    # -- ring operations -----------------------------------------------
    def add(self, other: "ChannelSeries", sub: bool = False) -> "ChannelSeries":
        if self.spec is not other.spec and self.spec != other.spec:
            raise SpecMismatch("cannot add series with different channel specs")
        if self.degree != other.degree:
            raise SpecMismatch("cannot add series of different degrees")
        data: Dict[int, Dict[int, object]] = {}
        for src, neg in ((self, False), (other, sub)):
            for n, cells in src.data.items():
                tgt = data.setdefault(n, {})
                for k, v in cells.items():
                    cur = tgt.get(k, 0)
                    tgt[k] = cur - v if neg else cur + v
        trust: Dict[int, int] = {}
        for n in set(self.trust_lo) | set(other.trust_lo):
            in_a, in_b = n in self.trust_lo, n in other.trust_lo
            if in_a and in_b:
                trust[n] = max(self.trust_lo[n], other.trust_lo[n])
            elif in_a and other.closed:
                trust[n] = self.trust_lo[n]
            elif in_b and self.closed:
                trust[n] = other.trust_lo[n]
        tops: Dict[int, int] = {}
        for n in trust:
            ta, tb = self.top_bound(n), other.top_bound(n)
            tops[n] = max(x for x in (ta, tb) if x is not None) if (ta is not None or tb is not None) else 0
        return ChannelSeries(self.spec, self.degree, data, trust, tops,
                             max(self.shift, other.shift),
                             self.closed and other.closed)

    def scale(self, factor) -> "ChannelSeries":
        data = {n: {k: v * factor for k, v in cells.items()}
                for n, cells in self.data.items()}
        return ChannelSeries(self.spec, self.degree, data, self.trust_lo,
                             self.tops, self.shift, self.closed)

    def tshift(self, j: int) -> "ChannelSeries":
        """Multiply by t^j (offset shift; degree unchanged)."""
        data = {n: {k + j: v for k, v in cells.items()}
                for n, cells in self.data.items()}
        trust = {n: lo + j for n, lo in self.trust_lo.items()}
        tops = {n: t + j for n, t in self.tops.items()}
        return ChannelSeries(self.spec, self.degree, data, trust, tops,
                             self.shift + j, self.closed)

    def mul(self, other: "ChannelSeries") -> "ChannelSeries":
        if self.spec is not other.spec and self.spec != other.spec:
            raise SpecMismatch("cannot multiply series with different channel specs")
        spec = self.spec
        reach = max((abs(n) for n in list(self.trust_lo) + list(other.trust_lo)),
                    default=0)
        if reach > TOP_WINDOW:
            raise SpecMismatch(
                f"channel window exceeds the tracked range (+-{TOP_WINDOW}); "
                "reduce the channel truncation")
        data: Dict[int, Dict[int, object]] = {}
        for na, acells in self.data.items():
            for nb, bcells in other.data.items():
                n = na + nb
                defect = spec.defect(na, nb)
                tgt = data.setdefault(n, {})
                for ka, va in acells.items():
                    for kb, vb in bcells.items():
                        k = ka + kb + defect
                        tgt[k] = tgt.get(k, 0) + va * vb
        window = range(-TOP_WINDOW, TOP_WINDOW + 1)
        tops: Dict[int, int] = {}
        trust: Dict[int, int] = {}
        for n in window:
            top_n = None
            for na in range(-TOP_WINDOW - 8, TOP_WINDOW + 9):
                ta = self.top_bound(na)
                tb = other.top_bound(n - na)
                if ta is None or tb is None:
                    continue
                reach = ta + tb + spec.defect(na, n - na)
                if top_n is None or reach > top_n:
                    top_n = reach
            if top_n is not None:
                tops[n] = top_n
            lo: Optional[int] = None
            feasible = False
            for na in range(-TOP_WINDOW - 8, TOP_WINDOW + 9):
                nb = n - na
                ta = self.top_bound(na)
                tb = other.top_bound(nb)
                if ta is None or tb is None:
                    continue  # empty channel of a closed factor
                feasible = True
                reach = ta + tb + spec.defect(na, nb)
                in_a, in_b = na in self.trust_lo, nb in other.trust_lo
                if in_a and in_b:
                    cand = spec.defect(na, nb) + max(self.trust_lo[na] + tb,
                                                     other.trust_lo[nb] + ta)
                    cand = min(cand, reach + 1)
                else:
                    cand = reach + 1  # contributions from untracked channels
                lo = cand if lo is None else max(lo, cand)
            if feasible and lo is not None:
                trust[n] = lo
        return ChannelSeries(spec, self.degree + other.degree, data, trust,
                             tops, self.shift + other.shift,
                             self.closed and other.closed)

    def derive(self) -> "ChannelSeries":
        """d/dt: termwise on marker(d,N) t^(ref+k)."""
        spec = self.spec
        r = spec.exp_degree
        d = self.degree
        data: Dict[int, Dict[int, object]] = {}
        for n, cells in self.data.items():
            gamma = spec.ref_exponent(d, n)
            rho = spec.rate(d, n)
            tgt = data.setdefault(n, {})
            for k, v in cells.items():
                co = gamma + k
                if co != 0:
                    tgt[k - 1] = tgt.get(k - 1, 0) + co * v
                if rho != 0:
                    tgt[k + r - 1] = tgt.get(k + r - 1, 0) + r * rho * v
        bump = r - 1
        trust = {n: lo + bump for n, lo in self.trust_lo.items()}
        tops = {n: t + bump for n, t in self.tops.items()}
        return ChannelSeries(spec, d, data, trust, tops, self.shift + bump,
                             self.closed)

    def max_abs_trusted(self):
        """Largest |value| over trusted cells (0 for an all-zero window)."""
        best = None
        for cells in self.data.values():
            for v in cells.values():
                a = abs(v)
                if best is None or a > best:
                    best = a
        return best if best is not None else mpq(0)

    def __repr__(self):
        return (f"ChannelSeries(degree={self.degree}, channels="
                f"{sorted(self.data)}, trust={self.trust_lo})")


def _min_sq_sum(n: int, d: int) -> int:
    """Minimum of sum(m_i^2) over d integers summing to n."""
    n = abs(n)
    q, rem = divmod(n, d)
    return (d - rem) * q * q + rem * (q + 1) ** 2


# Functional aliases matching the operation names used elsewhere.
def cs_mul(a: ChannelSeries, b: ChannelSeries) -> ChannelSeries:
    return a.mul(b)


def cs_add(a: ChannelSeries, b: ChannelSeries) -> ChannelSeries:
    return a.add(b)


def cs_sub(a: ChannelSeries, b: ChannelSeries) -> ChannelSeries:
    return a.add(b, sub=True)


def cs_derive(a: ChannelSeries) -> ChannelSeries:
    return a.derive()


def cs_validity_window(a: ChannelSeries) -> Dict[int, int]:
    return a.trusted_window()
