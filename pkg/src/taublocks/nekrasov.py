"""Combinatorial block sums over pairs of Young diagrams: the four-parameter
c = 1 factor, its four degenerate descendants, series assembly, equivalence
with the Verma-module block, and numeric degeneration-limit checks.

Every factor is a product over the cells of the two diagrams with exact
rational values at rational points; a vanishing denominator raises
NonGenericPoint naming the offending cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Sequence, Tuple

from gmpy2 import mpq

from .partitions import Partition, conjugate, enumerate_partitions, part_at
from .scalars import NonGenericPoint, ParameterPoint, as_qq
from .util import pmap
from .verma import four_point_block


class NekrasovKind(Enum):
    FULL4 = "full4"
    PV = "pv"
    PIII = "piii"
    PIII_ALT = "piii_alt"
    PIII_D7 = "piii_d7"
    PIII_D8 = "piii_d8"


KIND_SYMBOLS: Dict[NekrasovKind, Tuple[str, ...]] = {
    NekrasovKind.FULL4: ("theta_0", "theta_t", "sigma", "theta_1", "theta_inf"),
    NekrasovKind.PV: ("theta_0", "theta_t", "sigma", "theta_star"),
    NekrasovKind.PIII: ("theta_ss", "sigma", "theta_star"),
    NekrasovKind.PIII_ALT: ("theta_0", "theta_t", "sigma"),
    NekrasovKind.PIII_D7: ("theta_ss", "sigma"),
    NekrasovKind.PIII_D8: ("sigma",),
}


def _cell_data(lam: Partition, mu: Partition):
    """Per-cell hooks and cross denominators shared by every kind."""
    lam_c, mu_c = conjugate(lam), conjugate(mu)
    lam_cells = []
    for i, p in enumerate(lam, 1):
        for j in range(1, p + 1):
            hook = lam[i - 1] + lam_c[j - 1] - i - j + 1
            cross = part_at(lam_c, j) + part_at(mu, i) - i - j + 1
            lam_cells.append((i, j, hook, cross))
    mu_cells = []
    for i, p in enumerate(mu, 1):
        for j in range(1, p + 1):
            hook = mu[i - 1] + mu_c[j - 1] - i - j + 1
            cross = part_at(mu_c, j) + part_at(lam, i) - i - j + 1
            mu_cells.append((i, j, hook, cross))
    return lam_cells, mu_cells


def nekrasov_factor(kind: NekrasovKind, lam: Partition, mu: Partition,
                    point: ParameterPoint) -> mpq:
    """The cellwise product for one (lam, mu) pair; equals 1 on (, )."""
    for sym in KIND_SYMBOLS[kind]:
        point.get(sym)
    sigma = point.get("sigma")
    lam_cells, mu_cells = _cell_data(lam, mu)
    out = mpq(1)

    def numerator(kind: NekrasovKind, content: mpq, side: int) -> mpq:
        # side +1 for cells of lam (sigma enters with +), -1 for cells of mu
        s = sigma if side > 0 else -sigma
        if kind is NekrasovKind.FULL4:
            t0, tt = point.get("theta_0"), point.get("theta_t")
            t1, ti = point.get("theta_1"), point.get("theta_inf")
            return ((tt + s + content) ** 2 - t0 ** 2) * ((t1 + s + content) ** 2 - ti ** 2)
        if kind is NekrasovKind.PV:
            t0, tt, ts = point.get("theta_0"), point.get("theta_t"), point.get("theta_star")
            return (ts + s + content) * ((tt + s + content) ** 2 - t0 ** 2)
        if kind is NekrasovKind.PIII:
            ts, tss = point.get("theta_star"), point.get("theta_ss")
            return (ts + s + content) * (tss + s + content)
        if kind is NekrasovKind.PIII_ALT:
            t0, tt = point.get("theta_0"), point.get("theta_t")
            return (tt + s + content) ** 2 - t0 ** 2
        if kind is NekrasovKind.PIII_D7:
            tss = point.get("theta_ss")
            return tss + s + content
        return mpq(1)

    for i, j, hook, cross in lam_cells:
        den = hook ** 2 * (cross + 2 * sigma) ** 2
        if den == 0:
            raise NonGenericPoint(f"vanishing denominator at cell ({i},{j}) of first diagram")
        out *= numerator(kind, mpq(i - j), +1) / den
    for i, j, hook, cross in mu_cells:
        den = hook ** 2 * (cross - 2 * sigma) ** 2
        if den == 0:
            raise NonGenericPoint(f"vanishing denominator at cell ({i},{j}) of second diagram")
        out *= numerator(kind, mpq(i - j), -1) / den
    return out


def block_sum(kind: NekrasovKind, point: ParameterPoint, order: int,
              threads: int = 1) -> List[mpq]:
    """Coefficients of t^k, k = 0..order, of the pair sum (no prefactors)."""
    pairs_by_level: List[List[Tuple[Partition, Partition]]] = []
    for k in range(order + 1):
        pairs = []
        for a in range(k + 1):
            for lam in enumerate_partitions(a):
                for mu in enumerate_partitions(k - a):
                    pairs.append((lam, mu))
        pairs_by_level.append(pairs)
    out = []
    for pairs in pairs_by_level:
        vals = pmap(lambda p: nekrasov_factor(kind, p[0], p[1], point), pairs, threads)
        out.append(sum(vals, mpq(0)))
    return out


def binomial_series(exponent: mpq, order: int) -> List[mpq]:
    """Coefficients of (1 - t)^exponent through t^order."""
    out = [mpq(1)]
    for j in range(1, order + 1):
        out.append(out[-1] * (j - 1 - exponent) / j)
    return out


@dataclass
class AgtReport:
    equal: bool
    block_side: List[mpq]
    sum_side: List[mpq]
    first_mismatch: int | None = None


def agt_equivalence_check(point: ParameterPoint, order: int,
                          threads: int = 1) -> AgtReport:
    """Compare the Verma-block series against the dressed pair sum at c = 1.

    Both sides share the prefactor t^(sigma^2 - theta_0^2 - theta_t^2); the
    pair sum additionally carries the binomial dressing factor
    (1-t)^(2 theta_t theta_1) coupling the two insertion charges.  (Sources
    sometimes misprint the exponent with theta_0 in place of theta_t; the
    identity holds only with the insertion charges, which is also what the
    closed hypergeometric specialization of the same sum forces.)
    """
    t0, tt = point.get("theta_0"), point.get("theta_t")
    t1, ti, sg = point.get("theta_1"), point.get("theta_inf"), point.get("sigma")
    block = four_point_block(t0 ** 2, tt ** 2, sg ** 2, t1 ** 2, ti ** 2, 1, order)
    raw = block_sum(NekrasovKind.FULL4, point, order, threads)
    dress = binomial_series(2 * tt * t1, order)
    dressed = [sum((dress[j] * raw[k - j] for j in range(k + 1)), mpq(0))
               for k in range(order + 1)]
    for k in range(order + 1):
        if dressed[k] != block[k]:
            return AgtReport(False, block, dressed, k)
    return AgtReport(True, block, dressed)


# Degeneration ladder: parent kind -> child kind with the standard
# substitution.  Each edge sends t -> t/L, so the parent coefficient of t^k
# is compared against the child's after division by L^k.
def _sub_full4_pv(point: ParameterPoint, lam: mpq) -> ParameterPoint:
    ts = point.get("theta_star")
    return point.with_values(theta_1=(lam + ts) / 2, theta_inf=(lam - ts) / 2)


def _sub_pv_piii(point: ParameterPoint, lam: mpq) -> ParameterPoint:
    tss = point.get("theta_ss")
    return point.with_values(theta_t=(lam + tss) / 2, theta_0=(lam - tss) / 2)


def _sub_star_to_lam(point: ParameterPoint, lam: mpq) -> ParameterPoint:
    return point.with_values(theta_star=lam)


def _sub_ss_to_lam(point: ParameterPoint, lam: mpq) -> ParameterPoint:
    return point.with_values(theta_ss=lam)


DEGENERATION_EDGES: Dict[Tuple[NekrasovKind, NekrasovKind], Callable] = {
    (NekrasovKind.FULL4, NekrasovKind.PV): _sub_full4_pv,
    (NekrasovKind.PV, NekrasovKind.PIII): _sub_pv_piii,
    (NekrasovKind.PV, NekrasovKind.PIII_ALT): _sub_star_to_lam,
    (NekrasovKind.PIII, NekrasovKind.PIII_D7): _sub_star_to_lam,
    (NekrasovKind.PIII_D7, NekrasovKind.PIII_D8): _sub_ss_to_lam,
}


@dataclass
class DegenerationReport:
    lam_values: List[mpq]
    deviations: List[List[mpq]]  # deviations[i][k] for lam_values[i], t^k


def degeneration_limit_check(parent: NekrasovKind, child: NekrasovKind,
                             point: ParameterPoint, lam_values: Sequence,
                             order: int, threads: int = 1) -> DegenerationReport:
    """Evaluate the parent sum under the edge's substitution at each scale
    and report exact coefficientwise deviation from the child sum."""
    try:
        sub = DEGENERATION_EDGES[(parent, child)]
    except KeyError:
        raise ValueError(f"({parent}, {child}) is not an edge of the degeneration scheme")
    child_coeffs = block_sum(child, point, order, threads)
    lam_values = [as_qq(x) for x in lam_values]
    deviations = []
    for lam in lam_values:
        parent_coeffs = block_sum(parent, sub(point, lam), order, threads)
        scale = mpq(1)
        devs = []
        for k in range(order + 1):
            devs.append(parent_coeffs[k] / scale - child_coeffs[k])
            scale *= lam
        deviations.append(devs)
    return DegenerationReport(lam_values, deviations)


def hypergeometric_coefficient(n: int, point: ParameterPoint) -> mpq:
    """Closed product the pair sum collapses to at theta_t = 1/2,
    sigma = theta_0 + 1/2 (one-column diagrams only)."""
    t0, t1, ti = point.get("theta_0"), point.get("theta_1"), point.get("theta_inf")
    num = mpq(1)
    den = mpq(1)
    for i in range(1, n + 1):
        num *= (t1 + t0 + i - mpq(1, 2)) ** 2 - ti ** 2
        den *= i * (2 * t0 + i)
    if den == 0:
        raise NonGenericPoint("vanishing factor 2*theta_0 + i in the closed product")
    return num / den
