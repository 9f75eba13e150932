"""Combinatorial expansion of the rank-one irregular block: the U/V/S cell
factors, the q statistic and its tableau, exact reconstruction of the
skew-pair coefficients c by random-evaluation linear algebra, and checks of
the observed closed families.

The working identity expresses the t^-k block coefficient as

    a_k = sum over (lam, mu) with |lam|+|mu| = k
          sum over nu in lam, eta in mu with |nu| = |eta|
          (-1)^|nu| c[lam,mu,nu,eta] U_{lam/nu} V_{mu/eta} S_{lam,mu},

with skew factors evaluated cellwise over the skew cells (equivalently as
ratios of the full products; contents only depend on the cell).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .linalg import InconsistentSystem, nullspace_and_particular
from .partitions import (Partition, conjugate, enumerate_partitions,
                         partition_data, skew_cells, skew_contains)
from .scalars import DomainError, NonGenericPoint, ParameterPoint, random_point
from .whittaker import icb_series

Key = Tuple[Partition, Partition, Partition, Partition]


@dataclass(frozen=True)
class SkewTerm:
    lam: Partition
    mu: Partition
    nu: Partition
    eta: Partition

    def __post_init__(self):
        if not skew_contains(self.lam, self.nu) or not skew_contains(self.mu, self.eta):
            raise ValueError("inner shapes must be contained in outer shapes")
        if sum(self.nu) != sum(self.eta):
            raise ValueError("inner shapes must have equal size")


def u_factor(lam: Partition, nu: Partition, point: ParameterPoint) -> mpq:
    """U_{lam/nu}: product of 2(beta - theta) + i - j over the skew cells."""
    b, th = point.get("beta"), point.get("theta")
    out = mpq(1)
    for (i, j) in skew_cells(lam, nu):
        out *= 2 * (b - th) + i - j
    return out


def v_factor(mu: Partition, eta: Partition, point: ParameterPoint) -> mpq:
    """V_{mu/eta}: product of -2 beta + i - j over the skew cells."""
    b = point.get("beta")
    out = mpq(1)
    for (i, j) in skew_cells(mu, eta):
        out *= -2 * b + i - j
    return out


def s_factor(lam: Partition, mu: Partition, point: ParameterPoint) -> mpq:
    """S_{lam,mu} with the alternating sign on the second diagram."""
    b, th = point.get("beta"), point.get("theta")
    t0, tt = point.get("theta_0"), point.get("theta_t")
    out = mpq(-1) ** (sum(mu) % 2)
    pd = partition_data(lam)
    for (i, j) in pd.cells:
        out *= ((b + i - j) ** 2 - tt ** 2) / pd.hooks[(i, j)] ** 2
    pd = partition_data(mu)
    for (i, j) in pd.cells:
        out *= ((th - b + i - j) ** 2 - t0 ** 2) / pd.hooks[(i, j)] ** 2
    return out


@dataclass
class SkewWeights:
    u: mpq
    v: mpq
    s: mpq


def skew_weight(term: SkewTerm, point: ParameterPoint) -> SkewWeights:
    return SkewWeights(u_factor(term.lam, term.nu, point),
                       v_factor(term.mu, term.eta, point),
                       s_factor(term.lam, term.mu, point))


def pair_factor(lam: Partition, mu: Partition, point: ParameterPoint) -> mpq:
    """N_{lam,mu} = U_{lam} V_{mu} S_{lam,mu}."""
    return (u_factor(lam, (), point) * v_factor(mu, (), point)
            * s_factor(lam, mu, point))


def q_stat(lam: Partition) -> int:
    """Tableau-sum statistic: lam_1 (lam_1 - 1) plus, for each cell below the
    first row, lam_1 - 1 + (number of cells in the columns to its left)."""
    if not lam:
        return 0
    conj = conjugate(lam)
    head = lam[0] * (lam[0] - 1)
    tail = 0
    for i, p in enumerate(lam, 1):
        if i == 1:
            continue
        for j in range(1, p + 1):
            tail += lam[0] - 1 + sum(conj[: j - 1])
    return head + tail


def q_tableau(lam: Partition) -> Dict[Tuple[int, int], int]:
    """The filling whose entry sum reproduces q_stat."""
    conj = conjugate(lam)
    out = {}
    for i, p in enumerate(lam, 1):
        for j in range(1, p + 1):
            out[(i, j)] = 2 * (j - 1) if i == 1 else lam[0] - 1 + sum(conj[: j - 1])
    return out


def icb_coefficient_oracle(max_order: int) -> Callable[[ParameterPoint, int], mpq]:
    """Exact a_k evaluator from the irregular-block engine at the standard
    rank-one parameterization."""
    def oracle(point: ParameterPoint, k: int) -> mpq:
        t0, tt = point.get("theta_0"), point.get("theta_t")
        th, b = point.get("theta"), point.get("beta")
        series = icb_series(1, t0 ** 2, tt ** 2, (th, mpq(1, 4)), b,
                            scale=1, order=max(k, 1))
        return mpq(series.coeffs[k])
    return oracle


def unknown_keys(k: int) -> List[Key]:
    """All (lam, mu, nu, eta) with |lam|+|mu| = k, nu in lam, eta in mu,
    |nu| = |eta|, in canonical order."""
    keys: List[Key] = []
    for a in range(k + 1):
        for lam in enumerate_partitions(a):
            for mu in enumerate_partitions(k - a):
                inner_max = min(a, k - a)
                for m in range(inner_max + 1):
                    nus = [nu for nu in enumerate_partitions(m) if skew_contains(lam, nu)]
                    etas = [eta for eta in enumerate_partitions(m) if skew_contains(mu, eta)]
                    for nu, eta in product(nus, etas):
                        keys.append((lam, mu, nu, eta))
    return keys


@dataclass
class SolveCReport:
    order: int
    keys: List[Key]
    particular: Dict[Key, mpq]
    null_basis: List[Dict[Key, mpq]]
    determined: Dict[Key, mpq]
    integer_solutions: List[Dict[Key, mpq]]
    rank: int
    nullity: int
    points_used: int
    witness: Optional[ParameterPoint] = None

    @property
    def consistent(self) -> bool:
        return self.witness is None


def solve_c(k: int, oracle: Optional[Callable] = None, trials: Optional[int] = None,
            seed: int = 0, search_bound: int = 40) -> SolveCReport:
    """Reconstruct the order-k coefficient table by exact linear algebra.

    Evaluates the working identity at deterministic pseudo-random rational
    points; the linear system in the unknown c's is solved exactly, the
    affine solution set is reported, and when the system is under-determined
    the nullspace lattice is scanned for small componentwise non-negative
    integer points.  An inconsistent system is reported with the witness
    point (the conjecture would be falsified there).
    """
    if oracle is None:
        oracle = icb_coefficient_oracle(k)
    keys = unknown_keys(k)
    if trials is None:
        trials = len(keys) + 20
    rng = random.Random(seed)
    rows: List[Dict[Key, mpq]] = []
    rhs: List[mpq] = []
    used = 0
    attempts = 0
    last_point = None
    while used < trials:
        attempts += 1
        if attempts > 20 * trials:
            raise NonGenericPoint("could not sample enough generic points")
        point = random_point(rng, ("beta", "theta", "theta_0", "theta_t"), bound=24)
        try:
            target = oracle(point, k)
            row: Dict[Key, mpq] = {}
            for key in keys:
                lam, mu, nu, eta = key
                sign = mpq(-1) ** (sum(nu) % 2)
                coeff = (sign * u_factor(lam, nu, point) * v_factor(mu, eta, point)
                         * s_factor(lam, mu, point))
                if coeff != 0:
                    row[key] = coeff
        except (NonGenericPoint, DomainError, ZeroDivisionError):
            continue
        rows.append(row)
        rhs.append(target)
        used += 1
        last_point = point
    try:
        particular, basis, free = nullspace_and_particular(rows, rhs, keys)
    except InconsistentSystem:
        return SolveCReport(k, keys, {}, [], {}, [], 0, 0, used, witness=last_point)
    null_support = set()
    for vec in basis:
        null_support.update(vec)
    determined = {key: particular[key] for key in keys if key not in null_support}
    integer_solutions = _integer_points(keys, particular, basis, search_bound)
    return SolveCReport(k, keys, particular, basis, determined, integer_solutions,
                        rank=len(keys) - len(basis), nullity=len(basis),
                        points_used=used)


def _integer_points(keys: Sequence[Key], particular: Dict[Key, mpq],
                    basis: List[Dict[Key, mpq]], bound: int) -> List[Dict[Key, mpq]]:
    """Scan particular + integer combinations of the nullspace basis for
    componentwise non-negative integer solutions with small coordinates."""
    if not basis:
        sol = particular
        if all(v.denominator == 1 and v >= 0 for v in sol.values()):
            return [dict(sol)]
        return []
    if len(basis) > 3:
        return []  # search space too large; report the affine set only
    out = []
    rng = range(-bound, bound + 1)
    for combo in product(rng, repeat=len(basis)):
        sol = dict(particular)
        for t, vec in zip(combo, basis):
            if t == 0:
                continue
            for key, v in vec.items():
                sol[key] = sol.get(key, mpq(0)) + t * v
        if all(v.denominator == 1 and 0 <= v <= 4 * bound for v in sol.values()):
            out.append(sol)
    return out


OBSERVED_FAMILIES = ("unit", "ones", "two_two", "two_elevens")


@dataclass
class ObservedReport:
    matches: List[Tuple[str, Key]] = field(default_factory=list)
    mismatches: List[Tuple[str, Key, mpq, mpq]] = field(default_factory=list)
    undetermined: List[Tuple[str, Key]] = field(default_factory=list)
    symmetry_failures: List[Tuple[Key, Key]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.symmetry_failures


def verify_observed(reports: Sequence[SolveCReport]) -> ObservedReport:
    """Check the observed closed families and both symmetries on every
    determined entry of the solved tables."""
    out = ObservedReport()
    tables = {}
    for rep in reports:
        tables.update(rep.determined)

    def expected(key: Key) -> Optional[Tuple[str, mpq]]:
        lam, mu, nu, eta = key
        if nu == () and eta == ():
            return "unit", mpq(1)
        if nu == (1,) and eta == (1,):
            return "ones", mpq(2 * sum(lam) * sum(mu))
        if nu == (2,) and eta == (2,):
            return "two_two", mpq(q_stat(lam) * q_stat(mu))
        if nu == (2,) and eta == (1, 1):
            return "two_elevens", mpq(3 * q_stat(lam) * q_stat(conjugate(mu)))
        return None

    for rep in reports:
        for key in rep.keys:
            exp = expected(key)
            if exp is None:
                continue
            name, value = exp
            if key in rep.determined:
                if rep.determined[key] == value:
                    out.matches.append((name, key))
                else:
                    out.mismatches.append((name, key, rep.determined[key], value))
            else:
                out.undetermined.append((name, key))
    for key, value in tables.items():
        lam, mu, nu, eta = key
        swapped = (mu, lam, eta, nu)
        if swapped in tables and tables[swapped] != value:
            out.symmetry_failures.append((key, swapped))
        transposed = (conjugate(lam), conjugate(mu), conjugate(nu), conjugate(eta))
        if transposed in tables and tables[transposed] != value:
            out.symmetry_failures.append((key, transposed))
    return out
