"""Verma-module engine: L_n actions, Gram/Kac matrices, the regular
vertex-operator recursion, four-point blocks, and the collision-limit check.

Basis words L_{-lam} |delta> = L_{-lam_1} ... L_{-lam_k} |delta> are encoded
as partitions (part p <-> operator L_{-p}), reusing the cyclic-module engine
with r = 0 and L_0-eigenvalue delta on the highest-weight vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from gmpy2 import mpq

from .linalg import SingularMatrix, solve_dense
from .partitions import Partition, enumerate_partitions
from .scalars import as_qq
from .virasoro import CyclicModule, Vector


class DegenerateWeight(ValueError):
    """Gram matrix singular: the Verma module is reducible at this level."""

    def __init__(self, level: int):
        super().__init__(f"Gram matrix singular at level {level}")
        self.level = level


_module_cache: Dict[Tuple[mpq, mpq], CyclicModule] = {}


def verma_module(delta, c) -> CyclicModule:
    key = (as_qq(delta), as_qq(c))
    if key not in _module_cache:
        _module_cache[key] = CyclicModule(0, {0: key[0]}, key[1])
    return _module_cache[key]


@dataclass
class VermaVector:
    delta: mpq
    c: mpq
    coeffs: Dict[Partition, mpq]

    def level(self) -> int:
        """Common |lam| of the support; raises if inhomogeneous."""
        sizes = {sum(w) for w in self.coeffs}
        if len(sizes) > 1:
            raise ValueError("vector is not homogeneous")
        return sizes.pop() if sizes else 0

    def module(self) -> CyclicModule:
        return verma_module(self.delta, self.c)


def verma_l_action(n: int, v: VermaVector) -> VermaVector:
    """L_n . v expanded in the PBW basis."""
    return VermaVector(v.delta, v.c, v.module().apply(n, v.coeffs))


def generic_for_level(delta, c, level: int) -> bool:
    """True iff every Gram determinant up to `level` is nonzero (the module
    is irreducible there and the vertex recursion is solvable)."""
    from .linalg import det_dense
    delta, c = as_qq(delta), as_qq(c)
    for m in range(1, level + 1):
        if det_dense(gram_matrix(delta, c, m)) == 0:
            return False
    return True


def gram_matrix(delta, c, m: int) -> List[List[mpq]]:
    """<delta| L_lam L_{-mu} |delta> over partitions of m in canonical order.

    L_lam = L_{lam_k} ... L_{lam_1}, so L_{lam_1} is applied first.
    """
    delta, c = as_qq(delta), as_qq(c)
    mod = verma_module(delta, c)
    basis = enumerate_partitions(m)
    rows = []
    for mu in basis:
        vec: Vector = {mu: mpq(1)}
        rows.append(vec)
    out = []
    for lam in basis:
        row = []
        for vec in rows:
            cur = vec
            for part in lam:
                cur = mod.apply(part, cur)
            row.append(cur.get((), mpq(0)))
        out.append(row)
    return out


def vertex_descendant(d3, d2, d1, c, m: int) -> VermaVector:
    """Level-m component v_m of the chiral intertwiner applied to |d1>,
    normalized by v_0 = |d3>.

    The coefficients solve the level-m Gram system whose right side comes
    from iterating the mode relation L_n v_j = (d3 + n d2 - d1 + j - n) v_{j-n}
    down to v_0.
    """
    d3, d2, d1, c = map(as_qq, (d3, d2, d1, c))
    if m == 0:
        return VermaVector(d3, c, {(): mpq(1)})
    basis = enumerate_partitions(m)
    rhs = []
    for lam in basis:
        val = mpq(1)
        level = m
        for part in lam:
            val *= d3 + part * d2 - d1 + level - part
            level -= part
        rhs.append(val)
    gram = gram_matrix(d3, c, m)
    try:
        coeffs = solve_dense(gram, rhs)
    except SingularMatrix:
        raise DegenerateWeight(m)
    return VermaVector(d3, c, {lam: v for lam, v in zip(basis, coeffs) if v != 0})


def dual_matrix_element(d4, d3, d, lam: Partition) -> mpq:
    """<d4| Phi(1) L_{-lam} |d> normalized by <d4| Phi(1) |d>.

    Peeling L_{-lam_i} leftward through Phi with the mode commutation
    relation multiplies the matrix element by (d + l_i + lam_i d3 - d4) where
    l_i is the level remaining to the right, giving a closed product.
    """
    d4, d3, d = map(as_qq, (d4, d3, d))
    out = mpq(1)
    remaining = sum(lam)
    for part in lam:
        remaining -= part
        out *= d + remaining + part * d3 - d4
    return out


def four_point_block(d1, d2, d, d3, d4, c, order: int) -> List[mpq]:
    """Series coefficients [B_0..B_order] of the four-point block in the
    cross-ratio, with B_0 = 1."""
    out = []
    for k in range(order + 1):
        vk = vertex_descendant(d, d2, d1, c, k)
        out.append(sum((co * dual_matrix_element(d4, d3, d, lam)
                        for lam, co in vk.coeffs.items()), mpq(0)))
    return out


@dataclass
class CollisionReport:
    lam_values: List[mpq]
    successive_diffs: List[Dict[int, mpq]]
    residual_l1: Dict[int, mpq]
    residual_l2: Dict[int, mpq]
    skipped: List[mpq]


def collision_check(d3, c, c1, c2, c10, c21, c20,
                    lam_values: Sequence, m_max: int) -> CollisionReport:
    """Numeric check of the rank-one collision limit.

    For each scale L, the insert and source weights are set by

        d2 - d1 = c1 L + c10,       2 d2 - d1 = c2 L^2 + c21 L + c20,

    the descendants v_m are computed exactly, and p_m = v_m / L^m is compared
    across scales (expected O(1/L) drift).  On the Richardson-extrapolated
    limit, the residuals of L_1 p_m = c1 p_{m-1} and L_2 p_m = c2 p_{m-2}
    are reported as max |coefficient|.
    """
    d3, c = as_qq(d3), as_qq(c)
    c1, c2, c10, c21, c20 = map(as_qq, (c1, c2, c10, c21, c20))
    lam_values = [as_qq(x) for x in lam_values]
    per_scale: List[List[Vector]] = []
    used: List[mpq] = []
    skipped: List[mpq] = []
    for lam in lam_values:
        d2 = c2 * lam ** 2 + (c21 - c1) * lam + (c20 - c10)
        d1 = d2 - c1 * lam - c10
        try:
            vs = [vertex_descendant(d3, d2, d1, c, m).coeffs for m in range(m_max + 1)]
        except DegenerateWeight:
            skipped.append(lam)
            continue
        scale = mpq(1)
        ps = []
        for m, v in enumerate(vs):
            ps.append({w: x / scale for w, x in v.items()})
            scale *= lam
        per_scale.append(ps)
        used.append(lam)
    diffs = []
    for a, b in zip(per_scale, per_scale[1:]):
        diffs.append({m: _max_abs_diff(a[m], b[m]) for m in range(m_max + 1)})
    # Richardson extrapolation from the two largest scales
    if len(per_scale) >= 2:
        la, lb = used[-2], used[-1]
        extrap = [{w: (lb * per_scale[-1][m].get(w, mpq(0))
                       - la * per_scale[-2][m].get(w, mpq(0))) / (lb - la)
                   for w in set(per_scale[-1][m]) | set(per_scale[-2][m])}
                  for m in range(m_max + 1)]
    else:
        extrap = per_scale[-1] if per_scale else []
    mod = verma_module(d3, c)
    res1, res2 = {}, {}
    for m in range(m_max + 1):
        lhs1 = mod.apply(1, extrap[m])
        tgt1 = extrap[m - 1] if m >= 1 else {}
        res1[m] = _max_abs_diff(lhs1, {w: c1 * v for w, v in tgt1.items()})
        lhs2 = mod.apply(2, extrap[m])
        tgt2 = extrap[m - 2] if m >= 2 else {}
        res2[m] = _max_abs_diff(lhs2, {w: c2 * v for w, v in tgt2.items()})
    return CollisionReport(used, diffs, res1, res2, skipped)


def _max_abs_diff(a: Vector, b: Vector) -> mpq:
    out = mpq(0)
    for w in set(a) | set(b):
        d = abs(a.get(w, mpq(0)) - b.get(w, mpq(0)))
        if d > out:
            out = d
    return out
