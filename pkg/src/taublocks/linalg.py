"""Exact dense/sparse linear algebra over the rationals: solving, consistent
over-determined systems, and nullspaces, with deterministic pivoting."""

from __future__ import annotations

from typing import Dict, List, Sequence

from gmpy2 import mpq


class SingularMatrix(ValueError):
    pass


class InconsistentSystem(ValueError):
    pass


def solve_dense(matrix: Sequence[Sequence[mpq]], rhs: Sequence[mpq]) -> List[mpq]:
    """Solve a square nonsingular system exactly (partial pivoting on the
    first nonzero entry; deterministic)."""
    n = len(matrix)
    a = [[mpq(x) for x in row] + [mpq(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix(f"matrix singular at column {col}")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def det_dense(matrix: Sequence[Sequence[mpq]]) -> mpq:
    n = len(matrix)
    a = [[mpq(x) for x in row] for row in matrix]
    det = mpq(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return mpq(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


class SparseEliminator:
    """Incremental exact Gaussian elimination on rows over arbitrary hashable
    unknown ids.

    Rows mean: sum(coeff * unknown) = rhs.  Unknowns are ordered by the key
    function (deterministic pivoting).  Inconsistent rows raise immediately;
    `values` resolves every unknown reachable by back-substitution and
    reports the rest as None.
    """

    def __init__(self, order_key):
        self.order_key = order_key
        self.pivots: Dict = {}  # uid -> (row dict uid->mpq, rhs)

    def add_row(self, row: Dict, rhs) -> None:
        d = {k: mpq(v) for k, v in row.items() if v != 0}
        b = mpq(rhs)
        while d:
            lead = min(d, key=self.order_key)
            if lead in self.pivots:
                pd, pb = self.pivots[lead]
                f = d.pop(lead)
                for k, v in pd.items():
                    nv = d.get(k, mpq(0)) - f * v
                    if nv == 0:
                        d.pop(k, None)
                    else:
                        d[k] = nv
                b -= f * pb
            else:
                f = d.pop(lead)
                inv = 1 / f
                self.pivots[lead] = ({k: v * inv for k, v in d.items()}, b * inv)
                return
        if b != 0:
            raise InconsistentSystem("contradictory equation (0 = nonzero)")

    def values(self) -> Dict:
        """Back-substitute with free unknowns carried symbolically; an
        unknown is resolved iff its affine expression has no free part
        (coefficients of free unknowns may cancel along the chains)."""
        # affine expressions: uid -> (const, {free_uid: coeff})
        exprs: Dict = {}
        pivot_ids = set(self.pivots)
        order = sorted(pivot_ids, key=self.order_key, reverse=True)

        def expr_of(uid):
            if uid in exprs:
                return exprs[uid]
            out = (mpq(0), {uid: mpq(1)})  # free unknown
            exprs[uid] = out
            return out

        for uid in order:
            pd, pb = self.pivots[uid]
            const = pb
            free: Dict = {}
            for k, v in pd.items():
                kc, kf = expr_of(k)
                const -= v * kc
                for fu, fc in kf.items():
                    nv = free.get(fu, mpq(0)) - v * fc
                    if nv == 0:
                        free.pop(fu, None)
                    else:
                        free[fu] = nv
            exprs[uid] = (const, free)
        return {uid: const for uid, (const, free) in exprs.items()
                if uid in pivot_ids and not free}


def nullspace_and_particular(rows: List[Dict], rhs: List[mpq], unknowns: List):
    """Solve a possibly under/over-determined exact system.

    Returns (particular, basis, free) where `particular` maps unknown -> mpq,
    `basis` is a list of nullspace vectors (dicts), and `free` lists the free
    unknowns (one per basis vector, in order).  Raises InconsistentSystem if
    no solution exists.
    """
    order = {u: i for i, u in enumerate(unknowns)}
    elim = SparseEliminator(lambda u: order[u])
    for row, b in zip(rows, rhs):
        elim.add_row(row, b)
    pivot_ids = set(elim.pivots)
    free = [u for u in unknowns if u not in pivot_ids]
    # particular: free unknowns = 0
    particular = {u: mpq(0) for u in free}
    for uid in sorted(pivot_ids, key=lambda u: order[u], reverse=True):
        pd, pb = elim.pivots[uid]
        particular[uid] = pb - sum((v * particular[k] for k, v in pd.items()), mpq(0))
    basis = []
    for fu in free:
        vec = {u: mpq(0) for u in unknowns}
        vec[fu] = mpq(1)
        for uid in sorted(pivot_ids, key=lambda u: order[u], reverse=True):
            pd, pb = elim.pivots[uid]
            vec[uid] = -sum((v * vec[k] for k, v in pd.items()), mpq(0))
        basis.append({u: v for u, v in vec.items() if v != 0})
    return particular, basis, free
