"""Whittaker modules, irregular vertex operators of rank 1 and 2, their
outgoing pairings, and the irregular block series at the essential
singularity.

The descendants w_m of the irregular intertwiner satisfy, for every mode
n >= r acting on the source cyclic vector,

    (L_n - sum_{r<=j<=2r} delta_{n,j} Lam_j) w_m
        = - sum_{j=1..r} j beta_j w_{m+j-n} + (alpha + (n+1) Delta + m - n) w_{m-n},

with w_0 the outgoing cyclic vector.  These relations over-determine the
w_m; we solve them as one exact linear system, stage by stage with a small
look-ahead buffer (low-order components of w_m are pinned only by relations
at later stages), and then assert consistency.  The closed forms for alpha
and the subleading exponents follow from the lowest stages and are verified
wholesale by the over-determination.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .linalg import InconsistentSystem, SparseEliminator
from .partitions import Partition, partitions_upto
from .scalars import DomainError, QuadExt, as_qq
from .virasoro import CyclicModule, Vector


@dataclass(frozen=True)
class IrregularParams:
    rank: int
    alpha: mpq
    betas: Tuple[mpq, ...]        # beta_1 .. beta_r
    lam_in: Tuple[mpq, ...]       # Lam_r .. Lam_2r
    lam_out: Tuple[mpq, ...]


def irregular_vertex_params(r: int, delta, lam: Sequence, beta_r) -> IrregularParams:
    """Exponents and outgoing eigenvalues of the rank-r irregular intertwiner.

    The outgoing tuple shifts only the lowest mode: Lam'_r = Lam_r - r beta_r.
    For r = 1,

        alpha = -beta_1 (Lam_1 - beta_1) / (2 Lam_2) - 2 Delta,

    and for r = 2 the subleading exponent and alpha are fixed by the lowest
    stages of the relation system:

        beta_1 = beta_2 Lam_3 / Lam_4,
        alpha  = -3 Delta - beta_2 Lam_2 / Lam_4 + 3 beta_2^2 / Lam_4
                 + beta_2 Lam_3^2 / (4 Lam_4^2).
    """
    if r not in (1, 2):
        raise DomainError("only ranks 1 and 2 are implemented")
    delta = as_qq(delta)
    lam = tuple(as_qq(x) for x in lam)
    beta_r = as_qq(beta_r)
    if len(lam) != r + 1:
        raise DomainError(f"rank {r} needs eigenvalues Lam_{r}..Lam_{2*r}")
    if lam[-1] == 0:
        raise DomainError("Lam_{2r} must be nonzero")
    if beta_r == 0:
        raise DomainError("beta_r must be nonzero")
    if r == 1:
        l1, l2 = lam
        alpha = -beta_r * (l1 - beta_r) / (2 * l2) - 2 * delta
        betas = (beta_r,)
        lam_out = (l1 - beta_r, l2)
    else:
        l2, l3, l4 = lam
        beta1 = beta_r * l3 / l4
        alpha = (-3 * delta - beta_r * l2 / l4 + 3 * beta_r ** 2 / l4
                 + beta_r * l3 ** 2 / (4 * l4 ** 2))
        betas = (beta1, beta_r)
        lam_out = (l2 - 2 * beta_r, l3, l4)
    return IrregularParams(r, alpha, betas, lam, lam_out)


@dataclass
class WhittakerVector:
    rank: int
    lam: Tuple[mpq, ...]
    c: mpq
    coeffs: Dict[Partition, mpq]

    def module(self) -> CyclicModule:
        return _whittaker_module(self.rank, self.lam, self.c)


_module_cache: Dict = {}


def _whittaker_module(r: int, lam: Tuple[mpq, ...], c) -> CyclicModule:
    key = (r, lam, as_qq(c))
    if key not in _module_cache:
        eigen = {r + i: lam[i] for i in range(r + 1)}
        _module_cache[key] = CyclicModule(r, eigen, key[2])
    return _module_cache[key]


def whittaker_l_action(n: int, v: WhittakerVector) -> WhittakerVector:
    """L_n . v in the PBW basis of the rank-r module."""
    return WhittakerVector(v.rank, v.lam, v.c, v.module().apply(n, v.coeffs))


_solve_cache: Dict = {}


def irregular_descendants(r: int, delta, lam: Sequence, beta_r, order: int,
                          c=1) -> List[Vector]:
    """w_0 .. w_order of the rank-r irregular intertwiner (exact).

    Raises InconsistentSystem if the relation family is contradictory (it
    never is for valid parameters; the check guards the closed forms) and
    DomainError if the system fails to pin every requested component.
    """
    params = irregular_vertex_params(r, delta, lam, beta_r)
    delta, beta_r, c = as_qq(delta), as_qq(beta_r), as_qq(c)
    key = (r, delta, params.lam_in, beta_r, c)
    cached = _solve_cache.get(key)
    if cached is not None and cached[0] >= order:
        return cached[1][: order + 1]

    for buffer in (2, 3, 5):
        ws = _solve(params, delta, c, order, buffer)
        if ws is not None:
            if cached is None or order > cached[0]:
                _solve_cache[key] = (order, ws)
            return ws
    raise DomainError("descendant system left components unresolved; "
                      "parameters may be degenerate")


def _solve(params: IrregularParams, delta: mpq, c: mpq, order: int,
           buffer: int) -> Optional[List[Vector]]:
    r = params.rank
    alpha = params.alpha
    betas = {j + 1: b for j, b in enumerate(params.betas)}
    lam_in = {r + i: v for i, v in enumerate(params.lam_in)}
    mod = _whittaker_module(r, params.lam_out, c)
    total = order + buffer
    basis = {m: partitions_upto(m) for m in range(total + 1)}
    rank_key = {}
    for m in range(1, total + 1):
        for w in basis[m]:
            rank_key[(m, w)] = (m, -sum(w), w)
    elim = SparseEliminator(lambda uid: rank_key[uid])

    def symbolic(m: int) -> Dict[Partition, Dict]:
        # word -> linear expression {unknown-or-None: coeff}; None is constant
        if m < 0:
            return {}
        if m == 0:
            return {(): {None: mpq(1)}}
        return {w: {(m, w): mpq(1)} for w in basis[m]}

    for m in range(1, total + 1):
        wm = symbolic(m)
        for n in range(r, m + 2 * r + 2):
            target: Dict[Partition, Dict] = {}

            def acc(word: Partition, uid, coeff) -> None:
                if coeff == 0:
                    return
                slot = target.setdefault(word, {})
                slot[uid] = slot.get(uid, mpq(0)) + coeff

            for word, expr in wm.items():
                acted = mod.apply_word(n, word)
                for w2, c2 in acted.items():
                    for uid, uc in expr.items():
                        acc(w2, uid, uc * c2)
            if r <= n <= 2 * r:
                ev = lam_in[n]
                for word, expr in wm.items():
                    for uid, uc in expr.items():
                        acc(word, uid, -uc * ev)
            for j in range(1, r + 1):
                for word, expr in symbolic(m + j - n).items():
                    for uid, uc in expr.items():
                        acc(word, uid, j * betas[j] * uc)
            co = alpha + (n + 1) * delta + m - n
            for word, expr in symbolic(m - n).items():
                for uid, uc in expr.items():
                    acc(word, uid, -co * uc)
            for word, expr in target.items():
                const = expr.pop(None, mpq(0))
                if expr:
                    elim.add_row(expr, -const)
                elif const != 0:
                    raise InconsistentSystem("impossible scalar relation")

    vals = elim.values()
    out: List[Vector] = [{(): mpq(1)}]
    for m in range(1, order + 1):
        vec: Vector = {}
        for w in basis[m]:
            uid = (m, w)
            if uid not in vals:
                return None
            if vals[uid] != 0:
                vec[w] = vals[uid]
        out.append(vec)
    return out


def relation_residual(r: int, delta, lam: Sequence, beta_r, ws: List[Vector],
                      n: int, m: int, c=1) -> Vector:
    """Left minus right of the mode-n relation on w_m; zero iff satisfied."""
    params = irregular_vertex_params(r, delta, lam, beta_r)
    delta, c = as_qq(delta), as_qq(c)
    mod = _whittaker_module(r, params.lam_out, c)
    lam_in = {r + i: v for i, v in enumerate(params.lam_in)}

    def get(k: int) -> Vector:
        return ws[k] if 0 <= k < len(ws) else {}

    lhs = mod.apply(n, get(m))
    if r <= n <= 2 * r:
        for w, v in get(m).items():
            lhs[w] = lhs.get(w, mpq(0)) - lam_in[n] * v
    rhs: Vector = {}
    for j, bj in enumerate(params.betas, 1):
        for w, v in get(m + j - n).items():
            rhs[w] = rhs.get(w, mpq(0)) - j * bj * v
    co = params.alpha + (n + 1) * delta + m - n
    for w, v in get(m - n).items():
        rhs[w] = rhs.get(w, mpq(0)) + co * v
    out = dict(lhs)
    for w, v in rhs.items():
        out[w] = out.get(w, mpq(0)) - v
    return {w: v for w, v in out.items() if v != 0}


class PairingKind:
    DUAL_VERMA = "dual_verma"
    VACUUM = "vacuum"


def pair_out(kind: str, v: WhittakerVector, delta_out=None) -> mpq:
    """Pair a rank-1 vector against the dual highest-weight functional of
    weight delta_out, or a rank-2 vector against the irreducible vacuum.

    Rank 1: a word survives only if it is a pure power of the zero mode
    (any lower mode annihilates the functional from the left), each factor
    contributing delta_out.  Rank 2: only the cyclic component survives.
    """
    if kind == PairingKind.DUAL_VERMA:
        if v.rank != 1:
            raise DomainError("dual-Verma pairing requires rank 1")
        if delta_out is None:
            raise DomainError("dual-Verma pairing needs the outgoing weight")
        d = as_qq(delta_out)
        total = mpq(0)
        for w, co in v.coeffs.items():
            if all(p == 1 for p in w):
                total += co * d ** len(w)
        return total
    if kind == PairingKind.VACUUM:
        if v.rank != 2:
            raise DomainError("vacuum pairing requires rank 2")
        return v.coeffs.get((), mpq(0))
    raise DomainError(f"unknown pairing kind {kind!r}")


@dataclass
class IcbSeries:
    """Irregular block series at the essential singularity, normalized so the
    leading coefficient is 1:

        t^texp * exp(sum_j rates[j] t^j) * (a_0 + a_1 / t + a_2 / t^2 + ...)

    Constant prefactors independent of t (e.g. scale^alpha from the argument
    rescaling) are dropped; channel constants absorb them where they matter.
    """
    rank: int
    texp: mpq
    rates: Dict[int, object]
    coeffs: List[object]


def icb_series(r: int, delta_out, delta_insert, lam: Sequence, beta,
               scale=1, order: int = 6, c=1) -> IcbSeries:
    """Series of the paired irregular block with operator argument scale/t.

    scale = 1 for the rank-1 block; the rank-2 block of interest uses
    scale = 1/sqrt(2) (a QuadExt), which multiplies a_k by scale^k and
    doubles the quadratic exponential rate.
    """
    params = irregular_vertex_params(r, delta_insert, lam, beta)
    ws = irregular_descendants(r, delta_insert, lam, beta, order, c)
    rates: Dict[int, object] = {}
    for j, bj in enumerate(params.betas, 1):
        if bj != 0:
            rates[j] = bj * (scale ** (-j) if isinstance(scale, QuadExt)
                             else as_qq(scale) ** (-j))
    plain_scale = isinstance(scale, int) and scale == 1
    coeffs: List[object] = []
    for k in range(order + 1):
        if r == 1:
            ak = pair_out(PairingKind.DUAL_VERMA,
                          WhittakerVector(r, params.lam_out, as_qq(c), ws[k]),
                          delta_out)
        else:
            ak = pair_out(PairingKind.VACUUM,
                          WhittakerVector(r, params.lam_out, as_qq(c), ws[k]))
        coeffs.append(ak if plain_scale else ak * scale ** k)
    return IcbSeries(r, -params.alpha, rates, coeffs)
