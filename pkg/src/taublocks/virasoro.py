"""Shared engine for Virasoro modules with a cyclic vector on which high
modes act by scalars.

A `CyclicModule(r, eigen, c)` models the module generated by a vector v with

    L_n v = eigen[n] * v   for r <= n <= 2r,
    L_n v = 0              for n > 2r,

spanned freely by PBW words L_{i_1} ... L_{i_k} v with i_1 <= ... <= i_k < r.
Words are encoded as partitions: part p stands for the operator L_{r-p}, so a
weakly decreasing part tuple is exactly a weakly increasing index word.

r = 0 with eigen = {0: delta} is the Verma module of highest weight delta;
r = 1, 2 are the modules underlying the irregular constructions.  All
coefficient arithmetic is exact; vectors are dicts partition -> scalar.
"""

from __future__ import annotations

from typing import Dict, Tuple

from gmpy2 import mpq

Word = Tuple[int, ...]
Vector = Dict[Word, mpq]


class CyclicModule:
    def __init__(self, r: int, eigen: Dict[int, mpq], c: mpq):
        self.r = r
        self.eigen = {n: mpq(v) for n, v in eigen.items()}
        self.c = mpq(c)
        self._apply_memo: Dict = {}
        self._mult_memo: Dict = {}

    def vacuum(self) -> Vector:
        return {(): mpq(1)}

    def apply(self, n: int, vec: Vector) -> Vector:
        """L_n . vec in PBW form."""
        out: Vector = {}
        for w, co in vec.items():
            if co == 0:
                continue
            for w2, c2 in self.apply_word(n, w).items():
                _acc(out, w2, co * c2)
        return _strip(out)

    def apply_word(self, n: int, w: Word) -> Vector:
        if n < self.r:
            return self.mult_word(n, w)
        key = (n, w)
        memo = self._apply_memo
        if key in memo:
            return memo[key]
        if not w:
            if n <= 2 * self.r:
                ev = self.eigen[n]
                res = {(): ev} if ev != 0 else {}
            else:
                res = {}
        else:
            # commute L_n past the leftmost (smallest-index) creation operator
            i1 = self.r - w[0]
            rest = w[1:]
            res: Vector = {}
            bracket = mpq(n - i1)
            if bracket != 0:
                for w2, c2 in self._dispatch(n + i1, rest).items():
                    _acc(res, w2, bracket * c2)
            if n + i1 == 0:
                central = self.c * mpq(n ** 3 - n, 12)
                if central != 0:
                    _acc(res, rest, central)
            for w2, c2 in self.apply_word(n, rest).items():
                for w3, c3 in self.mult_word(i1, w2).items():
                    _acc(res, w3, c2 * c3)
            res = _strip(res)
        memo[key] = res
        return res

    def mult_word(self, i: int, w: Word) -> Vector:
        """L_i . w for a creation index i < r, reordered into the PBW basis."""
        p = self.r - i
        if not w or p >= w[0]:
            return {(p,) + w: mpq(1)}
        key = (i, w)
        memo = self._mult_memo
        if key in memo:
            return memo[key]
        j = self.r - w[0]
        rest = w[1:]
        res: Vector = {}
        for w2, c2 in self.mult_word(i, rest).items():
            for w3, c3 in self.mult_word(j, w2).items():
                _acc(res, w3, c2 * c3)
        bracket = mpq(i - j)
        if bracket != 0:
            for w2, c2 in self._dispatch(i + j, rest).items():
                _acc(res, w2, bracket * c2)
        if i + j == 0:
            central = self.c * mpq(i ** 3 - i, 12)
            if central != 0:
                _acc(res, rest, central)
        res = _strip(res)
        memo[key] = res
        return res

    def _dispatch(self, n: int, w: Word) -> Vector:
        return self.mult_word(n, w) if n < self.r else self.apply_word(n, w)


def _acc(d: Vector, w: Word, v) -> None:
    d[w] = d.get(w, mpq(0)) + v


def _strip(d: Vector) -> Vector:
    return {w: v for w, v in d.items() if v != 0}


def vec_add(a: Vector, b: Vector, factor=1) -> Vector:
    out = dict(a)
    for w, v in b.items():
        _acc(out, w, factor * v)
    return _strip(out)

def vec_scale(a: Vector, factor) -> Vector:
    return _strip({w: factor * v for w, v in a.items()})
