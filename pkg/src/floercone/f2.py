"""Dense F2 linear algebra on Python ints used as bit vectors."""
from __future__ import annotations

from typing import Sequence


def _reduce_against(vec: int, pivots: dict[int, int]) -> int:
    while vec:
        top = vec.bit_length() - 1
        row = pivots.get(top)
        if row is None:
            return vec
        vec ^= row
    return 0


def rank(vectors: Sequence[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        v = _reduce_against(v, pivots)
        if v:
            pivots[v.bit_length() - 1] = v
    return len(pivots)


def kernel(columns: Sequence[int]) -> list[int]:
    """Basis of {c : sum_i c_i * columns[i] = 0}, as bitmasks over column indices."""
    pivots: dict[int, tuple[int, int]] = {}
    basis: list[int] = []
    for idx, col in enumerate(columns):
        combo = 1 << idx
        v = col
        while v:
            top = v.bit_length() - 1
            hit = pivots.get(top)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        if v:
            pivots[v.bit_length() - 1] = (v, combo)
        else:
            basis.append(combo)
    return basis


def apply(columns: Sequence[int], combo: int) -> int:
    out = 0
    idx = 0
    while combo:
        if combo & 1:
            out ^= columns[idx]
        combo >>= 1
        idx += 1
    return out


def solve_homogeneous(equations: Sequence[int], nvars: int) -> list[int]:
    """Null space of a system given as row bitmasks over nvars unknowns."""
    pivots: dict[int, int] = {}
    for eq in equations:
        eq = _reduce_against(eq, pivots)
        if eq:
            pivots[eq.bit_length() - 1] = eq
    # back-substitute to reduced row echelon form
    keys = sorted(pivots)
    for p in keys:
        row = pivots[p]
        for other in keys:
            if other != p and (pivots[other] >> p) & 1:
                pivots[other] ^= row
    free = [v for v in range(nvars) if v not in pivots]
    basis = []
    for f in free:
        vec = 1 << f
        for p, row in pivots.items():
            if (row >> f) & 1:
                vec |= 1 << p
        basis.append(vec)
    return basis


def is_invertible(rows: Sequence[int], n: int) -> bool:
    return len(rows) == n and rank(rows) == n
