"""Changes of basis and filtered isomorphisms between graded complexes.

For homogeneous maps the U-power of every matrix entry is forced by the
gradings, so a homogeneous map is an F2 matrix in disguise.  Chain maps then
form an F2 vector space that can be searched directly.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Mapping, Optional

from . import f2
from .complex import Chain, FilteredComplex, Generator, chain_add

from .upoly import UPoly


def _exponent(gr_from: Fraction, gr_to: Fraction) -> Optional[int]:
    """n with gr_to - 2n = gr_from, if it is a nonnegative integer."""
    n = (gr_to - gr_from) / 2
    if n.denominator != 1 or n < 0:
        return None
    return int(n)


def _invert(rows: list[int], n: int) -> Optional[list[int]]:
    """Inverse of an n x n F2 matrix given by row bitmasks, or None."""
    aug = [rows[i] | (1 << (n + i)) for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if (aug[r] >> col) & 1), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(n):
            if r != col and (aug[r] >> col) & 1:
                aug[r] ^= aug[col]
    return [row >> n for row in aug]


def change_basis(c: FilteredComplex, exprs: Mapping[str, Mapping[str, UPoly]]) -> FilteredComplex:
    """Rewrite c in a new basis; ``exprs[new]`` is the new element as a chain in the old basis.

    Each new element must be homogeneous; its j is the maximum level of its
    terms.  Raises ValueError if the expressions do not form a basis over F2[U].
    """
    new_ids = list(exprs)
    old_ids = c.ids
    n = len(old_ids)
    if len(new_ids) != n:
        raise ValueError("a basis change must keep the rank")
    gens = []
    for e in new_ids:
        terms = [(y, m) for y, p in exprs[e].items() for m in p]
        if not terms:
            raise ValueError(f"new basis element {e} is zero")
        grs = {c.gen(y).gr - 2 * m for y, m in terms}
        if len(grs) != 1:
            raise ValueError(f"new basis element {e} is not homogeneous")
        gens.append(Generator(e, grs.pop(), max(c.gen(y).j - m for y, m in terms), c.gen(terms[0][0]).sector))
    # F2 matrix: rows = new elements, bit = old generator present
    pos = {y: i for i, y in enumerate(old_ids)}
    rows = [sum(1 << pos[y] for y, p in exprs[e].items() if p) for e in new_ids]
    inv = _invert(rows, n)
    if inv is None:
        raise ValueError("new elements are not a basis")
    # old y = sum over new e with inv[y] bit e, with forced exponents
    old_in_new: dict[str, Chain] = {}
    for i, y in enumerate(old_ids):
        chain: Chain = {}
        for k, e in enumerate(new_ids):
            if (inv[i] >> k) & 1:
                m = _exponent(c.gen(y).gr, gens[k].gr)
                if m is None:
                    raise ValueError(f"inverse basis change needs a negative U-power ({y} from {e})")
                chain_add(chain, {e: UPoly.monomial(m)})
        old_in_new[y] = chain
    diff = {}
    for e in new_ids:
        d_old = c.d_chain(exprs[e])
        col: Chain = {}
        for y, p in d_old.items():
            chain_add(col, old_in_new[y], p)
        diff[e] = col
    return FilteredComplex(gens, diff, c.ucap, c.name)


def _allowed(c1: FilteredComplex, c2: FilteredComplex):
    """Variables (x, y, n): entry U^n y of phi(x) that respects gr and j."""
    out = []
    for gx in c1.basis:
        for gy in c2.basis:
            n = _exponent(gx.gr, gy.gr)
            if n is not None and gy.j - n <= gx.j:
                out.append((gx.id, gy.id, n))
    return out


def _matrix(vars_, choice: int, c1: FilteredComplex, c2: FilteredComplex) -> dict[str, Chain]:
    phi: dict[str, Chain] = {x: {} for x in c1.ids}
    for k, (x, y, n) in enumerate(vars_):
        if (choice >> k) & 1:
            chain_add(phi[x], {y: UPoly.monomial(n)})
    return phi


def is_filtered_isomorphism(c1: FilteredComplex, c2: FilteredComplex, phi: Mapping[str, Chain]) -> bool:
    """phi is a chain isomorphism whose inverse is also filtered and U-nonnegative."""
    if len(c1) != len(c2):
        return False
    for x in c1.ids:
        lhs = c2.d_chain(phi[x])
        img = {}
        for w, p in c1.diff[x].items():
            chain_add(img, phi[w], p)
        chain_add(lhs, img)
        if lhs:
            return False
        gx = c1.gen(x)
        for y, p in phi[x].items():
            for n in p:
                if c2.gen(y).gr - 2 * n != gx.gr or c2.gen(y).j - n > gx.j or n < 0:
                    return False
    pos2 = {y: i for i, y in enumerate(c2.ids)}
    rows = [sum(1 << pos2[y] for y in phi[x]) for x in c1.ids]
    inv = _invert(rows, len(rows))
    if inv is None:
        return False
    ids1 = c1.ids
    for i, y in enumerate(c2.ids):
        for k, x in enumerate(ids1):
            if (inv[i] >> k) & 1:
                n = _exponent(c2.gen(y).gr, c1.gen(x).gr)
                if n is None or c1.gen(x).j - n > c2.gen(y).j:
                    return False
    return True


def find_filtered_isomorphism(c1: FilteredComplex, c2: FilteredComplex, max_dim: int = 22,
                              samples: int = 200_000, seed: int = 0) -> Optional[dict[str, Chain]]:
    """Search the space of filtered chain maps c1 -> c2 for an isomorphism."""
    if len(c1) != len(c2) or sorted((g.gr, g.j) for g in c1.basis) != sorted((g.gr, g.j) for g in c2.basis):
        return None
    if not len(c1):
        return {}
    vars_ = _allowed(c1, c2)
    index = {(x, y): k for k, (x, y, _) in enumerate(vars_)}
    equations = []
    # coefficient of z in d2(phi x) + phi(d1 x), for each source x and target z
    for x in c1.ids:
        for gz in c2.basis:
            z = gz.id
            eq = 0
            for gy in c2.basis:
                k = index.get((x, gy.id))
                if k is not None and z in c2.diff[gy.id]:
                    eq ^= 1 << k
            for w in c1.diff[x]:
                k = index.get((w, z))
                if k is not None:
                    eq ^= 1 << k
            if eq:
                equations.append(eq)
    basis = f2.solve_homogeneous(equations, len(vars_))
    if len(basis) <= max_dim:
        combos = range(1, 1 << len(basis))
    else:
        rng = random.Random(seed)
        combos = (rng.getrandbits(len(basis)) for _ in range(samples))
    for combo in combos:
        choice = f2.apply(basis, combo)
        phi = _matrix(vars_, choice, c1, c2)
        if is_filtered_isomorphism(c1, c2, phi):
            return phi
    return None


def describe_chain(chain: Chain) -> str:
    parts = []
    for y, p in chain.items():
        for n in p:
            parts.append(y if n == 0 else f"U^{n}{y}")
    return " + ".join(parts) or "0"
