"""The filtered mapping cone computing the knot Floer complex of the dual knot.

Towers A_l and B_l are copies of the sector complexes of (Y, K) indexed by the
relative spin^c structures xi_l of the dual knot.  In the i <= 0 model every
cone generator sits at cone filtration I = 0:  A-tower generators are the
translates U^{n_x} x with n_x = max(0, A(x) - s_l), B-tower generators are the
sector generators themselves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .complex import FilteredComplex, FilteredMap, Generator, direct_sum, mapping_cone, reduce
from .knot import BundleError, KnotComplexBundle
from .rational import as_int, format_rational, mod1, q, sign
from .upoly import UPoly


@dataclass(frozen=True, order=True)
class DualSpinc:
    """Orbit of (sector, s) under (q, s) -> (q + 1, s + k/d), named by its l = 0 member."""
    sector: int
    s0: Fraction

    @property
    def label(self) -> str:
        return f"{self.sector}:{format_rational(self.s0)}"

    @classmethod
    def parse(cls, text: str) -> "DualSpinc":
        sector, _, s = text.partition(":")
        return cls(int(sector), q(s))


@dataclass(frozen=True)
class XiIndex:
    l: int
    s: Fraction
    sector: int
    a_dual: Fraction


def in_base_window(s: Fraction, k: int, d: int) -> bool:
    half = Fraction(k, 2 * d)
    if k > 0:
        return -half < s <= half
    return half <= s < -half


def check_offsets(bundle: KnotComplexBundle, k: int) -> None:
    step = Fraction(k, bundle.d)
    for idx in range(bundle.d):
        nxt = (idx + 1) % bundle.d
        if mod1(bundle.offsets[nxt] - bundle.offsets[idx] - step) != 0:
            raise BundleError(
                f"sector offsets {format_rational(bundle.offsets[idx])} -> {format_rational(bundle.offsets[nxt])} "
                f"are inconsistent with k/d = {format_rational(step)}")


def dual_spinc_structures(bundle: KnotComplexBundle, k: int) -> list[DualSpinc]:
    if k == 0:
        raise BundleError("framing k must be nonzero")
    check_offsets(bundle, k)
    half = abs(Fraction(k, 2 * bundle.d))
    out = []
    for idx in range(bundle.d):
        o = bundle.offsets[idx]
        for m in range(math.floor(-half - o) - 1, math.ceil(half - o) + 2):
            s = o + m
            if in_base_window(s, k, bundle.d):
                out.append(DualSpinc(idx, s))
    return sorted(out)


def xi(bundle: KnotComplexBundle, k: int, dual: DualSpinc, l: int) -> XiIndex:
    d = bundle.d
    s = dual.s0 + Fraction(l * k, d)
    return XiIndex(l, s, (dual.sector + l) % d, Fraction(2 * d * s + k - d, 2 * k))


def xi_indexing(bundle: KnotComplexBundle, k: int, dual: DualSpinc, l_range) -> list[XiIndex]:
    check_offsets(bundle, k)
    if not in_base_window(dual.s0, k, bundle.d) or mod1(dual.s0 - bundle.offsets[dual.sector % bundle.d]) != 0:
        raise BundleError(f"dual spin^c selector {dual.label} is inconsistent with the sector offsets")
    return [xi(bundle, k, dual, l) for l in l_range]


# -- filtrations and gradings --------------------------------------------------------

def grading_shift(tower: str, x: XiIndex, d: int, k: int) -> Fraction:
    base = Fraction((2 * d * x.s - k) ** 2, 4 * d * k)
    return base + (Fraction(2 - 3 * sign(k), 4) if tower == "A" else Fraction(-2 - 3 * sign(k), 4))


def assign_IJgr(tower: str, x: XiIndex, d: int, k: int, gr_tilde, i: int, j) -> tuple[int, Fraction, Fraction]:
    """(I, J, gr) of the element [x, i, j] of the tower copy at xi.

    ``gr_tilde`` is the Maslov grading of [x, i, j] itself (gr(x) + 2i).
    """
    j = q(j)
    gr_tilde = q(gr_tilde)
    if tower == "A":
        big_i = max(Fraction(i), j - x.s)
        big_j = max(Fraction(i - 1), j - x.s) + x.a_dual
    elif tower == "B":
        big_i = Fraction(i)
        big_j = i - 1 + x.a_dual
    else:
        raise ValueError(f"unknown tower {tower!r}")
    return as_int(big_i, "I"), big_j, gr_tilde + grading_shift(tower, x, d, k)


# -- truncation ----------------------------------------------------------------------

@dataclass(frozen=True)
class Truncation:
    a: int
    b: int
    degenerate: bool


def _search_radius(bundle: KnotComplexBundle, k: int, lo: Fraction, hi: Fraction) -> int:
    span = abs(lo) + abs(hi) + abs(Fraction(k, bundle.d)) + 2
    return math.ceil(span * bundle.d / abs(k)) + bundle.d + 2


def truncation_bounds(bundle: KnotComplexBundle, k: int, dual: DualSpinc) -> Truncation:
    """Smallest [a, b] outside which every tower pair cancels.

    A tower with s_l above the top Alexander grading of its sector cancels
    against B_l through v; one with s_l at or below the bottom grading cancels
    against B_{l+1} through h.
    """
    ranges = [bundle.alexander_range(idx) for idx in range(bundle.d)]
    lo = min(r[0] for r in ranges)
    hi = max(r[1] for r in ranges)
    radius = _search_radius(bundle, k, lo, hi)
    ls = range(-radius, radius + 1)
    xs = [xi(bundle, k, dual, l) for l in ls]
    above_bottom = [x.l for x in xs if x.s > ranges[x.sector][0]]    # not cancellable by h
    below_top = [x.l for x in xs if x.s <= ranges[x.sector][1]]      # not cancellable by v
    if k > 0:
        a, b = min(above_bottom), max(below_top)
    else:
        a, b = min(below_top), max(above_bottom)
    if a <= b:
        return Truncation(a, b, False)
    if a != b + 1:
        raise BundleError("inconsistent truncation data")
    if k < 0:
        return Truncation(a, b, True)
    # both neighbours are valid survivors; keep the one whose s is nearest 0
    sb, sa = xi(bundle, k, dual, b).s, xi(bundle, k, dual, a).s
    keep = a if (abs(sa), -sa) <= (abs(sb), -sb) else b
    return Truncation(keep, keep, True)


def tower_ranges(k: int, a: int, b: int) -> tuple[range, range, range, range]:
    """(A towers, B towers, v indices, h indices) of the truncated cone."""
    if k > 0:
        return range(a, b + 1), range(a + 1, b + 1), range(a + 1, b + 1), range(a, b)
    return range(a, b + 1), range(a, b + 2), range(a, b + 1), range(a, b + 1)


# -- assembly --------------------------------------------------------------------------

@dataclass(frozen=True)
class Summand:
    tower: str
    xi: XiIndex
    source_id: str
    translate: int


@dataclass
class SurgeryCone:
    complex: FilteredComplex
    summands: dict[str, Summand]
    bundle: KnotComplexBundle
    k: int
    dual: DualSpinc
    a: int
    b: int
    degenerate: bool
    ucap: Optional[int] = None

    @property
    def d(self) -> int:
        return self.bundle.d

    @property
    def label(self) -> str:
        return self.dual.label

    def xi(self, l: int) -> XiIndex:
        return xi(self.bundle, self.k, self.dual, l)


def cone_id(tower: str, l: int, x: str) -> str:
    return f"{tower}{l}:{x}"


def _translate(gx: Generator, x: XiIndex) -> int:
    return as_int(max(Fraction(0), gx.j - x.s), f"U-translate of {gx.id} at s={format_rational(x.s)}")


def build_cone(bundle: KnotComplexBundle, k: int | None = None, dual: DualSpinc | None = None,
               a: int | None = None, b: int | None = None, ucap: int | None = None) -> SurgeryCone:
    k = bundle.k if k is None else k
    if not k:
        raise BundleError("framing k must be nonzero")
    d = bundle.d
    if dual is None:
        duals = dual_spinc_structures(bundle, k)
        if len(duals) != 1:
            raise BundleError(f"{len(duals)} dual spin^c structures; choose one")
        dual = duals[0]
    xi_indexing(bundle, k, dual, [0])
    degenerate = False
    if a is None or b is None:
        t = truncation_bounds(bundle, k, dual)
        a = t.a if a is None else a
        b = t.b if b is None else b
        degenerate = t.degenerate
    if (k > 0 and a > b) or (k < 0 and a > b + 1):
        raise BundleError(f"empty tower range a={a}, b={b}")
    a_range, b_range, v_range, h_range = tower_ranges(k, a, b)

    summands: dict[str, Summand] = {}
    a_parts, b_parts = [], []
    for l in a_range:
        x = xi(bundle, k, dual, l)
        sec = bundle.sectors[x.sector]
        n = {g.id: _translate(g, x) for g in sec.basis}
        basis, diff = [], {}
        for g in sec.basis:
            cid = cone_id("A", l, g.id)
            i, j = -n[g.id], g.j - n[g.id]
            big_i, big_j, gr = assign_IJgr("A", x, d, k, g.gr - 2 * n[g.id], i, j)
            basis.append(Generator(cid, gr, big_j, dual.label))
            summands[cid] = Summand("A", x, g.id, n[g.id])
            diff[cid] = {cone_id("A", l, y): p.shift(n[g.id] - n[y]) for y, p in sec.diff[g.id].items()}
        a_parts.append(FilteredComplex(basis, diff))
    for l in b_range:
        x = xi(bundle, k, dual, l)
        sec = bundle.sectors[x.sector]
        basis, diff = [], {}
        for g in sec.basis:
            cid = cone_id("B", l, g.id)
            _, big_j, gr = assign_IJgr("B", x, d, k, g.gr, 0, g.j)
            basis.append(Generator(cid, gr, big_j, dual.label))
            summands[cid] = Summand("B", x, g.id, 0)
            diff[cid] = {cone_id("B", l, y): p for y, p in sec.diff[g.id].items()}
        b_parts.append(FilteredComplex(basis, diff))

    source = direct_sum(a_parts)
    target = direct_sum(b_parts)
    entries: dict[str, dict[str, UPoly]] = {cid: {} for cid in source.ids}
    for l in v_range:
        x = xi(bundle, k, dual, l)
        for g in bundle.sectors[x.sector].basis:
            src = cone_id("A", l, g.id)
            entries[src][cone_id("B", l, g.id)] = UPoly.monomial(summands[src].translate)
    for l in h_range:
        x = xi(bundle, k, dual, l)
        try:
            psi = bundle.flip(x.sector).at(x.s)
        except ValueError as exc:
            raise BundleError(f"flip from sector {x.sector} cannot be taken at s={format_rational(x.s)}: {exc}")
        for src_x, col in psi.items():
            src = cone_id("A", l, src_x)
            n = summands[src].translate
            for y, p in col.items():
                p = p.shift(n)
                if any(e < 0 for e in p.exponents):
                    raise BundleError(f"flip term {src_x} -> {y} at s={format_rational(x.s)} has a negative U-power "
                                      "after translation; the flip is not filtered")
                tgt = cone_id("B", l + 1, y)
                entries[src][tgt] = entries[src].get(tgt, UPoly()) + p
    dmap = FilteredMap(source, target, entries, degree=-1)
    cx = mapping_cone(dmap, name=f"{bundle.name} k={k} {dual.label}")
    if ucap is not None:
        cx = cx.truncated(ucap)
    return SurgeryCone(cx, summands, bundle, k, dual, a, b, degenerate, ucap)


def build_all(bundle: KnotComplexBundle, k: int | None = None, enlarge: int = 0, ucap: int | None = None) -> list[SurgeryCone]:
    k = bundle.k if k is None else k
    cones = []
    for dual in dual_spinc_structures(bundle, k):
        t = truncation_bounds(bundle, k, dual)
        a, b = t.a - enlarge, t.b + enlarge
        cone = build_cone(bundle, k, dual, a, b, ucap)
        cone.degenerate = t.degenerate
        cones.append(cone)
    return cones


def default_ucap(cone: SurgeryCone) -> int:
    grs = [g.gr for g in cone.complex.basis]
    return math.floor((max(grs) - min(grs)) / 2) + 2
