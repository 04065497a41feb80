"""1/n surgery on a knot in an integer homology sphere.

Y_{1/n}(K) is +1 surgery (with d = n) on K # O_n inside Y # -L(n, 1), where
O_n is the Floer simple knot whose n sectors are single generators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .complex import FilteredComplex, Generator
from .cone import SurgeryCone, build_all, build_cone, dual_spinc_structures
from .knot import BundleError, Flip, KnotComplexBundle, checked, shift_table_of, tensor_bundle
from .rational import format_rational, mod1
from .upoly import ONE


def simple_knot_offset(n: int, q_: int) -> Fraction:
    return -Fraction(n - 2 * q_ - 1, 2 * n)


def simple_knot_grading(n: int, q_: int) -> Fraction:
    return -Fraction((2 * q_ - n) ** 2 - n, 4 * n)


def simple_knot_bundle(n: int) -> KnotComplexBundle:
    if n < 1:
        raise BundleError("n must be a positive integer")
    sectors = [FilteredComplex([Generator("o", simple_knot_grading(n, q_), simple_knot_offset(n, q_), str(q_))])
               for q_ in range(n)]
    flips = [Flip(q_, (q_ + 1) % n, simple_knot_offset(n, q_), {"o": {"o": ONE}}) for q_ in range(n)]
    offsets = [mod1(simple_knot_offset(n, q_)) for q_ in range(n)]
    return checked(KnotComplexBundle(n, sectors, flips, 1, True, True, f"O_{n}", offsets))


def one_over_n_bundle(b: KnotComplexBundle, n: int) -> KnotComplexBundle:
    if b.d != 1:
        raise BundleError("1/n surgery needs a knot in an integer homology sphere (d = 1)")
    if n < 1:
        raise BundleError("only n > 0 is supported")
    out = tensor_bundle(b, shift_table_of(simple_knot_bundle(n)))
    out.k = 1
    out.name = f"{b.name}#O_{n}"
    return out


def one_over_n_surgery(b: KnotComplexBundle, n: int, a: int | None = None, bb: int | None = None,
                       ucap: int | None = None) -> SurgeryCone:
    """The cone for +1 surgery on K # O_n; Y_{1/n}(K) has a single spin^c structure."""
    kn = one_over_n_bundle(b, n)
    duals = dual_spinc_structures(kn, 1)
    if len(duals) != 1:
        raise BundleError(f"expected one dual spin^c structure, found {len(duals)}")
    return build_cone(kn, 1, duals[0], a, bb, ucap)


def closed_form_s(n: int, l: int) -> Fraction:
    return Fraction(2 * l + 1, 2 * n) if n % 2 == 0 else Fraction(l, n)


@dataclass
class RatlReport:
    n: int
    checked_elements: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __bool__(self) -> bool:
        return self.ok


def ratl_filtration_check(cone: SurgeryCone) -> RatlReport:
    """Recompute I and J from the closed forms for 1/n surgery and diff them
    against the generic cone assignments."""
    n = cone.d
    if cone.k != 1:
        raise BundleError("not a 1/n surgery cone (k must be 1)")
    report = RatlReport(n)
    offset = Fraction(math.floor(Fraction(n - 1, 2)))
    for cid, summ in cone.summands.items():
        l = summ.xi.l
        s = closed_form_s(n, l)
        if s != summ.xi.s:
            report.mismatches.append(f"{cid}: s_l = {format_rational(summ.xi.s)}, closed form {format_rational(s)}")
            continue
        # the sector q of O_n whose Alexander offset matches s_l mod 1
        qs = [q_ for q_ in range(n) if mod1(simple_knot_offset(n, q_) - s) == 0]
        if len(qs) != 1 or qs[0] != summ.xi.sector:
            report.mismatches.append(f"{cid}: sector {summ.xi.sector} but closed form gives {qs}")
            continue
        r = s - simple_knot_offset(n, qs[0])
        # Alexander grading in K itself: undo the O_n shift of this sector
        a_k = cone.bundle.sectors[qs[0]].gen(summ.source_id).j - simple_knot_offset(n, qs[0])
        i = -summ.translate
        j = a_k - summ.translate
        if summ.tower == "A":
            big_i = max(Fraction(i), j - r)
            big_j = max(Fraction(i - 1), j - r) + l - offset
        else:
            big_i = Fraction(i)
            big_j = i - 1 + l - offset
        g = cone.complex.gen(cid)
        report.checked_elements += 1
        if big_i != 0 or big_j != g.j:
            report.mismatches.append(f"{cid}: generic (I,J) = (0, {format_rational(g.j)}), "
                                     f"closed form ({format_rational(big_i)}, {format_rational(big_j)})")
    return report
