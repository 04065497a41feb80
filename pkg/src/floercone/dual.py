"""Invariants of the dual knot read off a surgery cone."""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .complex import FilteredComplex, FiniteF2Complex, Generator, Window, reduce, subquotient
from .cone import SurgeryCone, XiIndex, grading_shift
from .homology import GradedTable, homology_f2
from .knot import checked, hfk_table
from .rational import format_rational


def _three_term(cone: SurgeryCone, l: int) -> FiniteF2Complex:
    """A_l{i <= 0, j = s_l} + A_{l+1}{i = 0, j <= s_{l+1} - 1} --(h, v)--> B_{l+1}{i = 0}."""
    bundle, d, k = cone.bundle, cone.d, cone.k
    x0, x1 = cone.xi(l), cone.xi(l + 1)
    c0, c1 = bundle.sectors[x0.sector], bundle.sectors[x1.sector]
    labels: list[tuple[str, int]] = []
    gr: list[Fraction] = []

    def add(label, g):
        labels.append(label)
        gr.append(g)

    for g in c0.basis:                       # translates U^n x with A(x) - n = s_l, n >= 0
        n = g.j - x0.s
        if n.denominator == 1 and n >= 0:
            add(("h", g.id, int(n)), g.gr - 2 * n + grading_shift("A", x0, d, k))
    for g in c1.basis:
        if g.j <= x1.s - 1:
            add(("v", g.id, 0), g.gr + grading_shift("A", x1, d, k))
    for g in c1.basis:
        add(("B", g.id, 0), g.gr + grading_shift("B", x1, d, k))
    index = {lab: pos for pos, lab in enumerate(labels)}
    psi = bundle.flip(x0.sector).at(x0.s)
    cols = []
    for part, x, n in labels:
        col = 0
        if part == "h":
            for y, p in c0.diff[x].items():
                for e in p:
                    t = index.get(("h", y, n + e))
                    if t is not None:
                        col ^= 1 << t
            for y, p in psi.get(x, {}).items():
                if n + p.min_exponent() < 0:
                    raise ValueError(f"flip term {x} -> {y} leaves the i <= 0 model at s={format_rational(x0.s)}")
                if -n in p.exponents:
                    col ^= 1 << index[("B", y, 0)]
        elif part == "v":
            for y, p in c1.diff[x].items():
                if p.has_unit() and ("v", y, 0) in index:
                    col ^= 1 << index[("v", y, 0)]
            col ^= 1 << index[("B", x, 0)]
        else:
            for y, p in c1.diff[x].items():
                if p.has_unit():
                    col ^= 1 << index[("B", y, 0)]
        cols.append(col)
    flat = [(x, n) for _, x, n in labels]
    return FiniteF2Complex(flat, gr, [Fraction(0)] * len(flat), cols)


def hfk_hat(cone: SurgeryCone, l: int) -> GradedTable:
    """Knot Floer homology of the dual knot in the relative spin^c structure xi_l."""
    x0 = cone.xi(l)
    table = homology_f2(_three_term(cone, l))
    drop = not cone.bundle.graded
    return GradedTable([((cone.label, x0.a_dual, None if drop else gr), r) for (_, _, gr), r in table.rows.items()])


def relevant_l(cone: SurgeryCone) -> range:
    """Every l whose three-term complex can carry homology."""
    lo, hi = cone.bundle.alexander_range(reduced=False)
    step = abs(Fraction(cone.k, cone.d))
    ls = [l for l in range(cone.a - cone.d - 3, cone.b + cone.d + 4)
          if lo - 1 - step <= cone.xi(l).s <= hi + 1 + step]
    return range(min(ls), max(ls) + 1)


def hfk_hat_all(cone: SurgeryCone) -> GradedTable:
    rows = []
    for l in relevant_l(cone):
        rows.extend(hfk_hat(cone, l).rows.items())
    return GradedTable(rows)


def dual_cfk(cone: SurgeryCone) -> FilteredComplex:
    """Reduced cone, read as the knot complex of the dual knot (j = J, gr = gr_t)."""
    red = reduce(cone.complex).reduced
    basis = [Generator(g.id, g.gr, g.j, cone.label) for g in red.basis]
    return FilteredComplex(basis, red.diff, red.ucap, f"dual of {cone.complex.name}")


def hfk_from_cone(cone: SurgeryCone) -> GradedTable:
    """Associated graded homology of the full cone, for cross-checking hfk_hat."""
    table = hfk_table([cone.complex], [cone.label])
    if not cone.bundle.graded:
        table = GradedTable([((s, a, None), r) for (s, a, _), r in table.rows.items()])
    return table


def hf_hat(cone: SurgeryCone) -> GradedTable:
    """Homology of the I = 0 slice, graded by gr_t (Alexander coordinate dropped)."""
    sl = subquotient(cone.complex, Window.make(i=0))
    sl = FiniteF2Complex(sl.labels, sl.gr, [Fraction(0)] * sl.dim, sl.cols)
    table = homology_f2(sl)
    drop = not cone.bundle.graded
    return GradedTable([((cone.label, None, None if drop else gr), r) for (_, _, gr), r in table.rows.items()])


def dual_tables(cones: list[SurgeryCone]) -> dict[str, GradedTable]:
    out = {"hfk": GradedTable(), "hfk_graded": GradedTable(), "hf": GradedTable()}
    for cone in cones:
        out["hfk"] = out["hfk"].merged(hfk_hat_all(cone))
        out["hfk_graded"] = out["hfk_graded"].merged(hfk_from_cone(cone))
        out["hf"] = out["hf"].merged(hf_hat(cone))
    return out
