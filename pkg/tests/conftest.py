from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from floercone.basis import change_basis
from floercone.complex import FilteredComplex, Generator, validate
from floercone.io import load_example
from floercone.upoly import UPoly

EXAMPLES = ["unknot", "trefoil", "figure_eight", "dual_trefoil_m1"]
FRAMINGS = [-2, -1, 1, 2, 5]


@pytest.fixture(scope="session")
def bundles():
    return {name: load_example(name) for name in EXAMPLES}


@st.composite
def complexes(draw, max_pieces: int = 5, scramble: bool = True):
    """Valid filtered complexes: sums of points and arrows x -> U^n y, then a
    random unitriangular basis change."""
    basis, diff = [], {}
    for k in range(draw(st.integers(1, max_pieces))):
        gr = draw(st.integers(-3, 3))
        j = draw(st.integers(-2, 2))
        if draw(st.booleans()):
            basis.append(Generator(f"x{k}", Fraction(gr), Fraction(j)))
            continue
        n = draw(st.integers(0, 2))
        jy = draw(st.integers(j + n - 2, j + n))
        basis.append(Generator(f"x{k}", Fraction(gr), Fraction(j)))
        basis.append(Generator(f"y{k}", Fraction(gr - 1 + 2 * n), Fraction(jy)))
        diff[f"x{k}"] = {f"y{k}": UPoly.monomial(n)}
    c = FilteredComplex(basis, diff)
    if not scramble or len(c) < 2:
        return c
    exprs = {}
    ids = c.ids
    for a, ga in enumerate(c.basis):
        chain = {ga.id: UPoly.monomial(0)}
        for gb in c.basis[a + 1:]:
            m = (gb.gr - ga.gr) / 2
            if m.denominator == 1 and m >= 0 and gb.j - m <= ga.j and draw(st.booleans()):
                chain[gb.id] = UPoly.monomial(int(m))
        exprs[f"e{len(exprs)}"] = chain
    try:
        new = change_basis(c, exprs)
    except ValueError:
        return c
    return new if validate(new).ok else c


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
