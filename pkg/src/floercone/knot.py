"""Knot Floer complexes over all spin^c sectors, with their flip maps.

Each sector is a FilteredComplex whose ``j`` is the Alexander grading of the
generators at i = 0 (the i <= 0 model).  Flip maps are stored once per sector
pair at an anchor s; the relation Psi_{s+1} = U Psi_s gives the rest.
Flip coefficients are Laurent: exponents may be negative.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .complex import (FilteredComplex, FilteredMap, Generator, StructuralError, ValidationReport,
                      Violation, Window, chain_add, reduce, subquotient, validate)
from .homology import GradedTable, check_filtered_quasi_iso, homology_f2
from .rational import as_int, format_rational, mod1, q
from .upoly import ONE, UPoly

PROBE_DEPTH = 4


class BundleError(ValueError):
    """A bundle failed one of its invariants; ``violations`` has the details."""

    def __init__(self, message: str, violations: Sequence[Violation] = ()):
        super().__init__(message)
        self.violations = list(violations)


@dataclass
class Flip:
    source: int
    target: int
    anchor: Fraction
    entries: dict[str, dict[str, UPoly]]

    def at(self, s) -> dict[str, dict[str, UPoly]]:
        """Entries of Psi_s, obtained from the anchor by multiplying by U^(s - anchor)."""
        shift = as_int(q(s) - self.anchor, f"flip rescaling from anchor {format_rational(self.anchor)} to {s}")
        return {x: {y: p.shift(shift) for y, p in col.items()} for x, col in self.entries.items()}


@dataclass
class KnotComplexBundle:
    d: int
    sectors: list[FilteredComplex]
    flips: list[Optional[Flip]]
    k: Optional[int] = None
    lspace: bool = False
    graded: bool = True
    name: str = "knot"
    offsets: list[Fraction] = field(default_factory=list)

    def __post_init__(self):
        if not self.offsets:
            self.offsets = [mod1(s.basis[0].j) if len(s) else Fraction(0) for s in self.sectors]

    def with_framing(self, k: int) -> "KnotComplexBundle":
        if k == 0:
            raise BundleError("framing k must be nonzero")
        return replace(self, k=k)

    def flip(self, q_: int) -> Flip:
        fl = self.flips[q_ % self.d] if self.flips else None
        if fl is None:
            raise BundleError(f"no flip map supplied for sector {q_ % self.d}")
        return fl

    def alexander_range(self, sector: int | None = None, reduced: bool = True) -> tuple[Fraction, Fraction]:
        secs = self.sectors if sector is None else [self.sectors[sector % self.d]]
        values = []
        for s in secs:
            c = reduce(s).reduced if reduced else s
            values.extend(g.j for g in c.basis)
        if not values:
            raise BundleError("bundle has no generators")
        return min(values), max(values)


# -- flip invariants -------------------------------------------------------------

def flip_map(bundle: KnotComplexBundle, q_: int, s) -> FilteredMap:
    """Psi_s from sector q to q+1 as a FilteredMap (Laurent entries)."""
    fl = bundle.flip(q_)
    src = bundle.sectors[q_ % bundle.d]
    tgt = bundle.sectors[(q_ + 1) % bundle.d]
    return FilteredMap(src, tgt, fl.at(s), degree=-2 * q(s))


def check_flip(bundle: KnotComplexBundle, q_: int, probe_depth: int = PROBE_DEPTH) -> ValidationReport:
    fl = bundle.flip(q_)
    src = bundle.sectors[fl.source]
    tgt = bundle.sectors[fl.target]
    s = fl.anchor
    report = ValidationReport()
    for x, col in fl.entries.items():
        if x not in src:
            raise StructuralError(f"flip {fl.source}->{fl.target} mentions unknown source {x!r}")
        gx = src.gen(x)
        for y, p in col.items():
            if y not in tgt:
                raise StructuralError(f"flip {fl.source}->{fl.target} mentions unknown target {y!r}")
            gy = tgt.gen(y)
            for n in p:
                if n < s - gx.j:
                    report.violations.append(Violation(
                        "flip-filtration", x, y,
                        f"term U^{n}{y} needs exponent >= s - A(x) = {format_rational(s - gx.j)}"))
                if gy.gr - 2 * n != gx.gr - 2 * s:
                    report.violations.append(Violation(
                        "flip-grading", x, y, f"term U^{n}{y} is not homogeneous of degree {format_rational(-2 * s)}"))
    m = FilteredMap(src, tgt, fl.entries, degree=-2 * s)
    for x in src.ids:
        lhs = tgt.d_chain(m.entries[x])
        chain_add(lhs, m.apply(src.diff[x]))
        for z in lhs:
            report.violations.append(Violation("flip-chain", x, z, "flip does not commute with d"))
    if report.ok:
        probe = (Window.make(j=(s - probe_depth, s)), Window.make(i=(-probe_depth, 0)))
        qi = check_filtered_quasi_iso(m, [probe])
        if not qi.ok:
            report.violations.append(Violation(
                "flip-quasi-iso", f"sector {fl.source}", f"sector {fl.target}",
                f"not a quasi-isomorphism on the probe window: {qi.describe()}"))
    return report


def validate_bundle(b: KnotComplexBundle) -> ValidationReport:
    report = ValidationReport()
    if b.d < 1:
        raise BundleError("d must be a positive integer")
    if len(b.sectors) != b.d:
        raise BundleError(f"bundle declares d={b.d} but has {len(b.sectors)} sectors")
    if b.k == 0:
        raise BundleError("framing k must be nonzero")
    for idx, sec in enumerate(b.sectors):
        for v in validate(sec).violations:
            report.violations.append(replace(v, detail=f"sector {idx}: {v.detail}"))
        for g in sec.basis:
            if mod1(g.j - b.offsets[idx]) != 0:
                report.violations.append(Violation(
                    "offset", g.id, None, f"sector {idx}: A={format_rational(g.j)} not in offset coset "
                                          f"{format_rational(b.offsets[idx])}"))
    if b.flips:
        if len(b.flips) != b.d:
            raise BundleError(f"expected {b.d} flips, found {len(b.flips)}")
        for idx, fl in enumerate(b.flips):
            if fl is None:
                continue
            if fl.source != idx or fl.target != (idx + 1) % b.d:
                raise BundleError(f"flip #{idx} must map sector {idx} to sector {(idx + 1) % b.d}")
            if report.ok:
                report.violations.extend(check_flip(b, idx).violations)
    return report


def checked(b: KnotComplexBundle) -> KnotComplexBundle:
    rep = validate_bundle(b)
    if not rep.ok:
        first = rep.violations[0]
        raise BundleError(f"invalid bundle {b.name!r}: {first.kind} at {first.source}->{first.target}: {first.detail}",
                          rep.violations)
    return b


# -- symmetry ------------------------------------------------------------------------

@dataclass
class SymmetryReport:
    ranks: dict[Fraction, int]
    passed: bool

    def __bool__(self) -> bool:
        return self.passed


def hfk_table(sectors: Iterable[FilteredComplex], labels: Iterable[str] | None = None) -> GradedTable:
    """Homology of each i = 0, j = r slice, summed into one table."""
    rows = []
    sectors = list(sectors)
    labels = list(labels) if labels is not None else [None] * len(sectors)
    for label, sec in zip(labels, sectors):
        for r in sorted({g.j for g in sec.basis}):
            t = homology_f2(subquotient(sec, Window.make(i=0, j=r)), spinc=label)
            rows.extend(t.rows.items())
    return GradedTable(rows)


def check_alexander_symmetry(b: KnotComplexBundle | Iterable[FilteredComplex]) -> SymmetryReport:
    sectors = b.sectors if isinstance(b, KnotComplexBundle) else list(b)
    ranks = hfk_table(sectors).by_alexander()
    passed = all(ranks.get(-r, 0) == v for r, v in ranks.items())
    return SymmetryReport(dict(sorted(ranks.items())), passed)


# -- naive symmetric flip for knots in L-spaces ---------------------------------------

MAX_CANDIDATES = 200_000


def build_symmetry_flip(b: KnotComplexBundle, s=0, sector_complex: FilteredComplex | None = None) -> Flip:
    """Search for Psi_0(x) = U^(-A(x)) sigma(x) with sigma a basis bijection
    pairing (A, gr) with (-A, gr - 2A); return it rescaled to anchor s once it
    passes every flip check.
    """
    if b.d != 1:
        raise BundleError("automatic flips are only built for d = 1")
    if not b.lspace:
        raise BundleError("automatic flips need the ambient manifold flagged as an L-space; supply an explicit flip")
    c = sector_complex or b.sectors[0]
    for g in c.basis:
        if g.j.denominator != 1:
            raise BundleError("d = 1 requires integer Alexander gradings")
    classes: dict[tuple, list[str]] = defaultdict(list)
    for g in c.basis:
        classes[(g.j, g.gr)].append(g.id)
    keys = sorted(classes)
    choices = []
    for key in keys:
        a, gr = key
        partner = classes.get((-a, gr - 2 * a), [])
        if len(partner) != len(classes[key]):
            raise BundleError(f"no symmetric matching: class A={format_rational(a)}, gr={format_rational(gr)} "
                              f"has no partner of matching size; supply an explicit flip")
        choices.append(list(itertools.permutations(partner)))
    total = math.prod(len(ch) for ch in choices)
    if total > MAX_CANDIDATES:
        raise BundleError(f"{total} candidate matchings exceed the search limit; supply an explicit flip")
    s = q(s)
    shift = as_int(s, "anchor for a d = 1 flip")
    trial = replace(b, flips=[None])
    for combo in itertools.product(*choices):
        entries = {}
        for key, images in zip(keys, combo):
            for x, y in zip(classes[key], images):
                entries[x] = {y: UPoly.monomial(as_int(-c.gen(x).j) + shift)}
        trial.flips[0] = Flip(0, 0, s, entries)
        if check_flip(trial, 0).ok:
            return trial.flips[0]
    raise BundleError("no symmetric basis matching gives a filtered chain map; supply an explicit flip "
                      "(the naive guess can fail for knots in non-L-spaces)")


# -- connected sum with a rank-one factor -----------------------------------------

def shift_table_of(factor: KnotComplexBundle) -> list[tuple[Fraction, Fraction]]:
    table = []
    for idx, sec in enumerate(factor.sectors):
        if len(sec) != 1:
            raise BundleError(f"second factor sector {idx} has rank {len(sec)}; only rank-1 factors are supported")
        g = sec.basis[0]
        table.append((g.j, g.gr))
    return table


def tensor_bundle(b1: KnotComplexBundle, shift_table: Sequence[tuple]) -> KnotComplexBundle:
    """Connected sum with a knot whose sectors are single generators at the
    given (A, gr) shifts; the factor's flips are forced by the gradings.
    """
    table = [(q(a), q(gr)) for a, gr in shift_table]
    n = len(table)
    if n == 0:
        raise BundleError("empty shift table")
    d1 = b1.d
    if math.gcd(d1, n) != 1:
        raise BundleError("tensor with a factor whose order is not coprime to d is not supported")
    factor_exp = []
    for idx, (a, gr) in enumerate(table):
        a_next, gr_next = table[(idx + 1) % n]
        e = (gr_next - gr) / 2 + a
        if e.denominator != 1 or e < 0:
            raise BundleError(f"shift table entries {idx} -> {(idx + 1) % n} do not admit a rank-1 flip")
        factor_exp.append(as_int(e))
    total = d1 * n
    sectors, flips, offsets = [], [], []
    for m in range(total):
        base = b1.sectors[m % d1]
        a, gr = table[m % n]
        label = str(m)
        sectors.append(FilteredComplex([Generator(g.id, g.gr + gr, g.j + a, label) for g in base.basis],
                                       base.diff, base.ucap, base.name))
        offsets.append(mod1(b1.offsets[m % d1] + a))
    for m in range(total):
        fl = b1.flips[m % d1] if b1.flips else None
        if fl is None:
            flips.append(None)
            continue
        e = factor_exp[m % n]
        a = table[m % n][0]
        entries = {x: {y: p.shift(e) for y, p in col.items()} for x, col in fl.entries.items()}
        flips.append(Flip(m, (m + 1) % total, fl.anchor + a, entries))
    return KnotComplexBundle(total, sectors, flips, b1.k, b1.lspace, b1.graded, f"{b1.name}#{n}", offsets)
