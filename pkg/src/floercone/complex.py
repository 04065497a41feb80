"""Doubly-filtered free chain complexes over F2[U].

A complex is a list of generators, each carrying a Maslov grading ``gr``, a
second filtration level ``j`` and a sector label, plus a column-major
differential: ``diff[x][y]`` is the U-polynomial coefficient of ``y`` in
``dx``.  The first filtration is the U-power: the translate ``U^n x`` sits at
``i = -n`` and ``j = j(x) - n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .rational import format_rational, mod1, q
from .upoly import ONE, UPoly

# An element of a free module: generator id -> coefficient.
Chain = dict[str, UPoly]


class StructuralError(ValueError):
    """Malformed input (unknown ids, negative exponents, duplicate labels)."""


@dataclass(frozen=True)
class Generator:
    id: str
    gr: Fraction
    j: Fraction
    sector: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "gr", q(self.gr))
        object.__setattr__(self, "j", q(self.j))


@dataclass(frozen=True)
class Violation:
    kind: str          # "grading" | "filtration" | "d-squared" | "coset"
    source: str
    target: Optional[str]
    detail: str

    def as_dict(self) -> dict:
        return {"kind": self.kind, "source": self.source, "target": self.target, "detail": self.detail}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def chain_add(acc: Chain, other: Mapping[str, UPoly], coeff: UPoly = ONE, cap: int | None = None) -> Chain:
    """acc += coeff * other, in place."""
    for y, p in other.items():
        term = (p * coeff).truncate(cap)
        if not term:
            continue
        new = acc.get(y, UPoly()) + term
        if new:
            acc[y] = new
        else:
            acc.pop(y, None)
    return acc


class FilteredComplex:
    """Immutable-by-convention filtered complex.

    ``ucap`` set to t means the complex lives over F2[U]/U^(t+1).
    """

    def __init__(self, basis: Iterable[Generator], diff: Mapping[str, Mapping[str, UPoly]] | None = None,
                 ucap: int | None = None, name: str | None = None, check: bool = True):
        self.basis: tuple[Generator, ...] = tuple(basis)
        self.ucap = ucap
        self.name = name
        self._index = {g.id: pos for pos, g in enumerate(self.basis)}
        if len(self._index) != len(self.basis):
            seen, dup = set(), []
            for g in self.basis:
                if g.id in seen:
                    dup.append(g.id)
                seen.add(g.id)
            raise StructuralError(f"duplicate basis ids: {sorted(set(dup))}")
        cleaned: dict[str, dict[str, UPoly]] = {g.id: {} for g in self.basis}
        for x, col in (diff or {}).items():
            if check and x not in self._index:
                raise StructuralError(f"differential column for unknown generator {x!r}")
            for y, p in col.items():
                if check and y not in self._index:
                    raise StructuralError(f"differential of {x!r} mentions unknown generator {y!r}")
                if not isinstance(p, UPoly):
                    p = UPoly(p)
                if check and any(e < 0 for e in p.exponents):
                    raise StructuralError(f"negative U-exponent in d({x}) at {y}")
                p = p.truncate(ucap)
                if p:
                    cleaned[x][y] = p
        self.diff = cleaned

    # -- access -----------------------------------------------------
    def __len__(self) -> int:
        return len(self.basis)

    def __contains__(self, gid: str) -> bool:
        return gid in self._index

    @property
    def ids(self) -> list[str]:
        return [g.id for g in self.basis]

    def gen(self, gid: str) -> Generator:
        return self.basis[self._index[gid]]

    def position(self, gid: str) -> int:
        return self._index[gid]

    def d(self, gid: str) -> dict[str, UPoly]:
        return self.diff[gid]

    def d_chain(self, chain: Mapping[str, UPoly]) -> Chain:
        acc: Chain = {}
        for x, p in chain.items():
            chain_add(acc, self.diff[x], p, self.ucap)
        return acc

    def terms(self):
        """Yield (x, n, y) for every monomial U^n y in dx, in basis order."""
        for g in self.basis:
            col = self.diff[g.id]
            for y in sorted(col, key=self._index.__getitem__):
                for n in col[y]:
                    yield g.id, n, y

    def with_basis(self, basis: Iterable[Generator]) -> "FilteredComplex":
        """Same differential over relabelled gradings (ids must match)."""
        return FilteredComplex(basis, self.diff, self.ucap, self.name)

    def truncated(self, ucap: int) -> "FilteredComplex":
        return FilteredComplex(self.basis, self.diff, ucap, self.name)

    def is_reduced(self) -> bool:
        return not any(n == 0 and self.gen(y).j == self.gen(x).j for x, n, y in self.terms())

    def bigrading_multiset(self) -> list[tuple[Fraction, Fraction]]:
        return sorted((g.gr, g.j) for g in self.basis)

    def __repr__(self) -> str:
        return f"FilteredComplex({len(self.basis)} generators, ucap={self.ucap})"

    def pretty(self) -> str:
        lines = []
        for g in self.basis:
            dx = " + ".join(_term(p, y) for y, p in self.diff[g.id].items()) or "0"
            lines.append(f"{g.id}: gr={format_rational(g.gr)} j={format_rational(g.j)}  d = {dx}")
        return "\n".join(lines)


def _term(p: UPoly, y: str) -> str:
    s = repr(p)
    if s == "1":
        return y
    if len(p) > 1:
        return f"({s}){y}"
    return f"{s}{y}"


# -- validation ---------------------------------------------------------

def validate(c: FilteredComplex) -> ValidationReport:
    report = ValidationReport()
    for x, n, y in c.terms():
        gx, gy = c.gen(x), c.gen(y)
        if gy.gr - 2 * n != gx.gr - 1:
            report.violations.append(Violation(
                "grading", x, y,
                f"term U^{n}{y} has degree {format_rational(gy.gr - 2 * n)}, expected {format_rational(gx.gr - 1)}"))
        if gy.j - n > gx.j:
            report.violations.append(Violation(
                "filtration", x, y,
                f"term U^{n}{y} at j={format_rational(gy.j - n)} exceeds j({x})={format_rational(gx.j)}"))
    for g in c.basis:
        dd = c.d_chain(c.diff[g.id])
        for z in sorted(dd, key=c.position):
            report.violations.append(Violation("d-squared", g.id, z, f"d^2({g.id}) has coefficient {dd[z]!r} on {z}"))
    sectors: dict[Optional[str], Generator] = {}
    for g in c.basis:
        ref = sectors.setdefault(g.sector, g)
        if mod1(g.gr - ref.gr) != 0 or mod1(g.j - ref.j) != 0:
            report.violations.append(Violation(
                "coset", g.id, ref.id, "gr and j must be congruent mod 1 within one sector"))
    return report


# -- maps ----------------------------------------------------------------

@dataclass
class FilteredMap:
    source: FilteredComplex
    target: FilteredComplex
    entries: dict[str, dict[str, UPoly]]
    degree: Fraction = Fraction(0)
    shift: Fraction = Fraction(0)

    def __post_init__(self):
        self.degree = q(self.degree)
        self.shift = q(self.shift)
        cleaned = {}
        for x in self.source.ids:
            col = {y: p.truncate(self.target.ucap) for y, p in self.entries.get(x, {}).items()}
            cleaned[x] = {y: p for y, p in col.items() if p}
        self.entries = cleaned

    def apply(self, chain: Mapping[str, UPoly]) -> Chain:
        acc: Chain = {}
        for x, p in chain.items():
            chain_add(acc, self.entries.get(x, {}), p, self.target.ucap)
        return acc

    def terms(self):
        for x in self.source.ids:
            col = self.entries[x]
            for y in sorted(col, key=self.target.position):
                for n in col[y]:
                    yield x, n, y

    def compose(self, first: "FilteredMap") -> "FilteredMap":
        """self o first."""
        entries = {x: self.apply(first.entries[x]) for x in first.source.ids}
        return FilteredMap(first.source, self.target, entries, first.degree + self.degree, first.shift + self.shift)

    def check(self) -> ValidationReport:
        report = ValidationReport()
        for x, n, y in self.terms():
            gx, gy = self.source.gen(x), self.target.gen(y)
            if gy.gr - 2 * n != gx.gr + self.degree:
                report.violations.append(Violation("grading", x, y, f"map term U^{n}{y} has wrong degree"))
            if gy.j - n > gx.j + self.shift:
                report.violations.append(Violation("filtration", x, y, f"map term U^{n}{y} raises j"))
        for x in self.source.ids:
            lhs = self.target.d_chain(self.entries[x])
            chain_add(lhs, self.apply(self.source.diff[x]), ONE, self.target.ucap)
            for z in lhs:
                report.violations.append(Violation("chain", x, z, "d f + f d is nonzero"))
        return report


def identity_map(c: FilteredComplex) -> FilteredMap:
    return FilteredMap(c, c, {g.id: {g.id: ONE} for g in c.basis})


# -- reduction ----------------------------------------------------------------

@dataclass
class Reduction:
    reduced: FilteredComplex
    change_of_basis: FilteredMap   # original -> reduced
    inverse: FilteredMap           # reduced -> original
    cancelled: list[tuple[str, str]]

    def __iter__(self):
        return iter((self.reduced, self.change_of_basis, self.inverse))


def _pick_cancellation(order: list[str], gens: dict[str, Generator], diff: dict[str, Chain], pos) -> tuple[str, str] | None:
    best = None
    for x in order:
        gx = gens[x]
        if best is not None and gx.gr <= gens[best[0]].gr:
            continue
        for y in sorted(diff[x], key=pos):
            if diff[x][y].has_unit() and gens[y].j == gx.j and diff[x][y].is_monomial():
                best = (x, y)
                break
    return best


def reduce(c: FilteredComplex) -> Reduction:
    """Cancel unit, j-preserving differential terms until none remain.

    Pairs are taken highest Maslov grading first, ties broken by basis order.
    """
    cap = c.ucap
    gens = {g.id: g for g in c.basis}
    order = list(c.ids)
    pos = c.position
    diff: dict[str, Chain] = {x: dict(col) for x, col in c.diff.items()}
    f_img: dict[str, Chain] = {x: {x: ONE} for x in order}          # original -> current
    g_img: dict[str, Chain] = {x: {x: ONE} for x in order}          # current -> original
    cancelled = []
    while True:
        pick = _pick_cancellation(order, gens, diff, pos)
        if pick is None:
            break
        x, y = pick
        dx = dict(diff[x])
        alpha = {w: p for w, p in dx.items() if w not in (x, y)}
        order = [w for w in order if w not in (x, y)]
        new_diff: dict[str, Chain] = {}
        for w in order:
            col = {v: p for v, p in diff[w].items() if v not in (x, y)}
            coeff = diff[w].get(y)
            if coeff:
                chain_add(col, alpha, coeff, cap)
            new_diff[w] = col
        for w in order:
            coeff = diff[w].get(y)
            if coeff:
                chain_add(g_img[w], g_img[x], coeff, cap)
        for u in f_img:
            img = f_img[u]
            if x in img or y in img:
                cy = img.get(y)
                new = {v: p for v, p in img.items() if v not in (x, y)}
                if cy:
                    chain_add(new, alpha, cy, cap)
                f_img[u] = new
        del g_img[x], g_img[y]
        diff = new_diff
        cancelled.append((x, y))
    reduced = FilteredComplex([gens[w] for w in order], diff, cap, c.name)
    return Reduction(
        reduced,
        FilteredMap(c, reduced, f_img),
        FilteredMap(reduced, c, g_img),
        cancelled,
    )


# -- windows and finite F2 complexes ---------------------------------------------

@dataclass(frozen=True)
class Window:
    """Inclusive bounds on i (= minus the U-power) and j; None means unbounded."""
    i_lo: Optional[int] = None
    i_hi: Optional[int] = None
    j_lo: Optional[Fraction] = None
    j_hi: Optional[Fraction] = None

    @classmethod
    def make(cls, i=None, j=None) -> "Window":
        """Accept a number (exact level) or a (lo, hi) pair for each coordinate."""
        def split(v):
            if v is None:
                return None, None
            if isinstance(v, tuple):
                return v
            return v, v
        i_lo, i_hi = split(i)
        j_lo, j_hi = split(j)
        return cls(i_lo, i_hi, None if j_lo is None else q(j_lo), None if j_hi is None else q(j_hi))

    def n_range(self, jx: Fraction, cap: int | None) -> tuple[Optional[int], Optional[int]]:
        """Allowed U-powers n for translates of a generator at level jx."""
        import math
        lo = None if self.i_hi is None else -self.i_hi
        hi = None if self.i_lo is None else -self.i_lo
        if self.j_hi is not None:
            b = math.ceil(jx - self.j_hi)
            lo = b if lo is None else max(lo, b)
        if self.j_lo is not None:
            b = math.floor(jx - self.j_lo)
            hi = b if hi is None else min(hi, b)
        if cap is not None:
            lo = 0 if lo is None else max(lo, 0)
            hi = cap if hi is None else min(hi, cap)
        return lo, hi

    def describe(self) -> str:
        def iv(lo, hi):
            if lo is None and hi is None:
                return "any"
            if lo == hi:
                return f"={lo}"
            return f"[{'-inf' if lo is None else lo}, {'inf' if hi is None else hi}]"
        return f"i{iv(self.i_lo, self.i_hi)} j{iv(self.j_lo, self.j_hi)}"


@dataclass
class FiniteF2Complex:
    """Finite-dimensional F2 complex; column ``cols[k]`` is a bitmask of targets."""
    labels: list[tuple[str, int]]
    gr: list[Fraction]
    j: list[Fraction]
    cols: list[int]

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self) -> dict[tuple[str, int], int]:
        return {lab: k for k, lab in enumerate(self.labels)}

    def d_squared_zero(self) -> bool:
        from . import f2
        return all(f2.apply(self.cols, c) == 0 for c in self.cols)

    def j_homogeneous(self) -> bool:
        for k, col in enumerate(self.cols):
            t = 0
            while col:
                if col & 1 and self.j[t] != self.j[k]:
                    return False
                col >>= 1
                t += 1
        return True


def subquotient(c: FilteredComplex, window: Window) -> FiniteF2Complex:
    labels: list[tuple[str, int]] = []
    for g in c.basis:
        lo, hi = window.n_range(g.j, c.ucap)
        if lo is not None and hi is not None and lo > hi:
            continue
        if lo is None or hi is None:
            raise ValueError(f"window {window.describe()} is unbounded on both coordinates "
                             f"(infinitely many translates of {g.id})")
        labels.extend((g.id, n) for n in range(lo, hi + 1))
    index = {lab: k for k, lab in enumerate(labels)}
    gr = [c.gen(x).gr - 2 * n for x, n in labels]
    jj = [c.gen(x).j - n for x, n in labels]
    cols = []
    for x, n in labels:
        col = 0
        for y, p in c.diff[x].items():
            for e in p:
                t = index.get((y, n + e))
                if t is not None:
                    col ^= 1 << t
        cols.append(col)
    return FiniteF2Complex(labels, gr, jj, cols)


# -- mapping cones -----------------------------------------------------------------

def mapping_cone(f: FilteredMap, source_levels: Mapping[str, tuple] | None = None,
                 target_levels: Mapping[str, tuple] | None = None, name: str | None = None) -> FilteredComplex:
    """Cone of f with basis source ⊔ target.

    Gradings and filtration levels are taken from the two complexes verbatim,
    or from the optional per-generator ``(gr, j)`` overrides; nothing is shifted.
    """
    bad = f.check()
    chain_bad = [v for v in bad.violations if v.kind == "chain"]
    if chain_bad:
        raise ValueError(f"map is not a chain map ({len(chain_bad)} failing columns, first at {chain_bad[0].source})")
    src_ids, tgt_ids = set(f.source.ids), set(f.target.ids)
    clash = bool(src_ids & tgt_ids)
    sname = (lambda x: f"s.{x}") if clash else (lambda x: x)
    tname = (lambda y: f"t.{y}") if clash else (lambda y: y)

    def relabel(g: Generator, new_id: str, levels):
        if levels and g.id in levels:
            gr, j = levels[g.id]
            return Generator(new_id, gr, j, g.sector)
        return replace(g, id=new_id)

    basis = [relabel(g, sname(g.id), source_levels) for g in f.source.basis]
    basis += [relabel(g, tname(g.id), target_levels) for g in f.target.basis]
    diff: dict[str, dict[str, UPoly]] = {}
    for x in f.source.ids:
        col = {sname(y): p for y, p in f.source.diff[x].items()}
        col.update({tname(y): p for y, p in f.entries[x].items()})
        diff[sname(x)] = col
    for y in f.target.ids:
        diff[tname(y)] = {tname(z): p for z, p in f.target.diff[y].items()}
    ucap = f.target.ucap if f.target.ucap is not None else f.source.ucap
    return FilteredComplex(basis, diff, ucap, name)


def direct_sum(parts: Iterable[FilteredComplex], name: str | None = None) -> FilteredComplex:
    basis, diff = [], {}
    caps = set()
    for c in parts:
        basis.extend(c.basis)
        diff.update(c.diff)
        caps.add(c.ucap)
    if len(caps) > 1:
        raise ValueError("cannot sum complexes over different truncations")
    return FilteredComplex(basis, diff, caps.pop() if caps else None, name)
