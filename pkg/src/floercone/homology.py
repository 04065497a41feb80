"""Homology of finite F2 complexes, graded rank tables, quasi-isomorphism certificates."""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from . import f2
from .complex import FilteredComplex, FilteredMap, FiniteF2Complex, Window, subquotient
from .rational import format_rational

Key = tuple[Optional[str], Optional[Fraction], Optional[Fraction]]


def _sort_key(key: Key):
    spinc, a, gr = key
    return (spinc is None, spinc or "", a is None, a or 0, gr is None, gr or 0)


class GradedTable:
    """Ranks indexed by (spin^c label, Alexander value, Maslov grading).

    Any coordinate may be None when it is not tracked.
    """

    def __init__(self, rows: dict[Key, int] | Iterable[tuple[Key, int]] = ()):
        acc: Counter = Counter()
        items = rows.items() if isinstance(rows, dict) else rows
        for key, r in items:
            if r:
                acc[key] += r
        self.rows: dict[Key, int] = {k: acc[k] for k in sorted(acc, key=_sort_key) if acc[k]}

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedTable) and self.rows == other.rows

    def __repr__(self) -> str:
        return f"GradedTable({self.rows})"

    def total(self) -> int:
        return sum(self.rows.values())

    def merged(self, other: "GradedTable") -> "GradedTable":
        return GradedTable(list(self.rows.items()) + list(other.rows.items()))

    def by_alexander(self) -> dict[Optional[Fraction], int]:
        acc: dict = defaultdict(int)
        for (_, a, _), r in self.rows.items():
            acc[a] += r
        return dict(acc)

    def by_spinc(self) -> dict[Optional[str], "GradedTable"]:
        acc: dict = defaultdict(list)
        for key, r in self.rows.items():
            acc[key[0]].append((key, r))
        return {s: GradedTable(v) for s, v in acc.items()}

    def alexander_multiset(self) -> list[Fraction]:
        out = []
        for (_, a, _), r in self.rows.items():
            out.extend([a] * r)
        return sorted(out)

    def relabel(self, spinc: Optional[str] = None, drop_gr: bool = False) -> "GradedTable":
        return GradedTable([((spinc, a, None if drop_gr else gr), r) for (_, a, gr), r in self.rows.items()])

    def as_rows(self) -> list[dict]:
        def fmt(v):
            return None if v is None else format_rational(v)
        return [{"spinc": s, "A": fmt(a), "gr": fmt(gr), "rank": r} for (s, a, gr), r in self.rows.items()]

    def to_text(self) -> str:
        lines = [f"{'spinc':<14}{'A':>8}{'gr':>8}{'rank':>6}"]
        for row in self.as_rows():
            lines.append(f"{str(row['spinc'] or '-'):<14}{str(row['A'] or '-'):>8}{str(row['gr'] or '-'):>8}{row['rank']:>6}")
        return "\n".join(lines)


def _graded_ranks(c: FiniteF2Complex, use_j: bool) -> dict[tuple, int]:
    groups: dict[tuple, list[int]] = defaultdict(list)
    for k in range(c.dim):
        groups[(c.gr[k], c.j[k] if use_j else None)].append(k)
    out_rank = {key: f2.rank([c.cols[k] for k in idx]) for key, idx in groups.items()}
    result = {}
    for (gr, j), idx in groups.items():
        incoming = out_rank.get((gr + 1, j), 0)
        h = len(idx) - out_rank[(gr, j)] - incoming
        if h:
            result[(gr, j)] = h
    return result


def homology_f2(c: FiniteF2Complex, spinc: Optional[str] = None) -> GradedTable:
    """Homology ranks per (gr, j).

    When the differential mixes j levels the j coordinate is reported as None.
    """
    use_j = c.j_homogeneous()
    ranks = _graded_ranks(c, use_j)
    return GradedTable([((spinc, j, gr), r) for (gr, j), r in ranks.items()])


def homology_rank(c: FiniteF2Complex) -> int:
    return c.dim - 2 * f2.rank(c.cols)


# -- quasi-isomorphism certificates ------------------------------------------------

def induced_matrix(f: FilteredMap, src: FiniteF2Complex, tgt: FiniteF2Complex, extra_shift: int = 0) -> list[int]:
    """F2 matrix of f between two window complexes; terms outside the target window drop."""
    tindex = tgt.index()
    cols = []
    for x, n in src.labels:
        col = 0
        for y, p in f.entries[x].items():
            for e in p:
                t = tindex.get((y, n + e + extra_shift))
                if t is not None:
                    col ^= 1 << t
        cols.append(col)
    return cols


@dataclass
class WindowCheck:
    source_window: str
    target_window: str
    source_rank: int
    target_rank: int
    map_rank: int
    chain: bool

    @property
    def iso(self) -> bool:
        return self.chain and self.source_rank == self.target_rank == self.map_rank


@dataclass
class QuasiIsoReport:
    checks: list[WindowCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.iso for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        return "; ".join(f"{c.source_window} -> {c.target_window}: "
                         f"{'iso' if c.iso else 'not iso'} ({c.source_rank},{c.target_rank},{c.map_rank})"
                         for c in self.checks)


def map_rank(cols: list[int], src: FiniteF2Complex, tgt: FiniteF2Complex) -> tuple[int, bool]:
    """Rank of the induced map on homology, and whether cols is a chain map."""
    chain = all(f2.apply(tgt.cols, cols[k]) == f2.apply(cols, src.cols[k]) for k in range(src.dim))
    images = [f2.apply(cols, z) for z in f2.kernel(src.cols)]
    boundaries = [col for col in tgt.cols if col]
    return f2.rank(boundaries + images) - f2.rank(boundaries), chain


def check_filtered_quasi_iso(f: FilteredMap, probe_windows: Iterable[tuple[Window, Window]] | None = None,
                             extra_shift: int = 0) -> QuasiIsoReport:
    """Compare homology of window pairs under f.

    This is a finite certificate: only the listed windows are examined.  The
    default probes are the j = r slices of both sides for every level present.
    """
    if probe_windows is None:
        levels = sorted({g.j for g in f.source.basis} | {g.j for g in f.target.basis})
        probe_windows = [(Window.make(i=0, j=r), Window.make(i=0, j=r)) for r in levels]
    report = QuasiIsoReport()
    for sw, tw in probe_windows:
        src, tgt = subquotient(f.source, sw), subquotient(f.target, tw)
        cols = induced_matrix(f, src, tgt, extra_shift)
        rank, chain = map_rank(cols, src, tgt)
        report.checks.append(WindowCheck(sw.describe(), tw.describe(),
                                         src.dim - 2 * f2.rank(src.cols), tgt.dim - 2 * f2.rank(tgt.cols),
                                         rank, chain))
    return report
