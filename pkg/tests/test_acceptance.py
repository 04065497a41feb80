"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line
that is printed in the terminal summary."""
from __future__ import annotations

import json
import random
import time
from collections import Counter
from fractions import Fraction

import pytest

from floercone.basis import change_basis, find_filtered_isomorphism
from floercone.cli import run
from floercone.complex import FilteredComplex, Generator
from floercone.cone import build_all
from floercone.dual import dual_cfk, dual_tables, hf_hat, hfk_hat_all
from floercone.io import complex_from_json, data_path, load_example, read_json
from floercone.knot import check_alexander_symmetry
from floercone.rational import q
from floercone.rational_surgery import one_over_n_surgery, ratl_filtration_check
from floercone.upoly import UPoly

from conftest import EXAMPLES, FRAMINGS

RESULTS: list[str] = []


def record(n: int, ok: bool, what: str, tol: str, seconds: float | None = None, limit: float | None = None):
    timing = ""
    if seconds is not None:
        timing = f", {seconds:.3f} s" + (f" (limit {limit:g} s)" if limit else "")
        ok = ok and (limit is None or seconds < limit)
    RESULTS.append(f"{'PASS' if ok else 'FAIL'}  criterion {n}: {what} [tolerance: {tol}{timing}]")
    return ok


def cli_json(capsys, *argv):
    assert run(list(argv)) == 0
    return json.loads(capsys.readouterr().out)


def triples(c):
    return Counter((0, g.j, g.gr) for g in c.basis)


# 1 -----------------------------------------------------------------------------------

def test_criterion_1_trefoil_minus_one(capsys):
    t0 = time.perf_counter()
    doc = cli_json(capsys, "surgery", "--bundle", "trefoil", "--k", "-1")
    red = complex_from_json(doc["cones"][0]["reduced"])
    golden = read_json(data_path("golden_trefoil_m1.json"))
    table = complex_from_json(golden["table"])
    iso = find_filtered_isomorphism(FilteredComplex([Generator(g.id, g.gr, g.j) for g in red.basis], red.diff),
                                    table)
    exprs = {e: {} for e in golden["basis_change"]}
    for e, terms in golden["basis_change"].items():
        for y, n in terms:
            exprs[e][y] = exprs[e].get(y, UPoly()) + UPoly.monomial(n)
    new = change_basis(table, exprs)
    seconds = time.perf_counter() - t0
    values = {g.id: (0, g.j, g.gr) for g in new.basis}
    want = {e: (0, q(v["J"]), q(v["gr"])) for e, v in golden["expected"].items()}
    ok = (len(red) == 5 and iso is not None and values == want
          and new.diff["q"] == {"p": UPoly([0])} and new.diff["r"] == {"t": UPoly([1])}
          and not any(new.diff[x] for x in "pst"))
    assert record(1, ok, "trefoil k=-1 reduced cone = golden table after basis change (dq = p, dr = Ut)",
                  "exact", seconds, 1.0)


# 2 -----------------------------------------------------------------------------------

def test_criterion_2_lens_oracle(capsys):
    t0 = time.perf_counter()
    ok = True
    for m in (1, 2, 3, 5, 7):
        rows = cli_json(capsys, "hfk", "--bundle", "unknot", "--k", str(m))["rows"]
        per_spinc = Counter(r["spinc"] for r in rows for _ in range(r["rank"]))
        got = sorted((q(r["A"]), q(r["gr"])) for r in rows)
        want = sorted((Fraction(m - 2 * l - 1, 2 * m), Fraction((2 * l - m) ** 2 - m, 4 * m)) for l in range(m))
        ok &= len(per_spinc) == m and set(per_spinc.values()) == {1} and got == want
    seconds = time.perf_counter() - t0
    assert record(2, ok, "unknot k=m, m in {1,2,3,5,7}: rank 1 per spin^c, lens A and gr", "exact rationals",
                  seconds, 1.0)


# 3 -----------------------------------------------------------------------------------

def test_criterion_3_heegaard(capsys):
    t0 = time.perf_counter()
    rows = cli_json(capsys, "grade-diagram", "--diagram", "trefoil_p5")["rows"]
    seconds = time.perf_counter() - t0
    ab = {r["generator"]: q(r["A"]) for r in rows if r["spinc"] == "alpha-beta"}
    ag = sorted(q(r["A"]) for r in rows if r["spinc"] == "alpha-gamma")
    ok = ab == {"ax": -1, "bx": 0, "cx": 1} and ag == [Fraction(v) for v in
                                                       ("-3/5", "-1/5", "0", "0", "0", "1/5", "3/5")]
    assert record(3, ok, "diagram gradings -1,0,1 and {-3/5,-1/5,0,0,0,1/5,3/5}", "exact", seconds, 1.0)


# 4 -----------------------------------------------------------------------------------

def test_criterion_4_floer_simple():
    cones = build_all(load_example("trefoil"), 5)
    tables = [hfk_hat_all(c) for c in cones]
    total = sum(t.total() for t in tables)
    alex = sorted(a for t in tables for a in t.alexander_multiset())
    ok = total == 5 and all(t.total() == 1 for t in tables) and alex == sorted(-a for a in alex)
    assert record(4, ok, f"trefoil k=+5: total rank {total}, one class per spin^c, A = {[str(a) for a in alex]}",
                  "exact")


# 5 -----------------------------------------------------------------------------------

def test_criterion_5_truncation_stability():
    t0 = time.perf_counter()
    bad = []
    for name in EXAMPLES:
        b = load_example(name)
        for k in FRAMINGS:
            base, wide = build_all(b, k), build_all(b, k, enlarge=2)
            for c0, c2 in zip(base, wide):
                if triples(dual_cfk(c0)) != triples(dual_cfk(c2)):
                    bad.append(f"{name} k={k} {c0.label} basis")
            t_base, t_wide = dual_tables(base), dual_tables(wide)
            for key in t_base:
                if t_base[key] != t_wide[key]:
                    bad.append(f"{name} k={k} {key}")
    seconds = time.perf_counter() - t0
    assert record(5, not bad, f"[a,b] enlarged by 2: reduced (I,J,gr) and tables unchanged "
                              f"({len(EXAMPLES)} bundles x k in {FRAMINGS}){' ' + str(bad) if bad else ''}",
                  "exact", seconds, 10.0)


# 6 -----------------------------------------------------------------------------------

def test_criterion_6_symmetry():
    bad = []
    count = 0
    for name in EXAMPLES:
        b = load_example(name)
        for k in FRAMINGS + [-3, 3]:
            cones = build_all(b, k)
            count += len(cones)
            if not check_alexander_symmetry([dual_cfk(c) for c in cones]):
                bad.append(f"{name} k={k}")
        for n in (2, 3):
            if name != "dual_trefoil_m1":
                count += 1
                if not check_alexander_symmetry([dual_cfk(one_over_n_surgery(b, n))]):
                    bad.append(f"{name} 1/{n}")
    assert record(6, not bad, f"A -> -A symmetry of every dual_cfk output ({count} cones)"
                              f"{' ' + str(bad) if bad else ''}", "exact")


# 7 -----------------------------------------------------------------------------------

def test_criterion_7_rational():
    bad = []
    for name in ("trefoil", "unknot"):
        b = load_example(name)
        (integral,) = build_all(b, 1)
        if triples(dual_cfk(one_over_n_surgery(b, 1))) != triples(dual_cfk(integral)):
            bad.append(f"{name} n=1 vs k=1")
        for n in (1, 2, 3, 5):
            report = ratl_filtration_check(one_over_n_surgery(b, n))
            if not report.ok:
                bad.append(f"{name} n={n}: {report.mismatches[:2]}")
    assert record(7, not bad, "1/1 surgery = k=+1 surgery; closed-form I,J check for n in {1,2,3,5}"
                              f"{' ' + str(bad) if bad else ''}", "exact")


# 8 -----------------------------------------------------------------------------------

CAP = 3          # F2[U]/U^4


def _mul(a: frozenset, b: frozenset) -> frozenset:
    out = set()
    for x in a:
        for y in b:
            if x + y <= CAP:
                out ^= {x + y}
    return frozenset(out)


def _inverse(unit: frozenset) -> frozenset:
    # unit = 1 + p with p divisible by U, so unit^-1 = 1 + p + p^2 + p^3
    p = frozenset(unit - {0})
    out, power = frozenset({0}), frozenset({0})
    for _ in range(CAP):
        power = _mul(power, p)
        out = out ^ power
    return out


def naive_reduce(gens: dict, diff: dict, rng: random.Random):
    """Cancel one random unit, j-preserving term at a time."""
    gens = dict(gens)
    diff = {x: {y: frozenset(e for e in p if e <= CAP) for y, p in col.items()} for x, col in diff.items()}
    diff = {x: {y: p for y, p in col.items() if p} for x, col in diff.items()}
    while True:
        pairs = [(x, y) for x in diff for y, p in diff[x].items() if 0 in p and gens[x][0] == gens[y][0]]
        if not pairs:
            return gens, diff
        x, y = rng.choice(sorted(pairs))
        inv = _inverse(diff[x][y])
        dx = {w: p for w, p in diff[x].items() if w != y}
        for w in list(diff):
            b = diff[w].get(y)
            if w in (x, y) or not b:
                continue
            coeff = _mul(b, inv)
            col = {v: p for v, p in diff[w].items() if v != y}
            for v, p in dx.items():
                col[v] = col.get(v, frozenset()) ^ _mul(coeff, p)
            diff[w] = {v: p for v, p in col.items() if p and v != x}
        for w in (x, y):
            del diff[w], gens[w]
        for w in diff:
            diff[w].pop(x, None)
            diff[w].pop(y, None)


def f2_rank(vectors: list[int]) -> int:
    pivots = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def naive_tables(label: str, gens: dict, diff: dict):
    # associated graded at i = 0: after full reduction no j-preserving unit terms survive
    hfk = Counter()
    for x, (j, gr) in gens.items():
        assert not any(0 in p and gens[y][0] == j for y, p in diff[x].items())
        hfk[(label, j, gr)] += 1
    # U = 0 slice, all j
    ids = sorted(gens)
    pos = {x: k for k, x in enumerate(ids)}
    by_gr = {}
    for x in ids:
        by_gr.setdefault(gens[x][1], []).append(x)
    out_rank = {gr: f2_rank([sum(1 << pos[y] for y, p in diff[x].items() if 0 in p) for x in xs])
                for gr, xs in by_gr.items()}
    hf = Counter()
    for gr, xs in by_gr.items():
        h = len(xs) - out_rank[gr] - out_rank.get(gr + 1, 0)
        if h:
            hf[(label, None, gr)] = h
    return dict(hfk), dict(hf)


def test_criterion_8_naive_reducer():
    (cone,) = build_all(load_example("trefoil"), 1)
    want_hfk, want_hf = hfk_hat_all(cone).rows, hf_hat(cone).rows
    gens = {g.id: (g.j, g.gr) for g in cone.complex.basis}
    diff = {x: {y: frozenset(p.exponents) for y, p in col.items()} for x, col in cone.complex.diff.items()}
    mismatched = []
    for seed in range(100):
        g, d = naive_reduce(gens, diff, random.Random(seed))
        hfk, hf = naive_tables(cone.label, g, d)
        if hfk != want_hfk or hf != want_hf:
            mismatched.append(seed)
    assert record(8, not mismatched, f"trefoil k=+1: random-order reducer over F2[U]/U^4 agrees on 100 seeds"
                                     f"{' (seeds ' + str(mismatched) + ' differ)' if mismatched else ''}",
                  "exact, all seeds")
