"""Golden checks shipped with the package (run via ``floercone selftest``)."""
from __future__ import annotations

from fractions import Fraction

from .basis import change_basis, find_filtered_isomorphism
from .cone import build_all
from .dual import dual_cfk, dual_tables, hfk_hat_all
from .heegaard import diagram_from_json, view_gradings
from .io import complex_from_json, data_path, load_example, read_json
from .rational import q
from .upoly import UPoly


def trefoil_minus_one() -> tuple[bool, str]:
    golden = read_json(data_path("golden_trefoil_m1.json"))
    table = complex_from_json(golden["table"])
    cones = build_all(load_example("trefoil"), -1)
    if len(cones) != 1:
        return False, f"{len(cones)} dual spin^c structures"
    red = dual_cfk(cones[0])
    if find_filtered_isomorphism(red, table) is None:
        return False, "reduced cone is not filtered-isomorphic to the golden table"
    exprs = {e: {} for e in golden["basis_change"]}
    for e, terms in golden["basis_change"].items():
        for y, n in terms:
            exprs[e][y] = exprs[e].get(y, UPoly()) + UPoly.monomial(n)
    new = change_basis(table, exprs)
    for e, want in golden["expected"].items():
        g = new.gen(e)
        d = {y: list(p) for y, p in new.diff[e].items()}
        if g.j != q(want["J"]) or g.gr != q(want["gr"]) or d != want["d"]:
            return False, f"{e}: J={g.j} gr={g.gr} d={d}"
    return True, "5 generators; dq = p, dr = Ut after the basis change"


def lens_spaces(ms=(1, 2, 3, 5, 7)) -> tuple[bool, str]:
    unknot = load_example("unknot")
    for m in ms:
        want = sorted((Fraction(m - 2 * l - 1, 2 * m), Fraction((2 * l - m) ** 2 - m, 4 * m)) for l in range(m))
        got = []
        for cone in build_all(unknot, m):
            t = hfk_hat_all(cone)
            if t.total() != 1:
                return False, f"m={m}, {cone.label}: rank {t.total()}"
            (_, a, gr), = t.rows
            got.append((a, gr))
        if sorted(got) != want:
            return False, f"m={m}: {sorted(got)} != {want}"
    return True, f"m in {list(ms)}"


def diagram_values() -> tuple[bool, str]:
    golden = read_json(data_path("golden_values.json"))["trefoil_p5_diagram"]
    diagram = diagram_from_json(read_json(data_path("trefoil_p5.json")))
    for view in diagram.views:
        got = dict(view_gradings(diagram, view))
        want = {g: q(v) for g, v in golden[view.name].items()}
        if got != want:
            return False, f"{view.name}: {got}"
    return True, "(alpha,beta) and (alpha,gamma) gradings"


def trefoil_plus_five() -> tuple[bool, str]:
    want = [q(v) for v in read_json(data_path("golden_values.json"))["trefoil_k5_alexander"]]
    cones = build_all(load_example("trefoil"), 5)
    tables = dual_tables(cones)
    per = [hfk_hat_all(c).total() for c in cones]
    ok = tables["hfk"].alexander_multiset() == want and per == [1] * 5
    return ok, f"A-values {[str(a) for a in tables['hfk'].alexander_multiset()]}"


CHECKS = [
    ("trefoil -1 surgery table", trefoil_minus_one),
    ("lens space oracle", lens_spaces),
    ("trefoil diagram gradings", diagram_values),
    ("trefoil +5 is Floer simple", trefoil_plus_five),
]


def run_all() -> list[tuple[str, bool, str]]:
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # report, do not crash the runner
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, ok, detail))
    return out
