"""JSON encodings: complex.v1, bundle.v1, cone.v1, table.v1.

Every rational is written as a normalized "p/q" string.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .complex import FilteredComplex, Generator, StructuralError
from .homology import GradedTable
from .knot import BundleError, Flip, KnotComplexBundle, checked
from .rational import format_rational, q
from .upoly import UPoly


class SchemaError(ValueError):
    """Document does not match the expected schema."""


def _need(doc: dict, key: str, where: str):
    if key not in doc:
        raise SchemaError(f"{where}: missing field {key!r}")
    return doc[key]


def _rational(value, where: str) -> Fraction:
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise SchemaError(f"{where}: expected a \"p/q\" string, got {value!r}")
    try:
        return q(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: {exc}") from None


def _powers(value, where: str) -> UPoly:
    if not isinstance(value, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in value):
        raise SchemaError(f"{where}: upowers must be a list of integers")
    return UPoly(value)


def _entries(rows, where: str) -> dict[str, dict[str, UPoly]]:
    out: dict[str, dict[str, UPoly]] = {}
    if not isinstance(rows, list):
        raise SchemaError(f"{where}: expected a list of entries")
    for pos, row in enumerate(rows):
        w = f"{where}[{pos}]"
        src, tgt = str(_need(row, "from", w)), str(_need(row, "to", w))
        col = out.setdefault(src, {})
        col[tgt] = col.get(tgt, UPoly()) + _powers(_need(row, "upowers", w), w)
    return out


def _entries_json(entries: dict[str, dict[str, UPoly]], order) -> list[dict]:
    rows = []
    for x in order:
        col = entries.get(x, {})
        for y in sorted(col, key=str):
            if col[y]:
                rows.append({"from": x, "to": y, "upowers": list(col[y])})
    return rows


# -- complex.v1 ----------------------------------------------------------------------

def complex_from_json(doc: dict, where: str = "complex") -> FilteredComplex:
    basis = []
    for pos, g in enumerate(_need(doc, "basis", where)):
        w = f"{where}.basis[{pos}]"
        sector = g.get("sector")
        basis.append(Generator(str(_need(g, "id", w)), _rational(_need(g, "gr", w), w + ".gr"),
                               _rational(_need(g, "j", w), w + ".j"), None if sector is None else str(sector)))
    diff = _entries(doc.get("diff", []), where + ".diff")
    ucap = doc.get("ucap")
    if ucap is not None and (not isinstance(ucap, int) or ucap < 0):
        raise SchemaError(f"{where}: ucap must be a nonnegative integer")
    return FilteredComplex(basis, diff, ucap, doc.get("name"))


def complex_to_json(c: FilteredComplex, schema: str = "complex.v1") -> dict:
    doc: dict[str, Any] = {"schema": schema}
    if c.name:
        doc["name"] = c.name
    doc["basis"] = [{"id": g.id, "gr": format_rational(g.gr), "j": format_rational(g.j), "sector": g.sector}
                    for g in c.basis]
    doc["diff"] = _entries_json(c.diff, c.ids)
    if c.ucap is not None:
        doc["ucap"] = c.ucap
    return doc


# -- bundle.v1 ----------------------------------------------------------------------

def bundle_from_json(doc: dict, validate: bool = True) -> KnotComplexBundle:
    if doc.get("schema", "bundle.v1") != "bundle.v1":
        raise SchemaError(f"expected schema bundle.v1, got {doc.get('schema')!r}")
    d = _need(doc, "d", "bundle")
    if not isinstance(d, int) or d < 1:
        raise SchemaError("bundle.d must be a positive integer")
    k = doc.get("k")
    if k is not None and (not isinstance(k, int) or isinstance(k, bool)):
        raise SchemaError("bundle.k must be an integer")
    if k == 0:
        raise BundleError("framing k = 0 is not allowed: the surgery formula needs a nonzero framing")
    sectors, offsets = [], []
    for pos, sdoc in enumerate(_need(doc, "sectors", "bundle")):
        w = f"bundle.sectors[{pos}]"
        sec = complex_from_json(sdoc, w)
        sec = FilteredComplex([Generator(g.id, g.gr, g.j, g.sector if g.sector is not None else str(pos))
                               for g in sec.basis], sec.diff, sec.ucap, sec.name)
        sectors.append(sec)
        offsets.append(_rational(sdoc.get("A_offset", "0/1"), w + ".A_offset"))
    if len(sectors) != d:
        raise BundleError(f"bundle declares d={d} but lists {len(sectors)} sectors")
    flips: list = [None] * d
    for pos, fdoc in enumerate(doc.get("flips", [])):
        w = f"bundle.flips[{pos}]"
        src = _need(fdoc, "from_sector", w)
        if not isinstance(src, int) or not 0 <= src < d:
            raise SchemaError(f"{w}: from_sector out of range")
        to = fdoc.get("to_sector", (src + 1) % d)
        flips[src] = Flip(src, to, _rational(_need(fdoc, "anchor_s", w), w + ".anchor_s"),
                          _entries(_need(fdoc, "entries", w), w + ".entries"))
    b = KnotComplexBundle(d, sectors, flips, k, bool(doc.get("lspace", False)), bool(doc.get("graded", True)),
                          str(doc.get("name", "knot")), offsets)
    return checked(b) if validate else b


def bundle_to_json(b: KnotComplexBundle) -> dict:
    doc: dict[str, Any] = {"schema": "bundle.v1", "name": b.name, "d": b.d}
    if b.k is not None:
        doc["k"] = b.k
    doc["lspace"] = b.lspace
    if not b.graded:
        doc["graded"] = False
    doc["sectors"] = []
    for sec, off in zip(b.sectors, b.offsets):
        sdoc = complex_to_json(sec)
        del sdoc["schema"]
        sdoc["A_offset"] = format_rational(off)
        doc["sectors"].append(sdoc)
    doc["flips"] = [{"from_sector": fl.source, "anchor_s": format_rational(fl.anchor),
                     "entries": _entries_json(fl.entries, b.sectors[fl.source].ids)}
                    for fl in b.flips if fl is not None]
    return doc


# -- cone.v1 / table.v1 ----------------------------------------------------------------

def cone_to_json(cone) -> dict:
    doc = complex_to_json(cone.complex, "cone.v1")
    doc["spinc"] = cone.label
    doc["k"] = cone.k
    doc["d"] = cone.d
    doc["a"], doc["b"] = cone.a, cone.b
    doc["degenerate"] = cone.degenerate
    doc["summands"] = [{"id": cid, "tower": s.tower, "l": s.xi.l, "s_l": format_rational(s.xi.s),
                        "sector": s.xi.sector, "source_id": s.source_id, "translate": s.translate}
                       for cid, s in cone.summands.items()]
    if not cone.bundle.graded:
        for g in doc["basis"]:
            g["gr"] = None
    return doc


def table_to_json(t: GradedTable, kind: str | None = None) -> dict:
    doc: dict[str, Any] = {"schema": "table.v1"}
    if kind:
        doc["kind"] = kind
    doc["rows"] = t.as_rows()
    return doc


def table_from_json(doc: dict) -> GradedTable:
    rows = []
    for pos, r in enumerate(_need(doc, "rows", "table")):
        w = f"table.rows[{pos}]"
        a, gr = r.get("A"), r.get("gr")
        rows.append(((r.get("spinc"), None if a is None else _rational(a, w), None if gr is None else _rational(gr, w)),
                     int(_need(r, "rank", w))))
    return GradedTable(rows)


# -- files ------------------------------------------------------------------------------

def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None


def _flat(value) -> bool:
    if isinstance(value, dict):
        return all(not isinstance(v, (dict, list)) or (isinstance(v, list) and all(not isinstance(e, (dict, list)) for e in v))
                   for v in value.values())
    if isinstance(value, list):
        return all(not isinstance(e, (dict, list)) for e in value)
    return True


def dumps(doc, indent: int = 0) -> str:
    """Indented JSON with flat objects and scalar lists kept on one line."""
    if _flat(doc) or not isinstance(doc, (dict, list)):
        return json.dumps(doc)
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(doc, list):
        body = ",\n".join(inner + dumps(v, indent + 2) for v in doc)
        return "[\n" + body + "\n" + pad + "]"
    body = ",\n".join(f"{inner}{json.dumps(k)}: {dumps(v, indent + 2)}" for k, v in doc.items())
    return "{\n" + body + "\n" + pad + "}"


def data_path(name: str) -> Path:
    return Path(str(resources.files("floercone") / "data" / name))


def load_example(name: str) -> KnotComplexBundle:
    """Bundled example bundles: trefoil, unknot, figure_eight, dual_trefoil_m1."""
    return bundle_from_json(read_json(data_path(f"{name}.json")))


def load_bundle(doc_or_path) -> KnotComplexBundle:
    doc = doc_or_path if isinstance(doc_or_path, dict) else read_json(doc_or_path)
    try:
        return bundle_from_json(doc)
    except StructuralError as exc:
        raise SchemaError(str(exc)) from None
