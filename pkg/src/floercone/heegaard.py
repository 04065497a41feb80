"""Gradings read directly off a doubly-pointed Heegaard diagram.

The diagram is purely combinatorial: regions with Euler measures,
intersection points with their four corner regions, and basepoints with the
two regions on either side of the longitude arc through them.  Domains are
integer multiplicities on regions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .rational import format_rational, q


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    id: str
    corners: tuple[str, str, str, str]
    alpha: str
    beta: str


@dataclass(frozen=True)
class Basepoint:
    id: str
    sides: tuple[str, str]


@dataclass
class Domain:
    multiplicity: dict[str, int]
    lambda_coefficient: int = 0

    def __add__(self, other: "Domain") -> "Domain":
        keys = set(self.multiplicity) | set(other.multiplicity)
        return Domain({r: self.multiplicity.get(r, 0) + other.multiplicity.get(r, 0) for r in keys},
                      self.lambda_coefficient + other.lambda_coefficient)

    def scaled(self, c: int) -> "Domain":
        return Domain({r: c * m for r, m in self.multiplicity.items()}, c * self.lambda_coefficient)

    def m(self, region: str) -> int:
        return self.multiplicity.get(region, 0)


@dataclass
class View:
    """One choice of attaching curves and basepoints on the shared surface."""
    name: str
    alphas: tuple[str, ...]
    betas: tuple[str, ...]
    w: str
    z: str
    generators: list[tuple[str, ...]]
    domain: str


@dataclass
class HeegaardDiagram:
    name: str
    genus: int
    euler: dict[str, Fraction]
    points: dict[str, Point]
    basepoints: dict[str, Basepoint]
    domains: dict[str, Domain]
    views: list[View] = field(default_factory=list)

    def surface(self) -> Domain:
        """The whole surface with multiplicity one."""
        return Domain({r: 1 for r in self.euler})

    def view(self, name: str) -> View:
        for v in self.views:
            if v.name == name:
                return v
        raise DiagramError(f"no view named {name!r}")


def region_euler(entry: Mapping) -> Fraction:
    if "euler" in entry:
        return q(entry["euler"])
    if entry.get("disk") and "corners" in entry:
        return 1 - Fraction(int(entry["corners"]), 4)
    raise DiagramError(f"region {entry.get('id')!r} needs an explicit Euler measure or a disk corner count")


def diagram_from_json(doc: Mapping) -> HeegaardDiagram:
    if doc.get("schema", "diagram.v1") != "diagram.v1":
        raise DiagramError(f"expected schema diagram.v1, got {doc.get('schema')!r}")
    try:
        euler = {str(r["id"]): region_euler(r) for r in doc["regions"]}
        points = {}
        for p in doc["points"]:
            corners = tuple(str(c) for c in p["corners"])
            if len(corners) != 4:
                raise DiagramError(f"point {p['id']!r} must list exactly 4 corner regions")
            points[str(p["id"])] = Point(str(p["id"]), corners, str(p["alpha"]), str(p["beta"]))
        basepoints = {}
        for b in doc["basepoints"]:
            sides = tuple(str(s) for s in b["sides"])
            if len(sides) != 2:
                raise DiagramError(f"basepoint {b['id']!r} must list exactly 2 side regions")
            basepoints[str(b["id"])] = Basepoint(str(b["id"]), sides)
        domains = {str(name): Domain({str(r): int(m) for r, m in d["multiplicity"].items()},
                                     int(d.get("lambda_coefficient", 0)))
                   for name, d in doc.get("domains", {}).items()}
        views = [View(str(v["name"]), tuple(v["alphas"]), tuple(v["betas"]), str(v["w"]), str(v["z"]),
                      [tuple(str(x) for x in g) for g in v["generators"]], str(v["domain"]))
                 for v in doc.get("views", [])]
    except KeyError as exc:
        raise DiagramError(f"diagram is missing field {exc}") from None
    diagram = HeegaardDiagram(str(doc.get("name", "diagram")), int(doc.get("genus", 0)), euler, points,
                              basepoints, domains, views)
    check_diagram(diagram)
    return diagram


def check_diagram(diagram: HeegaardDiagram) -> None:
    for p in diagram.points.values():
        for r in p.corners:
            if r not in diagram.euler:
                raise DiagramError(f"point {p.id} has unknown corner region {r!r}")
    for b in diagram.basepoints.values():
        for r in b.sides:
            if r not in diagram.euler:
                raise DiagramError(f"basepoint {b.id} has unknown side region {r!r}")
    for name, dom in diagram.domains.items():
        for r in dom.multiplicity:
            if r not in diagram.euler:
                raise DiagramError(f"domain {name} has unknown region {r!r}")
    for v in diagram.views:
        if v.domain not in diagram.domains:
            raise DiagramError(f"view {v.name} refers to unknown domain {v.domain!r}")
        for bp in (v.w, v.z):
            if bp not in diagram.basepoints:
                raise DiagramError(f"view {v.name} refers to unknown basepoint {bp!r}")
        for gen in v.generators:
            check_generator(diagram, v, gen)


def check_generator(diagram: HeegaardDiagram, view: View, gen: Sequence[str]) -> None:
    pts = []
    for pid in gen:
        if pid not in diagram.points:
            raise DiagramError(f"generator {''.join(gen)} uses unknown point {pid!r}")
        pts.append(diagram.points[pid])
    alph = [p.alpha for p in pts]
    bet = [p.beta for p in pts]
    if sorted(alph) != sorted(view.alphas) or sorted(bet) != sorted(view.betas):
        raise DiagramError(f"generator {''.join(gen)} must meet each alpha and beta curve of view "
                           f"{view.name} exactly once")


# -- measures ----------------------------------------------------------------------

def euler_measure(diagram: HeegaardDiagram, domain: Domain) -> Fraction:
    return sum((m * diagram.euler[r] for r, m in domain.multiplicity.items()), Fraction(0))


def point_measure(diagram: HeegaardDiagram, domain: Domain, point: str) -> Fraction:
    return Fraction(sum(domain.m(r) for r in diagram.points[point].corners), 4)


def basepoint_measure(diagram: HeegaardDiagram, domain: Domain, basepoint: str) -> Fraction:
    return Fraction(sum(domain.m(r) for r in diagram.basepoints[basepoint].sides), 2)


def generator_measure(diagram: HeegaardDiagram, domain: Domain, gen: Sequence[str]) -> Fraction:
    return sum((point_measure(diagram, domain, p) for p in gen), Fraction(0))


def alexander_grading(diagram: HeegaardDiagram, domain: Domain, gen: Sequence[str], w: str, z: str) -> Fraction:
    """(chi(P) + 2 n_x(P) - n_z(P) - n_w(P)) / (2 * lambda coefficient of P)."""
    c = domain.lambda_coefficient
    if c == 0:
        raise DiagramError("domain has zero longitude coefficient")
    value = (euler_measure(diagram, domain) + 2 * generator_measure(diagram, domain, gen)
             - basepoint_measure(diagram, domain, z) - basepoint_measure(diagram, domain, w))
    return value / (2 * c)


def chern_evaluation(diagram: HeegaardDiagram, domain: Domain, gen: Sequence[str], w: str) -> int:
    """<c_1(s_w(x)), [P]> for a periodic domain P."""
    value = euler_measure(diagram, domain) + 2 * generator_measure(diagram, domain, gen) \
        - 2 * basepoint_measure(diagram, domain, w)
    if value.denominator != 1:
        raise DiagramError(f"Chern evaluation {format_rational(value)} is not an integer; "
                           "the domain is not periodic")
    return value.numerator


def view_gradings(diagram: HeegaardDiagram, view: View) -> list[tuple[str, Fraction]]:
    dom = diagram.domains[view.domain]
    return [("".join(g), alexander_grading(diagram, dom, g, view.w, view.z)) for g in view.generators]


@dataclass
class RelativeCheck:
    x: str
    y: str
    difference: Fraction
    predicted: Fraction

    @property
    def consistent(self) -> bool:
        return self.difference == self.predicted

    def __bool__(self) -> bool:
        return self.consistent


def relative_check(diagram: HeegaardDiagram, view: View, domain: Domain, x: Sequence[str], y: Sequence[str],
                   n: int = 1) -> RelativeCheck:
    """A(x) - A(y) against (n_z(D) - n_w(D)) / n for a domain D from x to y."""
    P = diagram.domains[view.domain]
    diff = alexander_grading(diagram, P, x, view.w, view.z) - alexander_grading(diagram, P, y, view.w, view.z)
    predicted = (basepoint_measure(diagram, domain, view.z) - basepoint_measure(diagram, domain, view.w)) / n
    return RelativeCheck("".join(x), "".join(y), diff, predicted)


def maslov_consistency(gr_w, gr_z, alexander) -> bool:
    """gr_w - gr_z = 2A."""
    return q(gr_w) - q(gr_z) == 2 * q(alexander)
