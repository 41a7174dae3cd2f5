"""Metrized complexes: assembly, hybrid divisors, and divisors of hybrid functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import (
    NonIntegerSlope,
    PlaceOffComplex,
    SlotBijectionBroken,
    UnknownPoint,
)
from .graphs import GraphPlace, MetricGraph, Refinement, refine, vertex_place
from .rationals import rat
from .surfaces import (
    Slot,
    SurfaceDivisor,
    SurfacePointRef,
    VertexSurface,
    aj_surface,
    genus_zero_surface,
    reduce_mod_lattice,
)
from .tropical import PLFunction, TropicalDivisor


@dataclass(frozen=True)
class HybridPlace:
    """A point of the geometric realization of a metrized complex.

    One of three shapes: a named surface point (vertex+name), a marked point
    (vertex+slot), or an edge-interior point (edge+offset).
    """

    vertex: Optional[str] = None
    name: Optional[str] = None
    slot: Optional[Slot] = None
    edge: Optional[str] = None
    offset: Optional[Fraction] = None

    @property
    def kind(self) -> str:
        if self.edge is not None:
            return "edge"
        if self.slot is not None:
            return "marked"
        return "surface"

    def __repr__(self) -> str:
        if self.kind == "edge":
            return f"HPlace({self.edge}@{self.offset})"
        if self.kind == "marked":
            return f"HPlace({self.vertex}:{self.slot[0]}:{self.slot[1]})"
        return f"HPlace({self.vertex}:{self.name})"


def surface_point(v: str, name: str) -> HybridPlace:
    return HybridPlace(vertex=v, name=name)


def marked_point(v: str, slot: Slot) -> HybridPlace:
    return HybridPlace(vertex=v, slot=slot)


class MCRS:
    """A metric graph with a vertex surface and slot bijection at every vertex."""

    def __init__(self, graph: MetricGraph, surfaces: Mapping[str, VertexSurface]):
        self.graph = graph
        self.surfaces: Dict[str, VertexSurface] = dict(surfaces)
        for v in graph.vertices:
            if v not in self.surfaces:
                raise SlotBijectionBroken(f"vertex {v} has no surface")
            s = self.surfaces[v]
            s.validate()
            expected = set(graph.incidence[v])
            got = set(s.marked)
            if expected != got:
                raise SlotBijectionBroken(
                    f"vertex {v}: marked slots {sorted(got)} != incident slots "
                    f"{sorted(expected)}"
                )
        self.genus = graph.genus() + sum(s.genus for s in self.surfaces.values())

    def edge_point(self, edge_id: str, offset) -> HybridPlace:
        """Edge place, normalized so endpoints become marked points."""
        offset = rat(offset)
        p = self.graph.place(edge_id, offset)
        if p.is_vertex:
            e = self.graph.edge_map[edge_id]
            end = "tail" if offset == 0 else "head"
            v = e.tail if end == "tail" else e.head
            return marked_point(v, (edge_id, end))
        return HybridPlace(edge=edge_id, offset=offset)

    def check_place(self, p: HybridPlace) -> None:
        if p.kind == "edge":
            self.graph.check_place(GraphPlace(edge=p.edge, offset=p.offset))
            return
        if p.vertex not in self.surfaces:
            raise PlaceOffComplex(f"unknown vertex {p.vertex}")
        s = self.surfaces[p.vertex]
        if p.kind == "marked":
            if p.slot not in s.marked:
                raise PlaceOffComplex(f"unknown slot {p.slot} at {p.vertex}")
        else:
            if p.name not in s.points:
                raise PlaceOffComplex(f"unknown point {p.name!r} at {p.vertex}")

    def graph_image(self, p: HybridPlace) -> GraphPlace:
        """Image of a hybrid place under collapsing every surface to its vertex."""
        if p.kind == "edge":
            return GraphPlace(edge=p.edge, offset=p.offset)
        return vertex_place(p.vertex)

    def point_ref(self, p: HybridPlace) -> SurfacePointRef:
        if p.kind == "edge":
            raise PlaceOffComplex("edge place has no surface point reference")
        return SurfacePointRef(vertex=p.vertex, name=p.name, slot=p.slot)

    def basepoint_place(self, v: str) -> Optional[HybridPlace]:
        name = self.surfaces[v].basepoint_name()
        if name is None:
            return None
        return surface_point(v, name)


def build_mcrs(graph: MetricGraph, surfaces: Mapping[str, VertexSurface]) -> MCRS:
    return MCRS(graph, surfaces)


@dataclass(frozen=True)
class HybridDivisor:
    """Finite integer combination of places on a metrized complex."""

    mcrs: MCRS
    coeffs: Mapping[HybridPlace, int]

    def __post_init__(self):
        clean = {p: c for p, c in self.coeffs.items() if c != 0}
        for p in clean:
            self.mcrs.check_place(p)
        object.__setattr__(self, "coeffs", clean)

    @property
    def degree(self) -> int:
        return sum(self.coeffs.values())

    def __add__(self, other: "HybridDivisor") -> "HybridDivisor":
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, 0) + c
        return HybridDivisor(self.mcrs, out)

    def __sub__(self, other: "HybridDivisor") -> "HybridDivisor":
        return self + other.scale(-1)

    def scale(self, n: int) -> "HybridDivisor":
        return HybridDivisor(self.mcrs, {p: n * c for p, c in self.coeffs.items()})

    def vertex_part(self, v: str) -> SurfaceDivisor:
        coeffs = {
            self.mcrs.point_ref(p): c
            for p, c in self.coeffs.items()
            if p.kind != "edge" and p.vertex == v
        }
        return SurfaceDivisor(v, coeffs)

    def is_vertex_supported(self) -> bool:
        return all(p.kind != "edge" for p in self.coeffs)


def gamma_part(m: MCRS, divisor: HybridDivisor) -> TropicalDivisor:
    """Project to the graph: edge coefficients kept, surfaces collapse to vertices."""
    coeffs: Dict[GraphPlace, int] = {}
    for p, c in divisor.coeffs.items():
        q = m.graph_image(p)
        coeffs[q] = coeffs.get(q, 0) + c
    return TropicalDivisor(m.graph, coeffs)


@dataclass(frozen=True)
class HybridFunction:
    """A graph part plus, per vertex, the divisor class of the surface part.

    Surface parts are stored only through their divisors together with a
    principality certificate (degree zero and lattice-zero Abel-Jacobi image);
    no value data is carried.
    """

    f_gamma: PLFunction
    vertex_classes: Mapping[str, SurfaceDivisor] = field(default_factory=dict)

    def validate(self, m: MCRS) -> None:
        if not self.f_gamma.has_integer_slopes():
            raise NonIntegerSlope("graph part is not rational")
        for v, d in self.vertex_classes.items():
            if v not in m.surfaces:
                raise UnknownPoint(f"vertex class on unknown vertex {v}")
            if d.degree != 0:
                raise UnknownPoint(f"vertex class at {v} has degree {d.degree}")
            s = m.surfaces[v]
            if not reduce_mod_lattice(s, aj_surface(s, d)).in_lattice:
                raise UnknownPoint(f"vertex class at {v} is not principal")


def outward_slope(f: PLFunction, slot: Slot) -> Fraction:
    """Slope of the graph part leaving a vertex through one edge slot."""
    eid, end = slot
    segs = f.refinement.edge_segments[eid]
    if end == "tail":
        return f.slope(segs[0][0])
    return -f.slope(segs[-1][0])


def divisor_of_hybrid(m: MCRS, f: HybridFunction) -> HybridDivisor:
    """Divisor of a hybrid function via the order formula at marked points."""
    f.validate(m)
    coeffs: Dict[HybridPlace, int] = {}

    def bump(p: HybridPlace, c: int) -> None:
        if c:
            coeffs[p] = coeffs.get(p, 0) + c
            if coeffs[p] == 0:
                del coeffs[p]

    for v, cls in f.vertex_classes.items():
        for ref, c in cls.coeffs.items():
            if ref.slot is not None:
                bump(marked_point(v, ref.slot), c)
            else:
                bump(surface_point(v, ref.name), c)

    fg = f.f_gamma
    for mv in fg.model.vertices:
        base = fg.refinement.to_base(vertex_place(mv))
        if base.is_vertex:
            for slot in m.graph.incidence[base.vertex]:
                s = outward_slope(fg, slot)
                if s.denominator != 1:
                    raise NonIntegerSlope(f"non-integer slope at slot {slot}")
                bump(marked_point(base.vertex, slot), int(s))
        else:
            order = Fraction(0)
            for eid, end in fg.model.incidence[mv]:
                s = fg.slope(eid)
                order += s if end == "tail" else -s
            if order.denominator != 1:
                raise NonIntegerSlope(f"non-integer order at {base}")
            bump(HybridPlace(edge=base.edge, offset=base.offset), int(order))

    div = HybridDivisor(m, coeffs)
    assert div.degree == 0
    return div


# ---------------------------------------------------------------------------
# refinement of a whole complex


@dataclass
class ComplexRefinement:
    base: MCRS
    refined: MCRS
    graph_refinement: Refinement

    def map_place(self, p: HybridPlace) -> HybridPlace:
        """Image of a base place in the refined complex."""
        ref = self.graph_refinement
        if p.kind == "edge":
            q = ref.to_refined(GraphPlace(edge=p.edge, offset=p.offset))
            if q.is_vertex:
                # exactly at a cut: take the canonical slot of the new sphere
                slot = sorted(self.refined.graph.incidence[q.vertex])[0]
                return marked_point(q.vertex, slot)
            return HybridPlace(edge=q.edge, offset=q.offset)
        if p.kind == "marked":
            eid, end = p.slot
            segs = ref.edge_segments[eid]
            new_slot = (segs[0][0], "tail") if end == "tail" else (segs[-1][0], "head")
            return marked_point(p.vertex, new_slot)
        return p

    def map_divisor(self, d: HybridDivisor) -> HybridDivisor:
        return HybridDivisor(
            self.refined, {self.map_place(p): c for p, c in d.coeffs.items()}
        )


def refine_complex(m: MCRS, places: Iterable[GraphPlace]) -> ComplexRefinement:
    """Insert genus-0 vertices at the requested edge-interior places."""
    new_graph, ref = refine(m.graph, places)
    surfaces: Dict[str, VertexSurface] = {}
    for v in m.graph.vertices:
        s = m.surfaces[v]
        marked = {}
        for (eid, end), mu in s.marked.items():
            segs = ref.edge_segments[eid]
            new_slot = (segs[0][0], "tail") if end == "tail" else (segs[-1][0], "head")
            marked[new_slot] = mu
        surfaces[v] = VertexSurface(s.genus, s.lattice, marked, s.points)
    for v in new_graph.vertices:
        if v not in surfaces:
            surfaces[v] = genus_zero_surface(list(new_graph.incidence[v]))
    refined = MCRS(new_graph, surfaces)
    return ComplexRefinement(m, refined, ref)
