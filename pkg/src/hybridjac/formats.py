"""Canonical JSON documents for instances, divisors, functions, and coordinates.

Exact mode renders every rational as a string ("p/q", or "p" for integers) so
no precision is lost in JSON number types.  Float mode renders plain JSON
numbers and stamps the document with a top-level "mode": "float" banner so the
two styles can never silently mix.  Serialization is canonical: sorted keys,
compact separators, reduced fractions, deterministic list orders — parsing a
canonical document and re-serializing it is byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .complexes import HybridDivisor, HybridFunction, HybridPlace, MCRS
from .errors import InputError, MarkedSlotMismatch, PlaceOffGraph
from .graphs import GraphPlace, MetricGraph, build_graph, vertex_place
from .jacobian import HybridCoordinates
from .rationals import CVector, QC
from .surfaces import SurfaceDivisor, SurfacePointRef, VertexSurface
from .tropical import PLFunction, TropicalDivisor, pl_from_samples

EXACT = "exact"
FLOAT = "float"


def _check_mode(mode: str) -> None:
    if mode not in (EXACT, FLOAT):
        raise InputError(f"unknown mode {mode!r}")


def rat_to_json(x: Fraction, mode: str = EXACT):
    if mode == FLOAT:
        return float(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_from_json(obj, field: str = "value") -> Fraction:
    if isinstance(obj, bool):
        raise InputError(f"field {field!r}: expected a rational, got a boolean")
    if isinstance(obj, (int, float)):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"field {field!r}: bad rational {obj!r}") from exc
    raise InputError(f"field {field!r}: expected a rational, got {type(obj).__name__}")


def qc_to_json(z: QC, mode: str = EXACT) -> dict:
    return {"re": rat_to_json(z.re, mode), "im": rat_to_json(z.im, mode)}


def qc_from_json(obj, field: str = "value") -> QC:
    if not isinstance(obj, dict) or set(obj) != {"re", "im"}:
        raise InputError(f"field {field!r}: complex numbers need keys re, im")
    return QC(rat_from_json(obj["re"], f"{field}.re"),
              rat_from_json(obj["im"], f"{field}.im"))


def cvector_to_json(vec: CVector, mode: str = EXACT) -> list:
    return [qc_to_json(z, mode) for z in vec]


def cvector_from_json(obj, field: str) -> CVector:
    if not isinstance(obj, list):
        raise InputError(f"field {field!r}: expected a list of complex numbers")
    return tuple(qc_from_json(z, f"{field}[{i}]") for i, z in enumerate(obj))


def dump_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def load_document(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def document_mode(obj) -> str:
    if isinstance(obj, dict) and obj.get("mode") == FLOAT:
        return FLOAT
    return EXACT


# ---------------------------------------------------------------------------
# slots


def slot_to_json(g: MetricGraph, slot: Tuple[str, str]) -> str:
    eid, end = slot
    if g.edge_map[eid].is_loop():
        return f"{eid}:{end}"
    return eid


def slot_from_json(g: MetricGraph, v: str, text: str) -> Tuple[str, str]:
    if ":" in text:
        eid, _, end = text.rpartition(":")
        if end not in ("tail", "head") or eid not in g.edge_map:
            raise MarkedSlotMismatch(f"bad slot {text!r} at vertex {v}")
        return (eid, end)
    e = g.edge_map.get(text)
    if e is None:
        raise MarkedSlotMismatch(f"slot {text!r} at {v} names an unknown edge")
    if e.is_loop():
        raise MarkedSlotMismatch(f"loop slot at {v} must specify {text}:tail or :head")
    if e.tail == v:
        return (text, "tail")
    if e.head == v:
        return (text, "head")
    raise MarkedSlotMismatch(f"edge {text} is not incident to {v}")


# ---------------------------------------------------------------------------
# instances


def instance_to_json(m: MCRS, mode: str = EXACT) -> dict:
    _check_mode(mode)
    g = m.graph
    doc: Dict[str, Any] = {
        "graph": {
            "vertices": sorted(g.vertices),
            "edges": [
                {
                    "id": e.id,
                    "from": e.tail,
                    "to": e.head,
                    "length": rat_to_json(e.length, mode),
                }
                for e in sorted(g.edges, key=lambda e: e.id)
            ],
        },
        "surfaces": {
            v: {
                "genus": s.genus,
                "lattice": [cvector_to_json(vec, mode) for vec in s.lattice],
                "marked": {
                    slot_to_json(g, slot): cvector_to_json(mu, mode)
                    for slot, mu in s.marked.items()
                },
                "points": {
                    name: cvector_to_json(mu, mode)
                    for name, mu in s.points.items()
                },
            }
            for v, s in ((v, m.surfaces[v]) for v in sorted(g.vertices))
        },
    }
    if mode == FLOAT:
        doc["mode"] = FLOAT
    return doc


def instance_from_json(obj) -> MCRS:
    if not isinstance(obj, dict) or "graph" not in obj or "surfaces" not in obj:
        raise InputError("instance document needs keys graph, surfaces")
    gobj = obj["graph"]
    if not isinstance(gobj, dict) or "vertices" not in gobj or "edges" not in gobj:
        raise InputError("field 'graph': needs keys vertices, edges")
    edges = []
    for i, e in enumerate(gobj["edges"]):
        if not isinstance(e, dict) or not {"id", "from", "to", "length"} <= set(e):
            raise InputError(f"field 'graph.edges[{i}]': needs id, from, to, length")
        edges.append(
            (e["id"], e["from"], e["to"], rat_from_json(e["length"], "length"))
        )
    g = build_graph(gobj["vertices"], edges)
    sobj = obj["surfaces"]
    if not isinstance(sobj, dict):
        raise InputError("field 'surfaces': expected an object keyed by vertex")
    surfaces = {}
    for v, s in sobj.items():
        if not isinstance(s, dict):
            raise InputError(f"field 'surfaces.{v}': expected an object")
        genus = s.get("genus")
        if not isinstance(genus, int) or genus < 0:
            raise InputError(f"field 'surfaces.{v}.genus': expected a nonneg integer")
        if v not in g.incidence:
            raise InputError(f"field 'surfaces.{v}': unknown vertex")
        lattice = tuple(
            cvector_from_json(vec, f"surfaces.{v}.lattice[{i}]")
            for i, vec in enumerate(s.get("lattice", []))
        )
        marked = {
            slot_from_json(g, v, key): cvector_from_json(mu, f"surfaces.{v}.marked")
            for key, mu in s.get("marked", {}).items()
        }
        points = {
            name: cvector_from_json(mu, f"surfaces.{v}.points.{name}")
            for name, mu in s.get("points", {}).items()
        }
        surfaces[v] = VertexSurface(genus, lattice, marked, points)
    return MCRS(g, surfaces)


# ---------------------------------------------------------------------------
# places and divisors


def graph_place_to_json(p: GraphPlace, mode: str = EXACT) -> dict:
    if p.is_vertex:
        return {"vertex": p.vertex}
    return {"edge": p.edge, "offset": rat_to_json(p.offset, mode)}


def graph_place_from_json(g: MetricGraph, obj) -> GraphPlace:
    if not isinstance(obj, dict):
        raise InputError("field 'place': expected an object")
    if "vertex" in obj:
        p = vertex_place(obj["vertex"])
        g.check_place(p)
        return p
    if "edge" in obj:
        return g.place(obj["edge"], rat_from_json(obj.get("offset"), "place.offset"))
    raise InputError("field 'place': needs 'vertex' or 'edge'+'offset'")


def hybrid_place_to_json(m: MCRS, p: HybridPlace, mode: str = EXACT) -> dict:
    if p.kind == "edge":
        return {"edge": p.edge, "offset": rat_to_json(p.offset, mode)}
    if p.kind == "marked":
        return {"surface": p.vertex, "marked": slot_to_json(m.graph, p.slot)}
    return {"surface": p.vertex, "point": p.name}


def hybrid_place_from_json(m: MCRS, obj) -> HybridPlace:
    if not isinstance(obj, dict):
        raise InputError("field 'place': expected an object")
    if "edge" in obj:
        p = m.edge_point(obj["edge"], rat_from_json(obj.get("offset"), "place.offset"))
        m.check_place(p)
        return p
    if "surface" in obj:
        v = obj["surface"]
        if v not in m.surfaces:
            raise PlaceOffGraph(f"field 'place.surface': unknown vertex {v}")
        if "marked" in obj:
            slot = slot_from_json(m.graph, v, obj["marked"])
            p = HybridPlace(vertex=v, slot=slot)
        elif "point" in obj:
            p = HybridPlace(vertex=v, name=obj["point"])
        else:
            raise InputError("field 'place': surface place needs 'point' or 'marked'")
        m.check_place(p)
        return p
    raise InputError("field 'place': needs 'surface' or 'edge'")


def _sorted_entries(entries: List[dict]) -> List[dict]:
    return sorted(entries, key=lambda d: json.dumps(d, sort_keys=True))


def hybrid_divisor_to_json(d: HybridDivisor, mode: str = EXACT) -> list:
    _check_mode(mode)
    entries = [
        {"place": hybrid_place_to_json(d.mcrs, p, mode), "coeff": c}
        for p, c in d.coeffs.items()
    ]
    return _sorted_entries(entries)


def hybrid_divisor_from_json(m: MCRS, obj) -> HybridDivisor:
    if not isinstance(obj, list):
        raise InputError("divisor document must be a list")
    coeffs: Dict[HybridPlace, int] = {}
    for i, entry in enumerate(obj):
        if not isinstance(entry, dict) or "place" not in entry or "coeff" not in entry:
            raise InputError(f"divisor entry [{i}]: needs place and coeff")
        c = entry["coeff"]
        if not isinstance(c, int) or isinstance(c, bool):
            raise InputError(f"divisor entry [{i}].coeff: expected an integer")
        p = hybrid_place_from_json(m, entry["place"])
        coeffs[p] = coeffs.get(p, 0) + c
    return HybridDivisor(m, coeffs)


def tropical_divisor_to_json(d: TropicalDivisor, mode: str = EXACT) -> list:
    entries = [
        {"place": graph_place_to_json(p, mode), "coeff": c}
        for p, c in d.coeffs.items()
    ]
    return _sorted_entries(entries)


def tropical_divisor_from_json(g: MetricGraph, obj) -> TropicalDivisor:
    if not isinstance(obj, list):
        raise InputError("divisor document must be a list")
    coeffs: Dict[GraphPlace, int] = {}
    for i, entry in enumerate(obj):
        if not isinstance(entry, dict) or "place" not in entry or "coeff" not in entry:
            raise InputError(f"divisor entry [{i}]: needs place and coeff")
        c = entry["coeff"]
        if not isinstance(c, int) or isinstance(c, bool):
            raise InputError(f"divisor entry [{i}].coeff: expected an integer")
        p = graph_place_from_json(g, entry["place"])
        coeffs[p] = coeffs.get(p, 0) + c
    return TropicalDivisor(g, coeffs)


# ---------------------------------------------------------------------------
# functions


def pl_to_json(f: PLFunction, mode: str = EXACT) -> list:
    entries = [
        {
            "place": graph_place_to_json(f.refinement.to_base(vertex_place(v)), mode),
            "value": rat_to_json(f.values[v], mode),
        }
        for v in f.model.vertices
    ]
    return _sorted_entries(entries)


def pl_from_json(g: MetricGraph, obj) -> PLFunction:
    if not isinstance(obj, list):
        raise InputError("function document must list sampled places")
    samples: Dict[GraphPlace, Fraction] = {}
    for i, entry in enumerate(obj):
        if not isinstance(entry, dict) or "place" not in entry or "value" not in entry:
            raise InputError(f"function entry [{i}]: needs place and value")
        p = graph_place_from_json(g, entry["place"])
        samples[p] = rat_from_json(entry["value"], f"[{i}].value")
    return pl_from_samples(g, samples)


def surface_divisor_to_json(m: MCRS, d: SurfaceDivisor, mode: str = EXACT) -> list:
    entries = []
    for ref, c in d.coeffs.items():
        if ref.slot is not None:
            place = {"marked": slot_to_json(m.graph, ref.slot)}
        else:
            place = {"point": ref.name}
        entries.append({"place": place, "coeff": c})
    return _sorted_entries(entries)


def surface_divisor_from_json(m: MCRS, v: str, obj) -> SurfaceDivisor:
    if not isinstance(obj, list):
        raise InputError(f"vertex class at {v} must be a list")
    coeffs: Dict[SurfacePointRef, int] = {}
    for i, entry in enumerate(obj):
        if not isinstance(entry, dict) or "place" not in entry or "coeff" not in entry:
            raise InputError(f"vertex class at {v} entry [{i}]: needs place and coeff")
        pobj = entry["place"]
        if not isinstance(pobj, dict):
            raise InputError(f"vertex class at {v} entry [{i}]: bad place")
        if "marked" in pobj:
            ref = SurfacePointRef(v, slot=slot_from_json(m.graph, v, pobj["marked"]))
        elif "point" in pobj:
            ref = SurfacePointRef(v, name=pobj["point"])
        else:
            raise InputError(f"vertex class at {v} entry [{i}]: needs point or marked")
        coeffs[ref] = coeffs.get(ref, 0) + entry["coeff"]
    return SurfaceDivisor(v, coeffs)


def hybrid_function_to_json(m: MCRS, f: HybridFunction, mode: str = EXACT) -> dict:
    _check_mode(mode)
    doc: Dict[str, Any] = {
        "graph_part": pl_to_json(f.f_gamma, mode),
        "vertex_classes": {
            v: surface_divisor_to_json(m, d, mode)
            for v, d in sorted(f.vertex_classes.items())
        },
    }
    if mode == FLOAT:
        doc["mode"] = FLOAT
    return doc


def hybrid_function_from_json(m: MCRS, obj) -> HybridFunction:
    if not isinstance(obj, dict) or "graph_part" not in obj:
        raise InputError("function document needs key graph_part")
    f_gamma = pl_from_json(m.graph, obj["graph_part"])
    classes = {
        v: surface_divisor_from_json(m, v, d)
        for v, d in obj.get("vertex_classes", {}).items()
    }
    f = HybridFunction(f_gamma, classes)
    f.validate(m)
    return f


# ---------------------------------------------------------------------------
# coordinates


def coordinates_to_json(
    m: MCRS, coords: HybridCoordinates, mode: str = EXACT
) -> dict:
    doc: Dict[str, Any] = {
        "blocks": {
            v: cvector_to_json(coords.blocks[v], mode)
            for v in sorted(coords.blocks)
        },
        "gamma": [rat_to_json(x, mode) for x in coords.gamma],
    }
    if mode == FLOAT:
        doc["mode"] = FLOAT
    return doc


def coordinates_from_json(m: MCRS, genus_gamma: int, obj) -> HybridCoordinates:
    if not isinstance(obj, dict) or "blocks" not in obj or "gamma" not in obj:
        raise InputError("coordinates document needs keys blocks, gamma")
    blocks = {}
    for v in m.graph.vertices:
        g_v = m.surfaces[v].genus
        if v in obj["blocks"]:
            vec = cvector_from_json(obj["blocks"][v], f"blocks.{v}")
            if len(vec) != g_v:
                raise InputError(f"field 'blocks.{v}': expected {g_v} coordinates")
        else:
            vec = tuple(QC() for _ in range(g_v))
        blocks[v] = vec
    for v in obj["blocks"]:
        if v not in m.surfaces:
            raise InputError(f"field 'blocks.{v}': unknown vertex")
    gamma = tuple(
        rat_from_json(x, f"gamma[{i}]") for i, x in enumerate(obj["gamma"])
    )
    if len(gamma) != genus_gamma:
        raise InputError(f"field 'gamma': expected {genus_gamma} coordinates")
    return HybridCoordinates(blocks, gamma)
