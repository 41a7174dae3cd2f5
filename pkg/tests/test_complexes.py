from fractions import Fraction as F

import pytest

from hybridjac import (
    HybridDivisor,
    HybridFunction,
    SurfaceDivisor,
    SurfacePointRef,
    build_graph,
    build_mcrs,
    divisor_of_hybrid,
    gamma_part,
    genus_zero_surface,
    marked_point,
    pl_from_samples,
    refine_complex,
    surface_point,
    vertex_place,
)
from hybridjac.errors import PlaceOffComplex, SlotBijectionBroken, UnknownPoint


def test_fig1_genus(fig1_complex):
    assert fig1_complex.genus == 3


def test_edge_genus(edge_complex):
    assert edge_complex.genus == 2


def test_single_vertex_complex():
    g = build_graph(["v"], [])
    m = build_mcrs(g, {"v": genus_zero_surface([])})
    assert m.genus == 0


def test_slot_bijection_enforced():
    g = build_graph(["v1", "v2"], [("e", "v1", "v2", 1)])
    with pytest.raises(SlotBijectionBroken):
        build_mcrs(g, {"v1": genus_zero_surface([("e", "tail")])})
    with pytest.raises(SlotBijectionBroken):
        build_mcrs(
            g,
            {
                "v1": genus_zero_surface([]),  # missing the tail slot
                "v2": genus_zero_surface([("e", "head")]),
            },
        )


def test_edge_point_normalizes_to_marked(edge_complex):
    p = edge_complex.edge_point("e", F(0))
    assert p.kind == "marked" and p.slot == ("e", "tail") and p.vertex == "v1"
    q = edge_complex.edge_point("e", F(1))
    assert q.kind == "marked" and q.vertex == "v2"
    r = edge_complex.edge_point("e", F(1, 3))
    assert r.kind == "edge"


def test_gamma_part(edge_complex):
    m = edge_complex
    # same-surface pair collapses to zero
    d0 = HybridDivisor(
        m, {surface_point("v1", "a"): 1, surface_point("v1", "b"): -1}
    )
    assert gamma_part(m, d0).is_zero()
    # points on different surfaces project to the vertex difference
    d1 = HybridDivisor(
        m, {surface_point("v1", "a"): 1, surface_point("v2", "p0"): -1}
    )
    assert gamma_part(m, d1).coeffs == {
        vertex_place("v1"): 1,
        vertex_place("v2"): -1,
    }
    # edge chips are kept; marked points live on their surface's vertex
    d2 = HybridDivisor(
        m,
        {m.edge_point("e", F(1, 3)): 2, marked_point("v1", ("e", "tail")): -2},
    )
    assert gamma_part(m, d2).coeffs == {
        m.graph.place("e", F(1, 3)): 2,
        vertex_place("v1"): -2,
    }
    assert gamma_part(m, d2).degree == 0


def _slope_one(m):
    return pl_from_samples(
        m.graph, {vertex_place("v1"): F(0), vertex_place("v2"): F(1)}
    )


def test_divisor_of_hybrid_constant(edge_complex):
    f = HybridFunction(
        pl_from_samples(
            edge_complex.graph,
            {vertex_place("v1"): F(2), vertex_place("v2"): F(2)},
        )
    )
    assert divisor_of_hybrid(edge_complex, f).coeffs == {}


def test_divisor_of_hybrid_slopes(edge_complex):
    f = HybridFunction(_slope_one(edge_complex))
    d = divisor_of_hybrid(edge_complex, f)
    assert d.coeffs == {
        marked_point("v1", ("e", "tail")): 1,
        marked_point("v2", ("e", "head")): -1,
    }


def test_divisor_of_hybrid_orders_add(edge_complex):
    # vertex class (q) - (x_v1^e) with mu_q - mu(x_v1^e) = 0 in the lattice:
    # the -1 order of f_v1 cancels the +1 outward slope at the marked point
    cls = SurfaceDivisor(
        "v1",
        {
            SurfacePointRef("v1", name="q"): 1,
            SurfacePointRef("v1", slot=("e", "tail")): -1,
        },
    )
    f = HybridFunction(_slope_one(edge_complex), {"v1": cls})
    d = divisor_of_hybrid(edge_complex, f)
    assert d.coeffs == {
        surface_point("v1", "q"): 1,
        marked_point("v2", ("e", "head")): -1,
    }
    # the X_v1-part of div(f) differs from div(f_v1): orders interact
    assert d.vertex_part("v1").coeffs != cls.coeffs


def test_uncertified_vertex_class_rejected(edge_complex):
    bad = SurfaceDivisor(
        "v1",
        {
            SurfacePointRef("v1", name="b"): 1,  # mu = 1/6, not principal
            SurfacePointRef("v1", name="p0"): -1,
        },
    )
    f = HybridFunction(_slope_one(edge_complex), {"v1": bad})
    with pytest.raises(UnknownPoint):
        divisor_of_hybrid(edge_complex, f)


def test_check_place(edge_complex):
    with pytest.raises(PlaceOffComplex):
        edge_complex.check_place(surface_point("v1", "zzz"))
    with pytest.raises(PlaceOffComplex):
        edge_complex.check_place(marked_point("v2", ("e", "tail")))


def test_refine_complex(edge_complex):
    m = edge_complex
    cut = m.graph.place("e", F(1, 2))
    cr = refine_complex(m, [cut])
    assert cr.refined.genus == m.genus
    assert len(cr.refined.graph.vertices) == 3
    d = HybridDivisor(
        m,
        {
            m.edge_point("e", F(1, 4)): 1,
            marked_point("v1", ("e", "tail")): 1,
            surface_point("v2", "p0"): -2,
        },
    )
    moved = cr.map_divisor(d)
    assert moved.degree == 0
    assert gamma_part(cr.refined, moved).degree == 0
    # the new vertex carries a sphere with both new slots marked
    new_v = next(
        v for v in cr.refined.graph.vertices if v not in m.graph.vertices
    )
    assert cr.refined.surfaces[new_v].genus == 0
    assert len(cr.refined.surfaces[new_v].marked) == 2
