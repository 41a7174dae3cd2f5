"""Shared fixtures: small hand-verified instances used throughout the tests."""

from fractions import Fraction as F

import pytest

from hybridjac import MCRS, VertexSurface, build_graph, build_mcrs, genus_zero_surface
from hybridjac.rationals import QC

SQUARE_LATTICE = ((QC(F(1)),), (QC(F(0), F(1)),))


def square_torus(marked, points=None):
    """Genus-1 surface with period lattice Z + iZ."""
    pts = {"p0": (QC(),)}
    if points:
        pts.update(points)
    return VertexSurface(1, SQUARE_LATTICE, {s: (mu,) for s, mu in marked.items()}, pts)


@pytest.fixture
def theta_graph():
    """Two vertices joined by three unit edges; genus 2."""
    return build_graph(
        ["u", "w"],
        [("e1", "u", "w", 1), ("e2", "u", "w", 1), ("e3", "u", "w", 1)],
    )


@pytest.fixture
def edge_complex() -> MCRS:
    """Single unit edge, two square tori, mu(x_v1^e) = 1/4, mu(x_v2^e) = 0."""
    g = build_graph(["v1", "v2"], [("e", "v1", "v2", 1)])
    s1 = square_torus(
        {("e", "tail"): QC(F(1, 4))},
        {
            "a": (QC(F(0), F(1)),),  # lattice translate of the basepoint
            "b": (QC(F(1, 6)),),  # 1/6: not a lattice translate
            "q": (QC(F(1, 4)),),  # same image as the marked point
        },
    )
    s2 = square_torus({("e", "head"): QC(F(0))})
    return build_mcrs(g, {"v1": s1, "v2": s2})


@pytest.fixture
def loop_complex() -> MCRS:
    """One vertex with a unit loop and a square torus; mu(tail)=0, mu(head)=w."""
    g = build_graph(["v"], [("e", "v", "v", 1)])
    w = QC(F(1, 3), F(1, 5))
    s = square_torus({("e", "tail"): QC(), ("e", "head"): w})
    return build_mcrs(g, {"v": s})


@pytest.fixture
def loop_w() -> QC:
    return QC(F(1, 3), F(1, 5))


@pytest.fixture
def fig1_complex() -> MCRS:
    """4-cycle with unit edges; surfaces of genus 1, 0, 1, 0; total genus 3."""
    g = build_graph(
        ["v1", "v2", "v3", "v4"],
        [
            ("e1", "v1", "v2", 1),
            ("e2", "v2", "v3", 1),
            ("e3", "v3", "v4", 1),
            ("e4", "v4", "v1", 1),
        ],
    )
    s1 = square_torus({("e1", "tail"): QC(F(1, 4)), ("e4", "head"): QC()})
    s3 = square_torus({("e2", "head"): QC(), ("e3", "tail"): QC(F(1, 2))})
    return build_mcrs(
        g,
        {
            "v1": s1,
            "v2": genus_zero_surface([("e1", "head"), ("e2", "tail")]),
            "v3": s3,
            "v4": genus_zero_surface([("e3", "head"), ("e4", "tail")]),
        },
    )
