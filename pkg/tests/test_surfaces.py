from fractions import Fraction as F

import pytest

from hybridjac import (
    SurfaceDivisor,
    SurfacePointRef,
    VertexSurface,
    aj_surface,
    genus_zero_surface,
    reduce_mod_lattice,
)
from hybridjac.errors import (
    AmbiguousMembership,
    DegenerateLattice,
    DimensionMismatch,
    UnknownPoint,
)
from hybridjac.rationals import QC

SQUARE = ((QC(F(1)),), (QC(F(0), F(1)),))


def torus(points=None):
    return VertexSurface(1, SQUARE, {}, points or {"p0": (QC(),)})


def test_validate_catches_bad_lattices():
    with pytest.raises(DegenerateLattice):
        VertexSurface(1, ((QC(F(1)),),), {}, {}).validate()
    with pytest.raises(DegenerateLattice):
        # two R-dependent vectors
        VertexSurface(1, ((QC(F(1)),), (QC(F(2)),)), {}, {}).validate()
    with pytest.raises(DimensionMismatch):
        VertexSurface(1, SQUARE, {}, {"p": (QC(), QC())}).validate()
    genus_zero_surface([]).validate()


def test_membership_exact():
    s = torus()
    assert reduce_mod_lattice(s, (QC(F(3), F(-2)),)).in_lattice
    assert reduce_mod_lattice(s, (QC(F(3), F(-2)),)).coords == (3, -2)
    assert not reduce_mod_lattice(s, (QC(F(1, 6)),)).in_lattice
    assert reduce_mod_lattice(s, (QC(F(1, 6)),)).raw_coords == (F(1, 6), F(0))


def test_membership_float_tolerance():
    s = torus()
    eps = F(1, 10**9)
    near = (QC(F(1) + eps / 2),)
    m = reduce_mod_lattice(s, near, epsilon=eps)
    assert m.in_lattice and m.coords == (1, 0)
    far = (QC(F(1, 6)),)
    assert not reduce_mod_lattice(s, far, epsilon=eps).in_lattice
    band = (QC(F(1) + 5 * eps),)
    with pytest.raises(AmbiguousMembership):
        reduce_mod_lattice(s, band, epsilon=eps)


def test_genus_zero_membership_is_trivial():
    s = genus_zero_surface([])
    m = reduce_mod_lattice(s, ())
    assert m.in_lattice and m.coords == ()


def test_surface_divisor_and_aj():
    s = torus({"p0": (QC(),), "a": (QC(F(1, 3)),)})
    d = SurfaceDivisor(
        "v",
        {SurfacePointRef("v", name="a"): 2, SurfacePointRef("v", name="p0"): -2},
    )
    assert d.degree == 0
    assert aj_surface(s, d) == (QC(F(2, 3)),)
    with pytest.raises(UnknownPoint):
        SurfaceDivisor("v", {SurfacePointRef("w", name="a"): 1})
    with pytest.raises(UnknownPoint):
        aj_surface(s, SurfaceDivisor("v", {SurfacePointRef("v", name="zzz"): 1}))


def test_basepoint_name():
    s = torus({"z": (QC(),), "a": (QC(F(1, 3)),), "b": (QC(),)})
    assert s.basepoint_name() == "b"  # sorted order among mu = 0 points
    assert torus({"a": (QC(F(1, 3)),)}).basepoint_name() is None
