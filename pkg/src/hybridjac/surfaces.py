"""Vertex Riemann surfaces as abstract Jacobian data.

A surface is never evaluated analytically: it is a genus, a period lattice in
C^g, and Abel-Jacobi coordinates of its marked and named points relative to an
implicit basepoint with coordinate 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from . import linalg
from .errors import (
    AmbiguousMembership,
    DegenerateLattice,
    DimensionMismatch,
    UnknownPoint,
)
from .rationals import CVector, QC, creal, czero

# marked slot: (edge id, "tail" | "head")
Slot = Tuple[str, str]


@dataclass(frozen=True)
class SurfacePointRef:
    """Reference to a point on one vertex surface: marked slot or named point."""

    vertex: str
    name: Optional[str] = None
    slot: Optional[Slot] = None

    def __repr__(self) -> str:
        if self.name is not None:
            return f"SurfacePt({self.vertex}:{self.name})"
        return f"SurfacePt({self.vertex}:{self.slot[0]}:{self.slot[1]})"


@dataclass(frozen=True)
class VertexSurface:
    """Compact Riemann surface given by genus, period lattice, and point data."""

    genus: int
    lattice: Tuple[CVector, ...]  # 2*genus vectors in C^genus
    marked: Mapping[Slot, CVector]
    points: Mapping[str, CVector]

    def validate(self) -> None:
        g = self.genus
        if g < 0:
            raise DegenerateLattice("negative genus")
        if len(self.lattice) != 2 * g:
            raise DegenerateLattice(
                f"genus {g} needs {2 * g} lattice vectors, got {len(self.lattice)}"
            )
        for vec in list(self.lattice) + list(self.marked.values()) + list(
            self.points.values()
        ):
            if len(vec) != g:
                raise DimensionMismatch(f"coordinate vector of length {len(vec)} != {g}")
        if g > 0:
            mat = [list(creal(vec)) for vec in self.lattice]
            if linalg.rank(mat) != 2 * g:
                raise DegenerateLattice("lattice vectors are R-linearly dependent")

    def mu(self, ref: SurfacePointRef) -> CVector:
        """Abel-Jacobi coordinate of a referenced point."""
        if ref.name is not None:
            if ref.name not in self.points:
                raise UnknownPoint(f"unknown named point {ref.name!r}")
            return self.points[ref.name]
        if ref.slot not in self.marked:
            raise UnknownPoint(f"unknown marked slot {ref.slot!r}")
        return self.marked[ref.slot]

    def mu_slot(self, slot: Slot) -> CVector:
        if slot not in self.marked:
            raise UnknownPoint(f"unknown marked slot {slot!r}")
        return self.marked[slot]

    def basepoint_name(self) -> Optional[str]:
        """A named point with coordinate 0, if any (candidates sorted by name)."""
        for name in sorted(self.points):
            if all(z.is_zero() for z in self.points[name]):
                return name
        return None


def genus_zero_surface(slots: Sequence[Slot]) -> VertexSurface:
    return VertexSurface(
        genus=0,
        lattice=(),
        marked={s: () for s in slots},
        points={"p0": ()},
    )


@dataclass(frozen=True)
class LatticeMembership:
    in_lattice: bool
    coords: Optional[Tuple[int, ...]] = None
    raw_coords: Optional[Tuple[Fraction, ...]] = None


def reduce_mod_lattice(
    s: VertexSurface,
    z: CVector,
    epsilon: Optional[Fraction] = None,
) -> LatticeMembership:
    """Express z in lattice coordinates; membership iff all are integers.

    Exact mode (epsilon=None) solves the real 2g-dimensional system over Q.
    Float mode accepts coordinates within epsilon of integers and raises on
    the ambiguity band.
    """
    g = s.genus
    if len(z) != g:
        raise DimensionMismatch(f"vector of length {len(z)} on genus-{g} surface")
    if g == 0:
        return LatticeMembership(True, (), ())
    cols = [creal(vec) for vec in s.lattice]
    mat = [[cols[j][i] for j in range(2 * g)] for i in range(2 * g)]
    rhs = list(creal(z))
    coords = linalg.solve(mat, rhs)
    if epsilon is None:
        if linalg.is_integral(coords):
            return LatticeMembership(True, tuple(int(c) for c in coords), tuple(coords))
        return LatticeMembership(False, None, tuple(coords))
    try:
        ints = linalg.nearest_integers(coords, epsilon)
    except ValueError as exc:
        raise AmbiguousMembership(str(exc)) from exc
    if ints is None:
        return LatticeMembership(False, None, tuple(coords))
    return LatticeMembership(True, tuple(ints), tuple(coords))


@dataclass(frozen=True)
class SurfaceDivisor:
    """Finite integer combination of points on one vertex surface."""

    vertex: str
    coeffs: Mapping[SurfacePointRef, int]

    def __post_init__(self):
        clean = {}
        for ref, c in self.coeffs.items():
            if ref.vertex != self.vertex:
                raise UnknownPoint(
                    f"point on {ref.vertex} in a divisor attached to {self.vertex}"
                )
            if c != 0:
                clean[ref] = c
        object.__setattr__(self, "coeffs", clean)

    @property
    def degree(self) -> int:
        return sum(self.coeffs.values())


def aj_surface(s: VertexSurface, divisor: SurfaceDivisor) -> CVector:
    """Sum of coefficients times point coordinates (basepoint-pinned)."""
    total = czero(s.genus)
    for ref, c in divisor.coeffs.items():
        total = tuple(a + c * b for a, b in zip(total, s.mu(ref)))
    return total
