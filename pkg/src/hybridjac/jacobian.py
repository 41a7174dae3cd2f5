"""The Jacobian of a metrized complex as coordinates modulo an explicit lattice.

Coordinates live in (+)_v C^{g_v} (+) Q^{g(Gamma)}.  The lattice is generated
by the surface period lattices placed block-diagonally plus one lifted
generator per fundamental cycle.  Equality in the Jacobian is always decided
by an exact lattice-membership solve; the quotient is never materialized.

Canonical lift convention: a walk traversing a vertex enters the surface at
the arrival marked point, passes through the basepoint (coordinate 0), and
leaves at the departure marked point, contributing mu(exit) - mu(entry).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .complexes import (
    HybridDivisor,
    HybridFunction,
    HybridPlace,
    MCRS,
    divisor_of_hybrid,
    gamma_part,
    surface_point,
)
from .errors import (
    AmbiguousMembership,
    InternalDisagreement,
    MissingBasepointPoint,
    NonzeroDegree,
    PlaceOffComplex,
    RankDeficient,
)
from .graphs import tree_walk
from .rationals import CVector, cadd, creal, cscale, csub, czero
from .surfaces import VertexSurface, aj_surface, reduce_mod_lattice
from .tropical import (
    PeriodData,
    PLFunction,
    TropicalDivisor,
    is_principal_tropical,
    period_matrix,
)


def _slot_vertex(g, slot: Tuple[str, str]) -> str:
    e = g.edge_map[slot[0]]
    return e.tail if slot[1] == "tail" else e.head


@dataclass(frozen=True)
class HybridCoordinates:
    """One coordinate block per vertex surface plus the graph block."""

    blocks: Mapping[str, CVector]
    gamma: Tuple[Fraction, ...]

    def __add__(self, other: "HybridCoordinates") -> "HybridCoordinates":
        return HybridCoordinates(
            {v: cadd(self.blocks[v], other.blocks[v]) for v in self.blocks},
            tuple(a + b for a, b in zip(self.gamma, other.gamma)),
        )

    def __sub__(self, other: "HybridCoordinates") -> "HybridCoordinates":
        return HybridCoordinates(
            {v: csub(self.blocks[v], other.blocks[v]) for v in self.blocks},
            tuple(a - b for a, b in zip(self.gamma, other.gamma)),
        )

    def scale(self, c) -> "HybridCoordinates":
        return HybridCoordinates(
            {v: cscale(self.blocks[v], c) for v in self.blocks},
            tuple(Fraction(c) * x for x in self.gamma),
        )

    def is_zero(self) -> bool:
        return all(z.is_zero() for vec in self.blocks.values() for z in vec) and all(
            x == 0 for x in self.gamma
        )


def zero_coordinates(m: MCRS, genus_gamma: int) -> HybridCoordinates:
    return HybridCoordinates(
        {v: czero(m.surfaces[v].genus) for v in m.graph.vertices},
        tuple(Fraction(0) for _ in range(genus_gamma)),
    )


def real_embedding(m: MCRS, coords: HybridCoordinates) -> List[Fraction]:
    """Flatten to real coordinates: per sorted vertex (re, im)*, then gamma."""
    out: List[Fraction] = []
    for v in sorted(m.graph.vertices):
        out.extend(creal(coords.blocks[v]))
    out.extend(coords.gamma)
    return out


# ---------------------------------------------------------------------------
# walk lifting


def _departure_slot(eid: str, direction: int) -> Tuple[str, str]:
    return (eid, "tail" if direction > 0 else "head")


def _arrival_slot(eid: str, direction: int) -> Tuple[str, str]:
    return (eid, "head" if direction > 0 else "tail")


def _walk_gamma(pd: PeriodData, walk: Sequence[Tuple[str, int]]) -> List[Fraction]:
    out = []
    for cyc in pd.basis.cycles:
        s = Fraction(0)
        for eid, d in walk:
            c = cyc.get(eid, 0)
            if c:
                s += d * c * pd.graph.edge_map[eid].length
        out.append(s)
    return out


def _add_block(blocks: Dict[str, CVector], v: str, vec: CVector) -> None:
    blocks[v] = cadd(blocks[v], vec)


def aj_place(
    m: MCRS, pd: PeriodData, place: HybridPlace, base_vertex: str
) -> HybridCoordinates:
    """Canonical lift of the tree path from the base vertex's basepoint."""
    m.check_place(place)
    if base_vertex not in m.surfaces:
        raise PlaceOffComplex(f"unknown base vertex {base_vertex}")
    g = m.graph
    if place.kind == "edge":
        anchor = g.edge_map[place.edge].tail
    else:
        anchor = place.vertex
    walk = tree_walk(pd.basis, base_vertex, anchor)
    blocks = {v: czero(m.surfaces[v].genus) for v in g.vertices}
    # surface crossings along the walk
    if walk:
        _add_block(blocks, base_vertex, m.surfaces[base_vertex].mu_slot(
            _departure_slot(*walk[0])
        ))
        for (e1, d1), (e2, d2) in zip(walk, walk[1:]):
            at = _slot_vertex(g, _arrival_slot(e1, d1))
            s = m.surfaces[at]
            _add_block(blocks, at, s.mu_slot(_departure_slot(e2, d2)))
            _add_block(blocks, at, cscale(s.mu_slot(_arrival_slot(e1, d1)), -1))
        entry_mu = m.surfaces[anchor].mu_slot(_arrival_slot(*walk[-1]))
        _add_block(blocks, anchor, cscale(entry_mu, -1))
    # terminal contribution at the anchor
    s = m.surfaces[anchor]
    if place.kind == "edge":
        _add_block(blocks, anchor, s.mu_slot((place.edge, "tail")))
    else:
        _add_block(blocks, anchor, s.mu(m.point_ref(place)))
    # graph block
    gamma = _walk_gamma(pd, walk)
    if place.kind == "edge":
        for i, cyc in enumerate(pd.basis.cycles):
            c = cyc.get(place.edge, 0)
            if c:
                gamma[i] += c * place.offset
    return HybridCoordinates(blocks, tuple(gamma))


def aj_hybrid(
    m: MCRS,
    divisor: HybridDivisor,
    base_vertex: Optional[str] = None,
    pd: Optional[PeriodData] = None,
) -> HybridCoordinates:
    """Abel-Jacobi image (one representative).  Canonical for degree 0."""
    if pd is None:
        pd = period_matrix(m.graph)
    if base_vertex is None:
        base_vertex = min(m.graph.vertices)
    total = zero_coordinates(m, pd.genus)
    for p, c in divisor.coeffs.items():
        total = total + aj_place(m, pd, p, base_vertex).scale(c)
    return total


# ---------------------------------------------------------------------------
# the lattice


@dataclass(frozen=True)
class HybridLattice:
    """Explicit generators of the image of homology in coordinate space."""

    mcrs: MCRS
    periods: PeriodData
    surface_generators: Tuple[HybridCoordinates, ...]
    cycle_generators: Tuple[HybridCoordinates, ...]

    @property
    def generators(self) -> Tuple[HybridCoordinates, ...]:
        return self.surface_generators + self.cycle_generators

    @property
    def dim(self) -> int:
        return len(self.generators)

    def membership(
        self, coords: HybridCoordinates, epsilon: Optional[Fraction] = None
    ) -> Tuple[bool, Optional[Tuple[int, ...]]]:
        """Exact (or epsilon-tolerant) membership with integer coordinates."""
        if self.dim == 0:
            return coords.is_zero(), ()
        cols = [real_embedding(self.mcrs, h) for h in self.generators]
        n = self.dim
        mat = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = real_embedding(self.mcrs, coords)
        sol = linalg.solve(mat, rhs)
        if epsilon is None:
            if linalg.is_integral(sol):
                return True, tuple(int(x) for x in sol)
            return False, None
        try:
            ints = linalg.nearest_integers(sol, epsilon)
        except ValueError as exc:
            raise AmbiguousMembership(str(exc)) from exc
        if ints is None:
            return False, None
        return True, tuple(ints)


def hybrid_lattice(m: MCRS, pd: Optional[PeriodData] = None) -> HybridLattice:
    """Surface lattices block-diagonally plus one lifted cycle generator each."""
    if pd is None:
        pd = period_matrix(m.graph)
    g = m.graph
    surface_gens: List[HybridCoordinates] = []
    for v in sorted(g.vertices):
        s = m.surfaces[v]
        for lam in s.lattice:
            coords = zero_coordinates(m, pd.genus)
            blocks = dict(coords.blocks)
            blocks[v] = lam
            surface_gens.append(HybridCoordinates(blocks, coords.gamma))
    cycle_gens: List[HybridCoordinates] = []
    for eid in pd.basis.nontree_edges:
        e = g.edge_map[eid]
        walk = [(eid, +1)] + tree_walk(pd.basis, e.head, e.tail)
        blocks = {v: czero(m.surfaces[v].genus) for v in g.vertices}
        n = len(walk)
        for i, (e1, d1) in enumerate(walk):
            at = _slot_vertex(g, _arrival_slot(e1, d1))
            e2, d2 = walk[(i + 1) % n]
            s = m.surfaces[at]
            _add_block(blocks, at, s.mu_slot(_departure_slot(e2, d2)))
            _add_block(blocks, at, cscale(s.mu_slot(_arrival_slot(e1, d1)), -1))
        cycle_gens.append(HybridCoordinates(blocks, tuple(_walk_gamma(pd, walk))))
    lat = HybridLattice(m, pd, tuple(surface_gens), tuple(cycle_gens))
    expected = 2 * sum(s.genus for s in m.surfaces.values()) + pd.genus
    rows = [real_embedding(m, h) for h in lat.generators]
    if lat.dim != expected or linalg.rank(rows) != expected:
        raise RankDeficient(
            f"lattice rank {linalg.rank(rows)} != expected {expected}"
        )
    return lat


def homology_rank(m: MCRS, pd: Optional[PeriodData] = None) -> int:
    """2 * (sum of surface genera) + graph genus; asserted against the lattice."""
    if pd is None:
        pd = period_matrix(m.graph)
    rank = 2 * sum(s.genus for s in m.surfaces.values()) + pd.genus
    hybrid_lattice(m, pd)  # raises RankDeficient on bad data
    return rank


# ---------------------------------------------------------------------------
# principality


@dataclass(frozen=True)
class HybridVerdict:
    is_principal: bool
    routes: Tuple[str, ...]
    witness: Optional[PLFunction] = None  # graph part of a witness function
    cycle_coords: Optional[Tuple[int, ...]] = None
    surface_coords: Optional[Mapping[str, Tuple[int, ...]]] = None
    reason: Optional[str] = None


def _decide_lattice(
    m: MCRS,
    pd: PeriodData,
    lat: HybridLattice,
    divisor: HybridDivisor,
    epsilon: Optional[Fraction],
) -> HybridVerdict:
    b = aj_hybrid(m, divisor, pd=pd)
    x = linalg.solve([list(row) for row in pd.matrix], list(b.gamma))
    if epsilon is None:
        integral = linalg.is_integral(x)
        cycle = tuple(int(v) for v in x) if integral else None
    else:
        try:
            cycle = linalg.nearest_integers(x, epsilon)
        except ValueError as exc:
            raise AmbiguousMembership(str(exc)) from exc
        integral = cycle is not None
        cycle = tuple(cycle) if cycle is not None else None
    if not integral:
        return HybridVerdict(
            False, ("lattice",), reason="graph block is not a lattice period"
        )
    residual = b
    for xj, h in zip(cycle, lat.cycle_generators):
        residual = residual - h.scale(xj)
    surface_coords: Dict[str, Tuple[int, ...]] = {}
    for v in sorted(m.graph.vertices):
        mem = reduce_mod_lattice(m.surfaces[v], residual.blocks[v], epsilon)
        if not mem.in_lattice:
            return HybridVerdict(
                False,
                ("lattice",),
                reason=f"surface block {v} residue not in lattice",
            )
        surface_coords[v] = mem.coords
    return HybridVerdict(
        True, ("lattice",), cycle_coords=cycle, surface_coords=surface_coords
    )


def _decide_proof(
    m: MCRS,
    pd: PeriodData,
    divisor: HybridDivisor,
    epsilon: Optional[Fraction],
) -> HybridVerdict:
    d_gamma = gamma_part(m, divisor)
    trop = is_principal_tropical(pd, d_gamma)
    if not trop.is_principal:
        return HybridVerdict(
            False, ("proof",), reason="graph part is not principal on the graph"
        )
    extended = HybridFunction(trop.witness, {})
    remainder = divisor - divisor_of_hybrid(m, extended)
    assert remainder.is_vertex_supported()
    surface_coords: Dict[str, Tuple[int, ...]] = {}
    for v in sorted(m.graph.vertices):
        part = remainder.vertex_part(v)
        assert part.degree == 0
        s = m.surfaces[v]
        mem = reduce_mod_lattice(s, aj_surface(s, part), epsilon)
        if not mem.in_lattice:
            return HybridVerdict(
                False,
                ("proof",),
                witness=trop.witness,
                reason=f"surface block {v} residue not in lattice",
            )
        surface_coords[v] = mem.coords
    return HybridVerdict(
        True, ("proof",), witness=trop.witness, surface_coords=surface_coords
    )


def is_principal_hybrid(
    m: MCRS,
    divisor: HybridDivisor,
    algorithm: str = "both",
    pd: Optional[PeriodData] = None,
    lat: Optional[HybridLattice] = None,
    epsilon: Optional[Fraction] = None,
) -> HybridVerdict:
    """Decide principality via the lattice route, the proof route, or both."""
    if divisor.degree != 0:
        raise NonzeroDegree(f"divisor has degree {divisor.degree}")
    if algorithm not in ("lattice", "proof", "both"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if pd is None:
        pd = period_matrix(m.graph)
    verdicts: List[HybridVerdict] = []
    if algorithm in ("lattice", "both"):
        if lat is None:
            lat = hybrid_lattice(m, pd)
        verdicts.append(_decide_lattice(m, pd, lat, divisor, epsilon))
    if algorithm in ("proof", "both"):
        verdicts.append(_decide_proof(m, pd, divisor, epsilon))
    if len(verdicts) == 2 and verdicts[0].is_principal != verdicts[1].is_principal:
        raise InternalDisagreement(
            f"lattice route says {verdicts[0].is_principal}, "
            f"proof route says {verdicts[1].is_principal}"
        )
    if len(verdicts) == 2:
        first, second = verdicts
        return HybridVerdict(
            first.is_principal,
            ("lattice", "proof"),
            witness=second.witness,
            cycle_coords=first.cycle_coords,
            surface_coords=first.surface_coords or second.surface_coords,
            reason=first.reason or second.reason,
        )
    return verdicts[0]


# ---------------------------------------------------------------------------
# the splitting and surjectivity


def lift_divisor(m: MCRS, d_gamma: TropicalDivisor) -> HybridDivisor:
    """Section of gamma_part: vertex chips move to the surface basepoints."""
    coeffs: Dict[HybridPlace, int] = {}
    for p, c in d_gamma.coeffs.items():
        if p.is_vertex:
            bp = m.basepoint_place(p.vertex)
            if bp is None:
                raise MissingBasepointPoint(
                    f"surface at {p.vertex} has no named point with coordinate 0"
                )
            coeffs[bp] = coeffs.get(bp, 0) + c
        else:
            place = HybridPlace(edge=p.edge, offset=p.offset)
            coeffs[place] = coeffs.get(place, 0) + c
    return HybridDivisor(m, coeffs)


def aj_preimage(
    m: MCRS,
    target: HybridCoordinates,
    pd: Optional[PeriodData] = None,
) -> Tuple[MCRS, HybridDivisor]:
    """Construct a degree-0 divisor whose Abel-Jacobi image equals the target.

    Surface blocks are hit by synthetic named points added to a copy of the
    complex; the graph block is hit by chip pairs on non-tree edges, which
    contribute diagonally in the fundamental-cycle coordinates.  The image
    matches the target exactly, not merely modulo the lattice.
    """
    if pd is None:
        pd = period_matrix(m.graph)
    g = m.graph
    surfaces = dict(m.surfaces)
    coeffs: Dict[HybridPlace, int] = {}

    def bump(p: HybridPlace, c: int) -> None:
        if c:
            coeffs[p] = coeffs.get(p, 0) + c
            if coeffs[p] == 0:
                del coeffs[p]

    for v in sorted(g.vertices):
        block = target.blocks.get(v, czero(m.surfaces[v].genus))
        if all(z.is_zero() for z in block):
            continue
        s = m.surfaces[v]
        base = s.basepoint_name()
        if base is None:
            raise MissingBasepointPoint(
                f"surface at {v} has no named point with coordinate 0"
            )
        synth = f"_aj:{v}"
        points = dict(s.points)
        points[synth] = block
        surfaces[v] = VertexSurface(s.genus, s.lattice, s.marked, points)
        bump(surface_point(v, synth), +1)
        bump(surface_point(v, base), -1)

    m2 = MCRS(g, surfaces)
    for j, eid in enumerate(pd.basis.nontree_edges):
        q = target.gamma[j]
        if q == 0:
            continue
        length = g.edge_map[eid].length
        c = (1 if q > 0 else -1) * (abs(q) // length + 1)
        c = int(c)
        delta = q / c
        lo = length / 2 - delta / 2
        hi = length / 2 + delta / 2
        bump(m2.edge_point(eid, hi), c)
        bump(m2.edge_point(eid, lo), -c)
    return m2, HybridDivisor(m2, coeffs)
