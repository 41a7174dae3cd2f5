"""Jacobian of a metric graph: periods, Abel-Jacobi, principality, chip firing."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .errors import (
    InternalDisagreement,
    NonIntegerSlope,
    NonzeroDegree,
    PlaceOffGraph,
)
from .graphs import (
    CycleBasis,
    GraphPlace,
    MetricGraph,
    Refinement,
    cycle_basis,
    integrate_chain,
    refine,
    tree_path,
    vertex_place,
)


@dataclass(frozen=True)
class TropicalDivisor:
    """Finite integer combination of places on a metric graph."""

    graph: MetricGraph
    coeffs: Mapping[GraphPlace, int]

    def __post_init__(self):
        clean = {p: c for p, c in self.coeffs.items() if c != 0}
        for p in clean:
            self.graph.check_place(p)
        object.__setattr__(self, "coeffs", clean)

    @property
    def degree(self) -> int:
        return sum(self.coeffs.values())

    def support(self) -> Tuple[GraphPlace, ...]:
        return tuple(self.coeffs)

    def __add__(self, other: "TropicalDivisor") -> "TropicalDivisor":
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, 0) + c
        return TropicalDivisor(self.graph, out)

    def __sub__(self, other: "TropicalDivisor") -> "TropicalDivisor":
        return self + other.scale(-1)

    def scale(self, n: int) -> "TropicalDivisor":
        return TropicalDivisor(self.graph, {p: n * c for p, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs


# ---------------------------------------------------------------------------
# piecewise-linear functions


def identity_refinement(g: MetricGraph) -> Refinement:
    return Refinement(
        g, g, {e.id: [(e.id, Fraction(0), e.length)] for e in g.edges}
    )


@dataclass(frozen=True)
class PLFunction:
    """Function on a metric graph, affine on every edge of its model."""

    graph: MetricGraph
    model: MetricGraph
    refinement: Refinement
    values: Mapping[str, Fraction]

    def slope(self, model_edge: str) -> Fraction:
        e = self.model.edge_map[model_edge]
        return (self.values[e.head] - self.values[e.tail]) / e.length

    def has_integer_slopes(self) -> bool:
        return all(self.slope(e.id).denominator == 1 for e in self.model.edges)

    def value_at(self, p: GraphPlace) -> Fraction:
        q = self.refinement.to_refined(p)
        if q.is_vertex:
            return self.values[q.vertex]
        e = self.model.edge_map[q.edge]
        a, b = self.values[e.tail], self.values[e.head]
        return a + (b - a) * q.offset / e.length

    def breakpoints(self) -> List[GraphPlace]:
        """Model vertices, expressed as places on the base graph."""
        return [self.refinement.to_base(vertex_place(v)) for v in self.model.vertices]

    def shift(self, c: Fraction) -> "PLFunction":
        return PLFunction(
            self.graph,
            self.model,
            self.refinement,
            {v: x + c for v, x in self.values.items()},
        )


def pl_constant(g: MetricGraph, c: Fraction = Fraction(0)) -> PLFunction:
    return PLFunction(g, g, identity_refinement(g), {v: Fraction(c) for v in g.vertices})


def pl_from_samples(
    g: MetricGraph, samples: Mapping[GraphPlace, Fraction]
) -> PLFunction:
    """Interpolate a PL function from values at all vertices plus breakpoints."""
    for v in g.vertices:
        if vertex_place(v) not in samples:
            raise PlaceOffGraph(f"missing value at vertex {v}")
    interior = [p for p in samples if not p.is_vertex]
    model, ref = refine(g, interior)
    values: Dict[str, Fraction] = {}
    for p, val in samples.items():
        q = ref.to_refined(p)
        values[q.vertex] = Fraction(val)
    return PLFunction(g, model, ref, values)


def pl_combine(
    fs: Sequence[PLFunction], coeffs: Sequence[Fraction]
) -> PLFunction:
    """Exact linear combination over a common refinement of all models."""
    g = fs[0].graph
    cut: Dict[GraphPlace, None] = {}
    for f in fs:
        for p in f.breakpoints():
            if not p.is_vertex:
                cut[p] = None
    model, ref = refine(g, cut)
    values: Dict[str, Fraction] = {}
    for v in model.vertices:
        base = ref.to_base(vertex_place(v))
        values[v] = sum(
            (Fraction(c) * f.value_at(base) for f, c in zip(fs, coeffs)),
            Fraction(0),
        )
    return PLFunction(g, model, ref, values)


def pl_clamp(f: PLFunction, lo: Fraction, hi: Fraction) -> PLFunction:
    """Clamp values into [lo, hi], inserting breakpoints at level crossings."""
    cuts: List[GraphPlace] = [p for p in f.breakpoints() if not p.is_vertex]
    for e in f.model.edges:
        a, b = f.values[e.tail], f.values[e.head]
        if a == b:
            continue
        for level in (lo, hi):
            if min(a, b) < level < max(a, b):
                t = (level - a) * e.length / (b - a)
                cuts.append(f.refinement.to_base(f.model.place(e.id, t)))
    model, ref = refine(f.graph, cuts)
    values = {
        v: min(max(f.value_at(ref.to_base(vertex_place(v))), lo), hi)
        for v in model.vertices
    }
    return PLFunction(f.graph, model, ref, values)


def pl_equal(f: PLFunction, g: PLFunction) -> bool:
    d = pl_combine([f, g], [Fraction(1), Fraction(-1)])
    return all(x == 0 for x in d.values.values())


def divisor_of_pl(f: PLFunction) -> TropicalDivisor:
    """Sum of outgoing slopes at every model vertex, pulled back to the base graph."""
    if not f.has_integer_slopes():
        raise NonIntegerSlope("function is not rational (non-integer slope)")
    coeffs: Dict[GraphPlace, int] = {}
    for v in f.model.vertices:
        order = Fraction(0)
        for eid, end in f.model.incidence[v]:
            s = f.slope(eid)
            order += s if end == "tail" else -s
        if order:
            p = f.refinement.to_base(vertex_place(v))
            coeffs[p] = coeffs.get(p, 0) + int(order)
    div = TropicalDivisor(f.graph, coeffs)
    assert div.degree == 0
    return div


# ---------------------------------------------------------------------------
# periods and the tropical Abel-Jacobi map


@dataclass(frozen=True)
class PeriodData:
    """Cycle basis together with the Gram matrix of the length pairing."""

    graph: MetricGraph
    basis: CycleBasis
    matrix: Tuple[Tuple[Fraction, ...], ...]

    @property
    def genus(self) -> int:
        return len(self.matrix)


def period_matrix(g: MetricGraph, basis: Optional[CycleBasis] = None) -> PeriodData:
    if basis is None:
        basis = cycle_basis(g)
    rows = []
    for gi in basis.cycles:
        row = []
        for gj in basis.cycles:
            s = Fraction(0)
            for eid, ci in gi.items():
                cj = gj.get(eid, 0)
                if cj:
                    s += g.edge_map[eid].length * ci * cj
            row.append(s)
        rows.append(tuple(row))
    return PeriodData(g, basis, tuple(rows))


def aj_tropical(
    pd: PeriodData,
    divisor: TropicalDivisor,
    basepoint: Optional[GraphPlace] = None,
) -> List[Fraction]:
    """Coordinates of the Abel-Jacobi image in the fundamental-cycle dual basis."""
    g = pd.graph
    if basepoint is None:
        basepoint = vertex_place(min(g.vertices))
    g.check_place(basepoint)
    coords = [Fraction(0)] * pd.genus
    for p, c in divisor.coeffs.items():
        chain = tree_path(g, pd.basis, basepoint, p)
        for i, cyc in enumerate(pd.basis.cycles):
            coords[i] += c * integrate_chain(chain, cyc)
    return coords


@dataclass(frozen=True)
class PrincipalityResult:
    is_principal: bool
    witness: Optional[PLFunction] = None
    lattice_coords: Optional[Tuple[int, ...]] = None


def _laplacian_witness(
    g: MetricGraph, divisor: TropicalDivisor
) -> Tuple[bool, Optional[PLFunction]]:
    """Solve for vertex potentials with prescribed orders; principal iff every
    induced edge slope is an integer.  Independent of the period-lattice route."""
    model, ref = refine(g, divisor.support())
    target: Dict[str, Fraction] = {v: Fraction(0) for v in model.vertices}
    for p, c in divisor.coeffs.items():
        q = ref.to_refined(p)
        target[q.vertex] += c
    verts = sorted(model.vertices)
    root = verts[0]
    unknowns = [v for v in verts if v != root]
    index = {v: i for i, v in enumerate(unknowns)}
    n = len(unknowns)
    a = [[Fraction(0)] * n for _ in range(n)]
    b = [Fraction(0)] * n
    for v in unknowns:
        r = index[v]
        b[r] = target[v]
        for eid, end in model.incidence[v]:
            e = model.edge_map[eid]
            if e.is_loop():
                continue
            w = model.slot_neighbor(eid, end)
            conductance = Fraction(1) / e.length
            a[r][r] -= conductance
            if w != root:
                a[r][index[w]] += conductance
    phi = linalg.solve(a, b) if n else []
    values = {root: Fraction(0)}
    for v, x in zip(unknowns, phi):
        values[v] = x
    f = PLFunction(g, model, ref, values)
    if not f.has_integer_slopes():
        return False, None
    return True, f


def is_principal_tropical(
    pd: PeriodData, divisor: TropicalDivisor
) -> PrincipalityResult:
    """Decide principality two independent ways; their agreement is asserted."""
    if divisor.degree != 0:
        raise NonzeroDegree(f"divisor has degree {divisor.degree}")
    a = aj_tropical(pd, divisor)
    x = linalg.solve([list(row) for row in pd.matrix], a)
    lattice_yes = linalg.is_integral(x)
    witness_yes, witness = _laplacian_witness(pd.graph, divisor)
    if lattice_yes != witness_yes:
        raise InternalDisagreement(
            f"lattice route says {lattice_yes}, Laplacian route says {witness_yes}"
        )
    if not lattice_yes:
        return PrincipalityResult(False)
    assert witness is not None and divisor_of_pl(witness).coeffs == divisor.coeffs
    return PrincipalityResult(True, witness, tuple(int(v) for v in x))


# ---------------------------------------------------------------------------
# weighted chip-firing decomposition


@dataclass(frozen=True)
class ChipFiringMove:
    """PL function constant on two disjoint subgraphs, affine in between."""

    function: PLFunction
    low_value: Fraction
    high_value: Fraction
    low_vertices: Tuple[str, ...]
    high_vertices: Tuple[str, ...]
    ramps: Tuple[Tuple[str, int], ...]  # (model edge id, integer slope)


def validate_move(move: ChipFiringMove) -> None:
    """Check the defining invariants; raises AssertionError on violation."""
    f = move.function
    lo, hi = move.low_value, move.high_value
    assert lo < hi
    assert set(move.low_vertices).isdisjoint(move.high_vertices)
    for v, x in f.values.items():
        assert x in (lo, hi), f"vertex {v} value {x} is not a plateau value"
    ramp_edges = dict(move.ramps)
    for e in f.model.edges:
        s = f.slope(e.id)
        if e.id in ramp_edges:
            assert s == ramp_edges[e.id] and s != 0 and s.denominator == 1
            assert {f.values[e.tail], f.values[e.head]} == {lo, hi}
            # connecting segments touch the plateaus only at their endpoints,
            # so every interior point has valency 2
        else:
            assert s == 0


def decompose_chip_firing(f: PLFunction) -> List[ChipFiringMove]:
    """Cut f at its ascending corner values; one move per slab.

    The returned moves sum exactly to f minus its minimum value.
    """
    if not f.has_integer_slopes():
        raise NonIntegerSlope("function is not rational (non-integer slope)")
    levels = sorted(set(f.values.values()))
    moves: List[ChipFiringMove] = []
    for lo, hi in zip(levels, levels[1:]):
        slab = pl_clamp(f, lo, hi).shift(-lo)
        h = hi - lo
        low = tuple(sorted(v for v, x in slab.values.items() if x == 0))
        high = tuple(sorted(v for v, x in slab.values.items() if x == h))
        ramps = tuple(
            (e.id, int(slab.slope(e.id)))
            for e in slab.model.edges
            if slab.slope(e.id) != 0
        )
        moves.append(ChipFiringMove(slab, Fraction(0), h, low, high, ramps))
    return moves
