"""Random instance generation and the randomized property suites.

Every suite is deterministic per seed; a failure report carries the derived
case seed that replays the single offending case.
"""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

from . import linalg
from .complexes import (
    HybridDivisor,
    HybridFunction,
    HybridPlace,
    MCRS,
    divisor_of_hybrid,
    gamma_part,
    marked_point,
    surface_point,
)
from .errors import BoundsInfeasible, UnknownSuite
from .graphs import (
    Edge,
    GraphPlace,
    MetricGraph,
    cycle_basis,
    refine,
    vertex_place,
)
from .jacobian import (
    HybridCoordinates,
    aj_hybrid,
    hybrid_lattice,
    is_principal_hybrid,
    lift_divisor,
)
from .rationals import QC, czero
from .surfaces import (
    SurfaceDivisor,
    SurfacePointRef,
    VertexSurface,
    aj_surface,
    genus_zero_surface,
    reduce_mod_lattice,
)
from .tropical import (
    PLFunction,
    TropicalDivisor,
    aj_tropical,
    decompose_chip_firing,
    divisor_of_pl,
    is_principal_tropical,
    period_matrix,
    pl_clamp,
    pl_combine,
    pl_from_samples,
    validate_move,
)


@dataclass(frozen=True)
class InstanceSeed:
    """Seed plus size bounds for reproducible random instances."""

    seed: int
    max_vertices: int = 4
    max_edges: int = 6
    max_genus: int = 2
    coeff_bound: int = 5
    denom_bound: int = 60

    def check(self) -> None:
        if self.max_vertices < 1:
            raise BoundsInfeasible("need at least one vertex")
        if self.max_edges < self.max_vertices - 1:
            raise BoundsInfeasible("edge bound below spanning-tree size")
        if self.max_genus < 0 or self.coeff_bound < 1 or self.denom_bound < 1:
            raise BoundsInfeasible("bounds must be positive")

    def derive(self, index: int) -> "InstanceSeed":
        return InstanceSeed(
            self.seed * 1_000_003 + index,
            self.max_vertices,
            self.max_edges,
            self.max_genus,
            self.coeff_bound,
            self.denom_bound,
        )


def _rng(cfg: InstanceSeed) -> random.Random:
    return random.Random(cfg.seed)


def _rand_length(rng: random.Random, denom_bound: int) -> Fraction:
    return Fraction(rng.randint(1, 8), rng.randint(1, denom_bound))


def _rand_rational(rng: random.Random, denom_bound: int) -> Fraction:
    return Fraction(rng.randint(-6, 6), rng.randint(1, denom_bound))


def _rand_qc(rng: random.Random, denom_bound: int) -> QC:
    return QC(_rand_rational(rng, denom_bound), _rand_rational(rng, denom_bound))


def random_graph(rng: random.Random, cfg: InstanceSeed) -> MetricGraph:
    nv = rng.randint(1, cfg.max_vertices)
    vertices = [f"v{i}" for i in range(nv)]
    edges: List[Edge] = []
    for i in range(1, nv):
        other = vertices[rng.randrange(i)]
        edges.append(
            Edge(f"e{len(edges)}", other, vertices[i], _rand_length(rng, cfg.denom_bound))
        )
    extra = rng.randint(0, cfg.max_edges - (nv - 1))
    for _ in range(extra):
        a = vertices[rng.randrange(nv)]
        b = vertices[rng.randrange(nv)]
        edges.append(Edge(f"e{len(edges)}", a, b, _rand_length(rng, cfg.denom_bound)))
    return MetricGraph(vertices, edges)


def random_surface(
    rng: random.Random,
    genus: int,
    slots: Sequence[Tuple[str, str]],
    denom_bound: int,
) -> VertexSurface:
    if genus == 0:
        base = genus_zero_surface(slots)
        points = dict(base.points)
        points["q0"] = ()
        return VertexSurface(0, (), base.marked, points)
    for _ in range(50):
        lattice = tuple(
            tuple(_rand_qc(rng, 12) for _ in range(genus)) for _ in range(2 * genus)
        )
        rows = [
            [x for z in vec for x in (z.re, z.im)] for vec in lattice
        ]
        if linalg.rank(rows) == 2 * genus:
            break
    else:  # pragma: no cover - vanishing probability
        raise BoundsInfeasible("could not draw an independent lattice")
    marked = {
        slot: tuple(_rand_qc(rng, denom_bound) for _ in range(genus)) for slot in slots
    }
    lat_combo = czero(genus)
    for vec in lattice:
        c = rng.randint(-2, 2)
        lat_combo = tuple(a + c * b for a, b in zip(lat_combo, vec))
    points = {
        "p0": czero(genus),
        "lat1": lat_combo,
        "near": tuple(z.scale(Fraction(1, 6)) for z in lattice[0]),
        "w1": tuple(_rand_qc(rng, denom_bound) for _ in range(genus)),
    }
    return VertexSurface(genus, lattice, marked, points)


def random_mcrs(
    rng: random.Random, cfg: InstanceSeed, force_positive_genus: bool = False
) -> MCRS:
    g = random_graph(rng, cfg)
    surfaces = {}
    for i, v in enumerate(g.vertices):
        genus = rng.randint(0, cfg.max_genus)
        if force_positive_genus and i == 0:
            genus = max(1, genus)
        surfaces[v] = random_surface(rng, genus, g.incidence[v], cfg.denom_bound)
    return MCRS(g, surfaces)


def random_graph_place(rng: random.Random, g: MetricGraph) -> GraphPlace:
    if not g.edges or rng.random() < 0.4:
        return vertex_place(g.vertices[rng.randrange(len(g.vertices))])
    e = g.edges[rng.randrange(len(g.edges))]
    t = e.length * Fraction(rng.randint(1, 11), 12)
    if t >= e.length:
        t = e.length * Fraction(11, 12)
    return GraphPlace(edge=e.id, offset=t)


def random_tropical_divisor(
    rng: random.Random, g: MetricGraph, cfg: InstanceSeed
) -> TropicalDivisor:
    coeffs: Dict[GraphPlace, int] = {}
    for _ in range(rng.randint(1, 3)):
        c = rng.randint(1, cfg.coeff_bound)
        p1 = random_graph_place(rng, g)
        p2 = random_graph_place(rng, g)
        coeffs[p1] = coeffs.get(p1, 0) + c
        coeffs[p2] = coeffs.get(p2, 0) - c
    return TropicalDivisor(g, coeffs)


def random_hybrid_place(rng: random.Random, m: MCRS) -> HybridPlace:
    g = m.graph
    kind = rng.random()
    v = g.vertices[rng.randrange(len(g.vertices))]
    s = m.surfaces[v]
    if kind < 0.4 and g.edges:
        e = g.edges[rng.randrange(len(g.edges))]
        t = e.length * Fraction(rng.randint(1, 11), 12)
        return HybridPlace(edge=e.id, offset=t)
    if kind < 0.7 and s.marked:
        slot = sorted(s.marked)[rng.randrange(len(s.marked))]
        return marked_point(v, slot)
    name = sorted(s.points)[rng.randrange(len(s.points))]
    return surface_point(v, name)


def random_hybrid_divisor(
    rng: random.Random, m: MCRS, cfg: InstanceSeed
) -> HybridDivisor:
    coeffs: Dict[HybridPlace, int] = {}
    for _ in range(rng.randint(1, 3)):
        c = rng.randint(1, cfg.coeff_bound)
        p1 = random_hybrid_place(rng, m)
        p2 = random_hybrid_place(rng, m)
        coeffs[p1] = coeffs.get(p1, 0) + c
        coeffs[p2] = coeffs.get(p2, 0) - c
    return HybridDivisor(m, coeffs)


# ---------------------------------------------------------------------------
# distance functions and random rational functions


def distance_function(g: MetricGraph, base: GraphPlace) -> PLFunction:
    """Shortest-path distance to a point, as an integer-slope PL function."""
    model, ref = refine(g, [base])
    src = ref.to_refined(base).vertex
    dist: Dict[str, Fraction] = {src: Fraction(0)}
    heap: List[Tuple[Fraction, str]] = [(Fraction(0), src)]
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for eid, end in model.incidence[v]:
            e = model.edge_map[eid]
            w = model.slot_neighbor(eid, end)
            nd = d + e.length
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    samples: Dict[GraphPlace, Fraction] = {}
    for v in model.vertices:
        samples[ref.to_base(vertex_place(v))] = dist[v]
    for e in model.edges:
        dt, dh = dist[e.tail], dist[e.head]
        t_peak = (dh - dt + e.length) / 2
        if 0 < t_peak < e.length:
            p = ref.to_base(model.place(e.id, t_peak))
            if not p.is_vertex:
                samples[p] = dt + t_peak
    return pl_from_samples(g, samples)


def random_rat_function(
    rng: random.Random, g: MetricGraph, cfg: InstanceSeed
) -> PLFunction:
    """Integer combination of clamped distance functions: always rational."""
    parts: List[PLFunction] = []
    coeffs: List[Fraction] = []
    for _ in range(rng.randint(1, 3)):
        f = distance_function(g, random_graph_place(rng, g))
        hi = max(f.values.values())
        if hi > 0 and rng.random() < 0.7:
            a = hi * Fraction(rng.randint(0, 5), 12)
            b = hi * Fraction(rng.randint(7, 12), 12)
            f = pl_clamp(f, a, b)
        parts.append(f)
        coeffs.append(Fraction(rng.choice([-2, -1, 1, 2])))
    return pl_combine(parts, coeffs)


def random_hybrid_function(
    rng: random.Random, m: MCRS, cfg: InstanceSeed
) -> HybridFunction:
    f_gamma = random_rat_function(rng, m.graph, cfg)
    classes: Dict[str, SurfaceDivisor] = {}
    for v in m.graph.vertices:
        s = m.surfaces[v]
        if s.genus > 0 and rng.random() < 0.7:
            c = rng.randint(1, 2)
            classes[v] = SurfaceDivisor(
                v,
                {
                    SurfacePointRef(v, name="lat1"): c,
                    SurfacePointRef(v, name="p0"): -c,
                },
            )
    return HybridFunction(f_gamma, classes)


# ---------------------------------------------------------------------------
# the independent matrix-tree oracle


def spanning_tree_weight(g: MetricGraph) -> Fraction:
    """Sum over spanning trees of the product of non-tree edge lengths.

    Computed via the conductance-weighted Laplacian minor; shares no code
    with the period-matrix construction.
    """
    verts = list(g.vertices)
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    lap = [[Fraction(0)] * n for _ in range(n)]
    product = Fraction(1)
    for e in g.edges:
        product *= e.length
        if e.is_loop():
            continue
        i, j = index[e.tail], index[e.head]
        c = Fraction(1) / e.length
        lap[i][i] += c
        lap[j][j] += c
        lap[i][j] -= c
        lap[j][i] -= c
    minor = [row[1:] for row in lap[1:]]
    return product * linalg.det(minor)


# ---------------------------------------------------------------------------
# suites


@dataclass
class SuiteResult:
    suite: str
    cases: int
    failures: List[Tuple[int, str]] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "failures": [
                {"seed": seed, "message": msg} for seed, msg in self.failures
            ],
            "ok": self.ok,
            "wall_time": self.wall_time,
        }


def _gamma_in_period_lattice(pd, gamma: Sequence[Fraction]) -> bool:
    x = linalg.solve([list(row) for row in pd.matrix], list(gamma))
    return linalg.is_integral(x)


def transform_gamma(pd_from, pd_to, gamma: Sequence[Fraction]) -> List[Fraction]:
    """Re-express a graph-block functional in another fundamental-cycle basis.

    Cycle i of the target basis is an integer combination of the source
    cycles; its coefficients can be read off on the source non-tree edges.
    """
    out = []
    for cyc in pd_to.basis.cycles:
        val = Fraction(0)
        for j, eid in enumerate(pd_from.basis.nontree_edges):
            c = cyc.get(eid, 0)
            if c:
                val += c * gamma[j]
        out.append(val)
    return out


def _case_tree_theorem(cfg: InstanceSeed) -> None:
    rng = _rng(cfg)
    max_edges = min(cfg.max_edges, 8)
    small = InstanceSeed(cfg.seed, min(cfg.max_vertices, max_edges + 1), max_edges,
                         cfg.max_genus, cfg.coeff_bound, cfg.denom_bound)
    g = random_graph(rng, small)
    pd = period_matrix(g)
    expected = spanning_tree_weight(g)
    got = linalg.det([list(row) for row in pd.matrix])
    if got != expected:
        raise AssertionError(f"det {got} != tree weight {expected}")


def _case_oracle_agreement(cfg: InstanceSeed) -> None:
    rng = _rng(cfg)
    g = random_graph(rng, cfg)
    pd = period_matrix(g)
    # a generic divisor: the two routes must agree (asserted internally)
    d = random_tropical_divisor(rng, g, cfg)
    res = is_principal_tropical(pd, d)
    if res.is_principal:
        assert divisor_of_pl(res.witness).coeffs == d.coeffs
    # a known-principal divisor: round trip through divisor_of_pl
    f = random_rat_function(rng, g, cfg)
    res2 = is_principal_tropical(pd, divisor_of_pl(f))
    if not res2.is_principal:
        raise AssertionError("divisor of a rational function judged non-principal")


def _case_extension_zero(cfg: InstanceSeed) -> None:
    rng = _rng(cfg)
    m = random_mcrs(rng, cfg)
    pd = period_matrix(m.graph)
    lat = hybrid_lattice(m, pd)
    f_gamma = random_rat_function(rng, m.graph, cfg)
    extended = HybridFunction(f_gamma, {})
    d = divisor_of_hybrid(m, extended)
    coords = aj_hybrid(m, d, pd=pd)
    ok, _ = lat.membership(coords)
    if not ok:
        raise AssertionError("image of an extended graph function not in the lattice")


def _case_diagram(cfg: InstanceSeed) -> None:
    rng = _rng(cfg)
    m = random_mcrs(rng, cfg)
    pd = period_matrix(m.graph)
    # left square: per-vertex degree-0 divisors map to pure surface blocks
    coeffs: Dict[HybridPlace, int] = {}
    for v in m.graph.vertices:
        s = m.surfaces[v]
        names = sorted(s.points)
        if len(names) >= 2 and rng.random() < 0.8:
            a, b = rng.sample(names, 2)
            c = rng.randint(1, cfg.coeff_bound)
            coeffs[surface_point(v, a)] = coeffs.get(surface_point(v, a), 0) + c
            coeffs[surface_point(v, b)] = coeffs.get(surface_point(v, b), 0) - c
    d = HybridDivisor(m, coeffs)
    coords = aj_hybrid(m, d, pd=pd)
    if any(x != 0 for x in coords.gamma):
        raise AssertionError("graph block of a surface-supported divisor is nonzero")
    for v in m.graph.vertices:
        expect = aj_surface(m.surfaces[v], d.vertex_part(v))
        if coords.blocks[v] != expect:
            raise AssertionError(f"block {v} disagrees with the surface map")
    # right square: graph block projects onto the tropical image mod periods
    d2 = random_hybrid_divisor(rng, m, cfg)
    coords2 = aj_hybrid(m, d2, pd=pd)
    trop = aj_tropical(pd, gamma_part(m, d2))
    diff = [a - b for a, b in zip(coords2.gamma, trop)]
    if not _gamma_in_period_lattice(pd, diff):
        raise AssertionError("graph block does not project onto the tropical image")


def _case_ses(cfg: InstanceSeed) -> None:
    rng = _rng(cfg)
    m = random_mcrs(rng, cfg)
    ses_properties(rng, m, cfg)


def ses_properties(rng: random.Random, m: MCRS, cfg: InstanceSeed) -> None:
    """Exactness properties of the surface/graph decomposition on one complex."""
    pd = period_matrix(m.graph)
    lat = hybrid_lattice(m, pd)
    # (a) vertex-supported divisors: principal on the complex iff per surface
    coeffs: Dict[HybridPlace, int] = {}
    truth = True
    for v in m.graph.vertices:
        s = m.surfaces[v]
        names = sorted(s.points)
        if len(names) >= 2 and rng.random() < 0.8:
            a, b = rng.sample(names, 2)
            c = rng.randint(1, cfg.coeff_bound)
            coeffs[surface_point(v, a)] = coeffs.get(surface_point(v, a), 0) + c
            coeffs[surface_point(v, b)] = coeffs.get(surface_point(v, b), 0) - c
    d = HybridDivisor(m, coeffs)
    for v in m.graph.vertices:
        s = m.surfaces[v]
        if not reduce_mod_lattice(s, aj_surface(s, d.vertex_part(v))).in_lattice:
            truth = False
    verdict = is_principal_hybrid(m, d, pd=pd, lat=lat)
    if verdict.is_principal != truth:
        raise AssertionError("vertex-supported principality mismatch")
    # (b) lifting is a section of the graph projection and preserves
    # principality: a principal graph divisor lifts along its witness's slope
    # distribution to a principal divisor, and a principal lift projects to a
    # principal graph divisor.  (Moving vertex chips to the basepoints instead
    # changes the class by the slope-weighted marked-point sums, which need
    # not be lattice elements, so that lift only preserves principality one
    # way.)
    d_gamma = random_tropical_divisor(rng, m.graph, cfg)
    lifted = lift_divisor(m, d_gamma)
    if gamma_part(m, lifted).coeffs != d_gamma.coeffs:
        raise AssertionError("basepoint lift is not a section")
    trop = is_principal_tropical(pd, d_gamma)
    hyb_ok = is_principal_hybrid(m, lifted, pd=pd, lat=lat).is_principal
    if hyb_ok and not trop.is_principal:
        raise AssertionError("principal lift with non-principal graph part")
    if trop.is_principal:
        witness_lift = divisor_of_hybrid(m, HybridFunction(trop.witness, {}))
        if gamma_part(m, witness_lift).coeffs != d_gamma.coeffs:
            raise AssertionError("witness lift is not a section")
        if not is_principal_hybrid(m, witness_lift, pd=pd, lat=lat).is_principal:
            raise AssertionError("witness lift of a principal divisor not principal")
    # (c) base-vertex and spanning-tree independence of the Abel-Jacobi map
    d2 = random_hybrid_divisor(rng, m, cfg)
    verts = m.graph.vertices
    c1 = aj_hybrid(m, d2, base_vertex=verts[0], pd=pd)
    c2 = aj_hybrid(m, d2, base_vertex=verts[rng.randrange(len(verts))], pd=pd)
    ok, _ = lat.membership(c1 - c2)
    if not ok:
        raise AssertionError("base-vertex change is not a lattice translate")
    order = sorted((e.id for e in m.graph.edges), reverse=True)
    pd2 = period_matrix(m.graph, cycle_basis(m.graph, order))
    lat2 = hybrid_lattice(m, pd2)
    c3 = aj_hybrid(m, d2, pd=pd2)
    moved = HybridCoordinates(c1.blocks, tuple(transform_gamma(pd, pd2, c1.gamma)))
    ok2, _ = lat2.membership(moved - c3)
    if not ok2:
        raise AssertionError("tree change is not a lattice translate")


def _case_chipfire(cfg: InstanceSeed) -> None:
    rng = _rng(cfg)
    g = random_graph(rng, cfg)
    f = random_rat_function(rng, g, cfg)
    moves = decompose_chip_firing(f)
    for mv in moves:
        validate_move(mv)
    lo = min(f.values.values())
    if not moves:
        if len(set(f.values.values())) != 1:
            raise AssertionError("non-constant function decomposed into no moves")
        return
    total = pl_combine([mv.function for mv in moves], [Fraction(1)] * len(moves))
    diff = pl_combine([total, f], [Fraction(1), Fraction(-1)])
    residues = set(diff.values.values())
    if residues != {-lo}:
        raise AssertionError(f"moves do not sum to the function: {residues}")


def _case_invariance(cfg: InstanceSeed) -> None:
    rng = _rng(cfg)
    g = random_graph(rng, cfg)
    pd = period_matrix(g)
    d = random_tropical_divisor(rng, g, cfg)
    verdict = is_principal_tropical(pd, d).is_principal
    # refinement invariance
    cuts = [random_graph_place(rng, g) for _ in range(2)]
    g2, ref = refine(g, cuts)
    pd2 = period_matrix(g2)
    moved = TropicalDivisor(
        g2, _merge_places([(ref.to_refined(p), c) for p, c in d.coeffs.items()])
    )
    if is_principal_tropical(pd2, moved).is_principal != verdict:
        raise AssertionError("verdict changed under refinement")
    # tree invariance
    order = sorted((e.id for e in g.edges), reverse=True)
    pd3 = period_matrix(g, cycle_basis(g, order))
    if is_principal_tropical(pd3, d).is_principal != verdict:
        raise AssertionError("verdict changed under spanning-tree change")
    # basepoint independence of the tropical map
    p1 = vertex_place(g.vertices[0])
    p2 = random_graph_place(rng, g)
    a1 = aj_tropical(pd, d, p1)
    a2 = aj_tropical(pd, d, p2)
    diff = [x - y for x, y in zip(a1, a2)]
    if not _gamma_in_period_lattice(pd, diff):
        raise AssertionError("basepoint change is not a period translate")


def _merge_places(pairs: Sequence[Tuple[GraphPlace, int]]) -> Dict[GraphPlace, int]:
    out: Dict[GraphPlace, int] = {}
    for p, c in pairs:
        out[p] = out.get(p, 0) + c
    return out


SUITES: Dict[str, Callable[[InstanceSeed], None]] = {
    "tree-theorem": _case_tree_theorem,
    "oracle-agreement": _case_oracle_agreement,
    "extension-zero": _case_extension_zero,
    "diagram": _case_diagram,
    "ses": _case_ses,
    "chipfire": _case_chipfire,
    "invariance": _case_invariance,
}


def run_property_suite(name: str, cfg: InstanceSeed, cases: int) -> SuiteResult:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {sorted(SUITES)}")
    cfg.check()
    case_fn = SUITES[name]
    result = SuiteResult(name, cases)
    start = time.monotonic()
    for i in range(cases):
        derived = cfg.derive(i)
        try:
            case_fn(derived)
        except Exception as exc:  # noqa: BLE001 - failures are data here
            result.failures.append((derived.seed, f"{type(exc).__name__}: {exc}"))
    result.wall_time = time.monotonic() - start
    return result


@dataclass
class RandomInstance:
    mcrs: MCRS
    divisors: List[HybridDivisor]
    pl_functions: List[PLFunction]
    hybrid_functions: List[HybridFunction]


def random_instance(cfg: InstanceSeed) -> RandomInstance:
    """Deterministic bundle of a complex with sample divisors and functions."""
    cfg.check()
    rng = _rng(cfg)
    m = random_mcrs(rng, cfg)
    divisors = [random_hybrid_divisor(rng, m, cfg) for _ in range(3)]
    pls = [random_rat_function(rng, m.graph, cfg) for _ in range(2)]
    hybrids = [random_hybrid_function(rng, m, cfg) for _ in range(2)]
    for h in hybrids:
        h.validate(m)
    return RandomInstance(m, divisors, pls, hybrids)
