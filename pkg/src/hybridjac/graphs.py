"""Finite models of metric graphs: refinement, genus, spanning trees, cycles, paths.

Orientation convention: each edge is stored as (tail, head) in input order and
keeps that orientation forever.  Offsets on an edge are measured from the tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import Disconnected, DuplicateId, NonpositiveLength, PlaceOffGraph
from .rationals import rat


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: Fraction

    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class GraphPlace:
    """A point of the geometric realization: a vertex or an edge-interior point.

    Exactly one of ``vertex`` / (``edge``, ``offset``) is set.  Offsets 0 and
    l(e) never appear: they normalize to the corresponding vertex.
    """

    vertex: Optional[str] = None
    edge: Optional[str] = None
    offset: Optional[Fraction] = None

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"Place({self.vertex})"
        return f"Place({self.edge}@{self.offset})"


def vertex_place(v: str) -> GraphPlace:
    return GraphPlace(vertex=v)


@dataclass(frozen=True)
class ChainSegment:
    """Oriented sub-interval of one edge: traversed [lo, hi] in +/- direction."""

    edge: str
    direction: int  # +1 along tail->head, -1 against
    lo: Fraction
    hi: Fraction


@dataclass(frozen=True)
class SignedEdgeChain:
    start: GraphPlace
    end: GraphPlace
    segments: Tuple[ChainSegment, ...]


class MetricGraph:
    """Immutable connected multigraph with positive rational edge lengths."""

    def __init__(self, vertices: Sequence[str], edges: Sequence[Edge]):
        vs = list(vertices)
        if not vs:
            raise Disconnected("a metric graph needs at least one vertex")
        if len(set(vs)) != len(vs):
            raise DuplicateId("duplicate vertex id")
        ids = [e.id for e in edges]
        if len(set(ids)) != len(ids):
            raise DuplicateId("duplicate edge id")
        vset = set(vs)
        for e in edges:
            if e.tail not in vset or e.head not in vset:
                raise PlaceOffGraph(f"edge {e.id} touches unknown vertex")
            if e.length <= 0:
                raise NonpositiveLength(f"edge {e.id} has length {e.length}")
        self.vertices: Tuple[str, ...] = tuple(vs)
        self.edges: Tuple[Edge, ...] = tuple(edges)
        self.edge_map: Dict[str, Edge] = {e.id: e for e in edges}
        incidence: Dict[str, List[Tuple[str, str]]] = {v: [] for v in vs}
        for e in edges:
            incidence[e.tail].append((e.id, "tail"))
            incidence[e.head].append((e.id, "head"))
        for v in incidence:
            incidence[v].sort()
        self.incidence: Dict[str, Tuple[Tuple[str, str], ...]] = {
            v: tuple(slots) for v, slots in incidence.items()
        }
        self._check_connected()

    def _check_connected(self) -> None:
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for eid, end in self.incidence[v]:
                e = self.edge_map[eid]
                w = e.head if end == "tail" else e.tail
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(self.vertices):
            raise Disconnected("graph is not connected")

    def genus(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def place(self, edge_id: str, offset: Fraction) -> GraphPlace:
        """Build a normalized place on this graph; endpoints become vertices."""
        e = self.edge_map.get(edge_id)
        if e is None:
            raise PlaceOffGraph(f"unknown edge {edge_id}")
        offset = rat(offset)
        if offset < 0 or offset > e.length:
            raise PlaceOffGraph(f"offset {offset} outside [0, {e.length}] on {edge_id}")
        if offset == 0:
            return vertex_place(e.tail)
        if offset == e.length:
            return vertex_place(e.head)
        return GraphPlace(edge=edge_id, offset=offset)

    def check_place(self, p: GraphPlace) -> None:
        if p.is_vertex:
            if p.vertex not in self.incidence:
                raise PlaceOffGraph(f"unknown vertex {p.vertex}")
            return
        e = self.edge_map.get(p.edge)
        if e is None:
            raise PlaceOffGraph(f"unknown edge {p.edge}")
        if not (0 < p.offset < e.length):
            raise PlaceOffGraph(f"offset {p.offset} not interior to {p.edge}")

    def slot_neighbor(self, eid: str, end: str) -> str:
        e = self.edge_map[eid]
        return e.head if end == "tail" else e.tail


def build_graph(
    vertices: Sequence[str],
    edges: Sequence[Tuple[str, str, str, object]],
) -> MetricGraph:
    """Build a validated graph from (id, tail, head, length) tuples."""
    parsed = []
    for eid, tail, head, length in edges:
        l = rat(length)
        if l <= 0:
            raise NonpositiveLength(f"edge {eid} has length {l}")
        parsed.append(Edge(eid, tail, head, l))
    return MetricGraph(vertices, parsed)


# ---------------------------------------------------------------------------
# refinement


class Refinement:
    """Maps places between a base graph and a refinement of it.

    Each base edge is split into an ordered run of sub-edges; every new
    vertex remembers the base place it came from.
    """

    def __init__(
        self,
        base: MetricGraph,
        refined: MetricGraph,
        edge_segments: Mapping[str, Sequence[Tuple[str, Fraction, Fraction]]],
    ):
        self.base = base
        self.refined = refined
        # base edge id -> ordered [(refined edge id, lo, hi)] covering [0, l]
        self.edge_segments: Dict[str, Tuple[Tuple[str, Fraction, Fraction], ...]] = {
            k: tuple(v) for k, v in edge_segments.items()
        }
        self._seg_of_refined: Dict[str, Tuple[str, Fraction, Fraction]] = {}
        for beid, segs in self.edge_segments.items():
            for reid, lo, hi in segs:
                self._seg_of_refined[reid] = (beid, lo, hi)

    def to_refined(self, p: GraphPlace) -> GraphPlace:
        """Image of a base place in the refined graph."""
        if p.is_vertex:
            return p
        for reid, lo, hi in self.edge_segments[p.edge]:
            if lo <= p.offset <= hi:
                return self.refined.place(reid, p.offset - lo)
        raise PlaceOffGraph(f"offset {p.offset} not covered on {p.edge}")

    def to_base(self, p: GraphPlace) -> GraphPlace:
        """Preimage of a refined place as a base place."""
        if p.is_vertex:
            if p.vertex in self.base.incidence:
                return p
            # split vertex: locate it as an endpoint of some refined segment
            for beid, segs in self.edge_segments.items():
                for reid, lo, hi in segs:
                    re = self.refined.edge_map[reid]
                    if re.tail == p.vertex:
                        return self.base.place(beid, lo)
                    if re.head == p.vertex:
                        return self.base.place(beid, hi)
            raise PlaceOffGraph(f"vertex {p.vertex} unknown to refinement")
        beid, lo, _hi = self._seg_of_refined[p.edge]
        return self.base.place(beid, lo + p.offset)


def refine(g: MetricGraph, places: Iterable[GraphPlace]) -> Tuple[MetricGraph, Refinement]:
    """Insert a vertex at each requested interior place."""
    cuts: Dict[str, List[Fraction]] = {}
    for p in places:
        g.check_place(p)
        if not p.is_vertex:
            cuts.setdefault(p.edge, []).append(p.offset)
    vertices = list(g.vertices)
    new_edges: List[Edge] = []
    edge_segments: Dict[str, List[Tuple[str, Fraction, Fraction]]] = {}
    for e in g.edges:
        offs = sorted(set(cuts.get(e.id, [])))
        if not offs:
            new_edges.append(e)
            edge_segments[e.id] = [(e.id, Fraction(0), e.length)]
            continue
        bounds = [Fraction(0)] + offs + [e.length]
        names = [e.tail]
        for off in offs:
            name = f"{e.id}@{off}"
            vertices.append(name)
            names.append(name)
        names.append(e.head)
        segs = []
        for k in range(len(bounds) - 1):
            reid = f"{e.id}#{k}"
            new_edges.append(Edge(reid, names[k], names[k + 1], bounds[k + 1] - bounds[k]))
            segs.append((reid, bounds[k], bounds[k + 1]))
        edge_segments[e.id] = segs
    refined = MetricGraph(vertices, new_edges)
    return refined, Refinement(g, refined, edge_segments)


# ---------------------------------------------------------------------------
# spanning tree and fundamental cycles


@dataclass(frozen=True)
class CycleBasis:
    """Deterministic spanning tree with one fundamental cycle per extra edge."""

    graph: MetricGraph
    root: str
    tree_edges: Tuple[str, ...]  # in discovery order
    parent: Mapping[str, Tuple[str, int]]  # vertex -> (edge id, dir toward root)
    cycles: Tuple[Mapping[str, int], ...]  # one integer vector per non-tree edge
    nontree_edges: Tuple[str, ...]

    @property
    def genus(self) -> int:
        return len(self.cycles)


def cycle_basis(g: MetricGraph, edge_order: Optional[Sequence[str]] = None) -> CycleBasis:
    """DFS spanning tree (lowest ids first by default) plus fundamental cycles.

    ``edge_order`` overrides the exploration preference, which yields a
    different (still deterministic) spanning tree for invariance tests.
    """
    if edge_order is None:
        rank_of = {e.id: i for i, e in enumerate(sorted(g.edges, key=lambda e: e.id))}
    else:
        rank_of = {eid: i for i, eid in enumerate(edge_order)}
    root = min(g.vertices)
    parent: Dict[str, Tuple[str, int]] = {}
    tree: List[str] = []
    visited = {root}
    stack = [root]
    while stack:
        v = stack.pop()
        slots = sorted(g.incidence[v], key=lambda s: (rank_of[s[0]], s[1]))
        for eid, end in slots:
            e = g.edge_map[eid]
            w = g.slot_neighbor(eid, end)
            if w in visited:
                continue
            visited.add(w)
            tree.append(eid)
            # direction from w back toward v along e
            parent[w] = (eid, +1 if e.tail == w else -1)
            stack.append(w)
    tree_set = set(tree)
    nontree = [e.id for e in g.edges if e.id not in tree_set]
    cycles = []
    for eid in nontree:
        e = g.edge_map[eid]
        vec: Dict[str, int] = {eid: 1}
        # close up through the tree from head back to tail
        for teid, d in _tree_walk(g, parent, root, e.head, e.tail):
            vec[teid] = vec.get(teid, 0) + d
            if vec[teid] == 0:
                del vec[teid]
        cycles.append(vec)
    return CycleBasis(
        graph=g,
        root=root,
        tree_edges=tuple(tree),
        parent=dict(parent),
        cycles=tuple(cycles),
        nontree_edges=tuple(nontree),
    )


def _path_to_root(
    g: MetricGraph, parent: Mapping[str, Tuple[str, int]], root: str, v: str
) -> List[Tuple[str, int]]:
    out = []
    while v != root:
        eid, d = parent[v]
        out.append((eid, d))
        e = g.edge_map[eid]
        v = e.head if d == +1 else e.tail
    return out


def _tree_walk(
    g: MetricGraph,
    parent: Mapping[str, Tuple[str, int]],
    root: str,
    src: str,
    dst: str,
) -> List[Tuple[str, int]]:
    """Directed tree edges from src to dst (edge id, traversal direction)."""
    up_src = _path_to_root(g, parent, root, src)
    up_dst = _path_to_root(g, parent, root, dst)
    # strip the common suffix toward the root
    while up_src and up_dst and up_src[-1] == up_dst[-1]:
        up_src.pop()
        up_dst.pop()
    down_dst = [(eid, -d) for eid, d in reversed(up_dst)]
    return up_src + down_dst


def tree_walk(basis: CycleBasis, src: str, dst: str) -> List[Tuple[str, int]]:
    """Public wrapper: directed tree edges from vertex src to vertex dst."""
    return _tree_walk(basis.graph, basis.parent, basis.root, src, dst)


def _anchor(g: MetricGraph, p: GraphPlace) -> str:
    """Vertex from which a place is reached: itself, or the tail of its edge."""
    if p.is_vertex:
        return p.vertex
    return g.edge_map[p.edge].tail


def tree_path(
    g: MetricGraph, basis: CycleBasis, src: GraphPlace, dst: GraphPlace
) -> SignedEdgeChain:
    """Deterministic chain from src to dst: tree route between the anchor
    vertices, with each edge-interior endpoint reached from its own tail."""
    g.check_place(src)
    g.check_place(dst)
    if src == dst:
        return SignedEdgeChain(src, dst, ())
    segments: List[ChainSegment] = []
    if not src.is_vertex:
        segments.append(ChainSegment(src.edge, -1, Fraction(0), src.offset))
    for eid, d in tree_walk(basis, _anchor(g, src), _anchor(g, dst)):
        segments.append(ChainSegment(eid, d, Fraction(0), g.edge_map[eid].length))
    if not dst.is_vertex:
        segments.append(ChainSegment(dst.edge, +1, Fraction(0), dst.offset))
    return SignedEdgeChain(src, dst, tuple(segments))


def integrate_chain(chain: SignedEdgeChain, form: Mapping[str, int]) -> Fraction:
    """Integrate a harmonic 1-form (edge coefficient vector) over a chain."""
    total = Fraction(0)
    for seg in chain.segments:
        coeff = form.get(seg.edge, 0)
        if coeff:
            total += seg.direction * coeff * (seg.hi - seg.lo)
    return total


def chain_edge_vector(chain: SignedEdgeChain) -> Dict[str, Fraction]:
    """Net signed length traversed per edge (full edges give +/- l(e))."""
    out: Dict[str, Fraction] = {}
    for seg in chain.segments:
        out[seg.edge] = out.get(seg.edge, Fraction(0)) + seg.direction * (seg.hi - seg.lo)
        if out[seg.edge] == 0:
            del out[seg.edge]
    return out
