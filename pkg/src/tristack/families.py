"""Piecewise-linear families of triangles over finite graph bases.

A family is presented by exact charts: every edge of the base graph
carries a PL path of edge-length triples inside the open cone M, and
every (vertex, incident edge-end) carries a vertex-relabeling
permutation transporting the chart's endpoint value to the single fiber
stored at the vertex.  Because M is convex, interpolation between
breakpoints stays inside M for free, so the breakpoint data is the whole
family.

Isomorphism of families is decided by a finite constraint search.  The
keystone is the locally-constant lemma: a continuous fiberwise-isometric
identification of two nondegenerate families induces a vertex-label
permutation at every base point, and since the vertices of a
nondegenerate triangle are pairwise distinct and move continuously, that
permutation is constant on open edges and matches up at vertices.  Per
edge there is therefore one unknown permutation, constrained by chart
equality and vertex-end compatibility; the search below is complete for
exactly that reason.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import trigeo
from .trigeo import (
    PERMS,
    NotInM,
    TriangleLengths,
    act,
    act_tuple,
    compose,
    inverse,
)

F0 = Fraction(0)
F1 = Fraction(1)


class FamilyError(ValueError):
    pass


class FiberNotInM(FamilyError):
    pass


class GlueInconsistent(FamilyError):
    pass


class NotOriented(FamilyError):
    pass


class DifferentBase(FamilyError):
    pass


class IllTypedMap(FamilyError):
    pass


# -- base graphs ---------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    id: str
    frm: str
    to: str


class BaseGraph:
    def __init__(self, vertices, edges):
        self.vertices = tuple(sorted(vertices))
        self.edges = {e.id: e for e in sorted(edges, key=lambda e: e.id)}
        for e in self.edges.values():
            if e.frm not in self.vertices or e.to not in self.vertices:
                raise FamilyError(f"edge {e.id} has unknown endpoint")

    def incident_ends(self, v):
        """(edge id, end) pairs at v; a loop contributes both ends."""
        out = []
        for e in self.edges.values():
            if e.frm == v:
                out.append((e.id, "from"))
            if e.to == v:
                out.append((e.id, "to"))
        return out

    def components(self):
        seen, comps = set(), []
        adj = {v: set() for v in self.vertices}
        for e in self.edges.values():
            adj[e.frm].add(e.to)
            adj[e.to].add(e.frm)
        for v in self.vertices:
            if v in seen:
                continue
            comp, stack = [], [v]
            while stack:
                u = stack.pop()
                if u in seen:
                    continue
                seen.add(u)
                comp.append(u)
                stack.extend(adj[u] - seen)
            comps.append(sorted(comp))
        return comps

    def __eq__(self, other):
        return (
            isinstance(other, BaseGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __repr__(self):
        return f"BaseGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


def graph(vertices, edges) -> BaseGraph:
    return BaseGraph(vertices, [Edge(*e) if not isinstance(e, Edge) else e for e in edges])


# -- charts --------------------------------------------------------------------
# A chart is a tuple of (time, TriangleLengths) with strictly increasing
# exact times from 0 to 1.


def make_chart(points) -> tuple:
    out = []
    for t, v in points:
        t = Fraction(t)
        if not isinstance(v, TriangleLengths):
            v = TriangleLengths(*v)
        out.append((t, v))
    if not out or out[0][0] != 0 or out[-1][0] != 1:
        raise FamilyError("chart must start at 0 and end at 1")
    for (t0, _), (t1, _) in zip(out, out[1:]):
        if not t0 < t1:
            raise FamilyError("chart times must increase strictly")
    return tuple(out)


def chart_breaks(chart):
    return [t for t, _ in chart]


def chart_eval_tuple(chart, t: Fraction):
    t = Fraction(t)
    if not F0 <= t <= F1:
        raise FamilyError(f"chart parameter {t} outside [0,1]")
    for (t0, v0), (t1, v1) in zip(chart, chart[1:]):
        if t0 <= t <= t1:
            if t == t0:
                return v0.astuple()
            if t == t1:
                return v1.astuple()
            lam = (t - t0) / (t1 - t0)
            a, b = v0.astuple(), v1.astuple()
            return tuple(ai + lam * (bi - ai) for ai, bi in zip(a, b))
    raise FamilyError(f"chart parameter {t} not covered")


def chart_eval(chart, t) -> TriangleLengths:
    return TriangleLengths(*chart_eval_tuple(chart, t))


def chart_refine(chart, times):
    ts = sorted(set(chart_breaks(chart)) | {Fraction(t) for t in times})
    return tuple((t, chart_eval(chart, t)) for t in ts)


def chart_act(g: str, chart):
    return tuple((t, act(g, v)) for t, v in chart)


def chart_reparam(chart, a: Fraction, b: Fraction):
    """Chart of t -> old(a + (b-a) t); reverses when b < a."""
    a, b = Fraction(a), Fraction(b)
    if a == b:
        raise FamilyError("degenerate reparametrization")
    inner = [
        (t - a) / (b - a)
        for t in chart_breaks(chart)
        if min(a, b) < t < max(a, b)
    ]
    ts = sorted({F0, F1, *inner})
    return tuple((s, chart_eval(chart, a + (b - a) * s)) for s in ts)


# -- families ------------------------------------------------------------------


@dataclass(frozen=True)
class PLFamily:
    base: BaseGraph
    vertex_lengths: dict          # vertex -> TriangleLengths
    charts: dict                  # edge id -> chart
    glue_from: dict               # edge id -> Perm
    glue_to: dict                 # edge id -> Perm

    def glue(self, edge_id, end):
        return self.glue_from[edge_id] if end == "from" else self.glue_to[edge_id]

    def is_presented_oriented(self) -> bool:
        return all(g == "e" for g in self.glue_from.values()) and all(
            g == "e" for g in self.glue_to.values()
        )


def validate_family(raw) -> PLFamily:
    """Check fibers, chart shape and glue consistency; returns the family.

    Accepts a PLFamily or the JSON-shaped dict (vertices with lengths,
    edges with charts and glue labels).
    """
    if isinstance(raw, dict):
        raw = family_from_json(raw)
    fam: PLFamily = raw
    for v in fam.base.vertices:
        if v not in fam.vertex_lengths:
            raise FamilyError(f"vertex {v} has no fiber")
        if not isinstance(fam.vertex_lengths[v], TriangleLengths):
            raise FiberNotInM((v, fam.vertex_lengths[v]))
    for eid, e in fam.base.edges.items():
        chart = fam.charts.get(eid)
        if chart is None:
            raise FamilyError(f"edge {eid} has no chart")
        make_chart(chart)  # re-checks shape; values are TriangleLengths already
        for g in (fam.glue_from[eid], fam.glue_to[eid]):
            if g not in PERMS:
                raise FamilyError(f"edge {eid} glue {g} is not a permutation label")
        start, end = chart[0][1], chart[-1][1]
        if act(fam.glue_from[eid], start) != fam.vertex_lengths[e.frm]:
            raise GlueInconsistent(e.frm)
        if act(fam.glue_to[eid], end) != fam.vertex_lengths[e.to]:
            raise GlueInconsistent(e.to)
    return fam


def family(base: BaseGraph, vertex_lengths, charts, glue_from=None, glue_to=None) -> PLFamily:
    glue_from = glue_from or {e: "e" for e in base.edges}
    glue_to = glue_to or {e: "e" for e in base.edges}
    vl = {}
    for v, t in vertex_lengths.items():
        try:
            vl[v] = t if isinstance(t, TriangleLengths) else TriangleLengths(*t)
        except NotInM as err:
            raise FiberNotInM((v, t)) from err
    built_charts = {}
    for e, c in charts.items():
        try:
            built_charts[e] = make_chart(c)
        except NotInM as err:
            raise FiberNotInM((e, c)) from err
    built = PLFamily(base, vl, built_charts, dict(glue_from), dict(glue_to))
    return validate_family(built)


def constant_family(base: BaseGraph, fiber) -> PLFamily:
    t = fiber if isinstance(fiber, TriangleLengths) else TriangleLengths(*fiber)
    return family(
        base,
        {v: t for v in base.vertices},
        {e: ((F0, t), (F1, t)) for e in base.edges},
    )


def point_family(fiber) -> PLFamily:
    return constant_family(graph(["p"], []), fiber)


def twist_family(fam: PLFamily, sigma: str) -> PLFamily:
    """Isomorphic copy with every fiber hit by the same global permutation."""
    return PLFamily(
        fam.base,
        {v: act(sigma, t) for v, t in fam.vertex_lengths.items()},
        {e: chart_act(sigma, c) for e, c in fam.charts.items()},
        {e: compose(sigma, compose(g, inverse(sigma))) for e, g in fam.glue_from.items()},
        {e: compose(sigma, compose(g, inverse(sigma))) for e, g in fam.glue_to.items()},
    )


# -- graph maps and pullback ---------------------------------------------------
# Points of a graph: ("vertex", v) or ("edge", e, t) with 0 < t < 1.
# Edge images: ("point", point) or ("segment", edge, a, b) with a != b.


def canonical_point(g: BaseGraph, e: str, t: Fraction):
    t = Fraction(t)
    if t == 0:
        return ("vertex", g.edges[e].frm)
    if t == 1:
        return ("vertex", g.edges[e].to)
    if not F0 < t < F1:
        raise IllTypedMap(f"parameter {t} outside [0,1] on edge {e}")
    return ("edge", e, t)


@dataclass(frozen=True)
class GraphMap:
    dom: BaseGraph
    cod: BaseGraph
    vertex_image: dict
    edge_image: dict


def validate_graph_map(m: GraphMap) -> GraphMap:
    for v in m.dom.vertices:
        p = m.vertex_image.get(v)
        if p is None:
            raise IllTypedMap(f"vertex {v} has no image")
        if p[0] == "vertex":
            if p[1] not in m.cod.vertices:
                raise IllTypedMap(f"vertex {v} maps to unknown vertex")
        elif p[0] == "edge":
            if p[1] not in m.cod.edges or not F0 < Fraction(p[2]) < F1:
                raise IllTypedMap(f"vertex {v} maps to a non-point")
        else:
            raise IllTypedMap(f"vertex {v} image malformed")
    for eid, e in m.dom.edges.items():
        img = m.edge_image.get(eid)
        if img is None:
            raise IllTypedMap(f"edge {eid} has no image")
        if img[0] == "point":
            if m.vertex_image[e.frm] != img[1] or m.vertex_image[e.to] != img[1]:
                raise IllTypedMap(f"constant edge {eid} disagrees with endpoint images")
        elif img[0] == "segment":
            _, ce, a, b = img
            a, b = Fraction(a), Fraction(b)
            if ce not in m.cod.edges or a == b or not (F0 <= a <= F1 and F0 <= b <= F1):
                raise IllTypedMap(f"edge {eid} segment malformed")
            if m.vertex_image[e.frm] != canonical_point(m.cod, ce, a):
                raise IllTypedMap(f"edge {eid} start disagrees with vertex image")
            if m.vertex_image[e.to] != canonical_point(m.cod, ce, b):
                raise IllTypedMap(f"edge {eid} end disagrees with vertex image")
        else:
            raise IllTypedMap(f"edge {eid} image malformed")
    return m


def graph_map(dom, cod, vertex_image, edge_image) -> GraphMap:
    vi = {}
    for v, p in vertex_image.items():
        if p[0] == "edge":
            vi[v] = canonical_point(cod, p[1], Fraction(p[2]))
        else:
            vi[v] = p
    ei = {}
    for e, img in edge_image.items():
        if img[0] == "segment":
            ei[e] = ("segment", img[1], Fraction(img[2]), Fraction(img[3]))
        else:
            ei[e] = img
    return validate_graph_map(GraphMap(dom, cod, vi, ei))


def identity_graph_map(g: BaseGraph) -> GraphMap:
    return graph_map(
        g,
        g,
        {v: ("vertex", v) for v in g.vertices},
        {e: ("segment", e, 0, 1) for e in g.edges},
    )


def map_point(m: GraphMap, p):
    if p[0] == "vertex":
        return m.vertex_image[p[1]]
    _, e, t = p
    img = m.edge_image[e]
    if img[0] == "point":
        return img[1]
    _, ce, a, b = img
    return canonical_point(m.cod, ce, a + (b - a) * Fraction(t))


def compose_graph_maps(g: GraphMap, f: GraphMap) -> GraphMap:
    """g after f."""
    if f.cod != g.dom:
        raise IllTypedMap("maps not composable")
    vi = {v: map_point(g, p) for v, p in f.vertex_image.items()}
    ei = {}
    for e, img in f.edge_image.items():
        if img[0] == "point":
            ei[e] = ("point", map_point(g, img[1]))
            continue
        _, ey, a, b = img
        gimg = g.edge_image[ey]
        if gimg[0] == "point":
            ei[e] = ("point", gimg[1])
            continue
        _, ex, c, d = gimg
        na, nb = c + (d - c) * a, c + (d - c) * b
        if na == nb:
            ei[e] = ("point", canonical_point(g.cod, ex, na))
        else:
            ei[e] = ("segment", ex, na, nb)
    return graph_map(f.dom, g.cod, vi, ei)


def fiber_at(fam: PLFamily, p) -> TriangleLengths:
    if p[0] == "vertex":
        return fam.vertex_lengths[p[1]]
    return chart_eval(fam.charts[p[1]], p[2])


def pullback_family(m: GraphMap, fam: PLFamily) -> PLFamily:
    """Family over the map's domain whose fiber at y is the fiber at m(y)."""
    if fam.base != m.cod:
        raise IllTypedMap("family does not live over the map's codomain")
    vl = {v: fiber_at(fam, p) for v, p in m.vertex_image.items()}
    charts, gf, gt = {}, {}, {}
    for eid, img in m.edge_image.items():
        if img[0] == "point":
            val = fiber_at(fam, img[1])
            charts[eid] = ((F0, val), (F1, val))
            gf[eid] = gt[eid] = "e"
            continue
        _, ce, a, b = img
        charts[eid] = chart_reparam(fam.charts[ce], a, b)
        def end_glue(param):
            if param == 0:
                return fam.glue_from[ce]
            if param == 1:
                return fam.glue_to[ce]
            return "e"
        gf[eid] = end_glue(a)
        gt[eid] = end_glue(b)
    return validate_family(PLFamily(m.dom, vl, charts, gf, gt))


# -- PL maps out of the base ----------------------------------------------------


@dataclass(frozen=True)
class PLMap:
    """Piecewise-linear map on a graph base with exact samples.

    ``samples[e]`` is a tuple of (time, value tuple) pairs; values at
    shared vertices must agree across edges (checked on construction via
    vertex_values).
    """

    base: BaseGraph
    vertex_values: dict
    samples: dict

    def eval_edge(self, e, t):
        t = Fraction(t)
        pts = self.samples[e]
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t0 <= t <= t1:
                if t == t0:
                    return tuple(v0)
                if t == t1:
                    return tuple(v1)
                lam = (t - t0) / (t1 - t0)
                return tuple(a + lam * (b - a) for a, b in zip(v0, v1))
        raise FamilyError(f"parameter {t} not covered on edge {e}")

    def breakpoints(self, e):
        return [t for t, _ in self.samples[e]]


def plmaps_equal(m1: PLMap, m2: PLMap) -> bool:
    if m1.base != m2.base:
        return False
    if set(m1.vertex_values) != set(m2.vertex_values):
        return False
    for v in m1.vertex_values:
        if tuple(m1.vertex_values[v]) != tuple(m2.vertex_values[v]):
            return False
    for e in m1.base.edges:
        ts = sorted(set(m1.breakpoints(e)) | set(m2.breakpoints(e)))
        for t in ts:
            if m1.eval_edge(e, t) != m2.eval_edge(e, t):
                return False
    return True


def pullback_plmap(m: GraphMap, pm: PLMap) -> PLMap:
    """pm ∘ m as a PL map over the domain of m."""
    def value_at(p):
        if p[0] == "vertex":
            return tuple(pm.vertex_values[p[1]])
        return pm.eval_edge(p[1], p[2])

    vertex_values = {v: value_at(p) for v, p in m.vertex_image.items()}
    samples = {}
    for eid, img in m.edge_image.items():
        if img[0] == "point":
            val = value_at(img[1])
            samples[eid] = ((F0, val), (F1, val))
            continue
        _, ce, a, b = img
        inner = [
            (t - a) / (b - a)
            for t in pm.breakpoints(ce)
            if min(a, b) < t < max(a, b)
        ]
        ts = sorted({F0, F1, *inner})
        samples[eid] = tuple((s, pm.eval_edge(ce, a + (b - a) * s)) for s in ts)
    return PLMap(m.dom, vertex_values, samples)


def classify_to_M(fam: PLFamily) -> PLMap:
    """The classifying map of an oriented presentation: the charts themselves."""
    if not fam.is_presented_oriented():
        raise NotOriented("family has nontrivial glue; re-chart via orient() first")
    return PLMap(
        fam.base,
        {v: t.astuple() for v, t in fam.vertex_lengths.items()},
        {e: tuple((t, v.astuple()) for t, v in c) for e, c in fam.charts.items()},
    )


def _sort_crossings(chart):
    """Times where two coordinates of the PL path cross strictly."""
    times = []
    for (t0, v0), (t1, v1) in zip(chart, chart[1:]):
        a, b = v0.astuple(), v1.astuple()
        for p in range(3):
            for q in range(p + 1, 3):
                d0 = a[p] - a[q]
                d1 = b[p] - b[q]
                if (d0 > 0 and d1 < 0) or (d0 < 0 and d1 > 0):
                    times.append(t0 + (t1 - t0) * d0 / (d0 - d1))
    return times


def classify_to_N(fam: PLFamily) -> PLMap:
    """Pointwise sorted charts, with breakpoints added at coordinate crossings.

    Independent of the glue (sorting is permutation-invariant) and
    continuous across vertices; this is the family's invariant map to the
    quotient.
    """
    samples = {}
    for e, chart in fam.charts.items():
        refined = chart_refine(chart, _sort_crossings(chart))
        samples[e] = tuple((t, tuple(sorted(v.astuple()))) for t, v in refined)
    return PLMap(
        fam.base,
        {v: tuple(sorted(t.astuple())) for v, t in fam.vertex_lengths.items()},
        samples,
    )


# -- orientability ---------------------------------------------------------------


@dataclass(frozen=True)
class Orientation:
    orientable: bool
    vertex_gauge: dict | None = None        # vertex -> Perm
    edge_recharts: dict | None = None       # edge -> Perm
    obstruction_cycle: tuple | None = None  # ((edge, direction), ...)
    monodromy: str | None = None

    def __bool__(self):
        return self.orientable


def edge_transport(fam: PLFamily, eid: str) -> str:
    """Permutation transporting the from-vertex labeling to the to-vertex one."""
    return compose(fam.glue_to[eid], inverse(fam.glue_from[eid]))


def is_orientable(fam: PLFamily) -> Orientation:
    """Spanning-forest propagation of a global vertex relabeling.

    Returns a full trivialization (per-vertex gauge and per-edge rechart
    making all glue trivial) or a failing cycle with its monodromy.
    """
    sigma = {}
    parent = {}
    for comp in fam.base.components():
        root = comp[0]
        sigma[root] = "e"
        parent[root] = None
        frontier = [root]
        in_comp = set(comp)
        tree_edges = set()
        while frontier:
            u = frontier.pop(0)
            for eid, end in sorted(fam.base.incident_ends(u)):
                e = fam.base.edges[eid]
                other = e.to if end == "from" else e.frm
                if other in sigma:
                    continue
                # constraint sigma_u ∘ g_{u,e} = sigma_other ∘ g_{other,e}
                g_here = fam.glue(eid, end)
                g_there = fam.glue(eid, "to" if end == "from" else "from")
                sigma[other] = compose(compose(sigma[u], g_here), inverse(g_there))
                parent[other] = (u, eid, end)
                tree_edges.add(eid)
                frontier.append(other)
        for eid in sorted(fam.base.edges):
            e = fam.base.edges[eid]
            if e.frm not in in_comp or eid in tree_edges:
                continue
            lhs = compose(compose(sigma[e.frm], fam.glue_from[eid]), inverse(fam.glue_to[eid]))
            if lhs != sigma[e.to]:
                cycle = _cycle_through(parent, e)
                mono = _cycle_monodromy(fam, cycle)
                return Orientation(False, obstruction_cycle=tuple(cycle), monodromy=mono)
    recharts = {}
    for eid, e in fam.base.edges.items():
        recharts[eid] = compose(sigma[e.frm], fam.glue_from[eid])
    return Orientation(True, vertex_gauge=sigma, edge_recharts=recharts)


def _cycle_through(parent, e: Edge):
    def path_to_root(v):
        # parent traversal was u -> v; walking back toward the root crosses
        # the edge against that direction
        out = []
        while parent[v] is not None:
            u, eid, end = parent[v]
            out.append((eid, "backward" if end == "from" else "forward"))
            v = u
        return out

    up_from = path_to_root(e.to)      # e.to -> root, edges oriented toward root
    down_to = path_to_root(e.frm)
    # cycle: traverse e from frm to to, then climb from e.to until the paths meet
    common = 0
    while (
        common < len(up_from)
        and common < len(down_to)
        and up_from[len(up_from) - 1 - common] == down_to[len(down_to) - 1 - common]
    ):
        common += 1
    cyc = [(e.id, "forward")]
    cyc += up_from[: len(up_from) - common]
    cyc += [
        (eid, "forward" if d == "backward" else "backward")
        for eid, d in reversed(down_to[: len(down_to) - common])
    ]
    return cyc


def _cycle_monodromy(fam: PLFamily, cycle) -> str:
    mono = "e"
    for eid, direction in cycle:
        p = edge_transport(fam, eid)
        if direction == "backward":
            p = inverse(p)
        mono = compose(p, mono)
    return mono


def orient(fam: PLFamily) -> tuple[PLFamily, Orientation]:
    """Re-chart an orientable family so every glue permutation is trivial."""
    o = is_orientable(fam)
    if not o.orientable:
        raise NotOriented(f"monodromy {o.monodromy} around {o.obstruction_cycle}")
    vl = {v: act(o.vertex_gauge[v], t) for v, t in fam.vertex_lengths.items()}
    charts = {e: chart_act(o.edge_recharts[e], c) for e, c in fam.charts.items()}
    oriented = family(fam.base, vl, charts)
    return oriented, o


class NotScalene(FamilyError):
    pass


def _sorting_perm(t: TriangleLengths) -> str:
    """The unique label with act(g, t) sorted; needs three distinct lengths."""
    tup = t.astuple()
    if len(set(tup)) != 3:
        raise NotScalene(f"{tup} has a repeated length")
    want = tuple(sorted(tup))
    return next(g for g in PERMS if act_tuple(g, tup) == want)


def is_scalene_everywhere(fam: PLFamily) -> bool:
    """No chart breakpoint and no segment touches the isosceles locus."""
    for chart in fam.charts.values():
        for t, v in chart:
            if len(set(v.astuple())) != 3:
                return False
        if _sort_crossings(chart):
            return False
    return all(len(set(t.astuple())) == 3 for t in fam.vertex_lengths.values())


def scalene_natural_presentation(fam: PLFamily) -> PLFamily:
    """The canonical oriented presentation of a scalene-everywhere family.

    Away from the isosceles locus the sorting permutation of a chart is
    constant along every edge, so re-charting by it yields the unique
    presentation with strictly sorted fibers everywhere; this is what
    makes the strictly-sorted region a faithful classifier for scalene
    families.  Raises when any fiber has a repeated length or a chart
    crosses the locus.
    """
    if not is_scalene_everywhere(fam):
        raise NotScalene("family touches the isosceles locus")
    vl = {v: TriangleLengths(*sorted(t.astuple())) for v, t in fam.vertex_lengths.items()}
    charts = {e: chart_act(_sorting_perm(c[0][1]), c) for e, c in fam.charts.items()}
    return family(fam.base, vl, charts)


# -- isomorphism search ----------------------------------------------------------


@dataclass(frozen=True)
class Infeasibility:
    vertex: str
    left_edge: str
    left_forced: tuple
    right_edge: str
    right_forced: tuple


@dataclass(frozen=True)
class IsoResult:
    found: bool
    assignment: dict | None = None     # edge -> Perm
    vertex_perms: dict | None = None   # vertex -> Perm
    obstruction: Infeasibility | None = None

    def __bool__(self):
        return self.found


def _chart_candidates(f_chart, g_chart):
    """Permutations tau with tau . f_chart == g_chart at all joint breakpoints."""
    ts = sorted(set(chart_breaks(f_chart)) | set(chart_breaks(g_chart)))
    out = []
    for tau in PERMS:
        if all(
            act_tuple(tau, chart_eval_tuple(f_chart, t)) == chart_eval_tuple(g_chart, t)
            for t in ts
        ):
            out.append(tau)
    return out


def _transported(f: PLFamily, g: PLFamily, eid, end, tau):
    return compose(g.glue(eid, end), compose(tau, inverse(f.glue(eid, end))))


def are_isomorphic(
    f: PLFamily,
    g: PLFamily,
    vertex_constraints: dict | None = None,
    find_all: bool = False,
):
    """Fiberwise-isometric identification over the identity of the base.

    Searches one permutation per edge subject to exact chart matching and
    vertex-end compatibility, returning the least solution in PERMS order
    (or every solution with ``find_all``).  ``vertex_constraints`` pins
    the induced vertex permutation at chosen vertices.
    """
    if f.base != g.base:
        raise DifferentBase("families live over different bases")
    vertex_constraints = dict(vertex_constraints or {})
    edges = sorted(f.base.edges)
    cands = {e: _chart_candidates(f.charts[e], g.charts[e]) for e in edges}

    isolated = [v for v in f.base.vertices if not f.base.incident_ends(v)]
    iso_perm = {}
    for v in isolated:
        opts = [
            h for h in PERMS
            if act(h, f.vertex_lengths[v]) == g.vertex_lengths[v]
            and (v not in vertex_constraints or vertex_constraints[v] == h)
        ]
        if not opts:
            return ([] if find_all else IsoResult(False, obstruction=None))
        iso_perm[v] = opts[0]

    solutions = []
    assignment = {}
    vperm = {}

    ends_by_vertex = {v: sorted(f.base.incident_ends(v)) for v in f.base.vertices}

    def consistent(eid, tau):
        e = f.base.edges[eid]
        for v, end in ((e.frm, "from"), (e.to, "to")):
            h = _transported(f, g, eid, end, tau)
            if v in vertex_constraints and vertex_constraints[v] != h:
                return None
            if v in vperm and vperm[v] != h:
                return None
        return True

    def place(i):
        if i == len(edges):
            sol = dict(assignment)
            solutions.append((sol, dict(vperm, **iso_perm)))
            return not find_all
        eid = edges[i]
        e = f.base.edges[eid]
        for tau in cands[eid]:
            if consistent(eid, tau) is None:
                continue
            assignment[eid] = tau
            touched = []
            ok = True
            for v, end in ((e.frm, "from"), (e.to, "to")):
                h = _transported(f, g, eid, end, tau)
                if v not in vperm:
                    vperm[v] = h
                    touched.append(v)
                elif vperm[v] != h:
                    ok = False
                    break
            if ok and place(i + 1):
                return True
            for v in touched:
                del vperm[v]
            del assignment[eid]
        return False

    place(0)
    if find_all:
        return [IsoResult(True, a, vp) for a, vp in solutions]
    if solutions:
        a, vp = solutions[0]
        return IsoResult(True, a, vp)
    return IsoResult(False, obstruction=_diagnose(f, g, cands, ends_by_vertex))


def _diagnose(f, g, cands, ends_by_vertex):
    """A vertex whose incident edge-ends force disjoint vertex permutations."""
    for v in sorted(ends_by_vertex):
        ends = ends_by_vertex[v]
        hsets = []
        for eid, end in ends:
            hs = tuple(sorted({_transported(f, g, eid, end, tau) for tau in cands[eid]},
                              key=PERMS.index))
            hsets.append((eid, hs))
        for i in range(len(hsets)):
            for j in range(i + 1, len(hsets)):
                (e1, h1), (e2, h2) = hsets[i], hsets[j]
                if not set(h1) & set(h2):
                    return Infeasibility(v, e1, h1, e2, h2)
    return None


# -- fixtures --------------------------------------------------------------------


def fixture_remark25():
    """The path-based pair: equal quotient maps, no fiberwise identification.

    Both families run from the scalene triple (1, 4/5, 6/5) to the
    isosceles triple (1, 1, 1) on the first edge; on the second edge one
    continues to the mirror triple while the other returns, which is the
    pointwise mirror image of the first.  All glue is trivial.
    """
    base = graph(["0", "1", "1/2"], [("edge-1", "0", "1/2"), ("edge-2", "1/2", "1")])
    start = TriangleLengths(1, Fraction(4, 5), Fraction(6, 5))
    mid = TriangleLengths(1, 1, 1)
    mirror = TriangleLengths(1, Fraction(6, 5), Fraction(4, 5))
    f = family(
        base,
        {"0": start, "1/2": mid, "1": mirror},
        {"edge-1": ((F0, start), (F1, mid)), "edge-2": ((F0, mid), (F1, mirror))},
    )
    g = family(
        base,
        {"0": start, "1/2": mid, "1": start},
        {"edge-1": ((F0, start), (F1, mid)), "edge-2": ((F0, mid), (F1, start))},
    )
    return f, g


def fixture_mobius() -> PLFamily:
    """Circle base, charts through the equilateral point, one twisted seam."""
    base = graph(["v0", "v1"], [("e0", "v0", "v1"), ("e1", "v1", "v0")])
    a = TriangleLengths(1, Fraction(4, 5), Fraction(6, 5))
    mid = TriangleLengths(1, 1, 1)
    mirror = TriangleLengths(1, Fraction(6, 5), Fraction(4, 5))
    return family(
        base,
        {"v0": a, "v1": mid},
        {"e0": ((F0, a), (F1, mid)), "e1": ((F0, mid), (F1, mirror))},
        glue_from={"e0": "e", "e1": "e"},
        glue_to={"e0": "e", "e1": "(AB)"},
    )


def double_cover_of_circle(fam: PLFamily) -> GraphMap:
    """Connected double cover of a 2-edge circle base, as a map onto it."""
    base = fam.base
    if sorted(base.edges) != ["e0", "e1"]:
        raise IllTypedMap("expected the 2-edge circle base")
    cover = graph(
        ["w0", "w1", "w2", "w3"],
        [("c0", "w0", "w1"), ("c1", "w1", "w2"), ("c2", "w2", "w3"), ("c3", "w3", "w0")],
    )
    return graph_map(
        cover,
        base,
        {"w0": ("vertex", "v0"), "w1": ("vertex", "v1"), "w2": ("vertex", "v0"), "w3": ("vertex", "v1")},
        {
            "c0": ("segment", "e0", 0, 1),
            "c1": ("segment", "e1", 0, 1),
            "c2": ("segment", "e0", 0, 1),
            "c3": ("segment", "e1", 0, 1),
        },
    )


# -- coarse factorization ---------------------------------------------------------


@dataclass(frozen=True)
class InvariantAssignment:
    """A fiberwise invariant: one exact vector per triangle."""

    name: str
    fn: object  # TriangleLengths -> tuple[Fraction, ...]

    def __call__(self, t: TriangleLengths):
        return tuple(Fraction(v) for v in self.fn(t))


def _heron16(t: TriangleLengths):
    x2, y2, z2 = (v * v for v in t.astuple())
    return (2 * x2 * y2 + 2 * y2 * z2 + 2 * z2 * x2 - x2 * x2 - y2 * y2 - z2 * z2,)


INVARIANTS = {
    "perimeter": InvariantAssignment("perimeter", lambda t: (t.x + t.y + t.z,)),
    "spread": InvariantAssignment("spread", lambda t: (max(t.astuple()) - min(t.astuple()),)),
    "heron": InvariantAssignment("heron", _heron16),
    "ycoord": InvariantAssignment("ycoord", lambda t: (t.y,)),
}


@dataclass(frozen=True)
class CoarseVerdict:
    status: str  # factors | not-natural | mismatch
    witness: tuple | None = None

    def __bool__(self):
        return self.status == "factors"


def _family_points(fam: PLFamily):
    for v in sorted(fam.vertex_lengths):
        yield ("vertex", v, None), fam.vertex_lengths[v]
    for e in sorted(fam.charts):
        for t, val in fam.charts[e]:
            yield ("edge", e, t), val


def check_coarse_factorization(beta: InvariantAssignment, corpus) -> CoarseVerdict:
    """Does the invariant factor through the quotient map, determined pointwise?

    First spot-checks that the assignment is well defined on isomorphism
    classes (global twists and a pullback leave it unchanged); then pins
    the factor on point families and compares against every breakpoint of
    every corpus family's quotient map.
    """
    corpus = list(corpus)
    for idx, fam in enumerate(corpus):
        for where, val in _family_points(fam):
            for sigma in PERMS:
                if beta(act(sigma, val)) != beta(val):
                    return CoarseVerdict("not-natural", (idx, sigma, val.astuple(), where))
    if corpus:
        fam = corpus[0]
        if fam.base.edges:
            eid = sorted(fam.base.edges)[0]
            sub = subdivide_edge_map(fam.base, eid, Fraction(1, 2))
            pulled = pullback_family(sub, fam)
            for where, val in _family_points(pulled):
                if beta(val) != beta(fiber_at(fam, map_point(sub, _as_point(where)))):
                    return CoarseVerdict("not-natural", (0, "pullback", where))

    def mu(sorted_tuple):
        return beta(point_family(TriangleLengths(*sorted_tuple)).vertex_lengths["p"])

    for idx, fam in enumerate(corpus):
        nmap = classify_to_N(fam)
        for v in sorted(fam.vertex_lengths):
            lhs = beta(fam.vertex_lengths[v])
            rhs = mu(nmap.vertex_values[v])
            if lhs != rhs:
                return CoarseVerdict("mismatch", (idx, "vertex", v, lhs, rhs))
        for e in sorted(fam.charts):
            for t in nmap.breakpoints(e):
                lhs = beta(chart_eval(fam.charts[e], t))
                rhs = mu(nmap.eval_edge(e, t))
                if lhs != rhs:
                    return CoarseVerdict("mismatch", (idx, e, t, lhs, rhs))
    return CoarseVerdict("factors")


def _as_point(where):
    kind, name, t = where
    return ("vertex", name) if kind == "vertex" else ("edge", name, t)


def subdivide_edge_map(base: BaseGraph, eid: str, t: Fraction) -> GraphMap:
    """Map from the base with edge ``eid`` split at t onto the original base."""
    e = base.edges[eid]
    mid = f"{eid}.cut"
    vertices = list(base.vertices) + [mid]
    edges = [ed for k, ed in base.edges.items() if k != eid]
    edges += [Edge(f"{eid}.a", e.frm, mid), Edge(f"{eid}.b", mid, e.to)]
    dom = BaseGraph(vertices, edges)
    vi = {v: ("vertex", v) for v in base.vertices}
    vi[mid] = ("edge", eid, t)
    ei = {k: ("segment", k, 0, 1) for k in base.edges if k != eid}
    ei[f"{eid}.a"] = ("segment", eid, 0, t)
    ei[f"{eid}.b"] = ("segment", eid, t, 1)
    return graph_map(dom, base, vi, ei)


# -- files -------------------------------------------------------------------------


def family_to_json(fam: PLFamily) -> dict:
    return {
        "vertices": [
            {"id": v, "lengths": trigeo.format_lengths(fam.vertex_lengths[v])}
            for v in fam.base.vertices
        ],
        "edges": [
            {
                "id": e.id,
                "from": e.frm,
                "to": e.to,
                "chart": [
                    {"t": str(t), "lengths": trigeo.format_lengths(v)}
                    for t, v in fam.charts[e.id]
                ],
                "glueFrom": fam.glue_from[e.id],
                "glueTo": fam.glue_to[e.id],
            }
            for e in fam.base.edges.values()
        ],
    }


def family_from_json(raw: dict) -> PLFamily:
    vertices = [v["id"] for v in raw["vertices"]]
    edges = [Edge(e["id"], e["from"], e["to"]) for e in raw["edges"]]
    base = BaseGraph(vertices, edges)
    vl, charts = {}, {}
    for v in raw["vertices"]:
        try:
            vl[v["id"]] = trigeo.parse_lengths(*v["lengths"])
        except NotInM as err:
            raise FiberNotInM((v["id"], v["lengths"])) from err
    for e in raw["edges"]:
        try:
            charts[e["id"]] = make_chart(
                [(Fraction(pt["t"]), trigeo.parse_lengths(*pt["lengths"])) for pt in e["chart"]]
            )
        except NotInM as err:
            raise FiberNotInM((e["id"], e["chart"])) from err
    gf = {e["id"]: e.get("glueFrom", "e") for e in raw["edges"]}
    gt = {e["id"]: e.get("glueTo", "e") for e in raw["edges"]}
    return validate_family(PLFamily(base, vl, charts, gf, gt))


def load_family(path) -> PLFamily:
    with open(path, encoding="utf-8") as fh:
        return family_from_json(json.load(fh))


def save_family(fam: PLFamily, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(family_to_json(fam), fh, indent=1, sort_keys=True)
