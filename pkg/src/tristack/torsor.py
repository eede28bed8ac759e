"""Discrete principal bundles over simplicial 2-complexes.

A bundle is a transition cocycle: one group element per oriented edge
(the reverse crossing uses the inverse), with the face condition closing
every 2-cell.  Fibers are free transitive right G-sets presented as the
group itself; triviality is decided by spanning-forest gauge fixing and
cycle monodromy.

Composition convention, pinned once: ``Group.mul(a, b)`` means "apply a,
then b" along a directed path, so a path crossing edges with elements
g1, g2, ... has product mul(mul(g1, g2), ...) and the face condition for
a triangle u -> v -> w -> u reads mul(mul(g_uv, g_vw), g_wu) == e.  For
the built-in S3 this makes path products agree with the vertex-label
transport of triangle families: mul(a, b) == compose(b, a) in the
function-composition order of the geometry module.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from . import trigeo
from .families import (
    BaseGraph,
    Edge,
    PLFamily,
    edge_transport,
    make_chart,
    validate_family,
)
from .fincat import Verdict
from .trigeo import PERMS, TriangleLengths, act, inverse as perm_inverse


class TorsorError(ValueError):
    pass


class FaceCocycleFails(TorsorError):
    pass


class CocycleFails(TorsorError):
    pass


class NotEquivariant(TorsorError):
    pass


class NotTransitionCompatible(TorsorError):
    pass


class InvalidPair(TorsorError):
    pass


# -- groups by table -----------------------------------------------------------


@dataclass(frozen=True)
class Group:
    name: str
    elements: tuple
    table: dict        # (a, b) -> "a then b"
    identity: str
    inv: dict

    def mul(self, a, b):
        return self.table[(a, b)]

    def inverse(self, a):
        return self.inv[a]

    def path_product(self, elems):
        out = self.identity
        for g in elems:
            out = self.mul(out, g)
        return out


def group_from_table(name, elements, table) -> Group:
    elements = tuple(elements)
    identity = None
    for e in elements:
        if all(table[(e, x)] == x == table[(x, e)] for x in elements):
            identity = e
            break
    if identity is None:
        raise TorsorError("table has no identity element")
    for a in elements:
        for b in elements:
            if table[(a, b)] not in elements:
                raise TorsorError("table not closed")
            for c in elements:
                if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
                    raise TorsorError(f"table not associative at {(a, b, c)}")
    inv = {}
    for a in elements:
        inv[a] = next(b for b in elements if table[(a, b)] == identity == table[(b, a)])
    return Group(name, elements, dict(table), identity, inv)


def group_s3() -> Group:
    # mul(a, b) = "a then b" = compose(b, a) in vertex-relabeling order
    table = {(a, b): trigeo.compose(b, a) for a in PERMS for b in PERMS}
    return group_from_table("S3", PERMS, table)


def group_z2() -> Group:
    els = ("e", "s")
    table = {(a, b): ("e" if a == b else "s") for a in els for b in els}
    return group_from_table("Z2", els, table)


def group_z3() -> Group:
    els = ("e", "r", "r2")
    idx = {"e": 0, "r": 1, "r2": 2}
    table = {(a, b): els[(idx[a] + idx[b]) % 3] for a in els for b in els}
    return group_from_table("Z3", els, table)


BUILTIN_GROUPS = {"S3": group_s3, "Z2": group_z2, "Z3": group_z3}


# -- simplicial bases ------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    id: str
    boundary: tuple  # ((edge id, +1 | -1), ...) of length 3, chained head to tail


class SimplicialBase:
    """Vertices, oriented edges, and triangular 2-cells given by edge paths."""

    def __init__(self, vertices, edges, faces=()):
        self.vertices = tuple(sorted(vertices))
        self.edges = {e.id: e for e in sorted(edges, key=lambda e: e.id)}
        self.faces = {f.id: f for f in sorted(faces, key=lambda f: f.id)}
        ids = list(self.vertices) + list(self.edges) + list(self.faces)
        if len(set(ids)) != len(ids):
            raise TorsorError("cell ids must be globally unique")
        for e in self.edges.values():
            if e.frm not in self.vertices or e.to not in self.vertices:
                raise TorsorError(f"edge {e.id} has unknown endpoint")
        for f in self.faces.values():
            if len(f.boundary) != 3:
                raise TorsorError(f"face {f.id} is not a triangle")
            walk = self.face_vertices(f.id)
            if walk is None:
                raise TorsorError(f"face {f.id} boundary does not close")

    def ends(self, eid, direction):
        e = self.edges[eid]
        return (e.frm, e.to) if direction > 0 else (e.to, e.frm)

    def face_vertices(self, fid):
        f = self.faces[fid]
        starts, stops = [], []
        for eid, d in f.boundary:
            if eid not in self.edges or d not in (1, -1):
                return None
            a, b = self.ends(eid, d)
            starts.append(a)
            stops.append(b)
        for i in range(3):
            if stops[i] != starts[(i + 1) % 3]:
                return None
        return tuple(starts)

    def graph(self) -> BaseGraph:
        return BaseGraph(self.vertices, list(self.edges.values()))

    def cells(self):
        return set(self.vertices) | set(self.edges) | set(self.faces)

    def edge_cells_of_face(self, fid):
        return {eid for eid, _ in self.faces[fid].boundary}


def complex_from_graph(g: BaseGraph) -> SimplicialBase:
    return SimplicialBase(g.vertices, list(g.edges.values()), ())


def closed_star(base: SimplicialBase, v: str) -> frozenset:
    cells = {v}
    for e in base.edges.values():
        if v in (e.frm, e.to):
            cells |= {e.id, e.frm, e.to}
    for f in base.faces.values():
        verts = base.face_vertices(f.id)
        if v in verts:
            cells.add(f.id)
            for eid, _ in f.boundary:
                e = base.edges[eid]
                cells |= {eid, e.frm, e.to}
    return frozenset(cells)


def is_subcomplex(base: SimplicialBase, cells: frozenset) -> bool:
    for c in cells:
        if c in base.edges:
            e = base.edges[c]
            if e.frm not in cells or e.to not in cells:
                return False
        elif c in base.faces:
            if any(eid not in cells for eid, _ in base.faces[c].boundary):
                return False
        elif c not in base.vertices:
            return False
    return True


# -- torsor cocycles --------------------------------------------------------------


@dataclass(frozen=True)
class TorsorCocycle:
    base: SimplicialBase
    group: Group
    transitions: dict  # edge id -> element (for the edge's own orientation)

    def element(self, eid, direction=1):
        g = self.transitions[eid]
        return g if direction > 0 else self.group.inverse(g)


def validate_torsor(t: TorsorCocycle) -> Verdict:
    for eid in t.base.edges:
        g = t.transitions.get(eid)
        if g not in t.group.elements:
            return Verdict(False, "transition missing or not a group element", (eid,))
    for fid, f in t.base.faces.items():
        prod = t.group.path_product(t.element(eid, d) for eid, d in f.boundary)
        if prod != t.group.identity:
            return Verdict(False, "face cocycle fails", (fid, prod))
    return Verdict(True)


@dataclass(frozen=True)
class Triviality:
    trivial: bool
    gauge: dict | None = None              # vertex -> element
    obstruction_cycle: tuple | None = None
    monodromy: str | None = None

    def __bool__(self):
        return self.trivial


def is_trivial(t: TorsorCocycle) -> Triviality:
    """Spanning-forest section; trivial iff every independent cycle closes.

    The returned gauge turns every transition into the identity; a failing
    torsor instead reports one non-tree cycle and its path product.
    """
    v = validate_torsor(t)
    if not v.ok:
        raise FaceCocycleFails(v.witness)
    g = t.base.graph()
    gauge = {}
    parent = {}
    tree = set()
    for comp in g.components():
        root = comp[0]
        gauge[root] = t.group.identity
        parent[root] = None
        frontier = [root]
        while frontier:
            u = frontier.pop(0)
            for eid, end in sorted(g.incident_ends(u)):
                e = g.edges[eid]
                other = e.to if end == "from" else e.frm
                if other in gauge:
                    continue
                elem = t.element(eid, 1 if end == "from" else -1)
                # want gauged transition identity: mul(inv(phi_u), mul(elem, phi_other)) = e
                gauge[other] = t.group.mul(t.group.inverse(elem), gauge[u])
                parent[other] = (u, eid, end)
                tree.add(eid)
                frontier.append(other)
    for eid in sorted(g.edges):
        if eid in tree:
            continue
        e = g.edges[eid]
        expect = t.group.mul(t.group.inverse(t.transitions[eid]), gauge[e.frm])
        if gauge[e.to] != expect:
            cycle = _cycle_through(parent, e)
            mono = t.group.path_product(t.element(eid2, 1 if d == "forward" else -1) for eid2, d in cycle)
            return Triviality(False, obstruction_cycle=tuple(cycle), monodromy=mono)
    return Triviality(True, gauge=gauge)


def _cycle_through(parent, e: Edge):
    def path_to_root(v):
        out = []
        while parent[v] is not None:
            u, eid, end = parent[v]
            out.append((eid, "backward" if end == "from" else "forward"))
            v = u
        return out

    up_from = path_to_root(e.to)
    down_to = path_to_root(e.frm)
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


def cycle_monodromy(t: TorsorCocycle, cycle) -> str:
    return t.group.path_product(
        t.element(eid, 1 if d == "forward" else -1) for eid, d in cycle
    )


def gauge_transform(t: TorsorCocycle, gauge: dict) -> TorsorCocycle:
    """Relabel sheets per vertex: new transition is inv(phi_u) . t_e . phi_w."""
    out = {}
    for eid, e in t.base.edges.items():
        out[eid] = t.group.mul(
            t.group.inverse(gauge[e.frm]), t.group.mul(t.transitions[eid], gauge[e.to])
        )
    return TorsorCocycle(t.base, t.group, out)


def find_gauge_isomorphism(t1: TorsorCocycle, t2: TorsorCocycle) -> dict | None:
    """Per-vertex elements carrying t1 to t2, least by element order."""
    if t1.base.cells() != t2.base.cells() or t1.group.elements != t2.group.elements:
        return None
    g = t1.base.graph()
    grp = t1.group
    comps = g.components()

    def solve(component_roots):
        gauge = {}
        for root, root_val in component_roots:
            gauge[root] = root_val
            frontier = [root]
            while frontier:
                u = frontier.pop(0)
                for eid, end in sorted(g.incident_ends(u)):
                    e = g.edges[eid]
                    other = e.to if end == "from" else e.frm
                    if other in gauge:
                        continue
                    a = t1.element(eid, 1 if end == "from" else -1)
                    b = t2.element(eid, 1 if end == "from" else -1)
                    # want: b == inv(gauge_u) . a . gauge_other
                    gauge[other] = grp.mul(grp.inverse(a), grp.mul(gauge[u], b))
                    frontier.append(other)
        for eid, e in g.edges.items():
            want = grp.mul(grp.inverse(gauge[e.frm]), grp.mul(t1.transitions[eid], gauge[e.to]))
            if want != t2.transitions[eid]:
                return None
        return gauge

    roots = [comp[0] for comp in comps]
    for combo in itertools.product(grp.elements, repeat=len(roots)):
        gauge = solve(list(zip(roots, combo)))
        if gauge is not None:
            return gauge
    return None


def restrict_torsor(t: TorsorCocycle, cells: frozenset) -> TorsorCocycle:
    if not is_subcomplex(t.base, cells):
        raise TorsorError("restriction target is not a subcomplex")
    sub = SimplicialBase(
        [v for v in t.base.vertices if v in cells],
        [e for e in t.base.edges.values() if e.id in cells],
        [f for f in t.base.faces.values() if f.id in cells],
    )
    return TorsorCocycle(sub, t.group, {e: t.transitions[e] for e in sub.edges})


# -- torsor morphisms --------------------------------------------------------------


def torsor_morphism_check(t1: TorsorCocycle, t2: TorsorCocycle, sheet_maps: dict) -> Verdict:
    """Certify a sheet mapping as an isomorphism and exhibit its inverse.

    ``sheet_maps[v]`` maps sheet labels (group elements) over v in t1 to
    sheets over v in t2.  Equivariance for the structure action and
    compatibility with transitions are required of the input; bijectivity
    then always follows, with inverse given by the inverse translation.
    """
    grp = t1.group
    for v in t1.base.vertices:
        phi = sheet_maps.get(v)
        if phi is None or set(phi) != set(grp.elements):
            raise NotEquivariant((v, "sheet map does not cover the fiber"))
        for g in grp.elements:
            for s in grp.elements:
                if phi[grp.mul(g, s)] != grp.mul(g, phi[s]):
                    raise NotEquivariant((v, g, s))
    for eid, e in t1.base.edges.items():
        for s in grp.elements:
            lhs = sheet_maps[e.to][grp.mul(s, t1.transitions[eid])]
            rhs = grp.mul(sheet_maps[e.frm][s], t2.transitions[eid])
            if lhs != rhs:
                raise NotTransitionCompatible((eid, s))
    inverse_maps = {}
    for v in t1.base.vertices:
        phi = sheet_maps[v]
        if len(set(phi.values())) != len(grp.elements):
            raise NotEquivariant((v, "not bijective"))  # unreachable for equivariant data
        inverse_maps[v] = {out: s for s, out in phi.items()}
    return Verdict(True, "isomorphism", tuple(sorted(inverse_maps)))


def gauge_as_sheet_maps(t: TorsorCocycle, gauge: dict) -> dict:
    """The right-translation sheet maps of a per-vertex gauge."""
    grp = t.group
    return {
        v: {s: grp.mul(s, gauge[v]) for s in grp.elements}
        for v in t.base.vertices
    }


# -- descent gluing -----------------------------------------------------------------


@dataclass(frozen=True)
class GlueData:
    """Per-piece trivial torsors plus identifications on overlaps.

    ``pieces`` are closed subcomplexes covering the base; the piece
    torsors are trivial, so the only data is ``transitions[(i, j)]`` for
    i < j: one group element per overlap cell, read as the identification
    of piece i sheets with piece j sheets over that cell.
    """

    base: SimplicialBase
    group: Group
    pieces: tuple
    transitions: dict

    def alpha(self, j: int, i: int, cell) -> str:
        """Identification piece i -> piece j over the cell."""
        if i == j:
            return self.group.identity
        if i < j:
            return self.transitions[(i, j)][cell]
        return self.group.inverse(self.transitions[(j, i)][cell])


def validate_glue_data(g: GlueData) -> Verdict:
    base, grp = g.base, g.group
    covered = set()
    for idx, cells in enumerate(g.pieces):
        if not is_subcomplex(base, cells):
            return Verdict(False, "piece is not a closed subcomplex", (idx,))
        covered |= cells
    if covered != base.cells():
        return Verdict(False, "pieces do not cover the base", tuple(sorted(base.cells() - covered)))
    for i in range(len(g.pieces)):
        for j in range(i + 1, len(g.pieces)):
            overlap = g.pieces[i] & g.pieces[j]
            table = g.transitions.get((i, j), {})
            if set(table) != overlap:
                return Verdict(False, "transition table does not match the overlap", (i, j))
            for e in overlap:
                if e in base.edges:
                    ed = base.edges[e]
                    if table[e] != table[ed.frm] or table[e] != table[ed.to]:
                        return Verdict(False, "transition not constant along an edge", (i, j, e))
                elif e in base.faces:
                    for eid, _ in base.faces[e].boundary:
                        if table[e] != table[eid]:
                            return Verdict(False, "transition not constant along a face", (i, j, e))
    for i in range(len(g.pieces)):
        for j in range(i + 1, len(g.pieces)):
            for k in range(j + 1, len(g.pieces)):
                triple = g.pieces[i] & g.pieces[j] & g.pieces[k]
                for cell in triple:
                    lhs = grp.mul(g.alpha(j, i, cell), g.alpha(k, j, cell))
                    if lhs != g.alpha(k, i, cell):
                        return Verdict(False, "cocycle fails on a triple overlap", (i, j, k, cell))
    return Verdict(True)


def glue_descent(g: GlueData):
    """Glue per-piece trivial torsors into a global cocycle.

    Returns the torsor together with the per-piece effectiveness witness:
    a gauge on each piece carrying the glued restriction back to the
    trivial piece.  Raises CocycleFails when the overlap data does not
    satisfy the descent conditions.
    """
    v = validate_glue_data(g)
    if not v.ok:
        raise CocycleFails((v.reason,) + (v.witness or ()))
    base, grp = g.base, g.group

    def home(cell):
        return min(idx for idx, cells in enumerate(g.pieces) if cell in cells)

    transitions = {}
    for eid, e in base.edges.items():
        p = home(eid)
        transitions[eid] = grp.mul(
            g.alpha(p, home(e.frm), e.frm), g.alpha(home(e.to), p, e.to)
        )
    torsor = TorsorCocycle(base, grp, transitions)
    face_check = validate_torsor(torsor)
    if not face_check.ok:
        raise CocycleFails(face_check.witness)

    witnesses = {}
    for idx, cells in enumerate(g.pieces):
        gauge = {
            v2: g.alpha(idx, home(v2), v2)
            for v2 in base.vertices
            if v2 in cells
        }
        restricted = restrict_torsor(torsor, cells)
        gauged = gauge_transform(restricted, gauge)
        if any(val != grp.identity for val in gauged.transitions.values()):
            raise CocycleFails(("glued torsor does not restrict to the trivial piece", idx))
        witnesses[idx] = gauge
    return torsor, witnesses


def star_cover(base: SimplicialBase):
    return tuple(closed_star(base, v) for v in base.vertices)


# -- the family correspondence -------------------------------------------------------


@dataclass(frozen=True)
class TorsorPair:
    """An S3 cocycle with an equivariant map to the triangle cone.

    Sheets over a vertex are the six vertex orderings of the fiber, the
    reference sheet being the stored vertex triple; the sheet labeled s
    is sent to act(inverse(s), reference).  Edge data carries the PL
    homotopy (one chart, permuted per sheet) with the end identifications
    that relate chart labels to the vertex references.
    """

    torsor: TorsorCocycle
    vertex_refs: dict   # vertex -> TriangleLengths
    charts: dict        # edge -> chart
    glue_from: dict     # edge -> Perm
    glue_to: dict       # edge -> Perm

    def sheet_point(self, v: str, sheet: str) -> TriangleLengths:
        return act(perm_inverse(sheet), self.vertex_refs[v])


def validate_pair(p: TorsorPair) -> TorsorPair:
    if p.torsor.group.name != "S3":
        raise InvalidPair("pair torsors use the vertex-permutation group")
    if p.torsor.base.faces:
        raise InvalidPair("pair bases are graphs")
    v = validate_torsor(p.torsor)
    if not v.ok:
        raise InvalidPair(v.witness)
    for eid, e in p.torsor.base.edges.items():
        chart = p.charts[eid]
        if act(p.glue_from[eid], chart[0][1]) != p.vertex_refs[e.frm]:
            raise InvalidPair(("chart start does not reach the vertex reference", eid))
        if act(p.glue_to[eid], chart[-1][1]) != p.vertex_refs[e.to]:
            raise InvalidPair(("chart end does not reach the vertex reference", eid))
        want = trigeo.compose(p.glue_to[eid], perm_inverse(p.glue_from[eid]))
        if p.torsor.transitions[eid] != want:
            raise InvalidPair(("transition disagrees with the chart identifications", eid))
    return p


def family_to_torsor_pair(fam: PLFamily) -> TorsorPair:
    """The orientation torsor with its tautological equivariant map."""
    fam = validate_family(fam)
    base = complex_from_graph(fam.base)
    transitions = {eid: edge_transport(fam, eid) for eid in fam.base.edges}
    pair = TorsorPair(
        TorsorCocycle(base, group_s3(), transitions),
        dict(fam.vertex_lengths),
        dict(fam.charts),
        dict(fam.glue_from),
        dict(fam.glue_to),
    )
    return validate_pair(pair)


def torsor_pair_to_family(p: TorsorPair) -> PLFamily:
    """Read the family back off along the reference sheet at every vertex."""
    validate_pair(p)
    return validate_family(
        PLFamily(
            p.torsor.base.graph(),
            dict(p.vertex_refs),
            dict(p.charts),
            dict(p.glue_from),
            dict(p.glue_to),
        )
    )


def pair_gauge_from_family_iso(p1: TorsorPair, p2: TorsorPair, vertex_perms: dict) -> dict:
    """Torsor gauge induced by a family isomorphism's vertex permutations."""
    grp = p1.torsor.group
    gauge = {v: vertex_perms[v] for v in p1.torsor.base.vertices}
    transformed = gauge_transform(p1.torsor, gauge)
    if transformed.transitions != p2.torsor.transitions:
        raise InvalidPair("vertex permutations do not gauge the torsors")
    return gauge


# -- files ------------------------------------------------------------------------------


def complex_to_json(base: SimplicialBase) -> dict:
    return {
        "vertices": list(base.vertices),
        "edges": [{"id": e.id, "from": e.frm, "to": e.to} for e in base.edges.values()],
        "faces": [
            {"id": f.id, "boundary": [[eid, d] for eid, d in f.boundary]}
            for f in base.faces.values()
        ],
    }


def complex_from_json(raw: dict) -> SimplicialBase:
    return SimplicialBase(
        raw["vertices"],
        [Edge(e["id"], e["from"], e["to"]) for e in raw["edges"]],
        [Face(f["id"], tuple((eid, d) for eid, d in f["boundary"])) for f in raw.get("faces", ())],
    )


def group_to_json(g: Group):
    if g.name in BUILTIN_GROUPS:
        return g.name
    return {
        "elements": list(g.elements),
        "mul": sorted([a, b, g.table[(a, b)]] for a in g.elements for b in g.elements),
    }


def group_from_json(raw) -> Group:
    if isinstance(raw, str):
        return BUILTIN_GROUPS[raw]()
    table = {(a, b): ab for a, b, ab in raw["mul"]}
    return group_from_table("custom", raw["elements"], table)


def torsor_to_json(t: TorsorCocycle) -> dict:
    return {
        "base": complex_to_json(t.base),
        "group": group_to_json(t.group),
        "transitions": dict(sorted(t.transitions.items())),
    }


def torsor_from_json(raw: dict) -> TorsorCocycle:
    return TorsorCocycle(
        complex_from_json(raw["base"]),
        group_from_json(raw["group"]),
        dict(raw["transitions"]),
    )


def pair_to_json(p: TorsorPair) -> dict:
    data = torsor_to_json(p.torsor)
    data["equivariant"] = {
        v: {s: trigeo.format_lengths(p.sheet_point(v, s)) for s in PERMS}
        for v in p.torsor.base.vertices
    }
    data["charts"] = {
        e: [{"t": str(t), "lengths": trigeo.format_lengths(v)} for t, v in chart]
        for e, chart in sorted(p.charts.items())
    }
    data["glueFrom"] = dict(sorted(p.glue_from.items()))
    data["glueTo"] = dict(sorted(p.glue_to.items()))
    return data


def pair_from_json(raw: dict) -> TorsorPair:
    torsor = torsor_from_json(raw)
    refs = {}
    for v, table in raw["equivariant"].items():
        ref = trigeo.parse_lengths(*table["e"])
        for s in PERMS:
            got = trigeo.parse_lengths(*table[s])
            if got != act(perm_inverse(s), ref):
                raise InvalidPair(("equivariance fails", v, s))
        refs[v] = ref
    charts = {
        e: make_chart([(Fraction(pt["t"]), trigeo.parse_lengths(*pt["lengths"])) for pt in pts])
        for e, pts in raw["charts"].items()
    }
    pair = TorsorPair(torsor, refs, charts, dict(raw["glueFrom"]), dict(raw["glueTo"]))
    return validate_pair(pair)


def glue_data_to_json(g: GlueData) -> dict:
    return {
        "base": complex_to_json(g.base),
        "group": group_to_json(g.group),
        "pieces": [sorted(cells) for cells in g.pieces],
        "transitions": [
            {"i": i, "j": j, "cells": dict(sorted(table.items()))}
            for (i, j), table in sorted(g.transitions.items())
        ],
    }


def glue_data_from_json(raw: dict) -> GlueData:
    return GlueData(
        complex_from_json(raw["base"]),
        group_from_json(raw["group"]),
        tuple(frozenset(cells) for cells in raw["pieces"]),
        {(e["i"], e["j"]): dict(e["cells"]) for e in raw["transitions"]},
    )


def load_torsor(path) -> TorsorCocycle:
    with open(path, encoding="utf-8") as fh:
        return torsor_from_json(json.load(fh))


def load_glue_data(path) -> GlueData:
    with open(path, encoding="utf-8") as fh:
        return glue_data_from_json(json.load(fh))
