"""The acceptance gate: one test per criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  Tolerances are exact equality throughout: the library works
in rational arithmetic and the properties under test are exact laws, so
there is nothing to approximate.
"""

import random
import time
from fractions import Fraction

import pytest

from tristack import corpus, families, grothendieck, torsor, trigeo
from tristack.cli import main as cli_main
from tristack.fincat import (
    cartesian_subcategory,
    fiber,
    is_fibered,
    is_groupoid,
    is_groupoid_fibration,
    restrict_to_subcategory,
    validate_category,
)
from tristack.families import (
    are_isomorphic,
    classify_to_M,
    classify_to_N,
    double_cover_of_circle,
    fixture_mobius,
    fixture_remark25,
    is_orientable,
    orient,
    plmaps_equal,
    point_family,
    pullback_family,
    twist_family,
)

SEED = 20260809


def _verdict(number, ok, detail):
    print(f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_1_remark25_reproduction(capsys):
    start = time.perf_counter()
    f, g = fixture_remark25()
    same = plmaps_equal(classify_to_N(f), classify_to_N(g))
    r = are_isomorphic(f, g)
    ob = r.obstruction
    witness_ok = (
        not r.found
        and ob is not None
        and ob.vertex == "1/2"
        and {ob.left_edge: ob.left_forced, ob.right_edge: ob.right_forced}
        == {"edge-1": ("e",), "edge-2": ("(AB)",)}
    )
    code = cli_main(["demo-remark25"])
    out = capsys.readouterr().out
    elapsed = time.perf_counter() - start
    with capsys.disabled():
        _verdict(
            1,
            same
            and witness_ok
            and code == 0
            and "same N-map: yes; isomorphic: no" in out
            and "edge-1 forces e, edge-2 forces (AB), vertex 1/2 clash" in out
            and elapsed < 1.0,
            f"equal quotient maps, no isomorphism, clash witness printed ({elapsed:.3f}s)",
        )


def test_criterion_2_fibration_law_suite(capsys):
    start = time.perf_counter()
    fibered_functors = corpus.fibered_corpus(seed=SEED, n=100)
    assert len(fibered_functors) >= 100
    assert all(len(fun.cod.objects) <= 5 for fun in fibered_functors)
    assert all(len(fun.dom.morphisms) <= 25 for fun in fibered_functors)
    failures = []
    for idx, fun in enumerate(fibered_functors):
        fib = is_fibered(fun)
        if not fib.ok:
            failures.append((idx, "corpus instance not fibered"))
            continue
        gf = is_groupoid_fibration(fun)
        # the direct groupoid-fibration verdict must match the fiber criterion
        by_fibers = all(is_groupoid(fiber(fun, x)) for x in fun.cod.objects)
        if gf.ok != by_fibers:
            failures.append((idx, "fiber criterion disagrees"))
        # on groupoid fibrations, lifts of isomorphisms are isomorphisms
        if gf.ok:
            for m in fun.cod.morphisms:
                if not fun.cod.is_iso(m):
                    continue
                for lift in fun.dom.morphisms:
                    if fun.mor_map[lift] == m and not fun.dom.is_iso(lift):
                        failures.append((idx, ("iso lift not iso", m, lift)))
        # the wide cartesian subcategory is itself a groupoid fibration
        sub, _ = cartesian_subcategory(fun)
        if not is_groupoid_fibration(restrict_to_subcategory(fun, sub)).ok:
            failures.append((idx, "cartesian subcategory not a groupoid fibration"))
    elapsed = time.perf_counter() - start
    with capsys.disabled():
        _verdict(
            2,
            not failures and elapsed < 60.0,
            f"{len(fibered_functors)} fibered instances, 0 counterexamples "
            f"({elapsed:.1f}s)" if not failures else f"failures: {failures[:3]}",
        )


def test_criterion_3_grothendieck_roundtrip(capsys):
    failures = []
    psfs = corpus.pseudofunctor_corpus(seed=SEED, n=12)
    for idx, p in enumerate(psfs):
        total, proj = grothendieck.total_category(p)  # validates and checks fibered
        validate_category(
            {
                "objects": list(total.objects),
                "morphisms": [
                    {"id": m.id, "src": m.src, "tgt": m.tgt} for m in total.morphisms.values()
                ],
                "identities": total.identity,
                "compose": [[g, f, gf] for (g, f), gf in total.table.items()],
            }
        )
        if not is_fibered(proj).ok:
            failures.append((idx, "total not fibered"))
        if not grothendieck.canonical_lifts_are_cartesian(p, proj):
            failures.append((idx, "canonical lift not cartesian"))
        if not grothendieck.roundtrip_check(proj):
            failures.append((idx, "roundtrip through the total category failed"))
    fibered_functors = corpus.fibered_corpus(seed=SEED, n=100)
    for idx, fun in enumerate(fibered_functors):
        if not grothendieck.roundtrip_check(fun):
            failures.append(("fibered", idx))
    with capsys.disabled():
        _verdict(
            3,
            not failures,
            f"{len(psfs)} pseudo-functors and {len(fibered_functors)} fibered categories "
            "round-trip with fiberwise-isomorphic fibers"
            if not failures
            else f"failures: {failures[:3]}",
        )


def test_criterion_4_descent_gluing(capsys):
    rng = random.Random(SEED)
    groups = [torsor.group_z2(), torsor.group_z3(), torsor.group_s3()]
    bases = corpus.simplicial_base_corpus(seed=SEED, n=20)
    assert len(bases) >= 20
    failures = []

    # exhaustive S3 labelings of the 2-edge circle, covered by two arcs
    circle = corpus.circle_base(2)
    arcs = (frozenset({"a0", "a1", "e0"}), frozenset({"a0", "a1", "e1"}))
    s3 = torsor.group_s3()
    count_circle = 0
    for g_el in s3.elements:
        for h_el in s3.elements:
            data = torsor.GlueData(circle, s3, arcs, {(0, 1): {"a0": g_el, "a1": h_el}})
            glued, witnesses = torsor.glue_descent(data)
            for idx, cells in enumerate(data.pieces):
                gauged = torsor.gauge_transform(
                    torsor.restrict_torsor(glued, cells), witnesses[idx]
                )
                if set(gauged.transitions.values()) - {s3.identity}:
                    failures.append(("circle restriction", g_el, h_el, idx))
            triv = torsor.is_trivial(glued)
            expected = s3.mul(h_el, s3.inverse(g_el))
            mono = triv.monodromy if not triv else s3.identity
            if mono != expected:
                failures.append(("circle monodromy", g_el, h_el, mono, expected))
            count_circle += 1
    if count_circle != 36:
        failures.append(("circle count", count_circle))

    # randomized bases: valid data glue with gauge-isomorphic restrictions,
    # corrupted data are rejected
    rejected = 0
    glued_ok = 0
    for base in bases:
        for grp in groups:
            t = corpus.random_torsor(rng, base, grp, star_presentable=True)
            data = corpus.glue_data_from_torsor(t)
            assert torsor.validate_glue_data(data).ok
            glued, witnesses = torsor.glue_descent(data)
            if torsor.find_gauge_isomorphism(t, glued) is None:
                failures.append(("glued torsor differs", grp.name))
            for idx, cells in enumerate(data.pieces):
                gauged = torsor.gauge_transform(
                    torsor.restrict_torsor(glued, cells), witnesses[idx]
                )
                if set(gauged.transitions.values()) - {grp.identity}:
                    failures.append(("restriction not trivial", grp.name, idx))
            glued_ok += 1
            bad = _corrupt_glue_data(rng, data)
            if bad is None:
                continue
            if torsor.validate_glue_data(bad).ok:
                continue  # corruption happened to land on a consistent value
            try:
                torsor.glue_descent(bad)
                failures.append(("corrupted datum accepted", grp.name))
            except torsor.CocycleFails:
                rejected += 1
    with capsys.disabled():
        _verdict(
            4,
            not failures and rejected > 20,
            f"36 circle labelings exhausted, {glued_ok} random cases glued, "
            f"{rejected} corrupted data rejected"
            if not failures
            else f"failures: {failures[:3]}",
        )


def _corrupt_glue_data(rng, data):
    keys = [k for k, table in data.transitions.items() if len(table) >= 2]
    if not keys:
        return None
    key = rng.choice(keys)
    table = dict(data.transitions[key])
    cell = rng.choice(sorted(table))
    others = [e for e in data.group.elements if e != table[cell]]
    table[cell] = rng.choice(others)
    transitions = dict(data.transitions)
    transitions[key] = table
    return torsor.GlueData(data.base, data.group, data.pieces, transitions)


def test_criterion_5_orientability_monodromy(capsys):
    failures = []
    mob = fixture_mobius()
    o = is_orientable(mob)
    if o.orientable or o.monodromy != "(AB)":
        failures.append("fixture monodromy")
    pulled = pullback_family(double_cover_of_circle(mob), mob)
    if not is_orientable(pulled):
        failures.append("double cover not orientable")
    fams = corpus.family_corpus(seed=SEED, n=20)
    for idx, fam in enumerate(fams):
        o = is_orientable(fam)
        if o.orientable:
            oriented, _ = orient(fam)
            classify_to_M(oriented)  # must not raise
            if not fam.is_presented_oriented():
                with pytest.raises(families.NotOriented):
                    classify_to_M(fam)
        else:
            with pytest.raises(families.NotOriented):
                classify_to_M(fam)
    with capsys.disabled():
        _verdict(
            5,
            not failures,
            "mobius fixture obstructed by (AB), double cover orientable, "
            f"classifier gate exact on {len(fams)} families"
            if not failures
            else f"failures: {failures}",
        )


def test_criterion_6_quotient_stack_correspondence(capsys):
    failures = []
    fams = corpus.family_corpus(seed=SEED, n=20)
    assert len(fams) >= 20
    names = {0: "remark25-F", 1: "remark25-G", 2: "mobius"}
    for idx, fam in enumerate(fams):
        pair = torsor.family_to_torsor_pair(fam)
        back = torsor.torsor_pair_to_family(pair)
        if not are_isomorphic(fam, back):
            failures.append((names.get(idx, idx), "round trip left the class"))
    for idx, fam in enumerate(fams[:8]):
        sigma = trigeo.PERMS[idx % 6]
        other = twist_family(fam, sigma)
        r = are_isomorphic(fam, other)
        if not r:
            failures.append((idx, "twist not isomorphic"))
            continue
        p1 = torsor.family_to_torsor_pair(fam)
        p2 = torsor.family_to_torsor_pair(other)
        gauge = torsor.pair_gauge_from_family_iso(p1, p2, r.vertex_perms)
        maps = torsor.gauge_as_sheet_maps(p1.torsor, gauge)
        if not torsor.torsor_morphism_check(p1.torsor, p2.torsor, maps).ok:
            failures.append((idx, "gauge not an isomorphism of pairs"))
    with capsys.disabled():
        _verdict(
            6,
            not failures,
            f"{len(fams)} families round-trip through torsor pairs; "
            "isomorphic inputs give gauge-isomorphic pairs"
            if not failures
            else f"failures: {failures[:3]}",
        )


def _slice_grid(max_denominator=12):
    """All lattice triples of the perimeter-2 slice with denominator <= 12."""
    grid = set()
    for q in range(1, max_denominator + 1):
        for a in range(1, 2 * q):
            for b in range(1, 2 * q - a):
                c = 2 * q - a - b
                triple = (Fraction(a, q), Fraction(b, q), Fraction(c, q))
                if trigeo.in_M(triple):
                    grid.add(triple)
    return sorted(grid)


def test_criterion_7_geometry_exactness(capsys):
    grid = _slice_grid(12)
    failures = []
    for triple in grid:
        t = trigeo.TriangleLengths(*triple)
        stab = trigeo.stabilizer(t)
        distinct = len(set(triple))
        expected = {3: 1, 2: 2, 1: 6}[distinct]
        if len(stab) != expected:
            failures.append(("stabilizer", triple))
        if len(stab) * len(trigeo.orbit(t)) != 6:
            failures.append(("orbit-stabilizer", triple))
        n = trigeo.to_N(t)
        if trigeo.to_N(trigeo.TriangleLengths(*n.astuple())) != n:
            failures.append(("idempotence", triple))
        for g in trigeo.PERMS:
            if trigeo.to_N(trigeo.act(g, t)) != n:
                failures.append(("invariance", triple, g))
    rng = random.Random(SEED)
    for _ in range(1000):
        t = corpus.random_interior_triple(rng)
        a, b, c = trigeo.realize_vertices(t)
        if (
            trigeo.squared_distance(a, b) != t.x * t.x
            or trigeo.squared_distance(a, c) != t.y * t.y
            or trigeo.squared_distance(b, c) != t.z * t.z
        ):
            failures.append(("realization", t.astuple()))
    with capsys.disabled():
        _verdict(
            7,
            not failures,
            f"stabilizers, quotient and orbits exact on {len(grid)} grid triples; "
            "1000 planar realizations reproduce lengths exactly"
            if not failures
            else f"failures: {failures[:3]}",
        )


def test_criterion_8_coarse_moduli(capsys):
    grid = _slice_grid(12)
    failures = []
    # alpha at the point: iso classes of point families correspond exactly to
    # sorted representatives present in the grid
    by_rep = {}
    for triple in grid:
        pf = point_family(triple)
        rep = classify_to_N(pf).vertex_values["p"]
        if rep != tuple(sorted(triple)):
            failures.append(("representative", triple))
        by_rep.setdefault(rep, []).append(triple)
    for rep, members in by_rep.items():
        orbit = {trigeo.act_tuple(g, rep) for g in trigeo.PERMS}
        if set(members) != orbit:
            failures.append(("class is not one orbit", rep))
    reps = sorted(by_rep)
    if len(reps) != len({tuple(sorted(r)) for r in reps}):
        failures.append("representatives collide")

    fams = corpus.family_corpus(seed=SEED, n=12)
    for name in ("perimeter", "spread", "heron"):
        verdict = families.check_coarse_factorization(families.INVARIANTS[name], fams)
        if verdict.status != "factors":
            failures.append((name, verdict.status, verdict.witness))
    bad = families.check_coarse_factorization(families.INVARIANTS["ycoord"], fams)
    if bad.status == "factors" or bad.witness is None:
        failures.append(("ycoord should fail with a witness", bad.status))
    with capsys.disabled():
        _verdict(
            8,
            not failures,
            f"point classes biject with {len(by_rep)} grid representatives; "
            "perimeter/spread/heron factor, y-coordinate refuted with witness"
            if not failures
            else f"failures: {failures[:3]}",
        )


def test_criterion_9_germ_suite(capsys):
    from tristack import deform

    failures = []
    defs = corpus.deformation_corpus(seed=SEED, n=20)
    assert len(defs) >= 20
    assert any(trigeo.triangle_type(d.triangle) == "isosceles" for d in defs)
    for idx, d in enumerate(defs):
        for depth in (1, 2):
            if not deform.are_equivalent(d, deform.restrict_deformation(d, depth)):
                failures.append((idx, "restriction invariance", depth))
        d2 = deform.twist_deformation(d, trigeo.PERMS[idx % 6])
        if not deform.are_equivalent(d, d2):
            failures.append((idx, "twist equivalence"))
        if d.family.base.edges:
            eid = sorted(d.family.base.edges)[0]
            sub = families.subdivide_edge_map(d.family.base, eid, Fraction(1, 2))
            p1 = deform.pullback_deformation(sub, d, "x0")
            sub2 = families.subdivide_edge_map(d2.family.base, eid, Fraction(1, 2))
            p2 = deform.pullback_deformation(sub2, d2, "x0")
            if not deform.are_equivalent(p1, p2):
                failures.append((idx, "pullback well-definedness"))
            if not deform.are_equivalent(d, p1):
                failures.append((idx, "pullback along subdivision"))
    with capsys.disabled():
        _verdict(
            9,
            not failures,
            f"{len(defs)} germs: restriction-invariant, twist-equivalent, "
            "pullback respects equivalence"
            if not failures
            else f"failures: {failures[:3]}",
        )
