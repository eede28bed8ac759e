from fractions import Fraction

import pytest

from tristack.deform import (
    Deformation,
    FamilyInvalid,
    IllTypedMap,
    MarkingNotIsometry,
    are_equivalent,
    closed_star_inclusion,
    deformation,
    deformation_from_json,
    deformation_to_json,
    germ_normal_form,
    pullback_deformation,
    restrict_deformation,
    twist_deformation,
    validate_deformation,
)
from tristack.families import (
    constant_family,
    family,
    fixture_remark25,
    graph,
    graph_map,
    identity_graph_map,
    subdivide_edge_map,
)
from tristack.trigeo import TriangleLengths, act

F = Fraction


def star_two_legs(t0=(3, 4, 5), t1=(3, 4, F(9, 2)), t2=(2, 3, 4)):
    base = graph(["x0", "a", "b"], [("e1", "x0", "a"), ("e2", "b", "x0")])
    c = TriangleLengths(*t0)
    return family(
        base,
        {"x0": c, "a": TriangleLengths(*t1), "b": TriangleLengths(*t2)},
        {
            "e1": ((F(0), c), (F(1), TriangleLengths(*t1))),
            "e2": ((F(0), TriangleLengths(*t2)), (F(1), c)),
        },
    )


class TestValidate:
    def test_constant_deformation_valid(self):
        fam = constant_family(graph(["x0"], []), (3, 4, 5))
        d = deformation((3, 4, 5), fam, "x0")
        assert validate_deformation(d).ok

    def test_marking_must_be_isometry(self):
        fam = constant_family(graph(["x0"], []), (3, 4, 5))
        with pytest.raises(MarkingNotIsometry):
            deformation((3, 4, 5), fam, "x0", marking="(AB)")

    def test_twisted_marking_accepted_when_it_matches(self):
        target = act("(AB)", TriangleLengths(3, 4, 5))
        fam = constant_family(graph(["x0"], []), target)
        d = deformation((3, 4, 5), fam, "x0", marking="(AB)")
        assert validate_deformation(d).ok

    def test_moving_star_family_valid(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        assert validate_deformation(d).ok

    def test_family_must_stay_in_the_star(self):
        base = graph(["x0", "a", "b"], [("e1", "x0", "a"), ("e2", "a", "b")])
        t = TriangleLengths(3, 4, 5)
        fam = family(
            base,
            {"x0": t, "a": t, "b": t},
            {"e1": ((F(0), t), (F(1), t)), "e2": ((F(0), t), (F(1), t))},
        )
        with pytest.raises(FamilyInvalid):
            deformation((3, 4, 5), fam, "x0")


class TestNormalForm:
    def test_reorients_and_cuts(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        nf = germ_normal_form(d)
        assert nf.basepoint == "o"
        assert sorted(nf.family.base.edges) == ["e1", "e2.to"]
        assert nf.family.vertex_lengths["o"] == d.family.vertex_lengths["x0"]

    def test_depth_halves_the_chart(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        nf0 = germ_normal_form(d, 0)
        nf1 = germ_normal_form(d, 1)
        end0 = nf0.family.charts["e1"][-1][1]
        end1 = nf1.family.charts["e1"][-1][1]
        assert end1.astuple() == (3, 4, F(19, 4))  # halfway toward (3, 4, 9/2)
        assert end0.astuple() == (3, 4, F(9, 2))

    def test_loop_contributes_two_germ_edges(self):
        base = graph(["x0"], [("l", "x0", "x0")])
        t = TriangleLengths(2, 2, 2)
        fam = family(base, {"x0": t}, {"l": ((F(0), t), (F(1), t))})
        nf = germ_normal_form(deformation((2, 2, 2), fam, "x0"))
        assert sorted(nf.family.base.edges) == ["l.from", "l.to"]


class TestEquivalence:
    def test_reflexive(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        assert are_equivalent(d, d)

    def test_restriction_invariance(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        for depth in (1, 2):
            r = are_equivalent(d, restrict_deformation(d, depth))
            assert r, depth

    def test_global_twist_is_equivalent_with_matching_marking(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        for sigma in ("(AB)", "(ABC)"):
            assert are_equivalent(d, twist_deformation(d, sigma))

    def test_mismatched_marking_not_equivalent(self):
        # marking twisted without twisting the family: the basepoint
        # constraint pins the identification and fails on a moving leg
        t = TriangleLengths(2, 2, 2)
        fam = constant_family(graph(["x0"], []), t)
        d1 = deformation((2, 2, 2), fam, "x0", marking="e")
        d2 = deformation((2, 2, 2), fam, "x0", marking="(ABC)")
        base = graph(["x0", "a"], [("e1", "x0", "a")])
        scal = TriangleLengths(2, 3, 4)
        fam2 = family(
            base,
            {"x0": t, "a": scal},
            {"e1": ((F(0), t), (F(1), scal))},
        )
        e1 = deformation((2, 2, 2), fam2, "x0", marking="e")
        e2 = Deformation(e1.triangle, fam2, "x0", "(ABC)")
        # equilateral fiber: marking (ABC) still an isometry, but the leg chart
        # forces tau = e, clashing with the pinned basepoint permutation
        assert validate_deformation(e2).ok
        assert are_equivalent(d1, d2)  # point germ: stabilizer absorbs the twist
        assert not are_equivalent(e1, e2)

    def test_remark25_clash_at_the_isosceles_basepoint(self):
        f, g = fixture_remark25()
        t = TriangleLengths(1, 1, 1)
        df = deformation(t, f, "1/2")
        dg = deformation(t, g, "1/2")
        assert not are_equivalent(df, dg)

    def test_remark25_equivalent_at_scalene_basepoint(self):
        # at the endpoint 0 the two families are literally equal on the star
        f, g = fixture_remark25()
        t = TriangleLengths(1, F(4, 5), F(6, 5))
        blunt_f = deformation(t, _star_at(f, "0"), "0")
        blunt_g = deformation(t, _star_at(g, "0"), "0")
        assert are_equivalent(blunt_f, blunt_g)

    def test_different_stars_rejected(self):
        d1 = deformation((3, 4, 5), star_two_legs(), "x0")
        fam = constant_family(graph(["x0"], []), (3, 4, 5))
        d2 = deformation((3, 4, 5), fam, "x0")
        with pytest.raises(Exception):
            are_equivalent(d1, d2)


def _star_at(fam, v):
    from tristack.deform import closed_star_inclusion
    from tristack.families import pullback_family

    incl = closed_star_inclusion(fam.base, v)
    return pullback_family(incl, fam)


class TestPullback:
    def test_identity_pullback_equivalent(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        back = pullback_deformation(identity_graph_map(d.family.base), d, "x0")
        assert are_equivalent(d, back)

    def test_pullback_to_point_is_constant(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        pt = graph(["y0"], [])
        m = graph_map(pt, d.family.base, {"y0": ("vertex", "x0")}, {})
        pulled = pullback_deformation(m, d, "y0")
        assert pulled.family.vertex_lengths["y0"] == d.family.vertex_lengths["x0"]
        assert not pulled.family.base.edges

    def test_pullback_along_subdivision_is_equivalent(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        sub = subdivide_edge_map(d.family.base, "e1", F(1, 2))
        pulled = pullback_deformation(sub, d, "x0")
        assert are_equivalent(d, pulled)

    def test_pullback_preserves_equivalence(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        d2 = twist_deformation(d, "(AC)")
        sub = subdivide_edge_map(d.family.base, "e2", F(1, 3))
        p1 = pullback_deformation(sub, d, "x0")
        sub2 = subdivide_edge_map(d2.family.base, "e2", F(1, 3))
        p2 = pullback_deformation(sub2, d2, "x0")
        assert are_equivalent(d, d2)
        assert are_equivalent(p1, p2)

    def test_unpointed_map_rejected(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        m = graph_map(graph(["y0"], []), d.family.base, {"y0": ("vertex", "a")}, {})
        with pytest.raises(IllTypedMap):
            pullback_deformation(m, d, "y0")


class TestJson:
    def test_round_trip(self):
        d = deformation((3, 4, 5), star_two_legs(), "x0")
        again = deformation_from_json(deformation_to_json(d))
        assert again.triangle == d.triangle
        assert again.marking == d.marking
        assert again.family == d.family
