"""Structural checks: invariance, star-convexity, coverage, reachability."""
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errdiff.dynamics import Triangle, triangle_bound
from errdiff.geometry import ORIGIN, PointSeed, Region, pt
from errdiff.operators import Collection, apply_operator, iterate
from errdiff.verify import (
    VerificationReport,
    brute_force_reachable,
    contains_union_of_hulls,
    coverage_ratio,
    covers_translated_inner_cells,
    is_invariant_g,
    is_invariant_p,
    is_star_convex_origin,
    reachable_within,
    triangle_family_check,
)
from errdiff.voronoi import SiteSet


def sites(*coords, id="S"):
    return SiteSet(tuple(pt(x, y) for x, y in coords), id=id)


def box(r, center=(0, 0)):
    cx, cy = center
    return Region.from_ring((pt(cx - r, cy - r), pt(cx + r, cy - r),
                             pt(cx + r, cy + r), pt(cx - r, cy + r)))


SQUARE = sites((0, 0), (1, 0), (1, 1), (0, 1), id="unit-square")
SQUARE5 = sites((0, 0), (1, 0), (1, 1), (0, 1), (F(1, 2), F(1, 2)), id="square5")
DIAMOND = sites((2, 0), (0, 2), (-2, 0), (0, -2), id="diamond")


class TestReportShape:
    def test_passed_mirrors_witnesses(self):
        with pytest.raises(ValueError):
            VerificationReport("c", True, (ORIGIN,))
        with pytest.raises(ValueError):
            VerificationReport("c", False, ())
        assert VerificationReport("c", True).passed

    def test_reports_are_deterministic(self):
        a = is_invariant_g(SQUARE, box(F(1, 4)))
        b = is_invariant_g(SQUARE, box(F(1, 4)))
        assert a == b


class TestInvariantG:
    def test_minimal_box_is_invariant(self):
        assert is_invariant_g(SQUARE, box(F(1, 2))).passed

    def test_small_box_fails_with_witness(self):
        rep = is_invariant_g(SQUARE, box(F(1, 4)))
        assert not rep.passed
        w = rep.witnesses[0]
        assert max(abs(w.x), abs(w.y)) > F(1, 4)

    def test_larger_invariant_sets_exist(self):
        assert is_invariant_g(SQUARE, box(1)).passed

    def test_collection_requires_every_member(self):
        rep = is_invariant_g(Collection((SQUARE, DIAMOND)), box(F(1, 2)))
        assert not rep.passed

    def test_converged_run_verifies(self):
        res = iterate("g", Collection((DIAMOND,)), PointSeed(ORIGIN))
        assert res.converged
        assert is_invariant_g(DIAMOND, res.final).passed
        assert is_star_convex_origin(res.final).passed


class TestInvariantP:
    def test_hull_is_not_invariant_for_the_square(self):
        # z = (3/4, 3/4) quantizes to (1,1); adding x = (0,0) escapes the
        # hull, so the hull of this site set cannot absorb one round
        D = Region.from_ring((pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)))
        rep = is_invariant_p(SQUARE, D)
        assert not rep.passed
        assert rep.witnesses

    def test_half_box_fails(self):
        D = Region.from_ring((pt(0, 0), pt(F(1, 2), 0),
                              pt(F(1, 2), F(1, 2)), pt(0, F(1, 2))))
        assert not is_invariant_p(SQUARE, D).passed

    def test_converged_p_run_verifies(self):
        res = iterate("p", Collection((SQUARE,)), PointSeed(pt(0, 0)))
        assert res.converged
        rep = is_invariant_p(SQUARE, res.final)
        assert rep.passed
        assert contains_union_of_hulls(SQUARE, res.final).passed


class TestStarConvex:
    def test_box_passes(self):
        assert is_star_convex_origin(box(F(1, 2))).passed

    def test_l_shape_with_origin_on_boundary_passes(self):
        L = Region.from_ring((pt(0, 0), pt(2, 0), pt(2, 1),
                              pt(1, 1), pt(1, 2), pt(0, 2)))
        assert is_star_convex_origin(L).passed

    def test_translated_l_shape_fails(self):
        L = Region.from_ring((pt(0, 0), pt(2, 0), pt(2, 1),
                              pt(1, 1), pt(1, 2), pt(0, 2))).translate(pt(-3, -3))
        rep = is_star_convex_origin(L)
        assert not rep.passed
        assert rep.witnesses


class TestCellCoverage:
    def test_center_cell_inside_minimal_box(self):
        assert covers_translated_inner_cells(SQUARE5, box(F(1, 2))).passed

    def test_small_box_misses_the_cell(self):
        rep = covers_translated_inner_cells(SQUARE5, box(F(1, 4)))
        assert not rep.passed

    def test_no_inner_sites_is_vacuous(self):
        rep = covers_translated_inner_cells(SQUARE, box(F(1, 100)))
        assert rep.passed
        assert "0 bounded cells" in rep.notes

    def test_computed_minimal_set_covers(self):
        res = iterate("g", Collection((SQUARE5,)), PointSeed(ORIGIN))
        assert res.converged and res.rounding_free
        assert covers_translated_inner_cells(SQUARE5, res.final).passed


class TestUnionOfHulls:
    def test_single_member_hull(self):
        D = Region.from_ring(SQUARE.hull.vertices)
        assert contains_union_of_hulls(SQUARE, D).passed

    def test_missing_member_reported(self):
        D = Region.from_ring(SQUARE.hull.vertices)
        rep = contains_union_of_hulls(Collection((SQUARE, DIAMOND)), D)
        assert not rep.passed
        assert rep.witnesses

    def test_bigger_domain_absorbs_both(self):
        D = box(2)
        assert contains_union_of_hulls(Collection((SQUARE, DIAMOND)), D).passed


class TestTriangleFamily:
    def test_envelope_self_invariance_sampled(self):
        rep = triangle_family_check(1, 1, samples=1500, seed=3)
        assert rep.passed
        assert "evidence" in rep.notes

    def test_hand_example_one_round(self):
        # the delayed round from the apex of the envelope through T(1/2)
        tri = Triangle(F(1, 2), 1)
        z = pt(0, 1)
        x = pt(0, 0)
        out = z - tri.project(z) + x
        assert out == pt(0, F(1, 2))
        assert Triangle(1, 1).contains(out)

    def test_half_candidate_fails(self):
        rep = triangle_family_check(1, 1, samples=200, seed=0,
                                    candidate=Triangle(F(1, 2), 1))
        assert not rep.passed
        assert any(w.y > F(1, 2) for w in rep.witnesses)

    def test_same_seed_same_report(self):
        a = triangle_family_check(1, F(2, 3), samples=400, seed=9)
        b = triangle_family_check(1, F(2, 3), samples=400, seed=9)
        assert a == b

    def test_degenerate_family(self):
        rep = triangle_family_check(0, 1, samples=50, seed=1)
        assert rep.passed

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=15, deadline=None)
    def test_envelope_never_fails_under_any_seed(self, seed):
        assert triangle_family_check(2, F(1, 2), samples=60, seed=seed).passed


class TestReachability:
    def test_zero_steps_is_the_origin(self):
        assert brute_force_reachable(SQUARE, 0) == (ORIGIN,)

    def test_unit_square_cloud_touches_all_sides(self):
        cloud = brute_force_reachable(SQUARE, 6)
        half = F(1, 2)
        assert all(max(abs(p.x), abs(p.y)) <= half for p in cloud)
        assert any(p.x == half for p in cloud)
        assert any(p.x == -half for p in cloud)
        assert any(p.y == half for p in cloud)
        assert any(p.y == -half for p in cloud)

    def test_cloud_is_inside_the_computed_minimal_set(self):
        res = iterate("g", Collection((SQUARE,)), PointSeed(ORIGIN))
        rep = reachable_within(SQUARE, res.final, 6)
        assert rep.passed
        assert "coverage" not in rep.notes  # ratio text says "covers"

    def test_full_coverage_ratio_for_the_square(self):
        cloud = brute_force_reachable(SQUARE, 6)
        assert coverage_ratio(cloud, box(F(1, 2))) == 1

    def test_flat_cloud_has_zero_ratio(self):
        assert coverage_ratio((ORIGIN, pt(1, 0)), box(1)) == 0

    def test_random_branching_cloud_stays_inside(self):
        res = iterate("g", Collection((DIAMOND,)), PointSeed(ORIGIN))
        rep = reachable_within(DIAMOND, res.final, 300, branching=1, seed=5)
        assert rep.passed

    def test_collection_cloud_spans_members(self):
        res = iterate("g", Collection((SQUARE, DIAMOND)), PointSeed(ORIGIN))
        rep = reachable_within(Collection((SQUARE, DIAMOND)), res.final, 3)
        assert rep.passed

    def test_negative_steps_rejected(self):
        with pytest.raises(ValueError):
            brute_force_reachable(SQUARE, -1)

    def test_exhaustive_cloud_is_deterministic(self):
        assert brute_force_reachable(SQUARE, 4) == brute_force_reachable(SQUARE, 4)


class TestTriangleBoundAgreement:
    def test_family_check_bound_consistency(self):
        # a trajectory bound claim the sampler should never contradict:
        # one delayed round from inside the envelope stays within the
        # envelope, whose squared diameter is triangle_bound
        import random
        from errdiff.dynamics import sample_hull_point
        rng = random.Random(12)
        env = Triangle(1, 1)
        for _ in range(200):
            h = F(rng.random()) * 1
            tri = Triangle(h, 1)
            z = sample_hull_point(env.hull_vertices(), rng)
            x = sample_hull_point(tri.hull_vertices(), rng)
            out = z - tri.project(z) + x
            assert env.contains(out)
            assert (z - tri.project(z)).norm_sq() <= triangle_bound(1, 1)
