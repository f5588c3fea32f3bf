"""Site sets, bisector cells, classification, projection, boundedness."""
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errdiff.booleans import subset
from errdiff.geometry import (
    DegenerateHull,
    HalfPlane,
    MultiComponent,
    Point,
    Region,
    dist_sq,
    halfplane_intersection,
    pt,
)
from errdiff.voronoi import (
    AssumptionReport,
    CoincidentSites,
    SiteNotInSet,
    SiteSet,
    UnboundedCell,
    assumption_report,
    bisector,
    cell,
    classify,
    hull_edge_normals,
    inner_cell_diameter_sq,
    intersect_region_cell,
    intersect_region_cell_components,
    materialize_cell,
    project,
)

SQUARE_CORNERS = SiteSet((pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)), id="sq")
SQUARE_CENTER = SiteSet(
    (pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1), pt("1/2", "1/2")), id="sqc")

coord = st.fractions(min_value=-3, max_value=3, max_denominator=6)
points = st.builds(Point, coord, coord)


def norm(hp: HalfPlane):
    n = hp.normalized()
    return (n.a, n.b, n.c)


class TestBisector:
    def test_horizontal(self):
        assert norm(bisector(pt(0, 0), pt(1, 0))) == (F(2), F(0), F(1))

    def test_vertical(self):
        assert norm(bisector(pt(0, 0), pt(0, 2))) == (F(0), F(1), F(1))

    def test_diagonal(self):
        hp = bisector(pt("1/2", "1/2"), pt(0, 0))
        assert norm(hp) == (F(-2), F(-2), F(-1))  # x + y >= 1/2
        assert hp.contains(pt(1, 1))
        assert not hp.contains(pt(0, 0))

    def test_coincident_rejected(self):
        with pytest.raises(CoincidentSites):
            bisector(pt(1, 2), pt(1, 2))


class TestSiteSet:
    def test_duplicates_rejected(self):
        with pytest.raises(CoincidentSites):
            SiteSet((pt(0, 0), pt(1, 1), pt(0, 0)))

    def test_collinear_rejected(self):
        with pytest.raises(DegenerateHull):
            SiteSet((pt(0, 0), pt(2, 0)))
        with pytest.raises(DegenerateHull):
            SiteSet((pt(0, 0), pt(1, 0), pt(2, 0)))

    def test_classify_square(self):
        corners, inners = classify(SQUARE_CORNERS)
        assert len(corners) == 4 and inners == ()

    def test_classify_center(self):
        corners, inners = classify(SQUARE_CENTER)
        assert inners == (pt("1/2", "1/2"),)
        assert len(corners) == 4

    def test_edge_site_is_corner(self):
        S = SiteSet((pt(0, 0), pt(2, 0), pt(1, 0), pt(0, 2)))
        assert pt(1, 0) in S.corners

    def test_eight_point_star(self):
        S = SiteSet(tuple(
            pt(x, y) for x, y in [(-2, 0), (2, 0), (0, -2), (0, 2),
                                  ("1/2", "1/2"), ("-1/2", "1/2"),
                                  ("1/2", "-1/2"), ("-1/2", "-1/2")]))
        assert len(S.corners) == 4 and len(S.inners) == 4


class TestCell:
    def test_corner_cell_walls(self):
        c = cell(SQUARE_CORNERS, pt(0, 0))
        assert not c.bounded
        got = sorted(norm(w) for w in c.walls)
        assert got == sorted([
            (F(2), F(0), F(1)),   # x <= 1/2
            (F(0), F(2), F(1)),   # y <= 1/2
            (F(1), F(1), F(1)),   # x + y <= 1
        ])

    def test_unknown_site(self):
        with pytest.raises(SiteNotInSet):
            cell(SQUARE_CORNERS, pt(5, 5))

    def test_center_cell_is_diamond(self):
        got = materialize_cell(SQUARE_CENTER, pt("1/2", "1/2"))
        assert got == [pt(0, "1/2"), pt("1/2", 0), pt(1, "1/2"), pt("1/2", 1)]
        assert inner_cell_diameter_sq(SQUARE_CENTER, pt("1/2", "1/2")) == 1

    def test_corner_cell_not_materializable(self):
        with pytest.raises(UnboundedCell):
            materialize_cell(SQUARE_CORNERS, pt(0, 0))


class TestIntersect:
    def test_square_in_corner_cell(self):
        R = Region.from_ring([pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)])
        got = intersect_region_cell(R, cell(SQUARE_CORNERS, pt(0, 0)))
        assert list(got.vertices) == [
            pt(0, 0), pt("1/2", 0), pt("1/2", "1/2"), pt(0, "1/2")]

    def test_disjoint_is_none(self):
        R = Region.from_ring([pt(5, 5), pt(6, 5), pt(6, 6), pt(5, 6)])
        assert intersect_region_cell(R, cell(SQUARE_CORNERS, pt(0, 0))) is None

    def test_inside_is_identity(self):
        R = Region.from_ring(
            [pt(0, 0), pt("1/4", 0), pt("1/4", "1/4"), pt(0, "1/4")])
        got = intersect_region_cell(R, cell(SQUARE_CORNERS, pt(0, 0)))
        assert got.vertices == R.vertices

    def test_multicomponent_propagates(self):
        # square with a bottom notch; the lower site's cell keeps only the legs
        notched = Region.from_ring([
            pt(0, 0), pt(1, 0), pt(1, 2), pt(2, 2), pt(2, 0),
            pt(3, 0), pt(3, 3), pt(0, 3)])
        sites = SiteSet((pt("3/2", "1/2"), pt("3/2", "5/2"), pt(100, 1)))
        lower = cell(sites, pt("3/2", "1/2"))
        with pytest.raises(MultiComponent):
            intersect_region_cell(notched, lower)
        comps = intersect_region_cell_components(notched, lower)
        assert len(comps) == 2


class TestProject:
    def test_basic(self):
        assert project(SQUARE_CORNERS, pt("9/10", 0)) == pt(1, 0)
        assert project(SQUARE_CORNERS, pt("9/10", "1/5")) == pt(1, 0)

    def test_prefers_near_site(self):
        S = SiteSet((pt(0, 0), pt(2, 0), pt(0, 2)))
        assert project(S, pt("9/10", 0)) == pt(0, 0)

    def test_tie_break_lexicographic(self):
        assert project(SQUARE_CORNERS, pt("1/2", "1/2")) == pt(0, 0)
        assert project(SQUARE_CORNERS, pt("1/2", 0)) == pt(0, 0)

    @given(points)
    @settings(max_examples=80)
    def test_projection_minimizes(self, x):
        y = project(SQUARE_CENTER, x)
        for c in SQUARE_CENTER:
            assert dist_sq(x, y) <= dist_sq(x, c)

    @given(points)
    @settings(max_examples=80)
    def test_point_lies_in_cell_of_projection(self, x):
        y = project(SQUARE_CENTER, x)
        for w in cell(SQUARE_CENTER, y).walls:
            assert w.contains(x)


class TestCornerCellMonotonicity:
    def test_cell_within_corner_cell(self):
        # the cell under all sites sits inside the cell under corners only
        S = SQUARE_CENTER
        cor = SiteSet(S.corners, id="cor")
        box = [pt(-9, -9), pt(9, -9), pt(9, 9), pt(-9, 9)]
        for c in S.corners:
            fine = halfplane_intersection(cell(S, c).walls, box)
            coarse = halfplane_intersection(cell(cor, c).walls, box)
            assert fine is not None and coarse is not None
            assert subset(fine, coarse)


class TestAssumptionReport:
    def test_square(self):
        rep = assumption_report([SQUARE_CORNERS])
        assert rep.max_hull_diameter_sq == 2
        assert rep.normal_count == 4
        assert set(rep.normals) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
        assert rep.max_inner_cell_diameter_sq is None

    def test_center_adds_inner_diameter(self):
        rep = assumption_report([SQUARE_CENTER])
        assert rep.max_inner_cell_diameter_sq == 1

    def test_normals_union_over_members(self):
        tri = SiteSet((pt(0, 0), pt(2, 0), pt(0, 2)), id="tri")
        rep = assumption_report([SQUARE_CORNERS, tri])
        assert (1, 1) in rep.normals
        assert rep.normal_count == 5

    def test_as_dict_round_trip(self):
        d = assumption_report([SQUARE_CENTER]).as_dict()
        assert d["max_hull_diameter_sq"] == "2"
        assert d["max_inner_cell_diameter_sq"] == "1"
        assert d["normal_count"] == 4


class TestCoverage:
    @given(points)
    @settings(max_examples=60)
    def test_cells_tile_the_plane(self, x):
        # membership in the projected site's cell certifies the tiling
        y = project(SQUARE_CENTER, x)
        others = [c for c in SQUARE_CENTER if c != y]
        assert all(bisector(y, d).contains(x) for d in others)
