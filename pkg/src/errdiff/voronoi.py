"""Finite planar site sets, their Voronoi cells, and the projection operator.

Cells are kept as half-plane lists (one bisector per other site, unpruned);
bounded cells are only materialized on demand inside an inflated bounding
box. Distance comparisons run on unreduced integer numerator/denominator
pairs to stay exact without gcd overhead.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterator, Sequence

from .geometry import (
    ConvexPolygon,
    GeometryError,
    HalfPlane,
    MultiComponent,
    Point,
    Region,
    bbox,
    ceil_sqrt,
    cmp_nd,
    convex_hull,
    diameter_sq_of,
    dist_sq_nd,
    halfplane_intersection,
    scalar_str,
)
from .booleans import clip_components

TWO = Fraction(2)


class VoronoiError(GeometryError):
    pass


class CoincidentSites(VoronoiError):
    pass


class SiteNotInSet(VoronoiError):
    pass


class UnboundedCell(VoronoiError):
    pass


def bisector(c: Point, c2: Point) -> HalfPlane:
    """Half-plane of points at least as close to c as to c2."""
    if c == c2:
        raise CoincidentSites(f"identical sites {c}")
    d = c2 - c
    return HalfPlane(TWO * d.x, TWO * d.y, c2.norm_sq() - c.norm_sq())


@dataclass(frozen=True)
class SiteSet:
    """Distinct planar sites with a positive-area convex hull."""

    sites: tuple[Point, ...]
    id: str = ""

    def __post_init__(self):
        if not self.sites:
            raise VoronoiError("empty site set")
        seen = set()
        for s in self.sites:
            if s.key() in seen:
                raise CoincidentSites(f"duplicate site {s}")
            seen.add(s.key())
        self.hull  # force validation; collinear sites raise DegenerateHull

    def __len__(self) -> int:
        return len(self.sites)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.sites)

    @cached_property
    def hull(self) -> ConvexPolygon:
        return ConvexPolygon(convex_hull(self.sites))

    @cached_property
    def corners(self) -> tuple[Point, ...]:
        return tuple(s for s in self.sites if self.hull.locate(s) == 0)

    @cached_property
    def inners(self) -> tuple[Point, ...]:
        return tuple(s for s in self.sites if self.hull.locate(s) == 1)


def classify(S: SiteSet) -> tuple[tuple[Point, ...], tuple[Point, ...]]:
    """Sites on the hull boundary (corners) and strictly inside (inners)."""
    return S.corners, S.inners


@dataclass(frozen=True)
class VoronoiCellH:
    """A Voronoi cell as the intersection of bisector half-planes."""

    site: Point
    walls: tuple[HalfPlane, ...]
    bounded: bool


def cell(S: SiteSet, c: Point) -> VoronoiCellH:
    if c not in S.sites:
        raise SiteNotInSet(f"{c} is not a site")
    walls = tuple(bisector(c, d) for d in S.sites if d != c)
    return VoronoiCellH(c, walls, bounded=c in S.inners)


def intersect_region_cell(R: Region, V: VoronoiCellH) -> Region | None:
    """R clipped into V; None when empty, MultiComponent when it splits."""
    ring = list(R.vertices)
    for hp in V.walls:
        comps = clip_components(ring, hp)
        if not comps:
            return None
        if len(comps) > 1:
            raise MultiComponent(
                f"cell of {V.site} cuts the region into {len(comps)} parts")
        ring = comps[0]
    # the input's star center need not survive the clip; callers reattach one
    return Region.from_ring(ring, validate=False)


def intersect_region_cell_components(R: Region, V: VoronoiCellH) -> list[list[Point]]:
    """All components of R clipped into V (the disconnection-tolerant form)."""
    rings = [list(R.vertices)]
    for hp in V.walls:
        rings = [comp for ring in rings for comp in clip_components(ring, hp)]
        if not rings:
            return []
    return rings


def project(S: SiteSet, x: Point) -> Point:
    """A squared-distance-minimizing site; ties go to the smallest site."""
    best = S.sites[0]
    best_d = dist_sq_nd(x, best)
    for c in S.sites[1:]:
        d = dist_sq_nd(x, c)
        v = cmp_nd(d, best_d)
        if v < 0 or (v == 0 and c.key() < best.key()):
            best, best_d = c, d
    return best


def materialize_cell(S: SiteSet, c: Point) -> list[Point]:
    """Bounded cell of an inner site as a ring, via an inflated hull box."""
    if c not in S.inners:
        raise UnboundedCell(f"{c} is not an inner site")
    pad = 4 * ceil_sqrt(S.hull.diameter_sq)
    xmin, ymin, xmax, ymax = S.hull.bbox
    box = [
        Point(xmin - pad, ymin - pad), Point(xmax + pad, ymin - pad),
        Point(xmax + pad, ymax + pad), Point(xmin - pad, ymax + pad),
    ]
    got = halfplane_intersection([bisector(c, d) for d in S.sites if d != c], box)
    if got is None:
        raise UnboundedCell(f"cell of {c} vanished inside its box")
    for v in got:
        if (v.x in (xmin - pad, xmax + pad)) or (v.y in (ymin - pad, ymax + pad)):
            raise UnboundedCell(f"cell of {c} reaches the bounding box")
    return got


def inner_cell_diameter_sq(S: SiteSet, c: Point) -> Fraction:
    return diameter_sq_of(materialize_cell(S, c))


def hull_edge_normals(S: SiteSet) -> list[tuple[int, int]]:
    """Outward edge normals of ch S as reduced integer direction pairs."""
    out = []
    for u, v in S.hull.edges():
        d = v - u
        nx = d.y.numerator * d.x.denominator
        ny = -d.x.numerator * d.y.denominator
        g = gcd(nx, ny)
        out.append((nx // g, ny // g))
    return out


@dataclass(frozen=True)
class AssumptionReport:
    """Uniform-boundedness data for a finite family of site sets."""

    max_hull_diameter_sq: Fraction
    normals: tuple[tuple[int, int], ...]
    max_inner_cell_diameter_sq: Fraction | None

    @property
    def normal_count(self) -> int:
        return len(self.normals)

    def as_dict(self) -> dict:
        return {
            "max_hull_diameter_sq": scalar_str(self.max_hull_diameter_sq),
            "normal_count": self.normal_count,
            "normals": [list(n) for n in self.normals],
            "max_inner_cell_diameter_sq":
                None if self.max_inner_cell_diameter_sq is None
                else scalar_str(self.max_inner_cell_diameter_sq),
        }


def assumption_report(site_sets: Sequence[SiteSet]) -> AssumptionReport:
    if not site_sets:
        raise VoronoiError("empty collection")
    max_hull = max(S.hull.diameter_sq for S in site_sets)
    normals = sorted({n for S in site_sets for n in hull_edge_normals(S)})
    inner_diams = [inner_cell_diameter_sq(S, c)
                   for S in site_sets for c in S.inners]
    return AssumptionReport(
        max_hull_diameter_sq=max_hull,
        normals=tuple(normals),
        max_inner_cell_diameter_sq=max(inner_diams) if inner_diams else None,
    )
