"""Structural checks over computed sets, with exact or sampled evidence.

Every check answers through the same report shape: a name, a verdict, and
the witnesses that broke it (none when it passed).  Subset and membership
questions are decided exactly in rational arithmetic; the triangle-family
and reachability checks are sampled, which makes a green result evidence
rather than proof, while any witness they produce is an exact
counterexample.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .booleans import subset_witness
from .dynamics import Triangle, TriangleFamily, sample_hull_point
from .geometry import (
    ConvexPolygon,
    DegenerateHull,
    ORIGIN,
    Point,
    Region,
    Scalar,
    dist_sq,
    orient,
    scalar_str,
    star_kernel_contains,
)
from .operators import Collection, g_step_collection, p_step_collection
from .voronoi import SiteSet, cell, intersect_region_cell, materialize_cell

WITNESS_CAP = 10


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check; it passes exactly when no witness survived."""

    check: str
    passed: bool
    witnesses: tuple[Point, ...] = ()
    notes: str = ""

    def __post_init__(self):
        if self.passed != (not self.witnesses):
            raise ValueError("passed must mirror the absence of witnesses")


def _report(check: str, witnesses, notes: str = "") -> VerificationReport:
    witnesses = tuple(witnesses)
    if len(witnesses) > WITNESS_CAP:
        notes = (notes + f"; showing {WITNESS_CAP} of {len(witnesses)} witnesses").strip("; ")
        witnesses = witnesses[:WITNESS_CAP]
    return VerificationReport(check, not witnesses, witnesses, notes)


def _as_collection(scenario) -> Collection:
    if isinstance(scenario, Collection):
        return scenario
    if isinstance(scenario, SiteSet):
        return Collection((scenario,))
    return Collection(tuple(scenario))


# ---------------------------------------------------------------------------
# exact invariance checks


def is_invariant_g(scenario, Q: Region) -> VerificationReport:
    """Does Q swallow its own g image across the whole collection (exact)?"""
    coll = _as_collection(scenario)
    image = g_step_collection(coll, Q)
    w = subset_witness(image.vertices, Q.vertices)
    notes = f"image has {len(image.vertices)} vertices"
    return _report("is_invariant_g", () if w is None else (w,), notes)


def is_invariant_p(scenario, D: Region) -> VerificationReport:
    """Does D swallow its own p image across the whole collection (exact)?"""
    coll = _as_collection(scenario)
    image = p_step_collection(coll, D)
    w = subset_witness(image.vertices, D.vertices)
    notes = f"image has {len(image.vertices)} vertices"
    return _report("is_invariant_p", () if w is None else (w,), notes)


def is_star_convex_origin(Q: Region) -> VerificationReport:
    """Is every point of Q visible from the origin (exact kernel test)?"""
    if star_kernel_contains(Q.vertices, ORIGIN):
        return _report("is_star_convex_origin", ())
    ring = Q.vertices
    witnesses = []
    for i, u in enumerate(ring):
        v = ring[(i + 1) % len(ring)]
        if orient(u, v, ORIGIN) < 0:
            witnesses.append(Point((u.x + v.x) / 2, (u.y + v.y) / 2))
    return _report("is_star_convex_origin", witnesses,
                   "origin falls outside the edge halfplanes at these midpoints")


def covers_translated_inner_cells(S: SiteSet, Q: Region) -> VerificationReport:
    """Does Q contain every bounded cell recentered on its site (exact)?"""
    witnesses = []
    for c in S.inners:
        ring = [p - c for p in materialize_cell(S, c)]
        w = subset_witness(ring, Q.vertices)
        if w is not None:
            witnesses.append(w)
    notes = f"checked {len(S.inners)} bounded cells"
    return _report("covers_translated_inner_cells", witnesses, notes)


def contains_union_of_hulls(scenario, D: Region) -> VerificationReport:
    """Does D contain the hull of every member (exact)?"""
    coll = _as_collection(scenario)
    witnesses = []
    for S in coll:
        w = subset_witness(S.hull.vertices, D.vertices)
        if w is not None:
            witnesses.append(w)
    return _report("contains_union_of_hulls", witnesses,
                   f"checked {len(coll)} member hulls")


# ---------------------------------------------------------------------------
# sampled evidence


def triangle_family_check(h_max: Scalar, t: Scalar, samples: int = 10_000,
                          seed: int = 0,
                          candidate: Triangle | None = None) -> VerificationReport:
    """Sampled invariance of a wedge under one delayed round.

    Draws triples (h, z, x) with z in the candidate wedge and x in T(h),
    then requires z - proj_{T(h)}(z) + x to stay inside the candidate.
    When a candidate smaller than T(h_max) is supplied, the same probes
    double as a floor test: points of T(h_max) must already belong to any
    set that survives this check.  Witnesses are exact escape points.
    """
    fam = TriangleFamily(h_max, t)
    envelope = fam.envelope
    target = candidate if candidate is not None else envelope
    rng = random.Random(seed)
    witnesses: list[Point] = []

    def push(p: Point):
        if not target.contains(p):
            witnesses.append(p)

    # deterministic probes: family corners must be reachable, hence covered
    for w in envelope.hull_vertices():
        push(w)
    probe_z = [v for v in target.hull_vertices() if envelope.contains(v)]
    for z in probe_z:
        for h in (envelope.h, envelope.h / 2):
            tri = Triangle(h, fam.t)
            for x in tri.hull_vertices():
                push(z - tri.project(z) + x)
    tested = 0
    while tested < samples and len(witnesses) <= WITNESS_CAP:
        h = Fraction(rng.random()) * fam.h_max
        tri = Triangle(h, fam.t)
        z = sample_hull_point(target.hull_vertices(), rng)
        if not target.contains(z):
            z = target.project(z)
        x = sample_hull_point(tri.hull_vertices(), rng)
        push(z - tri.project(z) + x)
        push(sample_hull_point(envelope.hull_vertices(), rng))
        tested += 1
    notes = f"{tested} sampled triples, seed {seed} (evidence, not proof)"
    return _report("triangle_family_check", witnesses, notes)


def _argmin_sites(S: SiteSet, z: Point) -> list[Point]:
    """All sites tied for nearest: the quantizer may answer any of them."""
    best = None
    out: list[Point] = []
    for c in S.sites:
        d = dist_sq(c, z)
        if best is None or d < best:
            best, out = d, [c]
        elif d == best:
            out.append(c)
    return out


def _input_pool(S: SiteSet) -> tuple[Point, ...]:
    """Extreme inputs: hull corners plus every clipped-cell vertex.

    Cell vertices sit on quantization boundaries, where a single input
    realizes several outputs at once; together with the hull corners they
    drive the error to the boundary of the minimal set.
    """
    hull = Region.from_ring(S.hull.vertices, validate=False)
    pool = set(S.hull.vertices)
    for c in S.sites:
        piece = intersect_region_cell(hull, cell(S, c))
        if piece is not None:
            pool.update(piece.vertices)
    return tuple(sorted(pool, key=Point.key))


def brute_force_reachable(scenario, steps: int, branching: int = 0,
                          seed: int = 0) -> tuple[Point, ...]:
    """Every accumulated error visited by breadth-first input exploration.

    From a zero error, each round picks a member, an input, and one of the
    nearest sites (all ties are explored, since any selection is a legal
    quantizer).  branching = 0 exhausts the pool of extreme inputs: hull
    corners and clipped-cell vertices.  branching = k > 0 draws k random
    hull points per expansion instead.  Depth steps = 0 returns just the
    origin.  The cloud is a certified subset of the reachable errors, so
    it lower-bounds every invariant region.
    """
    coll = _as_collection(scenario)
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    rng = random.Random(seed)
    pools = {S.id: _input_pool(S) for S in coll} if branching == 0 else {}
    seen = {ORIGIN}
    frontier = [ORIGIN]
    for _ in range(steps):
        grown: list[Point] = []
        for e in frontier:
            for S in coll:
                if branching == 0:
                    inputs = pools[S.id]
                else:
                    inputs = [sample_hull_point(S.hull.vertices, rng)
                              for _ in range(branching)]
                for x in inputs:
                    z = e + x
                    for y in _argmin_sites(S, z):
                        nxt = z - y
                        if nxt not in seen:
                            seen.add(nxt)
                            grown.append(nxt)
        frontier = grown
    return tuple(sorted(seen, key=Point.key))


def coverage_ratio(cloud, Q: Region) -> Fraction:
    """Area of the cloud hull over the area of Q (0 for flat clouds)."""
    try:
        hull = ConvexPolygon.hull_of(cloud)
    except DegenerateHull:
        return Fraction(0)
    return hull.area2 / Q.area2


def reachable_within(scenario, Q: Region, steps: int, branching: int = 0,
                     seed: int = 0) -> VerificationReport:
    """Exact containment of a reachable cloud in Q, with its coverage ratio."""
    cloud = brute_force_reachable(scenario, steps, branching, seed)
    witnesses = [e for e in cloud if Q.locate(e) < 0]
    ratio = coverage_ratio(cloud, Q)
    notes = (f"cloud of {len(cloud)} errors, hull covers "
             f"{scalar_str(ratio)} of the target area")
    return _report("reachable_within", witnesses, notes)
