"""Exact clip, union, and containment for simple polygons.

Edges are split at every contact with the other boundary, kept or dropped by
exact midpoint location, and stitched back into cycles. Results are
regularized: zero-area slivers and whiskers vanish.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geometry import (
    DisconnectedUnion,
    HalfPlane,
    MultiComponent,
    NotSimple,
    Point,
    Region,
    bbox,
    bbox_overlap,
    canonicalize_ring,
    line_cross_point,
    on_segment,
    orient,
    point_in_ring,
)

HALF = Fraction(1, 2)


def seg_seg_points(p1: Point, p2: Point, q1: Point, q2: Point) -> list[Point]:
    """All isolated contact points and overlap endpoints of two segments."""
    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    if d1 == 0 and d2 == 0:
        out = []
        for w in (q1, q2):
            if on_segment(p1, p2, w):
                out.append(w)
        for w in (p1, p2):
            if on_segment(q1, q2, w) and w not in out:
                out.append(w)
        return out
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    out = []
    if d1 == 0 and on_segment(q1, q2, p1):
        out.append(p1)
    if d2 == 0 and on_segment(q1, q2, p2):
        out.append(p2)
    if d3 == 0 and on_segment(p1, p2, q1) and q1 not in out:
        out.append(q1)
    if d4 == 0 and on_segment(p1, p2, q2) and q2 not in out:
        out.append(q2)
    if (not out and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0
            and (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0)):
        out.append(line_cross_point(p1, p2, q1, q2))
    return out


class _RingIndex:
    """A ring with cached boxes for repeated splitting and location queries."""

    __slots__ = ("ring", "box", "edges")

    def __init__(self, ring: Sequence[Point]):
        self.ring = list(ring)
        self.box = bbox(self.ring)
        n = len(self.ring)
        self.edges = []
        for i in range(n):
            u = self.ring[i]
            v = self.ring[(i + 1) % n]
            self.edges.append((u, v, bbox((u, v))))

    def locate(self, p: Point) -> int:
        xmin, ymin, xmax, ymax = self.box
        if p.x < xmin or p.x > xmax or p.y < ymin or p.y > ymax:
            return -1
        return point_in_ring(self.ring, p)


def _split_edge(u: Point, v: Point, others: Sequence[_RingIndex]) -> list[Point]:
    """Points of [u, v] split at every boundary contact, ordered from u to v."""
    seg_box = bbox((u, v))
    found: dict[tuple, Point] = {u.key(): u, v.key(): v}
    for other in others:
        if not bbox_overlap(seg_box, other.box):
            continue
        for q1, q2, ebox in other.edges:
            if not bbox_overlap(seg_box, ebox):
                continue
            for w in seg_seg_points(u, v, q1, q2):
                found[w.key()] = w
    d = v - u
    return sorted(found.values(), key=lambda p: (p - u).dot(d))


def _midpoint(p: Point, q: Point) -> Point:
    return Point((p.x + q.x) * HALF, (p.y + q.y) * HALF)


# ---------------------------------------------------------------------------
# clip by half-plane

def clip_components(ring: Sequence[Point], hp: HalfPlane) -> list[list[Point]]:
    """Exact intersection of a simple CCW ring with a closed half-plane.

    Returns canonical CCW rings, one per connected component with area.
    """
    ring = list(ring)
    sides = [hp.side(v) for v in ring]
    if all(s <= 0 for s in sides):
        whole = canonicalize_ring(ring)
        return [whole] if whole is not None else []
    if all(s >= 0 for s in sides):
        return []

    n = len(ring)
    walk: list[tuple[Point, int]] = []
    for i in range(n):
        u, su = ring[i], sides[i]
        v, sv = ring[(i + 1) % n], sides[(i + 1) % n]
        walk.append((u, su))
        if su * sv < 0:
            walk.append((hp.boundary_point(u, v), 0))

    m = len(walk)
    start = next(i for i in range(m) if walk[i][1] > 0)
    chains: list[list[Point]] = []
    cur: list[Point] = []
    for k in range(1, m + 1):
        p, s = walk[(start + k) % m]
        if s <= 0:
            cur.append(p)
        else:
            if len(cur) >= 2:
                chains.append(cur)
            cur = []
    if len(cur) >= 2:
        chains.append(cur)
    if not chains:
        return []

    # boundary chords run along the clip line with the kept side on the left
    t = Point(-hp.b, hp.a)
    events: list[tuple[Fraction, int, int]] = []
    for ci, ch in enumerate(chains):
        events.append((t.dot(ch[-1]), 0, ci))
        events.append((t.dot(ch[0]), 1, ci))
    events.sort(key=lambda e: (e[0], e[1]))

    succ: dict[int, int] = {}
    for a, b in zip(events[0::2], events[1::2]):
        if a[1] != 0 or b[1] != 1:
            raise MultiComponent("clip produced a degenerate boundary contact")
        succ[a[2]] = b[2]

    seen: set[int] = set()
    comps: list[list[Point]] = []
    for ci in range(len(chains)):
        if ci in seen:
            continue
        pts: list[Point] = []
        cur_id = ci
        while cur_id not in seen:
            seen.add(cur_id)
            pts.extend(chains[cur_id])
            cur_id = succ[cur_id]
        comp = canonicalize_ring(pts)
        if comp is not None:
            comps.append(comp)
    comps.sort(key=lambda r: [p.key() for p in r])
    return comps


def clip_halfplane(region: Region, hp: HalfPlane) -> Region | None:
    """Region intersect half-plane; None when empty.

    Raises MultiComponent when the clip disconnects the region, which means
    the caller's star-convexity premise was violated.
    """
    comps = clip_components(region.vertices, hp)
    if not comps:
        return None
    if len(comps) > 1:
        raise MultiComponent(f"clip split a region into {len(comps)} parts")
    ref = region.reference
    if ref is not None and not (hp.contains(ref)
                                and point_in_ring(comps[0], ref) >= 0):
        ref = None
    return Region.from_ring(comps[0], reference=ref, validate=False)


# ---------------------------------------------------------------------------
# containment

def subset_witness(a_ring: Sequence[Point], b_ring: Sequence[Point]) -> Point | None:
    """A point of region(a) outside region(b), or None when a is contained.

    Exact for simple polygons, where containment reduces to boundary
    containment: an interior point of a outside b would connect to infinity
    through the complement of b, and that path crosses the boundary of a at
    a point outside b. It suffices to check the vertices of a and one
    interior point of every piece of a's edges split at contacts with b's
    boundary.
    """
    A = _RingIndex(a_ring)
    B = _RingIndex(b_ring)
    for v in A.ring:
        if B.locate(v) < 0:
            return v
    for u, v, _ in A.edges:
        pts = _split_edge(u, v, (B,))
        for p, q in zip(pts, pts[1:]):
            if p == q:
                continue
            mid = _midpoint(p, q)
            if B.locate(mid) < 0:
                return mid
    return None


def subset(a, b) -> bool:
    """Exact containment region(a) within region(b) (closed sets)."""
    a_ring = a.vertices if isinstance(a, Region) else a
    b_ring = b.vertices if isinstance(b, Region) else b
    return subset_witness(a_ring, b_ring) is None


# ---------------------------------------------------------------------------
# union

def union_rings(rings: Sequence[Sequence[Point]], *,
                decompose: bool = False) -> list[list[Point]]:
    """Union of simple CCW rings, as canonical CCW boundary cycles.

    With decompose=False any boundary self-touch raises DisconnectedUnion.
    With decompose=True touching lobes are split into separate cycles (used
    for operator intermediates that are later summed piecewise).
    Holes always raise: the engine has no polygon-with-holes representation.
    """
    idx = [_RingIndex(r) for r in rings]
    kept: list[tuple[Point, Point]] = []
    for i, I in enumerate(idx):
        near = [(j, J) for j, J in enumerate(idx)
                if j != i and bbox_overlap(I.box, J.box)]
        others = [J for _, J in near]
        for u, v, _ in I.edges:
            pts = _split_edge(u, v, others)
            for p, q in zip(pts, pts[1:]):
                if p == q:
                    continue
                mid = _midpoint(p, q)
                keep = True
                for j, J in near:
                    loc = J.locate(mid)
                    if loc > 0:
                        keep = False
                        break
                    if loc == 0:
                        side = _collinear_side(mid, u, v, J)
                        if side < 0:  # opposite interiors: covered both sides
                            keep = False
                            break
                        if side > 0 and j < i:  # duplicate; lowest index wins
                            keep = False
                            break
                if keep:
                    kept.append((p, q))
    return _stitch(kept, decompose=decompose)


def _collinear_side(mid: Point, u: Point, v: Point, J: _RingIndex) -> int:
    """mid lies on an edge of J collinear with u->v: +1 same interior side,
    -1 opposite. Returns 0 when no containing edge is found (never expected
    for split midpoints)."""
    for w1, w2, ebox in J.edges:
        if not (ebox[0] <= mid.x <= ebox[2] and ebox[1] <= mid.y <= ebox[3]):
            continue
        if on_segment(w1, w2, mid):
            return 1 if (w2 - w1).dot(v - u) > 0 else -1
    return 0


def _ccw_after(ref: Point, d1: Point, d2: Point) -> bool:
    """True when d1 has a strictly larger CCW angle from ref than d2."""

    def bucket(d: Point) -> int:
        cr = ref.cross(d)
        if cr > 0:
            return 0
        if cr < 0:
            return 2
        return 3 if ref.dot(d) > 0 else 1

    b1, b2 = bucket(d1), bucket(d2)
    if b1 != b2:
        return b1 > b2
    return d1.cross(d2) < 0


def _stitch(kept: list[tuple[Point, Point]], *, decompose: bool) -> list[list[Point]]:
    outgoing: dict[tuple, list[tuple[Point, Point]]] = {}
    for seg in kept:
        outgoing.setdefault(seg[0].key(), []).append(seg)
    for lst in outgoing.values():
        lst.sort(key=lambda s: s[1].key())
        if len(lst) > 1 and not decompose:
            raise DisconnectedUnion("union boundary touches itself")

    used: set[int] = set()
    seg_ids = {id(seg): k for k, seg in enumerate(kept)}
    cycles: list[list[Point]] = []
    for seg in sorted(kept, key=lambda s: (s[0].key(), s[1].key())):
        if seg_ids[id(seg)] in used:
            continue
        path: list[Point] = [seg[0]]
        cur = seg
        while True:
            used.add(seg_ids[id(cur)])
            path.append(cur[1])
            options = [s for s in outgoing.get(cur[1].key(), ())
                       if seg_ids[id(s)] not in used]
            if not options:
                break
            if len(options) == 1:
                nxt = options[0]
            else:
                ref = cur[0] - cur[1]
                nxt = options[0]
                best_d = nxt[1] - nxt[0]
                for cand in options[1:]:
                    d = cand[1] - cand[0]
                    if _ccw_after(ref, d, best_d):
                        nxt, best_d = cand, d
            cur = nxt
        if path[0] != path[-1]:
            raise DisconnectedUnion("union boundary has a dangling chain")
        ring = canonicalize_ring(path[:-1])
        if ring is not None:
            cycles.append(ring)
    # canonical rings are all CCW, so a hole shows up as a cycle nested inside
    # another; filtered vertices of genuine sibling lobes never lie strictly
    # inside a neighbor
    for i, r1 in enumerate(cycles):
        for j, r2 in enumerate(cycles):
            if i != j and any(point_in_ring(r2, v) > 0 for v in r1):
                raise DisconnectedUnion("union produced a hole")
    return cycles


def union_regions(parts: Sequence[Region], reference: Point | None = None) -> Region:
    """Union that must come out as one simple polygon."""
    cycles = union_rings([p.vertices for p in parts])
    if len(cycles) != 1:
        raise DisconnectedUnion(f"union has {len(cycles)} components")
    return Region.from_ring(cycles[0], reference=reference)


# ---------------------------------------------------------------------------
# triangulation

def triangulate(ring: Sequence[Point]) -> list[tuple[Point, Point, Point]]:
    """Ear-clipping triangulation of a simple CCW ring.

    Only reflex vertices can block an ear, so the containment test walks the
    reflex set alone; clipping can turn a reflex neighbor convex but never
    the other way around.
    """
    vs = list(ring)
    n = len(vs)
    if n < 3:
        raise NotSimple("cannot triangulate fewer than three vertices")
    if n == 3:
        return [(vs[0], vs[1], vs[2])]
    nxt = {i: (i + 1) % n for i in range(n)}
    prv = {i: (i - 1) % n for i in range(n)}

    def is_reflex(i: int) -> bool:
        return orient(vs[prv[i]], vs[i], vs[nxt[i]]) <= 0

    reflex = {i for i in range(n) if is_reflex(i)}
    tris: list[tuple[Point, Point, Point]] = []
    remaining = n
    i = 0
    scanned = 0
    while remaining > 3:
        if i in reflex:
            i = nxt[i]
            scanned += 1
            if scanned > remaining:
                raise NotSimple("no ear found; ring is not simple")
            continue
        a, b, c = vs[prv[i]], vs[i], vs[nxt[i]]
        blocked = False
        for j in reflex:
            p = vs[j]
            if p in (a, b, c):
                continue
            if (orient(a, b, p) >= 0 and orient(b, c, p) >= 0
                    and orient(c, a, p) >= 0):
                blocked = True
                break
        if blocked:
            i = nxt[i]
            scanned += 1
            if scanned > remaining:
                raise NotSimple("no ear found; ring is not simple")
            continue
        tris.append((a, b, c))
        p_i, n_i = prv[i], nxt[i]
        nxt[p_i], prv[n_i] = n_i, p_i
        del nxt[i], prv[i]
        reflex.discard(i)
        remaining -= 1
        scanned = 0
        for k in (p_i, n_i):
            if k in reflex and not is_reflex(k):
                reflex.discard(k)
        i = n_i
    a = next(iter(nxt))
    tris.append((vs[a], vs[nxt[a]], vs[nxt[nxt[a]]]))
    return tris
