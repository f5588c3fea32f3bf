"""Union of polygons that are star-shaped around a common center.

Every input must keep the center in its kernel. The union is then a radial
envelope: sweeping a ray around the center, the union boundary is the
farthest input boundary along each direction. The merge walks the two
boundaries as angular chains and keeps the outer one, splitting at exact
crossings. Directions with no coverage are gaps; a single gap closes through
the center, two or more mean the union pinches there and has no simple
boundary.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Sequence

from .geometry import (
    ORIGIN,
    DegenerateRegion,
    DisconnectedUnion,
    NotStarAtCenter,
    Point,
    Region,
    canonicalize_ring,
    line_cross_point,
    star_kernel_contains,
)

Dir = tuple[int, int]
Edge = tuple[Point, Point]


def _dir_key(p: Point) -> Dir:
    dx = p.x.numerator * p.y.denominator
    dy = p.y.numerator * p.x.denominator
    g = gcd(dx, dy)
    return (dx // g, dy // g)


def _dir_cmp(a: Dir, b: Dir) -> int:
    ha = 0 if (a[1] > 0 or (a[1] == 0 and a[0] > 0)) else 1
    hb = 0 if (b[1] > 0 or (b[1] == 0 and b[0] > 0)) else 1
    if ha != hb:
        return -1 if ha < hb else 1
    cr = a[0] * b[1] - a[1] * b[0]
    return (cr < 0) - (cr > 0)


@dataclass
class _Fan:
    """Boundary of a star set around the origin, minus the origin caps.

    chains: angular runs of boundary points in CCW order; consecutive points
    of a chain either subtend a positive angle at the origin or sit on one
    ray (a radial jump). full means one chain wrapping all directions.
    """
    chains: list[list[Point]]
    full: bool


def _fan_of(ring: Sequence[Point]) -> _Fan:
    """Ring is canonical CCW with the origin in its kernel."""
    ring = list(ring)
    n = len(ring)
    breaks: list[int] = []
    for i in range(n):
        u, v = ring[i], ring[(i + 1) % n]
        cr = u.cross(v)
        if cr < 0:
            raise NotStarAtCenter("boundary runs clockwise seen from center")
        if cr == 0 and u.dot(v) <= 0:
            breaks.append(i)
    if not breaks:
        return _Fan([ring], True)
    if len(breaks) == 1:
        i = breaks[0]
        start = (i + 1) % n
        return _Fan([[ring[(start + k) % n] for k in range(n)]], False)
    if len(breaks) == 2:
        i, j = breaks
        if j == i + 1 and ring[j] == ORIGIN:
            start = (j + 1) % n
        elif i == 0 and j == n - 1 and ring[0] == ORIGIN:
            start = 1
        else:
            raise NotStarAtCenter("boundary pinches at the center")
        return _Fan([[ring[(start + k) % n] for k in range(n - 1)]], False)
    raise NotStarAtCenter("boundary pinches at the center")


def _assign(fan: _Fan, uidx: dict[Dir, int], m: int) -> list[Edge | None]:
    """Covering edge of the fan for each angular arc between adjacent events."""
    arcs: list[Edge | None] = [None] * m
    for chain in fan.chains:
        n = len(chain)
        limit = n if fan.full else n - 1
        for e in range(limit):
            a, b = chain[e], chain[(e + 1) % n]
            ka, kb = uidx[_dir_key(a)], uidx[_dir_key(b)]
            k = ka
            while k != kb:
                arcs[k] = (a, b)
                k = (k + 1) % m
    return arcs


def _t_at(u: Point, edge: Edge) -> Fraction:
    a, b = edge
    return a.cross(b) / u.cross(b - a)


def _limit(arcs: list[Edge | None], k: int, d: Dir, u_pt: Point,
           m: int, side: int) -> Point:
    """Boundary point at event k approached from the left (side=0) or the
    right (side=1)."""
    edge = arcs[(k - 1) % m] if side == 0 else arcs[k]
    a, b = edge
    vertex = b if side == 0 else a
    if _dir_key(vertex) == d:
        return vertex
    return u_pt.scale(_t_at(u_pt, edge))


def _merge(A: _Fan, B: _Fan) -> _Fan:
    dirs: set[Dir] = {(1, 0), (0, 1), (-1, 0), (0, -1)}
    for fan in (A, B):
        for chain in fan.chains:
            for p in chain:
                dirs.add(_dir_key(p))
    U = sorted(dirs, key=cmp_to_key(_dir_cmp))
    m = len(U)
    uidx = {d: k for k, d in enumerate(U)}
    upts = [Point(Fraction(d[0]), Fraction(d[1])) for d in U]

    arcs_a = _assign(A, uidx, m)
    arcs_b = _assign(B, uidx, m)

    start_owner = [0] * m   # owner entering the arc: 0 A, 1 B, -1 gap
    end_owner = [0] * m
    cross_pt: list[Point | None] = [None] * m
    for k in range(m):
        ea, eb = arcs_a[k], arcs_b[k]
        if ea is None and eb is None:
            start_owner[k] = end_owner[k] = -1
        elif eb is None:
            start_owner[k] = end_owner[k] = 0
        elif ea is None:
            start_owner[k] = end_owner[k] = 1
        else:
            u1, u2 = upts[k], upts[(k + 1) % m]
            ta1, tb1 = _t_at(u1, ea), _t_at(u1, eb)
            ta2, tb2 = _t_at(u2, ea), _t_at(u2, eb)
            if ta1 != tb1:
                first = 0 if ta1 > tb1 else 1
            elif ta2 != tb2:
                first = 0 if ta2 > tb2 else 1
            else:
                first = 0
            second = first if ta2 == tb2 else (0 if ta2 > tb2 else 1)
            start_owner[k], end_owner[k] = first, second
            if first != second:
                cross_pt[k] = line_cross_point(ea[0], ea[1], eb[0], eb[1])

    ems: list[Point] = []
    gap_marks: list[int] = []

    def emit(p: Point) -> None:
        if not ems or ems[-1] != p:
            ems.append(p)

    both = (arcs_a, arcs_b)
    for k in range(m):
        o_prev = end_owner[(k - 1) % m]
        o_next = start_owner[k]
        d, u_pt = U[k], upts[k]
        if o_prev == -1 and o_next == -1:
            pass
        elif o_prev == -1:
            gap_marks.append(len(ems))
            emit(_limit(both[o_next], k, d, u_pt, m, 1))
        elif o_next == -1:
            emit(_limit(both[o_prev], k, d, u_pt, m, 0))
        elif o_prev == o_next:
            arcs = both[o_prev]
            if arcs[(k - 1) % m] is not arcs[k]:
                emit(_limit(arcs, k, d, u_pt, m, 0))
                emit(_limit(arcs, k, d, u_pt, m, 1))
        else:
            emit(_limit(both[o_prev], k, d, u_pt, m, 0))
            emit(_limit(both[o_next], k, d, u_pt, m, 1))
        w = cross_pt[k]
        if w is not None:
            emit(w)

    if not gap_marks:
        if len(ems) > 1 and ems[0] == ems[-1]:
            ems.pop()
        return _Fan([ems], True)
    chains: list[list[Point]] = []
    marks = gap_marks + [gap_marks[0] + len(ems)]
    for a, b in zip(marks, marks[1:]):
        chain = [ems[t % len(ems)] for t in range(a, b)]
        if len(chain) >= 2:
            chains.append(chain)
    return _Fan(chains, False)


def union_star(parts: Sequence, center: Point) -> Region:
    """Union of regions star-shaped around a common center point.

    Raises NotStarAtCenter when a part does not keep the center in its
    kernel, DisconnectedUnion when the union only meets at the center.
    """
    fans: list[_Fan] = []
    for part in parts:
        ring = part.vertices if isinstance(part, Region) else list(part)
        local = [v - center for v in ring]
        if not star_kernel_contains(local, ORIGIN):
            raise NotStarAtCenter("center is outside a part's kernel")
        fans.append(_fan_of(local))
    # balanced merge order keeps any one fan from being rescanned per part
    while len(fans) > 1:
        paired = [_merge(fans[i], fans[i + 1])
                  for i in range(0, len(fans) - 1, 2)]
        if len(fans) % 2:
            paired.append(fans[-1])
        fans = paired
    merged = fans[0]
    if len(merged.chains) != 1:
        raise DisconnectedUnion("parts meet only at the center")
    pts = merged.chains[0]
    ring = pts if merged.full else pts + [ORIGIN]
    out = canonicalize_ring([p + center for p in ring])
    if out is None:
        raise DegenerateRegion("union has no area")
    return Region.from_ring(out, reference=center)
