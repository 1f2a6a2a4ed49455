"""Planar predicates and face traversal of straight-line embeddings.

Orientation is evaluated with a floating-point filter that falls back to
exact rational arithmetic when the float result is not certified.  Every
other predicate is expressed through :func:`orientation`, except the
point-on-segment test used by :func:`point_in_polygon`, which accepts a
distance tolerance of :data:`EPS`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import (
    CoincidentDirections,
    Degenerate,
    DuplicateEdge,
    SelfIntersectingPolygon,
    ZeroLengthEdge,
)

Point = tuple[float, float]
VertexId = Hashable

EPS = 1e-9

# Bound from Shewchuk's orient2d fast path.
_CCW_ERRBOUND = (3.0 + 16.0 * 2.0**-53) * 2.0**-53


class Location(enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def orientation(p: Point, q: Point, r: Point) -> int:
    """Sign of twice the signed area of triangle ``pqr`` (+1 is counterclockwise)."""
    dl = (p[0] - r[0]) * (q[1] - r[1])
    dr = (p[1] - r[1]) * (q[0] - r[0])
    det = dl - dr
    bound = _CCW_ERRBOUND * (abs(dl) + abs(dr))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    if dl == 0.0 and dr == 0.0:
        return 0
    px, py, qx, qy, rx, ry = (Fraction(v) for v in (*p, *q, *r))
    exact = (px - rx) * (qy - ry) - (py - ry) * (qx - rx)
    return (exact > 0) - (exact < 0)


def _on_closed_segment(p: Point, a: Point, b: Point) -> bool:
    # assumes p, a, b collinear
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_properly_intersect(s1: tuple[Point, Point], s2: tuple[Point, Point]) -> bool:
    """True iff the two segments share a point other than a common endpoint.

    Overlapping collinear segments and T-junctions count as intersecting.
    """
    a, b = s1
    c, d = s2
    shared = {a, b} & {c, d}
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and c not in shared and _on_closed_segment(c, a, b):
        return True
    if o2 == 0 and d not in shared and _on_closed_segment(d, a, b):
        return True
    if o3 == 0 and a not in shared and _on_closed_segment(a, c, d):
        return True
    if o4 == 0 and b not in shared and _on_closed_segment(b, c, d):
        return True
    return False


def signed_area(poly: Sequence[Point]) -> float:
    s = 0.0
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return 0.5 * s


def segment_distance(p: Point, a: Point, b: Point) -> float:
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        return math.hypot(p[0] - ax, p[1] - ay)
    t = max(0.0, min(1.0, ((p[0] - ax) * dx + (p[1] - ay) * dy) / denom))
    return math.hypot(p[0] - ax - t * dx, p[1] - ay - t * dy)


def is_simple_polygon(poly: Sequence[Point]) -> bool:
    n = len(poly)
    if n < 3:
        return False
    if len(set(poly)) != n:
        return False
    segs = [(poly[i], poly[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                # neighbours share a vertex; only a fold-back overlap is illegal
                if segments_properly_intersect(segs[i], segs[j]):
                    return False
                continue
            if segments_properly_intersect(segs[i], segs[j]) or set(segs[i]) & set(segs[j]):
                return False
    return True


def point_in_polygon(p: Point, poly: Sequence[Point], check: bool = True) -> Location:
    """Classify ``p`` against a simple polygon given by its vertex ring.

    ``check=False`` skips the O(n^2) simplicity test for callers that
    already know the ring is a lattice cycle.
    """
    if check and not is_simple_polygon(poly):
        raise SelfIntersectingPolygon("polygon is not simple")
    n = len(poly)
    for i in range(n):
        if segment_distance(p, poly[i], poly[(i + 1) % n]) <= EPS:
            return Location.BOUNDARY
    inside = False
    px, py = p
    for i in range(n):
        a = poly[i]
        b = poly[(i + 1) % n]
        if (a[1] > py) != (b[1] > py):
            # upward crossing counts when p is left of a->b, downward when right
            o = orientation(a, b, p)
            if (b[1] > a[1] and o > 0) or (b[1] < a[1] and o < 0):
                inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE


def polygon_centroid(poly: Sequence[Point]) -> Point:
    a = 0.0
    cx = cy = 0.0
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        cr = x1 * y2 - x2 * y1
        a += cr
        cx += (x1 + x2) * cr
        cy += (y1 + y2) * cr
    if a == 0.0:
        return (sum(x for x, _ in poly) / n, sum(y for _, y in poly) / n)
    return (cx / (3.0 * a), cy / (3.0 * a))


def ear_triangulation(poly: Sequence[Point]) -> list[tuple[Point, Point, Point]]:
    """Ear-clipping triangulation of a simple counterclockwise polygon."""
    idx = list(range(len(poly)))
    tris = []
    guard = 0
    while len(idx) > 3 and guard < 10 * len(poly) ** 2:
        guard += 1
        m = len(idx)
        for k in range(m):
            i, j, l = idx[k - 1], idx[k], idx[(k + 1) % m]
            a, b, c = poly[i], poly[j], poly[l]
            if orientation(a, b, c) <= 0:
                continue
            blocked = False
            for t in idx:
                if t in (i, j, l):
                    continue
                q = poly[t]
                if orientation(a, b, q) >= 0 and orientation(b, c, q) >= 0 and orientation(c, a, q) >= 0:
                    blocked = True
                    break
            if not blocked:
                tris.append((a, b, c))
                del idx[k]
                break
        else:
            break
    if len(idx) == 3:
        tris.append(tuple(poly[i] for i in idx))
    return tris


def interior_point(poly: Sequence[Point]) -> Point:
    """A deterministic point strictly inside a simple polygon.

    The centroid when it is strictly interior, otherwise the centroid of the
    largest ear-clipping triangle.
    """
    ring = list(poly)
    if signed_area(ring) < 0:
        ring.reverse()
    c = polygon_centroid(ring)
    if point_in_polygon(c, ring, check=False) is Location.INSIDE:
        return c
    tris = ear_triangulation(ring)
    best = max(tris, key=lambda t: abs(signed_area(t)))
    return ((best[0][0] + best[1][0] + best[2][0]) / 3.0, (best[0][1] + best[1][1] + best[2][1]) / 3.0)


# --------------------------------------------------------------------------
# rotation systems and faces
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RotationSystem:
    """Counterclockwise neighbour order around every vertex."""

    coords: Mapping[VertexId, Point]
    order: Mapping[VertexId, tuple]

    def edge_count(self) -> int:
        return sum(len(v) for v in self.order.values()) // 2


@dataclass(frozen=True)
class FaceSet:
    """Face walks of an embedding.

    ``faces[i]`` lists the tail vertices of the directed edges around face
    ``i``; bounded faces run counterclockwise (positive ``areas[i]``).
    """

    faces: tuple[tuple, ...]
    areas: tuple[float, ...]
    outer_face_index: int

    @property
    def bounded(self) -> list[tuple]:
        return [f for i, f in enumerate(self.faces) if i != self.outer_face_index]

    @property
    def outer(self) -> tuple:
        return self.faces[self.outer_face_index]


def _half(d: Point) -> int:
    return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1


def build_rotation_system(
    vertices: Mapping[VertexId, Point], edges: Iterable[tuple[VertexId, VertexId]]
) -> RotationSystem:
    """Sort the incident edges of every vertex counterclockwise by angle.

    Raises DuplicateEdge, ZeroLengthEdge or CoincidentDirections.
    """
    nbrs: dict[VertexId, list] = {v: [] for v in vertices}
    seen = set()
    for u, v in edges:
        if u == v or vertices[u] == vertices[v]:
            raise ZeroLengthEdge((u, v))
        key = frozenset((u, v))
        if key in seen:
            raise DuplicateEdge((u, v))
        seen.add(key)
        nbrs[u].append(v)
        nbrs[v].append(u)
    order = {}
    for v, ns in nbrs.items():
        o = vertices[v]

        def cmp(a, b, o=o):
            pa, pb = vertices[a], vertices[b]
            ha = _half((pa[0] - o[0], pa[1] - o[1]))
            hb = _half((pb[0] - o[0], pb[1] - o[1]))
            if ha != hb:
                return ha - hb
            s = orientation(o, pa, pb)
            if s == 0:
                return (a > b) - (a < b)
            return -s

        ns_sorted = sorted(ns, key=cmp_to_key(cmp))
        k = len(ns_sorted)
        for i in range(k if k > 1 else 0):
            a, b = ns_sorted[i], ns_sorted[(i + 1) % k]
            if a == b:
                continue
            pa, pb = vertices[a], vertices[b]
            da = (pa[0] - o[0], pa[1] - o[1])
            db = (pb[0] - o[0], pb[1] - o[1])
            if _half(da) == _half(db) and orientation(o, pa, pb) == 0:
                raise CoincidentDirections(v, (a, b))
        order[v] = tuple(ns_sorted)
    return RotationSystem(coords=dict(vertices), order=order)


def trace_faces(rot: RotationSystem) -> FaceSet:
    """Trace every face by always turning to the clockwise-next edge.

    Each directed edge is consumed exactly once; bounded faces come out
    counterclockwise and the outer face (negative area) clockwise.
    """
    pos = {v: {w: i for i, w in enumerate(ns)} for v, ns in rot.order.items()}
    darts = sorted((u, v) for u, ns in rot.order.items() for v in ns)
    used = set()
    faces = []
    areas = []
    for dart in darts:
        if dart in used:
            continue
        walk = []
        u, v = dart
        while (u, v) not in used:
            used.add((u, v))
            walk.append(u)
            ns = rot.order[v]
            w = ns[(pos[v][u] - 1) % len(ns)]
            u, v = v, w
        faces.append(tuple(walk))
        areas.append(signed_area([rot.coords[x] for x in walk]))
    if not faces:
        raise Degenerate("embedding has no edges")
    outer = min(range(len(faces)), key=lambda i: (areas[i], i))
    return FaceSet(faces=tuple(faces), areas=tuple(areas), outer_face_index=outer)
