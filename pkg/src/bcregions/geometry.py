"""Exact-enough 2-D geometry for downward-closed rate regions.

A rate region is a finite union of convex polygons in the nonnegative
quadrant, downward closed (if a rate pair is in the region, so is any
componentwise-smaller pair) and bounded.  Coordinates are plain floats;
every predicate carries an explicit tolerance instead of pretending to
be exact.

Conventions:
  * polygons store their vertices counterclockwise, starting from the
    lexicographically smallest vertex, so equal sets compare equal;
  * degenerate parts (segments, single points) are legal and have area 0;
  * an empty region is a region with no parts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "RegionError",
    "HalfPlane",
    "ConvexPolygon",
    "Region2D",
    "from_halfplanes",
    "union",
    "intersect",
    "convex_hull",
    "includes",
    "max_weighted_sum",
    "symmetric_difference_area",
    "hausdorff_distance",
    "save_region",
    "load_region",
]

# Points closer than this are the same point.
POINT_TOL = 1e-12
# Leftover mass below this counts as an empty set in area terms.
AREA_TOL = 1e-9
# Default inward shift used by inclusion tests.
SHRINK_DEFAULT = 1e-6
# Clipping box used to realize half-plane intersections; anything that
# still touches it after clipping was unbounded to begin with.  Rates on
# desk-scale alphabets stay below a few bits, so a small box keeps the
# intersection arithmetic sharp.
BOX = 1024.0


class RegionError(ValueError):
    """Raised for malformed or unbounded region constructions."""


@dataclass(frozen=True)
class HalfPlane:
    """The closed set a*r1 + b*r2 <= c."""

    a: float
    b: float
    c: float

    def contains(self, point: tuple[float, float], tol: float = 1e-9) -> bool:
        return self.a * point[0] + self.b * point[1] <= self.c + tol


def _dedupe_loop(points: NDArray[np.float64]) -> NDArray[np.float64]:
    if len(points) == 0:
        return points
    keep = [points[0]]
    for p in points[1:]:
        if max(abs(p[0] - keep[-1][0]), abs(p[1] - keep[-1][1])) > POINT_TOL:
            keep.append(p)
    while len(keep) > 1 and max(abs(keep[0][0] - keep[-1][0]), abs(keep[0][1] - keep[-1][1])) <= POINT_TOL:
        keep.pop()
    return np.array(keep)


def _hull_chain(points: NDArray[np.float64]) -> NDArray[np.float64]:
    """Monotone-chain convex hull; collinear interior points are dropped.

    Handles degenerate inputs: returns 1 point, 2 segment endpoints, or a
    CCW polygon starting at the lexicographically smallest vertex.
    """
    pts = np.unique(np.round(np.asarray(points, dtype=np.float64) / POINT_TOL) * POINT_TOL, axis=0)
    if len(pts) <= 2:
        return pts

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    ordered = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    lower: list[NDArray[np.float64]] = []
    for p in ordered:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], p) <= POINT_TOL:
            lower.pop()
        lower.append(p)
    upper: list[NDArray[np.float64]] = []
    for p in ordered[::-1]:
        while len(upper) >= 2 and turn(upper[-2], upper[-1], p) <= POINT_TOL:
            upper.pop()
        upper.append(p)
    hull = np.array(lower[:-1] + upper[:-1])
    return hull if len(hull) >= 3 else pts[[0, -1]]


class ConvexPolygon:
    """An immutable convex polygon, possibly degenerate (area 0)."""

    __slots__ = ("vertices",)

    def __init__(self, vertices) -> None:
        arr = _dedupe_loop(np.atleast_2d(np.asarray(vertices, dtype=np.float64)))
        if arr.size and arr.shape[1] != 2:
            raise RegionError("vertices must be pairs")
        # Canonicalize through the hull: input vertices of a convex set
        # come back CCW from the lexicographically smallest one.
        canon = _hull_chain(arr) if len(arr) else arr.reshape(0, 2)
        canon.setflags(write=False)
        object.__setattr__(self, "vertices", canon)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("ConvexPolygon is immutable")

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ConvexPolygon)
            and self.vertices.shape == other.vertices.shape
            and bool(np.all(np.abs(self.vertices - other.vertices) <= POINT_TOL))
        )

    def __repr__(self) -> str:
        return f"ConvexPolygon({self.vertices.tolist()!r})"

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    def area(self) -> float:
        v = self.vertices
        if len(v) < 3:
            return 0.0
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    def clip(self, hp: HalfPlane) -> "ConvexPolygon":
        """Intersect with a half-plane (Sutherland-Hodgman on one edge)."""
        v = self.vertices
        if len(v) == 0:
            return self
        d = hp.a * v[:, 0] + hp.b * v[:, 1] - hp.c
        if np.all(d <= POINT_TOL):
            return self
        if np.all(d >= -POINT_TOL):
            boundary = v[np.abs(d) <= POINT_TOL]
            return ConvexPolygon(boundary) if len(boundary) else _EMPTY_POLYGON
        out: list[tuple[float, float]] = []
        n = len(v)
        for i in range(n):
            j = (i + 1) % n
            di, dj = d[i], d[j]
            if di <= POINT_TOL:
                out.append((v[i, 0], v[i, 1]))
            if (di < -POINT_TOL and dj > POINT_TOL) or (di > POINT_TOL and dj < -POINT_TOL):
                t = di / (di - dj)
                out.append((v[i, 0] + t * (v[j, 0] - v[i, 0]), v[i, 1] + t * (v[j, 1] - v[i, 1])))
        return ConvexPolygon(out) if out else _EMPTY_POLYGON

    def contains(self, point: tuple[float, float], tol: float = 1e-9) -> bool:
        v = self.vertices
        if len(v) == 0:
            return False
        if len(v) == 1:
            return float(np.hypot(v[0, 0] - point[0], v[0, 1] - point[1])) <= tol
        if len(v) == 2:
            return _segment_distance(point, v[0], v[1]) <= tol
        x, y = point
        nxt = np.roll(v, -1, axis=0)
        cross = (nxt[:, 0] - v[:, 0]) * (y - v[:, 1]) - (nxt[:, 1] - v[:, 1]) * (x - v[:, 0])
        return bool(np.all(cross >= -tol))

    def translate(self, dx: float, dy: float) -> "ConvexPolygon":
        if self.is_empty:
            return self
        return ConvexPolygon(self.vertices + np.array([dx, dy]))

    def edges(self) -> list[HalfPlane]:
        """Inward half-planes, one per edge (CCW polygon => left side is inside)."""
        v = self.vertices
        if len(v) < 3:
            return []
        planes = []
        for i in range(len(v)):
            p, q = v[i], v[(i + 1) % len(v)]
            a, b = q[1] - p[1], p[0] - q[0]
            planes.append(HalfPlane(a, b, a * p[0] + b * p[1]))
        return planes


_EMPTY_POLYGON = ConvexPolygon(np.empty((0, 2)))


def _segment_distance(point, p, q) -> float:
    pq = q - p
    denom = float(pq[0] ** 2 + pq[1] ** 2)
    if denom <= POINT_TOL**2:
        return float(np.hypot(point[0] - p[0], point[1] - p[1]))
    t = ((point[0] - p[0]) * pq[0] + (point[1] - p[1]) * pq[1]) / denom
    t = min(1.0, max(0.0, t))
    cx, cy = p[0] + t * pq[0], p[1] + t * pq[1]
    return float(np.hypot(point[0] - cx, point[1] - cy))


def _downward_closure(poly: ConvexPolygon) -> ConvexPolygon:
    """Close a quadrant polygon under componentwise decrease.

    For a convex set C in the quadrant the closure equals the hull of C,
    its axis projections, and the origin, so it is again convex.
    """
    v = poly.vertices
    if len(v) == 0:
        return poly
    pts = [v, np.column_stack([v[:, 0], np.zeros(len(v))]), np.column_stack([np.zeros(len(v)), v[:, 1]])]
    pts.append(np.zeros((1, 2)))
    return ConvexPolygon(np.vstack(pts))


_QUADRANT = (HalfPlane(-1.0, 0.0, 0.0), HalfPlane(0.0, -1.0, 0.0))


class Region2D:
    """A bounded, downward-closed union of convex polygons in the quadrant.

    The constructor clips every part to the quadrant and closes it
    downward, then drops parts swallowed by other parts; the invariants
    hold by construction rather than by trusting the caller.
    """

    __slots__ = ("parts",)

    def __init__(self, parts=()) -> None:
        cleaned: list[ConvexPolygon] = []
        for part in parts:
            poly = part if isinstance(part, ConvexPolygon) else ConvexPolygon(part)
            for hp in _QUADRANT:
                poly = poly.clip(hp)
            poly = _downward_closure(poly)
            if not poly.is_empty:
                cleaned.append(poly)
        object.__setattr__(self, "parts", tuple(_prune(cleaned)))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Region2D is immutable")

    def __repr__(self) -> str:
        return f"Region2D({len(self.parts)} parts, area={self.area():.6f})"

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def member(self, point: tuple[float, float], tol: float = 1e-9) -> bool:
        return any(p.contains(point, tol) for p in self.parts)

    def vertices(self) -> NDArray[np.float64]:
        if not self.parts:
            return np.empty((0, 2))
        return np.vstack([p.vertices for p in self.parts])

    def area(self) -> float:
        return sum(piece.area() for piece in _disjoint_pieces(list(self.parts)))

    def translate(self, dx: float, dy: float) -> "Region2D":
        return Region2D([p.translate(dx, dy) for p in self.parts])

    def transpose(self) -> "Region2D":
        """Mirror across the diagonal, swapping the two rate axes."""
        return Region2D([ConvexPolygon(p.vertices[:, ::-1]) for p in self.parts])


def _prune(parts: list[ConvexPolygon]) -> list[ConvexPolygon]:
    kept: list[ConvexPolygon] = []
    for i, p in enumerate(parts):
        swallowed = False
        for j, q in enumerate(parts):
            if i == j or len(q) < 3:
                continue
            if all(q.contains((vx, vy), POINT_TOL) for vx, vy in p.vertices):
                # Convexity makes vertex containment sufficient.  On exact
                # mutual containment only the earlier copy survives.
                mutual = len(p) >= 3 and all(p.contains((vx, vy), POINT_TOL) for vx, vy in q.vertices)
                if not mutual or j < i:
                    swallowed = True
                    break
        if not swallowed:
            kept.append(p)
    return kept


def _subtract_polygon(piece: ConvexPolygon, cut: ConvexPolygon) -> list[ConvexPolygon]:
    """Decompose piece minus cut into disjoint convex pieces (up to area 0)."""
    if piece.is_empty:
        return []
    edges = cut.edges()
    if not edges:
        return [piece]
    out: list[ConvexPolygon] = []
    remaining = piece
    for hp in edges:
        outside = remaining.clip(HalfPlane(-hp.a, -hp.b, -hp.c))
        if len(outside) >= 3:
            out.append(outside)
        remaining = remaining.clip(hp)
        if remaining.is_empty:
            break
    return out


def _disjoint_pieces(parts: list[ConvexPolygon]) -> list[ConvexPolygon]:
    pieces: list[ConvexPolygon] = []
    for i, part in enumerate(parts):
        current = [part]
        for earlier in parts[:i]:
            current = [frag for c in current for frag in _subtract_polygon(c, earlier)]
        pieces.extend(current)
    return pieces


def _difference_area(inner_parts: list[ConvexPolygon], outer: Region2D) -> float:
    pieces = _disjoint_pieces(inner_parts)
    for cut in outer.parts:
        pieces = [frag for piece in pieces for frag in _subtract_polygon(piece, cut)]
        if not pieces:
            return 0.0
    return sum(piece.area() for piece in pieces)


def from_halfplanes(halfplanes) -> Region2D:
    """Region cut out of the quadrant by closed half-planes.

    The intersection must be bounded.  Constraints with a negative normal
    component can only carve from below; the constructor's downward
    closure then restores closedness, so on rate constraints (nonnegative
    coefficients) the result is exactly the clipped intersection.
    """
    poly = ConvexPolygon([(0.0, 0.0), (BOX, 0.0), (BOX, BOX), (0.0, BOX)])
    for hp in halfplanes:
        poly = poly.clip(HalfPlane(float(hp.a), float(hp.b), float(hp.c)))
        if poly.is_empty:
            return Region2D([])
    if np.any(poly.vertices > BOX / 2):
        raise RegionError("half-plane intersection is unbounded")
    return Region2D([poly])


def union(first: Region2D, second: Region2D) -> Region2D:
    return Region2D(list(first.parts) + list(second.parts))


def intersect(first: Region2D, second: Region2D) -> Region2D:
    pieces = []
    for p in first.parts:
        for q in second.parts:
            clipped = p
            for hp in q.edges():
                clipped = clipped.clip(hp)
                if clipped.is_empty:
                    break
            if len(q) < 3:
                # Degenerate cutter: intersection lives on a segment/point.
                clipped = _clip_to_degenerate(p, q)
            if not clipped.is_empty:
                pieces.append(clipped)
    return Region2D(pieces)


def _clip_to_degenerate(poly: ConvexPolygon, degenerate: ConvexPolygon) -> ConvexPolygon:
    v = degenerate.vertices
    if len(v) == 1:
        return ConvexPolygon(v) if poly.contains((v[0, 0], v[0, 1]), POINT_TOL) else _EMPTY_POLYGON
    if len(v) != 2:
        return _EMPTY_POLYGON
    # Clip the segment by every edge of the polygon.
    seg = degenerate
    for hp in poly.edges():
        seg = seg.clip(hp)
        if seg.is_empty:
            return seg
    if len(poly) < 3:
        kept = [pt for pt in v if poly.contains((pt[0], pt[1]), POINT_TOL)]
        return ConvexPolygon(kept) if kept else _EMPTY_POLYGON
    return seg


def convex_hull(regions) -> Region2D:
    points = [r.vertices() for r in regions if not r.is_empty]
    if not points:
        return Region2D([])
    return Region2D([ConvexPolygon(np.vstack(points))])


def includes(
    outer: Region2D,
    inner: Region2D,
    shrink: float = SHRINK_DEFAULT,
    residual_tol: float = AREA_TOL,
) -> bool:
    """Whether inner, shrunk inward by `shrink`, fits inside outer.

    The shrink shifts inner by (-shrink, -shrink) and reclips to the
    quadrant, which is the natural erosion for downward-closed sets; the
    verdict is then `area(shrunk inner minus outer) < residual_tol`.
    False accepts cannot occur beyond the tolerances; false rejects can
    only occur within the shrink band of the boundary.
    """
    shrunk = inner.translate(-shrink, -shrink)
    return _difference_area(list(shrunk.parts), outer) < residual_tol


def symmetric_difference_area(first: Region2D, second: Region2D) -> float:
    return _difference_area(list(first.parts), second) + _difference_area(list(second.parts), first)


def max_weighted_sum(region: Region2D, w1: float, w2: float) -> float:
    """Maximum of w1*r1 + w2*r2 over the region (support value for w >= 0)."""
    if region.is_empty:
        raise RegionError("empty region has no support value")
    v = region.vertices()
    return float(np.max(w1 * v[:, 0] + w2 * v[:, 1]))


def _point_region_distance(point, region: Region2D) -> float:
    if region.member(point, tol=1e-12):
        return 0.0
    best = np.inf
    for part in region.parts:
        v = part.vertices
        if len(v) == 1:
            best = min(best, float(np.hypot(point[0] - v[0, 0], point[1] - v[0, 1])))
            continue
        for i in range(len(v)):
            best = min(best, _segment_distance(point, v[i], v[(i + 1) % len(v)]))
    return best


def hausdorff_distance(first: Region2D, second: Region2D) -> float:
    """Hausdorff distance between two convex regions.

    Each argument must be a single convex part (hull the region first);
    for convex targets the directed distance is attained at a vertex,
    which is all this routine checks.
    """
    for r in (first, second):
        if len(r.parts) != 1:
            raise RegionError("hausdorff_distance expects single-part (convex) regions")
    d_fwd = max(_point_region_distance((x, y), second) for x, y in first.parts[0].vertices)
    d_bwd = max(_point_region_distance((x, y), first) for x, y in second.parts[0].vertices)
    return max(d_fwd, d_bwd)


REGION_HEADER = "bcregions-region v1"


def save_region(region: Region2D, path: str) -> None:
    lines = [REGION_HEADER, f"parts {len(region.parts)}"]
    for part in region.parts:
        lines.append(f"part {len(part.vertices)}")
        for x, y in part.vertices:
            # repr of a builtin float is the shortest exact round-trip form
            lines.append(f"{float(x)!r} {float(y)!r}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_region(path: str) -> Region2D:
    with open(path, encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != REGION_HEADER:
        raise RegionError(f"{path}: missing header {REGION_HEADER!r}")
    if len(lines) < 2 or not lines[1].startswith("parts "):
        raise RegionError(f"{path}: missing parts count")
    parts = []
    idx = 2
    for _ in range(int(lines[1].split()[1])):
        if idx >= len(lines) or not lines[idx].startswith("part "):
            raise RegionError(f"{path}: truncated part list")
        nv = int(lines[idx].split()[1])
        idx += 1
        verts = []
        for _ in range(nv):
            if idx >= len(lines):
                raise RegionError(f"{path}: truncated vertex list")
            fields = lines[idx].split()
            if len(fields) != 2:
                raise RegionError(f"{path}: bad vertex line {lines[idx]!r}")
            try:
                verts.append((float(fields[0]), float(fields[1])))
            except ValueError as exc:
                raise RegionError(f"{path}: bad vertex line {lines[idx]!r}") from exc
            idx += 1
        parts.append(ConvexPolygon(verts))
    return Region2D(parts)
