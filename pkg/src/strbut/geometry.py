"""Core spatial primitives: points, regions, strings, worldsheets, hyperplanes.

A region is a finite set of points together with a grid pitch
(``resolution``). The pitch makes set operations decidable under
floating-point noise: two points count as equal exactly when they snap to
the same grid cell. Snapping rounds half away from zero, so negating a
point negates its cell index; antipodal constructions therefore commute
with snapping bit-for-bit.

A string is a zero-width polyline (a worldline); a worldsheet is a region
completely covered by strings, approximated here cell by cell: the carrier
is covered when every occupied grid cell lies within one pitch of some
string vertex or segment. Strings of unbounded length are not supported;
finite truncations stand in for them.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

#: |x . v - c| at or below this counts as lying on the hyperplane {x . v = c}.
PLANE_MEMBERSHIP_TOL = 1e-9

#: Allowed deviation of a hyperplane normal from unit length.
UNIT_NORMAL_TOL = 1e-12

#: Allowed deviation of a spherical-region point from the unit sphere.
SPHERE_NORM_TOL = 1e-9


def cell_index(value: float, resolution: float) -> int:
    """Grid cell index of one coordinate, rounding half away from zero.

    Half-away rounding keeps ``cell_index(-v) == -cell_index(v)`` exact,
    which is what makes snapped point sets commute with negation.
    """
    q = abs(value) / resolution
    i = int(math.floor(q + 0.5))
    return -i if value < 0.0 else i


@dataclass(frozen=True)
class Point:
    """Immutable point in R^n. All coordinates must be finite."""

    coords: tuple[float, ...]

    def __post_init__(self) -> None:
        coords = tuple(float(c) for c in self.coords)
        if not coords:
            raise ValueError("a point needs at least one coordinate")
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"non-finite coordinate in {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def negated(self) -> "Point":
        return Point(tuple(-c for c in self.coords))

    def distance_to(self, other: "Point") -> float:
        return math.dist(self.coords, other.coords)

    def __iter__(self) -> Iterator[float]:
        return iter(self.coords)


def as_point(value: Point | Sequence[float]) -> Point:
    return value if isinstance(value, Point) else Point(tuple(value))


@dataclass(frozen=True)
class Hyperplane:
    """Affine hyperplane {x : x . normal = offset} with a unit normal."""

    normal: tuple[float, ...]
    offset: float

    def __post_init__(self) -> None:
        normal = tuple(float(c) for c in self.normal)
        norm = math.hypot(*normal)
        if abs(norm - 1.0) > UNIT_NORMAL_TOL:
            raise ValueError(f"hyperplane normal must be unit length, got |v|={norm!r}")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self) -> int:
        return len(self.normal)

    def signed_distance(self, point: Point) -> float:
        return math.fsum(c * v for c, v in zip(point.coords, self.normal)) - self.offset

    def contains(self, point: Point, tol: float = PLANE_MEMBERSHIP_TOL) -> bool:
        return abs(self.signed_distance(point)) <= tol

    def is_disjoint_parallel_with(self, other: "Hyperplane", tol: float = UNIT_NORMAL_TOL) -> bool:
        """True iff the planes share a normal direction but not an offset.

        Normals may differ by sign; offsets are compared after aligning the
        other plane's normal with this one's.
        """
        if self.dim != other.dim:
            return False
        same = all(abs(a - b) <= tol for a, b in zip(self.normal, other.normal))
        flipped = all(abs(a + b) <= tol for a, b in zip(self.normal, other.normal))
        if not (same or flipped):
            return False
        aligned_offset = other.offset if same else -other.offset
        return self.offset != aligned_offset


class Region:
    """Finite nonempty point set in R^n with a grid pitch for snapping.

    Points that snap to one cell are duplicates; construction keeps the
    first of each. The empty region is legal only as an operation result
    and is built through :meth:`empty`, which must be told the dimension.
    Instances are immutable and safe to share across threads.
    """

    def __init__(
        self,
        points: Iterable[Point | Sequence[float]],
        resolution: float = 1.0,
        *,
        dim: int | None = None,
        _allow_empty: bool = False,
    ) -> None:
        resolution = float(resolution)
        if not (resolution > 0.0 and math.isfinite(resolution)):
            raise ValueError(f"resolution must be a positive real, got {resolution!r}")
        pts = [as_point(p) for p in points]
        if pts:
            d = pts[0].dim
            for p in pts:
                if p.dim != d:
                    raise ValueError("dimension mismatch among region points")
            if dim is not None and dim != d:
                raise ValueError(f"declared dimension {dim} != point dimension {d}")
            dim = d
        else:
            if not _allow_empty:
                raise ValueError("a region must be nonempty; use Region.empty for the empty result form")
            if dim is None:
                raise ValueError("an empty region needs an explicit dimension")
        self._resolution = resolution
        self._dim = int(dim)
        by_cell: dict[tuple[int, ...], Point] = {}
        for p in pts:
            c = tuple(cell_index(v, resolution) for v in p.coords)
            if c not in by_cell:
                by_cell[c] = p
        self._points = tuple(by_cell.values())
        self._cell_seq = tuple(by_cell.keys())
        self._cells = frozenset(by_cell.keys())
        self._cache: dict = {}

    @classmethod
    def empty(cls, dim: int, resolution: float = 1.0) -> "Region":
        return cls((), resolution, dim=dim, _allow_empty=True)

    @property
    def points(self) -> tuple[Point, ...]:
        return self._points

    @property
    def resolution(self) -> float:
        return self._resolution

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def cells(self) -> frozenset[tuple[int, ...]]:
        """Occupied grid cells; the snapped representation of the region."""
        return self._cells

    @property
    def is_empty(self) -> bool:
        return not self._points

    def cell_of(self, point: Point | Sequence[float]) -> tuple[int, ...]:
        p = as_point(point)
        return tuple(cell_index(v, self._resolution) for v in p.coords)

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __contains__(self, point: Point | Sequence[float]) -> bool:
        return self.cell_of(point) in self._cells

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return (
            self._dim == other._dim
            and self._resolution == other._resolution
            and self._cells == other._cells
        )

    def __hash__(self) -> int:
        return hash((self._dim, self._resolution, self._cells))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self._points)} pts, dim={self._dim}, res={self._resolution})"

    def interior(self) -> "Region":
        """Points whose grid cell has all 2n face-adjacent cells occupied."""
        cached = self._cache.get("interior")
        if cached is None:
            occupied = self._cells
            keep = []
            for p, c in zip(self._points, self._cell_seq):
                inner = True
                for axis in range(self._dim):
                    lo = c[:axis] + (c[axis] - 1,) + c[axis + 1 :]
                    hi = c[:axis] + (c[axis] + 1,) + c[axis + 1 :]
                    if lo not in occupied or hi not in occupied:
                        inner = False
                        break
                if inner:
                    keep.append(p)
            cached = Region(keep, self._resolution, dim=self._dim, _allow_empty=True)
            self._cache["interior"] = cached
        return cached


class SphericalRegion(Region):
    """Region whose points lie on the unit sphere S^n in R^(n+1)."""

    def __init__(
        self,
        points: Iterable[Point | Sequence[float]],
        resolution: float = 1e-6,
        *,
        dim: int | None = None,
        _allow_empty: bool = False,
    ) -> None:
        pts = [as_point(p) for p in points]
        for p in pts:
            norm = math.hypot(*p.coords)
            if abs(norm - 1.0) > SPHERE_NORM_TOL:
                raise ValueError(f"point {p.coords} is off the unit sphere: |x|={norm!r}")
        super().__init__(pts, resolution, dim=dim, _allow_empty=_allow_empty)


class StringPath:
    """Zero-width polyline worldline: ordered vertices with increasing parameters.

    ``params`` defaults to 0, 1, 2, ... when omitted. Arc length must be
    strictly positive (a string is a path, not a point).
    """

    def __init__(
        self,
        vertices: Iterable[Point | Sequence[float]],
        params: Sequence[float] | None = None,
    ) -> None:
        verts = tuple(as_point(v) for v in vertices)
        if len(verts) < 2:
            raise ValueError("a string needs at least two vertices")
        d = verts[0].dim
        for v in verts:
            if v.dim != d:
                raise ValueError("dimension mismatch among string vertices")
        if params is None:
            ps = tuple(float(i) for i in range(len(verts)))
        else:
            ps = tuple(float(t) for t in params)
        if len(ps) != len(verts):
            raise ValueError("params and vertices must have equal length")
        if not all(math.isfinite(t) for t in ps):
            raise ValueError("non-finite parameter value")
        if any(b <= a for a, b in zip(ps, ps[1:])):
            raise ValueError("params must be strictly increasing")
        length = sum(a.distance_to(b) for a, b in zip(verts, verts[1:]))
        if length <= 0.0:
            raise ValueError("string has zero arc length")
        self._vertices = verts
        self._params = ps
        self._length = length
        self._dim = d

    @property
    def vertices(self) -> tuple[Point, ...]:
        return self._vertices

    @property
    def params(self) -> tuple[float, ...]:
        return self._params

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def arc_length(self) -> float:
        return self._length

    def segments(self) -> Iterator[tuple[Point, Point]]:
        return zip(self._vertices, self._vertices[1:])

    def point_region(self, resolution: float) -> Region:
        """The vertex set as a region (for set-style antipodality tests)."""
        return Region(self._vertices, resolution)

    def __repr__(self) -> str:
        return f"StringPath({len(self._vertices)} vertices, dim={self._dim})"


class Worldsheet:
    """Region completely covered by strings.

    Construction verifies the cover (see :func:`cover_check`); pass
    ``check_cover=False`` only to build deliberately uncovered fixtures.
    """

    def __init__(
        self,
        strings: Iterable[StringPath],
        carrier: Region,
        *,
        check_cover: bool = True,
    ) -> None:
        strs = tuple(strings)
        if not strs:
            raise ValueError("a worldsheet needs at least one string")
        for s in strs:
            if s.dim != carrier.dim:
                raise ValueError("string dimension differs from carrier dimension")
        if carrier.is_empty:
            raise ValueError("worldsheet carrier must be nonempty")
        self._strings = strs
        self._carrier = carrier
        if check_cover and not cover_check(self):
            raise ValueError("carrier is not covered by the supplied strings")

    @property
    def strings(self) -> tuple[StringPath, ...]:
        return self._strings

    @property
    def carrier(self) -> Region:
        return self._carrier

    @property
    def dim(self) -> int:
        return self._carrier.dim

    def vertex_region(self, resolution: float | None = None) -> Region:
        """Union of all string vertices as a region (carrier pitch by default)."""
        res = self._carrier.resolution if resolution is None else resolution
        verts: list[Point] = []
        for s in self._strings:
            verts.extend(s.vertices)
        return Region(verts, res)

    def __repr__(self) -> str:
        return f"Worldsheet({len(self._strings)} strings, carrier={self._carrier!r})"


# ---------------------------------------------------------------------------
# pairwise helpers


def _require_comparable(a: Region, b: Region) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.resolution != b.resolution:
        raise ValueError(
            f"resolution mismatch: {a.resolution} vs {b.resolution}; "
            "snapped set operations need a shared grid"
        )


def region_union(a: Region, b: Region) -> Region:
    """Set union under snapped equality; keeps a's representative on overlap."""
    _require_comparable(a, b)
    pts = list(a.points) + [p for p in b.points if p not in a]
    return Region(pts, a.resolution, dim=a.dim, _allow_empty=True)


def _point_segment_distance(p: Sequence[float], a: Point, b: Point) -> float:
    ab = [bb - aa for aa, bb in zip(a.coords, b.coords)]
    denom = sum(d * d for d in ab)
    if denom == 0.0:
        return math.dist(p, a.coords)
    t = sum((pp - aa) * d for pp, aa, d in zip(p, a.coords, ab)) / denom
    t = min(1.0, max(0.0, t))
    proj = [aa + t * d for aa, d in zip(a.coords, ab)]
    return math.dist(p, proj)


# ---------------------------------------------------------------------------
# antipodality predicates


def antipodal_disjoint(a: Region, b: Region) -> bool:
    """Antipodality as point-disjointness of the snapped point sets."""
    _require_comparable(a, b)
    return a.cells.isdisjoint(b.cells)


def antipodal_symmdiff(a: Region, b: Region) -> bool:
    """Antipodality as a nonempty symmetric difference of snapped sets."""
    _require_comparable(a, b)
    return a.cells != b.cells


@dataclass(frozen=True)
class SeparationWitness:
    """Disjoint parallel hyperplanes with the subsets of A and B lying on them."""

    plane_a: Hyperplane
    plane_b: Hyperplane
    witness_a: Region
    witness_b: Region


def _canonical_direction(vec: np.ndarray) -> tuple[float, ...] | None:
    norm = float(np.linalg.norm(vec))
    if norm < 1e-12:
        return None
    unit = vec / norm
    for c in unit:
        if c != 0.0:
            if c < 0.0:
                unit = -unit
            break
    return tuple(float(c) for c in unit)


def antipodal_separable(a: Region, b: Region) -> SeparationWitness | None:
    """Search for disjoint parallel hyperplanes through subsets of A and B.

    Candidate normals are the pairwise difference directions between A and
    B plus the coordinate axes; the search is exhaustive over those
    candidates (complete for witnesses aligned with a point difference or
    an axis, not over all of S^(n-1)). Absence is a valid answer.
    """
    _require_comparable(a, b)
    if a.is_empty or b.is_empty:
        raise ValueError("separable antipodality needs nonempty regions")
    amat = np.array([p.coords for p in a.points], dtype=float)
    bmat = np.array([p.coords for p in b.points], dtype=float)
    n = a.dim

    candidates: list[tuple[float, ...]] = []
    seen: set[tuple[float, ...]] = set()
    for prow in amat:
        for qrow in bmat:
            d = _canonical_direction(prow - qrow)
            if d is not None and d not in seen:
                seen.add(d)
                candidates.append(d)
    for axis in range(n):
        e = tuple(1.0 if i == axis else 0.0 for i in range(n))
        if e not in seen:
            seen.add(e)
            candidates.append(e)

    tol = PLANE_MEMBERSHIP_TOL
    for direction in candidates:
        v = np.array(direction)
        pa = amat @ v
        pb = bmat @ v
        choices = [(float(pa.min()), float(pb.max()))]
        alt = (float(pa.max()), float(pb.min()))
        if alt != choices[0]:
            choices.append(alt)
        for alpha, beta in choices:
            # bands this close could put one point on both planes
            if abs(alpha - beta) <= 2 * tol:
                continue
            wa = [p for p, proj in zip(a.points, pa) if abs(proj - alpha) <= tol]
            wb = [p for p, proj in zip(b.points, pb) if abs(proj - beta) <= tol]
            if not wa or not wb:
                continue
            ra = Region(wa, a.resolution)
            rb = Region(wb, b.resolution)
            if not ra.cells.isdisjoint(rb.cells):
                continue
            return SeparationWitness(
                Hyperplane(direction, alpha), Hyperplane(direction, beta), ra, rb
            )
    return None


def antipode_map(region: Region) -> Region:
    """Pointwise negation x -> -x; an exact involution and isometry."""
    pts = [p.negated() for p in region.points]
    return type(region)(
        pts, region.resolution, dim=region.dim, _allow_empty=region.is_empty
    )


def sphere_sample(n: int, m: int, seed: int) -> tuple[Point, ...]:
    """Deterministic m-point sample of S^n, closed under negation.

    Draws m/2 points by normalizing seeded Gaussian vectors in R^(n+1),
    then appends their negations, so the sample equals its own pointwise
    negation as a set. m must be even.
    """
    if n < 1:
        raise ValueError("sphere dimension must be at least 1")
    if m < 2:
        raise ValueError("need at least two sample points")
    if m % 2 != 0:
        raise ValueError("sample count must be even: negation closure is impossible otherwise")
    rng = np.random.default_rng(seed)
    half = m // 2
    rows = np.empty((half, n + 1))
    filled = 0
    while filled < half:
        block = rng.standard_normal((half - filled, n + 1))
        norms = np.linalg.norm(block, axis=1)
        good = block[norms > 1e-12]
        if good.size:
            rows[filled : filled + len(good)] = good
            filled += len(good)
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    firsts = [Point(tuple(float(c) for c in row)) for row in rows]
    return tuple(firsts) + tuple(p.negated() for p in firsts)


def cover_check(worldsheet: Worldsheet) -> bool:
    """Finite cover test: every occupied carrier cell is within one pitch
    of some string vertex or segment. "Every subregion contains a string"
    is approximated cell by cell at the carrier resolution.
    """
    carrier = worldsheet.carrier
    res = carrier.resolution
    for cell in carrier.cells:
        center = tuple(i * res for i in cell)
        covered = False
        for s in worldsheet.strings:
            for a, b in s.segments():
                if _point_segment_distance(center, a, b) <= res:
                    covered = True
                    break
            if covered:
                break
        if not covered:
            return False
    return True


# ---------------------------------------------------------------------------
# CSV serialization: one point per row, header x0,x1,...; strings prepend t.


def _format_float(x: float) -> str:
    return repr(float(x))


def region_to_csv(region: Region, path: str | Path) -> None:
    """Write a region as UTF-8 CSV in lexicographic point order."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i}" for i in range(region.dim)])
        for p in sorted(region.points, key=lambda p: p.coords):
            writer.writerow([_format_float(c) for c in p.coords])


def region_from_csv(path: str | Path, resolution: float = 1.0) -> Region:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header != [f"x{i}" for i in range(len(header))]:
            raise ValueError(f"{path}: expected header x0,x1,..., got {header}")
        pts = [Point(tuple(float(v) for v in row)) for row in reader if row]
    return Region(pts, resolution)


def string_to_csv(string: StringPath, path: str | Path) -> None:
    """Write a string as UTF-8 CSV in vertex order, t column first."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"x{i}" for i in range(string.dim)])
        for t, v in zip(string.params, string.vertices):
            writer.writerow([_format_float(t)] + [_format_float(c) for c in v.coords])


def string_from_csv(path: str | Path) -> StringPath:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "t" or header[1:] != [f"x{i}" for i in range(len(header) - 1)]:
            raise ValueError(f"{path}: expected header t,x0,x1,..., got {header}")
        params = []
        verts = []
        for row in reader:
            if not row:
                continue
            params.append(float(row[0]))
            verts.append(Point(tuple(float(v) for v in row[1:])))
    return StringPath(verts, params)
