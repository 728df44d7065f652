"""Supported manifolds and their intrinsic geometry.

Three compact 2-manifolds are supported: a planar disk of radius ``R``
(chart: xy coordinates), the unit 2-sphere (chart: unit 3-vectors), and a
flat torus with side lengths ``l1 x l2`` (chart: (u, v) with per-coordinate
wrap-around).  All carry an explicit dimension field so volume and rate
formulas stay dimension-generic.

Everything here is pure and immutable; instances are safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import FormatError, InvalidInputError
from .rng import Stream

_POINT_TOL = 1e-12


@dataclass(frozen=True)
class Disk:
    """Closed planar disk of radius ``radius`` centered at the origin."""

    radius: float
    dim: int = 2

    def __post_init__(self):
        if not (self.radius > 0):
            raise InvalidInputError(f"disk radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Sphere:
    """Unit 2-sphere embedded in R^3."""

    dim: int = 2


@dataclass(frozen=True)
class Torus:
    """Flat square torus [0, l1) x [0, l2) with wrap-around metric."""

    l1: float
    l2: float
    dim: int = 2

    def __post_init__(self):
        if not (self.l1 > 0 and self.l2 > 0):
            raise InvalidInputError(
                f"torus side lengths must be positive, got {self.l1}, {self.l2}"
            )


Manifold = Union[Disk, Sphere, Torus]

Point = tuple  # chart coordinates; length 2 (disk, torus) or 3 (sphere)


def chart_width(manifold: Manifold) -> int:
    """Number of chart coordinates per point."""
    return 3 if isinstance(manifold, Sphere) else 2


def canonical_point(manifold: Manifold, p: Sequence[float]) -> Point:
    """Validate chart coordinates and return the canonical representative.

    Sphere points must be unit vectors to within 1e-12; torus coordinates
    are reduced into [0, l).  Raises InvalidInputError on chart mismatch.
    """
    coords = tuple(float(c) for c in p)
    if len(coords) != chart_width(manifold):
        raise InvalidInputError(
            f"point {coords} has {len(coords)} coordinates, expected "
            f"{chart_width(manifold)} for {type(manifold).__name__}"
        )
    if not all(math.isfinite(c) for c in coords):
        raise InvalidInputError(f"point {coords} has non-finite coordinates")
    if isinstance(manifold, Disk):
        r = math.hypot(*coords)
        if r > manifold.radius * (1.0 + _POINT_TOL) + _POINT_TOL:
            raise InvalidInputError(f"point {coords} lies outside disk of radius {manifold.radius}")
        return coords
    if isinstance(manifold, Sphere):
        norm = math.sqrt(sum(c * c for c in coords))
        if abs(norm - 1.0) > _POINT_TOL:
            raise InvalidInputError(f"sphere point {coords} has norm {norm!r}, expected 1")
        return coords
    return (coords[0] % manifold.l1, coords[1] % manifold.l2)


def volume(manifold: Manifold) -> float:
    """Riemannian volume (area) of the manifold."""
    if isinstance(manifold, Disk):
        return math.pi * manifold.radius ** 2
    if isinstance(manifold, Sphere):
        return 4.0 * math.pi
    return manifold.l1 * manifold.l2


def sphere_surface_volume(d: int) -> float:
    """Volume of the unit (d-1)-sphere: 2 pi^(d/2) / Gamma(d/2)."""
    if d < 1:
        raise InvalidInputError(f"dimension must be >= 1, got {d}")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def geodesic_distance(manifold: Manifold, a: Sequence[float], b: Sequence[float]) -> float:
    """Geodesic length between two points of the manifold.

    Disk: Euclidean.  Sphere: great-circle arc.  Torus: Euclidean with
    per-coordinate wrap-around minimum.
    """
    pa = canonical_point(manifold, a)
    pb = canonical_point(manifold, b)
    if isinstance(manifold, Disk):
        return math.hypot(pa[0] - pb[0], pa[1] - pb[1])
    if isinstance(manifold, Sphere):
        # atan2(|a x b|, a . b) stays well-conditioned at both poles of [0, pi]
        dot = pa[0] * pb[0] + pa[1] * pb[1] + pa[2] * pb[2]
        cross = (
            pa[1] * pb[2] - pa[2] * pb[1],
            pa[2] * pb[0] - pa[0] * pb[2],
            pa[0] * pb[1] - pa[1] * pb[0],
        )
        return math.atan2(math.hypot(*cross), dot)
    du = abs(pa[0] - pb[0])
    dv = abs(pa[1] - pb[1])
    du = min(du, manifold.l1 - du)
    dv = min(dv, manifold.l2 - dv)
    return math.hypot(du, dv)


def pairwise_distances(manifold: Manifold, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Geodesic distance matrix between point arrays of shape (na, c), (nb, c)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if isinstance(manifold, Disk):
        diff = a[:, None, :] - b[None, :, :]
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    if isinstance(manifold, Sphere):
        dots = a @ b.T
        cross = np.cross(a[:, None, :], b[None, :, :])
        return np.arctan2(np.linalg.norm(cross, axis=-1), dots)
    sides = np.array([manifold.l1, manifold.l2])
    diff = np.abs(a[:, None, :] - b[None, :, :])
    diff = np.minimum(diff, sides[None, None, :] - diff)
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def equidistant_points(manifold: Manifold, count: int) -> list[Point]:
    """Deterministic, asymptotically equidistant point layout.

    Disk: Vogel sunflower spiral.  Sphere: Fibonacci lattice.  Torus:
    near-square grid of ceil(sqrt(count)) columns.  Exactly ``count``
    points are returned.
    """
    if count < 1:
        raise InvalidInputError(f"count must be >= 1, got {count}")
    if isinstance(manifold, Disk):
        if count == 1:
            return [(0.0, 0.0)]
        pts = []
        for k in range(count):
            r = manifold.radius * math.sqrt((k + 0.5) / count)
            theta = k * _GOLDEN_ANGLE
            pts.append((r * math.cos(theta), r * math.sin(theta)))
        return pts
    if isinstance(manifold, Sphere):
        pts = []
        for k in range(count):
            z = 1.0 - 2.0 * (k + 0.5) / count
            rho = math.sqrt(max(0.0, 1.0 - z * z))
            theta = k * _GOLDEN_ANGLE
            p = (rho * math.cos(theta), rho * math.sin(theta), z)
            norm = math.sqrt(sum(c * c for c in p))
            pts.append((p[0] / norm, p[1] / norm, p[2] / norm))
        return pts
    cols = math.isqrt(count)
    if cols * cols < count:
        cols += 1
    rows = -(-count // cols)
    pts = []
    for i in range(cols):
        for j in range(rows):
            if len(pts) == count:
                break
            pts.append((i * manifold.l1 / cols, j * manifold.l2 / rows))
    return pts


def equidistance_ratio(manifold: Manifold, pts: Sequence[Sequence[float]]) -> float:
    """Max over min nearest-neighbor spacing ratio; 1.0 is a perfect design.

    Duplicated points make the denominator zero and raise InvalidInputError.
    """
    if len(pts) < 2:
        raise InvalidInputError("equidistance_ratio needs at least 2 points")
    arr = np.array([canonical_point(manifold, p) for p in pts])
    dist = pairwise_distances(manifold, arr, arr)
    np.fill_diagonal(dist, np.inf)
    nearest = dist.min(axis=1)
    lo = float(nearest.min())
    if lo <= 0.0:
        raise InvalidInputError("duplicated points give zero nearest-neighbor distance")
    return float(nearest.max()) / lo


def parse_manifold_token(tokens: list[str]) -> Manifold:
    """Parse ``disk R | sphere | torus L1 L2`` tokens from the text formats."""
    if not tokens:
        raise FormatError("empty manifold description")
    kind = tokens[0]
    try:
        if kind == "disk":
            return Disk(float(tokens[1]))
        if kind == "sphere":
            return Sphere()
        if kind == "torus":
            return Torus(float(tokens[1]), float(tokens[2]))
    except (IndexError, ValueError) as exc:
        raise FormatError(f"malformed manifold description {tokens!r}") from exc
    raise FormatError(f"unknown manifold kind {kind!r}")


def random_points(manifold: Manifold, count: int, stream: Stream) -> list[Point]:
    """Area-uniform random points drawn from the given stream.

    Disk: rejection sampling on the bounding square.  Sphere: normalized
    Gaussian triples.  Torus: independent uniforms per coordinate.
    """
    if count < 0:
        raise InvalidInputError(f"count must be >= 0, got {count}")
    pts: list[Point] = []
    if isinstance(manifold, Disk):
        R = manifold.radius
        while len(pts) < count:
            x = (2.0 * stream.uniform() - 1.0) * R
            y = (2.0 * stream.uniform() - 1.0) * R
            if x * x + y * y <= R * R:
                pts.append((x, y))
        return pts
    if isinstance(manifold, Sphere):
        while len(pts) < count:
            g = (stream.gaussian(), stream.gaussian(), stream.gaussian())
            norm = math.sqrt(g[0] ** 2 + g[1] ** 2 + g[2] ** 2)
            if norm < 1e-12:
                continue
            pts.append((g[0] / norm, g[1] / norm, g[2] / norm))
        return pts
    for _ in range(count):
        # uniform() lands in (0, 1]; fold the endpoint onto 0
        u = (stream.uniform() % 1.0) * manifold.l1
        v = (stream.uniform() % 1.0) * manifold.l2
        pts.append((u, v))
    return pts
