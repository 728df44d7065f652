"""Triangulations of the supported manifolds and the mesh file format.

Disk meshes are hexagonal fan/ring triangulations, sphere meshes are
subdivided icosahedra projected to the unit sphere, torus meshes are
n x n wrap-around grids with diagonal splits.  Meshes are immutable;
``edges`` is derived from the triangle list.

File format (text, OFF-like)::

    sublevelstat-mesh v1 <variant> <params...> <resolution>
    V E F
    ... V vertex lines (chart coordinates) ...
    ... F face lines (three 0-based vertex ids) ...

Floats are written with 17 significant digits so files round-trip
bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FormatError, InvalidInputError
from .manifolds import Disk, Manifold, Sphere, Torus, canonical_point

_FMT = "%.17g"


def format_float(x: float) -> str:
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return _FMT % x


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash."""
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def derive_edges(triangles: np.ndarray) -> list[tuple[int, int]]:
    """Sorted list of undirected edges contributed by the triangles."""
    edges = set()
    for a, b, c in triangles:
        edges.add((min(a, b), max(a, b)))
        edges.add((min(a, c), max(a, c)))
        edges.add((min(b, c), max(b, c)))
    return sorted((int(u), int(v)) for u, v in edges)


@dataclass(frozen=True)
class Mesh:
    manifold: Manifold
    vertices: np.ndarray  # (V, chart width)
    triangles: np.ndarray  # (F, 3) int
    resolution: int
    edges: list = field(init=False, repr=False)

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        tris = np.asarray(self.triangles, dtype=int)
        verts.setflags(write=False)
        tris.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "triangles", tris)
        object.__setattr__(self, "edges", derive_edges(tris))
        self._validate()

    def _validate(self):
        V = len(self.vertices)
        tris = self.triangles
        if tris.size and (tris.min() < 0 or tris.max() >= V):
            raise InvalidInputError("triangle references an invalid vertex id")
        for tri in tris:
            if len(set(int(v) for v in tri)) != 3:
                raise InvalidInputError(f"degenerate triangle {tuple(tri)}")
        incidence: dict[tuple[int, int], int] = {}
        for a, b, c in tris:
            for u, v in ((a, b), (a, c), (b, c)):
                key = (min(u, v), max(u, v))
                incidence[key] = incidence.get(key, 0) + 1
        counts = set(incidence.values())
        if isinstance(self.manifold, Disk):
            if not counts <= {1, 2}:
                raise InvalidInputError("disk mesh has an edge in more than 2 triangles")
        else:
            if counts != {2}:
                raise InvalidInputError("closed-surface mesh has a non-interior edge")
        for v in self.vertices:
            canonical_point(self.manifold, v)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def face_count(self) -> int:
        return len(self.triangles)

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    def barycenters(self) -> np.ndarray:
        """Triangle barycenters, computed in each triangle's local chart.

        Torus triangles spanning the seam are unwrapped around their first
        vertex before averaging; sphere barycenters are renormalized.
        """
        verts = self.vertices
        tris = self.triangles
        m = self.manifold
        if isinstance(m, Disk):
            return verts[tris].mean(axis=1)
        if isinstance(m, Sphere):
            bary = verts[tris].mean(axis=1)
            return bary / np.linalg.norm(bary, axis=1, keepdims=True)
        sides = np.array([m.l1, m.l2])
        corners = verts[tris]  # (F, 3, 2)
        base = corners[:, :1, :]
        rel = corners - base
        rel -= np.round(rel / sides) * sides
        bary = base[:, 0, :] + rel.mean(axis=1)
        return bary % sides


def triangulate(manifold: Manifold, resolution: int) -> Mesh:
    """Triangulate the manifold at the given refinement level.

    Disk: center plus ``resolution`` hexagonal rings.  Sphere: icosahedron
    subdivided ``resolution`` times.  Torus: ``resolution x resolution``
    grid (needs resolution >= 3 to be a simplicial closed surface).
    """
    if resolution < 1:
        raise InvalidInputError(f"resolution must be >= 1, got {resolution}")
    if isinstance(manifold, Disk):
        verts, tris = _triangulate_disk(manifold.radius, resolution)
    elif isinstance(manifold, Sphere):
        verts, tris = _triangulate_sphere(resolution)
    else:
        if resolution < 3:
            raise InvalidInputError(
                "torus grids below resolution 3 are not simplicial complexes"
            )
        verts, tris = _triangulate_torus(manifold.l1, manifold.l2, resolution)
    return Mesh(manifold, verts, tris, resolution)


def _triangulate_disk(radius: float, rings: int):
    verts = [(0.0, 0.0)]
    ring_start = [0]
    for k in range(1, rings + 1):
        ring_start.append(len(verts))
        r = radius * k / rings
        for j in range(6 * k):
            theta = 2.0 * math.pi * j / (6 * k)
            verts.append((r * math.cos(theta), r * math.sin(theta)))
    tris = []
    for k in range(rings):
        inner_n = max(6 * k, 1)
        outer_n = 6 * (k + 1)
        for s in range(6):
            def inner(j):
                if k == 0:
                    return 0
                return ring_start[k] + (s * k + j) % inner_n

            def outer(j):
                return ring_start[k + 1] + (s * (k + 1) + j) % outer_n

            for j in range(k + 1):
                tris.append((outer(j), outer(j + 1), inner(j)))
            for j in range(k):
                tris.append((outer(j + 1), inner(j + 1), inner(j)))
    return np.array(verts), np.array(tris, dtype=int)


_ICO_VERTS = None
_ICO_FACES = None


def _icosahedron():
    global _ICO_VERTS, _ICO_FACES
    if _ICO_VERTS is None:
        phi = (1.0 + math.sqrt(5.0)) / 2.0
        raw = [
            (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
            (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
            (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
        ]
        norm = math.sqrt(1.0 + phi * phi)
        _ICO_VERTS = [(x / norm, y / norm, z / norm) for x, y, z in raw]
        _ICO_FACES = [
            (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
            (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
            (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
            (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
        ]
    return list(_ICO_VERTS), list(_ICO_FACES)


def _triangulate_sphere(subdivisions: int):
    verts, faces = _icosahedron()
    for _ in range(subdivisions):
        midpoint: dict[tuple[int, int], int] = {}

        def mid(u, v):
            key = (min(u, v), max(u, v))
            if key not in midpoint:
                x = tuple((verts[u][i] + verts[v][i]) / 2.0 for i in range(3))
                norm = math.sqrt(sum(c * c for c in x))
                verts.append((x[0] / norm, x[1] / norm, x[2] / norm))
                midpoint[key] = len(verts) - 1
            return midpoint[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return np.array(verts), np.array(faces, dtype=int)


def _triangulate_torus(l1: float, l2: float, n: int):
    verts = []
    for i in range(n):
        for j in range(n):
            verts.append((i * l1 / n, j * l2 / n))

    def vid(i, j):
        return (i % n) * n + (j % n)

    tris = []
    for i in range(n):
        for j in range(n):
            tris.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            tris.append((vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return np.array(verts), np.array(tris, dtype=int)


def _manifold_header(manifold: Manifold, resolution: int) -> str:
    if isinstance(manifold, Disk):
        return f"disk {format_float(manifold.radius)} {resolution}"
    if isinstance(manifold, Sphere):
        return f"sphere {resolution}"
    return f"torus {format_float(manifold.l1)} {format_float(manifold.l2)} {resolution}"


def mesh_to_text(mesh: Mesh) -> str:
    lines = [f"sublevelstat-mesh v1 {_manifold_header(mesh.manifold, mesh.resolution)}"]
    lines.append(f"{mesh.vertex_count} {mesh.edge_count} {mesh.face_count}")
    for v in mesh.vertices:
        lines.append(" ".join(format_float(c) for c in v))
    for tri in mesh.triangles:
        lines.append(" ".join(str(int(i)) for i in tri))
    return "\n".join(lines) + "\n"


def mesh_hash(mesh: Mesh) -> int:
    """FNV-1a hash of the canonical serialization, used by field files."""
    return fnv1a64(mesh_to_text(mesh).encode("utf-8"))


def write_mesh(mesh: Mesh, path) -> None:
    Path(path).write_text(mesh_to_text(mesh), encoding="utf-8")


def mesh_from_text(text: str) -> Mesh:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty mesh file")
    header = lines[0].split()
    if header[:2] != ["sublevelstat-mesh", "v1"]:
        raise FormatError(f"bad mesh header: {lines[0]!r}")
    try:
        variant = header[2]
        if variant == "disk":
            manifold: Manifold = Disk(float(header[3]))
            resolution = int(header[4])
        elif variant == "sphere":
            manifold = Sphere()
            resolution = int(header[3])
        elif variant == "torus":
            manifold = Torus(float(header[3]), float(header[4]))
            resolution = int(header[5])
        else:
            raise FormatError(f"unknown manifold variant {variant!r}")
        nv, ne, nf = (int(t) for t in lines[1].split())
        verts = [tuple(float(t) for t in lines[2 + i].split()) for i in range(nv)]
        tris = [tuple(int(t) for t in lines[2 + nv + i].split()) for i in range(nf)]
    except (IndexError, ValueError) as exc:
        raise FormatError(f"malformed mesh file: {exc}") from exc
    mesh = Mesh(manifold, np.array(verts), np.array(tris, dtype=int), resolution)
    if mesh.edge_count != ne:
        raise FormatError(f"edge count mismatch: header says {ne}, derived {mesh.edge_count}")
    return mesh


def read_mesh(path) -> Mesh:
    return mesh_from_text(Path(path).read_text(encoding="utf-8"))
