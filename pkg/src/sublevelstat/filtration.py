"""Lower-star (sublevel-set) filtrations of vertex-valued complexes.

Each simplex enters at the maximum of its vertex values, so the filtration
prefix at any threshold r is exactly the full subcomplex on vertices with
value <= r.  Ties are broken by (level, dimension, lexicographic vertex
list): a total, deterministic, face-respecting order.  Persistence diagrams
are invariant to the tie order, but determinism enables golden-file tests.

Field file format (text)::

    sublevelstat-field v1
    <16 hex digits: FNV-1a of the canonical mesh file bytes>
    ... one value per vertex, one per line ...
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .complexes import SimplicialComplex, boundary, complex_from_mesh, simplex_dim
from .errors import FormatError, InvalidInputError
from .meshing import Mesh, format_float, mesh_hash


@dataclass(frozen=True)
class VertexField:
    """One real value per mesh vertex (an estimate or a truth restriction)."""

    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.mesh.vertex_count:
            raise InvalidInputError(
                f"field has {len(vals)} values for {self.mesh.vertex_count} vertices"
            )
        if not np.all(np.isfinite(vals)):
            raise InvalidInputError("field values must be finite")


@dataclass(frozen=True)
class Filtration:
    """Face-respecting ordered simplices with non-decreasing levels."""

    simplices: tuple  # simplices in filtration order
    levels: tuple  # level per simplex

    def __post_init__(self):
        if len(self.simplices) != len(self.levels):
            raise InvalidInputError("simplex/level length mismatch")
        self.validate()

    def validate(self):
        seen = set()
        prev = -math.inf
        for s, lvl in zip(self.simplices, self.levels):
            if not math.isfinite(lvl):
                raise InvalidInputError(f"non-finite level {lvl} for {s}")
            if lvl < prev:
                raise InvalidInputError("levels must be non-decreasing")
            prev = lvl
            for f in boundary(s).simplices:
                if f not in seen:
                    raise InvalidInputError(f"face order violated: {s} before its face {f}")
            seen.add(s)

    def __len__(self):
        return len(self.simplices)

    def level_of(self) -> dict:
        return dict(zip(self.simplices, self.levels))

    def complex(self) -> SimplicialComplex:
        return SimplicialComplex.from_simplices(self.simplices)

    def cell_counts(self) -> list[int]:
        top = max(simplex_dim(s) for s in self.simplices)
        counts = [0] * (top + 1)
        for s in self.simplices:
            counts[simplex_dim(s)] += 1
        return counts


def lower_star(cx: SimplicialComplex, values) -> Filtration:
    """Lower-star filtration of an arbitrary complex from vertex values.

    ``values[v]`` is the value at vertex id ``v``; every vertex id used by
    the complex must be covered.
    """
    vals = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(vals)):
        raise InvalidInputError("vertex values must be finite")
    entries = []
    for s in cx.all_simplices():
        level = max(float(vals[v]) for v in s)
        entries.append((level, len(s), s))
    entries.sort()
    return Filtration(
        tuple(s for _, _, s in entries),
        tuple(level for level, _, _ in entries),
    )


def lower_star_filtration(fld: VertexField) -> Filtration:
    """Lower-star filtration of the field's full mesh complex."""
    return lower_star(complex_from_mesh(fld.mesh), fld.values)


def sublevel_complex(fld: VertexField, r: float) -> SimplicialComplex:
    """Full subcomplex on vertices with value <= r."""
    keep = {i for i, v in enumerate(fld.values) if v <= r}
    cx = complex_from_mesh(fld.mesh)
    simplices = [s for s in cx.all_simplices() if all(v in keep for v in s)]
    if not simplices:
        return SimplicialComplex({})
    return SimplicialComplex.from_simplices(simplices)


def sublevel_of_values(cx: SimplicialComplex, values, r: float) -> SimplicialComplex:
    """Sublevel subcomplex of an arbitrary complex at threshold r."""
    vals = np.asarray(values, dtype=float)
    simplices = [s for s in cx.all_simplices() if all(vals[v] <= r for v in s)]
    if not simplices:
        return SimplicialComplex({})
    return SimplicialComplex.from_simplices(simplices)


def field_to_text(fld: VertexField) -> str:
    lines = ["sublevelstat-field v1", f"{mesh_hash(fld.mesh):016x}"]
    lines += [format_float(v) for v in fld.values]
    return "\n".join(lines) + "\n"


def write_field(fld: VertexField, path) -> None:
    Path(path).write_text(field_to_text(fld), encoding="utf-8")


def read_field(path, mesh: Mesh) -> VertexField:
    """Read a field file, checking its hash against the given mesh."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "sublevelstat-field v1":
        raise FormatError(f"bad field header in {path}")
    if len(lines) < 2:
        raise FormatError(f"field file {path} missing mesh hash")
    expected = f"{mesh_hash(mesh):016x}"
    if lines[1].strip() != expected:
        raise FormatError(
            f"field/mesh hash mismatch: field carries {lines[1].strip()}, mesh is {expected}"
        )
    try:
        values = [float(t) for t in lines[2:] if t.strip()]
    except ValueError as exc:
        raise FormatError(f"malformed field value: {exc}") from exc
    return VertexField(mesh, np.array(values))
