"""Simplicial complexes, the boundary operator, and Betti numbers.

Coefficients are the two-element field throughout: simplices are canonical
sorted vertex tuples, chains are simplex sets, and matrices are sparse
column lists of row indices.  This keeps the rank and reduction routines
column-wise and sign-free (orientation signs collapse mod 2); the supported
meshes are orientable surfaces, where mod-2 Betti numbers equal rational
ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInputError

Simplex = tuple  # strictly increasing vertex ids; dim = len - 1


def make_simplex(vertices) -> Simplex:
    s = tuple(sorted(int(v) for v in vertices))
    if len(set(s)) != len(s):
        raise InvalidInputError(f"simplex {vertices} has repeated vertices")
    if not s:
        raise InvalidInputError("empty simplex")
    return s


def simplex_dim(s: Simplex) -> int:
    return len(s) - 1


@dataclass(frozen=True)
class Chain:
    """A set of same-dimension simplices (a vector over the field)."""

    dimension: int
    simplices: frozenset

    def __post_init__(self):
        for s in self.simplices:
            if simplex_dim(s) != self.dimension:
                raise InvalidInputError(
                    f"chain of dimension {self.dimension} contains {s}"
                )

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(sorted(self.simplices))


def boundary(s: Simplex) -> Chain:
    """Boundary of a simplex: all codimension-1 faces (signs reduced mod 2).

    A vertex has the empty chain as boundary.
    """
    s = make_simplex(s)
    if len(s) == 1:
        return Chain(-1, frozenset())
    faces = frozenset(s[:i] + s[i + 1:] for i in range(len(s)))
    return Chain(len(s) - 2, faces)


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplices grouped by dimension, closed under faces."""

    by_dim: dict = field(default_factory=dict)  # dim -> sorted tuple of simplices

    @staticmethod
    def from_simplices(simplices) -> "SimplicialComplex":
        grouped: dict[int, set] = {}
        for s in simplices:
            s = make_simplex(s)
            grouped.setdefault(simplex_dim(s), set()).add(s)
        by_dim = {d: tuple(sorted(group)) for d, group in grouped.items()}
        cx = SimplicialComplex(by_dim)
        cx.validate_closed()
        return cx

    @property
    def top_dim(self) -> int:
        return max(self.by_dim, default=-1)

    def simplices(self, dim: int) -> tuple:
        return self.by_dim.get(dim, ())

    def all_simplices(self):
        for d in sorted(self.by_dim):
            yield from self.by_dim[d]

    def counts(self) -> list[int]:
        return [len(self.simplices(d)) for d in range(self.top_dim + 1)]

    def __len__(self):
        return sum(len(v) for v in self.by_dim.values())

    def __contains__(self, s) -> bool:
        s = tuple(s)
        return s in set(self.by_dim.get(len(s) - 1, ()))

    def validate_closed(self):
        for d in sorted(self.by_dim):
            if d == 0:
                continue
            lower = set(self.by_dim.get(d - 1, ()))
            for s in self.by_dim[d]:
                for f in boundary(s).simplices:
                    if f not in lower:
                        raise InvalidInputError(f"complex not closed: {s} misses face {f}")

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(v) for d, v in self.by_dim.items())


def complex_from_mesh(mesh) -> SimplicialComplex:
    """Full simplicial complex of a mesh (vertices, edges, triangles)."""
    simplices = [(i,) for i in range(mesh.vertex_count)]
    simplices += [tuple(e) for e in mesh.edges]
    simplices += [tuple(sorted(int(v) for v in t)) for t in mesh.triangles]
    return SimplicialComplex.from_simplices(simplices)


@dataclass(frozen=True)
class SparseColumns:
    """Binary matrix stored as sorted row-index lists, one per column."""

    n_rows: int
    columns: tuple  # tuple of tuples of row indices

    def to_dense(self):
        dense = [[0] * len(self.columns) for _ in range(self.n_rows)]
        for j, col in enumerate(self.columns):
            for i in col:
                dense[i][j] = 1
        return dense


def boundary_matrix(cx: SimplicialComplex, k: int) -> SparseColumns:
    """Boundary matrix from k-chains to (k-1)-chains over the field.

    Columns are indexed by the sorted k-simplices, rows by the sorted
    (k-1)-simplices.
    """
    rows = {s: i for i, s in enumerate(cx.simplices(k - 1))}
    cols = []
    for s in cx.simplices(k):
        if k == 0:
            cols.append(())
            continue
        cols.append(tuple(sorted(rows[f] for f in boundary(s).simplices)))
    return SparseColumns(len(rows), tuple(cols))


def xor_columns(a: list[int], b) -> list[int]:
    """Symmetric difference of two sorted index lists, kept sorted."""
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        if a[i] == b[j]:
            i += 1
            j += 1
        elif a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return out


def gf2_rank(matrix: SparseColumns) -> int:
    """Rank over the two-element field by column elimination on low entries."""
    pivots: dict[int, list[int]] = {}
    rank = 0
    for col in matrix.columns:
        work = list(col)
        while work and work[-1] in pivots:
            work = xor_columns(work, pivots[work[-1]])
        if work:
            pivots[work[-1]] = work
            rank += 1
    return rank


def betti_numbers(cx: SimplicialComplex) -> list[int]:
    """Betti numbers beta_0 .. beta_top over the two-element field.

    beta_k = dim ker(boundary_k) - rank(boundary_{k+1}).
    """
    top = cx.top_dim
    if top < 0:
        return []
    ranks = [gf2_rank(boundary_matrix(cx, k)) for k in range(top + 2)]
    betti = []
    for k in range(top + 1):
        kernel_dim = len(cx.simplices(k)) - ranks[k]
        betti.append(kernel_dim - ranks[k + 1])
    return betti
