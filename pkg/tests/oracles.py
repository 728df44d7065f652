"""Independent brute-force oracles used by the test suite.

Nothing here shares code paths with the package: ranks use dense row
reduction with explicit pivot bookkeeping, persistent Betti numbers come
from inclusion-map linear algebra on sublevel complexes, and the
bottleneck oracle enumerates subset bijections outright.
"""

from __future__ import annotations

import itertools
import math

from sublevelstat.complexes import SimplicialComplex, boundary


def dense_rank_gf2(rows: list[list[int]]) -> int:
    """Rank over GF(2) by full row reduction with an explicit pivot list."""
    rows = [list(r) for r in rows]
    n_cols = len(rows[0]) if rows else 0
    pivots = []
    rank = 0
    for col in range(n_cols):
        pivot_row = None
        for r in range(rank, len(rows)):
            if rows[r][col] == 1:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] == 1:
                rows[r] = [(a + b) % 2 for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    return rank


def dense_boundary_rows(cx: SimplicialComplex, k: int) -> list[list[int]]:
    """Dense boundary matrix of degree k as a row list (rows = (k-1)-simplices)."""
    k_simplices = cx.simplices(k)
    faces = cx.simplices(k - 1)
    face_index = {s: i for i, s in enumerate(faces)}
    rows = [[0] * len(k_simplices) for _ in faces]
    for j, s in enumerate(k_simplices):
        for f in boundary(s).simplices:
            rows[face_index[f]][j] = 1
    return rows


def betti_oracle(cx: SimplicialComplex) -> list[int]:
    """Betti numbers from dense ranks."""
    top = cx.top_dim
    if top < 0:
        return []
    out = []
    for k in range(top + 1):
        n_k = len(cx.simplices(k))
        rank_k = dense_rank_gf2(dense_boundary_rows(cx, k)) if k > 0 else 0
        rank_k1 = dense_rank_gf2(dense_boundary_rows(cx, k + 1))
        out.append(n_k - rank_k - rank_k1)
    return out


def _sub_complex(cx: SimplicialComplex, values, r: float) -> SimplicialComplex:
    simplices = [s for s in cx.all_simplices() if all(values[v] <= r for v in s)]
    if not simplices:
        return SimplicialComplex({})
    return SimplicialComplex.from_simplices(simplices)


def persistent_betti_oracle(
    cx: SimplicialComplex, values, k: int, a: float, b: float
) -> int:
    """dim image(H_k(sublevel a) -> H_k(sublevel b)) by inclusion-map ranks.

    The image dimension is dim Z_k(K_a) - dim(B_k(K_b) restricted to K_a's
    k-simplices); the restriction dimension falls out of comparing the rank
    of the (k+1)-boundary of K_b with the rank of its rows outside K_a.
    """
    ka = _sub_complex(cx, values, a)
    kb = _sub_complex(cx, values, b)
    n_k_a = len(ka.simplices(k))
    if n_k_a == 0:
        return 0
    rank_da = dense_rank_gf2(dense_boundary_rows(ka, k)) if k > 0 else 0
    cycles_a = n_k_a - rank_da

    kb_k = kb.simplices(k)
    in_a = set(ka.simplices(k))
    rows_b = dense_boundary_rows(kb, k + 1)
    rank_b = dense_rank_gf2(rows_b)
    outside_rows = [row for s, row in zip(kb_k, rows_b) if s not in in_a]
    rank_outside = dense_rank_gf2(outside_rows) if outside_rows else 0
    boundaries_inside_a = rank_b - rank_outside
    return cycles_a - boundaries_inside_a


def diagram_points_with_diagonal(points_a, points_b):
    """Pad both diagrams with enough diagonal slots for a full bijection."""
    return (
        list(points_a) + ["diag"] * len(points_b),
        list(points_b) + ["diag"] * len(points_a),
    )


def _pair_cost(p, q) -> float:
    if p == "diag" and q == "diag":
        return 0.0
    if p == "diag":
        return (q[1] - q[0]) / 2.0
    if q == "diag":
        return (p[1] - p[0]) / 2.0
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def bottleneck_oracle(points_a, points_b) -> float:
    """Exhaustive bottleneck over all subset bijections with diagonal
    augmentation; feasible for at most ~7 points per side."""
    pa, pb = list(points_a), list(points_b)
    diag_a = [(p[1] - p[0]) / 2.0 for p in pa]
    diag_b = [(q[1] - q[0]) / 2.0 for q in pb]
    best = math.inf
    for k in range(min(len(pa), len(pb)) + 1):
        for sub_a in itertools.combinations(range(len(pa)), k):
            rest_a = max((diag_a[i] for i in range(len(pa)) if i not in sub_a), default=0.0)
            if rest_a >= best:
                continue
            for sub_b in itertools.combinations(range(len(pb)), k):
                rest = max(
                    rest_a,
                    max((diag_b[j] for j in range(len(pb)) if j not in sub_b), default=0.0),
                )
                if rest >= best:
                    continue
                for perm in itertools.permutations(sub_b):
                    cost = rest
                    for i, j in zip(sub_a, perm):
                        c = _pair_cost(pa[i], pb[j])
                        if c > cost:
                            cost = c
                        if cost >= best:
                            break
                    if cost < best:
                        best = cost
    return best


def torus_distance_oracle(l1: float, l2: float, a, b) -> float:
    """Minimum Euclidean distance over the nine integer lattice shifts."""
    best = math.inf
    for du in (-1, 0, 1):
        for dv in (-1, 0, 1):
            dx = a[0] - (b[0] + du * l1)
            dy = a[1] - (b[1] + dv * l2)
            best = min(best, math.hypot(dx, dy))
    return best
