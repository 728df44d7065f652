"""Exact bottleneck distance between persistence diagrams.

The diagonal's infinite multiplicity reduces to a finite assignment: each
diagram point may match a point of the other diagram or its own diagonal
projection, and the leftover projections absorb each other at zero cost.
The optimum is therefore one of the realized candidate costs (pairwise
sup-norm distances and point-to-own-diagonal distances), found by binary
search with an augmenting-path perfect-matching feasibility test at each
probe.  Exactness lets golden values be asserted to machine precision.

Essential classes (death +inf) are matched among themselves by sorted
birth; diagrams with different essential counts in a degree are infinitely
far apart in that degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .persistence import INF, PersistenceDiagram


def _inf_norm(p: tuple, q: tuple) -> float:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _diagonal_gap(p: tuple) -> float:
    """Sup-norm distance from a point to its diagonal projection."""
    return (p[1] - p[0]) / 2.0


@dataclass(frozen=True)
class MatchingInstance:
    """Finite assignment problem for the finite parts of two diagrams."""

    points_a: tuple
    points_b: tuple
    projections_a: tuple  # own-diagonal projections of points_a
    projections_b: tuple
    candidates: tuple  # sorted, deduplicated candidate costs

    @staticmethod
    def build(points_a, points_b) -> "MatchingInstance":
        pa = tuple(points_a)
        pb = tuple(points_b)
        costs = {0.0}
        for p in pa:
            costs.add(_diagonal_gap(p))
        for q in pb:
            costs.add(_diagonal_gap(q))
        for p in pa:
            for q in pb:
                costs.add(_inf_norm(p, q))
        proj_a = tuple(((p[0] + p[1]) / 2.0,) * 2 for p in pa)
        proj_b = tuple(((q[0] + q[1]) / 2.0,) * 2 for q in pb)
        return MatchingInstance(pa, pb, proj_a, proj_b, tuple(sorted(costs)))

    def feasible(self, cost: float) -> bool:
        """Does the <=cost bipartite graph admit a perfect matching?

        Left side: points of A plus projections of B.  Right side: points
        of B plus projections of A.  Projection-to-projection edges are
        free, so a perfect matching exists iff every point is matched
        within cost or retired to its own diagonal projection.
        """
        na, nb = len(self.points_a), len(self.points_b)
        size = na + nb
        adjacency: list[list[int]] = []
        for i, p in enumerate(self.points_a):
            nbrs = [j for j, q in enumerate(self.points_b) if _inf_norm(p, q) <= cost]
            if _diagonal_gap(p) <= cost:
                nbrs.append(nb + i)  # own projection
            adjacency.append(nbrs)
        for j, q in enumerate(self.points_b):
            nbrs = list(range(nb, nb + na))  # projection-to-projection, free
            if _diagonal_gap(q) <= cost:
                nbrs.insert(0, j)
            adjacency.append(nbrs)

        match_right = [-1] * size

        def augment(left: int, visited: list[bool]) -> bool:
            for right in adjacency[left]:
                if visited[right]:
                    continue
                visited[right] = True
                if match_right[right] == -1 or augment(match_right[right], visited):
                    match_right[right] = left
                    return True
            return False

        matched = 0
        for left in range(size):
            if augment(left, [False] * size):
                matched += 1
            else:
                return False
        return matched == size


def _finite_bottleneck(points_a, points_b) -> float:
    if not points_a and not points_b:
        return 0.0
    inst = MatchingInstance.build(points_a, points_b)
    lo, hi = 0, len(inst.candidates) - 1
    if not inst.feasible(inst.candidates[hi]):  # cannot happen: all-diagonal matching
        raise AssertionError("no feasible matching at maximal candidate cost")
    while lo < hi:
        mid = (lo + hi) // 2
        if inst.feasible(inst.candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return inst.candidates[lo]


def _essential_bottleneck(births_a, births_b) -> float:
    if len(births_a) != len(births_b):
        return INF
    if not births_a:
        return 0.0
    return max(abs(x - y) for x, y in zip(sorted(births_a), sorted(births_b)))


def bottleneck_distance(a: PersistenceDiagram, b: PersistenceDiagram, k: int) -> float:
    """Exact bottleneck distance between the degree-k slices of two diagrams.

    Parameters
    ----------
    a, b : PersistenceDiagram
        Diagrams whose degree-k points (multiplicity-expanded) are compared.
    k : int
        Homology degree.

    Returns
    -------
    float
        min over bijections of the max sup-norm displacement, where unmatched
        points retire to the (implicit, infinitely replicated) diagonal.
        Finite pairs are matched against each other and the diagonal;
        essential pairs are matched among themselves by sorted birth, with
        +inf returned when the essential counts differ.  The result is the
        max of both parts, and it is exact: the optimum is realized at one
        of the candidate costs, never interpolated.
    """
    finite_a = [p for p in a.points(k) if p[1] != INF]
    finite_b = [p for p in b.points(k) if p[1] != INF]
    ess_a = [p[0] for p in a.points(k) if p[1] == INF]
    ess_b = [p[0] for p in b.points(k) if p[1] == INF]
    return max(
        _finite_bottleneck(finite_a, finite_b),
        _essential_bottleneck(ess_a, ess_b),
    )


def bottleneck_all_degrees(
    a: PersistenceDiagram, b: PersistenceDiagram
) -> tuple[list[tuple[int, float]], float]:
    """Per-degree bottleneck distances and their maximum.

    Degrees absent from both diagrams contribute 0 and are omitted from
    the list; the overall value is 0 for two empty diagrams.
    """
    degrees = sorted(set(a.degrees()) | set(b.degrees()))
    per_degree = [(k, bottleneck_distance(a, b, k)) for k in degrees]
    overall = max((d for _, d in per_degree), default=0.0)
    return per_degree, overall
