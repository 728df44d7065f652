"""Persistence diagrams via boundary-matrix column reduction.

Columns are processed in filtration order and reduced over the two-element
field until empty or carrying a unique lowest row; ``low(j) = i`` pairs the
levels of simplices i and j.  Unkilled zero columns become essential
classes with death +inf.  Zero-lifespan pairs (artifacts of simplex-wise
refinement) are discarded from the reduced diagram; coincident pairs merge
into multiplicity counts.

Diagram file format (text CSV)::

    degree,birth,death,multiplicity
    0,0,inf,1
    ...

Rows are sorted by (degree, birth, death); floats carry 17 significant
digits; ``inf`` marks essential classes.  This format is the contract
between the ``diagram``, ``bottleneck`` and ``experiment`` commands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .complexes import simplex_dim, xor_columns
from .errors import FormatError, InvalidInputError
from .filtration import Filtration
from .meshing import format_float

INF = math.inf


@dataclass(frozen=True)
class PersistencePair:
    degree: int
    birth: float
    death: float  # +inf for essential classes
    multiplicity: int = 1

    def __post_init__(self):
        if self.birth > self.death:
            raise InvalidInputError(f"pair born {self.birth} after death {self.death}")
        if self.multiplicity < 1:
            raise InvalidInputError("multiplicity must be >= 1")

    @property
    def essential(self) -> bool:
        return self.death == INF

    @property
    def lifespan(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class PersistenceDiagram:
    """Per-degree multiset of pairs; the diagonal is implicit.

    ``reduced`` marks that zero-lifespan classes have been dropped; the
    matching in the bottleneck module adds the diagonal back with infinite
    multiplicity.
    """

    pairs: tuple  # canonically sorted PersistencePair tuple
    reduced: bool = True

    @staticmethod
    def from_pairs(raw_pairs, reduced: bool = True) -> "PersistenceDiagram":
        merged: dict[tuple, int] = {}
        for p in raw_pairs:
            key = (p.degree, p.birth, p.death)
            merged[key] = merged.get(key, 0) + p.multiplicity
        pairs = tuple(
            PersistencePair(deg, birth, death, mult)
            for (deg, birth, death), mult in sorted(merged.items())
        )
        return PersistenceDiagram(pairs, reduced)

    def degrees(self) -> list[int]:
        return sorted({p.degree for p in self.pairs})

    def in_degree(self, k: int) -> list[PersistencePair]:
        return [p for p in self.pairs if p.degree == k]

    def points(self, k: int, expand: bool = True) -> list[tuple]:
        """(birth, death) points of degree k, multiplicity-expanded."""
        out = []
        for p in self.in_degree(k):
            out.extend([(p.birth, p.death)] * (p.multiplicity if expand else 1))
        return out

    def essential_counts(self) -> dict:
        counts: dict[int, int] = {}
        for p in self.pairs:
            if p.essential:
                counts[p.degree] = counts.get(p.degree, 0) + p.multiplicity
        return counts

    def total_points(self) -> int:
        return sum(p.multiplicity for p in self.pairs)


def compute_persistence(filt: Filtration) -> PersistenceDiagram:
    """Reduced persistence diagram of a filtration (standard reduction)."""
    simplices = filt.simplices
    levels = filt.levels
    index: dict = {}
    for i, s in enumerate(simplices):
        if s in index:
            raise InvalidInputError(f"simplex {s} appears twice in filtration")
        index[s] = i

    reduced_cols: dict[int, list[int]] = {}  # column index -> reduced nonzero column
    low_inv: dict[int, int] = {}  # low row -> column index with that low
    finite = []
    for j, s in enumerate(simplices):
        if len(s) == 1:
            continue  # vertex columns are zero
        col = sorted(index[s[:i] + s[i + 1:]] for i in range(len(s)))
        while col and col[-1] in low_inv:
            col = xor_columns(col, reduced_cols[low_inv[col[-1]]])
        if col:
            low = col[-1]
            low_inv[low] = j
            reduced_cols[j] = col
            birth, death = levels[low], levels[j]
            if birth != death:
                finite.append(PersistencePair(simplex_dim(s) - 1, birth, death))

    essential = []
    for j, s in enumerate(simplices):
        is_creator = len(s) == 1 or j not in reduced_cols
        if is_creator and j not in low_inv:
            essential.append(PersistencePair(simplex_dim(s), levels[j], INF))
    return PersistenceDiagram.from_pairs(finite + essential, reduced=True)


def persistent_betti(diagram: PersistenceDiagram, k: int, a: float, b: float) -> int:
    """Number of degree-k classes born by a that die after b."""
    if a > b:
        raise InvalidInputError(f"persistent_betti needs a <= b, got {a} > {b}")
    return sum(
        p.multiplicity
        for p in diagram.in_degree(k)
        if p.birth <= a and p.death > b
    )


def _critical_values(diagram: PersistenceDiagram, k: int) -> list[float]:
    values = set()
    for p in diagram.in_degree(k):
        values.add(p.birth)
        if not p.essential:
            values.add(p.death)
    return sorted(values)


def multiplicity(diagram: PersistenceDiagram, k: int, a: float, b: float) -> int:
    """Four-term inclusion-exclusion count of classes born at a, dying at b.

    The offset is half the minimum gap between distinct degree-k critical
    levels (with a and b adjoined), which is smaller than any critical gap
    as the formula requires.
    """
    if a >= b:
        raise InvalidInputError(f"multiplicity needs a < b, got {a} >= {b}")
    values = sorted(set(_critical_values(diagram, k)) | {a, b})
    eps = min(hi - lo for lo, hi in zip(values, values[1:])) / 2.0
    return (
        persistent_betti(diagram, k, a + eps, b - eps)
        - persistent_betti(diagram, k, a - eps, b - eps)
        - persistent_betti(diagram, k, a + eps, b + eps)
        + persistent_betti(diagram, k, a - eps, b + eps)
    )


@dataclass(frozen=True)
class EulerMorseReport:
    betti: tuple  # essential-class counts per degree, on the final complex
    cells: tuple  # simplex counts per dimension (cell-complex critical counts)
    chi_betti: int
    chi_cells: int
    weak_inequalities_hold: bool


def euler_morse_check(filt: Filtration, diagram: PersistenceDiagram) -> EulerMorseReport:
    """Euler characteristic identity and weak Morse inequalities.

    Essential-class counts are the Betti numbers of the final complex;
    simplex counts per dimension stand in for critical-point counts in the
    cell-complex reading of the inequalities.
    """
    cells = filt.cell_counts()
    top = len(cells) - 1
    ess = diagram.essential_counts()
    betti = tuple(ess.get(k, 0) for k in range(top + 1))
    chi_betti = sum((-1) ** k * b for k, b in enumerate(betti))
    chi_cells = sum((-1) ** k * c for k, c in enumerate(cells))
    weak = all(betti[k] <= cells[k] for k in range(top + 1))
    return EulerMorseReport(betti, tuple(cells), chi_betti, chi_cells, weak)


def diagram_to_csv(diagram: PersistenceDiagram) -> str:
    lines = ["degree,birth,death,multiplicity"]
    for p in diagram.pairs:
        lines.append(
            f"{p.degree},{format_float(p.birth)},{format_float(p.death)},{p.multiplicity}"
        )
    return "\n".join(lines) + "\n"


def write_diagram(diagram: PersistenceDiagram, path) -> None:
    Path(path).write_text(diagram_to_csv(diagram), encoding="utf-8")


def diagram_from_csv(text: str) -> PersistenceDiagram:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "degree,birth,death,multiplicity":
        raise FormatError("bad diagram CSV header")
    pairs = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 4:
            raise FormatError(f"diagram CSV line {i}: expected 4 fields, got {len(parts)}")
        try:
            pairs.append(
                PersistencePair(int(parts[0]), float(parts[1]), float(parts[2]), int(parts[3]))
            )
        except ValueError as exc:
            raise FormatError(f"diagram CSV line {i}: {exc}") from exc
    return PersistenceDiagram.from_pairs(pairs, reduced=True)


def read_diagram(path) -> PersistenceDiagram:
    return diagram_from_csv(Path(path).read_text(encoding="utf-8"))
