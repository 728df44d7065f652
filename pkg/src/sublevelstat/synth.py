"""Test-function fixtures, design sampling, and noise injection.

The two-bump disk fixture is a calibrated sum of two smooth radial bumps
(profile (1 - t^2)^2 on [0, 1]) whose degree-1 reduced diagram has exactly
two classes: a long-lived one born at 0 and dying at the global max 2, and
a short-lived one born at the saddle between the bumps and dying at the
secondary peak.  The calibration (and its three display levels showing the
1 / 2 / 1 hole-count pattern) is declared here, not derived from anything.

Kernel-shaped bumps with exponent beta in (0, 1] form the adversarial
mixture class: height * (1 - (rho / width)^beta)_+, whose exact Holder
constant is height / width^beta.

Function file format (text, key-value lines) starts with
``sublevelstat-function v1`` and a ``manifold`` line; see ``write_function``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .errors import FormatError, InvalidInputError
from .manifolds import (
    Disk,
    Manifold,
    Sphere,
    canonical_point,
    equidistant_points,
    geodesic_distance,
    pairwise_distances,
    parse_manifold_token,
    random_points,
)
from .meshing import format_float
from .rng import Stream

# max |phi'| of the smooth profile (1 - t^2)^2, attained at t = 1/sqrt(3)
_PROFILE_SLOPE = 8.0 / (3.0 * math.sqrt(3.0))


def _smooth_profile(t: np.ndarray) -> np.ndarray:
    t = np.minimum(np.abs(t), 1.0)
    return (1.0 - t * t) ** 2


@dataclass(frozen=True)
class BumpSpec:
    """Kernel-shaped bump: height * (1 - (rho/width)^beta)_+."""

    center: tuple
    height: float
    width: float
    beta: float = 1.0

    def __post_init__(self):
        if not self.width > 0:
            raise InvalidInputError("bump width must be positive")
        if not (0.0 < self.beta <= 1.0):
            raise InvalidInputError(f"bump exponent must be in (0, 1], got {self.beta}")

    def holder_constant(self) -> float:
        """Exact Holder-beta constant |height| / width^beta."""
        return abs(self.height) / self.width ** self.beta


@dataclass(frozen=True)
class TwoBump:
    """Calibrated two-bump disk fixture with global max 2."""

    manifold: Disk = field(default_factory=lambda: Disk(10.0))

    # calibration: centers, heights, widths of the two smooth bumps
    CENTER_1 = (-2.5, 0.0)
    HEIGHT_1 = 2.0
    WIDTH_1 = 7.0
    CENTER_2 = (4.0, 0.0)
    HEIGHT_2 = 1.36
    WIDTH_2 = 3.2
    # display levels with sublevel hole counts 1, 2, 1 (between the degree-1
    # critical values: birth 0 / saddle / secondary peak / global max)
    DISPLAY_LEVELS = (0.9, 1.25, 1.7)

    def __post_init__(self):
        if not isinstance(self.manifold, Disk):
            raise InvalidInputError("the two-bump fixture lives on a disk")

    def holder(self) -> tuple[float, float]:
        b1 = self.HEIGHT_1 * _PROFILE_SLOPE / self.WIDTH_1
        b2 = self.HEIGHT_2 * _PROFILE_SLOPE / self.WIDTH_2
        return 1.0, math.ceil((b1 + b2) * 100.0) / 100.0


@dataclass(frozen=True)
class UnimodalRadial:
    """Single smooth radial bump; max ``height`` at ``center``, min 0."""

    manifold: Manifold
    height: float
    center: tuple = None
    width: float = None

    def __post_init__(self):
        if self.center is None:
            object.__setattr__(self, "center", _default_center(self.manifold))
        else:
            object.__setattr__(
                self, "center", canonical_point(self.manifold, self.center)
            )
        if self.width is None:
            object.__setattr__(self, "width", _default_width(self.manifold))
        if not self.width > 0:
            raise InvalidInputError("width must be positive")

    def holder(self) -> tuple[float, float]:
        L = abs(self.height) * _PROFILE_SLOPE / self.width
        return 1.0, math.ceil(L * 100.0) / 100.0


@dataclass(frozen=True)
class BumpMixture:
    """Linear combination sum_j theta_j * bump_j with |theta_j| <= 1."""

    manifold: Manifold
    bumps: tuple  # tuple of BumpSpec
    thetas: tuple
    disjoint: bool = False

    def __post_init__(self):
        if len(self.bumps) != len(self.thetas):
            raise InvalidInputError("bumps/thetas length mismatch")
        if any(abs(t) > 1.0 for t in self.thetas):
            raise InvalidInputError("mixture coefficients must satisfy |theta| <= 1")
        for b in self.bumps:
            canonical_point(self.manifold, b.center)
        if self.disjoint:
            for i, bi in enumerate(self.bumps):
                for bj in self.bumps[i + 1:]:
                    gap = geodesic_distance(self.manifold, bi.center, bj.center)
                    if gap <= bi.width + bj.width:
                        raise InvalidInputError(
                            "mixture flagged disjoint but supports overlap"
                        )

    def holder(self) -> tuple[float, float]:
        beta = min(b.beta for b in self.bumps) if self.bumps else 1.0
        L = sum(abs(t) * b.holder_constant() for t, b in zip(self.thetas, self.bumps))
        return beta, max(L, 1e-12)


@dataclass(frozen=True)
class ConstantFn:
    manifold: Manifold
    value: float

    def holder(self) -> tuple[float, float]:
        return 1.0, 1e-12


FunctionSpec = Union[TwoBump, UnimodalRadial, BumpMixture, ConstantFn]


def _default_center(manifold: Manifold) -> tuple:
    if isinstance(manifold, Disk):
        return (0.0, 0.0)
    if isinstance(manifold, Sphere):
        return (0.0, 0.0, 1.0)
    return (0.0, 0.0)


def _default_width(manifold: Manifold) -> float:
    if isinstance(manifold, Disk):
        return manifold.radius
    if isinstance(manifold, Sphere):
        return math.pi
    return min(manifold.l1, manifold.l2) / 2.0


def eval_function_many(spec: FunctionSpec, points: np.ndarray) -> np.ndarray:
    """Evaluate a fixture at an array of chart points (vectorized)."""
    points = np.asarray(points, dtype=float)
    if isinstance(spec, ConstantFn):
        return np.full(len(points), float(spec.value))
    if isinstance(spec, TwoBump):
        c1 = np.array([spec.CENTER_1])
        c2 = np.array([spec.CENTER_2])
        d1 = pairwise_distances(spec.manifold, points, c1)[:, 0]
        d2 = pairwise_distances(spec.manifold, points, c2)[:, 0]
        return spec.HEIGHT_1 * _smooth_profile(d1 / spec.WIDTH_1) + spec.HEIGHT_2 * _smooth_profile(d2 / spec.WIDTH_2)
    if isinstance(spec, UnimodalRadial):
        c = np.array([spec.center])
        d = pairwise_distances(spec.manifold, points, c)[:, 0]
        return spec.height * _smooth_profile(d / spec.width)
    out = np.zeros(len(points))
    for theta, bump in zip(spec.thetas, spec.bumps):
        d = pairwise_distances(spec.manifold, points, np.array([bump.center]))[:, 0]
        t = d / bump.width
        out += theta * bump.height * np.clip(1.0 - t ** bump.beta, 0.0, None)
    return out


def eval_function(spec: FunctionSpec, x) -> float:
    """Evaluate a fixture at one chart point; off-manifold points error."""
    p = canonical_point(spec.manifold, x)
    return float(eval_function_many(spec, np.array([p]))[0])


def function_holder(spec: FunctionSpec) -> tuple[float, float]:
    """Declared (beta, L) the fixture is guaranteed to satisfy."""
    return spec.holder()


def sample_design(
    manifold: Manifold, n: int, scheme: str, seed: int = 0
) -> list[tuple]:
    """Design points: deterministic equidistant layout or seeded uniforms."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if scheme == "equidistant":
        return equidistant_points(manifold, n)
    if scheme == "uniform-random":
        return random_points(manifold, n, Stream(seed))
    raise InvalidInputError(f"unknown design scheme {scheme!r}")


def add_noise(values: Sequence[float], sigma: float, seed: int) -> list[float]:
    """Add independent N(0, sigma^2) draws from the documented stream."""
    if sigma < 0:
        raise InvalidInputError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return [float(v) for v in values]
    stream = Stream(seed)
    return [float(v) + sigma * stream.gaussian() for v in values]


def _manifold_tokens(manifold: Manifold) -> str:
    if isinstance(manifold, Disk):
        return f"disk {format_float(manifold.radius)}"
    if isinstance(manifold, Sphere):
        return "sphere"
    return f"torus {format_float(manifold.l1)} {format_float(manifold.l2)}"


def function_to_text(spec: FunctionSpec) -> str:
    lines = ["sublevelstat-function v1", f"manifold {_manifold_tokens(spec.manifold)}"]
    if isinstance(spec, TwoBump):
        lines.append("kind twobump")
    elif isinstance(spec, ConstantFn):
        lines.append("kind constant")
        lines.append(f"value {format_float(spec.value)}")
    elif isinstance(spec, UnimodalRadial):
        lines.append("kind unimodal")
        lines.append(f"height {format_float(spec.height)}")
        lines.append(f"width {format_float(spec.width)}")
        lines.append("center " + " ".join(format_float(c) for c in spec.center))
    else:
        lines.append("kind mixture")
        lines.append(f"disjoint {'true' if spec.disjoint else 'false'}")
        for theta, b in zip(spec.thetas, spec.bumps):
            lines.append(
                "bump "
                + " ".join(
                    [
                        format_float(theta),
                        format_float(b.height),
                        format_float(b.width),
                        format_float(b.beta),
                    ]
                    + [format_float(c) for c in b.center]
                )
            )
    return "\n".join(lines) + "\n"


def write_function(spec: FunctionSpec, path) -> None:
    Path(path).write_text(function_to_text(spec), encoding="utf-8")


def function_from_text(text: str) -> FunctionSpec:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "sublevelstat-function v1":
        raise FormatError("bad function header")
    keyed: dict[str, list[str]] = {}
    bumps_raw = []
    for line in lines[1:]:
        tokens = line.split()
        if tokens[0] == "bump":
            bumps_raw.append(tokens[1:])
        else:
            keyed[tokens[0]] = tokens[1:]
    try:
        manifold = parse_manifold_token(keyed["manifold"])
        kind = keyed["kind"][0]
        if kind == "twobump":
            return TwoBump(manifold)
        if kind == "constant":
            return ConstantFn(manifold, float(keyed["value"][0]))
        if kind == "unimodal":
            return UnimodalRadial(
                manifold,
                float(keyed["height"][0]),
                tuple(float(t) for t in keyed["center"]),
                float(keyed["width"][0]),
            )
        if kind == "mixture":
            disjoint = keyed.get("disjoint", ["false"])[0] == "true"
            thetas = tuple(float(r[0]) for r in bumps_raw)
            bumps = tuple(
                BumpSpec(tuple(float(t) for t in r[4:]), float(r[1]), float(r[2]), float(r[3]))
                for r in bumps_raw
            )
            return BumpMixture(manifold, bumps, thetas, disjoint)
    except (KeyError, IndexError, ValueError) as exc:
        raise FormatError(f"malformed function file: {exc}") from exc
    raise FormatError(f"unknown function kind {kind!r}")


def read_function(path) -> FunctionSpec:
    return function_from_text(Path(path).read_text(encoding="utf-8"))
