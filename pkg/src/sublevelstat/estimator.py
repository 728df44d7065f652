"""Sup-norm minimax kernel regression on the supported manifolds.

The estimator is piecewise constant on the nearest-center partition of the
manifold: centers are an (asymptotically) equidistant subset of the design
points, and each cell value is a kernel-weighted average of all responses,
with kernel ``(1 - (kappa * rho)^beta)_+`` supported on the closed geodesic
ball of radius 1/kappa.  Rate, bandwidth and center-count follow the
closed forms

    psi_n   = (log n / n)^(beta / (2 beta + d))
    C0      = L^(d/(2b+d)) * (sigma^2 vol(M) (b+d) d^2 / (vol(S^(d-1)) b^2))^(b/(2b+d))
    kappa   = (C0 psi_n / L)^(-1/beta)
    m       = floor(C1 * (L (2b+d) / (delta C0 d psi_n))^(d/beta)),  C1 = d vol(M) / vol(S^(d-1))

with m clamped to [1, n].

Sample CSV format: header ``x1,x2[,x3],y`` (chart coordinates per manifold
variant, then the response).  Model dump: text, round-trips exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import FormatError, InvalidInputError
from .manifolds import (
    Disk,
    Manifold,
    Sphere,
    canonical_point,
    chart_width,
    equidistant_points,
    geodesic_distance,
    pairwise_distances,
    parse_manifold_token,
    random_points,
    sphere_surface_volume,
    volume,
)
from .meshing import format_float
from .rng import Stream

_CHUNK = 512  # rows per block in pairwise-distance sweeps


@dataclass(frozen=True)
class EstimatorConfig:
    beta: float  # Holder exponent in (0, 1]
    L: float  # Holder constant
    sigma: float  # noise standard deviation
    delta: float  # slack parameter of the center-count formula
    manifold: Manifold
    n: int  # sample size

    def __post_init__(self):
        if not (0.0 < self.beta <= 1.0):
            raise InvalidInputError(f"beta must be in (0, 1], got {self.beta}")
        for name in ("L", "sigma", "delta"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be positive")
        if self.n < 1:
            raise InvalidInputError(f"n must be >= 1, got {self.n}")


@dataclass(frozen=True)
class DesignSample:
    points: np.ndarray  # (n, chart width)
    responses: np.ndarray  # (n,)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        ys = np.asarray(self.responses, dtype=float)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "responses", ys)
        if len(pts) != len(ys):
            raise InvalidInputError("points/responses length mismatch")
        if not np.all(np.isfinite(ys)):
            raise InvalidInputError("responses must be finite")

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class EstimatorModel:
    """Fitted piecewise-constant regression function."""

    centers: np.ndarray  # (m, chart width), pairwise distinct
    cell_values: np.ndarray  # (m,)
    kappa: float
    config: EstimatorConfig

    def __post_init__(self):
        if len(self.centers) < 1:
            raise InvalidInputError("model needs at least one center")
        if len(self.centers) != len(self.cell_values):
            raise InvalidInputError("centers/values length mismatch")
        if not self.kappa > 0:
            raise InvalidInputError("kappa must be positive")
        if not np.all(np.isfinite(self.cell_values)):
            raise InvalidInputError("cell values must be finite")

    @property
    def m(self) -> int:
        return len(self.centers)


def psi_from_ratio(ratio: float, beta: float, d: int) -> float:
    """The rate map ratio -> ratio^(beta/(2 beta + d))."""
    if ratio <= 0:
        raise InvalidInputError(f"ratio must be positive, got {ratio}")
    return ratio ** (beta / (2.0 * beta + d))


def rate_psi(n: int, beta: float, d: int) -> float:
    """Sup-norm minimax rate (log n / n)^(beta/(2 beta + d))."""
    if n < 2:
        raise InvalidInputError(f"rate needs n >= 2, got {n}")
    return psi_from_ratio(math.log(n) / n, beta, d)


def constant_c0(cfg: EstimatorConfig) -> float:
    """Sharp constant of the sup-norm risk."""
    d = cfg.manifold.dim
    beta = cfg.beta
    inner = (
        cfg.sigma ** 2
        * volume(cfg.manifold)
        * (beta + d)
        * d ** 2
        / (sphere_surface_volume(d) * beta ** 2)
    )
    return cfg.L ** (d / (2.0 * beta + d)) * inner ** (beta / (2.0 * beta + d))


def bandwidth_kappa(cfg: EstimatorConfig, psi: float) -> float:
    """Kernel bandwidth kappa = (C0 psi / L)^(-1/beta)."""
    if not (0.0 < psi <= 1.0):
        raise InvalidInputError(f"psi must be in (0, 1], got {psi}")
    return (constant_c0(cfg) * psi / cfg.L) ** (-1.0 / cfg.beta)


def covering_constant_c1(manifold: Manifold) -> float:
    """Covering constant d * vol(M) / vol(S^(d-1))."""
    return manifold.dim * volume(manifold) / sphere_surface_volume(manifold.dim)


def center_count_m(cfg: EstimatorConfig, psi: float) -> int:
    """Number of partition centers, clamped to [1, n]."""
    if not (0.0 < psi <= 1.0):
        raise InvalidInputError(f"psi must be in (0, 1], got {psi}")
    d = cfg.manifold.dim
    beta = cfg.beta
    inner = cfg.L * (2.0 * beta + d) / (cfg.delta * constant_c0(cfg) * d * psi)
    raw = covering_constant_c1(cfg.manifold) * inner ** (d / beta)
    if not math.isfinite(raw) or raw >= cfg.n:
        return cfg.n
    return max(1, int(math.floor(raw)))


def kernel_weight(kappa: float, beta: float, center, w, manifold: Manifold) -> float:
    """Kernel value (1 - (kappa * rho(center, w))^beta)_+ in [0, 1]."""
    rho = geodesic_distance(manifold, center, w)
    return max(0.0, 1.0 - (kappa * rho) ** beta)


def _chunked_distances(manifold: Manifold, a: np.ndarray, b: np.ndarray, consume):
    """Apply ``consume(start, block)`` to row blocks of the distance matrix."""
    for start in range(0, len(a), _CHUNK):
        block = pairwise_distances(manifold, a[start:start + _CHUNK], b)
        consume(start, block)


def _nearest_indices(manifold: Manifold, queries: np.ndarray, targets: np.ndarray) -> np.ndarray:
    out = np.empty(len(queries), dtype=int)

    def consume(start, block):
        out[start:start + len(block)] = np.argmin(block, axis=1)

    _chunked_distances(manifold, queries, targets, consume)
    return out


def fit(cfg: EstimatorConfig, sample: DesignSample) -> EstimatorModel:
    """Fit the piecewise-constant kernel estimator to a design sample.

    Parameters
    ----------
    cfg : EstimatorConfig
        Smoothness class (beta, L), noise level, slack delta, manifold and
        the expected sample size n (must match the sample).
    sample : DesignSample
        Design points on the manifold with their responses; n >= 2.

    Returns
    -------
    EstimatorModel
        Centers are the ideal equidistant layout snapped to nearest design
        points (duplicates dropped, reducing m); each cell value is the
        kernel-weighted average of all n responses.  A center whose kernel
        support captures no design point falls back to the response of the
        design point nearest to it, so no cell is ever undefined.
    """
    n = len(sample)
    if n < 2:
        raise InvalidInputError(f"fit needs at least 2 samples, got {n}")
    if n != cfg.n:
        raise InvalidInputError(f"config expects n={cfg.n} but the sample has {n} rows")
    manifold = cfg.manifold
    pts = np.array([canonical_point(manifold, p) for p in sample.points])
    ys = sample.responses

    psi = rate_psi(n, cfg.beta, manifold.dim)
    kappa = bandwidth_kappa(cfg, psi)
    m = center_count_m(cfg, psi)

    ideal = np.array(equidistant_points(manifold, m))
    snapped = _nearest_indices(manifold, ideal, pts)
    seen: set[int] = set()
    center_ids = []
    for i in snapped:
        i = int(i)
        if i not in seen:
            seen.add(i)
            center_ids.append(i)
    centers = pts[center_ids]

    numer = np.zeros(len(centers))
    denom = np.zeros(len(centers))

    def consume(start, block):
        w = 1.0 - (kappa * block) ** cfg.beta
        np.clip(w, 0.0, None, out=w)
        numer[start:start + len(block)] = w @ ys
        denom[start:start + len(block)] = w.sum(axis=1)

    _chunked_distances(manifold, centers, pts, consume)

    values = np.zeros(len(centers))
    covered = denom > 0.0
    values[covered] = numer[covered] / denom[covered]
    if not covered.all():
        fallback = _nearest_indices(manifold, centers[~covered], pts)
        values[~covered] = ys[fallback]
    return EstimatorModel(centers, values, kappa, cfg)


def predict(model: EstimatorModel, points: np.ndarray) -> np.ndarray:
    """Evaluate the fitted function at many points (vectorized)."""
    points = np.asarray(points, dtype=float)
    cells = _nearest_indices(model.config.manifold, points, model.centers)
    return model.cell_values[cells]


def evaluate(model: EstimatorModel, x) -> float:
    """Value at a single point: the nearest center's cell value.

    Ties go to the lowest center index.
    """
    p = canonical_point(model.config.manifold, x)
    return float(predict(model, np.array([p]))[0])


def sup_norm_error(
    model: EstimatorModel, truth: Callable, probes: Sequence
) -> float:
    """Max |f_hat - truth| over the probe set (a declared discretization).

    Callers typically pass mesh vertices plus triangle barycenters; probe
    density controls the gap to the true supremum.
    """
    probes = np.asarray(probes, dtype=float)
    if len(probes) == 0:
        raise InvalidInputError("sup_norm_error needs a nonempty probe set")
    fitted = predict(model, probes)
    true_vals = np.array([truth(tuple(p)) for p in probes])
    return float(np.max(np.abs(fitted - true_vals)))


def holder_check(
    f: Callable,
    manifold: Manifold,
    beta: float,
    L: float,
    trials: int,
    seed: int,
) -> tuple[bool, float]:
    """Sample random point pairs and report the max |df| / rho^beta ratio.

    Returns (all ratios <= L, max observed ratio); coincident draws are
    skipped.
    """
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    stream = Stream(seed)
    max_ratio = 0.0
    for _ in range(trials):
        x, z = random_points(manifold, 2, stream)
        rho = geodesic_distance(manifold, x, z)
        if rho <= 0.0:
            continue
        ratio = abs(f(x) - f(z)) / rho ** beta
        if ratio > max_ratio:
            max_ratio = ratio
    return max_ratio <= L * (1.0 + 1e-9), max_ratio


def _sample_header(manifold: Manifold) -> str:
    return {2: "x1,x2,y", 3: "x1,x2,x3,y"}[chart_width(manifold)]


def sample_to_csv(manifold: Manifold, sample: DesignSample) -> str:
    lines = [_sample_header(manifold)]
    for p, y in zip(sample.points, sample.responses):
        lines.append(",".join(format_float(c) for c in p) + "," + format_float(y))
    return "\n".join(lines) + "\n"


def write_sample(manifold: Manifold, sample: DesignSample, path) -> None:
    Path(path).write_text(sample_to_csv(manifold, sample), encoding="utf-8")


def sample_from_csv(text: str, manifold: Manifold) -> DesignSample:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != _sample_header(manifold):
        raise FormatError(
            f"bad sample header: expected {_sample_header(manifold)!r}"
        )
    width = chart_width(manifold)
    pts, ys = [], []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != width + 1:
            raise FormatError(f"sample CSV line {i}: expected {width + 1} fields")
        try:
            pts.append(canonical_point(manifold, [float(t) for t in parts[:width]]))
            ys.append(float(parts[width]))
        except ValueError as exc:
            raise FormatError(f"sample CSV line {i}: {exc}") from exc
    return DesignSample(np.array(pts), np.array(ys))


def read_sample(path, manifold: Manifold) -> DesignSample:
    return sample_from_csv(Path(path).read_text(encoding="utf-8"), manifold)


def _manifold_token(manifold: Manifold) -> str:
    if isinstance(manifold, Disk):
        return f"disk {format_float(manifold.radius)}"
    if isinstance(manifold, Sphere):
        return "sphere"
    return f"torus {format_float(manifold.l1)} {format_float(manifold.l2)}"


def model_to_text(model: EstimatorModel) -> str:
    cfg = model.config
    lines = [
        "sublevelstat-model v1",
        f"manifold {_manifold_token(cfg.manifold)}",
        f"beta {format_float(cfg.beta)}",
        f"L {format_float(cfg.L)}",
        f"sigma {format_float(cfg.sigma)}",
        f"delta {format_float(cfg.delta)}",
        f"n {cfg.n}",
        f"kappa {format_float(model.kappa)}",
        f"centers {model.m}",
    ]
    for c, v in zip(model.centers, model.cell_values):
        lines.append(" ".join(format_float(x) for x in c) + " " + format_float(v))
    return "\n".join(lines) + "\n"


def write_model(model: EstimatorModel, path) -> None:
    Path(path).write_text(model_to_text(model), encoding="utf-8")


def model_from_text(text: str) -> EstimatorModel:
    lines = text.splitlines()
    if not lines or lines[0] != "sublevelstat-model v1":
        raise FormatError("bad model header")
    fields: dict[str, list[str]] = {}
    for line in lines[1:9]:
        tokens = line.split()
        fields[tokens[0]] = tokens[1:]
    try:
        manifold = parse_manifold_token(fields["manifold"])
        cfg = EstimatorConfig(
            float(fields["beta"][0]),
            float(fields["L"][0]),
            float(fields["sigma"][0]),
            float(fields["delta"][0]),
            manifold,
            int(fields["n"][0]),
        )
        kappa = float(fields["kappa"][0])
        m = int(fields["centers"][0])
        rows = [[float(t) for t in lines[9 + i].split()] for i in range(m)]
    except (KeyError, IndexError, ValueError) as exc:
        raise FormatError(f"malformed model file: {exc}") from exc
    centers = np.array([r[:-1] for r in rows])
    values = np.array([r[-1] for r in rows])
    return EstimatorModel(centers, values, kappa, cfg)


def read_model(path) -> EstimatorModel:
    return model_from_text(Path(path).read_text(encoding="utf-8"))
