"""Monte Carlo harness for the bottleneck-risk convergence experiment.

For each (n, replicate) the harness samples a design, adds Gaussian noise,
fits the estimator, computes the lower-star diagrams of the fitted and true
vertex fields on a shared mesh, and records the sup-norm error and the
bottleneck distances.  Every record is checked against the stability bound
d_B <= sup-norm error: both sides are computed from the same vertex
restriction, so a violation is an implementation bug and aborts the run.

Replicates run concurrently but output is independent of scheduling:
per-replicate seeds are derived from (base seed, n, replicate) and records
are written in sorted order.

Plan file: ``key = value`` lines, ``#`` comments.  Keys: manifold,
resolution, fixture, beta, L, sigma, delta, design, sizes, replicates,
seed, out.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bottleneck import bottleneck_all_degrees
from .errors import FormatError, InvalidInputError
from .estimator import (
    DesignSample,
    EstimatorConfig,
    constant_c0,
    fit,
    predict,
    rate_psi,
)
from .filtration import VertexField, lower_star_filtration
from .manifolds import Manifold, parse_manifold_token
from .meshing import format_float, triangulate
from .persistence import compute_persistence
from .rng import derive_seed
from .synth import (
    ConstantFn,
    FunctionSpec,
    TwoBump,
    UnimodalRadial,
    add_noise,
    eval_function_many,
    read_function,
    sample_design,
)

STABILITY_SLACK = 1e-9


@dataclass(frozen=True)
class ExperimentPlan:
    manifold: Manifold
    fixture: FunctionSpec
    resolution: int
    sizes: tuple  # strictly increasing sample sizes
    replicates: int
    seed: int
    out_dir: str
    beta: float = 1.0
    L: float = 1.0
    sigma: float = 0.3
    delta: float = 0.1
    design: str = "equidistant"

    def __post_init__(self):
        if self.replicates < 1:
            raise InvalidInputError("replicates must be >= 1")
        if not self.sizes or any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise InvalidInputError("sample sizes must be strictly increasing")
        if any(n < 2 for n in self.sizes):
            raise InvalidInputError("sample sizes must be >= 2")


@dataclass(frozen=True)
class ExperimentRecord:
    n: int
    replicate: int
    seed: int
    sup_norm_error: float
    bottleneck: dict  # degree -> distance
    bottleneck_max: float
    c0_psi: float
    stability_ok: bool


def parse_fixture(tokens: list[str], manifold: Manifold) -> FunctionSpec:
    """Fixture syntax: twobump | unimodal <height> [width] | constant <c> |
    file <path>."""
    if not tokens:
        raise FormatError("empty fixture description")
    kind = tokens[0]
    try:
        if kind == "twobump":
            return TwoBump(manifold)
        if kind == "unimodal":
            width = float(tokens[2]) if len(tokens) > 2 else None
            return UnimodalRadial(manifold, float(tokens[1]), width=width)
        if kind == "constant":
            return ConstantFn(manifold, float(tokens[1]))
        if kind == "file":
            return read_function(tokens[1])
    except (IndexError, ValueError) as exc:
        raise FormatError(f"malformed fixture description {tokens!r}") from exc
    raise FormatError(f"unknown fixture kind {kind!r}")


def read_plan(path) -> ExperimentPlan:
    keyed: dict[str, str] = {}
    for i, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"plan line {i}: expected key = value, got {raw!r}")
        key, value = line.split("=", 1)
        keyed[key.strip()] = value.strip()
    try:
        manifold = parse_manifold_token(keyed["manifold"].split())
        fixture = parse_fixture(keyed["fixture"].split(), manifold)
        sizes = tuple(int(t) for t in keyed["sizes"].replace(",", " ").split())
        plan = ExperimentPlan(
            manifold=manifold,
            fixture=fixture,
            resolution=int(keyed["resolution"]),
            sizes=sizes,
            replicates=int(keyed["replicates"]),
            seed=int(keyed["seed"]),
            out_dir=keyed.get("out", "."),
            beta=float(keyed.get("beta", "1.0")),
            L=float(keyed.get("L", "1.0")),
            sigma=float(keyed.get("sigma", "0.3")),
            delta=float(keyed.get("delta", "0.1")),
            design=keyed.get("design", "equidistant"),
        )
    except KeyError as exc:
        raise FormatError(f"plan missing required key {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise FormatError(f"malformed plan value: {exc}") from exc
    return plan


class StabilityViolation(RuntimeError):
    """d_B exceeded the sup-norm bound: by the stability theorem this can
    only come from an implementation bug, so the experiment aborts."""


def _run_replicate(plan, mesh, probes, truth_at_probes, truth_diag, n, rep):
    design_seed = derive_seed(plan.seed, n, rep, 0)
    noise_seed = derive_seed(plan.seed, n, rep, 1)
    pts = np.array(sample_design(plan.manifold, n, plan.design, design_seed))
    clean = eval_function_many(plan.fixture, pts)
    ys = np.array(add_noise(clean, plan.sigma, noise_seed))
    cfg = EstimatorConfig(plan.beta, plan.L, plan.sigma, plan.delta, plan.manifold, n)
    model = fit(cfg, DesignSample(pts, ys))

    fitted_field = VertexField(mesh, predict(model, mesh.vertices))
    diagram = compute_persistence(lower_star_filtration(fitted_field))
    per_degree, overall = bottleneck_all_degrees(diagram, truth_diag)

    sup_err = float(np.max(np.abs(predict(model, probes) - truth_at_probes)))
    c0_psi = constant_c0(cfg) * rate_psi(n, plan.beta, plan.manifold.dim)
    ok = overall <= sup_err + STABILITY_SLACK
    record = ExperimentRecord(
        n, rep, noise_seed, sup_err, dict(per_degree), overall, c0_psi, ok
    )
    if not ok:
        raise StabilityViolation(
            f"stability bound violated at n={n} replicate={rep}: "
            f"d_B={overall!r} > sup-norm={sup_err!r} + {STABILITY_SLACK}; "
            f"degrees={dict(per_degree)!r}, seed={noise_seed}"
        )
    return record


def run_experiment(plan: ExperimentPlan, threads: int = 1) -> list[ExperimentRecord]:
    """Run all replicates; result order is (n, replicate) regardless of
    thread count."""
    mesh = triangulate(plan.manifold, plan.resolution)
    probes = np.vstack([mesh.vertices, mesh.barycenters()])
    truth_at_probes = eval_function_many(plan.fixture, probes)
    truth_field = VertexField(mesh, truth_at_probes[: mesh.vertex_count])
    truth_diag = compute_persistence(lower_star_filtration(truth_field))

    jobs = [(n, rep) for n in plan.sizes for rep in range(plan.replicates)]
    if threads <= 1:
        records = [
            _run_replicate(plan, mesh, probes, truth_at_probes, truth_diag, n, rep)
            for n, rep in jobs
        ]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(
                    _run_replicate, plan, mesh, probes, truth_at_probes, truth_diag, n, rep
                )
                for n, rep in jobs
            ]
            records = [f.result() for f in futures]
    records.sort(key=lambda r: (r.n, r.replicate))
    return records


def summarize(plan: ExperimentPlan, records: list[ExperimentRecord]) -> list[dict]:
    rows = []
    for n in plan.sizes:
        group = [r for r in records if r.n == n]
        mean_err = sum(r.sup_norm_error for r in group) / len(group)
        mean_db = sum(r.bottleneck_max for r in group) / len(group)
        c0_psi = group[0].c0_psi
        rows.append(
            {
                "n": n,
                "replicates": len(group),
                "mean_sup_norm_error": mean_err,
                "mean_bottleneck_max": mean_db,
                "c0_psi": c0_psi,
                "error_to_c0_psi": mean_err / c0_psi,
            }
        )
    return rows


def _degree_columns(records: list[ExperimentRecord], top_dim: int) -> list[int]:
    return list(range(top_dim + 1))


def records_to_csv(plan: ExperimentPlan, records: list[ExperimentRecord]) -> str:
    degrees = _degree_columns(records, plan.manifold.dim)
    header = ["n", "replicate", "seed", "sup_norm_error"]
    header += [f"bottleneck_{k}" for k in degrees]
    header += ["bottleneck_max", "c0_psi", "stability_ok"]
    lines = [",".join(header)]
    for r in records:
        row = [str(r.n), str(r.replicate), str(r.seed), format_float(r.sup_norm_error)]
        row += [format_float(r.bottleneck.get(k, 0.0)) for k in degrees]
        row += [
            format_float(r.bottleneck_max),
            format_float(r.c0_psi),
            "true" if r.stability_ok else "false",
        ]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def summary_to_csv(rows: list[dict]) -> str:
    header = [
        "n", "replicates", "mean_sup_norm_error", "mean_bottleneck_max",
        "c0_psi", "error_to_c0_psi",
    ]
    lines = [",".join(header)]
    for row in rows:
        lines.append(
            ",".join(
                [
                    str(row["n"]),
                    str(row["replicates"]),
                    format_float(row["mean_sup_norm_error"]),
                    format_float(row["mean_bottleneck_max"]),
                    format_float(row["c0_psi"]),
                    format_float(row["error_to_c0_psi"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_outputs(plan: ExperimentPlan, records: list[ExperimentRecord], out_dir) -> dict:
    """Write records.csv, summary.csv and convergence.png; return paths."""
    from .plots import save_convergence_figure

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = summarize(plan, records)
    paths = {
        "records": out / "records.csv",
        "summary": out / "summary.csv",
        "figure": out / "convergence.png",
    }
    paths["records"].write_text(records_to_csv(plan, records), encoding="utf-8")
    paths["summary"].write_text(summary_to_csv(rows), encoding="utf-8")
    save_convergence_figure(rows, paths["figure"])
    return paths
