"""Command-line interface.

Subcommands: ``mesh``, ``diagram``, ``bottleneck``, ``estimate``,
``experiment``.  Global flags: ``--seed`` (overrides plan/base seeds),
``--out`` (directory that relative output paths are joined to), and
``--threads`` (replicate concurrency; any value reproduces the
single-thread output byte for byte).

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .bottleneck import bottleneck_all_degrees, bottleneck_distance
from .errors import InvalidInputError
from .estimator import (
    EstimatorConfig,
    fit,
    predict,
    read_sample,
    write_model,
)
from .experiment import parse_fixture, read_plan, run_experiment, write_outputs
from .filtration import VertexField, lower_star_filtration, read_field, write_field
from .manifolds import Disk, Sphere, Torus
from .meshing import format_float, read_mesh, triangulate, write_mesh
from .persistence import compute_persistence, read_diagram, write_diagram
from .synth import eval_function_many


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sublevelstat",
        description="Sublevel-set persistence and sup-norm kernel regression "
        "on triangulated manifolds.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--seed", type=int, default=None, help="override the base seed")
    parser.add_argument("--out", default=".", help="base directory for relative output paths")
    parser.add_argument("--threads", type=int, default=1, help="replicate concurrency")
    sub = parser.add_subparsers(dest="command", required=True)

    p_mesh = sub.add_parser("mesh", help="triangulate a manifold and write the mesh file")
    p_mesh.add_argument("variant", choices=["disk", "sphere", "torus"])
    p_mesh.add_argument("resolution", type=int)
    p_mesh.add_argument("outfile")
    p_mesh.add_argument("--radius", type=float, default=10.0, help="disk radius")
    p_mesh.add_argument("--l1", type=float, default=1.0, help="torus side length 1")
    p_mesh.add_argument("--l2", type=float, default=1.0, help="torus side length 2")

    p_diag = sub.add_parser("diagram", help="persistence diagram of a vertex field")
    p_diag.add_argument("mesh")
    p_diag.add_argument("outfile")
    src = p_diag.add_mutually_exclusive_group(required=True)
    src.add_argument("--field", help="vertex-field file (hash-checked against the mesh)")
    src.add_argument(
        "--function",
        nargs="+",
        help="fixture to evaluate at the vertices: twobump | unimodal H [W] "
        "| constant C | file PATH",
    )
    p_diag.add_argument("--svg", help="also render a birth/death scatter figure")

    p_btl = sub.add_parser("bottleneck", help="bottleneck distance between two diagram files")
    p_btl.add_argument("diagram_a")
    p_btl.add_argument("diagram_b")
    p_btl.add_argument("--degree", type=int, default=None)

    p_est = sub.add_parser("estimate", help="fit the kernel estimator to a sample CSV")
    p_est.add_argument("sample")
    p_est.add_argument("mesh")
    p_est.add_argument("model_out")
    p_est.add_argument("field_out", help="fitted values at the mesh vertices")
    p_est.add_argument("--beta", type=float, default=1.0)
    p_est.add_argument("--holder-l", "--L", dest="holder_l", type=float, default=1.0)
    p_est.add_argument("--sigma", type=float, default=0.3)
    p_est.add_argument("--delta", type=float, default=0.1)

    p_exp = sub.add_parser("experiment", help="run a Monte Carlo experiment plan")
    p_exp.add_argument("plan")
    return parser


def _resolve(base: str, path: str) -> Path:
    p = Path(path)
    return p if p.is_absolute() else Path(base) / p


def _cmd_mesh(args) -> int:
    if args.variant == "disk":
        manifold = Disk(args.radius)
    elif args.variant == "sphere":
        manifold = Sphere()
    else:
        manifold = Torus(args.l1, args.l2)
    mesh = triangulate(manifold, args.resolution)
    out = _resolve(args.out, args.outfile)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_mesh(mesh, out)
    print(f"wrote {out} (V={mesh.vertex_count} E={mesh.edge_count} F={mesh.face_count})")
    return 0


def _cmd_diagram(args) -> int:
    mesh = read_mesh(args.mesh)
    if args.field:
        fld = read_field(args.field, mesh)
    else:
        spec = parse_fixture(args.function, mesh.manifold)
        fld = VertexField(mesh, eval_function_many(spec, mesh.vertices))
    diagram = compute_persistence(lower_star_filtration(fld))
    out = _resolve(args.out, args.outfile)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_diagram(diagram, out)
    print(f"wrote {out} ({diagram.total_points()} classes)")
    if args.svg:
        from .plots import save_diagram_figure

        svg = _resolve(args.out, args.svg)
        svg.parent.mkdir(parents=True, exist_ok=True)
        save_diagram_figure(diagram, svg)
        print(f"wrote {svg}")
    return 0


def _cmd_bottleneck(args) -> int:
    a = read_diagram(args.diagram_a)
    b = read_diagram(args.diagram_b)
    if args.degree is not None:
        value = bottleneck_distance(a, b, args.degree)
        print(f"{args.degree}\t{format_float(value)}")
        print(f"max\t{format_float(value)}")
        return 0
    per_degree, overall = bottleneck_all_degrees(a, b)
    for k, value in per_degree:
        print(f"{k}\t{format_float(value)}")
    print(f"max\t{format_float(overall)}")
    return 0


def _cmd_estimate(args) -> int:
    mesh = read_mesh(args.mesh)
    sample = read_sample(args.sample, mesh.manifold)
    cfg = EstimatorConfig(
        args.beta, args.holder_l, args.sigma, args.delta, mesh.manifold, len(sample)
    )
    model = fit(cfg, sample)
    model_out = _resolve(args.out, args.model_out)
    field_out = _resolve(args.out, args.field_out)
    model_out.parent.mkdir(parents=True, exist_ok=True)
    field_out.parent.mkdir(parents=True, exist_ok=True)
    write_model(model, model_out)
    write_field(VertexField(mesh, predict(model, mesh.vertices)), field_out)
    print(f"wrote {model_out} (m={model.m} centers) and {field_out}")
    return 0


def _cmd_experiment(args) -> int:
    plan = read_plan(args.plan)
    if args.seed is not None:
        plan = replace(plan, seed=args.seed)
    out_dir = _resolve(args.out, plan.out_dir)
    records = run_experiment(plan, threads=max(1, args.threads))
    paths = write_outputs(plan, records, out_dir)
    print(f"wrote {paths['records']}, {paths['summary']}, {paths['figure']}")
    return 0


_HANDLERS = {
    "mesh": _cmd_mesh,
    "diagram": _cmd_diagram,
    "bottleneck": _cmd_bottleneck,
    "estimate": _cmd_estimate,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (InvalidInputError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
