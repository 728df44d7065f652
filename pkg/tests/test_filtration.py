import numpy as np
import pytest

from sublevelstat import (
    Disk,
    InvalidInputError,
    SimplicialComplex,
    Torus,
    VertexField,
    betti_numbers,
    compute_persistence,
    lower_star,
    lower_star_filtration,
    read_field,
    sublevel_complex,
    triangulate,
    write_field,
)
from sublevelstat.complexes import complex_from_mesh
from sublevelstat.errors import FormatError
from sublevelstat.filtration import Filtration
from sublevelstat.rng import Stream

EDGE = SimplicialComplex.from_simplices([(0,), (1,), (0, 1)])
PATH3 = SimplicialComplex.from_simplices([(0,), (1,), (2,), (0, 1), (1, 2)])
HOLLOW = SimplicialComplex.from_simplices([(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)])


def test_single_edge_order():
    filt = lower_star(EDGE, [0.0, 1.0])
    assert filt.simplices == ((0,), (1,), (0, 1))
    assert filt.levels == (0.0, 1.0, 1.0)


def test_tie_break_dimension_before_vertices():
    filt = lower_star(HOLLOW, [0.0, 0.0, 0.0])
    assert filt.levels == (0.0,) * 6
    assert filt.simplices == ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2))


def test_path_order_by_level_dim_lex():
    # values (0, 2, 1): vertex 0 first, then vertex 2 (value 1), then
    # vertex 1 (value 2), then both edges at level 2 in lex order
    filt = lower_star(PATH3, [0.0, 2.0, 1.0])
    assert filt.simplices == ((0,), (2,), (1,), (0, 1), (1, 2))
    assert filt.levels == (0.0, 1.0, 2.0, 2.0, 2.0)


def test_nonfinite_values_rejected():
    with pytest.raises(InvalidInputError):
        lower_star(EDGE, [0.0, float("nan")])
    mesh = triangulate(Torus(1.0, 1.0), 3)
    with pytest.raises(InvalidInputError):
        VertexField(mesh, [0.0] * (mesh.vertex_count - 1))


def test_face_order_validation():
    with pytest.raises(InvalidInputError):
        Filtration(((0, 1), (0,), (1,)), (0.0, 0.0, 0.0))
    with pytest.raises(InvalidInputError):
        Filtration(((0,), (1,), (0, 1)), (0.0, 1.0, 0.5))


def test_sublevel_empty_and_full(torus_mesh):
    stream = Stream(9)
    values = np.array([stream.uniform() for _ in range(torus_mesh.vertex_count)])
    fld = VertexField(torus_mesh, values)
    assert len(sublevel_complex(fld, values.min() - 1.0)) == 0
    full = sublevel_complex(fld, values.max())
    assert len(full) == len(complex_from_mesh(torus_mesh))


def test_prefix_property_and_monotonicity(disk_mesh):
    stream = Stream(11)
    values = np.array([stream.uniform() for _ in range(disk_mesh.vertex_count)])
    fld = VertexField(disk_mesh, values)
    filt = lower_star_filtration(fld)
    levels = sorted(set(filt.levels))
    probe_levels = levels[:: max(1, len(levels) // 8)]
    previous = set()
    for r in probe_levels:
        prefix = {s for s, lvl in zip(filt.simplices, filt.levels) if lvl <= r}
        sub = set(sublevel_complex(fld, r).all_simplices())
        assert prefix == sub
        assert previous <= sub
        previous = sub


def test_relabeling_leaves_diagram_unchanged():
    mesh = triangulate(Disk(2.0), 2)
    stream = Stream(21)
    values = np.array([stream.uniform() for _ in range(mesh.vertex_count)])
    base = compute_persistence(lower_star_filtration(VertexField(mesh, values)))

    perm = np.arange(mesh.vertex_count)
    rng = np.random.default_rng(77)
    rng.shuffle(perm)
    inverse = np.empty_like(perm)
    inverse[perm] = np.arange(mesh.vertex_count)
    remapped = mesh.triangles.copy()
    remapped = inverse[remapped]
    from sublevelstat.meshing import Mesh

    mesh2 = Mesh(mesh.manifold, mesh.vertices[perm], remapped, mesh.resolution)
    values2 = values[perm]
    relabeled = compute_persistence(lower_star_filtration(VertexField(mesh2, values2)))
    assert base.pairs == relabeled.pairs


def test_field_file_roundtrip_and_hash_mismatch(tmp_path, torus_mesh, sphere_mesh):
    stream = Stream(33)
    values = np.array([stream.uniform() for _ in range(torus_mesh.vertex_count)])
    fld = VertexField(torus_mesh, values)
    path = tmp_path / "field.txt"
    write_field(fld, path)
    back = read_field(path, torus_mesh)
    assert np.array_equal(back.values, fld.values)
    with pytest.raises(FormatError):
        read_field(path, sphere_mesh)


def test_two_bump_display_levels(disk_mesh_fine=None):
    from sublevelstat.synth import TwoBump, eval_function_many

    spec = TwoBump(Disk(10.0))
    mesh = triangulate(Disk(10.0), 16)
    fld = VertexField(mesh, eval_function_many(spec, mesh.vertices))
    holes = []
    for r in spec.DISPLAY_LEVELS:
        betti = betti_numbers(sublevel_complex(fld, r))
        holes.append(betti[1] if len(betti) > 1 else 0)
    assert holes == [1, 2, 1]
