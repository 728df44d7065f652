import math

import numpy as np
import pytest

from sublevelstat import (
    BumpMixture,
    BumpSpec,
    ConstantFn,
    Disk,
    InvalidInputError,
    Sphere,
    Torus,
    TwoBump,
    UnimodalRadial,
    VertexField,
    add_noise,
    compute_persistence,
    eval_function,
    eval_function_many,
    holder_check,
    lower_star_filtration,
    sample_design,
    triangulate,
)
from sublevelstat.synth import function_from_text, function_holder, function_to_text

DISK10 = Disk(10.0)


def test_constant_everywhere():
    spec = ConstantFn(Torus(1.0, 1.0), 3.0)
    assert eval_function(spec, (0.2, 0.9)) == 3.0
    assert eval_function(spec, (0.0, 0.0)) == 3.0


def test_unimodal_max_at_center():
    spec = UnimodalRadial(DISK10, 2.2)
    assert eval_function(spec, (0.0, 0.0)) == pytest.approx(2.2, abs=1e-15)
    assert eval_function(spec, (10.0, 0.0)) == 0.0
    radii = np.linspace(0.0, 10.0, 50)
    values = eval_function_many(spec, np.stack([radii, np.zeros(50)], axis=1))
    assert np.all(np.diff(values) <= 1e-12)


def test_mixture_single_term_peak():
    bump = BumpSpec((0.25, 0.25), height=1.5, width=0.2, beta=0.5)
    spec = BumpMixture(Torus(1.0, 1.0), (bump,), (1.0,))
    assert eval_function(spec, (0.25, 0.25)) == pytest.approx(1.5, abs=1e-15)
    assert eval_function(spec, (0.7, 0.7)) == 0.0


def test_off_manifold_rejected():
    with pytest.raises(InvalidInputError):
        eval_function(ConstantFn(DISK10, 1.0), (11.0, 0.0))


def test_two_bump_max_and_diagram_pattern():
    spec = TwoBump(DISK10)
    xs = np.linspace(-10, 10, 301)
    grid = np.stack(np.meshgrid(xs, xs), axis=-1).reshape(-1, 2)
    grid = grid[np.hypot(grid[:, 0], grid[:, 1]) <= 10.0]
    values = eval_function_many(spec, grid)
    assert abs(values.max() - 2.0) <= 0.01

    mesh = triangulate(DISK10, 16)
    fld = VertexField(mesh, eval_function_many(spec, mesh.vertices))
    diagram = compute_persistence(lower_star_filtration(fld))
    deg1 = diagram.points(1)
    assert len(deg1) == 2
    lifespans = sorted(d - b for b, d in deg1)
    assert lifespans[0] < lifespans[1]  # one short-lived, one long-lived
    long_lived = max(deg1, key=lambda p: p[1] - p[0])
    assert long_lived[0] == pytest.approx(0.0, abs=1e-9)
    assert long_lived[1] == pytest.approx(2.0, abs=1e-9)
    short = min(deg1, key=lambda p: p[1] - p[0])
    assert spec.DISPLAY_LEVELS[0] < short[0] < spec.DISPLAY_LEVELS[1] < short[1] < spec.DISPLAY_LEVELS[2]


def test_disjoint_mixture_validation():
    t = Torus(1.0, 1.0)
    b1 = BumpSpec((0.0, 0.0), 1.0, 0.1)
    b2 = BumpSpec((0.5, 0.5), 1.0, 0.1)
    BumpMixture(t, (b1, b2), (1.0, -0.5), disjoint=True)
    b3 = BumpSpec((0.1, 0.0), 1.0, 0.1)
    with pytest.raises(InvalidInputError):
        BumpMixture(t, (b1, b3), (1.0, 1.0), disjoint=True)
    with pytest.raises(InvalidInputError):
        BumpMixture(t, (b1, b2), (1.0, 1.5))


def test_fixtures_satisfy_declared_holder():
    specs = [
        TwoBump(DISK10),
        UnimodalRadial(DISK10, 2.2),
        BumpMixture(
            Torus(1.0, 1.0),
            (BumpSpec((0.0, 0.0), 1.0, 0.1, 0.7), BumpSpec((0.5, 0.5), 0.5, 0.15, 0.7)),
            (1.0, -1.0),
            disjoint=True,
        ),
        ConstantFn(Sphere(), 4.0),
    ]
    for spec in specs:
        beta, L = function_holder(spec)
        ok, ratio = holder_check(
            lambda p: eval_function(spec, p), spec.manifold, beta, L, 5000, seed=101
        )
        assert ok, (spec, ratio, L)


def test_kernel_bump_holder_constant_is_sharp():
    bump = BumpSpec((0.5, 0.5), height=2.0, width=0.25, beta=0.5)
    spec = BumpMixture(Torus(1.0, 1.0), (bump,), (1.0,))
    beta, L = function_holder(spec)
    assert beta == 0.5
    assert L == pytest.approx(2.0 / 0.25 ** 0.5, rel=1e-12)
    center = (0.5, 0.5)
    edge = (0.75, 0.5)
    rho = 0.25
    assert abs(eval_function(spec, center) - eval_function(spec, edge)) == pytest.approx(
        L * rho ** beta, rel=1e-12
    )


def test_sample_design_schemes():
    t = Torus(1.0, 1.0)
    eq1 = sample_design(t, 16, "equidistant", seed=1)
    eq2 = sample_design(t, 16, "equidistant", seed=999)
    assert eq1 == eq2  # scheme ignores the seed
    u1 = sample_design(t, 16, "uniform-random", seed=5)
    u2 = sample_design(t, 16, "uniform-random", seed=5)
    u3 = sample_design(t, 16, "uniform-random", seed=6)
    assert u1 == u2
    assert u1 != u3
    with pytest.raises(InvalidInputError):
        sample_design(t, 4, "fancy", seed=0)


def test_add_noise_contracts():
    values = [1.0, -2.0, 0.5]
    assert add_noise(values, 0.0, seed=3) == values
    a = add_noise(values, 1.0, seed=3)
    b = add_noise(values, 1.0, seed=3)
    assert a == b
    assert a != values


def test_add_noise_moments():
    draws = np.array(add_noise(np.zeros(100_000), 1.0, seed=12345))
    assert abs(draws.mean()) <= 0.02
    assert abs(draws.var() - 1.0) <= 0.02


def test_function_file_roundtrip():
    specs = [
        TwoBump(DISK10),
        ConstantFn(Torus(2.0, 0.5), -1.25),
        UnimodalRadial(Sphere(), 2.2, (0.0, 0.0, 1.0), math.pi / 2),
        BumpMixture(
            Torus(1.0, 1.0),
            (BumpSpec((0.0, 0.0), 1.0, 0.1, 0.7), BumpSpec((0.5, 0.5), 0.5, 0.15, 1.0)),
            (1.0, -1.0),
            disjoint=True,
        ),
    ]
    for spec in specs:
        text = function_to_text(spec)
        back = function_from_text(text)
        assert back == spec
        assert function_to_text(back) == text
