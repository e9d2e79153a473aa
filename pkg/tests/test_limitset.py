import math

import numpy as np
import pytest

from rmplab import example_chart, example_line, example_measure
from rmplab.fields import FieldSpec
from rmplab.linalg import LinalgError, Matrix, ProjPoint, Subspace
from rmplab.measure import MeasureSpec, RngStream
from rmplab.limitset import (attractor_point_block, hausdorff_fs, limit_set_sample,
                             orbit_escape_test, proximal_check)
from rmplab.skew import SkewChart, SkewPoint, to_chart

R = FieldSpec.real()


def test_proximal_diag():
    data = proximal_check(Matrix.make(R, [[2, 0], [0, 1]]))
    assert data is not None
    assert data.lambda_top == pytest.approx(2.0)
    assert np.asarray(data.attractor.coords) == pytest.approx([1.0, 0.0])
    assert data.gap_ratio == pytest.approx(2.0)


def test_rotation_not_proximal():
    assert proximal_check(Matrix.make(R, [[0, -1], [1, 0]])) is None


def test_near_tie_not_proximal():
    assert proximal_check(Matrix.make(R, [[1.0000001, 0], [0, 1]])) is None


def test_singular_raises():
    with pytest.raises(LinalgError):
        proximal_check(Matrix.make(R, [[1, 1], [1, 1]]))


def test_attractor_eigen_residual():
    """g p+(g) = p+(g) as projective points."""
    spec = example_measure(3)
    for g in spec.atoms:
        data = proximal_check(g)
        if data is None:
            continue
        moved = data.attractor.apply(g)
        assert np.asarray(moved.coords) == pytest.approx(
            np.asarray(data.attractor.coords), abs=1e-9)


def test_attractor_point_block_example3():
    chart = example_chart()
    g3 = example_measure(3).atoms[2]
    s = attractor_point_block(g3, chart)
    t0 = 22.0 / (7.0 * math.sqrt(241.0))
    assert s.t[0] == pytest.approx(t0, abs=1e-9)
    xi_expected = np.array([-4.0, 15.0]) / math.sqrt(241.0)
    assert np.asarray(s.xi) == pytest.approx(xi_expected, abs=1e-9)


def test_attractor_block_affine_reduction():
    """A = 0, C = 1: the fixed point is the plain affine fixed point B xi / lam."""
    chart = SkewChart.make(Subspace.span(R, [[1, 0]]))
    g = Matrix.make(R, [[0, 3], [0, 2]])
    s = attractor_point_block(g, chart)
    assert s.t[0] == pytest.approx(3.0 / 2.0)


def test_attractor_block_matches_eigenvector():
    """Block formula equals the chart image of the dominant eigenvector."""
    gen = np.random.Generator(np.random.Philox(key=30))
    line = Subspace.span(R, [[1, 0, 0]])
    chart = SkewChart.make(line)
    checked = 0
    while checked < 100:
        a = 0.3 * gen.standard_normal()
        b = gen.standard_normal(2)
        c = gen.standard_normal((2, 2)) + 2.0 * np.eye(2)
        g = Matrix.make(R, [[a, b[0], b[1]], [0, c[0, 0], c[0, 1]], [0, c[1, 0], c[1, 1]]])
        cdata = proximal_check(Matrix.make(R, c))
        if cdata is None or abs(cdata.lambda_top) <= abs(a) or not g.is_invertible():
            continue
        try:
            s = attractor_point_block(g, chart)
        except LinalgError:
            continue
        full = proximal_check(g)
        if full is None:
            continue
        s2 = to_chart(full.attractor, chart)
        sign = 1.0 if np.dot(s.xi, s2.xi) > 0 else -1.0
        assert np.asarray(s.t) == pytest.approx(sign * np.asarray(s2.t), abs=1e-9)
        assert np.asarray(s.xi) == pytest.approx(sign * np.asarray(s2.xi), abs=1e-9)
        checked += 1


def test_resonant_block_raises():
    chart = SkewChart.make(Subspace.span(R, [[1, 0]]))
    g = Matrix.make(R, [[2, 1], [0, 2]])
    with pytest.raises(LinalgError):
        attractor_point_block(g, chart)


def test_limit_set_single_atom():
    spec = MeasureSpec.uniform(R, [[[2, 0], [0, 1]]])
    samples = limit_set_sample(spec, 3, 10, RngStream(1))
    assert len(samples) == 1
    assert np.asarray(samples[0].attractor.coords) == pytest.approx([1.0, 0.0])


def test_limit_set_contains_g3_attractor():
    spec = example_measure(3)
    samples = limit_set_sample(spec, 1, 3, RngStream(2))
    g3 = proximal_check(spec.atoms[2], word=(2,))
    dists = [np.linalg.norm(np.asarray(s.attractor.coords)
                            - np.asarray(g3.attractor.coords)) for s in samples]
    assert min(dists) < 1e-9


def test_limit_set_tags():
    spec = example_measure(3)
    line = example_line()
    samples = limit_set_sample(spec, 2, 50, RngStream(3), l_mu=line,
                               u_mu=Subspace.full(R, 3))
    assert samples
    for s in samples:
        assert s.in_U is True
        assert s.off_L in (True, False)
    assert any(s.off_L for s in samples)


def test_atom_maps_cloud_into_cloud():
    """h . (shallow attractor cloud) lies close to a deeper reference cloud.

    Semigroup invariance of the limit set: the image of every sampled
    attractor is itself a limit point, so it must be covered by a denser
    sample up to the deep cloud's resolution.
    """
    spec = example_measure(2)

    def exhaustive(depth):
        samples = limit_set_sample(spec, depth, 2 ** (depth + 1) - 2, RngStream(4))
        return np.array([[float(c) for c in s.attractor.coords] for s in samples])

    cloud, ref = exhaustive(7), exhaustive(11)
    for h in spec.atoms:
        moved = cloud @ h.to_numpy().T
        moved /= np.linalg.norm(moved, axis=1, keepdims=True)
        g = np.clip(np.abs(moved @ ref.T), 0, 1)
        d = np.sqrt(np.clip(1 - g * g, 0, None))
        assert d.min(axis=1).max() < 0.05


def test_hausdorff_fs():
    a = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert hausdorff_fs(a, a) == pytest.approx(0.0)
    b = np.array([[1.0, 0.0]])
    assert hausdorff_fs(a, b) == pytest.approx(1.0)


def test_orbit_escape_example3():
    spec = example_measure(3)
    chart = example_chart()
    s = attractor_point_block(spec.atoms[2], chart)
    escaped, norms = orbit_escape_test(spec.atoms[0], s, chart, 2000, threshold=1e3)
    assert escaped
    assert norms[-1] > 1e3


def test_orbit_no_escape_contraction():
    chart = SkewChart.make(Subspace.span(R, [[1, 0]]))
    g = Matrix.make(R, [[0.5, 0], [0, 1]])
    escaped, norms = orbit_escape_test(g, SkewPoint((1.0,), (1.0,)), chart, 500)
    assert not escaped
    assert norms[-1] < 1e-6


def test_orbit_no_escape_example2():
    spec = example_measure(2)
    chart = example_chart()
    s = SkewPoint((0.5,), (1.0, 0.0))
    for g in spec.atoms:
        escaped, norms = orbit_escape_test(g, s, chart, 1000)
        assert not escaped
        assert max(norms) < 100.0
