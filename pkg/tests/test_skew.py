import math
from fractions import Fraction

import numpy as np
import pytest

from rmplab import example_chart, example_line, example_measure
from rmplab.fields import FieldSpec
from rmplab.linalg import Matrix, ProjPoint, Subspace
from rmplab.measure import MeasureSpec, RngStream
from rmplab.skew import (AffineMap, ChartError, SkewChart, SkewPoint, act_skew,
                         base_action, from_chart, run_recursion, sigma_cocycle,
                         to_chart)

R = FieldSpec.real()
Q2 = FieldSpec.padic(2)


def test_chart_construction():
    chart = example_chart()
    assert chart.dim_l == 1 and chart.dim_q == 2


def test_chart_round_trip():
    chart = example_chart()
    p = ProjPoint.make(R, [0.3, -1.2, 0.7])
    s = to_chart(p, chart)
    q = from_chart(s, chart)
    assert np.asarray(q.coords) == pytest.approx(np.asarray(p.coords), abs=1e-12)


def test_point_at_infinity():
    chart = example_chart()
    with pytest.raises(ChartError):
        to_chart(ProjPoint.make(R, [1.0, 0.0, 0.0]), chart)


def test_blocks_and_invariance_error():
    chart = example_chart()
    g = example_measure(2).atoms[0]
    a, b, c = chart.blocks(g)
    assert np.allclose(np.asarray(a, dtype=float), [[0.5]])
    assert np.allclose(np.asarray(b, dtype=float), [[2.0, 3.0]])
    assert np.allclose(np.asarray(c, dtype=float), [[1.0, 1.0], [0.0, 1.0]])
    rot = Matrix.make(R, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    with pytest.raises(ChartError):
        chart.blocks(rot)


def test_action_matches_projective_action():
    """act_skew in the chart equals the ambient projective action."""
    chart = example_chart()
    spec = example_measure(3)
    gen = np.random.Generator(np.random.Philox(key=9))
    for _ in range(20):
        v = gen.standard_normal(3)
        p = ProjPoint.make(R, list(v))
        g = spec.atoms[int(gen.integers(0, 3))]
        s = act_skew(g, to_chart(p, chart), chart)
        q = from_chart(s, chart)
        expected = p.apply(g)
        assert np.asarray(q.coords) == pytest.approx(
            np.asarray(expected.coords), abs=1e-10)


def test_affine_map_compose():
    f = AffineMap(((2.0,),), (1.0,))
    g = AffineMap(((0.5,),), (-3.0,))
    h = f.compose(g)  # f after g: t -> 2(0.5 t - 3) + 1 = t - 5
    assert h.apply((4.0,))[0] == pytest.approx(-1.0)


def test_cocycle_identity_real():
    chart = example_chart()
    spec = example_measure(2)
    gen = np.random.Generator(np.random.Philox(key=10))
    for _ in range(50):
        g1 = spec.atoms[int(gen.integers(0, 2))]
        g2 = spec.atoms[int(gen.integers(0, 2))]
        xi = gen.standard_normal(2)
        xi /= np.linalg.norm(xi)
        xi = tuple(float(x) for x in xi)
        lhs = sigma_cocycle(g1 @ g2, xi, chart)
        rhs = sigma_cocycle(g1, base_action(g2, xi, chart), chart).compose(
            sigma_cocycle(g2, xi, chart))
        assert np.asarray(lhs.linear) == pytest.approx(np.asarray(rhs.linear), abs=1e-12)
        assert np.asarray(lhs.translation) == pytest.approx(
            np.asarray(rhs.translation), abs=1e-12)


def test_cocycle_identity_padic_exact():
    atoms = [
        [[Fraction(1, 2), 1, 1], [0, 1, 0], [0, 2, 1]],
        [[2, 0, 1], [0, 3, 1], [0, 0, 1]],
    ]
    spec = MeasureSpec.uniform(Q2, atoms)
    line = Subspace.span(Q2, [[1, 0, 0]], 3)
    chart = SkewChart.make(line)
    xi = (Fraction(1), Fraction(2))
    for g1 in spec.atoms:
        for g2 in spec.atoms:
            lhs = sigma_cocycle(g1 @ g2, xi, chart)
            rhs = sigma_cocycle(g1, base_action(g2, xi, chart), chart).compose(
                sigma_cocycle(g2, xi, chart))
            assert lhs.linear == rhs.linear
            assert lhs.translation == rhs.translation


def test_run_recursion_matches_iteration():
    chart = example_chart()
    spec = example_measure(2)
    s0 = to_chart(ProjPoint.make(R, [0.0, 1.0, 0.5]), chart)
    traj = run_recursion(spec, s0, chart, 30, RngStream(11))
    assert len(traj) == 31
    # compact regime: fiber coordinates stay bounded
    assert max(s.fiber_norm for s in traj) < 50.0


def test_chart_rejects_degenerate_complement():
    line = example_line()
    with pytest.raises(ChartError):
        SkewChart.make(line, line)
