import math
from fractions import Fraction

import numpy as np
import pytest

from rmplab import example_line, example_measure
from rmplab.fields import FieldSpec
from rmplab.linalg import LinalgError, ProjPoint, Subspace
from rmplab.measure import MeasureSpec, RngStream
from rmplab.stationary import (EmpiricalMeasure, boundary_convergence, energy_distance,
                               energy_test, sample_stationary, stationarity_residual,
                               stationarity_test, subspace_mass)

R = FieldSpec.real()
Q2 = FieldSpec.padic(2)


def _point_mass_spec():
    """diag(2,1): stationary measure is the point mass at [e1]."""
    return MeasureSpec.uniform(R, [[[2, 0], [0, 1]]])


def test_point_mass_sampler():
    spec = _point_mass_spec()
    nu = sample_stationary(spec, 60, 50, RngStream(1), "top")
    coords = nu.coords_numpy()
    assert np.abs(coords[:, 0]) == pytest.approx(np.ones(50), abs=1e-9)


def test_pushforward_needs_start():
    spec = _point_mass_spec()
    with pytest.raises(ValueError):
        sample_stationary(spec, 10, 5, RngStream(2), "pushforward")
    with pytest.raises(ValueError):
        sample_stationary(spec, 10, 5, RngStream(2), "bogus")


def test_pushforward_start_off_l_mu():
    spec = _point_mass_spec()
    l_mu = Subspace.span(R, [[0, 1]])  # e2-line carries the smaller exponent
    with pytest.raises(LinalgError):
        sample_stationary(spec, 10, 5, RngStream(3), "pushforward",
                          start=ProjPoint.make(R, [0, 1]), l_mu=l_mu)


def test_samplers_agree_toy():
    spec = _point_mass_spec()
    top = sample_stationary(spec, 60, 40, RngStream(4), "top")
    push = sample_stationary(spec, 60, 40, RngStream(5), "pushforward",
                             start=ProjPoint.make(R, [1, 1]))
    assert energy_distance(top, push, RngStream(6)) == pytest.approx(0.0, abs=1e-9)


def test_energy_test_separates():
    """Clearly different clouds exceed the permutation-null threshold."""
    gen = np.random.Generator(np.random.Philox(key=20))
    a = gen.standard_normal((300, 3)) + np.array([5.0, 0, 0])
    b = gen.standard_normal((300, 3)) + np.array([0, 5.0, 0])
    m1 = EmpiricalMeasure(tuple(ProjPoint.make(R, list(v)) for v in a))
    m2 = EmpiricalMeasure(tuple(ProjPoint.make(R, list(v)) for v in b))
    stat, threshold, ok = energy_test(m1, m2, RngStream(7), n_perm=100)
    assert stat > threshold and not ok


def test_energy_test_accepts_same_law():
    gen = np.random.Generator(np.random.Philox(key=21))
    a = gen.standard_normal((300, 3))
    b = gen.standard_normal((300, 3))
    m1 = EmpiricalMeasure(tuple(ProjPoint.make(R, list(v)) for v in a))
    m2 = EmpiricalMeasure(tuple(ProjPoint.make(R, list(v)) for v in b))
    stat, threshold, ok = energy_test(m1, m2, RngStream(8), n_perm=100)
    assert ok


def test_stationarity_residual_point_mass():
    spec = _point_mass_spec()
    nu = sample_stationary(spec, 60, 40, RngStream(9), "top")
    assert stationarity_residual(nu, spec, RngStream(10)) == pytest.approx(0.0, abs=1e-9)


def test_planted_nonstationary_rejected():
    """A cloud concentrated away from the attracting direction is rejected."""
    spec = example_measure(2)
    fake = EmpiricalMeasure(tuple(
        ProjPoint.make(R, [0.0, math.cos(0.01 * k), math.sin(0.01 * k)])
        for k in range(400)))
    stat, threshold, ok = stationarity_test(fake, spec, RngStream(11), n_perm=100)
    assert not ok


def test_subspace_mass():
    pts = tuple(ProjPoint.make(R, v) for v in ([1, 0, 0], [1, 0.001, 0], [0, 1, 0]))
    nu = EmpiricalMeasure(pts)
    e1 = Subspace.span(R, [[1, 0, 0]])
    assert subspace_mass(nu, e1, 0.01) == pytest.approx(2 / 3)
    with pytest.raises(LinalgError):
        subspace_mass(nu, Subspace.full(R, 3), 0.1)


def test_subspace_mass_padic():
    pts = tuple(ProjPoint.make(Q2, v) for v in
                ([Fraction(1), Fraction(4)], [Fraction(1), Fraction(1)]))
    nu = EmpiricalMeasure(pts)
    line = Subspace.span(Q2, [[1, 0]], 2)
    assert subspace_mass(nu, line, 0.3) == pytest.approx(0.5)


def test_boundary_convergence_decays():
    spec = example_measure(2)
    nu = sample_stationary(spec, 100, 300, RngStream(12), "top")
    curve = boundary_convergence(spec, nu, [10, 20, 40, 80], RngStream(13))
    assert curve.slope < 0.0
    assert curve.values[-1] < curve.values[0]


def test_padic_sampler_runs():
    spec = MeasureSpec.uniform(Q2, [
        [[Fraction(1, 2), 1], [0, 2]],
        [[Fraction(1, 2), 3], [0, 2]],
    ])
    nu = sample_stationary(spec, 12, 6, RngStream(14), "top")
    assert nu.size == 6
    for p in nu.points:
        assert max(abs(float(c)) for c in p.coords) >= 1.0
