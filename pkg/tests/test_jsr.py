import math

import numpy as np
import pytest

from rmplab import example_chart, example_measure
from rmplab.fields import FieldSpec
from rmplab.jsr import (compactness_certificate, jsr_bounds, noncompactness_witness)
from rmplab.linalg import LinalgError, Matrix, Subspace
from rmplab.measure import MeasureSpec
from rmplab.skew import SkewChart

R = FieldSpec.real()


def test_single_matrix_tight():
    b = jsr_bounds([Matrix.make(R, [[2, 0], [0, 1]])], depth=4)
    assert b.lower == pytest.approx(2.0, abs=1e-9)
    assert b.upper == pytest.approx(2.0, abs=1e-6)


def test_rotation_bounds_one():
    th = 0.7
    rot = Matrix.make(R, [[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    b = jsr_bounds([rot], depth=3)
    assert b.lower == pytest.approx(1.0, abs=1e-9)
    assert b.upper == pytest.approx(1.0, abs=1e-9)


def test_bracket_and_monotone_depth():
    mats = [Matrix.make(R, [[1, 1], [0, 1]]), Matrix.make(R, [[1, 0], [1, 1]])]
    prev_upper, prev_lower = np.inf, 0.0
    for depth in (1, 2, 3, 4):
        b = jsr_bounds(mats, depth)
        assert b.lower <= b.upper + 1e-9
        assert b.upper <= prev_upper + 1e-12
        assert b.lower >= prev_lower - 1e-12
        prev_upper, prev_lower = b.upper, b.lower
    # the JSR of this pair is the golden ratio squared^(1/2): rho(AB)^(1/2)
    golden = (1 + math.sqrt(5)) / 2
    assert b.lower >= golden - 1e-9


def test_scaling_law():
    mats = [Matrix.make(R, [[1, 1], [0, 1]]), Matrix.make(R, [[0, -1], [1, 0]])]
    b1 = jsr_bounds(mats, 3)
    b2 = jsr_bounds([m.scale(2.5) for m in mats], 3)
    assert b2.lower == pytest.approx(2.5 * b1.lower, rel=1e-9)
    assert b2.upper == pytest.approx(2.5 * b1.upper, rel=1e-6)


def test_bracket_validity_explored_words():
    """Every explored word's averaged spectral radius sits under the upper bound."""
    spec = example_measure(2)
    b = jsr_bounds(spec.atoms, 4)
    from itertools import product
    base = spec.atoms_numpy()
    for n in range(1, 5):
        for w in product(range(len(base)), repeat=n):
            m = base[w[0]]
            for k in w[1:]:
                m = m @ base[k]
            rho = max(abs(np.linalg.eigvals(m))) ** (1 / n)
            assert rho <= b.upper + 1e-9


def test_empty_and_bad_depth():
    with pytest.raises(LinalgError):
        jsr_bounds([], 2)
    with pytest.raises(ValueError):
        jsr_bounds([Matrix.identity(R, 2)], 0)


def test_certificate_example2_pass():
    cert = compactness_certificate(example_measure(2), example_chart(), depth=4)
    assert cert.passed
    assert cert.r_upper < 1.0
    assert cert.r_lower <= cert.r_upper


def test_certificate_example1_fail():
    cert = compactness_certificate(example_measure(1), example_chart(), depth=4)
    assert not cert.passed
    assert cert.r_upper >= 1.0
    assert cert.reason


def test_certificate_single_contracting_atom():
    spec = MeasureSpec.uniform(R, [[[0.5, 0, 0], [0, 1, 0], [0, 0, 1]]])
    chart = SkewChart.make(Subspace.span(R, [[1, 0, 0]]))
    cert = compactness_certificate(spec, chart, depth=2)
    assert cert.passed
    assert cert.r_upper == pytest.approx(0.5, abs=1e-9)


def test_certificate_requires_line():
    spec = example_measure(2)
    chart = SkewChart.make(Subspace.span(R, [[1, 0, 0], [0, 1, 0]]))
    with pytest.raises(LinalgError):
        compactness_certificate(spec, chart, depth=2)


def test_witness_trivial_expander():
    spec = MeasureSpec.uniform(R, [[[2, 0, 0], [0, 0.5, 0], [0, 0, 0.5]]])
    chart = SkewChart.make(Subspace.span(R, [[1, 0, 0]]))
    w = noncompactness_witness(spec, chart, depth=2)
    assert w == (0,)


def test_witness_absent_examples_2_and_3():
    chart = example_chart()
    assert noncompactness_witness(example_measure(2), chart, depth=8) is None
    assert noncompactness_witness(example_measure(3), chart, depth=6) is None
