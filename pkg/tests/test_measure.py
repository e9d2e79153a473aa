from fractions import Fraction

import numpy as np
import pytest

from rmplab.fields import FieldSpec
from rmplab.measure import MeasureSpec, RngStream, sample, transpose_measure, validate

R = FieldSpec.real()
Q2 = FieldSpec.padic(2)


def _toy():
    return MeasureSpec.uniform(R, [[[2, 0], [0, 1]], [[1, 1], [0, 1]]])


def test_uniform_weights():
    spec = _toy()
    assert spec.weights == (Fraction(1, 2), Fraction(1, 2))
    assert validate(spec)


def test_validate_catches_problems():
    bad = MeasureSpec.make(R, [[[1, 0], [0, 0]]])
    report = validate(bad)
    assert not report and any("invertible" in p for p in report.problems)
    bad2 = MeasureSpec(R, _toy().atoms, (Fraction(1), Fraction(1)))
    assert "weights sum != 1" in validate(bad2).problems


def test_json_round_trip_real():
    spec = _toy()
    again = MeasureSpec.from_json(spec.to_json())
    assert again.atoms == spec.atoms and again.weights == spec.weights


def test_json_round_trip_padic():
    spec = MeasureSpec.make(Q2, [[["1/2", 1], [0, 3]]])
    again = MeasureSpec.from_json(spec.to_json())
    assert again.atoms == spec.atoms
    assert again.atoms[0].rows[0][0] == Fraction(1, 2)


def test_json_weights_optional():
    obj = {"field": "real", "atoms": [[[2, 0], [0, 1]]]}
    spec = MeasureSpec.from_json(obj)
    assert spec.weights == (Fraction(1),)


def test_json_dimension_mismatch():
    obj = _toy().to_json()
    obj["dimension"] = 5
    with pytest.raises(ValueError):
        MeasureSpec.from_json(obj)


def test_sampling_reproducible():
    spec = _toy()
    a = sample(spec, RngStream(42, 3), 100)
    b = sample(spec, RngStream(42, 3), 100)
    assert np.array_equal(a, b)
    c = sample(spec, RngStream(42, 4), 100)
    assert not np.array_equal(a, c)


def test_substreams_order_free():
    """Substream draws do not depend on consumption order."""
    spec = _toy()
    root = RngStream(7)
    forward = [sample(spec, root.substream(i), 50) for i in range(5)]
    backward = [sample(spec, root.substream(i), 50) for i in reversed(range(5))]
    for i in range(5):
        assert np.array_equal(forward[i], backward[4 - i])


def test_weighted_sampling_frequencies():
    spec = MeasureSpec.make(R, _toy().atoms, [Fraction(9, 10), Fraction(1, 10)])
    idx = sample(spec, RngStream(0), 20000)
    freq = (idx == 0).mean()
    assert abs(freq - 0.9) < 0.01


def test_transpose_measure():
    spec = _toy()
    t = transpose_measure(spec)
    assert t.atoms[1].rows == ((1.0, 0.0), (1.0, 1.0))
    assert t.weights == spec.weights
