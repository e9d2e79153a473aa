"""Built-in demo measures on GL_3(R): the three bundled example semigroups.

All three stabilize the line L = R e_1; they differ in the fiber behavior:
example 1 has unit fiber scalars (non-compact support in the chart),
example 2 contracts the fiber (compact support), and example 3 contracts the
fiber on average yet still escapes along a fixed base direction.
"""

from __future__ import annotations

from .fields import FieldSpec
from .linalg import Subspace
from .measure import MeasureSpec
from .skew import SkewChart

_ATOMS = {
    1: [
        [[1.0, 2.0, 3.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]],
        [[-1.0, 1.0, 2.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]],
    ],
    2: [
        [[0.5, 2.0, 3.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]],
        [[0.5, 1.0, 2.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]],
    ],
    3: [
        [[0.5, 2.0, 3.0], [0.0, 4.0, 1.0], [0.0, 0.0, 0.25]],
        [[0.5, 1.0, 2.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]],
        [[0.5, 1.0, 1.0], [0.0, 0.25, -1.0], [0.0, 0.0, 4.0]],
    ],
}


def example_measure(which: int) -> MeasureSpec:
    if which not in _ATOMS:
        raise ValueError("example id must be 1, 2 or 3")
    return MeasureSpec.uniform(FieldSpec.real(), _ATOMS[which])


def example_line() -> Subspace:
    """The common invariant line R e_1 of the demo measures."""
    return Subspace.span(FieldSpec.real(), [[1.0, 0.0, 0.0]])


def example_chart() -> SkewChart:
    return SkewChart.make(example_line())
