"""Finite-support probability measures on GL(V) and reproducible sampling.

Sampling uses the counter-based Philox generator keyed by
(master_seed, stream_index), so distinct streams can be consumed in any order
(or concurrently) and still reproduce bit-identical draws.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .fields import FieldSpec
from .linalg import Matrix


@dataclass(frozen=True)
class RngStream:
    master_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        key = ((self.master_seed & (2**64 - 1)) << 64) | (self.stream_index & (2**64 - 1))
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, i: int) -> "RngStream":
        # splitting by multiply-and-add keeps indices distinct at desk scale
        idx = (self.stream_index * 1_000_000_007 + i + 1) % (2**63)
        return RngStream(self.master_seed, idx)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple = ()

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class MeasureSpec:
    """Atoms (invertible d x d matrices) with positive rational weights."""

    field: FieldSpec
    atoms: tuple
    weights: tuple

    @classmethod
    def make(cls, field: FieldSpec, atoms, weights=None) -> "MeasureSpec":
        atoms = tuple(
            a if isinstance(a, Matrix) else Matrix.make(field, a) for a in atoms
        )
        if weights is None:
            weights = [Fraction(1, len(atoms))] * len(atoms)
        weights = tuple(Fraction(w) for w in weights)
        return cls(field, atoms, weights)

    @classmethod
    def uniform(cls, field: FieldSpec, atoms) -> "MeasureSpec":
        return cls.make(field, atoms)

    @property
    def dim(self) -> int:
        return self.atoms[0].dim

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    def atoms_numpy(self) -> np.ndarray:
        """Stacked (m, d, d) float64 view of the atoms (walk kernels input)."""
        return np.stack([a.to_numpy() for a in self.atoms])

    def weights_numpy(self) -> np.ndarray:
        w = np.array([float(x) for x in self.weights])
        return w / w.sum()

    def to_json(self) -> dict:
        def fmt(x):
            if self.field.is_real:
                return repr(float(x))
            return f"{x.numerator}/{x.denominator}"

        return {
            "field": self.field.to_json(),
            "dimension": self.dim,
            "atoms": [[[fmt(x) for x in row] for row in a.rows] for a in self.atoms],
            "weights": [f"{w.numerator}/{w.denominator}" for w in self.weights],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MeasureSpec":
        f = FieldSpec.from_json(obj["field"])
        atoms = [[[f.coerce(x) for x in row] for row in a] for a in obj["atoms"]]
        weights = ([Fraction(w) for w in obj["weights"]]
                   if obj.get("weights") is not None else None)
        spec = cls.make(f, atoms, weights)
        if "dimension" in obj and spec.dim != int(obj["dimension"]):
            raise ValueError("declared dimension does not match the atoms")
        return spec


def validate(spec: MeasureSpec) -> ValidationReport:
    problems = []
    if spec.n_atoms == 0:
        return ValidationReport(False, ("no atoms",))
    if len(spec.weights) != spec.n_atoms:
        problems.append("weights/atoms length mismatch")
    else:
        if any(w <= 0 for w in spec.weights):
            problems.append("weights must be positive")
        if sum(spec.weights, Fraction(0)) != 1:
            problems.append("weights sum != 1")
    d = spec.atoms[0].dim
    for i, a in enumerate(spec.atoms):
        if a.dim != d:
            problems.append(f"atom {i} has dimension {a.dim} != {d}")
        elif a.field != spec.field:
            problems.append(f"atom {i} lives over the wrong field")
        elif not a.is_invertible():
            problems.append(f"atom {i} not invertible")
    return ValidationReport(not problems, tuple(problems))


def sample(spec: MeasureSpec, rng: RngStream, n: int) -> np.ndarray:
    """n i.i.d. atom indices, a pure function of (spec, rng, n)."""
    gen = rng.generator()
    return gen.choice(spec.n_atoms, size=n, p=spec.weights_numpy()).astype(np.int64)


def transpose_measure(spec: MeasureSpec) -> MeasureSpec:
    return MeasureSpec(
        spec.field, tuple(a.transpose() for a in spec.atoms), spec.weights
    )
