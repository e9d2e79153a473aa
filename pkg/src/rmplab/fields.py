"""Field abstraction for the two supported local fields: R and Q_p.

Real scalars are binary64 floats.  Q_p scalars are exact ``fractions.Fraction``
values; only the absolute value consults p, so all arithmetic stays exact for
the rational inputs we work with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[float, int, Fraction]

#: relative tolerance for comparisons of real scalars
REAL_TOL = 1e-12


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the real field or Q_p for a prime p."""

    kind: str  # "real" | "padic"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("real", "padic"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "padic":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"p = {self.p!r} is not prime")
        elif self.p is not None:
            raise ValueError("real field takes no p")

    @classmethod
    def real(cls) -> "FieldSpec":
        return cls("real")

    @classmethod
    def padic(cls, p: int) -> "FieldSpec":
        return cls("padic", p)

    @property
    def is_real(self) -> bool:
        return self.kind == "real"

    def to_json(self):
        return "real" if self.is_real else {"padic": self.p}

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        if obj == "real":
            return cls.real()
        if isinstance(obj, dict) and set(obj) == {"padic"}:
            return cls.padic(int(obj["padic"]))
        raise ValueError(f"bad field spec {obj!r}")

    def coerce(self, x) -> Scalar:
        """Parse a scalar from config input (number or 'num/den' string)."""
        if self.is_real:
            return float(x)
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, float):
            return Fraction(x).limit_denominator(10**12)
        return Fraction(x)


def padic_valuation(x: Fraction | int, p: int) -> int | float:
    """v_p(x); +inf for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def abs_scalar(x: Scalar, field: FieldSpec) -> float:
    """|x| as a nonnegative real: usual absolute value, or p^(-v_p(x))."""
    if field.is_real:
        return abs(float(x))
    v = padic_valuation(Fraction(x), field.p)
    if v is math.inf:
        return 0.0
    return float(field.p) ** (-v)


def vector_norm(coords, field: FieldSpec) -> float:
    """Euclidean norm over R, max norm over Q_p."""
    if field.is_real:
        return math.sqrt(math.fsum(float(c) * float(c) for c in coords))
    return max((abs_scalar(c, field) for c in coords), default=0.0)


def polar_part(coords, field: FieldSpec):
    """Split a nonzero vector as x = N * xi with ||xi|| = 1.

    N is positive real (= ||x||) over R and an integer power of p over Q_p.
    Returns (N, xi) with xi the same container type as the input.
    """
    if field.is_real:
        n = vector_norm(coords, field)
        if n == 0.0:
            raise ValueError("zero has no polar part")
        return n, [float(c) / n for c in coords]
    vals = [padic_valuation(Fraction(c), field.p) for c in coords]
    vmin = min(vals, default=math.inf)
    if vmin is math.inf:
        raise ValueError("zero has no polar part")
    n = Fraction(field.p) ** vmin
    return n, [Fraction(c) / n for c in coords]


def scalars_close(a: float, b: float, tol: float = REAL_TOL) -> bool:
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol)
