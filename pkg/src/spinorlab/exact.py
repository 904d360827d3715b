"""Exact complex-rational scalars and small dense matrices.

The matrix identities behind the linearized wave equation are algebraic
statements whose entries all lie in the Gaussian rationals, so they are
verified here with Fraction arithmetic and zero tolerance instead of
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class ExactComplex:
    """Complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    @staticmethod
    def of(re=0, im=0) -> "ExactComplex":
        return ExactComplex(_frac(re), _frac(im))

    def __add__(self, other):
        other = as_exact(other)
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_exact(other)
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_exact(other) - self

    def __mul__(self, other):
        other = as_exact(other)
        return ExactComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_exact(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactComplex(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        return as_exact(other) / self

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


EC_ZERO = ExactComplex.of(0)
EC_ONE = ExactComplex.of(1)
EC_I = ExactComplex.of(0, 1)


def as_exact(x) -> ExactComplex:
    """Coerce int, Fraction, or ExactComplex to ExactComplex."""
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactComplex(_frac(x), Fraction(0))
    raise TypeError(f"cannot coerce {type(x).__name__} to ExactComplex")


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix of ExactComplex entries (2x2 and 4x4 in practice)."""

    rows: tuple

    def __post_init__(self):
        n = len(self.rows)
        rows = tuple(tuple(as_exact(e) for e in row) for row in self.rows)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @staticmethod
    def from_rows(rows) -> "ExactMatrix":
        return ExactMatrix(tuple(tuple(row) for row in rows))

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix(
            tuple(
                tuple(EC_ONE if i == j else EC_ZERO for j in range(n))
                for i in range(n)
            )
        )

    @staticmethod
    def zeros(n: int) -> "ExactMatrix":
        return ExactMatrix(tuple(tuple(EC_ZERO for _ in range(n)) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_dim(other)
        return ExactMatrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_dim(other)
        return ExactMatrix(
            tuple(
                tuple(a - b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            )
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(tuple(tuple(-a for a in row) for row in self.rows))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_dim(other)
        n = self.n
        return ExactMatrix(
            tuple(
                tuple(
                    sum(
                        (self.rows[i][k] * other.rows[k][j] for k in range(n)),
                        EC_ZERO,
                    )
                    for j in range(n)
                )
                for i in range(n)
            )
        )

    def __mul__(self, scalar) -> "ExactMatrix":
        s = as_exact(scalar)
        return ExactMatrix(tuple(tuple(a * s for a in row) for row in self.rows))

    __rmul__ = __mul__

    def adjoint(self) -> "ExactMatrix":
        n = self.n
        return ExactMatrix(
            tuple(
                tuple(self.rows[j][i].conjugate() for j in range(n)) for i in range(n)
            )
        )

    def trace(self) -> ExactComplex:
        return sum((self.rows[i][i] for i in range(self.n)), EC_ZERO)

    def det(self) -> ExactComplex:
        n = self.n
        if n == 1:
            return self.rows[0][0]
        total = EC_ZERO
        for j in range(n):
            minor = ExactMatrix(
                tuple(
                    tuple(self.rows[i][k] for k in range(n) if k != j)
                    for i in range(1, n)
                )
            )
            term = self.rows[0][j] * minor.det()
            total = total + (term if j % 2 == 0 else -term)
        return total

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.to_numpy()))) if self.n else 0.0

    def to_numpy(self) -> np.ndarray:
        return np.array(
            [[e.to_complex() for e in row] for row in self.rows], dtype=complex
        )

    def _check_dim(self, other: "ExactMatrix"):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
