"""Pauli and Dirac matrix machinery, verified in exact arithmetic.

Builds the five 4x4 matrices B_1..B_5 that anticommute pairwise and square
to the identity, plus the nilpotent pair A, C that linearizes the
free-particle dispersion.  Two standard representations are provided:

  original:   B_i = sigma1 (x) sigma_i,  B_4 = sigma3 (x) 1
  convenient: B_i = sigma3 (x) sigma_i,  B_4 = sigma1 (x) 1

with B_5 = B_1 B_2 B_3 B_4 in either case, and

  A = a (B_4 + i B_5),   C = b (B_4 - i B_5),   2 a b = -1.

All identity checks run on Gaussian-rational entries with zero tolerance;
only the Fourier-symbol check (arbitrary real wavenumbers) uses floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import EC_I, EC_ONE, ExactComplex, ExactMatrix, as_exact

HBAR = 1.0
C_LIGHT = 1.0

SIGMA1 = ExactMatrix.from_rows([[0, 1], [1, 0]])
SIGMA2 = ExactMatrix.from_rows([[0, -EC_I], [EC_I, 0]])
SIGMA3 = ExactMatrix.from_rows([[1, 0], [0, -1]])
_SIGMAS = (SIGMA1, SIGMA2, SIGMA3)

ID2 = ExactMatrix.identity(2)
ID4 = ExactMatrix.identity(4)


def pauli(i: int) -> ExactMatrix:
    """Pauli matrix sigma_i in the standard representation, i in {1,2,3}."""
    if i not in (1, 2, 3):
        raise IndexError(f"Pauli index must be 1, 2, or 3, got {i}")
    return _SIGMAS[i - 1]


def kron(m: ExactMatrix, n: ExactMatrix) -> ExactMatrix:
    """Kronecker product of two 2x2 matrices, 4x4 block layout m_ij * n."""
    rows = []
    for i in range(m.n):
        for k in range(n.n):
            rows.append(
                tuple(
                    m.rows[i][j] * n.rows[k][l]
                    for j in range(m.n)
                    for l in range(n.n)
                )
            )
    return ExactMatrix(tuple(rows))


def anticommutator(m: ExactMatrix, n: ExactMatrix) -> ExactMatrix:
    """mn + nm, exact."""
    return (m @ n) + (n @ m)


@dataclass(frozen=True)
class DiracRep:
    """A five-matrix Dirac set plus the nilpotent linearization pair A, C."""

    kind: str
    a: ExactComplex
    b_param: ExactComplex
    b: tuple  # (B1, B2, B3, B4, B5)
    A: ExactMatrix
    C: ExactMatrix
    b5_sign: int = 1


def assemble_rep(kind, b_matrices, a, b5_sign: int = 1) -> DiracRep:
    """Build A = a(B4 + i s B5), C = b(B4 - i s B5) from five given matrices.

    The sign s on i is a free convention; both choices satisfy every
    anticommutation condition.
    """
    a = as_exact(a)
    if a.is_zero():
        raise ValueError("parameter a must be nonzero")
    if b5_sign not in (1, -1):
        raise ValueError("b5_sign must be +1 or -1")
    b_param = ExactComplex.of(-1) / (2 * a)
    b1, b2, b3, b4, b5 = b_matrices
    i_s = EC_I * b5_sign
    mat_a = (b4 + b5 * i_s) * a
    mat_c = (b4 - b5 * i_s) * b_param
    return DiracRep(
        kind=kind,
        a=a,
        b_param=b_param,
        b=(b1, b2, b3, b4, b5),
        A=mat_a,
        C=mat_c,
        b5_sign=b5_sign,
    )


def dirac_rep(kind: str, a, b5_sign: int = 1) -> DiracRep:
    """Construct a named representation from Kronecker products of Paulis."""
    kind = kind.lower()
    if kind == "original":
        bs = [kron(SIGMA1, pauli(i)) for i in (1, 2, 3)]
        bs.append(kron(SIGMA3, ID2))
    elif kind == "convenient":
        bs = [kron(SIGMA3, pauli(i)) for i in (1, 2, 3)]
        bs.append(kron(SIGMA1, ID2))
    else:
        raise ValueError(f"unknown representation kind {kind!r}")
    bs.append(fifth_matrix(bs))
    return assemble_rep(kind, tuple(bs), a, b5_sign)


def fifth_matrix(b) -> ExactMatrix:
    """Extend four pairwise-anticommuting unit-square matrices by B1 B2 B3 B4.

    The product anticommutes with each input and squares to the identity,
    which is verified exactly on the result.
    """
    b = tuple(b)
    if len(b) != 4:
        raise ValueError("fifth_matrix expects exactly four matrices")
    pre = check_dirac_algebra(b)
    if not pre.all_passed:
        names = ", ".join(c.name for c in pre.failures())
        raise ValueError(f"inputs do not satisfy the Dirac algebra: {names}")
    b5 = b[0] @ b[1] @ b[2] @ b[3]
    post = check_dirac_algebra(b + (b5,))
    if not post.all_passed:
        names = ", ".join(c.name for c in post.failures())
        raise ValueError(f"constructed fifth matrix fails: {names}")
    return b5


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    residual: ExactMatrix
    gated: bool = True


@dataclass(frozen=True)
class ConditionReport:
    """Value-typed result of an exact identity suite; failures are data."""

    label: str
    checks: tuple

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks if c.gated)

    def failures(self):
        return [c for c in self.checks if c.gated and not c.passed]

    @property
    def gated_count(self) -> int:
        return sum(1 for c in self.checks if c.gated)

    @property
    def passed_count(self) -> int:
        return sum(1 for c in self.checks if c.gated and c.passed)

    def format(self) -> str:
        width = max(len(c.name) for c in self.checks)
        lines = [f"[{self.label}]"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            tag = "" if c.gated else "  (informational)"
            extra = ""
            if not c.passed:
                extra = f"  max|residual| = {c.residual.max_abs():g}"
            lines.append(f"  {c.name:<{width}}  {status}{tag}{extra}")
        lines.append(
            f"  {self.passed_count}/{self.gated_count} conditions pass"
        )
        return "\n".join(lines)


def _check(name: str, residual: ExactMatrix, gated: bool = True) -> ConditionCheck:
    return ConditionCheck(name, residual.is_zero(), residual, gated)


def check_dirac_algebra(b, label: str = "dirac algebra") -> ConditionReport:
    """Check {B_mu, B_nu} = 2 delta_mu_nu I for every unordered pair."""
    b = tuple(b)
    n = b[0].n
    ident = ExactMatrix.identity(n)
    checks = []
    for mu in range(len(b)):
        for nu in range(mu, len(b)):
            want = ident * 2 if mu == nu else ExactMatrix.zeros(n)
            resid = anticommutator(b[mu], b[nu]) - want
            rhs = "2I" if mu == nu else "0"
            checks.append(_check(f"{{B{mu + 1},B{nu + 1}}} = {rhs}", resid))
    return ConditionReport(label, tuple(checks))


def check_linearization_conditions(rep: DiracRep) -> ConditionReport:
    """Check every coefficient condition needed for the squared first-order
    operator to reproduce the free dispersion: A^2 = 0, C^2 = 0,
    AC + CA = -2I, {A,B_i} = {C,B_i} = 0, {B_i,B_j} = 2 delta_ij I.

    Singularity of A and C is reported as an informational row, not gated.
    """
    A, C = rep.A, rep.C
    n4 = A.n
    zero = ExactMatrix.zeros(n4)
    checks = [
        _check("A^2 = 0", A @ A),
        _check("C^2 = 0", C @ C),
        _check("AC+CA = -2I", anticommutator(A, C) + ExactMatrix.identity(n4) * 2),
    ]
    for i in range(3):
        checks.append(_check(f"{{A,B{i + 1}}} = 0", anticommutator(A, rep.b[i])))
    for i in range(3):
        checks.append(_check(f"{{C,B{i + 1}}} = 0", anticommutator(C, rep.b[i])))
    for i in range(3):
        for j in range(i, 3):
            want = ExactMatrix.identity(n4) * 2 if i == j else zero
            resid = anticommutator(rep.b[i], rep.b[j]) - want
            rhs = "2I" if i == j else "0"
            checks.append(_check(f"{{B{i + 1},B{j + 1}}} = {rhs}", resid))
    for name, mat in (("det(A) = 0", A), ("det(C) = 0", C)):
        d = mat.det()
        resid = ExactMatrix(((d,),))
        checks.append(_check(name, resid, gated=False))
    label = f"{rep.kind}, a={rep.a}"
    if rep.b5_sign < 0:
        label += ", alternate B5 sign"
    return ConditionReport(label, tuple(checks))


def sigma_dot(v):
    """sigma . v = v1 sigma1 + v2 sigma2 + v3 sigma3.

    Exact-typed components (int, Fraction, ExactComplex) produce an exact
    2x2 matrix; float or complex components produce a numpy array.
    """
    if len(v) != 3:
        raise ValueError("sigma_dot expects a 3-vector")
    try:
        comps = [as_exact(x) for x in v]
    except TypeError:
        s1, s2, s3 = (s.to_numpy() for s in _SIGMAS)
        return v[0] * s1 + v[1] * s2 + v[2] * s3
    out = ExactMatrix.zeros(2)
    for c, s in zip(comps, _SIGMAS):
        out = out + s * c
    return out


def theta_symbol(rep: DiracRep, k, omega: float, mass: float = 1.0) -> np.ndarray:
    """Fourier symbol of the first-order operator at wavevector k, frequency
    omega: (A/c) hbar omega + B_i hbar k_i + m c C, as a float 4x4 matrix.

    Its square must equal (hbar^2 k^2 - 2 m hbar omega) I.
    """
    k = np.asarray(k, dtype=float)
    if k.shape != (3,):
        raise ValueError("k must be a real 3-vector")
    theta = (HBAR * omega / C_LIGHT) * rep.A.to_numpy()
    for i in range(3):
        theta += HBAR * k[i] * rep.b[i].to_numpy()
    theta += mass * C_LIGHT * rep.C.to_numpy()
    return theta


def _frac_halves(num: int) -> ExactComplex:
    return ExactComplex.of(Fraction(num, 2))


STANDARD_A_SWEEP = (
    _frac_halves(-1),
    _frac_halves(1),
    ExactComplex.of(0, Fraction(1, 2)),
    ExactComplex.of(0, Fraction(-1, 2)),
    ExactComplex.of(1),
    ExactComplex.of(-1),
    ExactComplex.of(Fraction(3, 7)),
)
