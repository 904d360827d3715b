"""Exact identities of the Pauli/Dirac matrix construction."""

import dataclasses
from fractions import Fraction

import numpy as np
import pytest

import spinorlab as sl
from spinorlab.algebra import ID2, ID4, STANDARD_A_SWEEP, assemble_rep
from spinorlab.exact import EC_I, ExactComplex, ExactMatrix


def ec(re, im=0):
    return ExactComplex.of(Fraction(re), Fraction(im))


class TestExactArithmetic:
    def test_complex_ops(self):
        a = ec(1, 2)
        b = ec(3, -1)
        assert a + b == ec(4, 1)
        assert a * b == ec(5, 5)
        assert (a / b) * b == a
        assert a.conjugate() == ec(1, -2)
        assert (a - a).is_zero()

    def test_divide_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            ec(1) / ec(0)

    def test_matrix_roundtrip(self):
        m = sl.pauli(2)
        np.testing.assert_allclose(m.to_numpy(), [[0, -1j], [1j, 0]])
        assert m.adjoint() == m
        assert (m @ m) == ID2

    def test_det(self):
        assert sl.pauli(1).det() == ec(-1)
        assert ID4.det() == ec(1)


class TestPauli:
    def test_printed_entries(self):
        assert sl.pauli(1) == ExactMatrix.from_rows([[0, 1], [1, 0]])
        assert sl.pauli(3) == ExactMatrix.from_rows([[1, 0], [0, -1]])

    def test_product_identity(self):
        # sigma1 sigma2 sigma3 = i * identity
        assert sl.pauli(1) @ sl.pauli(2) @ sl.pauli(3) == ID2 * EC_I

    def test_index_range(self):
        with pytest.raises(IndexError):
            sl.pauli(0)
        with pytest.raises(IndexError):
            sl.pauli(4)


class TestKron:
    def test_identity(self):
        assert sl.kron(ID2, ID2) == ID4

    def test_block_layout_matches_numpy(self):
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                ours = sl.kron(sl.pauli(i), sl.pauli(j)).to_numpy()
                ref = np.kron(sl.pauli(i).to_numpy(), sl.pauli(j).to_numpy())
                np.testing.assert_array_equal(ours, ref)

    def test_sigma3_sigma2_block_diagonal(self):
        m = sl.kron(sl.pauli(3), sl.pauli(2)).to_numpy()
        s2 = sl.pauli(2).to_numpy()
        np.testing.assert_array_equal(m[:2, :2], s2)
        np.testing.assert_array_equal(m[2:, 2:], -s2)
        assert np.all(m[:2, 2:] == 0) and np.all(m[2:, :2] == 0)


class TestAnticommutator:
    def test_distinct_paulis(self):
        assert sl.anticommutator(sl.pauli(1), sl.pauli(2)).is_zero()

    def test_same_pauli(self):
        assert sl.anticommutator(sl.pauli(1), sl.pauli(1)) == ID2 * 2

    def test_b4_b5_convenient(self):
        rep = sl.dirac_rep("convenient", Fraction(-1, 2))
        assert sl.anticommutator(rep.b[3], rep.b[4]).is_zero()

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            sl.anticommutator(ID2, ID4)


class TestDiracRep:
    def test_convenient_ac_forms(self):
        # A has a single nonzero 2x2 block 2a*1 lower-left, C has 2b*1 upper-right.
        rep = sl.dirac_rep("convenient", Fraction(-1, 2))
        a_np = rep.A.to_numpy()
        np.testing.assert_array_equal(a_np[2:, :2], -np.eye(2))  # 2a = -1
        a_np[2:, :2] = 0
        assert np.all(a_np == 0)
        c_np = rep.C.to_numpy()
        np.testing.assert_array_equal(c_np[:2, 2:], 2.0 * np.eye(2))  # b = 1
        c_np[:2, 2:] = 0
        assert np.all(c_np == 0)

    def test_original_b5_blocks(self):
        rep = sl.dirac_rep("original", Fraction(-1, 2))
        b5 = rep.b[4].to_numpy()
        np.testing.assert_array_equal(b5[:2, 2:], -1j * np.eye(2))
        np.testing.assert_array_equal(b5[2:, :2], 1j * np.eye(2))

    def test_parameter_conventions(self):
        # Greiner/Hladik convention: a = i/2 hence b = i.
        rep = sl.dirac_rep("convenient", ExactComplex.of(0, Fraction(1, 2)))
        assert rep.b_param == EC_I
        # Du Toit: a = 1/2 hence b = -1.
        rep = sl.dirac_rep("original", Fraction(1, 2))
        assert rep.b_param == ec(-1)

    def test_a_zero_rejected(self):
        with pytest.raises(ValueError):
            sl.dirac_rep("convenient", 0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            sl.dirac_rep("chiral", Fraction(1, 2))

    def test_ab_product_constraint(self):
        for a in STANDARD_A_SWEEP:
            rep = sl.dirac_rep("convenient", a)
            assert (2 * rep.a * rep.b_param) == ec(-1)


class TestConditionChecks:
    @pytest.mark.parametrize("kind", ["original", "convenient"])
    @pytest.mark.parametrize("a", STANDARD_A_SWEEP, ids=str)
    def test_all_conditions_pass(self, kind, a):
        rep = sl.dirac_rep(kind, a)
        lin = sl.check_linearization_conditions(rep)
        assert lin.all_passed, lin.format()
        dirac = sl.check_dirac_algebra(rep.b)
        assert dirac.all_passed, dirac.format()
        assert dirac.gated_count == 15

    @pytest.mark.parametrize("kind", ["original", "convenient"])
    def test_alternate_b5_sign(self, kind):
        rep = sl.dirac_rep(kind, Fraction(-1, 2), b5_sign=-1)
        assert sl.check_linearization_conditions(rep).all_passed
        assert sl.check_dirac_algebra(rep.b).all_passed

    def test_b5_replaced_by_b4_fails_nilpotency(self):
        rep = sl.dirac_rep("convenient", Fraction(-1, 2))
        broken = assemble_rep("convenient", rep.b[:4] + (rep.b[3],), rep.a)
        report = sl.check_linearization_conditions(broken)
        failed = {c.name for c in report.failures()}
        # A = a(B4 + i B4) squares to 2i a^2 I, nonzero.
        assert "A^2 = 0" in failed

    def test_commuting_kron_factors_fail(self):
        bad = [sl.kron(sl.pauli(i), ID2) for i in (1, 2, 3)]
        bad.append(sl.kron(ID2, sl.pauli(1)))
        bad.append(bad[0] @ bad[1] @ bad[2] @ bad[3])
        report = sl.check_dirac_algebra(bad)
        assert not report.all_passed
        failed = {c.name for c in report.failures()}
        assert "{B1,B4} = 0" in failed  # commuting factors cannot anticommute

    def test_singularity_rows_informational(self):
        rep = sl.dirac_rep("convenient", Fraction(-1, 2))
        report = sl.check_linearization_conditions(rep)
        info = [c for c in report.checks if not c.gated]
        assert {c.name for c in info} == {"det(A) = 0", "det(C) = 0"}
        assert all(c.passed for c in info)  # both are in fact singular


class TestFifthMatrix:
    def test_original_reproduces_printed_matrix(self):
        rep = sl.dirac_rep("original", Fraction(1, 2))
        b5 = sl.fifth_matrix(rep.b[:4])
        assert b5 == rep.b[4]
        # sigma2 (x) identity: off-diagonal -i, +i identity blocks
        assert b5 == sl.kron(sl.pauli(2), ID2)

    def test_convenient_reproduces_printed_matrix(self):
        rep = sl.dirac_rep("convenient", Fraction(1, 2))
        b5 = sl.fifth_matrix(rep.b[:4])
        np.testing.assert_array_equal(b5.to_numpy()[:2, 2:], 1j * np.eye(2))
        np.testing.assert_array_equal(b5.to_numpy()[2:, :2], -1j * np.eye(2))

    @pytest.mark.parametrize("kind", ["original", "convenient"])
    def test_squares_to_identity_and_anticommutes(self, kind):
        rep = sl.dirac_rep(kind, Fraction(-1, 2))
        b5 = sl.fifth_matrix(rep.b[:4])
        assert (b5 @ b5) == ID4
        for p in range(4):
            assert sl.anticommutator(b5, rep.b[p]).is_zero()

    def test_rejects_invalid_inputs(self):
        bad = [sl.kron(sl.pauli(i), ID2) for i in (1, 2, 3)]
        bad.append(sl.kron(ID2, sl.pauli(1)))
        with pytest.raises(ValueError, match="Dirac algebra"):
            sl.fifth_matrix(bad)


class TestSigmaDot:
    def test_exact_cross_product(self):
        m = sl.sigma_dot((1, 0, 0)) @ sl.sigma_dot((0, 1, 0))
        assert m == sl.pauli(3) * EC_I

    def test_exact_square(self):
        m = sl.sigma_dot((1, 2, 3))
        assert (m @ m) == ID2 * 14

    def test_mixed_vector_expansion(self):
        # (sigma.a)(sigma.b) with a=(1,1,0), b=(1,-1,0): a.b = 0, a x b = (0,0,-2)
        m = sl.sigma_dot((1, 1, 0)) @ sl.sigma_dot((1, -1, 0))
        assert m == sl.sigma_dot((0, 0, -2)) * EC_I

    def test_float_identity_random(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            a = rng.normal(size=3)
            b = rng.normal(size=3)
            lhs = sl.sigma_dot(a) @ sl.sigma_dot(b)
            rhs = np.dot(a, b) * np.eye(2) + 1j * sl.sigma_dot(np.cross(a, b))
            assert np.max(np.abs(lhs - rhs)) < 1e-13


class TestThetaSymbol:
    def test_square_reproduces_dispersion(self):
        rep = sl.dirac_rep("convenient", Fraction(-1, 2))
        rng = np.random.default_rng(3)
        ident = np.eye(4)
        worst = 0.0
        for _ in range(1000):
            k = rng.uniform(-5, 5, size=3)
            w = rng.uniform(-5, 5)
            th = sl.theta_symbol(rep, k, w, mass=1.0)
            worst = max(worst, np.max(np.abs(th @ th - (k @ k - 2 * w) * ident)))
        assert worst < 1e-12

    def test_on_shell_square_vanishes(self):
        rep = sl.dirac_rep("convenient", Fraction(-1, 2))
        th = sl.theta_symbol(rep, (1.0, 0.0, 0.0), 0.5, mass=1.0)
        assert np.max(np.abs(th @ th)) < 1e-14

    def test_zero_arguments_give_nilpotent_c(self):
        rep = sl.dirac_rep("original", Fraction(-1, 2))
        th = sl.theta_symbol(rep, (0.0, 0.0, 0.0), 0.0, mass=1.0)
        np.testing.assert_allclose(th, rep.C.to_numpy())
        assert np.max(np.abs(th @ th)) == 0.0

    def test_mass_dependence(self):
        rep = sl.dirac_rep("convenient", Fraction(1, 2))
        rng = np.random.default_rng(9)
        for _ in range(50):
            k = rng.uniform(-3, 3, size=3)
            w = rng.uniform(-3, 3)
            m = rng.uniform(0.5, 2.0)
            th = sl.theta_symbol(rep, k, w, mass=m)
            resid = th @ th - (k @ k - 2 * m * w) * np.eye(4)
            assert np.max(np.abs(resid)) < 1e-12


def test_rep_is_immutable():
    rep = sl.dirac_rep("convenient", Fraction(-1, 2))
    with pytest.raises(dataclasses.FrozenInstanceError):
        rep.a = ec(1)
