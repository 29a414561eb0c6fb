"""Residue reduction, unit-ball lattices, annihilators, Baer classification."""

import random
from fractions import Fraction

import numpy as np
import pytest

from padicops.charduals import TruncatedGroup
from padicops.errors import NotInUnitBall
from padicops.padic import PadicScalar
from padicops.reduction import (
    FiniteAlgebra,
    classify_type,
    compute_center,
    dedekind_finite_spotcheck,
    is_baer,
    left_annihilator,
    reduce_algebra,
    reduce_matrix,
    verify_crossed_reduction,
)
from padicops.report import all_passed
from padicops.ultralinalg import KMatrix, MatrixAlgebra, algebra_span, is_orthonormal


def random_unit_ball_matrix(p, n, rng):
    return KMatrix.from_int_rows(
        p, [[rng.randint(-3 * p, 3 * p) for _ in range(n)] for _ in range(n)]
    )


def matrix_units(p, n):
    out = []
    for i in range(n):
        for j in range(n):
            rows = [[0] * n for _ in range(n)]
            rows[i][j] = 1
            out.append(KMatrix.from_int_rows(p, rows))
    return out


def full_matrix_algebra_fp(p, n):
    basis = []
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n), dtype=np.int64)
            E[i, j] = 1
            basis.append(E)
    return FiniteAlgebra(p, n, basis)


def dual_numbers(p):
    I2 = np.eye(2, dtype=np.int64)
    N = np.array([[0, 1], [0, 0]], dtype=np.int64)
    return FiniteAlgebra(p, 2, [I2, N]), N


class TestReduceMatrix:
    def test_ring_homomorphism_random(self):
        rng = random.Random(51)
        p = 5
        for _ in range(500):
            A = random_unit_ball_matrix(p, 2, rng)
            B = random_unit_ball_matrix(p, 2, rng)
            assert np.array_equal(
                reduce_matrix(A @ B), (reduce_matrix(A) @ reduce_matrix(B)) % p
            )
            assert np.array_equal(
                reduce_matrix(A + B), (reduce_matrix(A) + reduce_matrix(B)) % p
            )

    def test_norm_exceeding_rejected(self):
        p = 5
        A = KMatrix(
            p,
            [
                [PadicScalar.from_rational(p, Fraction(1, 5)), PadicScalar.zero(p)],
                [PadicScalar.zero(p), PadicScalar.one(p)],
            ],
        )
        with pytest.raises(NotInUnitBall):
            reduce_matrix(A)


class TestReduceAlgebra:
    def test_lattice_basis_is_orthonormal(self):
        p = 5
        P = KMatrix.from_int_rows(p, [[1, 0], [0, 0]])
        alg = MatrixAlgebra(p, 2, [KMatrix.identity(p, 2), P])
        lattice, reduced = reduce_algebra(alg)
        assert is_orthonormal([B.as_vector() for B in lattice.basis])
        assert reduced.dimension == 2

    def test_repair_of_dependent_reductions(self):
        # basis {I, I + pN} reduces to {I, I}; repair must recover N
        p = 5
        I = KMatrix.identity(p, 2)
        N = KMatrix.from_int_rows(p, [[0, 1], [0, 0]])
        scaled = I + N.scale(PadicScalar.from_int(p, p))
        alg = MatrixAlgebra(p, 2, [I, scaled])
        lattice, reduced = reduce_algebra(alg)
        assert is_orthonormal([B.as_vector() for B in lattice.basis])
        assert reduced.dimension == 2
        assert reduced.contains(np.array([[0, 1], [0, 0]]))

    def test_scaling_is_normalized(self):
        p = 3
        A = KMatrix.from_int_rows(p, [[p, 0], [0, p]])
        alg = MatrixAlgebra(p, 2, [A])
        lattice, reduced = reduce_algebra(alg)
        assert reduced.dimension == 1
        assert reduced.contains(np.eye(2, dtype=np.int64))


class TestAnnihilators:
    def test_subset_equals_right_ideal(self):
        rng = random.Random(52)
        alg = full_matrix_algebra_fp(3, 2)
        for _ in range(20):
            subset = [
                alg.element([rng.randrange(3) for _ in range(alg.dimension)])
                for _ in range(rng.randint(1, 3))
            ]
            # check_ideal=True asserts the subset/right-ideal identity
            left_annihilator(alg, subset, check_ideal=True)

    def test_dual_numbers_annihilator(self):
        alg, N = dual_numbers(3)
        ann = left_annihilator(alg, [N])
        assert len(ann) == 1
        assert np.array_equal(ann[0], N % 3)


class TestBaer:
    def test_full_matrix_algebra_exhaustive(self):
        report = is_baer(full_matrix_algebra_fp(3, 2), mode="exhaustive")
        assert report.is_baer is True
        assert report.search_mode == "exhaustive"

    def test_dual_numbers_fail_with_witness(self):
        alg, N = dual_numbers(5)
        report = is_baer(alg, mode="exhaustive")
        assert report.is_baer is False
        assert report.type_verdict == "not-baer"
        # the witness is ann(x) = span{x} in F_p[x]/(x^2)
        assert report.failing_annihilator is not None
        assert np.array_equal(report.failing_annihilator[0], N % 5)

    def test_sampled_mode_on_larger_algebra(self):
        report = is_baer(full_matrix_algebra_fp(5, 3), mode="sampled", n_samples=60)
        assert report.is_baer is True
        assert report.search_mode == "sampled"

    def test_witness_reverifies(self):
        alg = full_matrix_algebra_fp(3, 2)
        report = classify_type(alg)
        assert report.type_verdict == "I"
        e = report.witness_idempotent
        assert np.array_equal(alg.mul(e, e), e)
        # compressed algebra eRe is commutative
        compressed = [alg.mul(alg.mul(e, B), e) for B in alg.basis]
        for A in compressed:
            for B in compressed:
                assert np.array_equal(alg.mul(A, B), alg.mul(B, A))

    def test_center_of_full_matrix_algebra(self):
        assert len(compute_center(full_matrix_algebra_fp(5, 3))) == 1

    def test_block_algebra_two_central_idempotents(self):
        # M_2(F_3) + M_1(F_3) block diagonal inside 3x3
        basis = []
        for i in range(2):
            for j in range(2):
                E = np.zeros((3, 3), dtype=np.int64)
                E[i, j] = 1
                basis.append(E)
        E22 = np.zeros((3, 3), dtype=np.int64)
        E22[2, 2] = 1
        basis.append(E22)
        alg = FiniteAlgebra(3, 3, basis)
        assert len(compute_center(alg)) == 2
        report = classify_type(alg)
        assert report.type_verdict == "I"
        assert report.detail["central_blocks"] == 2

    def test_dedekind_finiteness(self):
        assert dedekind_finite_spotcheck(full_matrix_algebra_fp(3, 2), trials=200)
        alg, _ = dual_numbers(3)
        assert dedekind_finite_spotcheck(alg, trials=50)


class TestCrossedReduction:
    def test_small_free_configuration(self):
        results = verify_crossed_reduction(TruncatedGroup(2, 1, 1, 3))
        assert all_passed(results), [r.name for r in results if not r.passed]

    def test_mihara_algebra_reduces(self):
        p = 3
        A = KMatrix.from_int_rows(p, [[p, p, 0], [0, p, 0], [0, 0, 1]])
        alg = algebra_span([A], 3)
        lattice, reduced = reduce_algebra(alg)
        assert reduced.dimension == alg.dimension == 3
        assert reduced.is_closed()
