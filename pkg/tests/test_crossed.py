"""Crossed-product operators, commutation theorem, structured idempotents."""

import random
from fractions import Fraction

import pytest

from padicops.charduals import TruncatedGroup
from padicops.crossed import (
    StructuredCommutantElement,
    build_algebras,
    build_operator,
    eta,
    idempotent_check,
    mult_operator_on_s,
    nu_basis,
    point_index,
    space_dim,
    verify_commutation_theorem,
    verify_operator_identities,
)
from padicops.errors import IndexNotInG0
from padicops.padic import PadicScalar
from padicops.report import all_passed
from padicops.ultralinalg import KMatrix, MatrixAlgebra, commutant, is_orthonormal


FREE = TruncatedGroup(2, 2, 2, 5)
NONFREE = TruncatedGroup(2, 2, 1, 5)


class TestOperatorIdentities:
    @pytest.mark.parametrize("grp", [FREE, NONFREE], ids=["free", "nonfree"])
    def test_all_identities(self, grp):
        results = verify_operator_identities(grp)
        assert all_passed(results), [r.name for r in results if not r.passed]

    def test_nu_basis_orthonormal(self):
        from padicops.crossed import grid_to_vec

        for grp in (FREE, NONFREE):
            vectors = [grid_to_vec(grp, g) for (_, _, g) in nu_basis(grp)]
            assert is_orthonormal(vectors)

    def test_eta_outside_g0_rejected(self):
        with pytest.raises(IndexNotInG0):
            eta(NONFREE, 1)

    def test_multiplication_commutant_on_s(self):
        # finite analogue of the multiplication-algebra bicommutant
        for grp in (FREE, NONFREE):
            gens = [
                mult_operator_on_s(grp, eta(grp, i)) for i in grp.g0_indices()
            ]
            comm = commutant(gens, grp.s_size)
            assert comm.dimension == grp.s_size
            for G in gens:
                assert comm.contains(G)


class TestCommutationTheorem:
    @pytest.mark.parametrize(
        "grp",
        [TruncatedGroup(2, 1, 1, 3), FREE],
        ids=["(2,1,1,3)", "(2,2,2,5)"],
    )
    def test_free_cases(self, grp):
        results = verify_commutation_theorem(grp)
        assert all_passed(results), [r.name for r in results if not r.passed]
        center_dims = [
            r.detail["center_dim"] for r in results if "center_dim" in r.detail
        ]
        assert center_dims and all(d == 1 for d in center_dims)

    def test_nonfree_center_structure(self):
        results = verify_commutation_theorem(NONFREE)
        assert all_passed(results), [r.name for r in results if not r.passed]
        center_dims = [
            r.detail["center_dim"] for r in results if "center_dim" in r.detail
        ]
        assert center_dims and all(d > 1 for d in center_dims)


class TestBasePointCovariance:
    def _relabel(self, grp, t):
        p = grp.p
        zero, one = PadicScalar.zero(p), PadicScalar.one(p)
        n = space_dim(grp)
        entries = [[zero] * n for _ in range(n)]
        for x in range(grp.s_size):
            for a in range(grp.order):
                entries[point_index(grp, x, a)][
                    point_index(grp, (x + t) % grp.s_size, a)
                ] = one
        return KMatrix(p, entries)

    @pytest.mark.parametrize("grp", [FREE, NONFREE], ids=["free", "nonfree"])
    def test_algebras_invariant_under_base_point_shift(self, grp):
        algebras = build_algebras(grp)
        for t in range(1, grp.s_size):
            Pi = self._relabel(grp, t)
            Pi_inv = self._relabel(grp, -t % grp.s_size)
            for alg in (algebras.RI, algebras.RJ):
                conj = MatrixAlgebra(
                    grp.p,
                    space_dim(grp),
                    [Pi @ B @ Pi_inv for B in alg.basis],
                )
                assert conj.equals(alg)


class TestStructuredIdempotents:
    def test_zero_one_diagonal_is_orthoprojection(self):
        p = NONFREE.p
        b = {
            (m, m): PadicScalar.one(p)
            for m in range(NONFREE.order)
            if m % 2 == 0
        }
        verdict = idempotent_check(StructuredCommutantElement(NONFREE, b))
        assert verdict.idempotent and verdict.orthoprojection

    def test_unbounded_coefficient_idempotent_not_orthoprojection(self):
        grp = TruncatedGroup(2, 1, 1, 5)
        p = grp.p
        b = {
            (0, 0): PadicScalar.one(p),
            (0, 1): PadicScalar.from_rational(p, Fraction(1, 5)),
        }
        verdict = idempotent_check(StructuredCommutantElement(grp, b))
        assert verdict.idempotent
        assert not verdict.orthoprojection

    def test_agreement_with_matrix_level_random(self):
        rng = random.Random(41)
        p = NONFREE.p
        for _ in range(50):
            b = {}
            for m in range(NONFREE.order):
                for n in range(NONFREE.order):
                    if NONFREE.in_g0(m - n) and rng.random() < 0.7:
                        u = rng.randint(1, 20)
                        while u % p == 0:
                            u = rng.randint(1, 20)
                        b[(m, n)] = PadicScalar.from_rational(
                            p, Fraction(u) * Fraction(p) ** rng.randint(0, 1)
                        )
            elem = StructuredCommutantElement(NONFREE, b)
            # idempotent_check cross-validates the coefficient condition
            # against P^2 = P internally; reaching here means they agree
            verdict = idempotent_check(elem)
            P = elem.to_matrix()
            assert verdict.idempotent == (P @ P).equals(P)


class TestCommutantMembership:
    def test_structured_elements_commute_with_generators(self):
        rng = random.Random(42)
        grp = NONFREE
        algebras = build_algebras(grp)
        for _ in range(10):
            b = {}
            for m in range(grp.order):
                for n in range(grp.order):
                    if grp.in_g0(m - n):
                        b[(m, n)] = PadicScalar.from_int(grp.p, rng.randint(0, 10))
            P = StructuredCommutantElement(grp, b).to_matrix()
            for G in algebras.RI.basis:
                assert (P @ G).equals(G @ P)
