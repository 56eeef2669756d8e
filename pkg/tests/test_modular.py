import itertools
from math import gcd

import numpy as np
import pytest

from conftest import exact_det, mat_mul_mod
from quditsim import modular
from quditsim.errors import NotInvertibleError, UnsolvableError


class TestModInverse:
    @pytest.mark.parametrize("a, d, want", [(2, 3, 2), (1, 7, 1), (3, 5, 2)])
    def test_known_values(self, a, d, want):
        assert modular.mod_inverse(a, d) == want

    @pytest.mark.parametrize("d", [2, 3, 5, 7, 11, 13])
    def test_inverse_property(self, d):
        for a in range(1, d):
            assert (a * modular.mod_inverse(a, d)) % d == 1

    @pytest.mark.parametrize("a, d", [(0, 5), (2, 4), (3, 6), (10, 15)])
    def test_not_invertible(self, a, d):
        with pytest.raises(NotInvertibleError):
            modular.mod_inverse(a, d)


def brute_force_rowspan(rows, p):
    """All Z_p-linear combinations of the rows."""
    span = set()
    k = len(rows)
    for coeffs in itertools.product(range(p), repeat=k):
        v = tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % p for j in range(len(rows[0])))
        span.add(v)
    return span


class TestRref:
    def test_single_line_example(self):
        R, rank, pivots = modular.rref_mod_p([[2, 2, 2], [0, 0, 0], [0, 0, 0]], 3)
        assert rank == 1
        assert R[0] == [1, 1, 1]
        assert pivots == [0]

    def test_identity(self):
        eye = [[1, 0], [0, 1]]
        R, rank, _ = modular.rref_mod_p(eye, 5)
        assert R == eye and rank == 2

    def test_zero(self):
        R, rank, _ = modular.rref_mod_p([[0, 0], [0, 0]], 3)
        assert rank == 0 and R == [[0, 0], [0, 0]]

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_idempotent_and_span_preserving(self, p):
        rng = np.random.default_rng(11)
        for _ in range(40):
            m = int(rng.integers(1, 5))
            k = int(rng.integers(1, 5))
            M = rng.integers(0, p, size=(m, k)).tolist()
            R, rank, _ = modular.rref_mod_p(M, p)
            R2, rank2, _ = modular.rref_mod_p(R, p)
            assert R2 == R and rank2 == rank
            assert brute_force_rowspan(M, p) == brute_force_rowspan(R, p)


class TestSmithNormalForm:
    def check_contract(self, A):
        D, U, V = modular.smith_normal_form(A)
        m, k = len(A), len(A[0])
        # U A V == D, exactly
        UA = [[sum(U[i][t] * A[t][j] for t in range(m)) for j in range(k)] for i in range(m)]
        UAV = [[sum(UA[i][t] * V[t][j] for t in range(k)) for j in range(k)] for i in range(m)]
        assert UAV == D
        assert abs(exact_det(U)) == 1
        assert abs(exact_det(V)) == 1
        diag = [D[i][i] for i in range(min(m, k))]
        for i in range(m):
            for j in range(k):
                if i != j:
                    assert D[i][j] == 0
        for a, b in zip(diag, diag[1:]):
            assert a >= 0
            if a != 0:
                assert b % a == 0
            else:
                assert b == 0
        return diag

    def test_identity(self):
        D, U, V = modular.smith_normal_form([[1, 0], [0, 1]])
        assert D == [[1, 0], [0, 1]]
        assert U == [[1, 0], [0, 1]] and V == [[1, 0], [0, 1]]

    def test_already_diagonal(self):
        diag = self.check_contract([[2, 0], [0, 4]])
        assert diag == [2, 4]

    def test_small_example(self):
        diag = self.check_contract([[2, 4], [6, 8]])
        assert diag == [2, 4]

    def test_random_matrices(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            m = int(rng.integers(1, 7))
            k = int(rng.integers(1, 7))
            A = rng.integers(-20, 21, size=(m, k)).tolist()
            self.check_contract(A)

    def test_against_sympy(self):
        sympy = pytest.importorskip("sympy")
        from sympy.matrices.normalforms import smith_normal_form as sympy_snf

        rng = np.random.default_rng(5)
        for _ in range(25):
            A = rng.integers(-9, 10, size=(4, 4)).tolist()
            D, _, _ = modular.smith_normal_form(A)
            ref = sympy_snf(sympy.Matrix(A))
            ours = sorted(abs(D[i][i]) for i in range(4))
            theirs = sorted(abs(int(ref[i, i])) for i in range(4))
            assert ours == theirs


def brute_force_kernel(A, d):
    m = len(A)
    k = len(A[0])
    sols = set()
    for u in itertools.product(range(d), repeat=k):
        if all(sum(A[i][j] * u[j] for j in range(k)) % d == 0 for i in range(m)):
            sols.add(u)
    return sols


def span_mod(gens, d, k):
    if not gens:
        return {tuple([0] * k)}
    out = set()
    for coeffs in itertools.product(range(d), repeat=len(gens)):
        out.add(tuple(sum(c * g[j] for c, g in zip(coeffs, gens)) % d for j in range(k)))
    return out


class TestKernelModD:
    def test_single_row_example(self):
        gens = modular.kernel_mod_d([[2, 2, 2]], 3)
        for u in gens:
            assert sum(2 * v for v in u) % 3 == 0
        assert span_mod(gens, 3, 3) == brute_force_kernel([[2, 2, 2]], 3)

    def test_identity_only_zero(self):
        assert modular.kernel_mod_d([[1, 0], [0, 1]], 5) == []

    def test_zero_matrix_full_basis(self):
        gens = modular.kernel_mod_d([[0, 0, 0]], 4)
        assert span_mod(gens, 4, 3) == brute_force_kernel([[0, 0, 0]], 4)

    @pytest.mark.parametrize("d", [2, 3, 4, 6])
    def test_random_agreement(self, d):
        rng = np.random.default_rng(13)
        for _ in range(40):
            m = int(rng.integers(1, 4))
            k = int(rng.integers(1, 4))
            A = rng.integers(0, d, size=(m, k)).tolist()
            gens = modular.kernel_mod_d(A, d)
            assert span_mod(gens, d, k) == brute_force_kernel(A, d)


class TestSolveCongruence:
    def test_two_solutions(self):
        y0, step, count = modular.solve_congruence(2, 4, 6)
        sols = {(y0 + step * t) % 6 for t in range(count)}
        assert sols == {2, 5}

    def test_unit_coefficient(self):
        y0, step, count = modular.solve_congruence(1, 4, 7)
        assert (y0, count) == (4, 1)

    def test_free_variable(self):
        y0, step, count = modular.solve_congruence(0, 0, 5)
        assert {(y0 + step * t) % 5 for t in range(count)} == set(range(5))

    def test_unsolvable(self):
        with pytest.raises(UnsolvableError):
            modular.solve_congruence(2, 3, 6)

    def test_matches_enumeration(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            d = int(rng.integers(2, 13))
            s = int(rng.integers(0, d))
            c = int(rng.integers(0, d))
            want = {y for y in range(d) if (s * y - c) % d == 0}
            if not want:
                with pytest.raises(UnsolvableError):
                    modular.solve_congruence(s, c, d)
                continue
            y0, step, count = modular.solve_congruence(s, c, d)
            assert {(y0 + step * t) % d for t in range(count)} == want
            assert count == gcd(s, d) if s else count == d
