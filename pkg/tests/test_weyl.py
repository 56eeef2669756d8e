import numpy as np
import pytest

from quditsim import weyl
from quditsim.errors import DimensionMismatchError, TooLargeError


def rand_row(rng, n, d):
    r = int(rng.integers(0, 2 * d))
    if d % 2 == 1 and r % 2 == 1:
        r = (r + d) % (2 * d)
    return weyl.PauliRow(rng.integers(0, d, n), rng.integers(0, d, n), r, d)


class TestPhases:
    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_tau_squared_is_omega(self, d):
        assert np.isclose(weyl.tau_power(2, d), weyl.omega_power(1, d))
        assert np.isclose(weyl.tau_power(2 * d, d), 1.0)

    def test_tau_qubit_is_i(self):
        assert np.isclose(weyl.tau_power(1, 2), 1j)

    @pytest.mark.parametrize("d", [3, 5, 7])
    def test_tau_order_d_for_odd(self, d):
        assert np.isclose(weyl.tau_power(d, d), 1.0)


class TestCompose:
    def test_worked_row_product(self):
        # s2 <- s2 * s0 * s0 from the qutrit reduction walkthrough
        s2 = weyl.PauliRow([0, 0, 0], [2, 0, 1], 0, 3)
        s0 = weyl.PauliRow([0, 0, 0], [0, 0, 1], 4, 3)
        out = weyl.compose(weyl.compose(s2, s0), s0)
        assert np.array_equal(out.z, [2, 0, 0]) and not out.x.any()
        assert out.r == 2

    def test_destabilizer_product_with_cross_term(self):
        # r <- r1 + r2 + 2*(z1 . x2) = 0 + 4 + 4 = 8 = 2 (mod 6)
        d1 = weyl.PauliRow([0, 1], [1, 0], 0, 3)
        d2 = weyl.PauliRow([2, 2], [0, 2], 4, 3)
        out = weyl.compose(d1, d2)
        assert np.array_equal(out.x, [2, 0])
        assert np.array_equal(out.z, [1, 2])
        assert out.r == 2

    def test_identity_is_neutral(self, rng):
        for _ in range(20):
            d = int(rng.choice([2, 3, 4, 5]))
            g = rand_row(rng, 2, d)
            assert weyl.compose(weyl.identity_row(2, d), g) == g
            assert weyl.compose(g, weyl.identity_row(2, d)) == g

    def test_xz_vs_zx_phase_gap(self):
        x = weyl.x_row(1, 3, 0)
        z = weyl.z_row(1, 3, 0)
        xz = weyl.compose(x, z)
        zx = weyl.compose(z, x)
        assert (zx.r - xz.r) % 6 == 2
        assert np.allclose(weyl.dense_row(xz), weyl.dense_row(x) @ weyl.dense_row(z))
        assert np.allclose(weyl.dense_row(zx), weyl.dense_row(z) @ weyl.dense_row(x))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            weyl.compose(weyl.x_row(1, 3, 0), weyl.x_row(2, 3, 0))
        with pytest.raises(DimensionMismatchError):
            weyl.compose(weyl.x_row(1, 3, 0), weyl.x_row(1, 5, 0))

    def test_against_dense_oracle(self, rng):
        for _ in range(500):
            d = int(rng.choice([2, 3, 4, 5]))
            n = int(rng.integers(1, 3))
            a, b = rand_row(rng, n, d), rand_row(rng, n, d)
            got = weyl.dense_row(weyl.compose(a, b))
            want = weyl.dense_row(a) @ weyl.dense_row(b)
            assert np.allclose(got, want, atol=1e-12)


class TestRowPower:
    def test_pivot_normalization_example(self):
        g = weyl.PauliRow([2, 2, 2], [0, 0, 0], 0, 3)
        out = weyl.row_power(g, 2)
        assert np.array_equal(out.x, [1, 1, 1]) and not out.z.any() and out.r == 0

    def test_zeroth_power(self, rng):
        g = rand_row(rng, 3, 5)
        assert weyl.row_power(g, 0) == weyl.identity_row(3, 5)

    def test_dth_power_of_weyl_rows_is_identity_odd_d(self, rng):
        d = 5
        for _ in range(30):
            g = weyl.weyl_row(1, d, 0, int(rng.integers(0, d)), int(rng.integers(0, d)))
            out = weyl.row_power(g, d)
            assert out == weyl.identity_row(1, d)
            assert np.allclose(weyl.dense_row(out), np.eye(d))

    def test_xz_part_vanishes_at_power_d(self, rng):
        for d in (2, 3, 4, 5):
            g = rand_row(rng, 2, d)
            out = weyl.row_power(g, d)
            assert not out.x.any() and not out.z.any()

    def test_matches_iterated_compose(self, rng):
        for _ in range(100):
            d = int(rng.choice([2, 3, 4, 5, 6]))
            g = rand_row(rng, 2, d)
            acc = weyl.identity_row(2, d)
            for k in range(2 * d):
                assert weyl.row_power(g, k) == acc
                acc = weyl.compose(acc, g)


class TestSymplectic:
    def test_ghz_stabilizers_commute(self):
        rows = [
            weyl.PauliRow([2, 2, 2], [0, 0, 0], 0, 3),
            weyl.PauliRow([0, 0, 0], [2, 1, 0], 0, 3),
            weyl.PauliRow([0, 0, 0], [0, 2, 1], 0, 3),
        ]
        for a in rows:
            for b in rows:
                assert weyl.symplectic_product(a, b) == 0

    def test_self_product_zero(self, rng):
        g = rand_row(rng, 2, 5)
        assert weyl.symplectic_product(g, g) == 0

    def test_x_vs_z(self):
        x = weyl.x_row(1, 3, 0)
        z = weyl.z_row(1, 3, 0)
        assert weyl.symplectic_product(x, z) == 1
        assert weyl.symplectic_product(z, x) == 2  # -1 mod 3

    def test_antisymmetry_and_bilinearity(self, rng):
        for _ in range(100):
            d = int(rng.choice([2, 3, 4, 5]))
            a, b, c = (rand_row(rng, 2, d) for _ in range(3))
            sab = weyl.symplectic_product(a, b)
            assert (sab + weyl.symplectic_product(b, a)) % d == 0
            lhs = weyl.symplectic_product(weyl.compose(a, c), b)
            rhs = (sab + weyl.symplectic_product(c, b)) % d
            assert lhs == rhs

    def test_commutation_phase_against_dense(self, rng):
        # dense(a) dense(b) = omega^{<<b, a>>} dense(b) dense(a)
        for _ in range(100):
            d = int(rng.choice([2, 3, 4, 5]))
            a, b = rand_row(rng, 2, d), rand_row(rng, 2, d)
            phase = weyl.omega_power(weyl.symplectic_product(b, a), d)
            lhs = weyl.dense_row(a) @ weyl.dense_row(b)
            rhs = phase * weyl.dense_row(b) @ weyl.dense_row(a)
            assert np.allclose(lhs, rhs, atol=1e-12)


class TestDenseRow:
    def test_qutrit_weyl_11_matches_table(self):
        g = weyl.weyl_row(1, 3, 0, 1, 1)
        m = weyl.dense_row(g)
        w = weyl.omega_power(1, 3)
        assert np.isclose(m[1, 0], w)
        assert np.isclose(m[2, 1], w**2)
        assert np.isclose(m[0, 2], 1.0)

    def test_identity(self):
        assert np.allclose(weyl.dense_row(weyl.identity_row(2, 3)), np.eye(9))

    def test_qubit_y_up_to_convention(self):
        # W(1,1) = tau^{-1} X Z realizes minus the textbook Y at d = 2
        g = weyl.weyl_row(1, 2, 0, 1, 1)
        y = np.array([[0, -1j], [1j, 0]])
        assert np.allclose(weyl.dense_row(g), -y)

    def test_too_large(self):
        with pytest.raises(TooLargeError):
            weyl.dense_row(weyl.identity_row(20, 3))


def test_row_text():
    g = weyl.PauliRow([1, 0, 2], [1, 0, 1], 4, 3)
    assert weyl.row_to_text(g) == "tau^4 XZ (x) I (x) X2Z"
    assert weyl.row_to_text(weyl.identity_row(2, 3)) == "I (x) I"
