"""
Unit tests for Gaussian power sums.
"""
import pytest

import app.service.gsum as gsum
from app.models.gaussint import GaussInt, mul_i_pow, vp_gauss
from app.models.models import LocationClass
from app.service.gsum import (
    check_square_symmetry,
    f_brute,
    f_factored,
    g_exact,
    g_mod,
    location_class,
    s_exact_row,
    s_row,
    satisfies_location,
    verify_polynomiality,
    vp_g,
    vp_g_batch,
)
from app.service.powersum import s_exact, s_faulhaber, s_table_mod
from app.shared.errors import InvalidArgumentsError, ZeroSumError


class TestExactSums:
    """Test cases for F_n(k,m) and G_n(N)."""

    def test_known_values(self):
        assert f_factored(5, 4, 4) == GaussInt(-7100, -7100)
        assert f_factored(0, 3, 4) == GaussInt(12, 0)
        assert g_exact(3, 3) == GaussInt(-27, 27)
        assert g_exact(5, 5).format() == "-7100 - 7100i"

    def test_factored_matches_brute_force(self):
        for n in range(0, 9):
            for k in range(1, 7):
                for m in range(1, 7):
                    assert f_factored(n, k, m) == f_brute(n, k, m), (n, k, m)

    def test_power_sums_come_from_faulhaber(self, mocker):
        faulhaber = mocker.patch("app.service.gsum.s_faulhaber", wraps=s_faulhaber)
        assert f_factored(3, 40, 40) == f_brute(3, 40, 40)
        assert faulhaber.call_count == 4
        faulhaber.reset_mock()
        assert f_factored(6, 3, 3) == f_brute(6, 3, 3)
        faulhaber.assert_not_called()

    def test_s_row(self):
        assert s_row(4, 6) == s_exact_row(4, 6) == [s_exact(r, 6) for r in range(5)]
        assert s_row(6, 4) == [s_exact(r, 4) for r in range(7)]

    def test_rectangle_is_not_symmetric_in_general(self):
        # F_n(k,m) and F_n(m,k) differ by conjugation and a power of i
        z = f_factored(3, 2, 5)
        w = f_factored(3, 5, 2)
        assert w == mul_i_pow(z.conj(), 3)

    def test_g_exact_requires_n_at_least_two(self):
        with pytest.raises(InvalidArgumentsError):
            g_exact(3, 1)

    def test_square_symmetry(self):
        for n in range(0, 21):
            for big_n in range(2, 13):
                assert check_square_symmetry(n, big_n)

    def test_location_classes(self):
        assert location_class(4) is LocationClass.REAL
        assert location_class(5) is LocationClass.DIAGONAL
        assert location_class(6) is LocationClass.IMAGINARY
        assert location_class(7) is LocationClass.ANTIDIAGONAL
        for n in range(0, 21):
            for big_n in range(2, 13):
                assert satisfies_location(g_exact(n, big_n), location_class(n)), (n, big_n)

    def test_satisfies_location_negative(self):
        assert not satisfies_location(GaussInt(1, 2), LocationClass.DIAGONAL)
        assert not satisfies_location(GaussInt(1, 2), LocationClass.REAL)


class TestModularSums:
    """Test cases for G_n(p) mod p^K."""

    def test_g_mod_example(self):
        assert g_mod(1, 7, 2).format() == "re=28 im=28 (mod 49)"

    def test_g_mod_golden_table(self, golden_mod_p2):
        for p, n, re, im in golden_mod_p2:
            g = g_mod(n, p, 2)
            assert (g.re.value, g.im.value) == (re, im), (p, n)

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
    def test_g_mod_matches_exact(self, p):
        for n in range(0, 2 * p + 1):
            exact = g_exact(n, p)
            for k in range(1, 7):
                g = g_mod(n, p, k)
                assert (g.re.value, g.im.value) == (exact.re % p ** k, exact.im % p ** k), (p, n, k)

    def test_g_mod_with_shared_table(self):
        table = s_table_mod(12, 11, 3)
        assert g_mod(9, 11, 3, table) == g_mod(9, 11, 3)

    def test_g_mod_rejects_incompatible_table(self):
        table = s_table_mod(5, 11, 3)
        with pytest.raises(InvalidArgumentsError):
            g_mod(9, 11, 3, table)
        with pytest.raises(InvalidArgumentsError):
            g_mod(3, 11, 2, table)

    def test_g_mod_rejects_bad_precision(self):
        with pytest.raises(InvalidArgumentsError):
            g_mod(3, 7, 0)


class TestValuation:
    """Test cases for the adaptive valuation."""

    def test_known_valuations(self):
        assert vp_g(5, 5) == 2
        assert vp_g(3, 3) == 3
        assert vp_g(0, 7) == 0

    def test_golden_valuations(self, golden_valuations):
        for p, expected in golden_valuations.items():
            assert [vp_g(n, p) for n in range(1, p - 1)] == expected

    def test_matches_exact_valuation(self):
        for p in (3, 5, 7):
            for n in range(1, 25):
                assert vp_g(n, p) == vp_gauss(g_exact(n, p), p), (p, n)

    def test_precision_doubling(self, mocker):
        # v_3(G_1458(3)) = 8, so the residue mod 3^8 vanishes and K doubles
        spy = mocker.spy(gsum, "g_mod")
        assert vp_g(1458, 3) == vp_gauss(g_exact(1458, 3), 3) == 8
        assert [c.args[2] for c in spy.call_args_list] == [8, 16]

    def test_zero_sum_raises(self, mocker):
        # ceiling below the start precision goes straight to exact arithmetic
        mocker.patch("app.service.gsum.f_factored", return_value=GaussInt(0, 0))
        with pytest.raises(ZeroSumError):
            vp_g(1, 7, ceiling=4)

    def test_batch_matches_single(self, golden_valuations):
        for p, expected in golden_valuations.items():
            batch = vp_g_batch(p, range(1, p - 1))
            assert [batch[n] for n in range(1, p - 1)] == expected
        assert vp_g_batch(7, []) == {}


class TestPolynomiality:
    """Test cases for polynomiality in (k, m)."""

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_interpolation_predicts(self, n):
        assert verify_polynomiality(n, n + 3)

    def test_grid_too_small(self):
        with pytest.raises(InvalidArgumentsError):
            verify_polynomiality(2, 4)
