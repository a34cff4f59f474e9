from math import comb, factorial

import pytest

from rrt_cut.series import (
    BivariateSeries,
    M_series,
    G_series_from_dist,
    N_series_from_dist,
    check_ode_G,
    check_ode_M,
    check_ode_N,
    divide_by_unit,
    exp_series,
    f_series,
    log_inv_series,
    m_coefficient_residuals,
    p_v_power,
    pmul,
)
from rrt_cut.splitting import Rat, falling


def test_polynomial_arithmetic():
    a = (Rat(1, 1), Rat(2, 1))
    b = (Rat(0, 1), Rat(1, 1))
    assert pmul(a, b) == (Rat(0, 1), Rat(1, 1), Rat(2, 1))
    assert p_v_power(2, 3) == (Rat(0, 1), Rat(0, 1), Rat(3, 1))


def test_series_mul_and_diff():
    Z = 6
    L = log_inv_series(Z)
    omz = BivariateSeries.from_map(Z, {0: (Rat(1, 1),), 1: (Rat(-1, 1),)})
    # d/dz log(1/(1-z)) = 1/(1-z): (1-z) L' = 1
    assert (omz.truncate(Z - 1) * L.diff_z() - BivariateSeries.one(Z - 1)).is_zero()


def test_exp_inverts_log():
    Z = 10
    L = log_inv_series(Z)
    e = exp_series(L)  # exp(log(1/(1-z))) = 1/(1-z)
    assert all(e.coeff(i) == (Rat(1, 1),) for i in range(Z + 1))


def test_divide_by_unit_roundtrip():
    Z = 8
    den = BivariateSeries.from_map(
        Z, {0: (Rat(1, 1),), 1: (Rat(1, 2), Rat(3, 1)), 3: (Rat(-2, 5),)}
    )
    num = log_inv_series(Z)
    q = divide_by_unit(num, den)
    assert (q * den - num).is_zero()


def test_f_series_constant_term_is_one_at_v():
    # z -> 0 limit of the kernel is v L / z -> v
    f = f_series(6)
    assert f.coeff(0) == (Rat(0, 1), Rat(1, 1))


def test_M_series_single_target_counts_trees():
    # at v=1 the series must generate E(v^X)=1 with weight (n-1)^(0 falling)
    M = M_series(1, 8)
    assert all(sum(M.coeff(i), Rat(0, 1)) == 1 for i in range(9))


def test_M_coefficient_identity_small():
    assert m_coefficient_residuals(10, 3) == []


def test_N_at_v1_closed_forms():
    Z = 9
    # ell=1: sum z^n / n
    N1 = N_series_from_dist(1, Z).at_v1()
    assert N1 == tuple(Rat(0, 1) if i == 0 else Rat(1, i) for i in range(Z + 1))
    # ell>=2: (ell-2)! ((1-z)^(1-ell) - 1)
    for ell in (2, 3, 4):
        got = N_series_from_dist(ell, Z).at_v1()
        want = tuple(
            Rat(0, 1) if i == 0 else factorial(ell - 2) * Rat(comb(ell - 2 + i, i) * 1, 1)
            for i in range(Z + 1)
        )
        assert got == want


def test_G_at_v1_closed_form():
    Z = 9
    for ell in (1, 2, 3):
        got = G_series_from_dist(ell, Z).at_v1()
        want = tuple(
            Rat(comb(n, ell), n) if n >= ell else Rat(0, 1) for n in range(Z + 1)
        )
        assert got == want


def test_weighted_pgf_coefficients_of_N():
    # coefficient of z^(n+1-ell) carries the falling-factorial weight
    from rrt_cut.distributions import pmf_L

    ell, n = 3, 6
    N = N_series_from_dist(ell, 8)
    expected = tuple(falling(n - 1, ell - 2) * c for c in pmf_L(n, ell).pgf_coeffs())
    assert N.coeff(n + 1 - ell) == expected


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_ode_residuals_small(ell):
    assert check_ode_M(ell, 10).is_zero()
    assert check_ode_N(ell, 8).is_zero()
    assert check_ode_G(ell, 8).is_zero()


def test_truncation_mismatch_rejected():
    with pytest.raises(ValueError):
        log_inv_series(4) + log_inv_series(5)
