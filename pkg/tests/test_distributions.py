import numpy as np
import pytest

from rrt_cut.distributions import (
    ExactPmf,
    mean_float,
    mean_scaled_last,
    pmf,
    pmf_L,
    pmf_R,
    pmf_Y,
    stirling2,
)
from rrt_cut.splitting import Rat


def test_stirling_numbers():
    assert stirling2(0, 0) == 1
    assert stirling2(4, 2) == 7
    assert stirling2(5, 3) == 25
    assert stirling2(3, 5) == 0


def test_pmf_R_known_small_case():
    p = pmf_R(3, 1)
    assert p.probs == {1: Rat(1, 4), 2: Rat(3, 4)}
    assert p.mean() == Rat(7, 4)


def test_all_targets_is_deterministic():
    for n in range(1, 7):
        for rule in ("first", "last", "random"):
            p = pmf(rule, n, n)
            assert p.probs == {n - 1: Rat(1, 1)} if n > 1 else {0: Rat(1, 1)}


def test_single_node_tree():
    for rule in ("first", "last", "random"):
        assert pmf(rule, 1, 1).probs == {0: Rat(1, 1)}


def test_rules_coincide_for_full_ell_and_n2():
    assert pmf_R(2, 1).probs == pmf_L(2, 1).probs == pmf_Y(2, 1).probs == {1: Rat(1, 1)}


def test_support_bounds():
    for rule in ("first", "last", "random"):
        for n in range(2, 9):
            for ell in range(1, n + 1):
                s = pmf(rule, n, ell).support()
                assert s[0] >= ell - 1 and s[-1] <= n - 1


def test_float_backend_matches_rational():
    for rule in ("first", "last", "random"):
        for n in (5, 9):
            for ell in (1, 2, 3):
                a = pmf(rule, n, ell, backend="rational").as_float_array()
                b = pmf(rule, n, ell, backend="float").as_float_array()
                assert np.allclose(a, b, atol=1e-12)


def test_moment_conversion():
    p = pmf_L(7, 2)
    x = np.array(p.support(), dtype=float)
    w = np.array([float(p.probs[m]) for m in p.support()])
    for s in (1, 2, 3):
        assert abs(float(p.raw_moment(s)) - float(np.sum(w * x**s))) < 1e-12


def test_pgf_coeffs_sum_to_one():
    p = pmf_Y(6, 3)
    assert sum(p.pgf_coeffs()) == 1


def test_mean_float_matches_rational():
    for rule in ("first", "last", "random"):
        for n in (4, 8, 15):
            for ell in (1, 2, 3):
                assert abs(
                    mean_float(rule, n, ell) - float(pmf(rule, n, ell).mean())
                ) < 1e-9


def test_mean_scaled_last_moves_toward_beta_mean():
    sc = mean_scaled_last((50, 100, 200), ell=2)
    errs = [abs(v - 2 / 3) for v in sc.values()]
    assert errs == sorted(errs, reverse=True)


def test_json_dict_schema():
    d = pmf_R(4, 2).to_json_dict()
    assert set(d) == {"rule", "n", "ell", "support", "num", "den"}
    assert len(d["num"]) == len(d["den"]) == len(d["support"])
    f = pmf_R(4, 2, backend="float").to_json_dict()
    assert set(f) == {"rule", "n", "ell", "support", "prob"}


def test_invalid_arguments():
    with pytest.raises(ValueError):
        pmf_R(3, 0)
    with pytest.raises(ValueError):
        pmf_R(3, 4)
    with pytest.raises(ValueError):
        pmf("unknown", 3, 1)
