import numpy as np
import pytest

from rrt_cut import distributions as dist
from rrt_cut.simulate import (
    DEFAULT_T_GRID,
    ExperimentConfig,
    chi_square_vs_exact,
    convergence_sweep,
    empirical_cf,
    ks_statistic,
    run_counts,
    run_experiment,
    simulate_cut_counts,
    summarize,
)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("first", 5, 6, 10, 1)
    with pytest.raises(ValueError):
        ExperimentConfig("first", 5, 2, 0, 1)
    with pytest.raises(ValueError):
        ExperimentConfig("weird", 5, 2, 10, 1)
    with pytest.raises(ValueError):
        ExperimentConfig("first", 5, 2, 10, -1)


def test_two_node_tree_always_one_cut():
    for rule in ("first", "last", "random"):
        cfg = ExperimentConfig(rule, 2, 1, 100, 9)
        assert np.all(run_counts(cfg) == 1)


def test_counts_deterministic_and_prefix_stable():
    a = simulate_cut_counts(50, 2, 1, 200, 77)
    b = simulate_cut_counts(50, 2, 1, 200, 77)
    assert np.array_equal(a, b)
    # replicate i depends only on (seed, i), so a shorter run is a prefix
    c = simulate_cut_counts(50, 2, 1, 60, 77)
    assert np.array_equal(a[:60], c)
    d = simulate_cut_counts(50, 2, 1, 200, 78)
    assert not np.array_equal(a, d)


def test_counts_within_bounds():
    for rule_code, rule in ((0, "first"), (1, "last"), (2, "random")):
        for n, ell in ((5, 3), (30, 1), (30, 30)):
            c = simulate_cut_counts(n, ell, rule_code, 500, 5)
            assert c.min() >= ell - 1 and c.max() <= n - 1


def test_mean_within_3_sigma_of_exact():
    cfg = ExperimentConfig("first", 3, 1, 10**5, 123)
    counts = run_counts(cfg)
    p = dist.pmf_R(3, 1)
    mu = float(p.mean())
    var = float(p.raw_moment(2)) - mu**2
    assert abs(counts.mean() - mu) < 3 * (var / len(counts)) ** 0.5


def test_summary_invariants():
    s = run_experiment(ExperimentConfig("last", 40, 2, 2000, 4))
    assert s.count == 2000
    assert s.moments[0] ** 2 <= s.moments[1]
    assert list(s.cdf_values) == sorted(s.cdf_values)
    assert s.cf_ts == DEFAULT_T_GRID
    assert all(abs(c) <= 1.0 + 1e-12 for c in s.cf_values)
    assert s.sample is not None and len(s.sample) == 2000


def test_summarize_rejects_empty():
    with pytest.raises(ValueError):
        summarize(np.array([]))


def test_ks_uniform_quantiles():
    m = 1000
    sample = np.array([i / (m + 1) for i in range(1, m + 1)])
    assert ks_statistic(sample, 1) <= 1 / (m + 1) + 1 / m


def test_ks_degenerate_sample():
    m = 50
    sample = np.ones(m)
    assert ks_statistic(sample, 1) == pytest.approx(1 - 1 / m)


def test_ks_rejects_empty():
    with pytest.raises(ValueError):
        ks_statistic(np.array([]), 1)


def test_empirical_cf_trivial():
    z = empirical_cf(np.zeros(10), [0.0, 1.0, 2.0])
    assert all(abs(c - 1.0) < 1e-15 for c in z)
    c0 = empirical_cf(np.random.default_rng(0).normal(size=100), [0.0])[0]
    assert c0 == 1.0
    with pytest.raises(ValueError):
        empirical_cf(np.array([]), [1.0])


def test_chi_square_against_own_law():
    counts = simulate_cut_counts(6, 2, 1, 100000, 31)
    _, p = chi_square_vs_exact(counts, dist.pmf_L(6, 2))
    assert p >= 1e-3


def test_chi_square_detects_wrong_law():
    # same support, different law: last-rule sample vs first-rule PMF
    counts = simulate_cut_counts(6, 2, 1, 100000, 31)
    _, p = chi_square_vs_exact(counts, dist.pmf_R(6, 2))
    assert p < 1e-6


def test_chi_square_rejects_out_of_support_sample():
    counts = simulate_cut_counts(6, 2, 1, 1000, 31)
    with pytest.raises(ValueError):
        chi_square_vs_exact(counts, dist.pmf_L(6, 3))


def test_chi_square_degenerate_law():
    counts = simulate_cut_counts(4, 4, 0, 1000, 2)
    stat, p = chi_square_vs_exact(counts, dist.pmf_R(4, 4))
    assert (stat, p) == (0.0, 1.0)


def test_convergence_sweep_validation():
    with pytest.raises(ValueError):
        convergence_sweep("last", 2, [100, 100], 10, ["ks"], 1)
    with pytest.raises(ValueError):
        convergence_sweep("first", 2, [100, 200], 10, ["ks"], 1)
    with pytest.raises(ValueError):
        convergence_sweep("last", 2, [100, 200], 10, ["cf"], 1)
    with pytest.raises(ValueError):
        convergence_sweep("last", 2, [100, 200], 10, ["nope"], 1)


def test_convergence_sweep_beta_report():
    rep = convergence_sweep("last", 2, [200, 2000], 3000, ["ks", "moments"], 5)
    assert set(rep.distances) == {"ks", "moments"}
    assert all(len(v) == 2 for v in rep.distances.values())
    assert all(d >= 0 for v in rep.distances.values() for d in v)
    d = rep.to_json_dict()
    assert d["n_grid"] == [200, 2000]


def test_convergence_sweep_stable_report():
    rep = convergence_sweep("first", 1, [1000, 10000], 3000, ["cf"], 5)
    assert "cf" in rep.distances
    assert rep.distances["cf"][1] < rep.distances["cf"][0] * 1.5
