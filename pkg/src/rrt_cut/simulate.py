"""Large-n simulation harness and statistical comparisons with the limits.

Replicates are serial but every replicate's random stream is a pure function
of (seed, replicate index), and the moment / CF reductions run over fixed
4096-element chunks, so the results are bitwise reproducible and would not
change under any worker layout.

Memory note: KS needs the full sorted sample, i.e. 8 bytes per replicate
(0.8 MB at the default 1e5 replicates).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as _scipy_stats

from rrt_cut._kernels import simulate_cut_counts
from rrt_cut.distributions import RULES, ExactPmf
from rrt_cut.limits import beta_cdf, beta_moment, normalize_R, scale_LY, stable_cf

RULE_CODES = {"first": 0, "last": 1, "random": 2}

DEFAULT_T_GRID = (-2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0)
STABLE_T_GRID = (-1.0, -0.5, 0.5, 1.0)

_CHUNK = 4096


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    rule: str
    n: int
    ell: int
    replicates: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if not 1 <= self.ell <= self.n:
            raise ValueError(f"need 1 <= ell <= n, got ell={self.ell}, n={self.n}")
        if self.replicates < 1:
            raise ValueError("need replicates >= 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


def _tree_sum(values: np.ndarray) -> float:
    """Chunked compensated sum with a fixed reduction order."""
    parts = [math.fsum(values[i : i + _CHUNK]) for i in range(0, len(values), _CHUNK)]
    return math.fsum(parts)


@dataclass(frozen=True)
class SampleSummary:
    """Order-independent statistics of one batch of replicates."""

    count: int
    moments: tuple[float, float, float, float]
    cdf_grid: tuple[float, ...]
    cdf_values: tuple[float, ...]
    cf_ts: tuple[float, ...]
    cf_values: tuple[complex, ...]
    sample: np.ndarray | None

    def __post_init__(self):
        m1, m2, _, _ = self.moments
        assert m1 * m1 <= m2 * (1 + 1e-12) + 1e-300
        assert all(a <= b for a, b in zip(self.cdf_values, self.cdf_values[1:]))

    def mean(self) -> float:
        return self.moments[0]

    def variance(self) -> float:
        return max(self.moments[1] - self.moments[0] ** 2, 0.0)


def summarize(
    sample: np.ndarray,
    t_grid: tuple[float, ...] = DEFAULT_T_GRID,
    cdf_points: int = 101,
    keep_sample: bool = True,
) -> SampleSummary:
    if len(sample) == 0:
        raise ValueError("sample must be non-empty")
    x = np.sort(np.asarray(sample, dtype=np.float64))
    m = len(x)
    moments = tuple(_tree_sum(x**s) / m for s in (1, 2, 3, 4))
    grid = np.linspace(x[0], x[-1], cdf_points)
    cdf = np.searchsorted(x, grid, side="right") / m
    cf = tuple(empirical_cf(x, t_grid))
    return SampleSummary(
        count=m,
        moments=moments,
        cdf_grid=tuple(float(g) for g in grid),
        cdf_values=tuple(float(c) for c in cdf),
        cf_ts=tuple(t_grid),
        cf_values=cf,
        sample=x if keep_sample else None,
    )


def run_counts(cfg: ExperimentConfig) -> np.ndarray:
    """Raw cut counts, one per replicate; determined by cfg alone."""
    counts = simulate_cut_counts(
        cfg.n, cfg.ell, RULE_CODES[cfg.rule], cfg.replicates, cfg.seed
    )
    assert counts.min() >= cfg.ell - 1 and counts.max() <= cfg.n - 1
    return counts


def run_experiment(cfg: ExperimentConfig, keep_sample: bool = True) -> SampleSummary:
    return summarize(run_counts(cfg), keep_sample=keep_sample)


def ks_statistic(sorted_sample: np.ndarray, ell: int) -> float:
    """sup_x |F_emp(x) - x^ell| over the sample points, beta(ell,1) target."""
    m = len(sorted_sample)
    if m == 0:
        raise ValueError("sample must be non-empty")
    f = np.clip(np.asarray(sorted_sample, dtype=np.float64), 0.0, 1.0) ** ell
    i = np.arange(1, m + 1)
    return float(np.max(np.abs(f - i / m)))


def empirical_cf(sample: np.ndarray, ts) -> list[complex]:
    """(1/m) sum_j exp(i t x_j) for each t."""
    x = np.asarray(sample, dtype=np.float64)
    if len(x) == 0:
        raise ValueError("sample must be non-empty")
    out = []
    for t in ts:
        z = np.exp(1j * t * x)
        out.append(complex(_tree_sum(z.real) / len(x), _tree_sum(z.imag) / len(x)))
    return out


def chi_square_vs_exact(counts: np.ndarray, exact: ExactPmf) -> tuple[float, float]:
    """Pearson chi-square of an empirical count sample against an exact PMF.

    Adjacent support bins with expected count below 5 are merged before the
    test, the standard validity fix for sparse tails.
    """
    m = len(counts)
    support = exact.support()
    observed = [int(np.count_nonzero(counts == v)) for v in support]
    if int(np.sum(observed)) != m:
        raise ValueError("sample contains values outside the exact support")
    expected = [m * float(exact.probs[v]) for v in support]
    obs_b, exp_b = [], []
    acc_o, acc_e = 0, 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= 5.0:
            obs_b.append(acc_o)
            exp_b.append(acc_e)
            acc_o, acc_e = 0, 0.0
    if acc_e > 0 or acc_o > 0:
        if obs_b:
            obs_b[-1] += acc_o
            exp_b[-1] += acc_e
        else:
            obs_b.append(acc_o)
            exp_b.append(acc_e)
    if len(obs_b) < 2:
        # degenerate law (single bin): agreement is exact by construction
        return 0.0, 1.0
    stat, p = _scipy_stats.chisquare(obs_b, exp_b)
    return float(stat), float(p)


@dataclass(frozen=True)
class LimitFitReport:
    """Per-n distances to a limit law plus trend verdicts along the n grid."""

    rule: str
    ell: int
    n_grid: tuple[int, ...]
    replicates: int
    seed: int
    distances: dict[str, tuple[float, ...]]
    trend_ok: dict[str, bool]

    def all_trends_ok(self) -> bool:
        return all(self.trend_ok.values())

    def to_json_dict(self) -> dict:
        return {
            "rule": self.rule,
            "ell": self.ell,
            "n_grid": list(self.n_grid),
            "replicates": self.replicates,
            "seed": self.seed,
            "distances": {k: list(v) for k, v in self.distances.items()},
            "trend_ok": dict(self.trend_ok),
        }


TREND_SLACK = 1.1


def _trend_ok(ds) -> bool:
    return all(b <= TREND_SLACK * a for a, b in zip(ds, ds[1:]))


def convergence_sweep(
    rule: str,
    ell: int,
    n_grid,
    reps: int,
    requested,
    seed: int,
) -> LimitFitReport:
    """Distances to the limit law along an increasing n grid.

    For the fringe and random rules the sample is scaled by log(n)/n and
    compared with beta(ell,1) ("ks" and "moments" statistics); for the root
    rule the sample is affinely normalized and its characteristic function is
    compared with the stable target ("cf" statistic).
    """
    n_grid = tuple(int(n) for n in n_grid)
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("n grid must be strictly increasing")
    requested = tuple(requested)
    beta_rules = rule in ("last", "random")
    for stat in requested:
        if stat in ("ks", "moments") and not beta_rules:
            raise ValueError(f"statistic {stat!r} needs rule 'last' or 'random'")
        if stat == "cf" and rule != "first":
            raise ValueError("statistic 'cf' needs rule 'first'")
        if stat not in ("ks", "moments", "cf"):
            raise ValueError(f"unknown statistic {stat!r}")
    per_stat: dict[str, list[float]] = {stat: [] for stat in requested}
    for i, n in enumerate(n_grid):
        cfg = ExperimentConfig(rule=rule, n=n, ell=ell, replicates=reps, seed=seed + i)
        counts = run_counts(cfg)
        if beta_rules:
            scaled = np.sort(scale_LY(counts.astype(np.float64), n))
            lo = (ell - 1) * math.log(n) / n
            hi = (n - 1) * math.log(n) / n
            assert scaled[0] >= lo - 1e-12 and scaled[-1] <= hi + 1e-12
            if "ks" in per_stat:
                per_stat["ks"].append(ks_statistic(scaled, ell))
            if "moments" in per_stat:
                errs = []
                for s in (1, 2):
                    target = float(beta_moment(ell, s))
                    got = _tree_sum(scaled**s) / len(scaled)
                    errs.append(abs(got - target) / target)
                per_stat["moments"].append(max(errs))
        else:
            norm = normalize_R(counts.astype(np.float64), n, ell)
            cf = empirical_cf(norm, STABLE_T_GRID)
            per_stat["cf"].append(
                max(abs(c - stable_cf(t)) for t, c in zip(STABLE_T_GRID, cf))
            )
    distances = {k: tuple(v) for k, v in per_stat.items()}
    return LimitFitReport(
        rule=rule,
        ell=ell,
        n_grid=n_grid,
        replicates=reps,
        seed=seed,
        distances=distances,
        trend_ok={k: _trend_ok(v) for k, v in distances.items()},
    )
