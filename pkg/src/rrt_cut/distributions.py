"""Exact cut-count distributions by dynamic programming.

The three target-selection rules satisfy the same one-cut decomposition: the
cut count is 1 plus the sum of two independent copies on the two kept sides,
mixed over the joint splitting law of (side size, targets on that side).
This module runs that recurrence forward to full PMFs, either with exact
rationals or with floats (numpy convolutions).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from rrt_cut.splitting import Rat, joint_L, joint_R, joint_Y, joint_support

RULES = ("first", "last", "random")

_JOINT = {"first": joint_R, "last": joint_L, "random": joint_Y}

# rule -> {(n, ell): dict m -> Rat}
_memo_rat: dict[str, dict[tuple[int, int], dict[int, object]]] = {r: {} for r in RULES}
# rule -> {(n, ell): np.ndarray of length n (index = cut count)}
_memo_float: dict[str, dict[tuple[int, int], np.ndarray]] = {r: {} for r in RULES}


@lru_cache(maxsize=None)
def _joint_cached(rule: str, n: int, ell: int, k: int, r: int):
    return _JOINT[rule](n, ell, k, r)


def _split_terms(rule: str, n: int, ell: int):
    """All (k, r, weight) with nonzero weight in the one-cut mixture."""
    out = []
    for k, r in joint_support(rule, n, ell):
        w = _joint_cached(rule, n, ell, k, r)
        if w:
            out.append((k, r, w))
    return out


def _pmf_rational(rule: str, n: int, ell: int) -> dict[int, object]:
    memo = _memo_rat[rule]
    got = memo.get((n, ell))
    if got is not None:
        return got
    if ell == 0 or n == 1:
        out = {0: Rat(1, 1)}
        memo[(n, ell)] = out
        return out
    acc: dict[int, object] = {}
    for k, r, w in _split_terms(rule, n, ell):
        pa = _pmf_rational(rule, k, r)
        pb = _pmf_rational(rule, n - k, ell - r)
        for m1, p1 in pa.items():
            wp1 = w * p1
            for m2, p2 in pb.items():
                m = m1 + m2 + 1
                acc[m] = acc.get(m, 0) + wp1 * p2
    memo[(n, ell)] = acc
    return acc


def _pmf_float(rule: str, n: int, ell: int) -> np.ndarray:
    memo = _memo_float[rule]
    # fill bottom-up so the recursion never goes deep
    for nn in range(1, n + 1):
        for ll in range(0, min(ell, nn) + 1):
            if (nn, ll) in memo:
                continue
            if ll == 0 or nn == 1:
                memo[(nn, ll)] = np.ones(1)
                continue
            acc = np.zeros(nn)
            for k, r, w in _split_terms(rule, nn, ll):
                conv = np.convolve(memo[(k, r)], memo[(nn - k, ll - r)])
                acc[1 : 1 + len(conv)] += float(w) * conv
            memo[(nn, ll)] = np.trim_zeros(acc, "b")
    return memo[(n, ell)]


# rule -> {(n, ell): float mean}
_memo_mean: dict[str, dict[tuple[int, int], float]] = {r: {} for r in RULES}


def mean_float(rule: str, n: int, ell: int) -> float:
    """E(cut count) by the scalar mean recurrence (float weights).

    Much cheaper than a full PMF: the one-cut decomposition turns means into
    E(X_{n,ell}) = 1 + sum of weighted means of the two kept sides.
    """
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}")
    if not 1 <= ell <= n:
        raise ValueError(f"need 1 <= ell <= n, got ell={ell}, n={n}")
    memo = _memo_mean[rule]
    for nn in range(1, n + 1):
        for ll in range(0, min(ell, nn) + 1):
            if (nn, ll) in memo:
                continue
            if ll == 0 or nn == 1:
                memo[(nn, ll)] = 0.0
                continue
            acc = 1.0
            for k, r, w in _split_terms(rule, nn, ll):
                acc += float(w) * (memo[(k, r)] + memo[(nn - k, ll - r)])
            memo[(nn, ll)] = acc
    return memo[(n, ell)]


@lru_cache(maxsize=None)
def stirling2(s: int, j: int) -> int:
    """Stirling numbers of the second kind."""
    if s == j:
        return 1
    if j == 0 or j > s:
        return 0
    return j * stirling2(s - 1, j) + stirling2(s - 1, j - 1)


@dataclass(frozen=True)
class ExactPmf:
    """Cut-count probability mass function for one (rule, n, ell)."""

    rule: str
    n: int
    ell: int
    backend: str
    probs: dict[int, object]

    def support(self) -> list[int]:
        return sorted(m for m, p in self.probs.items() if p)

    def total(self):
        return sum(self.probs.values())

    def pgf_coeffs(self) -> tuple:
        """Coefficients of E(v^X) as a polynomial in v, ascending."""
        top = max(self.probs) if self.probs else 0
        out = [Rat(0, 1) if self.backend == "rational" else 0.0] * (top + 1)
        for m, p in self.probs.items():
            out[m] = p
        return tuple(out)

    def factorial_moment(self, s: int):
        """E(X(X-1)...(X-s+1))."""
        if s < 0:
            raise ValueError("moment order must be >= 0")
        acc = 0
        for m, p in self.probs.items():
            term = p
            for i in range(s):
                term = term * (m - i)
            acc = acc + term
        return acc

    def raw_moment(self, s: int):
        """E(X^s) via Stirling numbers of the second kind."""
        if s < 0:
            raise ValueError("moment order must be >= 0")
        if s == 0:
            return self.total()
        return sum(stirling2(s, j) * self.factorial_moment(j) for j in range(1, s + 1))

    def mean(self):
        return self.raw_moment(1)

    def as_float_array(self) -> np.ndarray:
        out = np.zeros(self.n if self.n > 1 else 1)
        for m, p in self.probs.items():
            out[m] = float(p)
        return out

    def to_json_dict(self) -> dict:
        support = self.support()
        out = {"rule": self.rule, "n": self.n, "ell": self.ell, "support": support}
        if self.backend == "rational":
            out["num"] = [int(self.probs[m].numerator) for m in support]
            out["den"] = [int(self.probs[m].denominator) for m in support]
        else:
            out["prob"] = [float(self.probs[m]) for m in support]
        return out


def _make(rule: str, n: int, ell: int, backend: str) -> ExactPmf:
    if not 1 <= ell <= n:
        raise ValueError(f"need 1 <= ell <= n, got ell={ell}, n={n}")
    if backend == "rational":
        probs = {m: p for m, p in _pmf_rational(rule, n, ell).items() if p}
        assert sum(probs.values()) == 1
    elif backend == "float":
        arr = _pmf_float(rule, n, ell)
        probs = {m: float(arr[m]) for m in range(len(arr)) if arr[m] != 0.0}
        assert abs(sum(probs.values()) - 1.0) <= 1e-12
    else:
        raise ValueError(f"unknown backend {backend!r}")
    lo = max(ell - 1, 0)
    assert all(lo <= m <= n - 1 for m in probs)
    return ExactPmf(rule=rule, n=n, ell=ell, backend=backend, probs=probs)


def pmf_R(n: int, ell: int, backend: str = "rational") -> ExactPmf:
    """Law of the cut count when isolating nodes 1..ell."""
    return _make("first", n, ell, backend)


def pmf_L(n: int, ell: int, backend: str = "rational") -> ExactPmf:
    """Law of the cut count when isolating nodes n+1-ell..n."""
    return _make("last", n, ell, backend)


def pmf_Y(n: int, ell: int, backend: str = "rational") -> ExactPmf:
    """Law of the cut count when isolating ell uniformly selected nodes."""
    return _make("random", n, ell, backend)


def pmf(rule: str, n: int, ell: int, backend: str = "rational") -> ExactPmf:
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}")
    return _make(rule, n, ell, backend)


def mean_scaled_last(n_values, ell: int = 2) -> dict[int, float]:
    """E(cut count for the last-labels rule) * log(n) / n, per n."""
    out = {}
    for n in n_values:
        out[n] = mean_float("last", n, ell) * np.log(n) / n
    return out
