"""Compiled hot path for the edge-removal process at large n.

One replicate = grow a fresh uniform recursive tree, pick targets, count the
cuts needed to isolate them.  The per-replicate random stream is derived
counter-style from (seed, replicate index): the index is hashed through
splitmix64 into an xorshift128+ state, so replicate i is reproducible in
isolation and independent of any execution order or worker layout.

Instead of looping over cuts, the count uses an exact static reformulation.
Give every edge an independent uniform mark and process edges in increasing
mark order, skipping edges that sit in an already-discarded part; this is
the same process, because the smallest mark among alive edges is uniform on
them.  An edge e is cut in that run iff some target t is still in e's
component at e's turn, i.e. iff

    mark(e) < max over targets t of ( min mark on the path from e to t ),

the path excluding e itself (so an edge incident to a target is always
cut).  Sufficiency: such a t cannot be separated from e earlier.
Necessity: if every target's path carries a smaller mark, induction on mark
order shows each target is separated from e (or e's part discarded) before
e's turn.  The criterion needs, per edge (p, w), the best path-minimum
downward into the subtree of w and the best one from p avoiding that
subtree; both come out of one reverse and one forward linear pass, the
upward pass using the top two child values of each parent.  For targets
{1..ell} every vertex of their spanning subtree is itself a target, and the
criterion collapses to path-minimum records along the ancestor chain.

Marks are 31-bit; a tie on a path minimum (prob. 2^-31 per comparison)
resolves against cutting, a bias orders of magnitude below Monte Carlo
noise at any feasible replicate count.
"""

from __future__ import annotations

import numpy as np
from numba import int64, njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0  # 2^-53

_INF = np.uint32(0xFFFFFFFF)


@njit(cache=True, inline="always")
def _mix64(x):
    x = (x ^ (x >> np.uint64(30))) * _MIX1
    x = (x ^ (x >> np.uint64(27))) * _MIX2
    return x ^ (x >> np.uint64(31))


@njit(cache=True, inline="always")
def _seed_stream(seed, idx, st):
    a = _mix64(np.uint64(seed) + GOLDEN * np.uint64(idx + 1))
    b = _mix64(a + GOLDEN)
    if b == np.uint64(0):
        b = GOLDEN
    st[0] = a
    st[1] = b


@njit(cache=True, inline="always")
def _next64(st):
    s1 = st[0]
    s0 = st[1]
    st[0] = s0
    s1 ^= s1 << np.uint64(23)
    s1 ^= s1 >> np.uint64(17)
    s1 ^= s0 ^ (s0 >> np.uint64(26))
    st[1] = s1
    return s0 + s1


@njit(cache=True, inline="always")
def _rand_below(st, m):
    # floor-multiply; bias O(2^-53) per draw, far below any test resolution
    x = _next64(st) >> np.uint64(11)
    r = int64(np.float64(x) * _INV53 * np.float64(m))
    if r >= m:
        r = m - 1
    return r


@njit(cache=True, inline="always")
def _grow(n, st, parents, mark):
    # mark[v] belongs to the edge (parents[v], v); marks stay >= 1 so 0 can
    # serve as "no target in this direction"
    parents[1] = 0
    for v in range(2, n + 1):
        parents[v] = 1 + _rand_below(st, v - 1)
        mark[v] = np.uint32((_next64(st) >> np.uint64(33)) + np.uint64(1))


@njit(cache=True)
def _run_first(n, ell, st, up):
    """Targets 1..ell: their spanning subtree is all-target, so an outside
    edge is cut iff its mark beats every mark above it down to label ell.
    Growth and record counting fuse into one pass; parents are consumed on
    the spot and never stored."""
    if n == 1:
        return 0
    cuts = ell - 1  # edges among the first ell labels, always cut
    up[1] = _INF
    for v in range(2, n + 1):
        p = 1 + _rand_below(st, v - 1)
        u = np.uint32((_next64(st) >> np.uint64(33)) + np.uint64(1))
        if v <= ell:
            up[v] = _INF
        else:
            pm = up[p]
            if u < pm:
                cuts += 1
                up[v] = u
            else:
                up[v] = pm
    return cuts


@njit(cache=True)
def _run_general(n, ell, rule, st, parents, mark, tgt, down, up, best1, best2, arg1):
    _grow(n, st, parents, mark)
    for v in range(1, n + 1):
        tgt[v] = 0
    if rule == 1:
        for v in range(n - ell + 1, n + 1):
            tgt[v] = 1
    else:
        cnt = 0
        while cnt < ell:
            t = 1 + _rand_below(st, n)
            if tgt[t] == 0:
                tgt[t] = 1
                cnt += 1
    if n == 1:
        return 0
    for v in range(1, n + 1):
        best1[v] = 0
        best2[v] = 0
        arg1[v] = 0
    # reverse pass: children carry labels larger than parents, so by the
    # time v is reached its subtree is folded into best1/best2[v]
    for v in range(n, 1, -1):
        d = _INF if tgt[v] != 0 else best1[v]
        down[v] = d
        cand = mark[v] if mark[v] < d else d
        p = parents[v]
        if cand > best1[p]:
            best2[p] = best1[p]
            best1[p] = cand
            arg1[p] = v
        elif cand > best2[p]:
            best2[p] = cand
    cuts = 0
    up[1] = 0
    for v in range(2, n + 1):
        p = parents[v]
        sib = best2[p] if arg1[p] == v else best1[p]
        ex = _INF if tgt[p] != 0 else max(up[p], sib)
        u = mark[v]
        up[v] = u if u < ex else ex
        d = down[v]
        best = ex if ex > d else d
        if u < best:
            cuts += 1
    return cuts


@njit(cache=True)
def _simulate_batch(n, ell, rule, reps, seed, out):
    up = np.empty(n + 1, np.uint32)
    st = np.empty(2, np.uint64)
    if rule == 0:
        for i in range(reps):
            _seed_stream(seed, i, st)
            out[i] = _run_first(n, ell, st, up)
    else:
        parents = np.empty(n + 1, np.int32)
        mark = np.empty(n + 1, np.uint32)
        tgt = np.empty(n + 1, np.uint8)
        down = np.empty(n + 1, np.uint32)
        best1 = np.empty(n + 1, np.uint32)
        best2 = np.empty(n + 1, np.uint32)
        arg1 = np.empty(n + 1, np.int32)
        for i in range(reps):
            _seed_stream(seed, i, st)
            out[i] = _run_general(
                n, ell, rule, st, parents, mark, tgt, down, up, best1, best2, arg1
            )


def simulate_cut_counts(n: int, ell: int, rule_code: int, reps: int, seed: int) -> np.ndarray:
    """Cut counts for ``reps`` independent replicates; fully determined by
    (n, ell, rule_code, seed)."""
    if seed < 0:
        raise ValueError("seed must be a nonnegative 64-bit integer")
    out = np.empty(reps, np.int64)
    _simulate_batch(n, ell, rule_code, reps, seed, out)
    return out
