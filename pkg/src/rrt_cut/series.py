"""Truncated bivariate formal power series over exact rationals.

A series is a polynomial list in z up to a truncation degree; each z
coefficient is a polynomial in the mark variable v with rational
coefficients.  This is enough to realize the closed form of the
root-targets generating function and to verify, coefficient by coefficient,
the differential equations satisfied by all three generating functions
against series rebuilt from the exact distributions.

Division only ever happens by series whose constant term is exactly 1, so
coefficients stay polynomial in v throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

from rrt_cut import distributions
from rrt_cut.splitting import Rat, falling

Poly = tuple  # polynomial in v, ascending coefficients

P_ZERO: Poly = ()
P_ONE: Poly = (Rat(1, 1),)


def _ptrim(c: list) -> Poly:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = out[i] + x
    return _ptrim(out)


def pneg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return P_ZERO
    out = [Rat(0, 1)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ptrim(out)


def pscale(a: Poly, s) -> Poly:
    if s == 0:
        return P_ZERO
    return _ptrim([x * s for x in a])


def p_v_power(k: int, coeff=1) -> Poly:
    """coeff * v^k."""
    return tuple([Rat(0, 1)] * k + [Rat(coeff, 1)])


@dataclass(frozen=True)
class BivariateSeries:
    """Power series in z, truncated at z_trunc, with v-polynomial coefficients."""

    z_trunc: int
    coeffs: tuple  # tuple of Poly, length z_trunc + 1

    def __post_init__(self):
        if len(self.coeffs) != self.z_trunc + 1:
            raise ValueError("coefficient count does not match truncation")

    @classmethod
    def from_map(cls, z_trunc: int, entries: dict[int, Poly]) -> "BivariateSeries":
        coeffs = [P_ZERO] * (z_trunc + 1)
        for i, p in entries.items():
            if 0 <= i <= z_trunc:
                coeffs[i] = _ptrim(list(p))
        return cls(z_trunc, tuple(coeffs))

    @classmethod
    def zero(cls, z_trunc: int) -> "BivariateSeries":
        return cls(z_trunc, tuple([P_ZERO] * (z_trunc + 1)))

    @classmethod
    def one(cls, z_trunc: int) -> "BivariateSeries":
        return cls.from_map(z_trunc, {0: P_ONE})

    def coeff(self, i: int) -> Poly:
        return self.coeffs[i]

    def _check(self, other: "BivariateSeries") -> None:
        if self.z_trunc != other.z_trunc:
            raise ValueError(
                f"truncation mismatch: {self.z_trunc} vs {other.z_trunc}"
            )

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        self._check(other)
        return BivariateSeries(
            self.z_trunc,
            tuple(padd(a, b) for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        self._check(other)
        return BivariateSeries(
            self.z_trunc,
            tuple(padd(a, pneg(b)) for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self) -> "BivariateSeries":
        return BivariateSeries(self.z_trunc, tuple(pneg(a) for a in self.coeffs))

    def __mul__(self, other: "BivariateSeries") -> "BivariateSeries":
        self._check(other)
        Z = self.z_trunc
        out = [P_ZERO] * (Z + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(Z + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = padd(out[i + j], pmul(a, b))
        return BivariateSeries(Z, tuple(out))

    def scale(self, p: Poly | int) -> "BivariateSeries":
        """Multiply by a v-polynomial (or plain scalar)."""
        if not isinstance(p, tuple):
            p = (Rat(p, 1),)
        return BivariateSeries(self.z_trunc, tuple(pmul(c, p) for c in self.coeffs))

    def diff_z(self) -> "BivariateSeries":
        """d/dz; the result is truncated one order lower."""
        return BivariateSeries(
            self.z_trunc - 1,
            tuple(
                pscale(self.coeffs[i + 1], i + 1) for i in range(self.z_trunc)
            ),
        )

    def integrate_z(self) -> "BivariateSeries":
        """Antiderivative with zero constant term; truncation rises by one."""
        out = [P_ZERO] * (self.z_trunc + 2)
        for i, c in enumerate(self.coeffs):
            out[i + 1] = pscale(c, Rat(1, i + 1))
        return BivariateSeries(self.z_trunc + 1, tuple(out))

    def truncate(self, Z: int) -> "BivariateSeries":
        if Z > self.z_trunc:
            raise ValueError("cannot extend a truncated series")
        return BivariateSeries(Z, self.coeffs[: Z + 1])

    def shift_down(self, k: int = 1) -> "BivariateSeries":
        """Divide by z^k; the dropped low-order coefficients must vanish."""
        if any(self.coeffs[i] for i in range(k)):
            raise ValueError("series is not divisible by z^k")
        return BivariateSeries(self.z_trunc - k, self.coeffs[k:])

    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)

    def at_v1(self) -> tuple:
        """Evaluate v = 1, giving plain rational z-coefficients."""
        return tuple(sum(c, Rat(0, 1)) for c in self.coeffs)


def divide_by_unit(num: BivariateSeries, den: BivariateSeries) -> BivariateSeries:
    """Quotient of series whose denominator has constant term exactly 1."""
    num._check(den)
    if den.coeffs[0] != P_ONE:
        raise ValueError("denominator constant term must be the polynomial 1")
    Z = num.z_trunc
    q = [P_ZERO] * (Z + 1)
    for i in range(Z + 1):
        acc = num.coeffs[i]
        for j in range(1, i + 1):
            if den.coeffs[j] and q[i - j]:
                acc = padd(acc, pneg(pmul(den.coeffs[j], q[i - j])))
        q[i] = acc
    return BivariateSeries(Z, tuple(q))


def exp_series(s: BivariateSeries) -> BivariateSeries:
    """Formal exponential of a series with zero constant term (E' = s'E)."""
    if s.coeffs[0]:
        raise ValueError("exp needs zero constant term")
    Z = s.z_trunc
    e = [P_ZERO] * (Z + 1)
    e[0] = P_ONE
    for i in range(Z):
        # (i+1) e_{i+1} = sum_{j=0..i} (j+1) s_{j+1} e_{i-j}
        acc = P_ZERO
        for j in range(i + 1):
            t = pscale(s.coeffs[j + 1], j + 1)
            if t and e[i - j]:
                acc = padd(acc, pmul(t, e[i - j]))
        e[i + 1] = pscale(acc, Rat(1, i + 1))
    return BivariateSeries(Z, tuple(e))


def series_pow(s: BivariateSeries, k: int) -> BivariateSeries:
    out = BivariateSeries.one(s.z_trunc)
    for _ in range(k):
        out = out * s
    return out


def log_inv_series(Z: int) -> BivariateSeries:
    """log(1/(1-z)) = sum_{i>=1} z^i / i."""
    return BivariateSeries.from_map(Z, {i: (Rat(1, i),) for i in range(1, Z + 1)})


def _one_minus_z(Z: int) -> BivariateSeries:
    return BivariateSeries.from_map(Z, {0: P_ONE, 1: (Rat(-1, 1),)})


def _denominator_series(Z: int) -> BivariateSeries:
    """(1-z) v log(1/(1-z)) + z (1-v)."""
    L = log_inv_series(Z)
    a = (_one_minus_z(Z) * L).scale(p_v_power(1))
    b = BivariateSeries.from_map(Z, {1: (Rat(1, 1), Rat(-1, 1))})
    return a + b


@lru_cache(maxsize=None)
def f_series(Z: int) -> BivariateSeries:
    """The logarithmic-derivative kernel v log(1/(1-z)) / denominator.

    Numerator and denominator share a factor z; after cancelling it the
    denominator has unit constant term, so plain unit division applies.
    """
    if Z < 1:
        raise ValueError("need Z >= 1")
    W = Z + 1
    num = log_inv_series(W).scale(p_v_power(1))
    den = _denominator_series(W)
    return divide_by_unit(num.shift_down(), den.shift_down())


@lru_cache(maxsize=None)
def M_series(ell: int, Z: int) -> BivariateSeries:
    """Closed-form generating function for the first-labels rule:
    v^(ell-1) (ell-1)! exp(ell * int_0^z f)."""
    if ell < 1:
        raise ValueError("need ell >= 1")
    intf = f_series(Z).integrate_z().truncate(Z)
    m1 = exp_series(intf)
    return series_pow(m1, ell).scale(p_v_power(ell - 1, factorial(ell - 1)))


def b_ell_M(ell: int, Z: int) -> BivariateSeries:
    """Inhomogeneous part of the first-order ODE (pairwise product form)."""
    acc = BivariateSeries.zero(Z)
    for r in range(1, ell):
        c = comb(ell - 1, r) + (comb(ell - 1, r - 2) if r >= 2 else 0)
        if c:
            acc = acc + (M_series(r, Z) * M_series(ell - r, Z)).scale(c)
    return acc.scale(p_v_power(1))


def check_ode_M(ell: int, Z: int) -> BivariateSeries:
    """Residual of the multiplied-through first-order ODE:

    ((1-z) v L + z(1-v)) dM/dz + (ell-1 - ell v L) M - b_ell,
    with L = log(1/(1-z)).  Zero up to z^Z iff the check passes.
    """
    W = Z + 1
    M = M_series(ell, W)
    A = _denominator_series(Z)
    c = BivariateSeries.from_map(Z, {0: (Rat(ell - 1, 1),)}) - log_inv_series(
        Z
    ).scale(p_v_power(1, ell))
    lhs = A * M.diff_z() + c * M.truncate(Z)
    return lhs - b_ell_M(ell, Z)


def _pgf_series_coeffs(rule: str, n: int, ell: int) -> Poly:
    return distributions.pmf(rule, n, ell, backend="rational").pgf_coeffs()


@lru_cache(maxsize=None)
def N_series_from_dist(ell: int, Z: int) -> BivariateSeries:
    """Fringe-labels generating function rebuilt from the exact PMFs:
    coefficient of z^(n+1-ell) is (n-1)^(ell-2 falling) E(v^{L_{n,ell}})."""
    if ell < 1:
        raise ValueError("need ell >= 1")
    entries = {}
    for n in range(ell, Z + ell):
        j = n + 1 - ell
        if j > Z:
            break
        w = falling(n - 1, ell - 2)
        entries[j] = pscale(_pgf_series_coeffs("last", n, ell), w)
    return BivariateSeries.from_map(Z, entries)


def b_ell_N(ell: int, Z: int) -> BivariateSeries:
    acc = BivariateSeries.zero(Z)
    for r in range(1, ell):
        W = Z + 2
        Nr = N_series_from_dist(r, W)
        Nlr = N_series_from_dist(ell - r, W)
        acc = acc + (Nr.truncate(Z) * Nlr.diff_z().diff_z()).scale(
            comb(ell, r)
        ).scale(p_v_power(1))
        acc = acc + Nr.diff_z().truncate(Z).scale(
            p_v_power(ell - r, comb(ell, r - 1) * factorial(ell - r - 1))
        )
    return acc


def check_ode_N(ell: int, Z: int) -> BivariateSeries:
    """Residual of the second-order fringe ODE, multiplied through by (1-z):

    (1-z) A N'' + (ell-1)(1-z) N' - v N - (1-z) b_ell,
    with A the same log-linear coefficient as in the first-order ODE.
    """
    W = Z + 2
    N = N_series_from_dist(ell, W)
    omz = _one_minus_z(Z)
    lhs = (
        (omz * _denominator_series(Z)) * N.diff_z().diff_z()
        + (omz * N.diff_z().truncate(Z)).scale(ell - 1)
        - N.truncate(Z).scale(p_v_power(1))
    )
    return lhs - omz * b_ell_N(ell, Z)


@lru_cache(maxsize=None)
def G_series_from_dist(ell: int, Z: int) -> BivariateSeries:
    """Random-labels generating function rebuilt from the exact PMFs:
    coefficient of z^n is (C(n, ell)/n) E(v^{Y_{n,ell}})."""
    if ell < 1:
        raise ValueError("need ell >= 1")
    entries = {}
    for n in range(ell, Z + 1):
        entries[n] = pscale(
            _pgf_series_coeffs("random", n, ell), Rat(comb(n, ell), n)
        )
    return BivariateSeries.from_map(Z, entries)


def b_ell_G(ell: int, Z: int) -> BivariateSeries:
    W = Z + 2
    omz = _one_minus_z(Z)
    omz2 = omz * omz
    L = log_inv_series(Z)
    G = {r: G_series_from_dist(r, W) for r in range(1, ell)}
    acc = BivariateSeries.zero(Z)
    for r in range(1, ell):
        acc = acc - omz2 * (G[r].diff_z().diff_z() * G[ell - r].truncate(Z))
        acc = acc + (
            omz2 * L * (G[r].diff_z().truncate(Z) * G[ell - r].diff_z().truncate(Z))
        ).scale(p_v_power(1))
        acc = acc + (omz * (G[r].diff_z().truncate(Z) * G[ell - r].truncate(Z))).scale(
            p_v_power(1, 2)
        )
        for q in range(1, ell - r):
            acc = acc + (
                omz2
                * (
                    G[r].diff_z().truncate(Z)
                    * G[q].diff_z().truncate(Z)
                    * G[ell - r - q].truncate(Z)
                )
            ).scale(p_v_power(1))
    return acc


def check_ode_G(ell: int, Z: int) -> BivariateSeries:
    """Residual of the second-order random-labels ODE (already polynomial):

    (1-z)(z(1-v) + v(1-z)L) G'' - (z(1-v) + 2v(1-z)L) G' + (1-v) G - b_ell.
    """
    W = Z + 2
    G = G_series_from_dist(ell, W)
    omz = _one_minus_z(Z)
    L = log_inv_series(Z)
    z_one_minus_v = BivariateSeries.from_map(Z, {1: (Rat(1, 1), Rat(-1, 1))})
    vL = (omz * L).scale(p_v_power(1))
    one_minus_v = BivariateSeries.from_map(Z, {0: (Rat(1, 1), Rat(-1, 1))})
    lhs = (
        (omz * (z_one_minus_v + vL)) * G.diff_z().diff_z()
        - (z_one_minus_v + vL.scale(2)) * G.diff_z().truncate(Z)
        + one_minus_v * G.truncate(Z)
    )
    return lhs - b_ell_G(ell, Z)


def m_coefficient_residuals(max_n: int, max_ell: int) -> list:
    """Exact polynomial mismatches between the closed-form series and the
    distribution-built coefficients (n-1)^(ell-1 falling) E(v^{R_{n,ell}})."""
    bad = []
    for ell in range(1, max_ell + 1):
        Z = max_n - ell
        M = M_series(ell, Z)
        for n in range(ell, max_n + 1):
            expected = pscale(
                _pgf_series_coeffs("first", n, ell), falling(n - 1, ell - 1)
            )
            if M.coeff(n - ell) != _ptrim(list(expected)):
                bad.append((n, ell))
    return bad
