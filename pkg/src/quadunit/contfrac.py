"""Integer-only continued fraction engine for w[d].

The expansion of w[d] is driven entirely by the classical (P, Q) state
recurrence

    a_n = floor((P_n + floor(sqrt(d))) / Q_n),
    P_{n+1} = a_n Q_n - P_n,   Q_{n+1} = (d - P_{n+1}^2) / Q_n,

starting from (0, 1) for w[d] = sqrt(d) and (1, 2) for w[d] = (1+sqrt(d))/2.
The tail alpha_1, alpha_2, ... is purely periodic, so the period is the
first recurrence of the (P, Q) state at index >= 1; no floating point is
involved anywhere, which makes period detection exact.

Partial quotients, convergents (p_n, q_n), the quadratic integers
xi_n = conj(p_n - q_n w[d]) and their absolute norms nu_n are produced as
lazy streams so palindromy/determinant checks up to 2l stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import isqrt
from .quadfield import (
    FieldContext,
    QuadInt,
    field_context,
    qi_compare,
    sign_plus_sqrt,
    sign_plus_sqrt_frac,
)


@dataclass(frozen=True)
class QuadIrr:
    """Exact quadratic irrational (P + sqrt(d)) / Q with Q | d - P^2."""

    d: int
    P: int
    Q: int

    def __post_init__(self):
        if self.Q == 0:
            raise ValueError("Q must be nonzero")
        r = isqrt(self.d)
        if self.d < 2 or r * r == self.d:
            raise ValueError(f"{self.d} is not a valid radicand")
        if (self.d - self.P * self.P) % self.Q:
            raise ValueError(f"Q={self.Q} does not divide d - P^2 for P={self.P}")

    def approx(self) -> float:
        return (self.P + math.sqrt(self.d)) / self.Q

    def conj_approx(self) -> float:
        return (self.P - math.sqrt(self.d)) / self.Q

    def as_pair(self) -> tuple[int, int]:
        return self.P, self.Q


def is_reduced(q: QuadIrr) -> bool:
    """alpha > 1 and -1 < conj(alpha) < 0, decided exactly."""
    sq = 1 if q.Q > 0 else -1
    # alpha - 1 = (P - Q + sqrt d)/Q > 0
    if sign_plus_sqrt(q.P - q.Q, 1, q.d) * sq <= 0:
        return False
    # conj(alpha) = (P - sqrt d)/Q < 0
    if sign_plus_sqrt(q.P, -1, q.d) * sq >= 0:
        return False
    # conj(alpha) + 1 = (P + Q - sqrt d)/Q > 0
    return sign_plus_sqrt(q.P + q.Q, -1, q.d) * sq > 0


def _initial_state(ctx: FieldContext) -> tuple[int, int]:
    return (1, 2) if ctx.is_half else (0, 1)


class CFExpansion:
    """Period, partial quotients, convergents and xi/nu streams for w[d]."""

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        d = ctx.d
        sf = ctx.sqrt_floor
        P, Q = _initial_state(ctx)
        self.a0 = (P + sf) // Q
        a = self.a0
        P = a * Q - P
        Q = (d - P * P) // Q
        first = (P, Q)
        states = [first]
        quotients = []
        while True:
            a = (P + sf) // Q
            quotients.append(a)
            P = a * Q - P
            Q = (d - P * P) // Q
            if (P, Q) == first:
                break
            states.append((P, Q))
        self.l = len(quotients)
        self.periodic = tuple(quotients)
        self.states = tuple(states)  # states[i] is the (P, Q) of alpha_{i+1}
        self._p = [self.a0]
        self._q = [1]

    def partial_quotient(self, n: int) -> int:
        if n == 0:
            return self.a0
        return self.periodic[(n - 1) % self.l]

    def state(self, n: int) -> tuple[int, int]:
        """(P, Q) of the total quotient alpha_n, n >= 1."""
        if n < 1:
            raise ValueError("total quotients start at index 1")
        return self.states[(n - 1) % self.l]

    def _extend(self, n: int) -> None:
        while len(self._p) <= n:
            k = len(self._p)
            a = self.partial_quotient(k)
            pm2, qm2 = (1, 0) if k == 1 else (self._p[k - 2], self._q[k - 2])
            self._p.append(a * self._p[k - 1] + pm2)
            self._q.append(a * self._q[k - 1] + qm2)

    def convergent(self, n: int) -> tuple[int, int]:
        if n < 0:
            return (1, 0)
        self._extend(n)
        return self._p[n], self._q[n]

    def xi(self, n: int) -> QuadInt:
        """xi_n = conj(p_n - q_n w[d])."""
        p, q = self.convergent(n)
        if self.ctx.is_half:
            return QuadInt(self.ctx, p - q, q)
        return QuadInt(self.ctx, p, q)

    def nu(self, n: int) -> int:
        return abs(self.xi(n).norm())


@lru_cache(maxsize=256)
def expand_omega(ctx: FieldContext) -> CFExpansion:
    return CFExpansion(ctx)


def total_quotient(exp: CFExpansion, n: int) -> QuadIrr:
    """alpha_{n+1} as an exact quadratic irrational (n >= 0)."""
    if n < 0:
        raise ValueError("index must be >= 0")
    P, Q = exp.state(n + 1)
    return QuadIrr(exp.ctx.d, P, Q)


def fundamental_unit(ctx: FieldContext) -> QuadInt:
    """xi_{l-1}: the least unit > 1; N equals (-1)**l."""
    exp = expand_omega(ctx)
    eps = exp.xi(exp.l - 1)
    return eps


@dataclass(frozen=True)
class ResidualBound:
    """Certified check of alpha_{n+1} = sqrt(D)/nu_n - q_{n-1}/q_n + delta_n."""

    n: int
    alpha_below_ratio: bool  # alpha_{n+1} < sqrt(D)/nu_n, exact
    delta_within_bound: bool | None  # |delta_n| < 4/(q_n^2 sqrt(D)); None at n=0
    holds: bool  # the contract for this index
    delta_approx: float
    bound_approx: float


def quotient_norm_residual(exp: CFExpansion, n: int) -> ResidualBound:
    """Exact residual check at index n (delta bound applies to n >= 1).

    delta_n lives in Q(sqrt d), so the inequality |delta_n| < 4/(q_n^2 sqrt D)
    is decided by exact sign computations; the float fields are reports only.
    """
    if n < 0:
        raise ValueError("index must be >= 0")
    ctx = exp.ctx
    d = ctx.d
    e = ctx.sqrt_disc_scale  # sqrt(D) = e * sqrt(d)
    nu = exp.nu(n)
    P, Q = exp.state(n + 1)
    _, qn = exp.convergent(n)
    _, qm1 = exp.convergent(n - 1)

    # alpha_{n+1} < sqrt(D)/nu  <=>  nu*P + (nu - Q*e) sqrt(d) < 0
    alpha_below = sign_plus_sqrt(nu * P, nu - Q * e, d) < 0

    # delta = A + B sqrt(d) with A, B rational
    A = Fraction(P, Q) + Fraction(qm1, qn)
    B = Fraction(1, Q) - Fraction(e, nu)
    # |delta| < 4/(q^2 e sqrt d)  <=>  -4 < U + V sqrt(d) < 4
    # with U = B d q^2 e and V = A q^2 e (multiply through by q^2 e sqrt d).
    U = B * d * qn * qn * e
    V = A * qn * qn * e
    within = (
        sign_plus_sqrt_frac(U - 4, V, d) < 0
        and sign_plus_sqrt_frac(U + 4, V, d) > 0
    )

    sd = math.sqrt(d)
    delta_approx = (P + sd) / Q - e * sd / nu + qm1 / qn
    try:
        bound_approx = 4.0 / (qn * qn * e * sd)
    except OverflowError:
        bound_approx = 0.0  # report only; the verdict above is exact
    if n == 0:
        return ResidualBound(n, alpha_below, None, alpha_below, delta_approx, bound_approx)
    return ResidualBound(n, alpha_below, within, within, delta_approx, bound_approx)


def alpha_product(exp: CFExpansion) -> tuple[Fraction, Fraction]:
    """prod_{i=1..l} alpha_i as exact (A, B) with value A + B*sqrt(d)."""
    d = exp.ctx.d
    A, B = Fraction(1), Fraction(0)
    for i in range(1, exp.l + 1):
        P, Q = exp.state(i)
        A, B = (A * P + B * d) / Q, (A + B * P) / Q
    return A, B


def regulator(ctx: FieldContext) -> float:
    """log(eps_d) as sum of log(alpha_i) over one period.

    Streams the (P, Q) recurrence without storing anything, so it is safe
    for radicands far beyond what exact unit coefficients would allow.
    Per-term float error is ~1e-16, giving ~1e-12 relative accuracy for
    periods in the 1e4 range.
    """
    d = ctx.d
    sf = ctx.sqrt_floor
    sd = math.sqrt(d)
    P, Q = _initial_state(ctx)
    a = (P + sf) // Q
    P = a * Q - P
    Q = (d - P * P) // Q
    first = (P, Q)
    total = 0.0
    while True:
        total += math.log((P + sd) / Q)
        a = (P + sf) // Q
        P = a * Q - P
        Q = (d - P * P) // Q
        if (P, Q) == first:
            return total


@lru_cache(maxsize=4096)
def _cached_regulator(ctx: FieldContext) -> float:
    return regulator(ctx)


def unit_compare(ctx: FieldContext, xi: QuadInt) -> int:
    """Exact sign of xi - eps_d for xi > 0: -1 below, 0 equal, +1 above.

    The logs of xi and eps_d are compared first; the margin 1e-6*(1+R)
    dwarfs both certified log errors, and anything closer falls back to
    exact integer comparison of full unit coefficients.
    """
    R = _cached_regulator(ctx)
    lx = xi.log_value()
    margin = 1e-6 * (1.0 + abs(R))
    if lx < R - margin:
        return -1
    if lx > R + margin:
        return 1
    verdict = qi_compare(xi, fundamental_unit(ctx))
    return {"less": -1, "equal": 0, "greater": 1}[verdict]


def expansion_of(d: int) -> CFExpansion:
    return expand_omega(field_context(d))
