"""Canonical bases of integral ideals and reduced-ideal enumeration.

An integral ideal is represented only through its unique canonical basis
[a, b + c*w] over Z, where w = (D + sqrt(D))/2 (note: this is a different
generator than w[d]; both live on :class:`FieldContext`).  The defining
conditions are

    (i)   a > 0, c > 0, a*c = N(I),
    (ii)  c | a, c | b, N(b + c*w) = 0 (mod a*c),
    (iii) -a < b + c*conj(w) < 0,

all of which are decided exactly.  (iii) pins b uniquely inside its
residue class mod a because conj(w) is irrational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import factorize, is_squarefree, jacobi
from .contfrac import CFExpansion, QuadIrr, expand_omega, is_reduced, total_quotient
from .quadfield import (
    FieldContext,
    QuadInt,
    floor_plus_sqrt_div,
    sign_plus_sqrt,
)


def omega_ideal(ctx: FieldContext) -> QuadInt:
    """w = (D + sqrt(D))/2 expressed over the {1, w[d]} basis."""
    if ctx.is_half:
        return QuadInt(ctx, (ctx.d - 1) // 2, 1)
    return QuadInt(ctx, 2 * ctx.d, 1)


@dataclass(frozen=True)
class IdealBasis:
    """Canonical basis [a, b + c*w] of an integral ideal."""

    ctx: FieldContext
    a: int
    b: int
    c: int

    def __post_init__(self):
        ctx, a, b, c = self.ctx, self.a, self.b, self.c
        if a <= 0 or c <= 0:
            raise ValueError(f"need a > 0 and c > 0, got a={a}, c={c}")
        if a % c or b % c:
            raise ValueError(f"c={c} must divide a={a} and b={b}")
        if self.generator_second().norm() % (a * c):
            raise ValueError(f"N(b+c*w) not divisible by a*c for {self}")
        D, e, d = ctx.discriminant, ctx.sqrt_disc_scale, ctx.d
        # (iii): -a < b + c*conj(w) < 0 with conj(w) = (D - sqrt D)/2
        u = 2 * b + c * D
        if not (sign_plus_sqrt(u, -c * e, d) < 0 and sign_plus_sqrt(u + 2 * a, -c * e, d) > 0):
            raise ValueError(f"basis {self} violates the translation condition")

    def generator_second(self) -> QuadInt:
        return omega_ideal(self.ctx).scale(self.c) + QuadInt(self.ctx, self.b, 0)

    def norm(self) -> int:
        return self.a * self.c

    def conjugate(self) -> "IdealBasis":
        """Canonical basis of the conjugate ideal."""
        # conj ideal is spanned by a and b + c*conj(w) = (b + c*D) - c*w
        return canonical_from_module(self.ctx, self.a, self.b + self.c * self.ctx.discriminant, -self.c)


def _canonical_b(ctx: FieldContext, a: int, b0: int, c: int) -> int:
    """Translate b0 by multiples of a into the (iii) window."""
    D, e, d = ctx.discriminant, ctx.sqrt_disc_scale, ctx.d
    # floor((-c*conj(w) - b0) / a) with conj(w) = (D - sqrt D)/2
    m = floor_plus_sqrt_div(-c * D - 2 * b0, c * e, 2 * a, d)
    return b0 + a * m


def canonical_from_module(ctx: FieldContext, a: int, b0: int, c: int) -> IdealBasis:
    """Canonical basis of the Z-module a*Z + (b0 + c*w)*Z (must be an ideal)."""
    if a < 0:
        a = -a
    if c < 0:
        b0, c = -b0, -c
    return IdealBasis(ctx, a, _canonical_b(ctx, a, b0, c), c)


def _omega_coords(x: QuadInt) -> tuple[int, int]:
    """Coordinates (u, v) of x over the {1, w} basis, w = (D + sqrt D)/2."""
    ctx = x.ctx
    if ctx.is_half:
        # w = (d-1)/2 + w[d]
        return x.a - x.b * (ctx.d - 1) // 2, x.b
    # w = 2d + sqrt(d)
    return x.a - 2 * ctx.d * x.b, x.b


def principal_basis(xi: QuadInt) -> IdealBasis:
    """Canonical basis of the principal ideal (xi), via 2x2 Hermite form."""
    if xi.a == 0 and xi.b == 0:
        raise ValueError("zero generates the zero module, not an ideal")
    ctx = xi.ctx
    u1, v1 = _omega_coords(xi)
    u2, v2 = _omega_coords(omega_ideal(ctx) * xi)
    g, s, t = _ext_gcd(v1, v2)
    b0 = s * u1 + t * u2
    det = u1 * v2 - u2 * v1
    a = abs(det) // g
    basis = canonical_from_module(ctx, a, b0, g)
    if basis.norm() != abs(xi.norm()):
        raise AssertionError(f"norm mismatch for principal basis of {xi}")
    return basis


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    """(g, s, t) with g = s*x + t*y > 0 (x, y not both zero)."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def alpha_of_ideal(basis: IdealBasis) -> QuadIrr:
    """The associated quadratic irrational (b + c*w)/a, as (P + sqrt d)/Q."""
    ctx = basis.ctx
    ah, bh = basis.a // basis.c, basis.b // basis.c
    if ctx.is_half:
        return QuadIrr(ctx.d, 2 * bh + ctx.d, 2 * ah)
    return QuadIrr(ctx.d, bh + 2 * ctx.d, ah)


def is_reduced_ideal(basis: IdealBasis) -> bool:
    return basis.c == 1 and is_reduced(alpha_of_ideal(basis))


def conjugate_coprime(basis: IdealBasis) -> bool:
    """gcd(I, conj(I)) = (1), from canonical data.

    I + conj(I) has Hermite form [g, b + c*w] with g = gcd(a, 2b + c*D), so
    the sum is the unit ideal iff g = 1 and c = 1.  Validated against
    :func:`conjugate_coprime_bruteforce` in the test suite.
    """
    return basis.c == 1 and math.gcd(basis.a, 2 * basis.b + basis.c * basis.ctx.discriminant) == 1


def _hnf_rows(rows: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite form (A, B, C) of the module spanned by rows over {1, w}.

    The module equals A*Z + (B + C*w)*Z with A > 0, C > 0, 0 <= B < A.
    """
    c, bw = 0, 0
    for (u, v) in rows:
        if v == 0:
            continue
        c, s, t = _ext_gcd(c, v)
        bw = s * bw + t * u
    if c == 0:
        raise ValueError("module has rank < 2")
    A = 0
    for (u, v) in rows:
        A = math.gcd(A, u - (v // c) * bw)
    if A == 0:
        raise ValueError("module has rank < 2")
    return A, bw % A, c


def conjugate_coprime_bruteforce(basis: IdealBasis) -> bool:
    """Module-sum oracle: Hermite form of the four generators of I + conj(I)."""
    D = basis.ctx.discriminant
    A, _, C = _hnf_rows(
        [
            (basis.a, 0),
            (basis.b, basis.c),
            (basis.a, 0),
            (basis.b + basis.c * D, -basis.c),
        ]
    )
    return A == 1 and C == 1


def mu_below_omega(ctx: FieldContext, mu: int) -> bool:
    """Exact test of the counting hypothesis mu < w[d]."""
    if ctx.is_half:
        return (2 * mu - 1) ** 2 < ctx.d if mu >= 1 else True
    return mu * mu < ctx.d if mu >= 1 else True


def norm_ideal_candidates(ctx: FieldContext, mu: int) -> list[IdealBasis]:
    """All canonical bases [mu, b + w]: square-free mu forces c = 1."""
    if mu < 1 or not is_squarefree(mu):
        raise ValueError(f"norm {mu} must be a positive square-free integer")
    w = omega_ideal(ctx)
    out = []
    for r in range(mu):
        if (QuadInt(ctx, r, 0) + w).norm() % mu == 0:
            out.append(IdealBasis(ctx, mu, _canonical_b(ctx, mu, r, 1), 1))
    out.sort(key=lambda basis: basis.b)
    return out


def reduced_ideals_of_norm(ctx: FieldContext, mu: int) -> list[IdealBasis]:
    """The reduced integral ideals of norm mu (enumeration, no formula)."""
    return [basis for basis in norm_ideal_candidates(ctx, mu) if is_reduced_ideal(basis)]


def count_reduced_formula(ctx: FieldContext, mu: int, enforce_hypothesis: bool = True) -> int:
    """Four-case count of reduced ideals of square-free norm mu < w[d].

    With mu1 = gcd(mu, 2d) and mu = mu1*mu2 the count is 2**omega(mu2),
    doubled once when mu is even and d = 1 (mod 8), and zero when d is a
    non-square modulo mu or when mu is even with d = 5 (mod 8).
    """
    if mu < 1 or not is_squarefree(mu):
        raise ValueError(f"norm {mu} must be a positive square-free integer")
    if enforce_hypothesis and not mu_below_omega(ctx, mu):
        raise ValueError(f"count formula requires mu < w[d] (mu={mu}, d={ctx.d})")
    d = ctx.d
    omega_mu2 = 0
    for p in factorize(mu).primes():
        if p == 2:
            continue
        if jacobi(d % p, p) == -1:
            return 0  # d is a non-square modulo mu
        if d % p:
            omega_mu2 += 1  # p coprime to 2d contributes to mu2
    if d % 4 in (2, 3):
        return 1 << omega_mu2
    if mu % 2 == 1:
        return 1 << omega_mu2
    if d % 8 == 1:
        return 1 << (omega_mu2 + 1)
    return 0


@dataclass(frozen=True)
class XiAlphaIndex:
    n: int
    ok: bool
    a: int
    nu: int
    c: int
    alpha_ideal: tuple[int, int]
    alpha_cf: tuple[int, int]


def xi_alpha_check(ctx: FieldContext) -> list[XiAlphaIndex]:
    """Verify alpha((xi_n)) == alpha_{n+1} at every n < l, exactly."""
    exp: CFExpansion = expand_omega(ctx)
    out = []
    for n in range(exp.l):
        basis = principal_basis(exp.xi(n))
        ai = alpha_of_ideal(basis).as_pair()
        ac = total_quotient(exp, n).as_pair()
        ok = basis.c == 1 and basis.a == exp.nu(n) and ai == ac
        out.append(XiAlphaIndex(n, ok, basis.a, exp.nu(n), basis.c, ai, ac))
    return out
