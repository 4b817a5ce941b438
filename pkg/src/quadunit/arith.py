"""Exact integer utilities: factorization, square roots, residue symbols.

Every routine here works in plain ``int`` arithmetic (arbitrary precision,
no floating point on any number-theoretic path).  Results are exact,
or an explicit :class:`UnfactoredError` is raised when an input exceeds
the factorization budget -- a wrong answer is never returned silently.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

DEFAULT_TRIAL_BOUND = 10**6
ENV_TRIAL_BOUND = "QUADUNIT_FACTOR_BUDGET"

# Deterministic Miller-Rabin witness set, valid for n < 3.317e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981


class BudgetError(ArithmeticError):
    """A computation exceeded its configured search/factorization budget."""


class UnfactoredError(BudgetError):
    """A cofactor survived the trial-division budget; nothing is guessed."""


def resolve_trial_bound(bound: int | None = None) -> int:
    if bound is not None:
        return bound
    env = os.environ.get(ENV_TRIAL_BOUND)
    return int(env) if env else DEFAULT_TRIAL_BOUND


def isqrt(n: int) -> int:
    """Exact integer square root: the r with r*r <= n < (r+1)*(r+1)."""
    if n < 0:
        raise ValueError("isqrt of negative integer")
    return math.isqrt(n)


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def introot(n: int, k: int) -> int:
    """Largest r with r**k <= n (n >= 0, k >= 1)."""
    if n < 0 or k < 1:
        raise ValueError("introot requires n >= 0, k >= 1")
    if n < 2 or k == 1:
        return n
    r = int(round(n ** (1.0 / k)))
    while r > 0 and r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


# ---------------------------------------------------------------------------
# primes


_sieve_limit = 0
_sieve_primes: list[int] = []


def primes_up_to(n: int) -> list[int]:
    """All primes <= n, cached and re-used across calls."""
    global _sieve_limit, _sieve_primes
    if n <= _sieve_limit:
        # bisect would be cheaper, but callers mostly ask with the cached bound
        if n == _sieve_limit:
            return _sieve_primes
        import bisect

        return _sieve_primes[: bisect.bisect_right(_sieve_primes, n)]
    flags = bytearray(b"\x01") * (n + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = b"\x00" * len(range(p * p, n + 1, p))
    _sieve_primes = [i for i in range(2, n + 1) if flags[i]]
    _sieve_limit = n
    return _sieve_primes


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid below 3.317e24; raises beyond)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise UnfactoredError(f"{n} exceeds the deterministic primality range")
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# factorization


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs, primes ascending."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        last = 1
        for p, e in self.pairs:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization {self.pairs}")
            last = p

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.pairs)

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.pairs)


def factorize(n: int, trial_bound: int | None = None) -> Factorization:
    """Complete prime factorization of n >= 1, or UnfactoredError."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    bound = resolve_trial_bound(trial_bound)
    pairs = []
    m = n
    for p in primes_up_to(min(bound, math.isqrt(n) + 1)):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            pairs.append((p, e))
    if m > 1:
        if is_prime(m):
            pairs.append((m, 1))
        else:
            # all factors of m exceed the trial bound; try perfect powers
            for k in range(2, m.bit_length() + 1):
                r = introot(m, k)
                if r**k == m and is_prime(r):
                    pairs.append((r, k))
                    break
            else:
                raise UnfactoredError(
                    f"cofactor {m} of {n} not factored within budget {bound}"
                )
    pairs.sort()
    return Factorization(tuple(pairs))


def squarefree_kernel(n: int, trial_bound: int | None = None) -> tuple[int, int]:
    """Split n >= 1 as kernel * cofactor**2 with kernel square-free.

    Correct without full factorization: after trial division up to B, a
    surviving cofactor below B**3 is 1, p, p*q or a perfect square, all of
    which are handled exactly; anything larger raises UnfactoredError.
    """
    if n < 1:
        raise ValueError(f"squarefree_kernel requires n >= 1, got {n}")
    bound = resolve_trial_bound(trial_bound)
    kernel = 1
    cof = 1
    m = n
    exhausted = True
    for p in primes_up_to(min(bound, math.isqrt(n) + 1)):
        if p * p > m:
            exhausted = False
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e & 1:
                kernel *= p
            cof *= p ** (e >> 1)
    if m > 1:
        if not exhausted:
            # m is prime (no factor up to its square root)
            kernel *= m
        elif is_square(m):
            cof *= math.isqrt(m)
        elif m < bound**3:
            # prime or product of two distinct primes: square-free either way
            kernel *= m
        else:
            raise UnfactoredError(
                f"cofactor {m} of {n} not resolved within budget {bound}"
            )
    return kernel, cof


def is_squarefree(n: int, trial_bound: int | None = None) -> bool:
    return squarefree_kernel(abs(n), trial_bound)[1] == 1


# ---------------------------------------------------------------------------
# modular arithmetic


def mod_inverse(a: int, m: int) -> int:
    """t in [0, m) with a*t == 1 (mod m); requires gcd(a, m) == 1."""
    if m < 1:
        raise ValueError("modulus must be positive")
    try:
        return pow(a, -1, m)
    except ValueError:
        raise ValueError(f"{a} is not invertible modulo {m}") from None


def jacobi(a: int, m: int) -> int:
    """Jacobi symbol (a|m) for odd positive m."""
    if m <= 0 or m % 2 == 0:
        raise ValueError(f"Jacobi symbol needs odd positive modulus, got {m}")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def mod_arith(a: int, m: int, kind: str) -> int:
    """Dispatcher over the two residue operations used downstream."""
    if kind == "inverse":
        return mod_inverse(a, m)
    if kind == "jacobi":
        return jacobi(a, m)
    raise ValueError(f"unknown kind {kind!r}")


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a modulo prime p, or None. Tonelli-Shanks for odd p."""
    a %= p
    if p == 2:
        return a
    if a == 0:
        return 0
    if jacobi(a, p) == -1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return r
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while jacobi(z, p) != -1:
        z += 1
    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        i = 0
        t2 = t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return r


def squarefree_integers_upto(n: int) -> bytearray:
    """flags[i] == 1 iff i is square-free, for 0 <= i <= n."""
    flags = bytearray(b"\x01") * (n + 1)
    flags[0] = 0
    i = 2
    while i * i <= n:
        step = i * i
        flags[step::step] = b"\x00" * len(range(step, n + 1, step))
        i += 1
    return flags
