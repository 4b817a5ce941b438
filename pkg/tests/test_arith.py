import random

import pytest

from quadunit.arith import (
    Factorization,
    UnfactoredError,
    factorize,
    is_prime,
    is_square,
    isqrt,
    jacobi,
    mod_arith,
    mod_inverse,
    primes_up_to,
    sqrt_mod_prime,
    squarefree_kernel,
)

rng = random.Random(0xC0FFEE)


def test_isqrt_examples():
    assert isqrt(0) == 0
    assert isqrt(3481) == 59
    assert isqrt(71) == 8
    with pytest.raises(ValueError):
        isqrt(-1)


def test_isqrt_random():
    for _ in range(2000):
        n = rng.randrange(10**9)
        r = isqrt(n)
        assert r * r <= n < (r + 1) * (r + 1)
    big = 10**40 + rng.randrange(10**20)
    r = isqrt(big)
    assert r * r <= big < (r + 1) * (r + 1)


def test_squarefree_kernel_examples():
    assert squarefree_kernel(56) == (14, 2)
    assert squarefree_kernel(73) == (73, 1)
    assert squarefree_kernel(16) == (1, 4)
    with pytest.raises(ValueError):
        squarefree_kernel(0)


def test_squarefree_kernel_reconstruction():
    for _ in range(500):
        n = rng.randrange(1, 10**7)
        k, c = squarefree_kernel(n)
        assert k * c * c == n
        assert all(e == 1 for _, e in factorize(k).pairs)


def test_squarefree_kernel_large_semiprime():
    # two distinct primes above the trial bound: still resolved exactly
    # (a surviving cofactor below bound**3 is 1, p, p*q or a square)
    p, q = 1_000_003, 1_000_033
    assert squarefree_kernel(p * q, trial_bound=100_000) == (p * q, 1)
    assert squarefree_kernel(p * p, trial_bound=1000) == (1, p)
    with pytest.raises(UnfactoredError):
        squarefree_kernel(p * q, trial_bound=1000)  # beyond the bound**3 window


def test_mod_inverse():
    assert mod_inverse(2, 7) == 4
    assert mod_arith(2, 7, "inverse") == 4
    for _ in range(200):
        m = rng.randrange(2, 10**6)
        a = rng.randrange(1, m)
        if __import__("math").gcd(a, m) != 1:
            with pytest.raises(ValueError):
                mod_inverse(a, m)
        else:
            assert a * mod_inverse(a, m) % m == 1
    with pytest.raises(ValueError):
        mod_inverse(6, 9)


def test_jacobi():
    assert jacobi(2, 7) == 1
    assert jacobi(2, 3) == -1
    assert mod_arith(2, 3, "jacobi") == -1
    with pytest.raises(ValueError):
        jacobi(3, 4)
    # multiplicativity on random triples
    for _ in range(300):
        m = 2 * rng.randrange(1, 10**4) + 1
        a = rng.randrange(-(10**4), 10**4)
        b = rng.randrange(-(10**4), 10**4)
        assert jacobi(a * b, m) == jacobi(a, m) * jacobi(b, m)


def test_jacobi_detects_squares_mod_prime():
    for p in primes_up_to(200):
        if p == 2:
            continue
        squares = {x * x % p for x in range(1, p)}
        for a in range(1, p):
            assert (jacobi(a, p) == 1) == (a in squares)


def test_mod_arith_bad_kind():
    with pytest.raises(ValueError):
        mod_arith(1, 3, "legendre")


def test_factorize_examples():
    assert factorize(12).pairs == ((2, 2), (3, 1))
    assert factorize(1).pairs == ()
    assert factorize(503).pairs == ((503, 1),)
    assert factorize(503).omega() == 1
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_roundtrip():
    for _ in range(300):
        n = rng.randrange(1, 10**9)
        f = factorize(n)
        assert f.value() == n


def test_factorization_invariants():
    with pytest.raises(ValueError):
        Factorization(((3, 1), (2, 1)))  # primes must ascend
    with pytest.raises(ValueError):
        Factorization(((2, 0),))


def test_unfactored_error():
    p, q = 10_007, 10_009
    with pytest.raises(UnfactoredError):
        factorize(p * q, trial_bound=100)
    # a perfect square of an out-of-budget prime is still resolved
    assert factorize(p * p, trial_bound=100).pairs == ((p, 2),)


def test_is_prime_small():
    primes = set(primes_up_to(1000))
    for n in range(1000):
        assert is_prime(n) == (n in primes)


def test_sqrt_mod_prime():
    for p in primes_up_to(100):
        for a in range(p):
            r = sqrt_mod_prime(a, p)
            if r is None:
                assert all(x * x % p != a for x in range(p))
            else:
                assert r * r % p == a % p


def test_is_square():
    assert is_square(0) and is_square(49) and not is_square(50)
    assert not is_square(-4)
