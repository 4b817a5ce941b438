import random

import pytest

from quadunit.quadfield import (
    FieldContext,
    QuadInt,
    field_context,
    format_quadint,
    is_minimal,
    parse_quadint,
    qi_algebra,
    qi_compare,
)

from oracles import float_value

rng = random.Random(0x5EED)

SQUAREFREE = [d for d in range(2, 400) if all(d % (p * p) for p in range(2, 20))]


def test_field_context_validation():
    with pytest.raises(ValueError):
        FieldContext(1)
    with pytest.raises(ValueError):
        FieldContext(12)
    with pytest.raises(ValueError):
        FieldContext(49)
    ctx = field_context(5)
    assert ctx.is_half and ctx.discriminant == 5 and ctx.omega_floor == 1
    ctx = field_context(6)
    assert not ctx.is_half and ctx.discriminant == 24 and ctx.omega_floor == 2


def test_norm_trace_examples():
    c2, c5, c13 = field_context(2), field_context(5), field_context(13)
    assert QuadInt(c2, 10, 7).norm() == 2
    assert QuadInt(c5, 0, 1).norm() == -1
    assert QuadInt(c13, 1, 1).trace() == 3
    assert qi_algebra(QuadInt(c2, 10, 7), None, "norm") == 2
    assert qi_algebra(QuadInt(c13, 1, 1), None, "trace") == 3


def test_conj_involution_and_norm_product():
    for _ in range(300):
        d = rng.choice(SQUAREFREE)
        ctx = field_context(d)
        x = QuadInt(ctx, rng.randrange(-50, 50), rng.randrange(-50, 50))
        assert x.conj().conj() == x
        prod = qi_algebra(x, x.conj(), "mul")
        assert prod == QuadInt(ctx, x.norm(), 0)
        assert x.trace() == x.a * 2 + x.b * ctx.omega_trace


def test_norm_multiplicative():
    for _ in range(300):
        ctx = field_context(rng.choice(SQUAREFREE))
        x = QuadInt(ctx, rng.randrange(-40, 40), rng.randrange(-40, 40))
        y = QuadInt(ctx, rng.randrange(-40, 40), rng.randrange(-40, 40))
        assert (x * y).norm() == x.norm() * y.norm()


def test_mixed_contexts_rejected():
    x = QuadInt(field_context(2), 1, 1)
    y = QuadInt(field_context(3), 1, 1)
    with pytest.raises(ValueError):
        _ = x * y
    with pytest.raises(ValueError):
        qi_compare(x, y)


def test_compare_examples():
    c2 = field_context(2)
    assert qi_compare(QuadInt(c2, 2, 1), QuadInt(c2, 1, 1)) == "greater"
    c71 = field_context(71)
    assert qi_compare(QuadInt(c71, 59, 7), QuadInt(c71, 3480, 413)) == "less"
    c5 = field_context(5)
    assert qi_compare(QuadInt(c5, 0, 1), 1) == "greater"
    assert qi_compare(QuadInt(c5, 2, 0), 2) == "equal"


def test_compare_against_float_oracle():
    for _ in range(10**4):
        d = rng.choice(SQUAREFREE)
        ctx = field_context(d)
        x = QuadInt(ctx, rng.randrange(-100, 100), rng.randrange(-100, 100))
        y = QuadInt(ctx, rng.randrange(-100, 100), rng.randrange(-100, 100))
        fx = float_value(x.a, x.b, d, ctx.is_half)
        fy = float_value(y.a, y.b, d, ctx.is_half)
        got = qi_compare(x, y)
        if abs(fx - fy) > 1e-9:
            assert got == ("less" if fx < fy else "greater")
        else:
            assert (got == "equal") == (x == y)


def test_unit_inverse():
    c2 = field_context(2)
    eps = QuadInt(c2, 1, 1)
    assert eps * eps.unit_inverse() == c2.one()
    with pytest.raises(ValueError):
        QuadInt(c2, 3, 0).unit_inverse()


def test_is_minimal_examples():
    c2 = field_context(2)
    eps2 = QuadInt(c2, 1, 1)
    assert is_minimal(QuadInt(c2, 0, 1), eps2)  # sqrt(2)
    assert not is_minimal(QuadInt(c2, 2, 1), eps2)  # 2 + sqrt(2)
    c17 = field_context(17)
    eps17 = QuadInt(c17, 3, 2)  # 4 + sqrt(17)
    assert is_minimal(QuadInt(c17, 2, 1), eps17)  # (5 + sqrt 17)/2
    # eps itself is minimal in the unit class
    assert is_minimal(eps2, eps2)
    with pytest.raises(ValueError):
        is_minimal(QuadInt(c2, 3, 0), eps2)  # rational
    with pytest.raises(ValueError):
        is_minimal(QuadInt(c2, 0, 1), QuadInt(c2, 3, 1))  # not a unit


def test_exactly_one_minimal_associate():
    from quadunit.contfrac import fundamental_unit

    for d in (2, 3, 6, 13, 17, 21, 29):
        ctx = field_context(d)
        eps = fundamental_unit(ctx)
        for (a, b) in [(1, 1), (2, 1), (0, 1), (3, 2)]:
            x = QuadInt(ctx, a, b)
            if x.norm() == 0 or x.b == 0:
                continue
            # among the positive associates x*eps^k in (1, inf), exactly one
            # is minimal
            hits = 0
            for k in range(-6, 7):
                y = x * eps**k
                if y.sign() <= 0:
                    y = -y
                if qi_compare(y, 1) == "greater" and is_minimal(y, eps):
                    hits += 1
            assert hits == 1


def test_text_roundtrip():
    for _ in range(100):
        ctx = field_context(rng.choice(SQUAREFREE))
        x = QuadInt(ctx, rng.randrange(-10**6, 10**6), rng.randrange(-10**6, 10**6))
        assert parse_quadint(format_quadint(x)) == x
    assert format_quadint(QuadInt(field_context(71), 3480, 413)) == "3480+413*w[71]"
    assert parse_quadint("0+1*w[5]") == QuadInt(field_context(5), 0, 1)
    with pytest.raises(ValueError):
        parse_quadint("nonsense")


def test_decimal_approx():
    from quadunit.quadfield import decimal_approx

    golden = decimal_approx(QuadInt(field_context(5), 0, 1), 256)
    assert golden.startswith("1.61803398874989484820458683436563811772")
    assert decimal_approx(QuadInt(field_context(2), -1, -1), 64).startswith("-2.414213562")
    assert decimal_approx(QuadInt(field_context(2), 3, 0), 64).startswith("3.0000")
    with pytest.raises(ValueError):
        decimal_approx(QuadInt(field_context(2), 1, 1), 32)


def test_log_value_matches_float():
    import math

    for _ in range(200):
        d = rng.choice(SQUAREFREE)
        ctx = field_context(d)
        x = QuadInt(ctx, rng.randrange(1, 1000), rng.randrange(1, 1000))
        assert abs(x.log_value() - math.log(float_value(x.a, x.b, d, ctx.is_half))) < 1e-9
