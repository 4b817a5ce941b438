import math
from fractions import Fraction

import pytest

from quadunit.contfrac import fundamental_unit
from quadunit.quadfield import QuadInt, field_context
from quadunit.survey import (
    E_mu,
    f_mu,
    minimal_elements,
    negative_pell,
    ramified_identity_check,
    rank_correlation,
    split_identity_check,
    theorem_bound_sweep,
)

from oracles import negative_pell_bruteforce


def test_minimal_elements_examples():
    c17 = field_context(17)
    recs = minimal_elements(c17, 2)
    assert [(r.xi.a, r.xi.b) for r in recs] == [(1, 1), (2, 1)]  # (3+s)/2, (5+s)/2
    assert sorted(r.signed_norm for r in recs) == [-2, 2]

    recs = minimal_elements(field_context(3), 2)
    assert [(r.xi.a, r.xi.b) for r in recs] == [(1, 1)]  # 1 + sqrt(3)

    assert minimal_elements(field_context(5), 2) == []

    with pytest.raises(ValueError):
        minimal_elements(c17, 12)


def test_minimal_elements_routes_agree():
    # the convergent route and the bounded scan see the same sets
    from quadunit.survey import _convergent_route_valid, _minimal_by_scan
    from quadunit.arith import is_squarefree

    for d in range(2, 120):
        if not is_squarefree(d):
            continue
        ctx = field_context(d)
        eps = fundamental_unit(ctx)
        if eps.approx() > 10**7:
            continue
        for mu in (2, 3, 5, 6, 7):
            if not _convergent_route_valid(ctx, mu):
                continue
            from quadunit.quadfield import is_minimal

            scan = {x for x in _minimal_by_scan(ctx, mu) if is_minimal(x, eps)}
            cf = {r.xi for r in minimal_elements(ctx, mu)}
            assert cf == scan, (d, mu)


def test_e_mu_small_values():
    r = E_mu(2, 5)
    assert r.count == 5
    assert r.keys() == {(2, 0, -2), (3, 2, -2), (17, 3, -2), (6, 4, -2), (17, 5, 2)}
    assert E_mu(2, Fraction(3, 2)).count == 1  # just sqrt(2)
    assert E_mu(2, 1).count == 0
    # sqrt(3), (+-1+sqrt 13)/2, (3+sqrt 21)/2, 2+sqrt(7)
    assert E_mu(3, 5).count == 5
    assert (13, -1, -3) in E_mu(3, 5).keys()


def test_e_mu_routes_agree():
    for mu in (1, 2, 3, 5):
        for x in (5, 12, 30):
            a = E_mu(mu, x, route="trace")
            b = E_mu(mu, x, route="fields")
            assert a.keys() == b.keys(), (mu, x)
            assert a.count == b.count
    for mu in (2, 3):
        assert E_mu(mu, 100, route="trace").keys() == E_mu(mu, 100, route="fields").keys()


def test_unit_map_matches_fundamental_units():
    from quadunit.survey import _unit_map

    units = _unit_map(300)
    from quadunit.arith import is_squarefree

    seen = 0
    for d, (m, f) in units.items():
        if d > 3000:
            continue
        assert is_squarefree(d)
        assert fundamental_unit(field_context(d)).half_coords() == (m, f), d
        seen += 1
    assert seen > 100


def test_e_mu_upper_bound():
    for mu in (2, 3):
        for x in (10, 100, 1000):
            r = E_mu(mu, x)
            assert r.theorem_upper_ok
            assert r.count < 2 * x


def test_e_mu_values_sorted_and_minimal():
    r = E_mu(2, 50)
    values = [e.value for e in r.entries]
    assert values == sorted(values)
    # every entry's element is minimal in its own field
    from quadunit.quadfield import is_minimal

    for e in r.entries:
        ctx = field_context(e.d)
        if ctx.is_half:
            xi = QuadInt(ctx, (e.trace - e.sqrt_coeff) // 2, e.sqrt_coeff)
        else:
            xi = QuadInt(ctx, e.trace // 2, e.sqrt_coeff // 2)
        assert xi.norm() == e.signed_norm
        assert is_minimal(xi, fundamental_unit(ctx))


def test_f_mu_examples():
    r = f_mu(2, 10)
    assert r.count == 6
    assert set(r.kernels) == {2, 17, 7, 41, 14, 73}
    assert r.ratio == 0.6 >= 0.5
    assert f_mu(30, 3).count == 0


def test_split_identity_examples():
    v = split_identity_check(22, 3)
    assert v.status == "ok" and v.holds
    assert {v.xi, v.xi_tilde} == {QuadInt(field_context(22), 5, 1), QuadInt(field_context(22), 61, 13)}

    v = split_identity_check(17, 2)
    assert v.status == "ok" and v.holds

    v = split_identity_check(5, 2)
    assert v.status == "hypothesis_not_met"

    # 2 is inert in Q(sqrt 5)-like fields with d = 5 (mod 8)
    v = split_identity_check(29, 2)
    assert v.status == "hypothesis_not_met"


def test_split_identity_value():
    v = split_identity_check(17, 2)
    prod = v.xi * v.xi_tilde
    assert prod == fundamental_unit(field_context(17)).scale(2)


def test_ramified_identity():
    v = ramified_identity_check(14, 2)
    assert v.status == "ok" and v.holds
    assert v.xi == QuadInt(field_context(14), 4, 1)

    assert ramified_identity_check(2, 2).status == "hypothesis_not_met"
    # sqrt(6) - 1 < 2: hypothesis fails even though the squared-generator
    # identity itself happens to hold for d = 6
    assert ramified_identity_check(6, 2).status == "hypothesis_not_met"
    xi = QuadInt(field_context(6), 2, 1)
    assert (xi * xi).divide_exact(2) == fundamental_unit(field_context(6))
    assert ramified_identity_check(21, 2).status == "hypothesis_not_met"  # d = 1 mod 4


def test_negative_pell_small():
    want = [2, 5, 10, 13, 17, 26, 29]
    assert negative_pell(30, route="cf") == want
    assert negative_pell(30, route="progression") == want
    assert negative_pell(3, route="progression") == [2]
    assert negative_pell_bruteforce(30) == want
    assert 3 not in negative_pell(30, route="cf")  # period of w[3] is even


def test_negative_pell_routes_agree():
    assert negative_pell(500, route="cf") == negative_pell(500, route="progression")


def test_ramified_identity_sweep():
    # the squared-generator identity holds whenever the hypotheses do
    from quadunit.arith import is_squarefree

    checked = 0
    for d in range(2, 800):
        if not is_squarefree(d) or d % 4 == 1:
            continue
        for p in (2, 3, 5, 7, 11, 13, 17, 19, 23):
            if (p + 1) ** 2 >= d or (4 * d) % p:
                continue
            v = ramified_identity_check(d, p)
            if v.status == "ok":
                assert v.holds, (d, p)
                checked += 1
    assert checked > 150


def test_bound_sweep():
    rep = theorem_bound_sweep(2, 500)
    assert rep.rows[0].trace == 4 and rep.rows[0].d == 2
    r0 = rep.rows[0]
    assert abs(r0.log_eps - math.log(1 + math.sqrt(2))) < 1e-9
    assert rep.min_residual <= min(r.residual for r in rep.rows)
    assert rep.violation_count == sum(1 for r in rep.rows if r.residual < 0)
    assert len(rep.decile_means) == 10
    with pytest.raises(ValueError):
        theorem_bound_sweep(4, 100)
    with pytest.raises(ValueError):
        theorem_bound_sweep(2, 3)  # no admissible traces


def test_bound_sweep_deterministic():
    a = theorem_bound_sweep(2, 300)
    b = theorem_bound_sweep(2, 300)
    assert a == b


def test_rank_correlation():
    assert rank_correlation([1, 2, 3, 4]) == 1.0
    assert rank_correlation([4, 3, 2, 1]) == -1.0
    assert abs(rank_correlation([1, 3, 2, 4])) < 1.0
