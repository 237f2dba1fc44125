from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kapollonian.qint import (
    Disc,
    DiscError,
    ExtRat,
    OKElem,
    bezout,
    coprime,
    disc_cache,
    elements_of_norm_up_to,
    ext,
    ext_sqrt,
    ok,
    solve_integer_system,
)

DISCS = [-4, -8, -7, -11, -15, -19, -20, -23, -24]


@pytest.mark.parametrize("delta", DISCS)
def test_disc_accepts_fundamental(delta):
    d = Disc(delta)
    assert d.eps == (0 if delta % 4 == 0 else 1)
    assert d.abs_delta == -delta


@pytest.mark.parametrize("delta", [-3, -12, -9, -16, -27, -28, 5, 0, -1, -5])
def test_disc_rejects(delta):
    with pytest.raises(DiscError):
        Disc(delta)


def test_tau_square_identity():
    # tau^2 = eps*tau + (delta - eps)/4, exercised through multiplication
    for delta in DISCS:
        d = disc_cache(delta)
        tau = ok(d, 0, 1)
        tt = tau * tau
        assert (tt.u, tt.v) == (d.tau_sq_const, d.eps)


def test_paper_norm_values():
    # N(tau) = -(delta - eps)/4
    assert ok(disc_cache(-8), 0, 1).norm() == 2
    assert ok(disc_cache(-4), 0, 1).norm() == 1
    assert ok(disc_cache(-7), 0, 1).norm() == 2
    assert ok(disc_cache(-15), 0, 1).norm() == 4
    tau = ok(disc_cache(-7), 0, 1)
    prod = tau * tau.conj()
    assert (prod.u, prod.v) == (2, 0)


def test_trace_eps0():
    assert ok(disc_cache(-8), 3, 2).trace() == 6


coord = st.integers(min_value=-30, max_value=30)


@settings(max_examples=200)
@given(st.sampled_from(DISCS), coord, coord, coord, coord)
def test_norm_multiplicative_conj_involutive(delta, u1, v1, u2, v2):
    d = disc_cache(delta)
    x, y = ok(d, u1, v1), ok(d, u2, v2)
    assert (x * y).norm() == x.norm() * y.norm()
    assert x.conj().conj() == x
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()
    assert x.norm() >= 0
    assert (x.norm() == 0) == x.is_zero()


@settings(max_examples=100)
@given(st.sampled_from(DISCS), coord, coord)
def test_norm_formula(delta, u, v):
    d = disc_cache(delta)
    e = d.eps
    assert ok(d, u, v).norm() == u * u + e * u * v + v * v * ((e - delta) // 4)
    assert ok(d, u, v).trace() == 2 * u + e * v


def test_extrat_field_axioms():
    a = ext(15, Fraction(1, 2), Fraction(-3, 4))
    b = ext(15, 2, Fraction(1, 3))
    assert (a * b - b * a).is_zero()
    assert ((a + b) * a.inverse() - a * a.inverse() - b * a.inverse()).is_zero()
    assert (a * a.inverse() - 1).is_zero()
    # (p + q rt)(p - q rt) = p^2 - q^2 d
    conj = ExtRat(15, a.p, -a.q)
    prod = a * conj
    assert prod.is_rational()
    assert prod.rational() == a.p * a.p - a.q * a.q * 15


def test_extrat_square_disc_collapses():
    # |delta| = 4 is a perfect square: sqrt collapses to 2
    x = ext(4, 1, 1)
    assert x.is_rational() and x.rational() == 3
    assert ext_sqrt(4) == ext(4, 2, 0)


def test_extrat_sign_exact():
    assert ext(15, -4, 1).sign() == -1   # sqrt(15) < 4
    assert ext(15, -3, 1).sign() == 1    # sqrt(15) > 3
    assert ext(15, 0, 0).sign() == 0
    assert ext(8, 17, -6).sign() == 1    # 17 > 6*sqrt(8) = 16.97
    assert ext(8, -17, 6).sign() == -1


def test_solve_integer_system_basic():
    sol = solve_integer_system([[2, 4], [1, 3]], [2, 2])
    assert sol is not None
    x0, ker = sol
    assert 2 * x0[0] + 4 * x0[1] == 2 and x0[0] + 3 * x0[1] == 2
    assert ker == []
    assert solve_integer_system([[2, 4]], [3]) is None  # 3 not in (2,4)=2Z


def test_bezout_trivial():
    d = disc_cache(-8)
    res = bezout(ok(d, 1, 0), ok(d, 0, 0))
    assert res is not None
    gamma, delta = res
    assert delta == ok(d, 1, 0) and gamma == ok(d, 0, 0)


def test_bezout_unit_tau_gaussian():
    d = disc_cache(-4)
    res = bezout(ok(d, 0, 1), ok(d, 2, 0))  # (tau, 2) with tau = i
    assert res is not None
    gamma, delta = res
    tau = ok(d, 0, 1)
    assert tau * delta - ok(d, 2, 0) * gamma == ok(d, 1, 0)


def test_bezout_non_coprime_returns_none():
    d = disc_cache(-8)
    # 2 = -tau^2, so (2, tau) share the prime ideal above 2
    assert bezout(ok(d, 2, 0), ok(d, 0, 1)) is None


def test_bezout_deterministic():
    d = disc_cache(-15)
    a, b = ok(d, 2, 1), ok(d, 1, -1)
    first = bezout(a, b)
    for _ in range(3):
        assert bezout(a, b) == first


@pytest.mark.parametrize("delta", [-4, -8, -7, -11, -15, -20])
def test_bezout_matches_brute_force(delta):
    """Existence agrees with brute-force search over small coordinates."""
    d = disc_cache(delta)
    box = range(-4, 5)
    small = [ok(d, u, v) for u in box for v in box]
    search = [ok(d, u, v) for u in range(-10, 11) for v in range(-10, 11)]
    one = ok(d, 1, 0)
    for alpha in small:
        for beta in small:
            if alpha.is_zero() and beta.is_zero():
                continue
            got = bezout(alpha, beta)
            brute = _brute_bezout(alpha, beta, search)
            assert (got is not None) == brute, (alpha, beta)
            assert coprime(alpha, beta) == (got is not None), (alpha, beta)
            if got is not None:
                gamma, dd = got
                assert alpha * dd - beta * gamma == one


def _brute_bezout(alpha, beta, search):
    """Search gamma in a box, solving alpha*delta = 1 + beta*gamma exactly."""
    d = alpha.disc
    one = ok(d, 1, 0)
    if alpha.is_zero():
        return beta.is_unit()
    na = alpha.norm()
    for gg in search:
        num = (one + beta * gg) * alpha.conj()
        if num.u % na == 0 and num.v % na == 0:
            return True
    return False


def test_elements_of_norm_up_to():
    d = disc_cache(-8)
    els = elements_of_norm_up_to(d, 9)
    assert all(0 < x.norm() <= 9 for x in els)
    got = {(x.u, x.v) for x in els}
    brute = {
        (u, v)
        for u in range(-10, 11)
        for v in range(-10, 11)
        if 0 < OKElem(d, u, v).norm() <= 9
    }
    assert got == brute
    d7 = disc_cache(-7)
    got7 = {(x.u, x.v) for x in elements_of_norm_up_to(d7, 16)}
    brute7 = {
        (u, v)
        for u in range(-12, 13)
        for v in range(-12, 13)
        if 0 < OKElem(d7, u, v).norm() <= 16
    }
    assert got7 == brute7
