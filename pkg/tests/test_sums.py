import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burgesslab.modular import char_eval, prime_modulus
from burgesslab.sums import (
    RealPolynomial,
    build_Fx,
    complete_sum,
    is_perfect_power,
    mixed_sum,
    plain_sum,
    shifted_sum,
    weil_report,
)
from burgesslab.vinogradov import TupleAssignment, is_bad

from conftest import direct_mixed_sum


def direct_complete_sum(chi, x):
    F = build_Fx(x, chi.order, chi.q)
    return sum(char_eval(chi, F(m)) for m in range(1, chi.q + 1))


# -- RealPolynomial ------------------------------------------------------------

def test_polynomial_declared_degree():
    f = RealPolynomial([Fraction(1, 3), 2], degree=3)
    assert f.degree == 3
    assert f.coeffs[3] == 0
    assert f.reduced().coeffs == (Fraction(1, 3), 0, 0, 0)
    with pytest.raises(ValueError):
        RealPolynomial([1, 2, 3], degree=1)


def test_polynomial_reduction_keeps_phases():
    f = RealPolynomial([Fraction(7, 3), Fraction(-5, 4), Fraction(9, 2)])
    g = f.reduced()
    assert all(0 <= c < 1 for c in g.coeffs)
    for n in range(-20, 20):
        assert (f(n) - g(n)).denominator == 1


def test_polynomial_string_coeffs_are_exact():
    assert RealPolynomial(["1/7", "0.25"]).is_exact
    assert not RealPolynomial([0.1]).is_exact


# -- mixed / plain sums --------------------------------------------------------

def test_plain_sum_examples(mod7):
    chi = mod7.character(3)
    assert abs(plain_sum(chi, 0, 3).value - 1) < 1e-12
    assert plain_sum(chi, 0, 7).magnitude < 1e-9


def test_empty_range(mod101):
    chi = mod101.character(3)
    for f in (RealPolynomial([0.3, 0.7]), RealPolynomial([Fraction(1, 3)])):
        s = mixed_sum(chi, f, 17, 0)
        assert s.value == 0 and s.terms == 0
    assert mixed_sum(chi, RealPolynomial([0]), 5, 0.9).terms == 0


def test_zero_phase_full_period_vanishes(mod7):
    for chi in mod7.characters():
        assert mixed_sum(chi, RealPolynomial([0]), 0, 7).magnitude < 1e-9


@pytest.mark.parametrize("q", [101, 499, 997])
def test_gauss_sum_magnitude(q):
    pm = prime_modulus(q)
    f = RealPolynomial([0, Fraction(1, q)])
    for j in (1, 2, (q - 1) // 2):
        s = mixed_sum(pm.character(j), f, 0, q)
        assert abs(s.magnitude / math.sqrt(q) - 1) < 1e-6


@pytest.mark.parametrize("m", [1, 2, 5])
def test_gauss_sum_multiple_periods(m):
    q = 101
    s = mixed_sum(prime_modulus(q).character(7), RealPolynomial([0, Fraction(1, q)]), 13, m * q)
    assert math.isclose(s.magnitude, m * q * q**-0.5, rel_tol=1e-9)


@pytest.mark.parametrize(
    "coeffs, N, H",
    [
        ([Fraction(1, 3), Fraction(2, 7)], 0, 50),
        ([0, Fraction(5, 101), Fraction(3, 11)], -40, 90),
        ([Fraction(1, 2), Fraction(1, 9), Fraction(4, 13), Fraction(1, 17)], 1000, 120.5),
    ],
)
def test_mixed_sum_matches_direct_loop(mod101, coeffs, N, H):
    chi = mod101.character(13)
    got = mixed_sum(chi, RealPolynomial(coeffs), N, H)
    want = direct_mixed_sum(chi, coeffs, N, H)
    assert abs(got.value - want) < 1e-10
    assert got.terms == math.floor(N + H) - N


def test_shifted_sum_matches_direct_loop(mod101):
    chi = mod101.character(4)
    coeffs = [0, Fraction(1, 4), Fraction(3, 16)]
    for shift in (0, 1, 57, 100, -3):
        got = shifted_sum(chi, RealPolynomial(coeffs), shift, 30)
        assert abs(got.value - direct_mixed_sum(chi, coeffs, 0, 30, shift=shift)) < 1e-10


def test_periodicity_in_N():
    q = 211
    chi = prime_modulus(q).character(5)
    f = RealPolynomial([Fraction(3, q), Fraction(7, q), Fraction(100, q)])
    for N in (0, 17, 150):
        a = mixed_sum(chi, f, N, 60).value
        b = mixed_sum(chi, f, N + q, 60).value
        assert abs(a - b) < 1e-9


def test_float_mode_agrees_with_exact_mode():
    q = 1009
    chi = prime_modulus(q).character(11)
    rng = random.Random(3)
    for _ in range(30):
        den = rng.randrange(2, 10**6)
        coeffs = [Fraction(rng.randrange(den), den) for _ in range(rng.randrange(1, 5))]
        N = rng.randrange(-10**6, 10**6)
        H = rng.randrange(1, 400)
        f = RealPolynomial(coeffs)
        exact = mixed_sum(chi, f, N, H, mode="exact").value
        approx = mixed_sum(chi, f, N, H, mode="float").value
        assert abs(exact - approx) <= 1e-6 * H


def test_magnitude_bounded_by_terms(mod101):
    chi = mod101.character(9)
    s = mixed_sum(chi, RealPolynomial([0.1, 0.2, 0.3]), 0, 77)
    assert s.magnitude <= s.terms
    assert math.isclose(s.magnitude, abs(s.value), rel_tol=0, abs_tol=1e-12)


def test_range_overflow_rejected(mod101):
    with pytest.raises(OverflowError):
        mixed_sum(mod101.character(1), RealPolynomial([0]), 2**60, 10)


@pytest.mark.parametrize("q", [101, 499])
def test_polya_vinogradov_scan(q):
    # every N, H <= q: |S(N,H)| <= sqrt(q) log q, via prefix sums of chi
    chi = prime_modulus(q).character(1)
    vals = np.array([char_eval(chi, n) for n in range(1, 2 * q + 1)])
    prefix = np.concatenate([[0], np.cumsum(vals)])
    worst = max(np.max(np.abs(prefix[N + 1 : N + q + 1] - prefix[N])) for N in range(q))
    assert worst <= math.sqrt(q) * math.log(q)
    # spot-check the library against the prefix sums
    for N, H in ((0, 10), (37, q), (q - 5, 50)):
        assert abs(plain_sum(chi, N, H).value - (prefix[N + H] - prefix[N])) < 1e-9


# -- F_x and complete sums -----------------------------------------------------

@pytest.mark.parametrize(
    "x, delta, roots, degree, perfect",
    [
        ((5, 5), 2, ((5, 2),), 2, True),
        ((1, 2), 2, ((1, 1), (2, 1)), 2, False),
        ((1, 2, 1, 2), 3, ((1, 4), (2, 2)), 6, False),
        ((1, 2, 2, 1), 3, ((1, 3), (2, 3)), 6, True),
    ],
)
def test_build_Fx_examples(x, delta, roots, degree, perfect):
    F = build_Fx(x, delta, 7)
    assert F.roots == roots
    assert F.degree == degree
    assert is_perfect_power(F) is perfect


def test_build_Fx_degree_is_r_delta():
    for x in itertools.product(range(1, 4), repeat=6):
        assert build_Fx(x, 5, 11).degree == 3 * 5


def test_build_Fx_rejects():
    with pytest.raises(ValueError):
        build_Fx((1, 2), 1, 7)
    with pytest.raises(ValueError):
        build_Fx((1, 8), 2, 7)
    assert build_Fx(TupleAssignment((1, 2)), 2, 7).degree == 2


def test_complete_sum_examples(mod7):
    chi = mod7.character(3)  # quadratic
    assert abs(complete_sum(chi, (1, 2)).value - (-1)) < 1e-12
    # (X+3)^2 is a square; only m = 4 hits the root, so q - 1 terms equal 1
    assert abs(complete_sum(chi, (3, 3)).value - 6) < 1e-12
    assert abs(direct_complete_sum(chi, (3, 3)) - 6) < 1e-12


@pytest.mark.parametrize("q, j", [(13, 4), (13, 6), (17, 8), (31, 10), (31, 5)])
def test_complete_sum_matches_direct_loop(q, j):
    chi = prime_modulus(q).character(j)
    rng = random.Random(q * j)
    for _ in range(40):
        x = tuple(rng.randrange(1, q + 1) for _ in range(2 * rng.randrange(1, 4)))
        assert abs(complete_sum(chi, x).value - direct_complete_sum(chi, x)) < 1e-9


def test_perfect_power_implies_bad():
    for delta, q in ((2, 13), (3, 13), (4, 17)):
        for x in itertools.product(range(1, 5), repeat=4):
            if is_perfect_power(build_Fx(x, delta, q)):
                assert is_bad(x)


def test_weil_random_good_tuples():
    q = 53
    chi = prime_modulus(q).character((q - 1) // 2)
    rng = random.Random(11)
    done = 0
    while done < 200:
        x = tuple(rng.randrange(1, 11) for _ in range(4))
        if is_bad(x):
            continue
        F = build_Fx(x, 2, q)
        assert complete_sum(chi, x).magnitude <= (F.degree - 1) * math.sqrt(q) + 1e-9
        done += 1


def test_weil_report_examples(mod7):
    chi = mod7.character(3)
    rep = weil_report(chi, (5, 5))
    assert not rep.applicable and rep.bound == 7
    rep = weil_report(chi, (1, 2))
    assert rep.applicable
    assert math.isclose(rep.bound, math.sqrt(7))
    assert math.isclose(rep.magnitude, 1, abs_tol=1e-12)
    chi101 = prime_modulus(101).character(50)
    rep = weil_report(chi101, (1, 2, 3, 4, 5, 6))
    assert rep.applicable and math.isclose(rep.bound, 5 * math.sqrt(101))


@pytest.mark.parametrize("q", [13, 17])
def test_weil_exhaustive(q):
    chi = prime_modulus(q).character((q - 1) // 2)
    for x in itertools.product(range(1, 7), repeat=4):
        rep = weil_report(chi, x)
        assert rep.magnitude <= rep.bound + 1e-9
        if not rep.applicable:
            assert rep.magnitude <= q


def test_complete_sum_requires_nonprincipal(mod7):
    with pytest.raises(ValueError):
        complete_sum(mod7.character(0), (1, 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(-10**5, 10**5), st.integers(0, 200), st.integers(1, 10**4), st.integers(1, 10**4))
def test_mixed_sum_additive_in_range(N, H, a, b):
    chi = prime_modulus(101).character(3)
    f = RealPolynomial([0, Fraction(a, 10007), Fraction(b, 997)])
    whole = mixed_sum(chi, f, N, 2 * H).value
    split = mixed_sum(chi, f, N, H).value + mixed_sum(chi, f, N + H, H).value
    assert abs(whole - split) < 1e-9
