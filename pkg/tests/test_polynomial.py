from __future__ import annotations

import random
from fractions import Fraction

import pytest

from zeta3cf.polynomial import K, NotDivisible, Poly, ZeroDivisor, poly_gcd


def rand_poly(rng: random.Random, max_deg: int = 4, zero_ok: bool = True) -> Poly:
    deg = rng.randint(-1 if zero_ok else 0, max_deg)
    if deg < 0:
        return Poly.zero()
    coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(deg)]
    coeffs.append(Fraction(rng.choice([x for x in range(-9, 10) if x])))
    return Poly(tuple(coeffs))


def test_zero_encoding():
    z = Poly.zero()
    assert z.coeffs == ()
    assert z.degree == -1
    assert (K - K).coeffs == ()


def test_degree_matches_length():
    p = 34 * K**3 + 51 * K**2 + 27 * K + 5
    assert p.degree == 3
    assert len(p.coeffs) == p.degree + 1


def test_eval_shifted_constant_term():
    p = 34 * K**3 + 153 * K**2 + 231 * K + 117
    assert p(0) == 117


def test_eval_consistency_across_shift():
    # Evaluating the unshifted cubic at 1 equals the shifted one at 0.
    p = 34 * K**3 + 51 * K**2 + 27 * K + 5
    assert p(1) == 117
    assert p.shift(1)(0) == 117


def test_eval_vanishing_numerator():
    p = K * (K + 1)
    assert p(0) == 0


def test_arith_expansion():
    assert (K + 1) * (K + 2) == K**2 + 3 * K + 2


def test_arith_cubic_split():
    lhs = 5 * (K + 1) ** 3 + (29 * K**3 + 138 * K**2 + 216 * K + 112)
    assert lhs == 34 * K**3 + 153 * K**2 + 231 * K + 117


def test_arith_cancellation():
    assert ((K + 2) ** 3 - (K + 2) ** 3).is_zero


def test_divexact_power():
    assert ((K + 2) ** 6).divexact(K + 2) == (K + 2) ** 5


def test_divexact_linear_factor():
    assert (K**2 + 3 * K + 2).divexact(K + 1) == K + 2


def test_divexact_remainder():
    with pytest.raises(NotDivisible):
        (K**2 + 1).divexact(K + 1)


def test_divexact_zero_divisor():
    with pytest.raises(ZeroDivisor):
        (K + 1).divexact(Poly.zero())


def test_divexact_round_trip_randomized():
    rng = random.Random(3)
    for _ in range(200):
        p = rand_poly(rng)
        q = rand_poly(rng, zero_ok=False)
        assert (p * q).divexact(q) == p


def test_shift():
    p = 34 * K**3 + 51 * K**2 + 27 * K + 5
    assert p.shift(1) == 34 * K**3 + 153 * K**2 + 231 * K + 117
    assert p.shift(1).shift(-1) == p


def test_gcd():
    p = (K + 1) ** 2 * (K + 2)
    q = (K + 1) * (K + 3)
    assert poly_gcd(p, q) == K + 1
    assert poly_gcd(p, Poly.zero()) == p.primitive()


def test_content_primitive():
    p = Fraction(4, 6) * K + Fraction(2, 3)
    assert p.content() == Fraction(2, 3)
    assert p.primitive() == K + 1


def test_str():
    assert str(34 * K**3 + 51 * K**2 + 27 * K + 5) == "34k^3+51k^2+27k+5"
    assert str(-((K + 1) ** 2)) == "-k^2-2k-1"
    assert str(Poly.zero()) == "0"
    assert str(Fraction(5, 2) * K) == "(5/2)k"
