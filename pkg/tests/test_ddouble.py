"""Error-free transforms and the compensated complex arithmetic built on them."""
import math
import random
from fractions import Fraction

import pytest

from parimplode import ddouble as dd


def _frac(x: float) -> Fraction:
    return Fraction(x)


def test_two_sum_is_error_free():
    rng = random.Random(101)
    for _ in range(500):
        a = rng.uniform(-1e8, 1e8)
        b = rng.uniform(-1e-8, 1e-8) * rng.choice([1.0, 1e12])
        s, e = dd.two_sum(a, b)
        assert _frac(s) + _frac(e) == _frac(a) + _frac(b)


def test_two_sum_handles_total_cancellation():
    s, e = dd.two_sum(1e16, -1e16)
    assert s == 0.0 and e == 0.0
    s, e = dd.two_sum(1.0, 2.0 ** -60)
    assert s == 1.0
    assert e == 2.0 ** -60


def test_quick_two_sum_matches_two_sum_when_ordered():
    rng = random.Random(7)
    for _ in range(200):
        a = rng.uniform(-1e6, 1e6)
        b = rng.uniform(-1.0, 1.0)
        if abs(b) > abs(a):
            a, b = b, a
        assert dd.quick_two_sum(a, b) == dd.two_sum(a, b)


def test_two_prod_is_error_free():
    rng = random.Random(33)
    for _ in range(500):
        a = rng.uniform(-1e8, 1e8)
        b = rng.uniform(-1e8, 1e8)
        p, e = dd.two_prod(a, b)
        assert _frac(p) + _frac(e) == _frac(a) * _frac(b)


def test_split_reconstructs_exactly():
    for a in (1.0, math.pi, 1e15, -3.5e-12, 1 / 3):
        hi, lo = dd.split(a)
        assert hi + lo == a
        # the halves must multiply exactly in binary64
        assert _frac(hi) + _frac(lo) == _frac(a)


def test_dd_add_beats_plain_sum():
    # accumulate N tiny numbers onto 1.0; plain float loses them entirely
    n = 10_000
    tiny = 1e-20
    hi, lo = 1.0, 0.0
    for _ in range(n):
        hi, lo = dd.dd_add(hi, lo, tiny, 0.0)
    exact = Fraction(1) + n * _frac(tiny)
    got = _frac(hi) + _frac(lo)
    assert abs(got - exact) < Fraction(1, 10**25)
    assert 1.0 + n * tiny == 1.0  # the comparison plain float would give


def test_dd_mul_error_within_dd_ulp():
    rng = random.Random(5)
    for _ in range(300):
        a = rng.uniform(-100, 100)
        b = rng.uniform(-100, 100)
        h, l = dd.dd_mul(a, 0.0, b, 0.0)
        exact = _frac(a) * _frac(b)
        err = abs((_frac(h) + _frac(l)) - exact)
        assert err <= abs(exact) * Fraction(1, 2**100)


def test_complex_ops_match_exact_rational_arithmetic():
    rng = random.Random(17)
    for _ in range(100):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        w = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        x, y = dd.cfrom(z), dd.cfrom(w)

        got = dd.cmul(x, y)  # keep the dd pairs; cval would round to binary64
        exact_re = _frac(z.real) * _frac(w.real) - _frac(z.imag) * _frac(w.imag)
        exact_im = _frac(z.real) * _frac(w.imag) + _frac(z.imag) * _frac(w.real)
        assert abs(_frac(got[0]) + _frac(got[1]) - exact_re) < Fraction(1, 2**80)
        assert abs(_frac(got[2]) + _frac(got[3]) - exact_im) < Fraction(1, 2**80)

        assert dd.cval(dd.cadd(x, y)) == pytest.approx(z + w, rel=0, abs=1e-25)
        assert dd.cval(dd.csub(x, y)) == pytest.approx(z - w, rel=0, abs=1e-25)


def test_cfrom_cval_round_trip():
    z = complex(-0.125, 3.0)
    assert dd.cval(dd.cfrom(z)) == z
