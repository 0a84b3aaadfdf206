import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valsem.errors import ParseError, UsageError
from valsem.exact import (
    DYADIC2,
    QUAD2,
    SQRT2,
    Dyadic,
    GroupSpec,
    LexVec,
    QuadReal,
    format_lexvec,
    format_scalar,
    in_interval,
    lex_cmp,
    parse_lexvec,
    parse_scalar,
    project,
    quad_cmp,
)

dyadics = st.builds(Dyadic, st.integers(-10**6, 10**6), st.integers(0, 40))
quads = st.builds(QuadReal, dyadics, dyadics)


# --- oracles ---------------------------------------------------------------


def sqrt2_interval(bits: int):
    """Rational lo < sqrt(2) < hi with hi - lo = 2^-bits."""
    root = math.isqrt(2 << (2 * bits))
    return Fraction(root, 1 << bits), Fraction(root + 1, 1 << bits)


def sign_oracle(p: Fraction, q: Fraction) -> int:
    """Sign of p + q*sqrt(2) by adaptive interval arithmetic."""
    if p == 0 and q == 0:
        return 0
    bits = 64
    while True:
        lo, hi = sqrt2_interval(bits)
        vals = (p + q * lo, p + q * hi)
        if min(vals) > 0:
            return 1
        if max(vals) < 0:
            return -1
        bits *= 2
        assert bits <= 1 << 16, "oracle failed to converge"


class TestDyadic:
    def test_canonical_form(self):
        d = Dyadic(4, 3)
        assert (d.num, d.k) == (1, 1)
        assert (Dyadic(0, 7).num, Dyadic(0, 7).k) == (0, 0)
        assert Dyadic(3, -2) == Dyadic(12)

    def test_fraction_round_trip(self):
        d = Dyadic(21, 2)
        assert Dyadic.from_fraction(d.as_fraction()) == d
        with pytest.raises(UsageError):
            Dyadic.from_fraction(Fraction(1, 3))

    def test_floor_ceil(self):
        assert Dyadic(5, 1).floor() == 2
        assert Dyadic(5, 1).ceil() == 3
        assert Dyadic(-5, 1).floor() == -3
        assert Dyadic(-5, 1).ceil() == -2
        assert Dyadic(6).floor() == Dyadic(6).ceil() == 6

    @given(dyadics, dyadics)
    @settings(max_examples=80, deadline=None)
    def test_arithmetic_matches_fractions(self, a, b):
        fa, fb = a.as_fraction(), b.as_fraction()
        assert (a + b).as_fraction() == fa + fb
        assert (a - b).as_fraction() == fa - fb
        assert (a * b).as_fraction() == fa * fb
        assert (a < b) == (fa < fb)
        assert (a == b) == (fa == fb)

    @given(dyadics)
    @settings(max_examples=50, deadline=None)
    def test_floor_is_fraction_floor(self, a):
        fa = a.as_fraction()
        assert a.floor() == fa.numerator // fa.denominator

    def test_int_coercion(self):
        assert Dyadic(1, 1) + 1 == Dyadic(3, 1)
        assert 2 * Dyadic(1, 2) == Dyadic(1, 1)
        assert Dyadic(3) < 4 and Dyadic(3) > 2


class TestQuadReal:
    def test_sign_oracle_bulk(self):
        rng = random.Random(20240817)
        for _ in range(10_000):
            p = Dyadic(rng.randint(-999, 999), rng.randint(0, 10))
            q = Dyadic(rng.randint(-999, 999), rng.randint(0, 10))
            x = QuadReal(p, q)
            assert x.sign() == sign_oracle(p.as_fraction(), q.as_fraction())

    def test_near_cancellation(self):
        # 1393/985 is a continued-fraction convergent just below sqrt(2)
        x = QuadReal(Fraction(-1393, 1), 985)
        assert x.sign() == 1
        # 577/408 sits just above
        y = QuadReal(Fraction(-577, 1), 408)
        assert y.sign() == -1

    def test_sqrt2_constant(self):
        assert SQRT2 * SQRT2 == QuadReal(2)
        assert quad_cmp(SQRT2, 1) > 0
        assert quad_cmp(SQRT2, 2) < 0

    @given(quads, quads)
    @settings(max_examples=60, deadline=None)
    def test_ring_laws(self, a, b):
        assert a + b == b + a
        assert a * b == b * a
        assert a + (-a) == QuadReal(0)
        assert (a - b) + b == a

    @given(quads, quads, quads)
    @settings(max_examples=40, deadline=None)
    def test_distributivity_and_order(self, a, b, c):
        assert a * (b + c) == a * b + a * c
        # total order transitivity on a concrete triple
        lo, mid, hi = sorted([a, b, c])
        assert lo <= mid <= hi and lo <= hi

    def test_floor_ceil(self):
        assert SQRT2.floor() == 1 and SQRT2.ceil() == 2
        assert (5 * SQRT2).floor() == 7  # 7.07...
        x = QuadReal(Fraction(5, 4))
        assert x.floor() == 1 and x.ceil() == 2
        assert QuadReal(3).ceil() == 3
        assert (-SQRT2).floor() == -2 and (-SQRT2).ceil() == -1

    @given(quads)
    @settings(max_examples=60, deadline=None)
    def test_floor_bracket(self, x):
        n = x.floor()
        assert quad_cmp(x, n) >= 0 and quad_cmp(x, n + 1) < 0


class TestLexVec:
    def test_lex_order_first_coordinate_dominates(self):
        a = DYADIC2.vec(1, 1000)
        b = DYADIC2.vec(Dyadic(3, 1), -1000)
        assert lex_cmp(a, b) < 0
        assert a < b and not b < a

    def test_group_operations(self):
        a = DYADIC2.vec(Dyadic(1, 1), 2)
        b = DYADIC2.vec(1, -1)
        assert a + b == DYADIC2.vec(Dyadic(3, 1), 1)
        assert a - a == DYADIC2.zero()
        assert 3 * a == DYADIC2.vec(Dyadic(3, 1), 6)

    def test_quotient_projection(self):
        v = QUAD2.vec(QuadReal(1, 2), Dyadic(5, 1))
        p = project(v, 1)
        assert p.spec.rank == 1 and p.coords == (QuadReal(1, 2),)
        with pytest.raises(UsageError):
            project(v, 2)

    def test_in_interval(self):
        lo, hi = DYADIC2.vec(0, 0), DYADIC2.vec(2, 0)
        assert in_interval(DYADIC2.vec(1, -50), lo, hi)
        assert in_interval(DYADIC2.vec(2, -1), lo, hi)  # (2,-1) <lex (2,0)
        assert not in_interval(DYADIC2.vec(2, 1), lo, hi)
        assert in_interval(lo, lo, hi)

    def test_spec_mismatch_rejected(self):
        with pytest.raises(UsageError):
            DYADIC2.vec(1, 1) + QUAD2.vec(1, 1)

    def test_int_kind_checked(self):
        spec = GroupSpec(("int", "dyadic"))
        assert spec.vec(Dyadic(4, 1), 0).coords[0] == 2
        with pytest.raises(UsageError):
            spec.vec(Dyadic(1, 1), 0)


class TestSerialization:
    def test_scalar_round_trip(self):
        cases = [
            (Dyadic(21, 2), "dyadic", "21/2^2"),
            (Dyadic(-3), "dyadic", "-3"),
            (QuadReal(Dyadic(1, 1), Dyadic(-3, 2)), "quad", "1/2^1 + -3/2^2*sqrt2"),
            (QuadReal(0, 1), "quad", "1*sqrt2"),
        ]
        for value, kind, _ in cases:
            assert parse_scalar(format_scalar(value), kind) == value

    def test_quad_text_variants(self):
        assert parse_scalar("sqrt2", "quad") == SQRT2
        assert parse_scalar("-sqrt2", "quad") == -SQRT2
        assert parse_scalar("3 - 2*sqrt2", "quad") == QuadReal(3, -2)
        assert parse_scalar("1/2^1 + sqrt2", "quad") == QuadReal(Dyadic(1, 1), 1)

    def test_plain_fraction_denominator(self):
        assert parse_scalar("21/4", "dyadic") == Dyadic(21, 2)
        with pytest.raises(ParseError):
            parse_scalar("1/3", "dyadic")

    def test_lexvec_round_trip(self):
        v = QUAD2.vec(QuadReal(Dyadic(5, 1), 2), Dyadic(-7, 3))
        assert parse_lexvec(format_lexvec(v), QUAD2) == v
        w = DYADIC2.vec(5, -2)
        assert format_lexvec(w) == "(5, -2)"
        assert parse_lexvec("(5, -2)", DYADIC2) == w

    @given(quads, dyadics)
    @settings(max_examples=60, deadline=None)
    def test_quad_vec_round_trip(self, a, b):
        v = QUAD2.vec(a, b)
        assert parse_lexvec(format_lexvec(v), QUAD2) == v
