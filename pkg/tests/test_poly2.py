import pytest
from hypothesis import given, strategies as st

from floerbar.poly2 import ONE, T, ZERO, PolyT, poly_divmod, poly_eval, poly_mul

polys = st.integers(min_value=0, max_value=(1 << 17) - 1).map(PolyT)


def p(*coeffs):
    return PolyT.from_coeffs(coeffs)


def test_char2_squaring():
    assert poly_mul(p(1, 1), p(1, 1)) == p(1, 0, 1)


def test_mul_identity():
    q = p(1, 0, 1, 1)
    assert poly_mul(ONE, q) == q


def test_mul_example():
    # (1+T)(1+T+T^2) by hand convolution
    assert poly_mul(p(1, 1), p(1, 1, 1)) == p(1, 0, 0, 1)


def test_eval_at_one_cancels():
    assert poly_eval(p(1, 1), 1) == 0


def test_eval_at_zero_is_constant_term():
    assert poly_eval(p(1, 1), 0) == 1


def test_eval_parity():
    assert poly_eval(p(0, 1, 0, 1), 1) == 0


def test_eval_rejects_other_points():
    with pytest.raises(ValueError):
        poly_eval(ONE, 2)


def test_coeffs_normalized():
    assert p(1, 1, 0, 0).coeffs == (1, 1)
    assert ZERO.coeffs == ()
    assert ZERO.degree == -1


def test_json_round_trip():
    q = p(1, 0, 1)
    assert PolyT.from_json(q.to_json()) == q
    with pytest.raises(ValueError):
        PolyT.from_json([1, 2])


def test_str():
    assert str(ZERO) == "0"
    assert str(ONE + T) == "1+T"
    assert str(p(0, 1, 0, 1)) == "T+T^3"


@given(polys)
def test_self_inverse_addition(a):
    assert a + a == ZERO


@given(polys, polys, polys)
def test_distributivity(a, b, c):
    assert (a + b) * c == a * c + b * c


@given(polys, polys, st.sampled_from([0, 1]))
def test_eval_is_ring_hom(a, b, beta):
    assert poly_eval(a * b, beta) == poly_eval(a, beta) * poly_eval(b, beta)
    assert poly_eval(a + b, beta) == (poly_eval(a, beta) + poly_eval(b, beta)) % 2


@given(polys, polys)
def test_divmod(a, b):
    if b.is_zero():
        with pytest.raises(ZeroDivisionError):
            poly_divmod(a, b)
        return
    q, r = poly_divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree
