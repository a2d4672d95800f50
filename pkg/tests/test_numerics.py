from fractions import Fraction as F

import pytest

from lipfree.numerics import Comparator, coerce, exact_repr, round12


def test_coerce_exact_decimal_semantics():
    assert coerce(0.1, exact=True) == F(1, 10)
    assert coerce(3, exact=True) == F(3)
    assert coerce(F(2, 7), exact=True) == F(2, 7)
    with pytest.raises(ValueError):
        coerce(float("inf"), exact=True)


def test_coerce_float_mode():
    assert coerce(F(1, 4), exact=False) == 0.25
    assert isinstance(coerce(2, exact=False), float)


def test_comparator_exact():
    cmp = Comparator(exact=True)
    assert cmp.eq(F(1, 3), F(2, 6))
    assert cmp.lt(F(1, 3), F(1, 3) + F(1, 10**12))
    assert not cmp.lt(F(1, 3), F(1, 3))


def test_comparator_float_tolerance():
    cmp = Comparator(exact=False, tol=1e-9)
    assert cmp.eq(1.0, 1.0 + 1e-10)
    assert not cmp.eq(1.0, 1.0 + 1e-8)
    assert cmp.le(1.0 + 1e-10, 1.0)
    assert cmp.gt(1.0 + 1e-8, 1.0)
    assert cmp.is_zero(-5e-10)


def test_round12_and_exact_repr():
    assert round12(F(1, 3)) == 0.333333333333
    assert round12(0.3) == 0.3
    assert exact_repr(F(3, 4)) == "3/4"
    assert exact_repr(F(8, 4)) == "2"
