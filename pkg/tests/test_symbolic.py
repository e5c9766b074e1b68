from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hausrec.errors import InvalidArgument
from hausrec.symbolic import (
    SymbolCode,
    canonicalize,
    cantor_distance,
    code_to_point,
    random_code,
    random_code_in,
)

digits = st.lists(st.integers(0, 1), max_size=12)
periods = st.lists(st.integers(0, 1), min_size=1, max_size=4)


@pytest.mark.parametrize("text, value", [
    ("(0)", Fraction(0)),
    ("1(0)", Fraction(2, 3)),
    ("01(0)", Fraction(2, 9)),
    ("(1)", Fraction(1)),
    ("(01)", Fraction(1, 4)),
])
def test_code_to_point(text, value):
    assert code_to_point(SymbolCode.parse(text)) == value


def test_distance_examples():
    a, b = SymbolCode.parse("1(0)"), SymbolCode.parse("01(0)")
    assert cantor_distance(a, b) == Fraction(4, 9)
    assert cantor_distance(a, a) == 0
    assert cantor_distance(SymbolCode.parse("(0)"), SymbolCode.parse("(1)")) == 1


def test_canonicalize_examples():
    assert canonicalize(SymbolCode((1, 0), (0, 0))) == SymbolCode((1,), (0,))
    assert canonicalize(SymbolCode((), (1, 1))) == SymbolCode((), (1,))


def test_parse_round_trip_and_errors():
    code = SymbolCode.parse("01(10)")
    assert SymbolCode.parse(str(code)) == code
    assert SymbolCode.parse("011") == SymbolCode.parse("011(0)")
    for bad in ("012", "0(", "()", "0(1)2", "a"):
        with pytest.raises(InvalidArgument):
            SymbolCode.parse(bad)


@given(digits, periods)
def test_canonical_form_preserves_point(pre, per):
    code = SymbolCode(tuple(pre), tuple(per))
    canon = canonicalize(code)
    assert canon.is_canonical
    assert canonicalize(canon) == canon
    assert code_to_point(canon) == code_to_point(code)
    assert canon.digits(30) == code.digits(30)


@given(digits, periods, digits, periods)
def test_distance_is_a_metric_on_points(p1, q1, p2, q2):
    a, b = SymbolCode(tuple(p1), tuple(q1)), SymbolCode(tuple(p2), tuple(q2))
    d = cantor_distance(a, b)
    assert d == cantor_distance(b, a) >= 0
    assert (d == 0) == (canonicalize(a) == canonicalize(b))


def test_random_code_deterministic():
    assert random_code(4, 11) == random_code(4, 11)
    code = random_code(4, 11)
    assert code.period == (0,) and len(code.preperiod) <= 4


def test_random_code_digit_mean():
    total = sum(sum(random_code(1, s).digits(1)) for s in range(10_000))
    assert abs(total / 10_000 - 0.5) < 0.02


def test_random_code_in_cylinder():
    code = random_code_in((0, 1, 1), 10, 3)
    assert code.prefix_matches((0, 1, 1))
