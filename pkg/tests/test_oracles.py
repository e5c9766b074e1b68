from fractions import Fraction
import itertools

import pytest

from hausrec.oracles import cf_best_approximations, naive_record_scan, odometer_jump_distance, surd_value
from hausrec.symbolic import SymbolCode, cantor_distance
from hausrec.systems import GOLDEN, SILVER, CantorOdometer, CircleRotation, RotationPoint, odometer_power
from hausrec.validation import check_power_vs_steps, cross_validate

ODO = CantorOdometer()


def test_jump_distance_examples():
    zero = SymbolCode.parse("(0)")
    for k in range(8):
        assert odometer_jump_distance(zero, k) == Fraction(2, 3 ** (k + 1))
    x = SymbolCode.parse("00010(0)")
    assert odometer_jump_distance(x, 3) == Fraction(4, 3**5)
    assert odometer_jump_distance(SymbolCode.parse("(1)"), 0) == 1


@pytest.mark.parametrize("depth", range(0, 8))
def test_jump_distance_exhaustive(depth):
    for word in itertools.product((0, 1), repeat=depth):
        for tail in ((0,), (1,), (0, 1)):
            code = SymbolCode(word, tail)
            for k in range(8):
                assert odometer_jump_distance(code, k) == cantor_distance(odometer_power(code, 2**k), code)


def test_convergent_denominators():
    assert [c.q for c in cf_best_approximations(GOLDEN, 8)] == [1, 2, 3, 5, 8, 13, 21, 34]
    assert [c.q for c in cf_best_approximations(SILVER, 4)] == [2, 5, 12, 29]
    half = cf_best_approximations(Fraction(1, 2), 5)
    assert [(c.q, c.dist) for c in half] == [(2, 0)]


def test_surd_value():
    assert abs(float(surd_value(GOLDEN)) - 0.6180339887498949) < 1e-16


def test_naive_scan_examples():
    recs = naive_record_scan(ODO, SymbolCode.parse("(0)"), 16)
    assert [(r.n, r.d) for r in recs] == [(2**k, Fraction(2, 3 ** (k + 1))) for k in range(5)]
    gold = naive_record_scan(CircleRotation(GOLDEN), RotationPoint(), 100)
    assert [r.n for r in gold] == [1, 2, 3, 5, 8, 13, 21, 34, 55, 89]
    assert len(naive_record_scan(ODO, SymbolCode.parse("(0)"), 1)) == 1
    with pytest.raises(ValueError):
        naive_record_scan(ODO, SymbolCode.parse("(0)"), 0)


def test_quick_cross_validation():
    assert all(r.ok for r in cross_validate(quick=True))


@pytest.mark.slow
def test_power_exhaustive_depth_ten():
    assert check_power_vs_steps(10, 2**10).ok
