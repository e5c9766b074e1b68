from fractions import Fraction
import json
import math

import pytest

from hausrec.bounds import (
    Classification,
    DensityBound,
    bound_document,
    boshernitzan_classify,
    density_lower_bound,
    g_lower_from_proxy,
    measure_lower_bound,
)
from hausrec.errors import InvalidArgument
from hausrec.recurrence import LOG3_2, Alpha, scan_records
from hausrec.symbolic import SymbolCode
from hausrec.systems import CantorOdometer

ODO = CantorOdometer()
ZERO = SymbolCode.parse("(0)")


def _power(p):
    return math.exp(math.log(2) / math.log(3) * math.log(p))


def test_g_lower_examples():
    g = g_lower_from_proxy(Fraction(4, 9), LOG3_2)
    assert math.isclose(g, _power(4 / 9), rel_tol=1e-14)
    assert abs(g - 0.6) < 5e-4
    assert g_lower_from_proxy(Fraction(0), LOG3_2) == 0
    g = g_lower_from_proxy(Fraction(2, 3), LOG3_2)
    assert math.isclose(g, _power(2 / 3), rel_tol=1e-14)
    assert abs(g - 0.7742) < 5e-4


def test_measure_of_constant_list():
    bounds = [DensityBound(ZERO, LOG3_2, Fraction(1), 0.6) for _ in range(5)]
    assert math.isclose(measure_lower_bound(bounds).H_lower, 0.6, rel_tol=1e-15)


def test_single_point_measure():
    db = density_lower_bound(scan_records(ODO, ZERO, 2**20), LOG3_2, 5)
    assert db.proxy == Fraction(2, 3)
    hb = measure_lower_bound([db], horizon=2**20, tail_start=5, seed=0)
    assert math.isclose(hb.H_lower, _power(2 / 3), rel_tol=1e-14)
    doc = bound_document(hb, {"run": 5, "factor": 10.0})
    json.dumps(doc)
    assert doc["per_point"][0]["proxy_exact"] == "2/3"


def test_measure_rejects_mixed_alpha():
    a = DensityBound(ZERO, LOG3_2, Fraction(1), 1.0)
    b = DensityBound(ZERO, Alpha.parse("0.5"), Fraction(1), 1.0)
    with pytest.raises(InvalidArgument):
        measure_lower_bound([a, b])
    with pytest.raises(InvalidArgument):
        measure_lower_bound([])


# terms at point 0 are (2/3) * (2**(1/beta) / 3)**k
@pytest.mark.parametrize("beta, factor, expected", [
    ("0.5", 10.0, Classification.DIVERGES),
    ("log3(2)", 10.0, Classification.FINITE),
    ("0.8", 10.0, Classification.VANISHES),
    ("0.7", 5.0, Classification.VANISHES),
    ("0.7", 10.0, Classification.FINITE),
])
def test_classify_zero(beta, factor, expected):
    prof = scan_records(ODO, ZERO, 2**20)
    assert boshernitzan_classify(prof, Alpha.parse(beta), factor=factor) is expected
