from fractions import Fraction
import math

import numpy as np
import pytest

from hausrec.errors import InsufficientData, InvalidArgument
from hausrec.mixing import (
    CorrelationSeries,
    correlation_estimate,
    fit_decay,
    loglog_diagnostic,
    odometer_digit_correlation,
)
from hausrec.recurrence import LOG3_2, RecurrenceProfile, ReturnRecord, scan_records
from hausrec.symbolic import SymbolCode
from hausrec.systems import CantorOdometer, CircleRotation, DoublingMap, random_dyadic


def _series(values):
    lags = tuple(range(1, len(values) + 1))
    return CorrelationSeries(lags, tuple(values), (0.0,) * len(values), 10**4, "xc", "xc")


def test_fit_synthetic_geometric():
    fit = fit_decay(_series([2.0**-n / 12 for n in range(1, 11)]), (1, 10))
    assert abs(fit.gamma - 0.5) < 1e-6 and fit.residual < 1e-12


def test_fit_constant():
    assert abs(fit_decay(_series([0.25] * 8), (1, 8)).gamma - 1.0) < 1e-12


def test_identity_rotation_variance():
    s = correlation_estimate(CircleRotation(Fraction(0)), "xc", "xc", range(0, 5), 10**4, seed=1)
    for v in s.values:
        assert abs(v - 1 / 12) < 1e-3


def test_doubling_covariance_matches_exact():
    # exact covariance of x - 1/2 under doubling is 2**-n / 12
    s = correlation_estimate(DoublingMap(), "xc", "xc", range(1, 11), 10**5, seed=3)
    for n, v, e in zip(s.lags, s.values, s.stderr):
        assert abs(v - 2.0**-n / 12) < 5 * e + 1e-4


def test_doubling_gamma():
    s = correlation_estimate(DoublingMap(), "xc", "xc", range(1, 11), 10**4, seed=0)
    assert 0.4 <= fit_decay(s).gamma <= 0.6


def test_odometer_digit_correlation_exact():
    vals = odometer_digit_correlation("digit", "digit", range(1, 12))
    for n, v in zip(range(1, 12), vals):
        assert abs(v) == Fraction(1, 4)
        assert v == (Fraction(-1, 4) if n % 2 else Fraction(1, 4))


def test_odometer_digit_correlation_sampled():
    s = correlation_estimate(CantorOdometer(), "digit", "digit", [1, 3, 5], 1000, seed=0)
    assert all(abs(v - 0.25) < 1e-12 for v in s.values)


def test_correlation_argument_checks():
    with pytest.raises(InvalidArgument):
        correlation_estimate(DoublingMap(), "xc", "xc", [1], 50, seed=0)
    with pytest.raises(InvalidArgument):
        correlation_estimate(DoublingMap(), "xc", "nope", [1], 100, seed=0)
    with pytest.raises(InvalidArgument):
        correlation_estimate(DoublingMap(), "xc", "xc", [2, 1], 100, seed=0)


def test_stratification_reduces_spread():
    def spread(strat):
        vals = [correlation_estimate(DoublingMap(), "xc", "xc", [1], 400, seed=s, stratified=strat).values[0]
                for s in range(40)]
        return np.std(vals)
    assert spread(True) < spread(False)


def test_loglog_zero_closed_form():
    prof = scan_records(CantorOdometer(), SymbolCode.parse("(0)"), 2**20)
    diag = loglog_diagnostic(prof, LOG3_2)
    for n, t in zip(diag.ns, diag.terms):
        k = round(math.log2(n))
        assert math.isclose(t, (2 / 3) * math.log(k * math.log(2)) ** (1 / LOG3_2.value), rel_tol=1e-9)
    assert all(a < b for a, b in zip(diag.terms, diag.terms[1:]))
    assert diag.terms[-1] > 1


def test_loglog_needs_n_at_least_three():
    recs = (ReturnRecord(1, Fraction(1, 2)), ReturnRecord(2, Fraction(1, 4)))
    with pytest.raises(InsufficientData):
        loglog_diagnostic(RecurrenceProfile(CantorOdometer(), SymbolCode.parse("(0)"), 2, recs), 1)


def test_loglog_doubling_small():
    x = random_dyadic(10**4 + 64, 0)
    diag = loglog_diagnostic(scan_records(DoublingMap(), x, 10**4), 1)
    rm = diag.running_min([10**2, 10**3, 10**4])
    assert all(a >= b for a, b in zip(rm, rm[1:]))
