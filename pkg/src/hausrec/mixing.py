"""Empirical decay of correlations and the ``(n ln ln n)`` recurrence diagnostic.

These are diagnostics separating slowly mixing maps (the adding machine,
rotations) from exponentially mixing ones (doubling).  Nothing here proves a
decay rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import InsufficientData, InvalidArgument
from .recurrence import RecurrenceProfile, as_alpha
from .systems import CantorOdometer, CircleRotation, DoublingMap, System

ODOMETER_SAMPLE_DIGITS = 40
MAX_DOUBLING_LAG = 40

_POW3 = 2.0 / 3.0 ** np.arange(1, ODOMETER_SAMPLE_DIGITS + 1)


@dataclass(frozen=True)
class TestFunction:
    name: str
    on_coordinate: Callable[[np.ndarray], np.ndarray]
    on_first_digit: Optional[Callable[[int], Fraction]] = None


def _first_digit_circle(x):
    return np.where(x >= 0.5, 0.5, -0.5)


CATALOG = {
    "xc": TestFunction("xc", lambda x: x - 0.5),
    "digit": TestFunction("digit", _first_digit_circle, lambda d: Fraction(2 * d - 1, 2)),
    "cos": TestFunction("cos", lambda x: np.cos(2 * np.pi * x)),
}


def test_function(name: str) -> TestFunction:
    try:
        return CATALOG[name]
    except KeyError:
        raise InvalidArgument(f"unknown test function {name!r}; choose from {sorted(CATALOG)}") from None


@dataclass(frozen=True)
class CorrelationSeries:
    lags: Tuple[int, ...]
    values: Tuple[float, ...]
    stderr: Tuple[float, ...]
    M: int
    f: str
    g: str
    signed: Tuple[float, ...] = ()


@dataclass(frozen=True)
class DecayFit:
    gamma: float
    C: float
    window: Tuple[int, int]
    residual: float

    def as_dict(self) -> dict:
        return {"gamma": self.gamma, "C": self.C, "window": list(self.window),
                "residual": self.residual}


def _odometer_coordinate(X: np.ndarray) -> np.ndarray:
    bits = (X[:, None] >> np.arange(ODOMETER_SAMPLE_DIGITS, dtype=np.uint64)) & np.uint64(1)
    return bits.astype(float) @ _POW3


def _sampler(system: System, M: int, rng: np.random.Generator, stratified: bool):
    """Return ``state`` and ``coord(state, n)`` giving coordinates of ``T^n``."""
    u = rng.random(M)
    if stratified:
        u = (np.arange(M) + u) / M
        rng.shuffle(u)
    if isinstance(system, CantorOdometer):
        D = ODOMETER_SAMPLE_DIGITS
        # stratify on the leading digits: reversed-binary integer of the cylinder index
        X = np.floor(u * 2.0**D).astype(np.uint64)
        X = _reverse_bits(X, D)
        mask = np.uint64((1 << D) - 1)
        return lambda n: _odometer_coordinate((X + np.uint64(n)) & mask)
    if isinstance(system, DoublingMap):
        hi = np.floor(u * 2.0**32).astype(np.uint64) << np.uint64(32)
        X = hi | rng.integers(0, 1 << 32, size=M, dtype=np.uint64)

        def coord(n):
            if n > MAX_DOUBLING_LAG:
                raise InvalidArgument(f"doubling lags are limited to {MAX_DOUBLING_LAG}")
            return (X << np.uint64(n)).astype(float) / 2.0**64

        return coord
    if isinstance(system, CircleRotation):
        theta = float(system.angle) if system.is_rational else _float_angle(system.angle)
        return lambda n: (u + n * theta) % 1.0
    raise InvalidArgument(f"unsupported system {system!r}")


def _reverse_bits(X: np.ndarray, D: int) -> np.ndarray:
    out = np.zeros_like(X)
    for i in range(D):
        out |= ((X >> np.uint64(D - 1 - i)) & np.uint64(1)) << np.uint64(i)
    return out


def _float_angle(cf) -> float:
    p, q = 0, 1
    for k, (p, q) in enumerate(cf.convergents()):
        if q > 1 << 40 or k > 200:
            break
    return p / q % 1.0


def correlation_estimate(system: System, f: str, g: str, lags: Sequence[int], M: int,
                         seed: int, stratified: bool = True) -> CorrelationSeries:
    """Monte Carlo ``|mean(f(T^n x) g(x)) - mean(f) mean(g)|`` over ``M`` samples.

    One sample set is drawn (PCG64 seeded by ``seed``) and reused at every
    lag.  With ``stratified`` the uniform variates are one per cell of an
    ``M``-cell grid, which keeps each marginal exactly ``mu`` while cutting the
    variance.
    """
    if M < 100:
        raise InvalidArgument("need at least 100 samples")
    lags = tuple(int(n) for n in lags)
    if any(n < 0 for n in lags) or any(a >= b for a, b in zip(lags, lags[1:])):
        raise InvalidArgument("lags must be nonnegative and strictly increasing")
    F, G = test_function(f), test_function(g)
    coord = _sampler(system, M, np.random.Generator(np.random.PCG64(seed)), stratified)
    x0 = coord(0)
    gx = G.on_coordinate(x0)
    mean_f, mean_g = F.on_coordinate(x0).mean(), gx.mean()
    values, errs, signed = [], [], []
    for n in lags:
        prod = F.on_coordinate(coord(n)) * gx
        c = prod.mean() - mean_f * mean_g
        signed.append(float(c))
        values.append(abs(float(c)))
        errs.append(float(prod.std(ddof=1) / math.sqrt(M)))
    return CorrelationSeries(lags, tuple(values), tuple(errs), M, f, g, tuple(signed))


def odometer_digit_correlation(f: str, g: str, lags: Sequence[int], depth: int = 12) -> Tuple[Fraction, ...]:
    """Exact signed correlations of first-digit functions, by enumerating depth-``depth`` cylinders."""
    F, G = test_function(f), test_function(g)
    if F.on_first_digit is None or G.on_first_digit is None:
        raise InvalidArgument("exact enumeration needs functions of finitely many digits")
    size = 1 << depth
    out = []
    for n in lags:
        # the first digit of T^n(x) is bit 0 of (W + n) for the cylinder index W
        total = sum(F.on_first_digit((w + n) & 1) * G.on_first_digit(w & 1) for w in range(size))
        mf = sum(F.on_first_digit(w & 1) for w in range(size))
        mg = sum(G.on_first_digit(w & 1) for w in range(size))
        out.append(Fraction(total, size) - Fraction(mf, size) * Fraction(mg, size))
    return tuple(out)


def significant_window(series: CorrelationSeries, z: float = 3.0) -> Tuple[int, int]:
    """Leading run of lags whose value exceeds ``z`` standard errors (``lag >= 1``)."""
    picked = []
    for lag, v, e in zip(series.lags, series.values, series.stderr):
        if lag < 1:
            continue
        if v > 0 and v > z * e:
            picked.append(lag)
        else:
            break
    if len(picked) < 3:
        raise InsufficientData("fewer than 3 significant lags")
    return picked[0], picked[-1]


def fit_decay(series: CorrelationSeries, window: Optional[Tuple[int, int]] = None) -> DecayFit:
    """Least-squares fit of ``log |C_n| = log C + n log gamma`` over ``window`` (inclusive)."""
    if window is None:
        window = significant_window(series)
    lo, hi = window
    pts = [(n, v) for n, v in zip(series.lags, series.values) if lo <= n <= hi and v > 0]
    if len(pts) < 3:
        raise InsufficientData("fewer than 3 positive values in the fit window")
    n = np.array([p[0] for p in pts], float)
    y = np.log([p[1] for p in pts])
    slope, icpt = np.polyfit(n, y, 1)
    resid = y - (icpt + slope * n)
    return DecayFit(float(math.exp(slope)), float(math.exp(icpt)), (lo, hi),
                    float(math.sqrt(np.mean(resid**2))))


@dataclass(frozen=True)
class LogLogDiagnostic:
    ns: Tuple[int, ...]
    terms: Tuple[float, ...]
    tail_min: float
    excluded: int

    def running_min(self, horizons: Sequence[int]) -> Tuple[float, ...]:
        """Tail minimum restricted to records ``n <= h`` for each ``h``."""
        return tuple(min((t for n, t in zip(self.ns, self.terms) if n <= h), default=math.inf)
                     for h in horizons)


def loglog_diagnostic(profile: RecurrenceProfile, alpha, tail_start: int = 0) -> LogLogDiagnostic:
    """Terms ``(n ln ln n)**(1/alpha) * d`` over records with ``n >= 3``."""
    alpha = as_alpha(alpha)
    kept = [r for r in profile.records if r.n >= 3][tail_start:]
    if not kept:
        raise InsufficientData("no records with n >= 3")
    ns = tuple(r.n for r in kept)
    terms = tuple((r.n * math.log(math.log(r.n))) ** (1.0 / alpha.value) * float(r.d) for r in kept)
    return LogLogDiagnostic(ns, terms, min(terms), len(profile.records) - len(kept))
