"""Closest-return record scans, the liminf proxy and recurrence exponents."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

import numpy as np

from . import kernels
from .errors import InsufficientData, InvalidArgument, PeriodicPointError, PrecisionFailure
from .symbolic import SymbolCode, canonicalize, cantor_distance
from .systems import (
    MAX_BITS,
    CantorOdometer,
    CircleRotation,
    DoublingMap,
    DyadicPoint,
    System,
    SystemPoint,
    certified_norm,
    dyadic_circle_distance,
    floor_scaled,
    odometer_power,
)

Distance = Union[Fraction, float]

DEFAULT_TAIL_START = 5

PROXY_NOTE = (
    "finite-horizon tail minimum over records; it bounds the infimum over the "
    "scanned horizon from above and may exceed the true liminf"
)


@dataclass(frozen=True)
class Alpha:
    """Exponent ``alpha``, optionally known exactly as ``log_base(arg)``.

    With an exact form, ``n ** (1/alpha)`` is the integer ``base**j`` whenever
    ``n == arg**j``, which keeps record terms of the adding machine exact.
    """

    value: float
    base: Optional[int] = None
    arg: Optional[int] = None

    def __post_init__(self):
        if not self.value > 0:
            raise InvalidArgument("alpha must be positive")

    @classmethod
    def log(cls, arg: int, base: int) -> "Alpha":
        return cls(math.log(arg) / math.log(base), base, arg)

    @classmethod
    def parse(cls, text: str) -> "Alpha":
        m = re.fullmatch(r"\s*log_?(\d+)\((\d+)\)\s*", text)
        if m:
            return cls.log(int(m.group(2)), int(m.group(1)))
        try:
            return cls(float(text))
        except ValueError as exc:
            raise InvalidArgument(f"bad alpha {text!r}") from exc

    def root_power(self, n: int):
        """``n ** (1/alpha)``, exact when possible."""
        if self.arg and self.arg > 1:
            j, m = 0, n
            while m % self.arg == 0:
                m //= self.arg
                j += 1
            if m == 1:
                return self.base**j
        return n ** (1.0 / self.value)

    def __float__(self):
        return self.value

    def __str__(self):
        if self.arg:
            return f"log{self.base}({self.arg})"
        return repr(self.value)


LOG3_2 = Alpha.log(2, 3)


def as_alpha(alpha) -> Alpha:
    if isinstance(alpha, Alpha):
        return alpha
    if isinstance(alpha, str):
        return Alpha.parse(alpha)
    return Alpha(float(alpha))


@dataclass(frozen=True)
class ReturnRecord:
    """Closest return at iterate ``n``; ``d`` is a Fraction (exact) or float with ``|error| <= err``."""

    n: int
    d: Distance
    err: float = field(default=0.0, compare=False)

    @property
    def exact(self) -> bool:
        return isinstance(self.d, Fraction)


@dataclass(frozen=True)
class RecurrenceProfile:
    system: System
    point: SystemPoint
    horizon: int
    records: Tuple[ReturnRecord, ...]
    exponents: Tuple[float, ...] = ()
    exponent_mode: str = "pairwise"
    scan: str = "full"

    @property
    def terminated(self) -> bool:
        return bool(self.records) and self.records[-1].d == 0


# ---------------------------------------------------------------------------
# scanning


def odometer_window(code: SymbolCode, horizon: int) -> int:
    """Number of leading digits that absorb every carry for ``n <= horizon``."""
    P, p = len(code.preperiod), len(code.period)
    W = max(P, horizon.bit_length()) + 1
    if code.period not in ((0,), (1,)):
        W += p
    return W


def _scan_odometer(code: SymbolCode, horizon: int, backend):
    code = canonicalize(code)
    W = odometer_window(code, horizon)
    scale = 3**W
    raw = kernels.odometer_scan(code.digits(W), W, code.period == (1,), horizon, backend=backend)
    return [ReturnRecord(n, Fraction(a, scale)) for n, a in raw]


def _scan_rational_rotation(theta: Fraction, horizon: int):
    p, q = theta.numerator, theta.denominator
    out, best = [], None
    for n in range(1, horizon + 1):
        r = (n * p) % q
        d = Fraction(min(r, q - r), q)
        if best is None or d < best:
            best = d
            out.append(ReturnRecord(n, d))
            if d == 0:
                break
    return out


def _scan_irrational_rotation(theta, horizon: int, backend):
    bits = 64
    while True:
        raw, failed = kernels.rotation_scan(floor_scaled(theta, bits), bits, horizon, backend=backend)
        if not failed:
            break
        bits *= 2
        if bits > MAX_BITS:
            raise PrecisionFailure(failed)
    out = []
    for n, _ in raw:
        c = certified_norm(Fraction(0), n, theta)
        out.append(ReturnRecord(n, c.value, c.err))
    return out


def dyadic_bits(point: DyadicPoint) -> np.ndarray:
    """Binary digits of ``point`` as uint8, most significant first."""
    nbytes = (point.depth + 7) // 8
    raw = np.frombuffer(point.num.to_bytes(nbytes, "big"), dtype=np.uint8)
    bits = np.unpackbits(raw)
    return np.ascontiguousarray(bits[8 * nbytes - point.depth:])


def _certified_dyadic(dist: int, depth: int) -> ReturnRecord:
    v = dist / (1 << depth)
    a, b = v.as_integer_ratio()
    # v == a/b with b a power of two; the gap to dist/2**depth bounds the error
    e = abs(a * (1 << depth) - dist * b)
    err = 0.0 if e == 0 else math.ulp(v) / 2
    return v, err


def _scan_doubling(point: DyadicPoint, horizon: int, backend):
    D, X = point.depth, point.num
    mask = (1 << D) - 1
    bits = dyadic_bits(point)

    def exact(n):
        return dyadic_circle_distance((X << n) & mask, X, D)

    ns, start, best_n = [], 1, 0
    while start <= horizon:
        found, amb = kernels.doubling_scan(bits, D, start, horizon, best_n, backend=backend)
        ns.extend(found)
        if found:
            best_n = found[-1]
        if not amb:
            break
        if best_n == 0 or exact(amb) < exact(best_n):
            ns.append(amb)
            best_n = amb
        start = amb + 1
    out = []
    for n in ns:
        dist = exact(n)
        v, err = _certified_dyadic(dist, D)
        out.append(ReturnRecord(n, v, err))
        if dist == 0:
            break
    return out


def scan_records(system: System, point: SystemPoint, horizon: int, backend=None) -> RecurrenceProfile:
    """Every strict closest return of ``point`` for ``n = 1..horizon``.

    Stops early when a zero distance (periodic point) is reached.
    """
    if horizon < 1:
        raise InvalidArgument("horizon must be >= 1")
    if isinstance(system, CantorOdometer):
        if not isinstance(point, SymbolCode):
            raise InvalidArgument("odometer points are SymbolCodes")
        records = _scan_odometer(point, horizon, backend)
    elif isinstance(system, CircleRotation):
        if system.is_rational:
            records = _scan_rational_rotation(system.angle, horizon)
        else:
            records = _scan_irrational_rotation(system.angle, horizon, backend)
    elif isinstance(system, DoublingMap):
        if not isinstance(point, DyadicPoint):
            raise InvalidArgument("doubling-map points are DyadicPoints")
        records = _scan_doubling(point, horizon, backend)
    else:
        raise InvalidArgument(f"unsupported system {system!r}")
    return _profile(system, point, horizon, records, "full")


def _profile(system, point, horizon, records, scan):
    records = tuple(records)
    try:
        exps = tuple(_pairwise(records))
    except InsufficientData:
        exps = ()
    return RecurrenceProfile(system, point, horizon, records, exps, "pairwise", scan)


def scan_jumps(code: SymbolCode, max_exponent: int) -> RecurrenceProfile:
    """Records of the adding machine probed only at ``n = 2**k``, ``k <= max_exponent``.

    Non-power iterates never give a smaller ``n**(1/alpha) * d`` for the
    adding machine, so this reaches horizons like ``2**30`` cheaply.
    """
    code = canonicalize(code)
    out, best = [], None
    for k in range(max_exponent + 1):
        d = cantor_distance(odometer_power(code, 1 << k), code)
        if best is None or d < best:
            best = d
            out.append(ReturnRecord(1 << k, d))
    return _profile(CantorOdometer(), code, 1 << max_exponent, out, "jumps")


# ---------------------------------------------------------------------------
# proxies and exponents


def record_term(record: ReturnRecord, alpha: Alpha):
    """``n**(1/alpha) * d``, exact when both factors are."""
    root = alpha.root_power(record.n)
    if record.exact and isinstance(root, int):
        return root * record.d
    return float(root) * float(record.d)


def liminf_proxy(profile: RecurrenceProfile, alpha, tail_start: int = DEFAULT_TAIL_START):
    """Minimum of ``n_k**(1/alpha) * d_k`` over records ``k >= tail_start``.

    Non-record iterates are dominated by an earlier record, so the minimum
    over records equals the minimum over all scanned iterates in the tail.
    """
    alpha = as_alpha(alpha)
    tail = profile.records[tail_start:]
    if not tail:
        raise InsufficientData(
            f"{len(profile.records)} records, none at index >= {tail_start}")
    return min(record_term(r, alpha) for r in tail)


def _log(d) -> float:
    if isinstance(d, Fraction):
        return math.log(d.numerator) - math.log(d.denominator)
    return math.log(d)


def _pairwise(records):
    if len(records) < 2:
        raise InsufficientData("need at least two records")
    if any(r.d == 0 for r in records):
        raise PeriodicPointError("zero-distance record: periodic point")
    logs = [(math.log(r.n), _log(r.d)) for r in records]
    return [(d0 - d1) / (n1 - n0) for (n0, d0), (n1, d1) in zip(logs, logs[1:])]


def exponent_sequence(profile: RecurrenceProfile, mode: str = "pairwise") -> list:
    """Decay exponents ``gamma`` of ``d_k ~ n_k**-gamma``.

    ``pointwise``: ``-log d_k / log n_k`` (one per record; NaN for ``n = 1``).
    ``pairwise``: ``(log d_k - log d_{k+1}) / (log n_{k+1} - log n_k)``.
    """
    records = profile.records
    if mode == "pairwise":
        return _pairwise(records)
    if mode != "pointwise":
        raise InvalidArgument(f"unknown exponent mode {mode!r}")
    if len(records) < 2:
        raise InsufficientData("need at least two records")
    if any(r.d == 0 for r in records):
        raise PeriodicPointError("zero-distance record: periodic point")
    if all(r.n == 1 for r in records):
        raise InsufficientData("only n = 1 records")
    return [-_log(r.d) / math.log(r.n) if r.n > 1 else math.nan for r in records]


def dim_lower_bound(profile: RecurrenceProfile, tail_start: int = DEFAULT_TAIL_START,
                    mode: str = "pairwise") -> float:
    """``1 / max`` of the tail exponents.

    For any alpha below the result the record terms grow along the tail, which
    is the signature of an infinite liminf and hence of ``H_alpha = inf``.
    """
    exps = exponent_sequence(profile, mode)
    tail = [g for g in exps[tail_start:] if math.isfinite(g)]
    if not tail:
        raise InsufficientData(f"no exponents at index >= {tail_start}")
    top = max(tail)
    if top <= 0:
        raise InsufficientData("tail exponents are not positive")
    return 1.0 / top
