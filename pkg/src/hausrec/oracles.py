"""Independent reference computations for validating the scanners.

Nothing here reuses the stepping or distance code of ``systems`` or
``recurrence``: the adding machine is modelled as ``x -> x + 1`` on 2-adic
rationals, rotations are evaluated with mpmath from the exact quadratic
surd, and record scans are plain running minima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List

import mpmath

from .recurrence import ReturnRecord
from .symbolic import SymbolCode
from .systems import CantorOdometer, CircleRotation, ContinuedFraction, DoublingMap

NAIVE_MAX_N = 10**6
_DPS = 60


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    dist: object  # Fraction for rational angles, float otherwise


# ---------------------------------------------------------------------------
# adding machine


def _digit(code: SymbolCode, i: int) -> int:
    pre, per = code.preperiod, code.period
    return pre[i - 1] if i <= len(pre) else per[(i - len(pre) - 1) % len(per)]


def odometer_jump_distance(code: SymbolCode, k: int) -> Fraction:
    """``|T^(2^k)(x) - x|`` from the digits at positions ``k+1`` and ``k+2``.

    Adding ``2^k`` leaves the first ``k`` digits alone and carries from
    position ``k+1`` through the run of ones up to the first zero at ``j``,
    which gives ``3**-k - 5 * 3**-j``; the distance is ``3**-k`` when the run
    never ends.
    """
    if _digit(code, k + 1) == 0:
        return Fraction(2, 3 ** (k + 1))
    if _digit(code, k + 2) == 0:
        return Fraction(4, 3 ** (k + 2))
    horizon = k + len(code.preperiod) + len(code.period) + 2
    for j in range(k + 3, horizon + 1):
        if _digit(code, j) == 0:
            return Fraction(1, 3**k) - Fraction(5, 3**j)
    return Fraction(1, 3**k)


def _two_adic(code: SymbolCode):
    """The code read as a 2-adic integer ``a/b`` with ``b`` odd and positive."""
    P, p = len(code.preperiod), len(code.period)
    pre = sum(d << i for i, d in enumerate(code.preperiod))
    per = sum(d << i for i, d in enumerate(code.period))
    # pre + 2^P * per / (1 - 2^p)
    b = (1 << p) - 1
    a = pre * b - (per << P)
    return a, b


def _cantor_value(a: int, b: int) -> Fraction:
    """``sum 2 d_k / 3^k`` over the 2-adic digits of ``a/b``."""
    seen = {}
    digits = []
    while (a, b) not in seen:
        seen[(a, b)] = len(digits)
        d = a & 1
        digits.append(d)
        a = (a - d * b) // 2
    start = seen[(a, b)]
    head, cycle = digits[:start], digits[start:]
    h = 0
    for d in head:
        h = 3 * h + 2 * d
    c = 0
    for d in cycle:
        c = 3 * c + 2 * d
    # h / 3^H + c / (3^L - 1) / 3^H
    H, L = len(head), len(cycle)
    return Fraction(h * (3**L - 1) + c, (3**L - 1) * 3**H)


# ---------------------------------------------------------------------------
# rotations


def surd_value(theta: ContinuedFraction, dps: int = _DPS):
    """High-precision value of a periodic continued fraction from its quadratic equation."""
    with mpmath.workdps(dps):
        if not theta.period:
            terms = list(theta.head)
            val = mpmath.mpf(terms[-1])
            for a in reversed(terms[:-1]):
                val = a + 1 / val
            return +val
        # purely periodic part y = [a1; ..., ak, y] solves q y^2 + (q' - p) y - p' = 0
        p0, q0, p1, q1 = 1, 0, 0, 1
        for a in theta.period:
            p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        A, B, C = q0, q1 - p0, -p1
        y = (-B + mpmath.sqrt(B * B - 4 * A * C)) / (2 * A)
        val = y
        for a in reversed(theta.head):
            val = a + 1 / val
        return +val


def cf_best_approximations(theta, count: int, max_q: int = 10**20) -> List[Convergent]:
    """Convergents ``p/q`` from ``a1`` on, ``q <= max_q``, with strictly decreasing ``||q theta||``.

    The trivial ``0/1`` from the integer part is left out.
    """
    if max_q > 10 ** (_DPS // 3):
        raise ValueError("max_q too large for the working precision")
    out: List[Convergent] = []
    if isinstance(theta, Fraction):
        p, q = theta.numerator, theta.denominator
        terms = []
        while q:
            terms.append(p // q)
            p, q = q, p % q
        pp, qq, p1, q1 = 1, 0, 0, 1
        for i, a in enumerate(terms):
            pp, qq, p1, q1 = a * pp + p1, a * qq + q1, pp, qq
            if i == 0:
                continue
            if qq > max_q:
                break
            r = qq * theta
            near = math.floor(r + Fraction(1, 2))
            d = abs(r - near)
            if (not out or (qq > out[-1].q and d < out[-1].dist)) and len(out) < count:
                out.append(Convergent(near, qq, d))
            if d == 0:
                break
        return out
    with mpmath.workdps(_DPS):
        x = surd_value(theta)
        best = None
        pp, qq, p1, q1 = 1, 0, 0, 1
        for i, a in enumerate(theta.quotients()):
            pp, qq, p1, q1 = a * pp + p1, a * qq + q1, pp, qq
            if i == 0:
                continue
            if qq > max_q:
                break
            r = qq * x
            near = int(mpmath.nint(r))
            d = abs(r - near)
            if best is None or (qq > out[-1].q and d < best):
                best = d
                out.append(Convergent(near, qq, float(d)))
            if len(out) >= count:
                break
    return out


# ---------------------------------------------------------------------------
# naive record scan


def _float_record(n, d) -> ReturnRecord:
    v = float(d)
    return ReturnRecord(n, v, math.ulp(v) / 2 if v else 0.0)


def naive_record_scan(system, point, N: int) -> List[ReturnRecord]:
    """Direct running-minimum scan of ``d(T^n x, x)`` for ``n = 1..N``."""
    if not 1 <= N <= NAIVE_MAX_N:
        raise ValueError("naive scan is for 1 <= N <= 10**6")
    out: List[ReturnRecord] = []
    best = None
    if isinstance(system, CantorOdometer):
        a, b = _two_adic(point)
        x = _cantor_value(a, b)
        for n in range(1, N + 1):
            d = abs(_cantor_value(a + n * b, b) - x)
            if best is None or d < best:
                best = d
                out.append(ReturnRecord(n, d))
                if d == 0:
                    break
        return out
    if isinstance(system, CircleRotation):
        theta = system.angle
        if isinstance(theta, Fraction):
            for n in range(1, N + 1):
                r = (n * theta) % 1
                d = min(r, 1 - r)
                if best is None or d < best:
                    best = d
                    out.append(ReturnRecord(n, d))
                    if d == 0:
                        break
            return out
        with mpmath.workdps(_DPS):
            x = surd_value(theta)
            for n in range(1, N + 1):
                r = n * x
                d = abs(r - mpmath.nint(r))
                if best is None or d < best:
                    best = d
                    out.append(_float_record(n, d))
        return out
    if isinstance(system, DoublingMap):
        D, x = point.depth, point.num
        mod = 1 << D
        y = x
        for n in range(1, N + 1):
            y = (2 * y) % mod
            r = (y - x) % mod
            d = min(r, mod - r)
            if best is None or d < best:
                best = d
                out.append(_float_record(n, Fraction(d, mod)))
                if d == 0:
                    break
        return out
    raise ValueError(f"unsupported system {system!r}")
