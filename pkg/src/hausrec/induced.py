"""First-return (induced) maps on cylinders and arcs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

from .errors import BudgetExceeded, InsufficientData, InternalError, InvalidArgument, PrecisionFailure
from .recurrence import (
    DEFAULT_TAIL_START,
    Alpha,
    RecurrenceProfile,
    ReturnRecord,
    as_alpha,
    liminf_proxy,
    scan_records,
)
from .symbolic import canonicalize
from .systems import (
    MAX_BITS,
    Arc,
    CantorOdometer,
    CircleRotation,
    Cylinder,
    System,
    _norm_interval,
    certified_norm,
    compare_norms,
)

BallSpec = Union[Cylinder, Arc]

DEFAULT_BUDGET = 10**7


def ball_arc(center, radius) -> Arc:
    """The metric ball ``B(center, radius)`` on the circle as an arc (boundary is null)."""
    center, radius = Fraction(center), Fraction(radius)
    if radius <= 0:
        raise InvalidArgument("radius must be positive")
    if radius >= Fraction(1, 2):
        return Arc.full()
    return Arc(center - radius, center + radius)


def ball_measure(ball: BallSpec) -> Fraction:
    if isinstance(ball, Cylinder):
        return Fraction(1, 1 << len(ball.word))
    return ball.length


@dataclass(frozen=True)
class InducedProfile:
    y: object
    return_times: Tuple[int, ...]

    @property
    def ratios(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(k, n) for k, n in enumerate(self.return_times, start=1))


def _check_ball(system: System, ball: BallSpec):
    if isinstance(system, CantorOdometer) != isinstance(ball, Cylinder):
        raise InvalidArgument("cylinders go with the odometer, arcs with circle maps")


def _word_int(word: Sequence[int]) -> int:
    return sum(d << i for i, d in enumerate(word))


def first_return_times(system: System, ball: BallSpec, y, count: int,
                       budget: int = DEFAULT_BUDGET) -> InducedProfile:
    """The first ``count`` times ``n_k`` with ``T^{n_k}(y)`` in ``ball``."""
    _check_ball(system, ball)
    if count < 0:
        raise InvalidArgument("count must be nonnegative")
    if not system.contains(ball, y):
        raise InvalidArgument("base point is not in the ball")
    times = []
    if isinstance(system, CantorOdometer):
        # the first m digits of T^n(y) are (Y + n) mod 2**m
        m = len(ball.word)
        mod = 1 << m
        Y = _word_int(canonicalize(y).digits(m))
        target = _word_int(ball.word)
        n = 0
        while len(times) < count:
            n += 1
            if n > budget:
                raise BudgetExceeded(f"{len(times)} of {count} returns within {budget} steps",
                                     progress=tuple(times))
            if (Y + n) % mod == target:
                times.append(n)
        return InducedProfile(y, tuple(times))
    z, n = y, 0
    while len(times) < count:
        n += 1
        if n > budget:
            raise BudgetExceeded(f"{len(times)} of {count} returns within {budget} steps",
                                 progress=tuple(times))
        z = system.step(z)
        if system.contains(ball, z):
            times.append(n)
    return InducedProfile(y, tuple(times))


@dataclass(frozen=True)
class ErgodicReport:
    returns: int
    ratio: Fraction
    measure: Fraction
    gap: float
    tolerance: float
    flagged: bool


def ergodic_ratio_check(profile: InducedProfile, ball: BallSpec,
                        tolerance: float = 0.05) -> ErgodicReport:
    """Compare the last ``k / n_k`` with the ball's measure (relative gap)."""
    K = len(profile.return_times)
    if K < 10:
        raise InsufficientData("need at least 10 returns")
    ratio = Fraction(K, profile.return_times[-1])
    mu = ball_measure(ball)
    gap = float(abs(ratio - mu) / mu)
    return ErgodicReport(K, ratio, mu, gap, tolerance, gap > tolerance)


def _norm_below(n: int, theta, u: Fraction) -> bool:
    """Certified ``||n*theta|| < u``."""
    if isinstance(theta, Fraction):
        return certified_norm(Fraction(0), n, theta) < u
    bits = 64
    while bits <= MAX_BITS:
        lo, hi = _norm_interval(Fraction(0), n, theta, bits)
        scaled = u * (1 << bits)
        if hi < scaled:
            return True
        if lo > scaled:
            return False
        bits *= 2
    raise PrecisionFailure(n)


def _arcs_meet(s1, l1, s2, l2) -> bool:
    return (s2 - s1) % 1 < l1 or (s1 - s2) % 1 < l2


def pigeonhole_return(system: System, U: BallSpec) -> int:
    """Least ``n >= 1`` with ``U`` meeting ``T^{-n} U``.

    Measure preservation forces such an ``n <= 1 + 1/mu(U)``; exceeding that
    cap means a bug, not bad input.
    """
    _check_ball(system, U)
    u = ball_measure(U)
    cap = math.ceil(1 + 1 / u)
    for n in range(1, cap + 1):
        if isinstance(system, CantorOdometer):
            m = len(U.word)
            hit = (n % (1 << m)) == 0
        elif isinstance(system, CircleRotation):
            # an arc of length u meets its translate by s iff ||s|| < u
            hit = u == 1 or _norm_below(n, system.angle, u)
        else:
            length = U.length * (1 << n)
            hit = length >= 1 or _arcs_meet(U.start, U.length, (U.start * (1 << n)) % 1, length)
        if hit:
            return n
    raise InternalError(f"no return within the pigeonhole cap {cap}")


@dataclass(frozen=True)
class TransferReport:
    mu_B: Fraction
    alpha: Alpha
    base_proxy: object
    induced_proxy: object
    lhs: object
    rhs: object
    slack: float
    holds: bool
    induced_records: Tuple[ReturnRecord, ...] = ()

    def as_dict(self) -> dict:
        return {
            "mu_B": str(self.mu_B),
            "alpha": self.alpha.value,
            "base_proxy": float(self.base_proxy),
            "induced_proxy": float(self.induced_proxy),
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "slack": float(self.slack),
            "holds": self.holds,
        }


def _root(alpha: Alpha, mu: Fraction):
    """``mu ** (1/alpha)``, exact when the alpha form allows it."""
    num, den = alpha.root_power(mu.numerator), alpha.root_power(mu.denominator)
    if isinstance(num, int) and isinstance(den, int):
        return Fraction(num, den)
    return float(mu) ** (1.0 / alpha.value)


def induced_records(system: System, y, returns: InducedProfile) -> Tuple[ReturnRecord, ...]:
    """Records of the induced map ``S^k(y) = T^{n_k}(y)`` in the base metric."""
    out = []
    if isinstance(system, CircleRotation):
        best = None
        for k, n in enumerate(returns.return_times, start=1):
            if best is None or compare_norms((0, n), (0, best), system.angle) < 0:
                best = n
                c = certified_norm(Fraction(0), n, system.angle)
                if isinstance(c, Fraction):
                    out.append(ReturnRecord(k, c))
                    if c == 0:
                        break
                else:
                    out.append(ReturnRecord(k, c.value, c.err))
        return tuple(out)
    best = None
    for k, n in enumerate(returns.return_times, start=1):
        d = system.distance(system.power(y, n), y)
        if best is None or d < best:
            best = d
            out.append(ReturnRecord(k, d))
            if d == 0:
                break
    return tuple(out)


def induced_record_transfer(system: System, ball: BallSpec, y, alpha, base_horizon: int,
                            induced_returns: int, tail_start: int = DEFAULT_TAIL_START,
                            budget: int = DEFAULT_BUDGET) -> TransferReport:
    """Check ``mu(B)**(1/alpha) * base_proxy <= induced_proxy``.

    Both sides are finite-horizon proxies, so the signed ``slack`` (rhs - lhs)
    is reported rather than asserted.
    """
    alpha = as_alpha(alpha)
    base = scan_records(system, y, base_horizon)
    base_proxy = liminf_proxy(base, alpha, tail_start)
    rt = first_return_times(system, ball, y, induced_returns, budget)
    recs = induced_records(system, y, rt)
    ind = RecurrenceProfile(system, y, induced_returns, recs)
    induced_proxy = liminf_proxy(ind, alpha, tail_start)
    mu = ball_measure(ball)
    root = _root(alpha, mu)
    if isinstance(root, Fraction) and isinstance(base_proxy, Fraction):
        lhs = root * base_proxy
    else:
        lhs = float(root) * float(base_proxy)
    rhs = induced_proxy
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        slack = rhs - lhs
    else:
        slack = float(rhs) - float(lhs)
    return TransferReport(mu, alpha, base_proxy, induced_proxy, lhs, rhs, slack, slack >= 0, recs)
