"""Dynamical systems: Cantor adding machine, circle rotation, doubling map.

All three expose ``step``, ``power``, ``distance`` and ``measure``.  Points
are exact objects (codes, rationals, ``offset + turns*theta`` combinations),
never floats.  Distances on irrational rotations are returned as
:class:`CertifiedReal`, a correctly rounded float plus an error bound.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Tuple, Union

import numpy as np

from .errors import InvalidArgument, PrecisionFailure
from .symbolic import SymbolCode, canonicalize, code_to_point

MAX_BITS = 1 << 14


# ---------------------------------------------------------------------------
# angles


@dataclass(frozen=True)
class ContinuedFraction:
    """Angle ``[a0; a1, a2, ...]`` with a finite head and a repeating tail."""

    head: Tuple[int, ...]
    period: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(int(a) for a in self.head))
        object.__setattr__(self, "period", tuple(int(a) for a in self.period))
        if not self.head:
            raise InvalidArgument("continued fraction needs a0")
        if any(a < 1 for a in self.head[1:] + self.period):
            raise InvalidArgument("partial quotients after a0 must be positive")
        # one spelling per periodic angle: minimal period, shortest head
        head, period = list(self.head), self.period
        for k in range(1, len(period) + 1):
            if len(period) % k == 0 and period == period[:k] * (len(period) // k):
                period = period[:k]
                break
        while period and len(head) > 1 and head[-1] == period[-1]:
            head.pop()
            period = period[-1:] + period[:-1]
        object.__setattr__(self, "head", tuple(head))
        object.__setattr__(self, "period", period)

    @property
    def is_rational(self) -> bool:
        return not self.period

    def quotients(self) -> Iterator[int]:
        yield from self.head
        while self.period:
            yield from self.period

    def convergents(self) -> Iterator[Tuple[int, int]]:
        p0, q0, p1, q1 = 1, 0, 0, 1
        for a in self.quotients():
            p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
            yield p0, q0

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise InvalidArgument("periodic continued fraction is irrational")
        p, q = list(self.convergents())[-1]
        return Fraction(p, q)

    def __str__(self):
        rest = list(map(str, self.head[1:]))
        if self.period:
            rest.append("(" + ",".join(map(str, self.period)) + ")")
        return f"[{self.head[0]};{','.join(rest)}]"


Angle = Union[Fraction, ContinuedFraction]

GOLDEN = ContinuedFraction((0,), (1,))
SILVER = ContinuedFraction((0,), (2,))  # sqrt(2) - 1


@lru_cache(maxsize=256)
def floor_scaled(theta: ContinuedFraction, bits: int) -> int:
    """``floor(frac(theta) * 2**bits)`` for an irrational angle.

    Consecutive convergents bracket ``theta``; once both floors agree the
    value between them has the same floor.
    """
    prev = None
    for k, (p, q) in enumerate(theta.convergents()):
        f = (p << bits) // q
        if k >= 1 and f == prev:
            return f % (1 << bits)
        prev = f
        if k > 64 * bits + 200:
            break
    raise PrecisionFailure(0, "continued fraction did not converge")


def parse_angle(text: str) -> Angle:
    """``"frac=p/q"``, ``"cf=[0;(1)]"``, ``"cf=[0;1,1,...]"`` or ``"golden"``."""
    text = text.strip()
    if text == "golden":
        return GOLDEN
    if text.startswith("frac="):
        try:
            return Fraction(text[5:]) % 1
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidArgument(f"bad fraction {text!r}") from exc
    if text.startswith("cf="):
        return _parse_cf(text[3:])
    raise InvalidArgument(f"bad angle {text!r}")


def _parse_cf(body: str) -> Angle:
    m = re.fullmatch(r"\[\s*(-?\d+)\s*(?:;(.*))?\]", body.strip())
    if not m:
        raise InvalidArgument(f"bad continued fraction {body!r}")
    a0 = int(m.group(1))
    rest = (m.group(2) or "").replace(" ", "")
    period: Tuple[int, ...] = ()
    pm = re.search(r"\(([\d,]+)\)$", rest)
    try:
        if pm:
            period = tuple(int(a) for a in pm.group(1).split(","))
            rest = rest[: pm.start()].rstrip(",")
            head = tuple(int(a) for a in rest.split(",") if a)
        elif rest.endswith("..."):
            head = tuple(int(a) for a in rest[:-3].split(",") if a)
            if not head:
                raise InvalidArgument("'...' needs a quotient to repeat")
            head, period = head[:-1], head[-1:]
        else:
            head = tuple(int(a) for a in rest.split(",") if a)
    except ValueError as exc:
        raise InvalidArgument(f"bad continued fraction {body!r}") from exc
    cf = ContinuedFraction((a0,) + head, period)
    if cf.is_rational:
        return cf.to_fraction() % 1
    return cf


def angle_spec(theta: Angle) -> str:
    if isinstance(theta, Fraction):
        return f"frac={theta.numerator}/{theta.denominator}"
    return f"cf={theta}"


# ---------------------------------------------------------------------------
# points and measurable sets


@dataclass(frozen=True)
class RotationPoint:
    """Circle coordinate ``offset + turns*theta (mod 1)``."""

    offset: Fraction = Fraction(0)
    turns: int = 0

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset) % 1)


@dataclass(frozen=True)
class DyadicPoint:
    """``num / 2**depth`` in [0, 1)."""

    num: int
    depth: int

    def __post_init__(self):
        if self.depth < 0 or not 0 <= self.num < (1 << self.depth):
            raise InvalidArgument("dyadic point must lie in [0, 1)")

    @classmethod
    def from_fraction(cls, x: Fraction) -> "DyadicPoint":
        x = Fraction(x)
        den = x.denominator
        if den & (den - 1) or not 0 <= x < 1:
            raise InvalidArgument(f"{x} is not a dyadic rational in [0, 1)")
        return cls(x.numerator, den.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.depth)


SystemPoint = Union[SymbolCode, RotationPoint, DyadicPoint]


@dataclass(frozen=True)
class Cylinder:
    """Codes starting with ``word``; the empty word is the whole space."""

    word: Tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(d) for d in self.word)
        if any(d not in (0, 1) for d in w):
            raise InvalidArgument("cylinder word must be binary")
        object.__setattr__(self, "word", w)

    @classmethod
    def parse(cls, text: str) -> "Cylinder":
        if not re.fullmatch(r"[01]*", text):
            raise InvalidArgument(f"bad cylinder word {text!r}")
        return cls(tuple(map(int, text)))


@dataclass(frozen=True)
class Arc:
    """Half-open arc ``[start, end)`` on the circle, ``start < end <= start + 1``."""

    start: Fraction
    end: Fraction

    def __post_init__(self):
        s, e = Fraction(self.start), Fraction(self.end)
        if not s < e <= s + 1:
            raise InvalidArgument("arc must be nonempty and at most the full circle")
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "end", e)

    @property
    def length(self) -> Fraction:
        return self.end - self.start

    @classmethod
    def full(cls) -> "Arc":
        return cls(Fraction(0), Fraction(1))


@dataclass(frozen=True)
class CertifiedReal:
    """Float ``value`` with ``|true - value| <= err``."""

    value: float
    err: float

    def __float__(self):
        return self.value


# ---------------------------------------------------------------------------
# odometer


def _unroll(code: SymbolCode, length: int) -> list:
    return code.digits(length)


def odometer_step(code: SymbolCode) -> SymbolCode:
    """Add one with carry: the first 0 becomes 1, all earlier digits become 0."""
    P, p = len(code.preperiod), len(code.period)
    digits = _unroll(code, P + p)
    for i, d in enumerate(digits):
        if d == 0:
            new = [0] * i + [1] + digits[i + 1:]
            return canonicalize(SymbolCode(tuple(new), code.period))
    # every digit is 1: T(1) = 0
    return SymbolCode((), (0,))


def odometer_power(code: SymbolCode, n: int) -> SymbolCode:
    """``n``-fold step in one binary addition pass."""
    if n < 0:
        raise InvalidArgument("n must be nonnegative")
    if n == 0:
        return code
    P, p = len(code.preperiod), len(code.period)
    L = max(P, n.bit_length()) + p + 1
    digits = _unroll(code, L)
    out, carry = [], 0
    for i, d in enumerate(digits):
        s = d + ((n >> i) & 1) + carry
        out.append(s & 1)
        carry = s >> 1
    if carry:
        # only possible when the tail is all ones: the carry never stops
        return canonicalize(SymbolCode(tuple(out), (0,)))
    shift = (L - P) % p
    tail = code.period[shift:] + code.period[:shift]
    return canonicalize(SymbolCode(tuple(out), tail))


def cylinder_measure(system, spec) -> Fraction:
    """Cantor measure of a cylinder, or Lebesgue length of an arc."""
    if spec is None:
        raise InvalidArgument("empty measure spec")
    if isinstance(system, CantorOdometer):
        if isinstance(spec, str):
            spec = Cylinder.parse(spec)
        elif not isinstance(spec, Cylinder):
            spec = Cylinder(tuple(spec))
        return Fraction(1, 1 << len(spec.word))
    if not isinstance(spec, Arc):
        raise InvalidArgument("circle systems measure arcs")
    return spec.length


# ---------------------------------------------------------------------------
# rotation helpers


def _norm_interval(offset: Fraction, turns: int, theta: ContinuedFraction, bits: int):
    """Integers ``lo <= 2**bits * ||offset + turns*theta|| <= hi``."""
    mod = 1 << bits
    O = (offset.numerator << bits) // offset.denominator
    F = floor_scaled(theta, bits)
    A = O + turns * F + min(0, turns)
    E = abs(turns) + 1
    m = A % mod
    c = min(m, mod - m)
    return max(c - E, 0), min(c + E, mod >> 1)


def certified_norm(offset: Fraction, turns: int, theta: Angle) -> Union[Fraction, CertifiedReal]:
    """``||offset + turns*theta||``: exact for rational angles, else correctly rounded."""
    offset = Fraction(offset)
    if isinstance(theta, Fraction):
        v = (offset + turns * theta) % 1
        return min(v, 1 - v)
    if turns == 0:
        v = offset % 1
        return min(v, 1 - v)
    bits = 64
    while bits <= MAX_BITS:
        lo, hi = _norm_interval(offset, turns, theta, bits)
        if lo > 0:
            a, b = lo / (1 << bits), hi / (1 << bits)
            if a == b:
                return CertifiedReal(a, math.ulp(a) / 2)
        bits *= 2
    raise PrecisionFailure(turns)


def compare_norms(x, y, theta: Angle) -> int:
    """Sign of ``||x|| - ||y||`` for ``x, y`` given as ``(offset, turns)`` pairs."""
    if isinstance(theta, Fraction):
        a = certified_norm(x[0], x[1], theta)
        b = certified_norm(y[0], y[1], theta)
        return (a > b) - (a < b)
    if x == y:
        return 0
    bits = 64
    while bits <= MAX_BITS:
        lo1, hi1 = _norm_interval(Fraction(x[0]), x[1], theta, bits)
        lo2, hi2 = _norm_interval(Fraction(y[0]), y[1], theta, bits)
        if hi1 < lo2:
            return -1
        if hi2 < lo1:
            return 1
        bits *= 2
    raise PrecisionFailure(x[1])


def rotation_orbit_distance(theta: Angle, n: int):
    """``||n*theta||``, the distance from ``T^n(x)`` to ``x`` for any base point."""
    if n < 1:
        raise InvalidArgument("n must be positive")
    return certified_norm(Fraction(0), n, theta)


def rotation_position(point: RotationPoint, theta: ContinuedFraction, bits: int):
    """Integers ``lo, width`` with ``2**bits * coord in [lo, lo + width]`` (not reduced)."""
    O = (point.offset.numerator << bits) // point.offset.denominator
    F = floor_scaled(theta, bits)
    t = point.turns
    return O + t * F + min(0, t), abs(t) + 1


def rotation_in_arc(point: RotationPoint, arc: Arc, theta: Angle) -> bool:
    """Exact membership of ``point`` in the half-open arc."""
    if arc.length == 1:
        return True
    if isinstance(theta, Fraction) or point.turns == 0:
        th = theta if isinstance(theta, Fraction) else Fraction(0)
        x = (point.offset + point.turns * th - arc.start) % 1
        return x < arc.length
    bits = 64
    while bits <= MAX_BITS:
        mod = 1 << bits
        lo, width = rotation_position(point, theta, bits)
        s = (arc.start.numerator << bits) // arc.start.denominator
        rel = (lo - s) % mod
        # (rel .. rel + width) is the relative position, up to 1 unit from flooring s
        L = arc.length * mod
        if rel + width + 1 < L and rel >= 1:
            return True
        if rel > L + 1 and rel + width + 1 < mod:
            return False
        bits *= 2
    raise PrecisionFailure(point.turns)


# ---------------------------------------------------------------------------
# doubling


def doubling_step(x):
    """``2x mod 1`` on a dyadic rational (Fraction or DyadicPoint)."""
    if isinstance(x, DyadicPoint):
        return DyadicPoint((x.num << 1) & ((1 << x.depth) - 1), x.depth)
    return doubling_step(DyadicPoint.from_fraction(x)).as_fraction()


def doubling_power_num(x: DyadicPoint, n: int) -> int:
    return (x.num << n) & ((1 << x.depth) - 1)


def dyadic_circle_distance(a: int, b: int, depth: int) -> int:
    """Circle distance of ``a/2**depth`` and ``b/2**depth`` in units of ``2**-depth``."""
    mod = 1 << depth
    r = (a - b) % mod
    return min(r, mod - r)


# ---------------------------------------------------------------------------
# systems


class System:
    kind: str = ""

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def step(self, point):
        raise NotImplementedError

    def power(self, point, n: int):
        raise NotImplementedError

    def distance(self, a, b):
        raise NotImplementedError

    def measure(self, spec) -> Fraction:
        return cylinder_measure(self, spec)

    def __str__(self):
        return self.spec


@dataclass(frozen=True)
class CantorOdometer(System):
    kind = "CantorOdometer"

    @property
    def spec(self):
        return "odometer"

    def step(self, point: SymbolCode) -> SymbolCode:
        return odometer_step(point)

    def power(self, point: SymbolCode, n: int) -> SymbolCode:
        return odometer_power(point, n)

    def distance(self, a: SymbolCode, b: SymbolCode) -> Fraction:
        return abs(code_to_point(a) - code_to_point(b))

    def coordinate(self, point: SymbolCode) -> Fraction:
        return code_to_point(point)

    def contains(self, ball, point: SymbolCode) -> bool:
        return point.prefix_matches(ball.word)


@dataclass(frozen=True)
class CircleRotation(System):
    angle: Angle = GOLDEN
    kind = "CircleRotation"

    def __post_init__(self):
        if isinstance(self.angle, (int, Fraction)):
            object.__setattr__(self, "angle", Fraction(self.angle) % 1)
        elif not isinstance(self.angle, ContinuedFraction):
            raise InvalidArgument("rotation angle must be a Fraction or ContinuedFraction")

    @property
    def is_rational(self) -> bool:
        return isinstance(self.angle, Fraction)

    @property
    def spec(self):
        return "rotation:" + angle_spec(self.angle)

    def step(self, point: RotationPoint) -> RotationPoint:
        return self.power(point, 1)

    def power(self, point: RotationPoint, n: int) -> RotationPoint:
        if self.is_rational:
            return RotationPoint(point.offset + (point.turns + n) * self.angle, 0)
        return RotationPoint(point.offset, point.turns + n)

    def distance(self, a: RotationPoint, b: RotationPoint):
        return certified_norm(a.offset - b.offset, a.turns - b.turns, self.angle)

    def contains(self, ball: Arc, point: RotationPoint) -> bool:
        return rotation_in_arc(point, ball, self.angle)


@dataclass(frozen=True)
class DoublingMap(System):
    kind = "DoublingMap"

    @property
    def spec(self):
        return "doubling"

    def step(self, point: DyadicPoint) -> DyadicPoint:
        return doubling_step(point)

    def power(self, point: DyadicPoint, n: int) -> DyadicPoint:
        return DyadicPoint(doubling_power_num(point, n), point.depth)

    def distance(self, a: DyadicPoint, b: DyadicPoint) -> Fraction:
        depth = max(a.depth, b.depth)
        na, nb = a.num << (depth - a.depth), b.num << (depth - b.depth)
        return Fraction(dyadic_circle_distance(na, nb, depth), 1 << depth)

    def contains(self, ball: Arc, point: DyadicPoint) -> bool:
        return (point.as_fraction() - ball.start) % 1 < ball.length


SystemDescriptor = System


def parse_system(text: str) -> System:
    """``"odometer"``, ``"doubling"``, ``"rotation:frac=p/q"`` or ``"rotation:cf=[...]"``."""
    text = text.strip()
    if text == "odometer":
        return CantorOdometer()
    if text == "doubling":
        return DoublingMap()
    if text.startswith("rotation:"):
        return CircleRotation(parse_angle(text[len("rotation:"):]))
    raise InvalidArgument(f"unknown system {text!r}")


def parse_point(system: System, text: str) -> SystemPoint:
    """Point text for a given system (random specs are handled by the CLI)."""
    text = text.strip()
    if isinstance(system, CantorOdometer):
        return SymbolCode.parse(text)
    try:
        x = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidArgument(f"bad coordinate {text!r}") from exc
    if isinstance(system, CircleRotation):
        return RotationPoint(x)
    return DyadicPoint.from_fraction(x)


def point_text(point: SystemPoint) -> str:
    if isinstance(point, SymbolCode):
        return str(point)
    if isinstance(point, RotationPoint):
        if point.turns:
            return f"{point.offset}+{point.turns}*theta"
        return str(point.offset)
    if point.depth > 256:
        return f"dyadic(depth={point.depth})"
    return str(point.as_fraction())


def random_dyadic(depth: int, seed: int) -> DyadicPoint:
    """Uniform dyadic point with ``depth`` fair binary digits (PCG64 seeded by ``seed``)."""
    if depth < 1:
        raise InvalidArgument("depth must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    nbytes = (depth + 7) // 8
    num = int.from_bytes(rng.bytes(nbytes), "big") >> (8 * nbytes - depth)
    return DyadicPoint(num, depth)
