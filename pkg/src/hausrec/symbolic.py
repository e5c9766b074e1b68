"""Binary codings of points of the middle-thirds Cantor set.

A point is ``x = sum_k 2 x_k / 3**k`` where ``(x_k)`` is an eventually
periodic word over {0, 1}.  Codes are stored as ``preperiod`` followed by an
infinitely repeated ``period``; every value produced here is an exact
:class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from .errors import InvalidArgument

ExactRational = Fraction

_CODE_RE = re.compile(r"^([01]*)(?:\(([01]+)\))?$")


@dataclass(frozen=True)
class SymbolCode:
    """Eventually periodic binary word ``preperiod + period + period + ...``."""

    preperiod: Tuple[int, ...]
    period: Tuple[int, ...] = (0,)

    def __post_init__(self):
        pre = tuple(int(d) for d in self.preperiod)
        per = tuple(int(d) for d in self.period)
        if not per:
            raise InvalidArgument("period must be nonempty")
        if any(d not in (0, 1) for d in pre + per):
            raise InvalidArgument("digits must be 0 or 1")
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def parse(cls, text: str) -> "SymbolCode":
        """Parse ``"01(0)"``-style text; a missing period means ``(0)``."""
        m = _CODE_RE.match(text.strip())
        if m is None or text.strip() == "":
            raise InvalidArgument(f"invalid code text {text!r}")
        pre, per = m.group(1), m.group(2) or "0"
        return canonicalize(cls(tuple(map(int, pre)), tuple(map(int, per))))

    @classmethod
    def from_digits(cls, digits: Sequence[int], period: Sequence[int] = (0,)) -> "SymbolCode":
        return canonicalize(cls(tuple(digits), tuple(period)))

    def digit(self, k: int) -> int:
        """Return ``x_k`` (1-based)."""
        if k < 1:
            raise InvalidArgument("digit index is 1-based")
        P = len(self.preperiod)
        if k <= P:
            return self.preperiod[k - 1]
        return self.period[(k - P - 1) % len(self.period)]

    def digits(self, length: int) -> list:
        """First ``length`` digits."""
        return [self.digit(k) for k in range(1, length + 1)]

    def prefix_matches(self, word: Sequence[int]) -> bool:
        return all(self.digit(k + 1) == w for k, w in enumerate(word))

    @property
    def is_canonical(self) -> bool:
        return canonicalize(self) == self

    def __str__(self):
        pre = "".join(map(str, self.preperiod))
        return f"{pre}({''.join(map(str, self.period))})"


def _minimal_period(period: Tuple[int, ...]) -> Tuple[int, ...]:
    p = len(period)
    for q in range(1, p + 1):
        if p % q == 0 and period == period[:q] * (p // q):
            return period[:q]
    return period


def canonicalize(code: SymbolCode) -> SymbolCode:
    """Unique representative: minimal period, no preperiod digit absorbable into the tail."""
    pre = list(code.preperiod)
    per = _minimal_period(code.period)
    while pre and pre[-1] == per[-1]:
        pre.pop()
        per = (per[-1],) + per[:-1]
    return SymbolCode(tuple(pre), per)


def _ternary_int(digits: Sequence[int]) -> int:
    acc = 0
    for d in digits:
        acc = 3 * acc + d
    return acc


def code_to_point(code: SymbolCode) -> Fraction:
    """Exact value of ``sum 2 x_k / 3**k`` via geometric summation of the tail."""
    P, p = len(code.preperiod), len(code.period)
    head = Fraction(2 * _ternary_int(code.preperiod), 3**P)
    tail = Fraction(2 * _ternary_int(code.period), 3**p - 1)
    return head + tail / 3**P


def cantor_distance(a: SymbolCode, b: SymbolCode) -> Fraction:
    return abs(code_to_point(a) - code_to_point(b))


def random_code(depth: int, seed: int) -> SymbolCode:
    """``depth`` fair digits followed by zeros.

    Digits come from numpy's PCG64 generator seeded with ``seed``, so a given
    ``(depth, seed)`` always yields the same code.
    """
    if depth < 1:
        raise InvalidArgument("depth must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    digits = rng.integers(0, 2, size=depth)
    return canonicalize(SymbolCode(tuple(int(d) for d in digits), (0,)))


def random_code_in(word: Sequence[int], depth: int, seed: int) -> SymbolCode:
    """Random code conditioned on starting with ``word``."""
    free = depth - len(word)
    if free < 0:
        raise InvalidArgument("depth shorter than the fixed prefix")
    rng = np.random.Generator(np.random.PCG64(seed))
    digits = tuple(word) + tuple(int(d) for d in rng.integers(0, 2, size=free))
    return canonicalize(SymbolCode(digits, (0,)))
