"""Cross-checks of the scanners against the oracle module (``oracle-check``)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List

import numpy as np

from .oracles import cf_best_approximations, naive_record_scan, odometer_jump_distance
from .recurrence import scan_records
from .symbolic import SymbolCode, canonicalize, cantor_distance
from .systems import (
    GOLDEN,
    SILVER,
    CantorOdometer,
    CircleRotation,
    ContinuedFraction,
    DoublingMap,
    RotationPoint,
    odometer_power,
    odometer_step,
    random_dyadic,
)

IRRATIONAL_ANGLES = (
    GOLDEN,
    SILVER,
    ContinuedFraction((0,), (1, 2)),
    ContinuedFraction((0, 3), (1, 4)),
)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def check_jump_distances(depth: int, max_k: int) -> CheckResult:
    """Three-case formula against direct evaluation, for every depth-``depth`` word."""
    bad = 0
    total = 0
    for word in itertools.product((0, 1), repeat=depth):
        for tail in ((0,), (1,)):
            code = canonicalize(SymbolCode(word, tail))
            for k in range(max_k + 1):
                total += 1
                if odometer_jump_distance(code, k) != cantor_distance(odometer_power(code, 1 << k), code):
                    bad += 1
    return CheckResult(f"jump distances (depth {depth}, k <= {max_k})", bad == 0, f"{total - bad}/{total}")


def check_power_vs_steps(depth: int, max_n: int) -> CheckResult:
    bad = 0
    for word in itertools.product((0, 1), repeat=depth):
        code = canonicalize(SymbolCode(word, (0,)))
        z = code
        for n in range(1, max_n + 1):
            z = odometer_step(z)
            if odometer_power(code, n) != z:
                bad += 1
                break
    return CheckResult(f"odometer power vs stepping (depth {depth}, n <= {max_n})", bad == 0)


def random_instance(rng: np.random.Generator, max_n: int):
    """One random ``(system, point, N)`` triple."""
    N = int(rng.integers(1, max_n + 1))
    kind = int(rng.integers(0, 4))
    if kind == 0:
        pre = tuple(int(d) for d in rng.integers(0, 2, size=int(rng.integers(0, 20))))
        per = tuple(int(d) for d in rng.integers(0, 2, size=int(rng.integers(1, 4))))
        return CantorOdometer(), canonicalize(SymbolCode(pre, per)), N
    if kind == 1:
        q = int(rng.integers(1, 60))
        theta = Fraction(int(rng.integers(0, q)), q)
        return CircleRotation(theta), RotationPoint(Fraction(int(rng.integers(0, 7)), 7)), N
    if kind == 2:
        theta = IRRATIONAL_ANGLES[int(rng.integers(0, len(IRRATIONAL_ANGLES)))]
        return CircleRotation(theta), RotationPoint(), N
    return DoublingMap(), random_dyadic(N + 64, int(rng.integers(0, 2**31))), N


def check_naive_equivalence(count: int, max_n: int, seed: int = 0, backend=None) -> CheckResult:
    rng = np.random.Generator(np.random.PCG64(seed))
    mismatches = []
    for i in range(count):
        system, point, N = random_instance(rng, max_n)
        fast = list(scan_records(system, point, N, backend=backend).records)
        slow = naive_record_scan(system, point, N)
        if fast != slow:
            mismatches.append(f"#{i} {system.spec} N={N}")
    return CheckResult(f"naive vs scanner ({count} instances, N <= {max_n})", not mismatches,
                       "; ".join(mismatches[:5]))


def check_rotation_convergents(horizon: int) -> CheckResult:
    bad = []
    for theta in (GOLDEN, SILVER):
        recs = [r.n for r in scan_records(CircleRotation(theta), RotationPoint(), horizon).records]
        qs = [c.q for c in cf_best_approximations(theta, 200, horizon)]
        # n = 1 always opens the record list
        if qs[0] != 1:
            qs.insert(0, 1)
        if recs != qs:
            bad.append(str(theta))
    return CheckResult(f"rotation records = convergent denominators (horizon {horizon})", not bad,
                       ", ".join(bad))


def cross_validate(quick: bool = False, seed: int = 0) -> List[CheckResult]:
    if quick:
        return [
            check_jump_distances(8, 8),
            check_power_vs_steps(6, 1 << 6),
            check_naive_equivalence(30, 2000, seed),
            check_rotation_convergents(10**4),
        ]
    return [
        check_jump_distances(14, 12),
        check_power_vs_steps(10, 1 << 10),
        check_naive_equivalence(200, 10**4, seed),
        check_rotation_convergents(10**5),
    ]
