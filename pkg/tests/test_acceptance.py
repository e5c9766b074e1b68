"""Acceptance criteria, one check per criterion.

Run under pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import math
import statistics
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from hausrec.cli import main as cli_main
from hausrec.induced import ergodic_ratio_check, first_return_times, pigeonhole_return
from hausrec.mixing import correlation_estimate, fit_decay, loglog_diagnostic, odometer_digit_correlation
from hausrec.oracles import cf_best_approximations
from hausrec.recurrence import LOG3_2, liminf_proxy, scan_records
from hausrec.symbolic import SymbolCode, code_to_point
from hausrec.systems import (
    GOLDEN,
    Arc,
    CantorOdometer,
    CircleRotation,
    Cylinder,
    DoublingMap,
    RotationPoint,
    odometer_power,
    random_dyadic,
)
from hausrec.validation import check_naive_equivalence

ODO = CantorOdometer()
ZERO = SymbolCode.parse("(0)")
RESULTS: list = []


def _cli_json(argv, tmp):
    out = tmp / "report.json"
    code = cli_main(argv + ["--out", str(out), "--seed", "20240601"])
    return code, (json.loads(out.read_text()) if code == 0 else None)


def orbit_reproduction(tmp):
    t = time.perf_counter()
    pts = [code_to_point(odometer_power(ZERO, n)) for n in range(1, 5)]
    dt = time.perf_counter() - t
    ok = pts == [Fraction(2, 3), Fraction(2, 9), Fraction(8, 9), Fraction(2, 27)]
    return ok and dt < 1e-3, f"orbit {[str(p) for p in pts]} in {dt * 1e3:.3f} ms"


def record_reproduction(tmp):
    t = time.perf_counter()
    prof = scan_records(ODO, ZERO, 2**20)
    dt = time.perf_counter() - t
    expected = [(2**k, Fraction(2, 3 ** (k + 1))) for k in range(21)]
    ok = [(r.n, r.d) for r in prof.records] == expected
    return ok and dt < 5, f"{len(prof.records)} records in {dt:.3f} s"


def dimension_bound(tmp):
    t = time.perf_counter()
    code, doc = _cli_json(["dim", "--system", "odometer", "--point", "(0)", "--horizon", "2**20",
                           "--mode", "pairwise"], tmp)
    dt = time.perf_counter() - t
    if code != 0:
        return False, f"exit {code}"
    v = doc["dim_lower_bound"]
    target = math.log(2) / math.log(3)
    return abs(v - target) < 1e-6 and dt < 10, f"{v!r} vs {target!r} in {dt:.2f} s"


def liminf_constant(tmp):
    bad = []
    for horizon in (2, 3, 16, 1000, 2**12, 2**20):
        prof = scan_records(ODO, ZERO, horizon)
        for k0 in range(len(prof.records)):
            if liminf_proxy(prof, LOG3_2, k0) != Fraction(2, 3):
                bad.append((horizon, k0))
    return not bad, "exactly 2/3 for all horizons and k0" if not bad else f"mismatch at {bad[:3]}"


def measure_bound(tmp):
    t = time.perf_counter()
    code, doc = _cli_json(["measure", "--system", "odometer", "--alpha", "log3(2)", "--samples", "100",
                           "--horizon", "2**20"], tmp)
    dt = time.perf_counter() - t
    if code != 0:
        return False, f"exit {code}"
    H = doc["H_lower"]
    gmin = min(p["g_lower"] for p in doc["per_point"])
    ok = 0.59 <= H <= 1.0 and gmin >= 0.59 and dt < 120
    return ok, f"H_lower={H:.6f} min g_lower={gmin:.6f} in {dt:.1f} s"


def right_endpoint(tmp):
    vals = []
    for text in ("(1)", "0(1)", "10(1)", "01(1)", "110(1)"):
        prof = scan_records(ODO, SymbolCode.parse(text), 2**20)
        vals.append(float(liminf_proxy(prof, LOG3_2)))
    return all(0.9 <= v <= 1.1 for v in vals), f"proxies {vals}"


def rotation_oracle(tmp):
    t = time.perf_counter()
    recs = [r.n for r in scan_records(CircleRotation(GOLDEN), RotationPoint(), 10**5).records]
    fib = [c.q for c in cf_best_approximations(GOLDEN, 100, 10**5)]
    prof = scan_records(CircleRotation(GOLDEN), RotationPoint(), 10**6)
    proxy = liminf_proxy(prof, 1)
    dt = time.perf_counter() - t
    ok = recs == fib and abs(proxy - 1 / math.sqrt(5)) < 1e-3 and dt < 30
    return ok, f"{len(recs)} Fibonacci records, proxy {proxy:.7f} in {dt:.2f} s"


def pigeonhole(tmp):
    t = time.perf_counter()
    bad = 0
    checked = 0
    for m in range(11):
        for w in range(2**m):
            word = tuple((w >> i) & 1 for i in range(m))
            checked += 1
            if pigeonhole_return(ODO, Cylinder(word)) > 1 + 2**m:
                bad += 1
    rng = np.random.Generator(np.random.PCG64(8))
    rot = CircleRotation(GOLDEN)
    for _ in range(50):
        a = Fraction(int(rng.integers(0, 10**6)), 10**6)
        u = Fraction(int(rng.integers(1, 10**6)), 10**6)
        checked += 1
        if pigeonhole_return(rot, Arc(a, a + u)) > 1 + 1 / u:
            bad += 1
    dt = time.perf_counter() - t
    return bad == 0 and dt < 10, f"{checked - bad}/{checked} sets within the cap in {dt:.2f} s"


def _ergodic_words():
    for m in range(7):
        for w in range(2**m):
            yield tuple((w >> i) & 1 for i in range(m))
    for m in range(7, 11):
        yield (0,) * m
        yield (1,) * m
        yield tuple(i % 2 for i in range(m))


def ergodic_ratio(tmp):
    bad = []
    for word in _ergodic_words():
        m = len(word)
        y = SymbolCode.from_digits(word + (1,))
        prof = first_return_times(ODO, Cylinder(word), y, 64)
        rep = ergodic_ratio_check(prof, Cylinder(word))
        if not (set(prof.ratios) == {Fraction(1, 2**m)} and rep.ratio == Fraction(1, 2**m)):
            bad.append(word)
    return not bad, "k/n_k = 2**-m exactly for m <= 10" if not bad else f"failed words {bad[:3]}"


def mixing_contrast(tmp):
    t = time.perf_counter()
    series = correlation_estimate(DoublingMap(), "xc", "xc", range(1, 11), 10**4, seed=0)
    gamma = fit_decay(series).gamma
    exact = odometer_digit_correlation("digit", "digit", range(1, 20, 2))
    dt = time.perf_counter() - t
    ok = 0.4 <= gamma <= 0.6 and all(abs(v) == Fraction(1, 4) for v in exact) and dt < 60
    return ok, f"doubling gamma={gamma:.4f}, odometer odd lags all |C|=1/4, {dt:.2f} s"


def loglog_divergence(tmp):
    prof = scan_records(ODO, ZERO, 2**20)
    diag = loglog_diagnostic(prof, LOG3_2)
    ks = [round(math.log2(n)) for n in diag.ns]
    tail = [t for k, t in zip(ks, diag.terms) if k >= 5]
    increasing = all(a < b for a, b in zip(tail, tail[1:]))
    exceeds = diag.terms[ks.index(20)] > 1
    horizons = [10**3, 10**4, 10**5, 10**6]
    runs = []
    for seed in range(20):
        x = random_dyadic(10**6 + 64, seed)
        d = loglog_diagnostic(scan_records(DoublingMap(), x, 10**6), 1)
        runs.append(d.running_min(horizons))
    first = loglog_diagnostic(scan_records(DoublingMap(), random_dyadic(10**6 + 64, 0), 10**6), 1)
    median = [statistics.median(r[i] for r in runs) for i in range(len(horizons))]
    trend = all(a >= b for a, b in zip(median, median[1:])) and median[-1] < median[0]
    ok = increasing and exceeds and first.tail_min < 0.5 and trend
    return ok, (f"odometer terms increasing from k=5, term(k=20)={diag.terms[ks.index(20)]:.3f}; "
                f"doubling tail min {first.tail_min:.4f}, median running min {[round(v, 4) for v in median]}")


def oracle_firewall(tmp):
    t = time.perf_counter()
    res = check_naive_equivalence(200, 10**4, seed=0)
    dt = time.perf_counter() - t
    return res.ok and dt < 60, f"{res.name} in {dt:.1f} s {res.detail}"


CRITERIA = [
    (1, "orbit reproduction", orbit_reproduction),
    (2, "record reproduction", record_reproduction),
    (3, "dimension bound", dimension_bound),
    (4, "liminf constant", liminf_constant),
    (5, "measure bound", measure_bound),
    (6, "right-endpoint proxies", right_endpoint),
    (7, "rotation oracle equivalence", rotation_oracle),
    (8, "pigeonhole return", pigeonhole),
    (9, "ergodic ratio", ergodic_ratio),
    (10, "mixing contrast", mixing_contrast),
    (11, "log-log divergence", loglog_divergence),
    (12, "oracle firewall", oracle_firewall),
]


def _line(num, name, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} [{num:2d}] {name}: {detail}"


@pytest.mark.parametrize("num, name, check", CRITERIA, ids=[c[1].replace(" ", "_") for c in CRITERIA])
def test_criterion(num, name, check, tmp_path):
    ok, detail = check(tmp_path)
    line = _line(num, name, ok, detail)
    RESULTS.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    failed = 0
    with tempfile.TemporaryDirectory() as d:
        for num, name, check in CRITERIA:
            try:
                ok, detail = check(Path(d))
            except Exception as exc:  # report and keep going
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            failed += not ok
            print(_line(num, name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
