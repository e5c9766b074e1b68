import pytest
from hypothesis import given, settings, strategies as st

from hausrec import _fallback, kernels
from hausrec.recurrence import dyadic_bits, scan_records
from hausrec.symbolic import SymbolCode
from hausrec.systems import GOLDEN, SILVER, CantorOdometer, CircleRotation, DoublingMap, RotationPoint, floor_scaled, random_dyadic

cython_only = pytest.mark.skipif(kernels.BACKEND != "cython", reason="extension not built")


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    assert kernels.get_backend("python") is _fallback


@cython_only
@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**30), st.booleans(), st.integers(1, 5000))
def test_odometer_kernels_agree(x, ones, N):
    W = max(x.bit_length(), N.bit_length()) + 2
    digits = [(x >> i) & 1 if i < x.bit_length() else int(ones) for i in range(W)]
    expected = _fallback.odometer_scan(digits, W, ones, N)
    assert kernels.odometer_scan(digits, W, ones, N, backend="cython") == expected


@cython_only
@pytest.mark.parametrize("theta", [GOLDEN, SILVER])
def test_rotation_kernels_agree(theta):
    F = floor_scaled(theta, 64)
    assert kernels.rotation_scan(F, 64, 10**5, backend="cython") == _fallback.rotation_scan(F, 64, 10**5)


@cython_only
@pytest.mark.parametrize("seed", range(5))
def test_doubling_kernels_agree(seed):
    x = random_dyadic(3000, seed)
    bits = dyadic_bits(x)
    a = kernels.doubling_scan(bits, x.depth, 1, 2000, 0, backend="cython")
    b = _fallback.doubling_scan(bits, x.depth, 1, 2000, 0)
    assert a == b


def test_full_scans_agree_across_backends():
    cases = [
        (CantorOdometer(), SymbolCode.parse("0110(01)"), 5000),
        (CircleRotation(GOLDEN), RotationPoint(), 10**4),
        (DoublingMap(), random_dyadic(2064, 9), 2000),
    ]
    for system, point, N in cases:
        ref = scan_records(system, point, N, backend="python").records
        assert scan_records(system, point, N).records == ref
