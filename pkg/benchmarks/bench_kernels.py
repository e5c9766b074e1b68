"""Compare the compiled and pure-Python record-scan kernels.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit

from hausrec import kernels
from hausrec.recurrence import scan_records
from hausrec.symbolic import SymbolCode
from hausrec.systems import GOLDEN, CantorOdometer, CircleRotation, DoublingMap, RotationPoint, random_dyadic

CASES = [
    ("odometer, point 0, N=2**20", CantorOdometer(), SymbolCode.parse("(0)"), 2**20),
    ("odometer, 0110(01), N=2**20", CantorOdometer(), SymbolCode.parse("0110(01)"), 2**20),
    ("golden rotation, N=10**6", CircleRotation(GOLDEN), RotationPoint(), 10**6),
    ("doubling, N=10**6", DoublingMap(), random_dyadic(10**6 + 64, 0), 10**6),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    print(f"{'case':32s} " + " ".join(f"{b:>10s}" for b in backends) + "    speedup")
    for label, system, point, N in CASES:
        times = []
        for b in backends:
            t = min(timeit.repeat(lambda: scan_records(system, point, N, backend=b), number=1,
                                  repeat=args.repeat))
            times.append(t)
        speed = f"{times[0] / times[-1]:9.1f}x" if len(times) > 1 else ""
        print(f"{label:32s} " + " ".join(f"{t:9.4f}s" for t in times) + "  " + speed)


if __name__ == "__main__":
    main()
