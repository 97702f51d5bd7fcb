"""Screening throughput: numba kernels vs the pure-numpy fallback.

    python3 benchmarks/bench_scan.py [--hmax 4096] [--repeat 3]

Each backend runs in its own interpreter because TRANSCEND_NUMBA is read at
import time. Candidate arrays are compared by digest.
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import hashlib, json, sys, time
from fractions import Fraction
from transcend import _kernels
from transcend.measure import ValueVector, _float_inputs, _monomial_balls
from transcend.polyseries import MonomialBasis
from transcend.specfile import data_path, load_spec
import numpy as np

hmax, repeat = int(sys.argv[1]), int(sys.argv[2])
spec = load_spec(data_path("fredholm"))
omega = ValueVector.from_functions(spec.functions, Fraction(1, 2), 256)
basis = MonomialBasis(1, 1)
re, im, eb = _float_inputs(_monomial_balls(omega, basis))
deg = np.array([0, 1], dtype=np.int64)
t0 = time.perf_counter()
_kernels.screen(re, im, eb, deg, 8)
warm = time.perf_counter() - t0
times = []
for _ in range(repeat):
    t0 = time.perf_counter()
    cands, _, _ = _kernels.screen(re, im, eb, deg, hmax)
    times.append(time.perf_counter() - t0)
print(json.dumps({"backend": _kernels.backend(), "warmup": warm, "times": times,
                  "candidates": int(cands.shape[0]),
                  "digest": hashlib.md5(np.ascontiguousarray(cands).tobytes()).hexdigest()}))
"""


def run_backend(numba_on, hmax, repeat):
    env = dict(os.environ, TRANSCEND_NUMBA="1" if numba_on else "0")
    out = subprocess.run([sys.executable, "-c", WORKER, str(hmax), str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--hmax", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    records = ((2 * args.hmax + 1) ** 2 - 1) // 2
    print(f"d=1 exhaustive screen, H_max={args.hmax}, {records} records")
    results = [run_backend(True, args.hmax, args.repeat), run_backend(False, args.hmax, args.repeat)]
    for r in results:
        best = min(r["times"])
        print(f"  {r['backend']:6s} best {best:7.3f}s  ({records / best / 1e6:6.1f} M rec/s)"
              f"  warmup {r['warmup']:6.2f}s  candidates {r['candidates']}")
    same = results[0]["digest"] == results[1]["digest"]
    print(f"  candidate arrays identical: {same}")
    if results[0]["backend"] == "numba":
        print(f"  speedup {min(results[1]['times']) / min(results[0]['times']):.1f}x")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
