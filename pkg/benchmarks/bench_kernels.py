"""Compare the numba kernels with the numpy fallback.

Each kernel runs on identical inputs under both implementations; outputs must
agree exactly.  A second table times one end-to-end workload (graded ranks)
in fresh interpreters with QVCOMPACT_BACKEND set either way.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from qvcompact import _kernels
from qvcompact._dense import _add_plan, _linear_shifts, monomials
from qvcompact.gfq import gf

END_TO_END = (
    "from qvcompact.linalg import vspace; from qvcompact.rvring import graded_rank; "
    "import time; t=time.perf_counter(); sp=vspace(3,3); [graded_rank(sp,n) for n in range(6)]; "
    "print(time.perf_counter()-t)"
)


def _best(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def kernel_cases(rng):
    F = gf(9)
    add, mul, neg, inv = F.dense_tables()

    M = rng.integers(0, F.q, size=(600, 900), dtype=np.uint8)
    yield (
        "rref 600x900 over F_9",
        lambda: _kernels.rref_numpy(M.copy(), add, mul, neg, inv, True)[0],
        lambda: _kernels.rref_numba(M.copy(), add, mul, neg, inv, True)[0],
    )

    r, d = 4, 30
    vec = rng.integers(0, F.q, size=monomials(r, d).size, dtype=np.uint8)
    shifts = _linear_shifts(r, d)
    coeffs = np.array([1, 2, 0, 5], dtype=np.int64)
    size = monomials(r, d + 1).size
    yield (
        f"mul_linear r={r} d={d}",
        lambda: _kernels.mul_linear_numpy(vec, shifts, coeffs, size, add, mul),
        lambda: _kernels.mul_linear_numba(vec, shifts, coeffs, size, add, mul),
    )

    r, d = 3, 60
    src, tgt, cf = _add_plan(F, r, d, 2, 0, 4)
    X = rng.integers(0, F.q, size=(64, monomials(r, d).size), dtype=np.uint8)
    yield (
        f"scatter 64 rows r={r} d={d}",
        lambda: _kernels.scatter_numpy(X, src, tgt, cf, add, mul),
        lambda: _kernels.scatter_numba(X, src, tgt, cf, add, mul),
    )


def end_to_end(backend: str) -> float:
    env = dict(os.environ, QVCOMPACT_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, check=True, capture_output=True, text=True)
    return float(out.stdout.strip())


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; nothing to compare")
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':32s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    ok = True
    for name, slow, fast in kernel_cases(rng):
        fast()  # compile outside the timing
        t_np, a = _best(slow, args.repeat)
        t_nb, b = _best(fast, args.repeat)
        same = np.array_equal(np.asarray(a), np.asarray(b))
        ok &= same
        flag = "" if same else "  MISMATCH"
        print(f"{name:32s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}{flag}")
    t_np, t_nb = end_to_end("numpy"), end_to_end("numba")
    print(f"{'graded ranks q=3 r=3 n<=5':32s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}  (includes JIT warm-up)")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
