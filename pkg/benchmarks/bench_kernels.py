"""Compare the numba and numpy elimination paths.

    python benchmarks/bench_kernels.py [--n 3] [--kmax 4] [--maxdeg 6]

Part one records every dense block the engine hands to `kernels.eliminate`
while building a dimension table, then replays the recorded blocks through
both paths (numba warmed up first, so compilation is not counted) and checks
the outputs are identical.  Part two times the same table end to end in
fresh processes with LCSERIES_NUMBA=1 and LCSERIES_NUMBA=0.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from lcseries import LCSEngine, Presentation, dim_table, kernels


def record_blocks(n, kmax, D):
    seen = []
    real = kernels.eliminate

    def spy(M, use_numba=None):
        seen.append(M.copy())
        return real(M, use_numba)

    kernels.eliminate = spy
    try:
        dim_table(Presentation.free(n), kmax, D, LCSEngine(Presentation.free(n)))
    finally:
        kernels.eliminate = real
    return seen


def replay(blocks, use_numba):
    t0 = time.perf_counter()
    out = [kernels.eliminate(M, use_numba=use_numba) for M in blocks]
    return time.perf_counter() - t0, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--kmax", type=int, default=4)
    ap.add_argument("--maxdeg", type=int, default=6)
    args = ap.parse_args()

    blocks = record_blocks(args.n, args.kmax, args.maxdeg)
    cells = sum(M.size for M in blocks)
    print(f"recorded {len(blocks)} blocks, {cells} matrix entries, largest {max(M.shape for M in blocks)}")
    if not kernels.HAVE_NUMBA:
        print("numba is not installed; numpy path only")
        t, _ = replay(blocks, False)
        print(f"numpy: {t:.3f}s")
        return
    kernels.eliminate(np.eye(3, dtype=np.int64), use_numba=True)
    t_nb, out_nb = replay(blocks, True)
    t_np, out_np = replay(blocks, False)
    same = all(np.array_equal(a[1], b[1]) and np.array_equal(a[0].astype(object), b[0].astype(object))
               for a, b in zip(out_nb, out_np))
    print(f"numba: {t_nb:.3f}s   numpy: {t_np:.3f}s   speedup {t_np / t_nb:.1f}x   identical: {same}")

    code = f"from lcseries import Presentation, dim_table; dim_table(Presentation.free({args.n}), {args.kmax}, {args.maxdeg})"
    print(f"\nend to end, fresh process: dim_table(A_{args.n}, kmax={args.kmax}, D={args.maxdeg})")
    for flag in ("1", "0"):
        env = dict(os.environ, LCSERIES_NUMBA=flag)
        t0 = time.perf_counter()
        subprocess.run([sys.executable, "-c", code], env=env, check=True)
        print(f"  LCSERIES_NUMBA={flag}: {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
