"""Time the numba and numpy versions of the table kernels on one Sylow subgroup.

    python3 benchmarks/bench_kernels.py [selector] [p] [repeats]
"""

import sys
import time

import numpy as np

from fusionkit import _kernels as K
from fusionkit.catalog import from_selector
from fusionkit.permgrp import sylow_subgroup
from fusionkit.plattice import PGroup


def timed(fn, repeats):
    fn()  # warm up, includes jit compilation
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def main():
    sel = sys.argv[1] if len(sys.argv) > 1 else "alt:8"
    p = int(sys.argv[2]) if len(sys.argv) > 2 else 2
    repeats = int(sys.argv[3]) if len(sys.argv) > 3 else 50
    S = PGroup(sylow_subgroup(from_selector(sel).group, p), p)
    mul = S.table.mul
    rng = np.random.default_rng(0)
    gens = rng.integers(1, S.n, size=2)
    cases = {
        "closure": (lambda: K.closure_nb(mul, gens), lambda: K.closure_np(mul, gens)),
        "extend_hom": (lambda: K.extend_hom_nb(mul, S.gens, mul, S.gens),
                       lambda: K.extend_hom_np(mul, S.gens, mul, S.gens)),
        "conjugate_rows": (lambda: K.conjugate_rows_nb(S.rows, S.rows[-1]),
                           lambda: K.conjugate_rows_np(S.rows, S.rows[-1])),
    }
    print(f"{sel} p={p} |S|={S.n}")
    print(f"{'kernel':<16}{'numba (ms)':>12}{'numpy (ms)':>12}{'ratio':>8}")
    for name, (nb, npy) in cases.items():
        a = np.asarray(nb())
        b = np.asarray(npy())
        assert np.array_equal(a, b), name
        t_nb, t_np = timed(nb, repeats), timed(npy, repeats)
        print(f"{name:<16}{1e3 * t_nb:>12.3f}{1e3 * t_np:>12.3f}{t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
