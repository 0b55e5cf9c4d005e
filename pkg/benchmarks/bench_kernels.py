"""Compare the numba kernels with their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--sizes 64 256 1024] [--repeat 5]

Both implementations are imported side by side, so the environment flag
that picks the default path does not matter here.
"""
import argparse
import timeit

import numpy as np

from qcovlab import _accel


def _tridiag(n, rng):
    return rng.normal(size=n), rng.normal(size=n - 1)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        print("numba is not importable; only the numpy path exists")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'n':>6}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for n in args.sizes:
        d, e = _tridiag(n, rng)
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        par = rng.integers(0, 2, size=n)
        cases = {
            "bisect_eigenvalues": (
                lambda: _accel.bisect_eigenvalues_numpy(d, e, 1e-12),
                lambda: _accel.bisect_eigenvalues_numba(d, e, 1e-12),
            ),
            "sturm_count": (
                lambda: _accel.sturm_count_numpy(d, e * e, np.linspace(-3, 3, 257)),
                lambda: _accel.sturm_count_numba(d, e * e, np.linspace(-3, 3, 257)),
            ),
            "colsum_norm": (lambda: _accel.colsum_norm_numpy(m), lambda: _accel.colsum_norm_numba(m)),
            "koszul_col_signs": (
                lambda: _accel.koszul_col_signs_numpy(par, 1, 8),
                lambda: _accel.koszul_col_signs_numba(par, 1, 8),
            ),
        }
        for name, (f_np, f_nb) in cases.items():
            f_nb()  # compile outside the timing
            t_np = min(timeit.repeat(f_np, number=1, repeat=args.repeat)) * 1e3
            t_nb = min(timeit.repeat(f_nb, number=1, repeat=args.repeat)) * 1e3
            print(f"{name:<22}{n:>6}{t_np:>12.3f}{t_nb:>12.3f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
