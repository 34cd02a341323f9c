"""Timing comparison of the compiled and pure-Python kernel backends.

Run as `python -m psl2cmc.bench`.  Times the hot array kernels on random
jet data and the Hoelder quotient on a mid-size grid, reporting the best
of several repeats per backend.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from . import _backend
from . import _kernels_py


def _load_backends():
    pairs = [("python", _kernels_py)]
    try:
        from . import _kernels
        pairs.insert(0, ("compiled", _kernels))
    except ImportError:
        pass
    return pairs


def _best(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="psl2cmc.bench")
    ap.add_argument("--size", type=int, default=200_000,
                    help="jet array length for the pointwise kernels")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    f = rng.uniform(0.5, 2.0, args.size)
    fx, ft, fxx, fxt, ftt = (rng.uniform(-1.0, 1.0, args.size) for _ in range(5))
    tau = 0.25

    n_r, n_t = 96, 256
    h11, h12, h22 = (rng.standard_normal((n_r, n_t)) for _ in range(3))
    r = np.exp(np.linspace(0.0, 2.0, n_r))[:, None]
    th = (2.0 * np.pi / n_t) * np.arange(n_t)[None, :]
    x, t = r * np.cos(th), r * np.sin(th)

    cases = [
        ("cmc_residual", lambda mod: mod.cmc_residual_arrays(f, fx, ft, fxx, fxt, ftt, tau)),
        ("frozen_coefficients", lambda mod: mod.frozen_coefficients_arrays(f, fx, ft, tau)),
        ("holder_seminorm", lambda mod: mod.holder_seminorm(h11, h12, h22, x, t, 0.5, 2)),
    ]

    backends = _load_backends()
    print(f"active backend: {_backend.kernel_backend()}")
    print(f"{'kernel':<22} {'backend':<10} {'best [ms]':>10}")
    times = {}
    for name, call in cases:
        for label, mod in backends:
            dt = _best(lambda: call(mod), args.repeats)
            times[(name, label)] = dt
            print(f"{name:<22} {label:<10} {dt * 1e3:>10.3f}")
        if len(backends) == 2:
            speedup = times[(name, 'python')] / times[(name, 'compiled')]
            print(f"{name:<22} {'speedup':<10} {speedup:>9.2f}x")
    if len(backends) == 1:
        print("compiled backend unavailable; only the pure-Python kernels were timed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
