"""Time the compiled and pure-Python kernel backends on representative inputs.

Run with ``python3 benchmarks/bench_kernels.py``. Each line reports the best of
several repeats per call for both backends and the speed-up.
"""

import math
import timeit

import numpy as np

from jerkplan import _kernels_py as py
from jerkplan.optimizer import plan
from jerkplan.presets import EX_PAP

try:
    from jerkplan import _kernels as cy
except ImportError:
    cy = None


def _cases():
    p = plan(0.1, EX_PAP.limits, EX_PAP.modal)
    ts, am = p.profile.times, p.profile.amps
    m = EX_PAP.modal
    tq = np.linspace(0.0, p.t_ft, 1000)
    osc = (ts, am, 0.0, m.omega0, m.delta, m.omega_d, m.m_star, 0.0, 0.0)
    D = 20.0 / 800.0
    return {
        "kin_eval": lambda k: k.kin_eval(ts, am, 0.0, 0.0, 0.0, 0.5 * p.t_ft),
        "kin_eval_many (1000 pts)": lambda k: k.kin_eval_many(ts, am, 0.0, 0.0, 0.0, tq),
        "osc_propagate": lambda k: k.osc_propagate(*osc, p.t_ft),
        "osc_propagate_many (1000 pts)": lambda k: k.osc_propagate_many(*osc, tq),
        "modal_residual": lambda k: k.modal_residual(ts, am, m.delta, m.omega_d),
        "profile_peaks": lambda k: k.profile_peaks(ts, am, 0.0, 0.0),
        "segment_roots (kind 3, 256 grid)": lambda k: k.segment_roots(
            3, D, m.delta, m.omega_d, D + math.pi / m.omega_d, 256),
    }


def _best(fn, mod, repeat=5):
    timer = timeit.Timer(lambda: fn(mod))
    n, _ = timer.autorange()
    return min(timer.repeat(repeat, n)) / n


def main():
    if cy is None:
        print("compiled extension not built; only the Python backend is timed")
    print(f"{'kernel':34s} {'python':>12s} {'cython':>12s} {'speed-up':>9s}")
    for name, fn in _cases().items():
        t_py = _best(fn, py)
        if cy is None:
            print(f"{name:34s} {t_py * 1e6:10.2f}us {'-':>12s} {'-':>9s}")
            continue
        t_cy = _best(fn, cy)
        print(f"{name:34s} {t_py * 1e6:10.2f}us {t_cy * 1e6:10.2f}us {t_py / t_cy:8.1f}x")


if __name__ == "__main__":
    main()
