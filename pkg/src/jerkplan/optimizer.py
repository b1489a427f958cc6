"""Working-acceleration selection: the Case-2 optimum, the top-level planning
flow, and the binary search that restores feasibility for short distances."""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, replace
from functools import lru_cache

from scipy.optimize import brentq

from .assembler import (
    PlanInfeasible,
    PlanResult,
    empty_plan,
    flip_sign,
    plan_for_amax,
)
from .model import KinematicLimits, PlantModal
from .segment import SegmentMethod, precompute_family

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimizerConfig:
    dt_boundary: float = 400e-6
    n_max_iter: int = 23
    a_scan_points: int = 256
    fd_step_rel: float = 1e-4
    segment_method: SegmentMethod = SegmentMethod.TIMEOPT

    def __post_init__(self):
        if not self.dt_boundary > 0:
            raise ValueError(f"dt_boundary must be > 0, got {self.dt_boundary!r}")
        if self.n_max_iter < 1:
            raise ValueError(f"n_max_iter must be >= 1, got {self.n_max_iter!r}")
        if self.a_scan_points < 8:
            raise ValueError(f"a_scan_points must be >= 8, got {self.a_scan_points!r}")
        if not self.fd_step_rel > 0:
            raise ValueError(f"fd_step_rel must be > 0, got {self.fd_step_rel!r}")
        object.__setattr__(self, "segment_method", SegmentMethod(self.segment_method))


class PlanningError(RuntimeError):
    """No feasible working acceleration was found.

    Attributes:
        trace: ``(a_iter, outcome)`` pairs visited by the search.
    """

    def __init__(self, msg: str, trace: list[tuple[float, str]] | None = None):
        super().__init__(msg)
        self.trace = trace or []


def case2_time_offset(a_max: float, limits: KinematicLimits, modal: PlantModal,
                      method: SegmentMethod | str) -> float:
    """Case-2 total time minus ``z_f / v_lim``; independent of the distance."""
    fam = precompute_family(a_max, limits, modal, method)
    return fam.t_f1 + fam.t_f3 + (limits.v_lim - (fam.v_f1 + fam.v_f3)) / a_max


def _golden(f, lo: float, hi: float, tol: float) -> float:
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    return c if fc <= fd else d


@lru_cache(maxsize=256)
def _best_accel(limits: KinematicLimits, modal: PlantModal, n: int, fd_rel: float,
                method: SegmentMethod) -> float:
    a_lim = limits.a_lim

    def f(a):
        return case2_time_offset(a, limits, modal, method)

    grid = [a_lim * k / n for k in range(1, n + 1)]
    vals = [f(a) for a in grid]
    h = fd_rel * a_lim

    def df(a):
        lo, hi = max(a - h, 0.5 * h), min(a + h, a_lim)
        return (f(hi) - f(lo)) / (hi - lo)

    best_a, best_f = grid[-1], vals[-1]
    for i in range(n):
        left = vals[i - 1] if i > 0 else math.inf
        right = vals[i + 1] if i + 1 < n else math.inf
        if not (vals[i] <= left and vals[i] <= right):
            continue
        lo = grid[i - 1] if i > 0 else 0.5 * grid[0]
        hi = grid[i + 1] if i + 1 < n else a_lim
        a = _golden(f, lo, hi, 1e-9 * a_lim)
        # polish on the stationarity condition where the derivative brackets a root
        try:
            d_lo, d_hi = df(lo), df(hi)
            if d_lo < 0.0 < d_hi:
                ar = brentq(df, lo, hi, xtol=1e-13 * a_lim)
                if f(ar) <= f(a):
                    a = ar
        except (ValueError, RuntimeError):
            pass
        fa = f(a)
        if i + 1 == n and vals[i] < fa:
            a, fa = grid[i], vals[i]
        if fa < best_f:
            best_a, best_f = a, fa
    return min(best_a, a_lim)


def best_accel_case2(limits: KinematicLimits, modal: PlantModal,
                     cfg: OptimizerConfig | None = None,
                     method: SegmentMethod | str | None = None) -> float:
    """Working acceleration minimising the Case-2 transition time.

    The distance only adds ``z_f / v_lim`` to the objective, so the result
    depends on the limits and plant alone. A uniform scan seeds golden-section
    refinement of every local basin; the global best is returned.
    """
    cfg = cfg or OptimizerConfig()
    m = SegmentMethod(method) if method is not None else cfg.segment_method
    return _best_accel(limits, modal, cfg.a_scan_points, cfg.fd_step_rel, m)


def _try_plan(z_f, a, limits, modal, method):
    try:
        return plan_for_amax(z_f, precompute_family(a, limits, modal, method), limits)
    except PlanInfeasible:
        return None


def optimize_amax(z_f: float, limits: KinematicLimits, modal: PlantModal, a_best: float,
                  cfg: OptimizerConfig | None = None) -> PlanResult:
    """Binary search on the working acceleration below ``a_best``.

    A feasible iterate steps up, an infeasible one steps down, with step
    ``(1/2)^n * a_best``. The search stops once a feasible iterate improves the
    previous feasible one by no more than ``dt_boundary``, or after
    ``n_max_iter`` iterations. The fastest feasible plan seen is returned.

    Raises:
        PlanningError: no feasible iterate was found.
    """
    cfg = cfg or OptimizerConfig()
    method = cfg.segment_method
    da_ges = a_best
    a_iter = a_best / 2.0
    n = 1
    t_prev = None
    best: PlanResult | None = None
    trace: list[tuple[float, str]] = []
    while True:
        n += 1
        p = _try_plan(z_f, a_iter, limits, modal, method)
        if p is not None and p.limit_report.clean:
            dt_f = math.inf if t_prev is None else t_prev - p.t_ft
            t_prev = p.t_ft
            if best is None or p.t_ft < best.t_ft:
                best = copy.deepcopy(p)
            trace.append((a_iter, "ok"))
            a_iter += 0.5 ** n * da_ges
        else:
            dt_f = math.inf
            trace.append((a_iter, "infeasible" if p is None else p.limit_report.describe()))
            a_iter -= 0.5 ** n * da_ges
        if dt_f <= cfg.dt_boundary or n > cfg.n_max_iter:
            break
    if best is None:
        raise PlanningError(
            f"no feasible working acceleration for z_f={z_f:g} m below a_best={a_best:g}", trace
        )
    return replace(best, used_alg3=True)


def plan(z_f: float, limits: KinematicLimits, modal: PlantModal,
         cfg: OptimizerConfig | None = None) -> PlanResult:
    """Plan a rest-to-rest move of ``z_f`` metres (negative moves are mirrored).

    Uses the Case-2 optimal working acceleration; when that plan breaks a
    limit, the binary search on the working acceleration takes over.

    Raises:
        PlanningError: no feasible plan exists at any searched acceleration.
    """
    cfg = cfg or OptimizerConfig()
    if not math.isfinite(z_f):
        raise ValueError(f"z_f must be finite, got {z_f!r}")
    if z_f == 0.0:
        return empty_plan(limits)
    if z_f < 0.0:
        return flip_sign(plan(-z_f, limits, modal, cfg))
    a_best = min(best_accel_case2(limits, modal, cfg), limits.a_lim)
    p = _try_plan(z_f, a_best, limits, modal, cfg.segment_method)
    if p is not None and p.limit_report.clean:
        return p
    return optimize_amax(z_f, limits, modal, a_best, cfg)
