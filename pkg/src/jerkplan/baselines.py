"""Reference planners: the jerk-limited double-S profile and its ZV-shaped form."""

from __future__ import annotations

import math

from .assembler import CaseTag, PlanResult, _make, empty_plan, flip_sign
from .model import JerkProfile, KinematicLimits, PlantModal
from .segment import zv_amplitudes


def s_curve_timing(z_f: float, limits: KinematicLimits) -> tuple[float, float, float]:
    """``(T_j, T_a, T_v)``: jerk-ramp time, acceleration-phase time and cruise time
    of the time-optimal rest-to-rest double-S profile for ``z_f > 0``."""
    v, a, j = limits.v_lim, limits.a_lim, limits.j_lim
    if v * j >= a * a:
        T_j = a / j
        T_a = T_j + v / a
    else:
        T_j = math.sqrt(v / j)
        T_a = 2.0 * T_j
    T_v = z_f / v - T_a
    if T_v >= 0.0:
        return T_j, T_a, T_v
    # no cruise: peak velocity below v_lim
    T_j = a / j
    T_a = (a * a / j + math.sqrt(a ** 4 / (j * j) + 4.0 * a * z_f)) / (2.0 * a)
    if T_a < 2.0 * T_j:
        # acceleration never reaches a_lim
        T_j = (z_f / (2.0 * j)) ** (1.0 / 3.0)
        T_a = 2.0 * T_j
    return T_j, T_a, 0.0


def s_curve(z_f: float, limits: KinematicLimits) -> PlanResult:
    """Time-optimal jerk-limited double-S move without oscillation handling."""
    if not math.isfinite(z_f):
        raise ValueError(f"z_f must be finite, got {z_f!r}")
    if z_f == 0.0:
        return empty_plan(limits)
    if z_f < 0.0:
        return flip_sign(s_curve(-z_f, limits))
    j = limits.j_lim
    T_j, T_a, T_v = s_curve_timing(z_f, limits)
    T = 2.0 * T_a + T_v
    steps = (
        (0.0, j), (T_j, -j), (T_a - T_j, -j), (T_a, j),
        (T_a + T_v, -j), (T_a + T_v + T_j, j), (T - T_j, j), (T, -j),
    )
    prof = JerkProfile(steps)
    return _make(prof, CaseTag.SCURVE, z_f, j * T_j, T, limits,
                 t_a_max=T_a - 2.0 * T_j, t_v_max=T_v)


def zv_shape(p: PlanResult, modal: PlantModal, limits: KinematicLimits | None = None) -> PlanResult:
    """Convolve a finished plan with the damped two-impulse ZV shaper.

    The move becomes exactly half a damped period longer; since the impulse
    amplitudes are positive and sum to one, no kinematic peak grows.
    """
    a1, a2 = zv_amplitudes(modal)
    h = modal.half_period
    steps = [(t, a1 * a) for t, a in p.profile.steps] + [(t + h, a2 * a) for t, a in p.profile.steps]
    prof = JerkProfile(tuple(steps))
    if p.case_tag is CaseTag.EMPTY:
        return p
    return _make(prof, CaseTag.ZVSCURVE, p.z_f, p.a_max_used, p.t_ft + h, limits,
                 t_a_max=p.t_a_max, t_v_max=p.t_v_max)
