"""Trajectory assembly from a segment family (Cases 1, 2 and 3) and limit checks.

Segments are placed on a common time axis; a negative hold simply moves the
following segments earlier so their step lists overlap and add up.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from . import kernels
from .model import JerkProfile, KinematicLimits, concat_steps
from .segment import SegmentFamily

_LIMIT_RTOL = 1e-9


class CaseTag(str, enum.Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    SCURVE = "SCurve"
    ZVSCURVE = "ZVSCurve"
    EMPTY = "Empty"


class PlanInfeasible(RuntimeError):
    """The requested case has no real solution for this family."""


@dataclass(frozen=True)
class LimitReport:
    v_peak: float
    a_peak: float
    j_peak: float
    v_violated: bool
    a_violated: bool
    j_violated: bool

    @property
    def clean(self) -> bool:
        return not (self.v_violated or self.a_violated or self.j_violated)

    def describe(self) -> str:
        bad = [n for n, f in (("v", self.v_violated), ("a", self.a_violated),
                              ("j", self.j_violated)) if f]
        return "clean" if not bad else "violates " + ",".join(bad)


@dataclass(frozen=True)
class PlanResult:
    """An assembled rest-to-rest trajectory.

    Hold durations that do not apply to the case are NaN. ``used_alg3`` marks
    plans whose working acceleration came from the feasibility search.
    """

    profile: JerkProfile
    case_tag: CaseTag
    z_f: float
    t1: float
    t2: float
    t_a_max: float
    t_v_max: float
    a_max_used: float
    t_ft: float
    limit_report: LimitReport
    used_alg3: bool = False


def check_limits(p: PlanResult | JerkProfile, limits: KinematicLimits) -> LimitReport:
    """Exact peaks of |v|, |acc| and |jerk| compared against the hard limits.

    Acceleration is compared with ``a_lim``, not the working ``a_max``; a
    superposed plan may exceed its working acceleration and still be fine.
    """
    prof = p.profile if isinstance(p, PlanResult) else p
    v, a, j = kernels.profile_peaks(prof.times, prof.amps, prof.v0, prof.acc0)
    return LimitReport(
        v, a, j,
        v > limits.v_lim * (1.0 + _LIMIT_RTOL),
        a > limits.a_lim * (1.0 + _LIMIT_RTOL),
        j > limits.j_lim * (1.0 + _LIMIT_RTOL),
    )


def _unlimited_report(prof: JerkProfile) -> LimitReport:
    v, a, j = kernels.profile_peaks(prof.times, prof.amps, prof.v0, prof.acc0)
    return LimitReport(v, a, j, False, False, False)


def _negated(prof: JerkProfile) -> JerkProfile:
    return JerkProfile(tuple((t, -a) for t, a in prof.steps))


def _make(profile, tag, z_f, a_max, t_nominal, limits, **holds) -> PlanResult:
    t_ft = max(t_nominal, profile.t_end)
    rep = check_limits(profile, limits) if limits is not None else _unlimited_report(profile)
    fields = dict(t1=math.nan, t2=math.nan, t_a_max=math.nan, t_v_max=math.nan)
    fields.update(holds)
    return PlanResult(profile=profile, case_tag=tag, z_f=z_f, a_max_used=a_max, t_ft=t_ft,
                      limit_report=rep, **fields)


def case1_coefficients(z_f: float, fam: SegmentFamily) -> tuple[float, float, float]:
    """``(p, q, c)`` of ``t1^2 + p t1 + q = 0`` and ``t2 = t1 + c``."""
    a = fam.a_max
    c = (fam.v_f1 + fam.v_f2 - fam.v_f3) / a
    S = fam.s_f1 + fam.s_f2 + fam.s_f3 + fam.v_f3 * fam.t_f3
    p = (a * fam.t_f2 + 2.0 * fam.v_f1 + fam.v_f2) / a
    vs = fam.v_f1 + fam.v_f2
    q = (S + fam.v_f1 * fam.t_f2 + (vs - fam.v_f3) * (vs + fam.v_f3) / (2.0 * a) - z_f) / a
    return p, q, c


def assemble_case1(z_f: float, fam: SegmentFamily, limits: KinematicLimits | None = None) -> PlanResult:
    """seg1, hold t1 at +a_max, seg2, hold t2 at -a_max, seg3.

    Raises:
        PlanInfeasible: the quadratic for ``t1`` has no real root.
    """
    p, q, c = case1_coefficients(z_f, fam)
    disc = 0.25 * p * p - q
    if disc < 0.0:
        raise PlanInfeasible(
            f"Case 1 has no real t1 for z_f={z_f:g} m at a_max={fam.a_max:g} (disc={disc:.3g})"
        )
    t1 = -0.5 * p + math.sqrt(disc)
    t2 = t1 + c
    T2 = fam.t_f1 + t1
    T4 = T2 + fam.t_f2 + t2
    prof = concat_steps([(0.0, fam.seg1.profile), (T2, fam.seg2.profile), (T4, fam.seg3.profile)])
    return _make(prof, CaseTag.CASE1, z_f, fam.a_max, T4 + fam.t_f3, limits, t1=t1, t2=t2)


def case2_accel_time(fam: SegmentFamily, v_lim: float) -> tuple[float, float]:
    """``(t_a_max, T3)``: hold at +a_max reaching ``v_lim`` and accel-phase duration."""
    t_am = (v_lim - (fam.v_f1 + fam.v_f3)) / fam.a_max
    return t_am, fam.t_f1 + fam.t_f3 + t_am


def case2_min_distance(fam: SegmentFamily, v_lim: float) -> float:
    """Shortest distance with a non-negative cruise."""
    return v_lim * case2_accel_time(fam, v_lim)[1]


def _accel_phase(fam: SegmentFamily, t_am: float) -> list[tuple[float, JerkProfile]]:
    return [(0.0, fam.seg1.profile), (fam.t_f1 + t_am, _negated(fam.seg3.profile))]


def _mirrored(fam: SegmentFamily, t_am: float, T4: float) -> JerkProfile:
    acc_parts = _accel_phase(fam, t_am)
    dec_parts = [(T4 + t0, _negated(pr)) for t0, pr in acc_parts]
    return concat_steps(acc_parts + dec_parts)


def assemble_case2(z_f: float, fam: SegmentFamily, v_lim: float,
                   limits: KinematicLimits | None = None) -> PlanResult:
    """Accelerate to ``v_lim``, cruise, decelerate with the mirrored profile."""
    t_am, T3 = case2_accel_time(fam, v_lim)
    t_vm = z_f / v_lim - T3
    T4 = T3 + t_vm
    prof = _mirrored(fam, t_am, T4)
    return _make(prof, CaseTag.CASE2, z_f, fam.a_max, T4 + T3, limits, t_a_max=t_am, t_v_max=t_vm)


def case3_hold(z_f: float, fam: SegmentFamily) -> float:
    """Positive root of ``a t^2 + (v_f + a T0) t + v_f T0 - z_f = 0``.

    Raises:
        PlanInfeasible: negative discriminant.
    """
    a = fam.a_max
    vf = fam.v_f1 + fam.v_f3
    T0 = fam.t_f1 + fam.t_f3
    b = vf + a * T0
    c = vf * T0 - z_f
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        raise PlanInfeasible(f"Case 3 has no real t_a_max for z_f={z_f:g} m (disc={disc:.3g})")
    r = math.sqrt(disc)
    # cancellation-free form of (-b + r) / (2a)
    return -2.0 * c / (b + r) if b > 0 else (-b + r) / (2.0 * a)


def assemble_case3(z_f: float, fam: SegmentFamily, limits: KinematicLimits | None = None) -> PlanResult:
    """Accelerate, then immediately decelerate with the mirrored profile."""
    t_am = case3_hold(z_f, fam)
    # same operation order as the last step of the accel phase
    T3 = (fam.t_f1 + t_am) + fam.t_f3
    prof = _mirrored(fam, t_am, T3)
    return _make(prof, CaseTag.CASE3, z_f, fam.a_max, 2.0 * T3, limits, t_a_max=t_am, t_v_max=0.0)


def empty_plan(limits: KinematicLimits | None = None) -> PlanResult:
    return _make(JerkProfile(), CaseTag.EMPTY, 0.0, 0.0, 0.0, limits)


def plan_for_amax(z_f: float, fam: SegmentFamily, limits: KinematicLimits) -> PlanResult:
    """Case selection for one working acceleration.

    Case 1 is kept when its exact velocity peak stays within ``v_lim``;
    otherwise Case 2 when the distance allows a cruise, else Case 3.

    Raises:
        PlanInfeasible: if the selected case has no real solution.
    """
    if not z_f > 0:
        raise ValueError(f"z_f must be > 0, got {z_f!r}")
    try:
        p1 = assemble_case1(z_f, fam, limits)
    except PlanInfeasible:
        p1 = None
    if p1 is not None and not p1.limit_report.v_violated:
        return p1
    if z_f >= case2_min_distance(fam, limits.v_lim):
        return assemble_case2(z_f, fam, limits.v_lim, limits)
    return assemble_case3(z_f, fam, limits)


def flip_sign(p: PlanResult) -> PlanResult:
    """Mirror a plan to the negative direction."""
    return replace(p, profile=p.profile.scaled(-1.0), z_f=-p.z_f)
