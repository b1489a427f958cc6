"""Jerk segments: primitives that move the acceleration between levels while
leaving the internal mode at forced-equilibrium rest at both ends.

Two constructions share one interface. The ZV construction convolves a bang
jerk pulse with a damped two-impulse shaper. The time-optimal construction
searches bang-bang jerk structures with up to three pulses for the shortest
duration that cancels the mode.

The rest condition for a step list ``(t_i, c_i)`` is ``sum c_i exp(-p t_i) = 0``
at the damped pole ``p = -delta + i omega_d``. It is shift-invariant, which is
why overlapping segments stay oscillation-free when superposed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from . import kernels
from .model import (
    JerkProfile,
    KinematicLimits,
    PlantModal,
    eval_kinematics,
    oscillation_amplitude,
    propagate_osc,
)

# relative slack when validating switching times and the acceleration bound
_BOUND_TOL = 1e-9
# residual amplitude accepted for a designed segment, relative to m* |da| / omega0^2
_RESIDUAL_TOL = 1e-9
_N_GRID = 256


class SegmentMethod(str, enum.Enum):
    ZV = "zv"
    TIMEOPT = "timeopt"


class SegmentDesignError(RuntimeError):
    """No admissible pulse structure was found for a segment spec."""


@dataclass(frozen=True)
class SegmentSpec:
    a_start: float
    a_end: float
    j_lim: float
    a_max: float
    modal: PlantModal

    def __post_init__(self):
        if not self.j_lim > 0:
            raise ValueError(f"j_lim must be > 0, got {self.j_lim!r}")
        if not self.a_max > 0:
            raise ValueError(f"a_max must be > 0, got {self.a_max!r}")
        levels = (-self.a_max, 0.0, self.a_max)
        if self.a_start not in levels or self.a_end not in levels:
            raise ValueError(
                f"accelerations must be in {{-a_max, 0, a_max}}, got "
                f"{self.a_start!r} -> {self.a_end!r} with a_max={self.a_max!r}"
            )
        if self.a_start == self.a_end:
            raise ValueError("a_start and a_end must differ")

    @property
    def delta_a(self) -> float:
        return self.a_end - self.a_start


@dataclass(frozen=True)
class JerkSegment:
    """A designed primitive.

    ``profile`` starts at ``t = 0`` with ``acc0 = a_start``; ``s_f`` and ``v_f``
    are the distance and velocity gained over ``[0, t_f]`` from zero position
    and velocity.
    """

    profile: JerkProfile
    t_f: float
    s_f: float
    v_f: float
    method: SegmentMethod

    @property
    def a_start(self) -> float:
        return self.profile.acc0


@dataclass(frozen=True)
class SegmentFamily:
    """The three primitives for one working acceleration."""

    seg1: JerkSegment
    seg2: JerkSegment
    seg3: JerkSegment
    a_max: float

    @property
    def t_f1(self) -> float:
        return self.seg1.t_f

    @property
    def t_f2(self) -> float:
        return self.seg2.t_f

    @property
    def t_f3(self) -> float:
        return self.seg3.t_f

    @property
    def v_f1(self) -> float:
        return self.seg1.v_f

    @property
    def v_f2(self) -> float:
        return self.seg2.v_f

    @property
    def v_f3(self) -> float:
        """Positive by convention: minus the velocity gained over seg3."""
        return -self.seg3.v_f

    @property
    def s_f1(self) -> float:
        return self.seg1.s_f

    @property
    def s_f2(self) -> float:
        return self.seg2.s_f

    @property
    def s_f3(self) -> float:
        return self.seg3.s_f


def _finish(steps, spec: SegmentSpec, t_f: float, method: SegmentMethod) -> JerkSegment:
    prof = JerkProfile(tuple(steps), acc0=spec.a_start)
    end = eval_kinematics(prof, t_f)
    return JerkSegment(prof, t_f, end.z, end.v, method)


def zv_amplitudes(modal: PlantModal) -> tuple[float, float]:
    """Damped ZV impulse amplitudes ``(A1, A2)``; they sum to one."""
    K = math.exp(-modal.delta * math.pi / modal.omega_d)
    return 1.0 / (1.0 + K), K / (1.0 + K)


def design_zv_segment(spec: SegmentSpec) -> JerkSegment:
    """Bang jerk pulse of height ``j_lim`` shaped by the damped ZV shaper."""
    a1, a2 = zv_amplitudes(spec.modal)
    s = math.copysign(1.0, spec.delta_a)
    j = spec.j_lim
    D = abs(spec.delta_a) / j
    h = spec.modal.half_period
    steps = [(0.0, s * a1 * j), (D, -s * a1 * j), (h, s * a2 * j), (D + h, -s * a2 * j)]
    return _finish(steps, spec, D + h, SegmentMethod.ZV)


def segment_residual(seg: JerkSegment, modal: PlantModal) -> float:
    """Base oscillation amplitude left at ``t_f`` when starting from equilibrium."""
    prof = seg.profile
    end_acc = eval_kinematics(prof, seg.t_f).acc
    st = propagate_osc(prof, modal, modal.equilibrium(prof.acc0), seg.t_f)
    return oscillation_amplitude(st, modal, end_acc)


def _residual_scale(spec: SegmentSpec) -> float:
    m = spec.modal
    return m.m_star * abs(spec.delta_a) / (m.omega0 * m.omega0)


def _unit_steps(kind: int, D: float, T: float, x: float) -> list[tuple[float, float]]:
    if kind == 1:
        return [(0.0, 1.0), (D, -1.0)]
    if kind == 2:
        return [(0.0, 1.0), (x, -1.0), (T - D + x, 1.0), (T, -1.0)]
    t2 = 0.5 * (T - D)
    return [(0.0, 1.0), (x, -2.0), (x + t2, 2.0), (T, -1.0)]


def _admissible(kind: int, D: float, T: float, x: float, spec: SegmentSpec):
    """Clamp ``x`` into its structural range; None if it is clearly outside
    or the acceleration bound is violated."""
    tol = _BOUND_TOL * T
    if kind == 2:
        lo, hi = 0.0, D
    else:
        lo, hi = 0.0, T - 0.5 * (T - D)
    if x < lo - tol or x > hi + tol:
        return None
    x = min(max(x, lo), hi)
    # acceleration at the switching instants (piecewise linear in between)
    s = math.copysign(1.0, spec.delta_a)
    acc = spec.a_start
    t_prev = 0.0
    slope = 0.0
    for t, a in _unit_steps(kind, D, T, x):
        acc += slope * (t - t_prev) * spec.j_lim * s
        if abs(acc) > spec.a_max * (1.0 + _BOUND_TOL):
            return None
        slope += a
        t_prev = t
    return x


def design_timeopt_segment(spec: SegmentSpec, n_grid: int = _N_GRID) -> JerkSegment:
    """Shortest bang-bang jerk segment (values in {-j_lim, 0, +j_lim}) with rest
    at both ends and ``|acc| <= a_max`` throughout.

    Structures searched: the plain ramp, two same-sign pulses with a gap, and
    the contiguous three-pulse +/-/+ pattern. For each structure the rest
    condition reduces to ``exp(-p x) = Q(T)`` with ``x`` the first pulse width,
    which is solved branch by branch for the duration ``T``. The search covers
    durations up to the ZV segment's, so the result is never slower.

    Raises:
        SegmentDesignError: if no structure admits a solution.
    """
    m = spec.modal
    j = spec.j_lim
    D = abs(spec.delta_a) / j
    s = math.copysign(1.0, spec.delta_a)
    scale = _residual_scale(spec)
    t_hi = D + m.half_period

    cands: list[tuple[float, float, int]] = []
    ramp = _finish([(0.0, s * j), (D, -s * j)], spec, D, SegmentMethod.TIMEOPT)
    if segment_residual(ramp, m) <= _RESIDUAL_TOL * scale:
        return ramp
    for kind in (2, 3):
        for T, x in kernels.segment_roots(kind, D, m.delta, m.omega_d, t_hi, n_grid):
            xa = _admissible(kind, D, T, x, spec)
            if xa is not None:
                cands.append((T, xa, kind))

    for T, x, kind in sorted(cands):
        steps = [(t, s * j * a) for t, a in _unit_steps(kind, D, T, x)]
        seg = _finish(steps, spec, T, SegmentMethod.TIMEOPT)
        if segment_residual(seg, m) <= _RESIDUAL_TOL * scale:
            return seg
    raise SegmentDesignError(
        f"no admissible pulse structure for {spec.a_start:g} -> {spec.a_end:g} m/s^2 "
        f"(j_lim={j:g}, f_d={m.f_d:g} Hz)"
    )


def design_segment(spec: SegmentSpec, method: SegmentMethod) -> JerkSegment:
    method = SegmentMethod(method)
    if method is SegmentMethod.ZV:
        return design_zv_segment(spec)
    return design_timeopt_segment(spec)


def _design_with_fallback(specs, method: SegmentMethod) -> list[JerkSegment]:
    try:
        return [design_segment(sp, method) for sp in specs]
    except SegmentDesignError:
        if method is SegmentMethod.ZV:
            raise
        return [design_zv_segment(sp) for sp in specs]


@lru_cache(maxsize=4096)
def _family(a_max: float, limits: KinematicLimits, modal: PlantModal,
            method: SegmentMethod) -> SegmentFamily:
    j = limits.j_lim
    sp1 = SegmentSpec(0.0, a_max, j, a_max, modal)
    sp2 = SegmentSpec(a_max, -a_max, j, a_max, modal)
    sp3 = SegmentSpec(-a_max, 0.0, j, a_max, modal)
    # seg1 and seg3 enter the formulas together, so they fall back together
    seg1, seg3 = _design_with_fallback((sp1, sp3), method)
    (seg2,) = _design_with_fallback((sp2,), method)
    return SegmentFamily(seg1, seg2, seg3, a_max)


def precompute_family(a_max: float, limits: KinematicLimits, modal: PlantModal,
                      method: SegmentMethod | str = SegmentMethod.TIMEOPT) -> SegmentFamily:
    """Design the 0 -> a_max, a_max -> -a_max and -a_max -> 0 segments.

    Time-optimal designs fall back to the ZV construction when the search
    finds nothing. Results are memoised by value.
    """
    a_max = float(a_max)
    if not 0.0 < a_max <= limits.a_lim * (1.0 + 1e-12):
        raise ValueError(f"need 0 < a_max <= a_lim={limits.a_lim!r}, got {a_max!r}")
    return _family(a_max, limits, modal, SegmentMethod(method))


def family_cache_clear() -> None:
    _family.cache_clear()
