"""Plant parameters, kinematic limits and the jerk-step profile algebra.

A trajectory is a sum of Heaviside jerk steps. Everything downstream, from
segment design to limit checks, is evaluated in closed form on the step list.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels

_EPS = sys.float_info.epsilon


class ModelError(ValueError):
    """Invalid plant or limit parameters."""


@dataclass(frozen=True)
class PlantPhysical:
    """Two-mass model: slider ``m_s`` on a spring/damper-mounted base ``m_b``."""

    m_s: float
    m_b: float
    k: float
    d: float

    def __post_init__(self):
        for name in ("m_s", "m_b", "k", "d"):
            if not getattr(self, name) > 0:
                raise ModelError(f"{name} must be > 0, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class PlantModal:
    """Internal oscillatory mode as seen from the slider acceleration.

    Attributes:
        omega0: Undamped angular frequency (rad/s).
        delta: Damping coefficient (1/s), ``d*/2``.
        m_star: Coupling ratio ``m_s / (m_s + m_b)``.
    """

    omega0: float
    delta: float
    m_star: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ModelError(f"omega0 must be > 0, got {self.omega0!r}")
        if not 0 <= self.delta < self.omega0:
            raise ModelError(
                f"need 0 <= delta < omega0 (underdamped), got delta={self.delta!r}, "
                f"omega0={self.omega0!r}"
            )
        if not self.m_star > 0:
            raise ModelError(f"m_star must be > 0, got {self.m_star!r}")

    @property
    def omega_d(self) -> float:
        return math.sqrt(self.omega0 * self.omega0 - self.delta * self.delta)

    @property
    def f_d(self) -> float:
        return self.omega_d / (2.0 * math.pi)

    @property
    def half_period(self) -> float:
        """Half a damped period, ``pi / omega_d``."""
        return math.pi / self.omega_d

    @classmethod
    def from_damped(cls, omega_d: float, delta: float, m_star: float) -> "PlantModal":
        return cls(math.sqrt(omega_d * omega_d + delta * delta), delta, m_star)

    def with_damped_frequency(self, f_d: float) -> "PlantModal":
        """Same damping and coupling, damped frequency moved to ``f_d`` (Hz)."""
        return PlantModal.from_damped(2.0 * math.pi * f_d, self.delta, self.m_star)

    def equilibrium(self, acc: float) -> "OscState":
        """Forced equilibrium of the base for a constant slider acceleration."""
        return OscState(-self.m_star * acc / (self.omega0 * self.omega0), 0.0)


@dataclass(frozen=True)
class KinematicLimits:
    v_lim: float
    a_lim: float
    j_lim: float

    def __post_init__(self):
        for name in ("v_lim", "a_lim", "j_lim"):
            if not getattr(self, name) > 0:
                raise ModelError(f"{name} must be > 0, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class KinematicSample:
    t: float
    z: float
    v: float
    acc: float
    jerk: float


@dataclass(frozen=True)
class OscState:
    x: float
    xdot: float


def derive_modal(phys: PlantPhysical) -> PlantModal:
    """Reduce the two-mass model to its oscillatory mode.

    Raises:
        ModelError: if the mode is critically damped or overdamped.
    """
    m_g = phys.m_s + phys.m_b
    omega0 = math.sqrt(phys.k / m_g)
    delta = phys.d / (2.0 * m_g)
    if delta >= omega0:
        raise ModelError(
            f"plant is not underdamped: delta={delta:.6g} 1/s >= omega0={omega0:.6g} rad/s"
        )
    return PlantModal(omega0, delta, phys.m_s / m_g)


# steps closer than this many ulps of their time are one step; segment
# placement arithmetic otherwise leaves zero-width jerk spikes
_MERGE_ULPS = 4.0


def _normalize(steps: Iterable[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    raw = []
    for t, a in steps:
        t = float(t)
        a = float(a)
        if not (math.isfinite(t) and math.isfinite(a)):
            raise ModelError(f"non-finite jerk step ({t!r}, {a!r})")
        raw.append((t, a))
    raw.sort(key=lambda s: s[0])
    out: list[list[float]] = []
    for t, a in raw:
        if out and t - out[-1][0] <= _MERGE_ULPS * _EPS * max(abs(t), 1.0):
            out[-1][1] += a
        else:
            out.append([t, a])
    return tuple((t, a) for t, a in out if a != 0.0)


@dataclass(frozen=True)
class JerkProfile:
    """Jerk as a sum of steps ``a_i * H(t - t_i)`` plus an initial slider state.

    Steps are sorted and merged on construction; steps at identical times (to a
    few ulps) are summed and exact zeros dropped, so superposing two profiles is
    a list merge.
    """

    steps: tuple[tuple[float, float], ...] = ()
    z0: float = 0.0
    v0: float = 0.0
    acc0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "steps", _normalize(self.steps))

    @cached_property
    def times(self) -> np.ndarray:
        arr = np.array([t for t, _ in self.steps], dtype=float)
        arr.flags.writeable = False
        return arr

    @cached_property
    def amps(self) -> np.ndarray:
        arr = np.array([a for _, a in self.steps], dtype=float)
        arr.flags.writeable = False
        return arr

    @property
    def t_end(self) -> float:
        """Time of the last step (0 for an empty profile)."""
        return self.steps[-1][0] if self.steps else 0.0

    def __len__(self) -> int:
        return len(self.steps)

    def shifted(self, dt: float) -> "JerkProfile":
        return JerkProfile(tuple((t + dt, a) for t, a in self.steps), self.z0, self.v0, self.acc0)

    def scaled(self, factor: float) -> "JerkProfile":
        """Multiply jerk and the initial state by ``factor`` (linearity)."""
        return JerkProfile(
            tuple((t, factor * a) for t, a in self.steps),
            factor * self.z0,
            factor * self.v0,
            factor * self.acc0,
        )

    def with_initial(self, z0: float = 0.0, v0: float = 0.0, acc0: float = 0.0) -> "JerkProfile":
        return JerkProfile(self.steps, z0, v0, acc0)

    def superpose(self, *others: "JerkProfile") -> "JerkProfile":
        """Merge step lists; initial states add up."""
        steps = list(self.steps)
        z0, v0, acc0 = self.z0, self.v0, self.acc0
        for o in others:
            steps.extend(o.steps)
            z0 += o.z0
            v0 += o.v0
            acc0 += o.acc0
        return JerkProfile(tuple(steps), z0, v0, acc0)


def concat_steps(parts: Sequence[tuple[float, JerkProfile]]) -> JerkProfile:
    """Superpose segment step lists placed at the given start times.

    Only the steps are used; the result starts at rest with zero acceleration.
    """
    steps: list[tuple[float, float]] = []
    for start, prof in parts:
        steps.extend((start + t, a) for t, a in prof.steps)
    return JerkProfile(tuple(steps))


def eval_kinematics(profile: JerkProfile, t: float) -> KinematicSample:
    """Exact slider state at ``t``; past the last step the jerk stays constant."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    z, v, a, j = kernels.kin_eval(
        profile.times, profile.amps, profile.z0, profile.v0, profile.acc0, float(t)
    )
    return KinematicSample(float(t), z, v, a, j)


def eval_kinematics_many(profile: JerkProfile, ts) -> np.ndarray:
    """Vectorised ``eval_kinematics``; returns columns ``z, v, acc, jerk``."""
    tq = np.ascontiguousarray(ts, dtype=float)
    if tq.size and tq.min() < 0:
        raise ValueError("times must be >= 0")
    return kernels.kin_eval_many(
        profile.times, profile.amps, profile.z0, profile.v0, profile.acc0, tq
    )


def moment_conditions(profile: JerkProfile) -> tuple[float, float, float]:
    """``(sum a_i, sum a_i t_i, sum a_i t_i^2)``; all zero for a rest-to-rest profile."""
    s0 = s1 = s2 = 0.0
    for t, a in profile.steps:
        s0 += a
        s1 += a * t
        s2 += a * t * t
    return s0, s1, s2


def propagate_osc(profile: JerkProfile, modal: PlantModal, state0: OscState, t: float) -> OscState:
    """Exact base state at ``t`` driven by the profile's slider acceleration.

    The forcing is affine between jerk steps, so each interval is a damped
    transition plus an affine particular solution.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    x, xd = kernels.osc_propagate(
        profile.times, profile.amps, profile.acc0,
        modal.omega0, modal.delta, modal.omega_d, modal.m_star,
        state0.x, state0.xdot, float(t),
    )
    return OscState(x, xd)


def propagate_osc_many(profile: JerkProfile, modal: PlantModal, state0: OscState, ts) -> np.ndarray:
    tq = np.ascontiguousarray(ts, dtype=float)
    return kernels.osc_propagate_many(
        profile.times, profile.amps, profile.acc0,
        modal.omega0, modal.delta, modal.omega_d, modal.m_star,
        state0.x, state0.xdot, tq,
    )


def oscillation_amplitude(state: OscState, modal: PlantModal, acc: float = 0.0) -> float:
    """Envelope amplitude of the free oscillation about the equilibrium of ``acc``."""
    xt = state.x - modal.equilibrium(acc).x
    return math.hypot(xt, (state.xdot + modal.delta * xt) / modal.omega_d)


def residual_amplitude(
    profile: JerkProfile,
    modal_plan: PlantModal,
    modal_sim: PlantModal,
    t_end: float | None = None,
) -> float:
    """Residual base oscillation amplitude when the planned profile ends.

    The simulated plant starts at its forced equilibrium for the profile's
    initial acceleration. ``modal_plan`` is accepted for symmetry with the
    planning call; only ``modal_sim`` enters the propagation.
    """
    del modal_plan
    t_f = profile.t_end if t_end is None else t_end
    acc_end = eval_kinematics(profile, t_f).acc
    state = propagate_osc(profile, modal_sim, modal_sim.equilibrium(profile.acc0), t_f)
    return oscillation_amplitude(state, modal_sim, acc_end)


def modal_residual(profile: JerkProfile, modal: PlantModal) -> complex:
    """``sum a_i exp(-p t_i)`` at the damped pole; zero means no residual vibration."""
    re, im = kernels.modal_residual(profile.times, profile.amps, modal.delta, modal.omega_d)
    return complex(re, im)
