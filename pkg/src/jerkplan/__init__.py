"""Near time-optimal, oscillation-free rest-to-rest trajectory planning."""

from .kernels import BACKEND
from .model import (
    JerkProfile,
    KinematicLimits,
    KinematicSample,
    ModelError,
    OscState,
    PlantModal,
    PlantPhysical,
    derive_modal,
    eval_kinematics,
    moment_conditions,
    propagate_osc,
    residual_amplitude,
)

__version__ = "0.1.0"
