"""Parameter sets used throughout the tests and the CLI.

The lab and reference sets only publish the modal frequency and damping; the
coupling ratio ``m_star`` only scales base deflection amplitudes and is set to
0.1 for both.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import KinematicLimits, PlantModal, PlantPhysical, derive_modal

PLACEHOLDER_M_STAR = 0.1


@dataclass(frozen=True)
class Preset:
    name: str
    plant: PlantPhysical | PlantModal
    limits: KinematicLimits

    @property
    def modal(self) -> PlantModal:
        if isinstance(self.plant, PlantPhysical):
            return derive_modal(self.plant)
        return self.plant


EX_PAP = Preset(
    "expap",
    PlantPhysical(m_s=25.0, m_b=500.0, k=15e6, d=5e3),
    KinematicLimits(v_lim=1.5, a_lim=20.0, j_lim=800.0),
)
LAB = Preset(
    "lab",
    PlantModal(omega0=61.02, delta=0.799, m_star=PLACEHOLDER_M_STAR),
    KinematicLimits(v_lim=0.45, a_lim=6.0, j_lim=200.0),
)
YAL = Preset(
    "yal",
    PlantModal(omega0=40.0, delta=0.0, m_star=PLACEHOLDER_M_STAR),
    KinematicLimits(v_lim=1.0, a_lim=2.0, j_lim=10.0),
)

PRESETS = {p.name: p for p in (EX_PAP, LAB, YAL)}

# damped frequencies (Hz) of the lab mistuning study; 9.71 Hz is nominal
LAB_SENSITIVITY_FREQS = (8.71, 9.20, 9.71, 10.27, 10.60)
# distances (m) of the lab transition-time comparison
LAB_DISTANCES = (0.0145, 0.061, 0.116, 0.139, 0.181)
