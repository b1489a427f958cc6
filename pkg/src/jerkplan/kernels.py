"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-Python
module is loaded. Setting ``JERKPLAN_PURE_PYTHON=1`` forces the fallback.
"""

import os

if os.environ.get("JERKPLAN_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
kin_eval = _impl.kin_eval
kin_eval_many = _impl.kin_eval_many
osc_propagate = _impl.osc_propagate
osc_propagate_many = _impl.osc_propagate_many
modal_residual = _impl.modal_residual
profile_peaks = _impl.profile_peaks
segment_roots = _impl.segment_roots

__all__ = [
    "BACKEND",
    "kin_eval",
    "kin_eval_many",
    "osc_propagate",
    "osc_propagate_many",
    "modal_residual",
    "profile_peaks",
    "segment_roots",
]
