"""Distance and mistuning sweeps, envelope fitting, controller-cycle resampling
and the CSV layout shared by the CLI."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .assembler import PlanResult
from .baselines import s_curve, zv_shape
from .config import RunConfig, config_hash, dump_config
from .model import (
    PlantModal,
    eval_kinematics_many,
    residual_amplitude,
)
from .optimizer import PlanningError, plan

PLANNERS = ("scurve", "zv", "ocpj")
ABSENT_PLANNERS = "FirImp, ocpS (not implemented)"


@dataclass(frozen=True)
class SweepRow:
    """One CSV row. ``f_sys`` is NaN for rows simulated at the nominal plant.

    ``dt_ocpj_zv`` is ``t_ocpj - t_zv`` and ``rel_ocpj_zv`` is
    ``t_ocpj / t_zv - 1``; both are recomputed from the absolute columns.
    """

    z_f: float
    f_sys: float
    t_scurve: float
    t_zv: float
    t_ocpj: float
    dt_ocpj_zv: float
    rel_ocpj_zv: float
    case_tag: str
    a_max_used: float
    used_alg3: bool
    a0_scurve: float
    a0_zv: float
    a0_ocpj: float
    error: str = ""


COLUMNS = tuple(f.name for f in fields(SweepRow))
_FLOAT_COLS = {f.name for f in fields(SweepRow) if f.type in ("float", float)}


def _plan_all(cfg: RunConfig, z_f: float):
    modal = cfg.modal
    sc = s_curve(z_f, cfg.limits)
    zv = zv_shape(sc, modal, cfg.limits)
    try:
        oc = plan(z_f, cfg.limits, modal, cfg.optimizer)
        err = ""
    except PlanningError as exc:
        oc, err = None, str(exc)
    return {"scurve": sc, "zv": zv, "ocpj": oc}, err


def _row(z_f: float, plans: dict, err: str, modal_plan: PlantModal, modal_sim: PlantModal,
         f_sys: float) -> SweepRow:
    def t(name):
        p = plans[name]
        return p.t_ft if p is not None else math.nan

    def a0(name):
        p = plans[name]
        if p is None:
            return math.nan
        return residual_amplitude(p.profile, modal_plan, modal_sim, p.t_ft)

    oc = plans["ocpj"]
    t_zv, t_oc = t("zv"), t("ocpj")
    return SweepRow(
        z_f=z_f,
        f_sys=f_sys,
        t_scurve=t("scurve"),
        t_zv=t_zv,
        t_ocpj=t_oc,
        dt_ocpj_zv=t_oc - t_zv,
        rel_ocpj_zv=t_oc / t_zv - 1.0 if t_zv > 0 else math.nan,
        case_tag=oc.case_tag.value if oc is not None else "",
        a_max_used=oc.a_max_used if oc is not None else math.nan,
        used_alg3=bool(oc.used_alg3) if oc is not None else False,
        a0_scurve=a0("scurve"),
        a0_zv=a0("zv"),
        a0_ocpj=a0("ocpj"),
        error=err,
    )


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))  # map keeps input order
    return [fn(x) for x in items]


def sweep_distances(cfg: RunConfig, z_list: Iterable[float], workers: int | None = None) -> list[SweepRow]:
    """All planners at every distance, simulated on the nominal plant.

    A planner failure is recorded in the row's ``error`` column and the sweep
    carries on.
    """
    zs = [float(z) for z in z_list]
    if not zs:
        raise ValueError("z_list is empty")
    if any(not z > 0 for z in zs):
        raise ValueError("distances must be > 0")
    modal = cfg.modal

    def one(z):
        plans, err = _plan_all(cfg, z)
        return _row(z, plans, err, modal, modal, math.nan)

    return _map(one, zs, workers)


def mistuned(modal: PlantModal, f_sys: float) -> PlantModal:
    """Plant with damped frequency ``f_sys`` (Hz); damping and coupling unchanged."""
    return modal.with_damped_frequency(f_sys)


def sweep_sensitivity(cfg: RunConfig, z_f: float, f_sys_list: Iterable[float]) -> list[SweepRow]:
    """Plan once on the nominal plant, then measure residual amplitude on
    plants whose damped frequency is moved to each ``f_sys``."""
    fs = [float(f) for f in f_sys_list]
    if any(not f > 0 for f in fs):
        raise ValueError("frequencies must be > 0")
    modal = cfg.modal
    plans, err = _plan_all(cfg, z_f)
    return [_row(z_f, plans, err, modal, mistuned(modal, f), f) for f in fs]


def envelope_fit(t, x, t_ft: float, modal: PlantModal) -> tuple[float, float]:
    """Fit ``a0 exp(-delta (t - t_ft)) sin(omega_d t - phi0)`` to samples after ``t_ft``.

    Returns:
        ``(a0, phi0)``.

    Raises:
        ValueError: if the window after ``t_ft`` covers less than one radian of
            the oscillation, which leaves the basis nearly rank-deficient.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    sel = t >= t_ft
    t, x = t[sel], x[sel]
    if t.size < 2 or modal.omega_d * (t[-1] - t[0]) < 1.0:
        raise ValueError("fit window too short: need omega_d * window >= 1 rad")
    env = np.exp(-modal.delta * (t - t_ft))
    basis = np.column_stack((env * np.sin(modal.omega_d * t), env * np.cos(modal.omega_d * t)))
    (c_s, c_c), *_ = np.linalg.lstsq(basis, x, rcond=None)
    return math.hypot(c_s, c_c), math.atan2(-c_c, c_s)


def resample_to_cycle(p: PlanResult, cycle: float) -> np.ndarray:
    """Sample the plan on ``k * cycle`` up to the first grid time at or past ``t_ft``.

    Returns an ``(N + 1, 5)`` array with columns ``t, z, v, acc, jerk``. Grid
    times at or past ``t_ft`` hold the exact terminal state ``(z_f, 0, 0, 0)``.
    """
    if not cycle > 0:
        raise ValueError(f"cycle must be > 0, got {cycle!r}")
    n = max(0, math.ceil(p.t_ft / cycle - 1e-9))
    ts = np.arange(n + 1, dtype=float) * cycle
    kin = eval_kinematics_many(p.profile, ts)
    done = ts >= p.t_ft
    kin[done] = (p.z_f, 0.0, 0.0, 0.0)
    return np.column_stack((ts, kin))


def initial_jerk_limit(a_max: float, modal: PlantModal) -> float:
    """Starting jerk limit ``a_max * omega_d / (2 pi)`` for commissioning."""
    if not a_max > 0:
        raise ValueError(f"a_max must be > 0, got {a_max!r}")
    return a_max * modal.omega_d / (2.0 * math.pi)


# -- CSV ---------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def header_lines(cfg: RunConfig, kind: str) -> list[str]:
    lines = [f"# jerkplan {kind}", f"# config_sha256: {config_hash(cfg)}"]
    lines += [f"# config: {ln}" for ln in dump_config(cfg).splitlines() if ln]
    lines.append(f"# absent planners: {ABSENT_PLANNERS}")
    return lines


def write_rows(fh, rows: Sequence[SweepRow], cfg: RunConfig | None = None, kind: str = "sweep") -> None:
    """Write rows as CSV to an open text stream, with the ``#`` header block."""
    if cfg is not None:
        for ln in header_lines(cfg, kind):
            fh.write(ln + "\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_fmt(v) for v in asdict(r).values()])


def rows_to_csv(rows: Sequence[SweepRow], cfg: RunConfig | None = None, kind: str = "sweep") -> str:
    buf = io.StringIO()
    write_rows(buf, rows, cfg, kind)
    return buf.getvalue()


def read_rows(fh) -> list[SweepRow]:
    """Parse CSV written by :func:`write_rows`; header comments are skipped."""
    body = (ln for ln in fh if not ln.startswith("#"))
    rd = csv.reader(body)
    head = next(rd)
    if tuple(head) != COLUMNS:
        raise ValueError(f"unexpected columns {head}")
    out = []
    for rec in rd:
        kw = {}
        for name, raw in zip(COLUMNS, rec):
            if name in _FLOAT_COLS:
                kw[name] = float(raw)
            elif name == "used_alg3":
                kw[name] = raw == "1"
            else:
                kw[name] = raw
        out.append(SweepRow(**kw))
    return out


def write_trajectory(fh, samples: np.ndarray, cfg: RunConfig | None = None) -> None:
    if cfg is not None:
        for ln in header_lines(cfg, "trajectory"):
            fh.write(ln + "\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(("t", "z", "v", "acc", "jerk"))
    for rec in samples:
        w.writerow([format(float(v), ".17g") for v in rec])
