"""Run configuration: a small INI-style ``key = value`` file.

Sections ``[plant]``, ``[limits]``, ``[optimizer]`` and ``[bench]``. The plant
is given either physically (``m_s, m_b, k, d``) or modally
(``omega0, delta, m_star``), never both.
"""

from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass, field

from .model import KinematicLimits, ModelError, PlantModal, PlantPhysical, derive_modal
from .optimizer import OptimizerConfig
from .segment import SegmentMethod

_PHYS_KEYS = ("m_s", "m_b", "k", "d")
_MODAL_KEYS = ("omega0", "delta", "m_star")
_LIMIT_KEYS = ("v_lim", "a_lim", "j_lim")
_OPT_FLOATS = ("dt_boundary", "fd_step_rel")
_OPT_INTS = ("n_max_iter", "a_scan_points")
_BENCH_KEYS = ("segment_method", "controller_cycle")


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


@dataclass(frozen=True)
class RunConfig:
    plant: PlantPhysical | PlantModal
    limits: KinematicLimits
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    segment_method: SegmentMethod = SegmentMethod.TIMEOPT
    controller_cycle: float = 400e-6

    def __post_init__(self):
        if not isinstance(self.plant, (PlantPhysical, PlantModal)):
            raise ConfigError(f"plant must be PlantPhysical or PlantModal, got {type(self.plant)}")
        if not (self.controller_cycle > 0 and math.isfinite(self.controller_cycle)):
            raise ConfigError(f"controller_cycle must be > 0, got {self.controller_cycle!r}")
        object.__setattr__(self, "segment_method", SegmentMethod(self.segment_method))
        if self.optimizer.segment_method is not self.segment_method:
            object.__setattr__(self, "optimizer", OptimizerConfig(
                dt_boundary=self.optimizer.dt_boundary,
                n_max_iter=self.optimizer.n_max_iter,
                a_scan_points=self.optimizer.a_scan_points,
                fd_step_rel=self.optimizer.fd_step_rel,
                segment_method=self.segment_method,
            ))

    @property
    def modal(self) -> PlantModal:
        if isinstance(self.plant, PlantPhysical):
            return derive_modal(self.plant)
        return self.plant


def _num(section: str, key: str, raw: str) -> float:
    try:
        val = float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from None
    if not math.isfinite(val):
        raise ConfigError(f"[{section}] {key}: must be finite, got {raw!r}")
    return val


def _int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") from None


def _check_keys(cp, section: str, allowed) -> None:
    if not cp.has_section(section):
        return
    extra = sorted(set(cp[section]) - set(allowed))
    if extra:
        raise ConfigError(f"[{section}]: unknown keys {extra}")


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    unknown = sorted(set(cp.sections()) - {"plant", "limits", "optimizer", "bench"})
    if unknown:
        raise ConfigError(f"unknown sections {unknown}")
    for sec in ("plant", "limits"):
        if not cp.has_section(sec):
            raise ConfigError(f"missing section [{sec}]")
    _check_keys(cp, "plant", _PHYS_KEYS + _MODAL_KEYS)
    _check_keys(cp, "limits", _LIMIT_KEYS)
    _check_keys(cp, "optimizer", _OPT_FLOATS + _OPT_INTS)
    _check_keys(cp, "bench", _BENCH_KEYS)

    pl = cp["plant"]
    has_phys = [k for k in _PHYS_KEYS if k in pl]
    has_modal = [k for k in _MODAL_KEYS if k in pl]
    try:
        if has_phys and has_modal:
            raise ConfigError("[plant]: give either m_s/m_b/k/d or omega0/delta/m_star, not both")
        if has_phys:
            if len(has_phys) != len(_PHYS_KEYS):
                raise ConfigError(f"[plant]: physical form needs {list(_PHYS_KEYS)}")
            plant = PlantPhysical(*(_num("plant", k, pl[k]) for k in _PHYS_KEYS))
            derive_modal(plant)
        elif len(has_modal) == len(_MODAL_KEYS):
            plant = PlantModal(*(_num("plant", k, pl[k]) for k in _MODAL_KEYS))
        else:
            raise ConfigError(f"[plant]: modal form needs {list(_MODAL_KEYS)}")
        lim = cp["limits"]
        missing = [k for k in _LIMIT_KEYS if k not in lim]
        if missing:
            raise ConfigError(f"[limits]: missing {missing}")
        limits = KinematicLimits(*(_num("limits", k, lim[k]) for k in _LIMIT_KEYS))
    except ModelError as exc:
        raise ConfigError(str(exc)) from None

    opt_kw = {}
    if cp.has_section("optimizer"):
        o = cp["optimizer"]
        opt_kw.update({k: _num("optimizer", k, o[k]) for k in _OPT_FLOATS if k in o})
        opt_kw.update({k: _int("optimizer", k, o[k]) for k in _OPT_INTS if k in o})
    bench = cp["bench"] if cp.has_section("bench") else {}
    try:
        method = SegmentMethod(bench.get("segment_method", "timeopt").strip())
    except ValueError:
        raise ConfigError(f"[bench] segment_method must be 'zv' or 'timeopt'") from None
    cycle = _num("bench", "controller_cycle", bench.get("controller_cycle", "400e-6"))
    try:
        opt = OptimizerConfig(segment_method=method, **opt_kw)
    except ValueError as exc:
        raise ConfigError(f"[optimizer]: {exc}") from None
    return RunConfig(plant, limits, opt, method, cycle)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_config(cfg: RunConfig) -> str:
    """Canonical text form; ``parse_config(dump_config(c)) == c``."""
    r = repr
    lines = ["[plant]"]
    if isinstance(cfg.plant, PlantPhysical):
        lines += [f"{k} = {r(getattr(cfg.plant, k))}" for k in _PHYS_KEYS]
    else:
        lines += [f"{k} = {r(getattr(cfg.plant, k))}" for k in _MODAL_KEYS]
    lines += ["", "[limits]"] + [f"{k} = {r(getattr(cfg.limits, k))}" for k in _LIMIT_KEYS]
    o = cfg.optimizer
    lines += ["", "[optimizer]"] + [f"{k} = {r(getattr(o, k))}" for k in _OPT_FLOATS + _OPT_INTS]
    lines += ["", "[bench]", f"segment_method = {cfg.segment_method.value}",
              f"controller_cycle = {r(cfg.controller_cycle)}"]
    return "\n".join(lines) + "\n"


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(dump_config(cfg).encode("utf-8")).hexdigest()


def preset_config(name: str, method: SegmentMethod | str = SegmentMethod.TIMEOPT) -> RunConfig:
    from .presets import PRESETS

    try:
        p = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    m = SegmentMethod(method)
    return RunConfig(p.plant, p.limits, OptimizerConfig(segment_method=m), m)
