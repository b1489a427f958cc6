import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jerkplan.model import JerkProfile, KinematicLimits, PlantModal, eval_kinematics
from jerkplan.segment import (
    JerkSegment,
    SegmentDesignError,
    SegmentMethod,
    SegmentSpec,
    design_timeopt_segment,
    design_zv_segment,
    precompute_family,
    segment_residual,
    zv_amplitudes,
)

from oracles import segment_grid_bracket


def _spec(preset, a_start, a_end, a_max=None, j=None):
    lim = preset.limits
    a_max = a_max if a_max is not None else lim.a_lim
    return SegmentSpec(a_start, a_end, j if j is not None else lim.j_lim, a_max, preset.modal)


def _check_segment(seg: JerkSegment, spec: SegmentSpec):
    prof = seg.profile
    assert prof.acc0 == spec.a_start
    end = eval_kinematics(prof, seg.t_f)
    assert end.acc == pytest.approx(spec.a_end, abs=1e-12 * spec.a_max)
    assert end.jerk == pytest.approx(0.0, abs=1e-9 * spec.j_lim)
    assert prof.t_end == pytest.approx(seg.t_f, abs=1e-15)
    jerk = 0.0
    for _, a in prof.steps:
        jerk += a
        assert abs(jerk) <= spec.j_lim * (1 + 1e-12)
    m = spec.modal
    scale = m.m_star * abs(spec.delta_a) / m.omega0 ** 2
    assert segment_residual(seg, m) <= 1e-9 * scale


def test_spec_validation(expap):
    m = expap.modal
    with pytest.raises(ValueError):
        SegmentSpec(0.0, 0.0, 800.0, 20.0, m)
    with pytest.raises(ValueError):
        SegmentSpec(0.0, 10.0, 800.0, 20.0, m)
    with pytest.raises(ValueError):
        SegmentSpec(0.0, 20.0, -1.0, 20.0, m)


def test_zv_amplitudes_undamped():
    assert zv_amplitudes(PlantModal(10.0, 0.0, 0.1)) == (0.5, 0.5)


def test_zv_segment_undamped_symmetry():
    m = PlantModal(10.0, 0.0, 0.1)
    seg = design_zv_segment(SegmentSpec(0.0, 2.0, 10.0, 2.0, m))
    assert seg.profile.steps == ((0.0, 5.0), (0.2, -5.0), (math.pi / 10.0, 5.0),
                                 (0.2 + math.pi / 10.0, -5.0))


def test_zv_segment_expap(expap):
    m = expap.modal
    spec = _spec(expap, 0.0, 20.0)
    seg = design_zv_segment(spec)
    K = math.exp(-m.delta * math.pi / m.omega_d)
    a1, a2 = zv_amplitudes(m)
    assert a1 == pytest.approx(1 / (1 + K), rel=1e-15) and a2 == pytest.approx(K / (1 + K), rel=1e-15)
    assert m.half_period == pytest.approx(1 / (2 * 26.8914), rel=1e-5)
    assert m.half_period == pytest.approx(18.59e-3, abs=5e-6)
    assert seg.t_f == pytest.approx(20.0 / 800.0 + m.half_period, rel=1e-15)
    _check_segment(seg, spec)


@pytest.mark.parametrize("name", ["expap", "lab", "yal"])
@pytest.mark.parametrize("ends", [(0, 1), (1, -1), (-1, 0), (0, -1), (-1, 1), (1, 0)])
def test_both_methods_rest_to_rest(request, name, ends):
    preset = request.getfixturevalue(name)
    a = preset.limits.a_lim
    spec = _spec(preset, ends[0] * a, ends[1] * a)
    zv = design_zv_segment(spec)
    to = design_timeopt_segment(spec)
    _check_segment(zv, spec)
    _check_segment(to, spec)
    assert to.t_f <= zv.t_f
    assert all(abs(abs(x) - spec.j_lim) < 1e-9 * spec.j_lim or abs(x) < 1e-9 * spec.j_lim
               for x in _jerk_levels(to.profile))


def _jerk_levels(prof):
    out, j = [], 0.0
    for _, a in prof.steps:
        j += a
        out.append(j)
    return out


def test_timeopt_beats_zv_expap(expap):
    spec = _spec(expap, 0.0, 20.0)
    to = design_timeopt_segment(spec)
    zv = design_zv_segment(spec)
    assert to.t_f < zv.t_f
    assert to.t_f == pytest.approx(0.0310048, abs=1e-7)


def test_timeopt_bracketed_by_grid_oracle(expap):
    m = expap.modal
    spec = _spec(expap, 0.0, 20.0)
    seg = design_timeopt_segment(spec)
    D = 20.0 / 800.0
    lo = segment_grid_bracket(D, m.delta, m.omega_d, D + m.half_period, h=1e-5)
    assert lo <= seg.t_f <= lo + 1e-5 + 1e-12


def test_timeopt_rigid_limit():
    # huge omega0: nothing to cancel, the plain ramp is (almost) optimal
    m = PlantModal(1e6, 1.0, 0.1)
    seg = design_timeopt_segment(SegmentSpec(0.0, 20.0, 800.0, 20.0, m))
    assert seg.t_f == pytest.approx(20.0 / 800.0, abs=2 * math.pi / m.omega_d)


def test_timeopt_monotone_in_jerk(expap):
    ts = [design_timeopt_segment(_spec(expap, 0.0, 20.0, j=j)).t_f for j in (400.0, 800.0, 1600.0)]
    assert ts[0] >= ts[1] >= ts[2]


def test_timeopt_respects_acc_bound(expap):
    spec = _spec(expap, 0.0, 20.0)
    seg = design_timeopt_segment(spec)
    accs = [eval_kinematics(seg.profile, t).acc for t, _ in seg.profile.steps]
    assert max(abs(a) for a in accs) <= 20.0 * (1 + 1e-9)


def test_timeopt_failure_reported(monkeypatch, expap):
    from jerkplan import segment

    monkeypatch.setattr(segment.kernels, "segment_roots", lambda *a, **k: [])
    with pytest.raises(SegmentDesignError):
        design_timeopt_segment(_spec(expap, 0.0, 20.0))
    segment.family_cache_clear()
    try:
        fam = precompute_family(19.0, expap.limits, expap.modal, "timeopt")
        assert fam.seg1.method is SegmentMethod.ZV and fam.seg2.method is SegmentMethod.ZV
    finally:
        segment.family_cache_clear()


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(0, 1), (1, -1), (-1, 0)]), st.floats(2.0, 20.0))
def test_sign_flip_closure(ends, a_max):
    from jerkplan.presets import EX_PAP

    spec = SegmentSpec(ends[0] * a_max, ends[1] * a_max, 800.0, a_max, EX_PAP.modal)
    seg = design_timeopt_segment(spec)
    flipped = JerkProfile(tuple((t, -a) for t, a in seg.profile.steps), acc0=-spec.a_start)
    spec_f = SegmentSpec(-spec.a_start, -spec.a_end, 800.0, a_max, EX_PAP.modal)
    end = eval_kinematics(flipped, seg.t_f)
    assert end.acc == pytest.approx(spec_f.a_end, abs=1e-12 * a_max)
    assert end.v == pytest.approx(-seg.v_f, rel=1e-12, abs=1e-15)
    assert end.z == pytest.approx(-seg.s_f, rel=1e-12, abs=1e-15)
    fseg = JerkSegment(flipped, seg.t_f, end.z, end.v, seg.method)
    _check_segment(fseg, spec_f)


class TestFamily:
    def test_zv_family_durations(self, expap):
        fam = precompute_family(20.0, expap.limits, expap.modal, "zv")
        h = expap.modal.half_period
        assert fam.t_f1 == pytest.approx(20.0 / 800.0 + h, rel=1e-15)
        assert fam.t_f2 == pytest.approx(40.0 / 800.0 + h, rel=1e-15)

    @pytest.mark.parametrize("name", ["expap", "lab", "yal"])
    @pytest.mark.parametrize("method", ["zv", "timeopt"])
    def test_family_invariants(self, request, name, method):
        preset = request.getfixturevalue(name)
        a = preset.limits.a_lim
        fam = precompute_family(a, preset.limits, preset.modal, method)
        assert fam.t_f3 == pytest.approx(fam.t_f1, rel=1e-14)
        assert fam.v_f3 > 0
        e2 = eval_kinematics(fam.seg2.profile, fam.t_f2)
        assert e2.acc == pytest.approx(-a, rel=1e-12)
        # seg2 spans 2 a_max
        assert fam.seg2.profile.acc0 - e2.acc == pytest.approx(2 * a, rel=1e-12)
        assert eval_kinematics(fam.seg3.profile, fam.t_f3).v == pytest.approx(-fam.v_f3)

    def test_family_is_cached(self, expap):
        f1 = precompute_family(12.5, expap.limits, expap.modal)
        f2 = precompute_family(12.5, expap.limits, expap.modal, SegmentMethod.TIMEOPT)
        assert f1 is f2

    def test_family_rejects_amax_above_limit(self, expap):
        with pytest.raises(ValueError):
            precompute_family(21.0, expap.limits, expap.modal)
