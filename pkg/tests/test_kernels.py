import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jerkplan import _kernels_py as py
from jerkplan import kernels

cy = pytest.importorskip("jerkplan._kernels", reason="compiled extension not built")


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    assert cy.BACKEND == "cython" and py.BACKEND == "python"


steps_st = st.lists(st.tuples(st.floats(0.0, 1.0), st.floats(-50.0, 50.0)), max_size=10)


def _arrays(steps):
    steps = sorted(steps)
    return (np.array([t for t, _ in steps], dtype=float),
            np.array([a for _, a in steps], dtype=float))


@settings(max_examples=40, deadline=None)
@given(steps_st, st.floats(0.0, 1.5))
def test_kin_eval_parity(steps, t):
    ts, am = _arrays(steps)
    assert cy.kin_eval(ts, am, 0.1, -0.2, 0.3, t) == pytest.approx(
        py.kin_eval(ts, am, 0.1, -0.2, 0.3, t), rel=1e-12, abs=1e-12)
    tq = np.linspace(0.0, 1.5, 17)
    np.testing.assert_allclose(cy.kin_eval_many(ts, am, 0.0, 0.0, 0.0, tq),
                               py.kin_eval_many(ts, am, 0.0, 0.0, 0.0, tq), rtol=1e-12, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(steps_st, st.floats(0.0, 1.5))
def test_osc_parity(steps, t):
    ts, am = _arrays(steps)
    args = (ts, am, 0.5, 169.0, 4.76, 168.9, 0.05, 1e-3, -0.02)
    a = cy.osc_propagate(*args, t)
    b = py.osc_propagate(*args, t)
    assert a == pytest.approx(b, rel=1e-10, abs=1e-15)
    tq = np.linspace(0.0, 1.5, 9)
    np.testing.assert_allclose(cy.osc_propagate_many(*args, tq), py.osc_propagate_many(*args, tq),
                               rtol=1e-10, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(steps_st)
def test_residual_and_peaks_parity(steps):
    ts, am = _arrays(steps)
    assert cy.modal_residual(ts, am, 2.0, 40.0) == pytest.approx(
        py.modal_residual(ts, am, 2.0, 40.0), rel=1e-12, abs=1e-12)
    assert cy.profile_peaks(ts, am, 0.1, -0.3) == pytest.approx(
        py.profile_peaks(ts, am, 0.1, -0.3), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("kind", [2, 3])
@pytest.mark.parametrize("D,delta,wd", [(0.025, 4.762, 168.96), (0.03, 0.799, 61.0), (0.2, 0.0, 40.0)])
def test_segment_roots_parity(kind, D, delta, wd):
    t_hi = D + np.pi / wd
    a = sorted(cy.segment_roots(kind, D, delta, wd, t_hi, 256))
    b = sorted(py.segment_roots(kind, D, delta, wd, t_hi, 256))
    assert len(a) == len(b)
    for ra, rb in zip(a, b):
        assert ra == pytest.approx(rb, rel=1e-10, abs=1e-13)
