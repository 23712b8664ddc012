"""Smoke tests for the python bindings: system construction, set building,
membership, a short governed run, and the LP entry point."""

import numpy as np
import rgdc


def scalar_system():
    a = np.array([[0.5]])
    b = np.array([[0.5]])
    c = np.array([[1.0]])
    d = np.array([[0.0]])
    return rgdc.DiscreteLtiSystem(A=a, B=b, C_tr=c, C_st=c, D_st=d, Ts=1.0)


def test_make_pll_basics():
    sys = rgdc.make_pll(100.0, 200.0, 1e-4)
    assert sys.order() == 2
    assert sys.static_output_count() == 1
    assert 0.99 < sys.spectral_radius() < 1.0
    assert abs(sys.equilibrium_gain() - 1.0) < 1e-9
    x_eq = sys.equilibrium_state(0.7)
    assert x_eq.shape == (2,)
    assert abs(float(sys.C_tr @ x_eq) - 0.7) < 1e-9


def test_static_mas_membership():
    sys = scalar_system()
    bound = rgdc.ConstraintSet(S=np.array([[1.0], [-1.0]]),
                               s=np.array([1.0, 1.0]))
    rep = rgdc.build_static_mas(sys, bound, 1e-3)
    assert rep.orientation == rgdc.Orientation.less_equal
    assert rep.rows() >= 2
    assert rep.admissibility_index >= 0
    assert rgdc.contains(rep, np.array([0.0]), 0.0)
    assert not rgdc.contains(rep, np.array([5.0]), 0.0)


def test_governed_step_has_no_overshoot():
    sys = scalar_system()
    pair = rgdc.build_dynamic_mas_pair(sys, 1e-3)
    assert pair.rep_minus.admissibility_index == pair.rep_plus.admissibility_index

    rep, orientation, scale, case = rgdc.select_dynamic_mas(pair, 1.0, 0.0)
    assert case == 1
    assert scale == 1.0
    assert orientation == rgdc.Orientation.less_equal

    state = rgdc.GovernorState(pair, v0=0.0, epsilon=1e-3)
    ref = rgdc.ReferenceSignal.step_sequence([(0.0, 1.0)])
    trace = rgdc.simulate(sys, state, ref, np.zeros(1), 200)
    assert trace.size() == 200
    overshoot, zero_ref = rgdc.overshoot_metric(trace, 1.0)
    assert not zero_ref
    assert overshoot <= 1e-8
    assert abs(trace.v[-1] - 0.999) < 1e-6
    assert abs(trace.y_tr[-1] - 0.999) < 1e-3


def test_govern_step_mutates_state():
    sys = scalar_system()
    pair = rgdc.build_dynamic_mas_pair(sys, 1e-3)
    state = rgdc.GovernorState(pair)
    decision = rgdc.govern_step(state, np.zeros(1), 0.5, 0.0)
    assert 0.0 <= decision.kappa_star <= 1.0
    assert decision.feasible
    assert state.v_prev == decision.v


def test_solve_lp():
    res = rgdc.solve_lp(np.array([1.0, 1.0]),
                        np.array([[1.0, 0.0], [0.0, 1.0]]),
                        np.array([1.0, 2.0]))
    assert res.status == rgdc.LpStatus.optimal
    assert abs(res.objective_value - 3.0) < 1e-9
    assert np.allclose(res.optimizer, [1.0, 2.0], atol=1e-9)
