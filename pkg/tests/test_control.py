import cmath
import math
import time

import numpy as np
import pytest

from qsense.control import (ParamHamiltonian, EigenframeTrace, ControlHamiltonian, eigenframe_track, gauge_fix,
                            control_hamiltonian, controlled_qsl, branch_phases, equal_weight_probe,
                            simulate_controlled, controlled_crossing_time)
from qsense.errors import Degenerate, INFEASIBLE
from qsense.pauli import PauliHamiltonian, propagate_td
from qsense.scenarios import RotatingScenario, rotating_param_hamiltonian, K_TRACE_START

OMEGA, EPSILON = 1.0, 0.1


@pytest.fixture
def rotating_omega():
    return rotating_param_hamiltonian(RotatingScenario(OMEGA, EPSILON, "omega"))


@pytest.fixture
def rotating_k():
    return rotating_param_hamiltonian(RotatingScenario(OMEGA, EPSILON, "k"))


@pytest.fixture
def omega_trace(rotating_omega):
    return eigenframe_track(rotating_omega, OMEGA, np.linspace(0.0, 12.0, 121))


def overlap(a, b):
    return np.vdot(a.vector, b.vector)


def test_rotating_field_eigenvalues(omega_trace):
    np.testing.assert_allclose(omega_trace.mu_max, 0.5, atol=1e-14)
    np.testing.assert_allclose(omega_trace.mu_min, -0.5, atol=1e-14)


def test_k_parameter_eigenvalues(rotating_k):
    grid = np.linspace(K_TRACE_START, 10.0, 101)
    trace = eigenframe_track(rotating_k, EPSILON * OMEGA, grid)
    np.testing.assert_allclose(trace.mu_max, OMEGA * grid / 2, rtol=1e-12)
    np.testing.assert_allclose(trace.mu_min, -OMEGA * grid / 2, rtol=1e-12)


def test_finite_difference_derivative_matches_analytic(rotating_omega):
    numeric = ParamHamiltonian(rotating_omega.sampler)
    for t in (0.0, 1.3, 7.7):
        assert numeric.derivative(OMEGA, t) == pytest.approx(rotating_omega.derivative(OMEGA, t), abs=1e-8)


def test_constant_derivative_is_degenerate():
    ph = ParamHamiltonian(lambda omega, t: PauliHamiltonian(az=1.0))
    with pytest.raises(Degenerate):
        eigenframe_track(ph, 1.0, np.linspace(0.0, 1.0, 5))


def test_grid_validation(rotating_omega):
    with pytest.raises(ValueError):
        eigenframe_track(rotating_omega, OMEGA, [0.0])
    with pytest.raises(ValueError):
        eigenframe_track(rotating_omega, OMEGA, [0.0, 2.0, 1.0])


def test_coarse_grid_loses_the_branch():
    # the axis turns by pi between samples
    ph = ParamHamiltonian(lambda omega, t: PauliHamiltonian(az=omega * math.cos(t)),
                          lambda omega, t: PauliHamiltonian(0.0, math.sin(t), 0.0, math.cos(t)))
    with pytest.raises(Degenerate):
        eigenframe_track(ph, 1.0, [0.0, math.pi])


def test_frames_are_orthonormal_and_transported(omega_trace):
    for (v_max, v_min) in omega_trace.frames:
        assert abs(overlap(v_max, v_max) - 1) < 1e-10
        assert abs(overlap(v_max, v_min)) < 1e-10
    for previous, current in zip(omega_trace.frames[:-1], omega_trace.frames[1:]):
        for a, b in zip(previous, current):
            o = overlap(a, b)
            assert o.real > 0
            assert abs(o.imag) < 1e-12


def test_gauge_fix_removes_arbitrary_phases(omega_trace):
    rng = np.random.default_rng(7)
    scrambled = [(v_max.with_phase(rng.uniform(0, 2 * math.pi)), v_min.with_phase(rng.uniform(0, 2 * math.pi)))
                 for v_max, v_min in omega_trace.frames]
    fixed = gauge_fix(scrambled)
    for (a_max, a_min), (b_max, b_min) in zip(fixed, omega_trace.frames):
        np.testing.assert_allclose(a_max.vector, b_max.vector, atol=1e-12)
        np.testing.assert_allclose(a_min.vector, b_min.vector, atol=1e-12)

    rescrambled = EigenframeTrace(omega_trace.grid, omega_trace.mu_max, omega_trace.mu_min, tuple(fixed))
    np.testing.assert_allclose(equal_weight_probe(rescrambled).vector, equal_weight_probe(omega_trace).vector,
                               atol=1e-12)
    assert controlled_qsl(rescrambled, 1.0, 0.5) == controlled_qsl(omega_trace, 1.0, 0.5)


def test_static_hamiltonian_needs_no_transport():
    ph = ParamHamiltonian(lambda omega, t: PauliHamiltonian(0.1, 0.3 * omega, 0.0, 0.4 * omega),
                          lambda omega, t: PauliHamiltonian(0.0, 0.3, 0.0, 0.4))
    trace = eigenframe_track(ph, 2.0, np.linspace(0.0, 1.0, 11))
    control = control_hamiltonian(ph, trace, 2.0)
    for t in (0.0, 0.5, 1.0):
        assert control(t) == pytest.approx(ph(2.0, t).scaled(-1.0), abs=1e-9)


def test_transport_term_is_hermitian(rotating_omega, omega_trace):
    control = ControlHamiltonian(rotating_omega, omega_trace, OMEGA)
    for t in omega_trace.grid:
        assert control.hermiticity_residual(t) < 1e-8


def test_one_step_transports_the_frame(rotating_omega, omega_trace):
    control = ControlHamiltonian(rotating_omega, omega_trace, OMEGA)
    deviation = 0.05
    sampler = lambda t: rotating_omega(OMEGA + deviation, t).plus(control(t))
    for i in (0, 40, 119):
        t0, t1 = omega_trace.grid[i], omega_trace.grid[i + 1]
        for branch, mu in ((0, 0.5), (1, -0.5)):
            moved = propagate_td(sampler, t0, t1, omega_trace.frames[i][branch])
            expected = cmath.exp(-1j * mu * deviation * (t1 - t0))
            assert overlap(omega_trace.frames[i + 1][branch], moved) == pytest.approx(expected, abs=1e-8)


def test_control_outside_window(rotating_omega, omega_trace):
    with pytest.raises(ValueError):
        ControlHamiltonian(rotating_omega, omega_trace, OMEGA)(12.5)


def test_controlled_qsl_omega_parameter(omega_trace):
    bound = controlled_qsl(omega_trace, OMEGA, 0.5)
    assert bound.tau_mt == pytest.approx(math.pi / 2, abs=1e-12)
    assert bound.tau_ml == pytest.approx(math.pi / 4, abs=1e-12)
    assert bound.tau_ml <= bound.tau_mt


def test_controlled_qsl_k_parameter(rotating_k):
    trace = eigenframe_track(rotating_k, EPSILON * OMEGA, np.linspace(K_TRACE_START, 10.0, 1001))
    bound = controlled_qsl(trace, EPSILON * OMEGA, 0.5)
    assert bound.tau_mt == pytest.approx(math.sqrt(math.pi / 0.1), abs=1e-5)
    assert bound.tau_mt == pytest.approx(5.60499, abs=1e-5)
    assert bound.tau_ml <= bound.tau_mt


def test_controlled_qsl_edges(omega_trace):
    assert controlled_qsl(omega_trace, OMEGA, 1.0)[:2] == (0.0, 0.0)
    # a weak signal does not reach F0 within the window
    assert controlled_qsl(omega_trace, 0.01, 0.5).tau_mt is INFEASIBLE
    with pytest.raises(ValueError):
        controlled_qsl(omega_trace, 0.0, 0.5)


def test_branch_phases(omega_trace):
    phase_max, phase_min = branch_phases(omega_trace, 0.05, 8.0)
    assert phase_max == pytest.approx(0.05 * 0.5 * 8.0, abs=1e-14)
    assert phase_min == pytest.approx(-0.05 * 0.5 * 8.0, abs=1e-14)


def test_branch_phases_are_additive(rotating_k):
    trace = eigenframe_track(rotating_k, EPSILON * OMEGA, np.linspace(K_TRACE_START, 10.0, 57))
    whole = branch_phases(trace, 0.3, 9.1, 0.4)
    first = branch_phases(trace, 0.3, 3.77, 0.4)
    second = branch_phases(trace, 0.3, 9.1, 3.77)
    for total, a, b in zip(whole, first, second):
        assert total == pytest.approx(a + b, abs=1e-9)


def test_simulation_follows_phase_law(rotating_omega):
    trace = eigenframe_track(rotating_omega, OMEGA, np.linspace(0.0, 10.0, 101))
    simulation = simulate_controlled(rotating_omega, 1.05, OMEGA, trace, 10.0, 100)
    expected = np.cos(0.05 * simulation.times / 2) ** 2
    np.testing.assert_allclose(simulation.fidelity, expected, atol=1e-6)
    assert simulation.fidelity[-1] == pytest.approx(math.cos(0.25) ** 2, abs=1e-6)


def test_simulation_without_signal(rotating_omega):
    trace = eigenframe_track(rotating_omega, OMEGA, np.linspace(0.0, 3.0, 31))
    simulation = simulate_controlled(rotating_omega, OMEGA, OMEGA, trace, 3.0, 30)
    np.testing.assert_allclose(simulation.fidelity, 1.0, atol=1e-9)
    assert controlled_crossing_time(simulation, rotating_omega, OMEGA, OMEGA, trace, 0.5) is INFEASIBLE


def test_simulated_crossing_saturates_the_bound(rotating_omega):
    deviation = 0.05
    trace = eigenframe_track(rotating_omega, OMEGA, np.linspace(0.0, 35.0, 351))
    simulation = simulate_controlled(rotating_omega, OMEGA + deviation, OMEGA, trace, 35.0, 350)
    crossing = controlled_crossing_time(simulation, rotating_omega, OMEGA + deviation, OMEGA, trace, 0.5)
    bound = controlled_qsl(trace, deviation, 0.5)
    assert crossing == pytest.approx(bound.tau_mt, rel=1e-6)
    assert bound.tau_mt == pytest.approx(10 * math.pi, rel=1e-12)


def test_simulation_validates_window(rotating_omega, omega_trace):
    with pytest.raises(ValueError):
        simulate_controlled(rotating_omega, 1.05, OMEGA, omega_trace, 20.0, 10)
    with pytest.raises(ValueError):
        simulate_controlled(rotating_omega, 1.05, OMEGA, omega_trace, 5.0, 0)


def test_control_is_shared_between_samplers(rotating_omega, omega_trace):
    control = ControlHamiltonian(rotating_omega, omega_trace, OMEGA)
    first = control(3.25)
    assert control(np.float64(3.25)) is first
    assert control.hermiticity_residual(12.0) < 1e-8


def test_simulation_of_ten_thousand_steps(rotating_omega):
    trace = eigenframe_track(rotating_omega, OMEGA, np.linspace(0.0, 10.0, 10001))
    started = time.perf_counter()
    simulation = simulate_controlled(rotating_omega, 1.05, OMEGA, trace, 10.0, 10000)
    elapsed = time.perf_counter() - started
    assert simulation.fidelity[-1] == pytest.approx(math.cos(0.25) ** 2, abs=1e-6)
    assert elapsed < 10.0


def k_target_crossing_error(rotating_k, deviation, horizon):
    k_c = EPSILON * OMEGA
    steps = int(round(horizon * 10))
    trace = eigenframe_track(rotating_k, k_c, np.linspace(K_TRACE_START, horizon, steps + 1))
    simulation = simulate_controlled(rotating_k, k_c + deviation, k_c, trace, horizon, steps)
    crossing = controlled_crossing_time(simulation, rotating_k, k_c + deviation, k_c, trace, 0.5)
    bound = controlled_qsl(trace, deviation, 0.5)
    assert bound.tau_mt == pytest.approx(math.sqrt(math.pi / (OMEGA * deviation)), rel=1e-4)
    return abs(crossing - bound.tau_mt) / bound.tau_mt


def test_k_target_saturation_is_first_order(rotating_k):
    # d2H/dk2 is not compensated, its effect on the crossing grows linearly with the deviation
    coarse = k_target_crossing_error(rotating_k, 0.005, 27.0)
    fine = k_target_crossing_error(rotating_k, 0.0025, 37.0)
    assert coarse < 2e-3
    assert fine < coarse
    assert coarse / fine == pytest.approx(2.0, rel=0.25)
