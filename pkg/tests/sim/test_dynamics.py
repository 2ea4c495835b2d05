"""Tests for bilat.sim.dynamics and the plant parameter types."""

import numpy as np
import pytest
from pydantic import ValidationError

from bilat.sim.dynamics import friction_and_gravity, step_dynamics
from bilat.sim.errors import NonFiniteStateError
from bilat.sim.params import ArmParams, ArmState, JointParams


def _single(**joint) -> ArmParams:
    return ArmParams(joints=(JointParams(**joint),))


def test_rest_without_torque_stays_at_rest():
    params = _single(inertia=0.1)
    state = ArmState.at_rest([0.0])
    nxt = step_dynamics(state, params, [0.0], [0.0], 1e-3)
    assert nxt.angle[0] == 0.0
    assert nxt.velocity[0] == 0.0


def test_constant_torque_semi_implicit_euler():
    params = _single(inertia=0.1)
    nxt = step_dynamics(ArmState.at_rest([0.0]), params, [0.1], [0.0], 1e-3)
    assert nxt.velocity[0] == pytest.approx(1e-3)
    assert nxt.angle[0] == pytest.approx(1e-6)


def test_external_torque_is_recorded_and_adds_to_motor():
    params = _single(inertia=0.1)
    nxt = step_dynamics(ArmState.at_rest([0.0]), params, [0.05], [0.05], 1e-3)
    assert nxt.velocity[0] == pytest.approx(1e-3)
    assert nxt.external_torque[0] == 0.05


def test_motor_torque_is_clamped_to_limit():
    params = _single(inertia=0.1, torque_limit=0.5)
    start = ArmState.at_rest([0.0])
    clamped = step_dynamics(start, params, [2.0], [0.0], 1e-3)
    at_limit = step_dynamics(start, params, [0.5], [0.0], 1e-3)
    assert clamped == at_limit
    negative = step_dynamics(start, params, [-7.0], [0.0], 1e-3)
    assert negative.velocity[0] == pytest.approx(-at_limit.velocity[0])


def test_gravity_pulls_down_at_zero_angle():
    params = _single(inertia=0.1, gravity=0.3)
    nxt = step_dynamics(ArmState.at_rest([0.0]), params, [0.0], [0.0], 1e-3)
    assert nxt.velocity[0] == pytest.approx(-0.3 / 0.1 * 1e-3)


def test_friction_and_gravity_terms():
    params = _single(inertia=0.1, viscous_friction=0.02, coulomb_friction=0.005, gravity=0.3)
    drag = friction_and_gravity(params, np.array([np.pi / 2]), np.array([1.0]))
    assert drag[0] == pytest.approx(0.02 + 0.005 * np.tanh(1000.0) + 0.3 * np.cos(np.pi / 2))


def test_kinetic_energy_never_increases_without_torque():
    params = ArmParams(joints=(
        JointParams(inertia=0.1, viscous_friction=0.05, coulomb_friction=0.01),
        JointParams(inertia=0.2, viscous_friction=0.1, coulomb_friction=0.01),
    ))
    state = ArmState(angle=[0.0, 0.0], velocity=[1.0, -2.0], external_torque=[0.0, 0.0])
    energy = float(0.5 * np.sum(params.inertia * state.velocity ** 2))
    for _ in range(500):
        state = step_dynamics(state, params, [0.0, 0.0], [0.0, 0.0], 1e-3)
        current = float(0.5 * np.sum(params.inertia * state.velocity ** 2))
        assert current <= energy + 1e-15
        energy = current


def test_same_inputs_give_bit_identical_states():
    params = _single(inertia=0.05, viscous_friction=0.02, coulomb_friction=0.005, gravity=0.3)
    torques = np.sin(np.arange(200) * 0.05)

    def run():
        state = ArmState.at_rest([0.3])
        for torque in torques:
            state = step_dynamics(state, params, [torque], [0.01], 1e-3)
        return state

    assert run() == run()


def test_non_finite_torque_raises():
    params = _single(inertia=0.1)
    with pytest.raises(NonFiniteStateError, match="motor_torque"):
        step_dynamics(ArmState.at_rest([0.0]), params, [np.nan], [0.0], 1e-3)
    with pytest.raises(NonFiniteStateError, match="external_torque"):
        step_dynamics(ArmState.at_rest([0.0]), params, [0.0], [np.inf], 1e-3)


def test_invalid_dt_and_joint_count_raise():
    params = _single(inertia=0.1)
    with pytest.raises(ValueError, match="dt must be positive"):
        step_dynamics(ArmState.at_rest([0.0]), params, [0.0], [0.0], 0.0)
    with pytest.raises(ValueError, match="joints"):
        step_dynamics(ArmState.at_rest([0.0, 0.0]), params, [0.0, 0.0], [0.0, 0.0], 1e-3)
    with pytest.raises(ValueError, match="entries"):
        step_dynamics(ArmState.at_rest([0.0]), params, [0.0, 0.0], [0.0], 1e-3)


def test_arm_state_rejects_non_finite_and_ragged_vectors():
    with pytest.raises(ValidationError, match="non-finite"):
        ArmState(angle=[np.nan], velocity=[0.0], external_torque=[0.0])
    with pytest.raises(ValidationError, match="lengths differ"):
        ArmState(angle=[0.0, 1.0], velocity=[0.0], external_torque=[0.0, 0.0])


def test_joint_params_require_positive_inertia():
    with pytest.raises(ValidationError):
        JointParams(inertia=0.0)


def test_scaled_params_multiply_inertia_only():
    params = _single(inertia=0.1, viscous_friction=0.02, gravity=0.3)
    scaled = params.scaled(1.2)
    assert scaled.inertia[0] == pytest.approx(0.12)
    assert scaled.viscous_friction[0] == 0.02
    assert scaled.gravity[0] == 0.3


def test_angles_are_neither_limited_nor_wrapped():
    params = _single(inertia=0.1)
    start = ArmState(angle=np.array([3.14]), velocity=np.array([10.0]), external_torque=np.zeros(1))
    nxt = step_dynamics(start, params, [0.0], [0.0], 1e-3)
    assert nxt.velocity[0] == pytest.approx(10.0)
    assert nxt.angle[0] == pytest.approx(3.15)
