"""Tests for bilat.sim.contact."""

import pytest

from bilat.sim.contact import ContactObject, SpongeCoupling, contact_torque, sponge_coupling_torques


def _cup(**overrides) -> ContactObject:
    fields = {"engage_angle": 2.40, "stiffness": 2.0, "crush_deformation": 0.45}
    fields.update(overrides)
    return ContactObject(**fields)


def test_open_gripper_feels_nothing():
    cup = _cup()
    assert contact_torque(cup, 2.30, 0.5) == 0.0
    assert contact_torque(cup, 2.40, 0.5) == 0.0


def test_linear_spring_torque():
    assert contact_torque(_cup(), 2.45, 0.0) == pytest.approx(-0.10)


def test_quadratic_and_damping_terms():
    cup = _cup(quadratic_stiffness=8.0, damping=0.05)
    # x = 0.1: 2 * 0.1 + 8 * 0.01 + 0.05 * 0.2
    assert contact_torque(cup, 2.50, 0.2) == pytest.approx(-0.29)


def test_torque_is_continuous_at_engagement():
    cup = _cup(quadratic_stiffness=8.0)
    assert contact_torque(cup, 2.40 + 1e-9, 0.0) == pytest.approx(0.0, abs=1e-8)


def test_torque_is_never_positive():
    cup = _cup(damping=1.0)
    assert contact_torque(cup, 2.41, -1.0) == 0.0


def test_crush_latches():
    cup = _cup()
    contact_torque(cup, 2.40 + 0.44, 0.0)
    assert not cup.crushed
    contact_torque(cup, 2.40 + 0.46, 0.0)
    assert cup.crushed
    contact_torque(cup, 2.30, 0.0)
    assert cup.crushed


def test_equilibrium_angle_balances_the_static_torque():
    linear = _cup()
    assert linear.equilibrium_angle(0.1) == pytest.approx(2.45)
    assert linear.equilibrium_angle(0.0) == 2.40
    quadratic = _cup(quadratic_stiffness=8.0)
    angle = quadratic.equilibrium_angle(0.05)
    assert -contact_torque(quadratic, angle, 0.0) == pytest.approx(0.05)


def test_sponge_coupling_idle_at_rest_twist():
    coupling = SpongeCoupling(torsional_stiffness=1.0, slip_coefficient=1.0)
    assert sponge_coupling_torques(coupling, (0.1, 0.0), (0.1, 0.0), (0.5, 0.5)) == (0.0, 0.0)


def test_sponge_coupling_spring():
    coupling = SpongeCoupling(torsional_stiffness=1.0, slip_coefficient=1.0)
    left, right = sponge_coupling_torques(coupling, (0.1, 0.0), (-0.1, 0.0), (0.5, 0.5))
    assert left == pytest.approx(-0.2)
    assert right == pytest.approx(0.2)
    assert not coupling.slipped


def test_sponge_coupling_slips_past_the_weaker_grip():
    coupling = SpongeCoupling(torsional_stiffness=1.0, slip_coefficient=1.0)
    left, right = sponge_coupling_torques(coupling, (0.1, 0.0), (-0.1, 0.0), (0.1, 0.3))
    assert coupling.slipped
    assert left == pytest.approx(-0.1)
    assert right == pytest.approx(0.1)
    sponge_coupling_torques(coupling, (0.0, 0.0), (0.0, 0.0), (0.5, 0.5))
    assert coupling.slipped


def test_sponge_coupling_needs_both_grips():
    coupling = SpongeCoupling(torsional_stiffness=1.0, slip_coefficient=1.0)
    assert sponge_coupling_torques(coupling, (0.5, 0.0), (-0.5, 0.0), (0.5, 0.0)) == (0.0, 0.0)
    assert not coupling.slipped
