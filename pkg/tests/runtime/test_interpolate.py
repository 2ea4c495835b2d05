"""Tests for bilat.runtime.interpolate."""

import numpy as np
import pytest

from bilat.runtime import interpolate_to_control_rate


def test_angles_and_velocities_are_linear_torques_hold():
    previous = np.array([1.0, 0.0, 0.2, 2.0, 1.0, -0.1])
    following = np.array([2.0, 1.0, 0.6, 0.0, 3.0, 0.3])
    result = interpolate_to_control_rate(previous, following, 0.5)
    assert result.tolist() == pytest.approx([1.5, 0.5, 0.2, 1.0, 2.0, -0.1])
    np.testing.assert_array_equal(interpolate_to_control_rate(previous, following, 0.0), previous)


def test_works_on_arm_joint_triples():
    previous = np.zeros((2, 3, 3))
    following = np.ones((2, 3, 3))
    result = interpolate_to_control_rate(previous, following, 0.25)
    assert result.shape == (2, 3, 3)
    assert result[1, 2].tolist() == [0.25, 0.25, 0.0]


@pytest.mark.parametrize("phase", [-0.1, 1.0])
def test_phase_range(phase):
    with pytest.raises(ValueError, match="outside"):
        interpolate_to_control_rate(np.zeros(3), np.zeros(3), phase)


def test_shapes_must_be_triples_and_agree():
    with pytest.raises(ValueError, match="differ in shape"):
        interpolate_to_control_rate(np.zeros(3), np.zeros(6), 0.5)
    with pytest.raises(ValueError, match="triples"):
        interpolate_to_control_rate(np.zeros(4), np.zeros(4), 0.5)
