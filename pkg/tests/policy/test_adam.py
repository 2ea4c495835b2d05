"""Tests for bilat.policy.optim.Adam."""

import numpy as np
import pytest

from bilat.policy import Adam, Tensor


def test_first_step_moves_by_the_learning_rate():
    x = Tensor(np.array([1.0, -1.0]), requires_grad=True)
    optimizer = Adam([x], learning_rate=0.1)
    (x * np.array([3.0, 0.5])).sum().backward()
    optimizer.step()
    assert x.data.tolist() == pytest.approx([0.9, -1.1], abs=1e-6)
    assert optimizer.steps == 1


def test_parameters_without_gradients_stay_put():
    x = Tensor(np.array([1.0]), requires_grad=True)
    y = Tensor(np.array([2.0]), requires_grad=True)
    optimizer = Adam([x, y], learning_rate=0.1)
    (x * 2.0).sum().backward()
    optimizer.step()
    assert y.data.tolist() == [2.0]
    optimizer.zero_grad()
    assert x.grad is None


def test_minimizes_a_quadratic():
    x = Tensor(np.array([3.0, -2.0]), requires_grad=True)
    optimizer = Adam([x], learning_rate=0.05)
    for _ in range(500):
        optimizer.zero_grad()
        ((x - 1.0) * (x - 1.0)).sum().backward()
        optimizer.step()
    np.testing.assert_allclose(x.data, [1.0, 1.0], atol=5e-2)
