"""Tests for the reverse-mode engine in bilat.policy.autograd."""

import numpy as np
import pytest

from bilat.policy.autograd import Tensor, concat, layer_norm, no_grad, unfold2d


def numeric_gradient(f, x: Tensor, eps: float = 1e-6) -> np.ndarray:
    grad = np.zeros_like(x.data)
    for index in np.ndindex(x.shape):
        saved = x.data[index]
        x.data[index] = saved + eps
        upper = float(f().data)
        x.data[index] = saved - eps
        lower = float(f().data)
        x.data[index] = saved
        grad[index] = (upper - lower) / (2 * eps)
    return grad


def check_gradient(f, *inputs: Tensor, tolerance: float = 1e-6) -> None:
    for x in inputs:
        x.zero_grad()
    f().backward()
    analytic = [x.grad.copy() for x in inputs]
    for x, grad in zip(inputs, analytic):
        np.testing.assert_allclose(grad, numeric_gradient(f, x), rtol=tolerance, atol=tolerance)


def test_broadcast_gradients_are_summed(rng):
    a = Tensor(rng.standard_normal((2, 3)), requires_grad=True)
    b = Tensor(rng.standard_normal(3), requires_grad=True)
    (a * b).sum().backward()
    np.testing.assert_allclose(a.grad, np.broadcast_to(b.data, (2, 3)))
    np.testing.assert_allclose(b.grad, a.data.sum(axis=0))


def test_reused_inputs_accumulate():
    x = Tensor(np.array([1.0, -2.0, 3.0]), requires_grad=True)
    (x * x + x).sum().backward()
    assert x.grad.tolist() == [3.0, -3.0, 7.0]


def test_repeated_indices_accumulate():
    x = Tensor(np.arange(3.0), requires_grad=True)
    x[[0, 0, 1]].sum().backward()
    assert x.grad.tolist() == [2.0, 1.0, 0.0]


def test_arithmetic_matches_finite_differences(rng):
    a = Tensor(rng.uniform(0.5, 1.5, (2, 3)), requires_grad=True)
    b = Tensor(rng.uniform(0.5, 1.5, (3, 4)), requires_grad=True)
    weights = rng.standard_normal((2, 4))
    check_gradient(lambda: (((a @ b) / (a.sum() + 1.0)).exp() * weights).sum(), a, b)
    check_gradient(lambda: (a - 2.0).abs().log().mean(), a)


def test_softmax_and_transpose(rng):
    x = Tensor(rng.standard_normal((2, 3, 4)), requires_grad=True)
    weights = rng.standard_normal((4, 3, 2))
    check_gradient(lambda: (x.softmax(axis=-1).transpose(2, 1, 0) * weights).sum(), x)


def test_layer_norm(rng):
    x = Tensor(rng.standard_normal((3, 5)), requires_grad=True)
    gain = Tensor(rng.uniform(0.5, 1.5, 5), requires_grad=True)
    bias = Tensor(rng.standard_normal(5), requires_grad=True)
    weights = rng.standard_normal((3, 5))
    check_gradient(lambda: (layer_norm(x, gain, bias) * weights).sum(), x, gain, bias)


def test_unfold(rng):
    x = Tensor(rng.standard_normal((1, 5, 5, 2)), requires_grad=True)
    out = unfold2d(x, 3, 2, 1)
    assert out.shape == (1, 3, 3, 18)
    # the centre patch of a stride-2, pad-1 unfold starts at row 1, column 1
    np.testing.assert_array_equal(out.data[0, 1, 1].reshape(3, 3, 2), x.data[0, 1:4, 1:4])
    weights = rng.standard_normal(out.shape)
    check_gradient(lambda: (unfold2d(x, 3, 2, 1) * weights).sum(), x)


def test_concat_splits_the_gradient(rng):
    a = Tensor(rng.standard_normal((2, 1)), requires_grad=True)
    b = Tensor(rng.standard_normal((2, 3)), requires_grad=True)
    weights = np.arange(8.0).reshape(2, 4)
    (concat([a, b], axis=1) * weights).sum().backward()
    np.testing.assert_array_equal(a.grad, weights[:, :1])
    np.testing.assert_array_equal(b.grad, weights[:, 1:])


def test_relu_masks_negative_inputs():
    x = Tensor(np.array([-1.0, 0.5, 2.0]), requires_grad=True)
    x.relu().sum().backward()
    assert x.grad.tolist() == [0.0, 1.0, 1.0]


def test_no_grad_builds_no_graph():
    x = Tensor(np.ones(3), requires_grad=True)
    with no_grad():
        y = (x * 2.0).sum()
    assert not y.requires_grad
    assert (x * 2.0).requires_grad


def test_backward_needs_a_scalar():
    x = Tensor(np.ones(3), requires_grad=True)
    with pytest.raises(ValueError, match="scalar"):
        (x * 2.0).backward()
