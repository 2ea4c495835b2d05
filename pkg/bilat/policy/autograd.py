"""Reverse-mode automatic differentiation over numpy arrays.

A Tensor wraps an ndarray; every operation on tensors that require gradients
records a closure that pushes the output gradient back to its inputs. Call
`backward()` on a scalar to fill `.grad` of every leaf that requires it.
"""

import threading
from contextlib import contextmanager

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


_state = threading.local()


def is_grad_enabled() -> bool:
    return getattr(_state, "enabled", True)


@contextmanager
def no_grad():
    """Build no graph inside the block (per thread)."""
    previous = is_grad_enabled()
    _state.enabled = False
    try:
        yield
    finally:
        _state.enabled = previous


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Tensor:
    """An ndarray plus the bookkeeping needed to backpropagate through it."""

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")
    __array_ufunc__ = None

    def __init__(self, data, requires_grad: bool = False, dtype=None):
        self.data = np.asarray(data, dtype=dtype)
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self._parents: tuple["Tensor", ...] = ()
        self._backward = None

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, dtype={self.dtype}, requires_grad={self.requires_grad})"

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def ndim(self) -> int:
        return self.data.ndim

    def numpy(self) -> np.ndarray:
        return self.data

    def zero_grad(self) -> None:
        self.grad = None

    def _accumulate(self, grad: np.ndarray) -> None:
        if not self.requires_grad:
            return
        grad = grad.astype(self.data.dtype, copy=False)
        self.grad = grad if self.grad is None else self.grad + grad

    def _lift(self, other) -> "Tensor":
        if isinstance(other, Tensor):
            return other
        return Tensor(np.asarray(other, dtype=self.data.dtype))

    # graph construction

    @staticmethod
    def _make(data: np.ndarray, parents: tuple["Tensor", ...], backward) -> "Tensor":
        out = Tensor(data)
        if is_grad_enabled() and any(parent.requires_grad for parent in parents):
            out.requires_grad = True
            out._parents = parents
            out._backward = backward
        return out

    def backward(self, grad: np.ndarray | None = None) -> None:
        """Backpropagate from this tensor (a scalar unless `grad` is given)."""
        if grad is None:
            if self.data.size != 1:
                raise ValueError(f"backward() without a gradient needs a scalar, got shape {self.shape}")
            grad = np.ones_like(self.data)
        order, seen = [], set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            stack.extend((parent, False) for parent in node._parents if id(parent) not in seen)
        self.grad = np.asarray(grad, dtype=self.data.dtype)
        for node in reversed(order):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)
                node.grad = None

    # arithmetic

    def __add__(self, other) -> "Tensor":
        other = self._lift(other)

        def backward(grad):
            self._accumulate(_unbroadcast(grad, self.shape))
            other._accumulate(_unbroadcast(grad, other.shape))
        return Tensor._make(self.data + other.data, (self, other), backward)

    __radd__ = __add__

    def __neg__(self) -> "Tensor":
        return Tensor._make(-self.data, (self,), lambda grad: self._accumulate(-grad))

    def __sub__(self, other) -> "Tensor":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Tensor":
        return self._lift(other) + (-self)

    def __mul__(self, other) -> "Tensor":
        other = self._lift(other)

        def backward(grad):
            self._accumulate(_unbroadcast(grad * other.data, self.shape))
            other._accumulate(_unbroadcast(grad * self.data, other.shape))
        return Tensor._make(self.data * other.data, (self, other), backward)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Tensor":
        other = self._lift(other)

        def backward(grad):
            self._accumulate(_unbroadcast(grad / other.data, self.shape))
            other._accumulate(_unbroadcast(-grad * self.data / (other.data * other.data), other.shape))
        return Tensor._make(self.data / other.data, (self, other), backward)

    def __matmul__(self, other) -> "Tensor":
        other = self._lift(other)

        def backward(grad):
            self._accumulate(_unbroadcast(grad @ np.swapaxes(other.data, -1, -2), self.shape))
            other._accumulate(_unbroadcast(np.swapaxes(self.data, -1, -2) @ grad, other.shape))
        return Tensor._make(self.data @ other.data, (self, other), backward)

    # reductions and shape

    def sum(self, axis=None, keepdims: bool = False) -> "Tensor":
        def backward(grad):
            if axis is not None and not keepdims:
                grad = np.expand_dims(grad, axis)
            self._accumulate(np.broadcast_to(grad, self.shape))
        return Tensor._make(self.data.sum(axis=axis, keepdims=keepdims), (self,), backward)

    def mean(self, axis=None, keepdims: bool = False) -> "Tensor":
        count = self.data.size if axis is None else np.prod([self.shape[a] for a in np.atleast_1d(axis)])
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    def reshape(self, *shape) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return Tensor._make(self.data.reshape(shape), (self,),
                            lambda grad: self._accumulate(grad.reshape(self.shape)))

    def transpose(self, *axes) -> "Tensor":
        inverse = np.argsort(axes)
        return Tensor._make(self.data.transpose(axes), (self,),
                            lambda grad: self._accumulate(grad.transpose(inverse)))

    def __getitem__(self, index) -> "Tensor":
        def backward(grad):
            full = np.zeros_like(self.data)
            np.add.at(full, index, grad)
            self._accumulate(full)
        return Tensor._make(self.data[index], (self,), backward)

    # element-wise functions

    def exp(self) -> "Tensor":
        out = np.exp(self.data)
        return Tensor._make(out, (self,), lambda grad: self._accumulate(grad * out))

    def log(self) -> "Tensor":
        return Tensor._make(np.log(self.data), (self,), lambda grad: self._accumulate(grad / self.data))

    def abs(self) -> "Tensor":
        return Tensor._make(np.abs(self.data), (self,), lambda grad: self._accumulate(grad * np.sign(self.data)))

    def relu(self) -> "Tensor":
        mask = self.data > 0
        return Tensor._make(self.data * mask, (self,), lambda grad: self._accumulate(grad * mask))

    def softmax(self, axis: int = -1) -> "Tensor":
        shifted = self.data - self.data.max(axis=axis, keepdims=True)
        out = np.exp(shifted)
        out /= out.sum(axis=axis, keepdims=True)

        def backward(grad):
            self._accumulate(out * (grad - (grad * out).sum(axis=axis, keepdims=True)))
        return Tensor._make(out, (self,), backward)


def tensor(data, requires_grad: bool = False, dtype=None) -> Tensor:
    return Tensor(data, requires_grad=requires_grad, dtype=dtype)


def concat(tensors: list[Tensor], axis: int = 0) -> Tensor:
    sizes = [t.shape[axis] for t in tensors]
    bounds = np.cumsum(sizes)[:-1]

    def backward(grad):
        for part, piece in zip(tensors, np.split(grad, bounds, axis=axis)):
            part._accumulate(piece)
    return Tensor._make(np.concatenate([t.data for t in tensors], axis=axis), tuple(tensors), backward)


def layer_norm(x: Tensor, gain: Tensor, bias: Tensor, eps: float = 1e-5) -> Tensor:
    """Normalize over the last axis, then scale by `gain` and shift by `bias`."""
    mean = x.data.mean(axis=-1, keepdims=True)
    centered = x.data - mean
    inv_std = 1.0 / np.sqrt((centered * centered).mean(axis=-1, keepdims=True) + eps)
    normalized = centered * inv_std

    def backward(grad):
        gain._accumulate(_unbroadcast(grad * normalized, gain.shape))
        bias._accumulate(_unbroadcast(grad, bias.shape))
        g = grad * gain.data
        x._accumulate(inv_std * (g - g.mean(axis=-1, keepdims=True)
                                 - normalized * (g * normalized).mean(axis=-1, keepdims=True)))
    return Tensor._make(normalized * gain.data + bias.data, (x, gain, bias), backward)


def unfold2d(x: Tensor, kernel: int, stride: int, padding: int) -> Tensor:
    """Image patches of a channels-last batch [B, H, W, C] as [B, H_out, W_out, kernel*kernel*C]."""
    batch, height, width, channels = x.shape
    padded = np.pad(x.data, ((0, 0), (padding, padding), (padding, padding), (0, 0)))
    out_h = (height + 2 * padding - kernel) // stride + 1
    out_w = (width + 2 * padding - kernel) // stride + 1
    windows = sliding_window_view(padded, (kernel, kernel), axis=(1, 2))[:, ::stride, ::stride][:, :out_h, :out_w]
    patches = windows.transpose(0, 1, 2, 4, 5, 3).reshape(batch, out_h, out_w, kernel * kernel * channels)

    def backward(grad):
        grad = grad.reshape(batch, out_h, out_w, kernel, kernel, channels)
        full = np.zeros_like(padded)
        for i in range(kernel):
            for j in range(kernel):
                full[:, i:i + stride * (out_h - 1) + 1:stride, j:j + stride * (out_w - 1) + 1:stride, :] += grad[:, :, :, i, j, :]
        x._accumulate(full[:, padding:padding + height, padding:padding + width, :])
    return Tensor._make(np.ascontiguousarray(patches), (x,), backward)
