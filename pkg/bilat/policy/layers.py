"""Trainable building blocks: linear maps, convolutions, attention and transformer layers.

All layers work on channels-last tensors and keep their parameters as leaf
Tensors reachable through `named_parameters()`.
"""

import math

import numpy as np

from .autograd import Tensor, layer_norm, unfold2d


class Module:
    """Parameter container; parameters and sub-modules are found by walking attributes."""

    def named_parameters(self, prefix: str = "") -> dict[str, Tensor]:
        found: dict[str, Tensor] = {}
        for name, value in self.__dict__.items():
            key = f"{prefix}{name}"
            if isinstance(value, Tensor) and value.requires_grad:
                found[key] = value
            elif isinstance(value, Module):
                found.update(value.named_parameters(f"{key}."))
            elif isinstance(value, list) and value and isinstance(value[0], Module):
                for index, item in enumerate(value):
                    found.update(item.named_parameters(f"{key}.{index}."))
        return found

    def parameters(self) -> list[Tensor]:
        return list(self.named_parameters().values())

    def zero_grad(self) -> None:
        for parameter in self.parameters():
            parameter.zero_grad()


def _parameter(rng: np.random.Generator, shape, limit: float, dtype) -> Tensor:
    return Tensor(rng.uniform(-limit, limit, size=shape).astype(dtype), requires_grad=True)


class Linear(Module):
    """y = x @ W + b with uniform(-1/sqrt(in), 1/sqrt(in)) initialization."""

    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator, dtype=np.float32):
        limit = 1.0 / math.sqrt(in_features)
        self.weight = _parameter(rng, (in_features, out_features), limit, dtype)
        self.bias = _parameter(rng, (out_features,), limit, dtype)

    def __call__(self, x: Tensor) -> Tensor:
        return x @ self.weight + self.bias


class LayerNorm(Module):
    def __init__(self, features: int, dtype=np.float32):
        self.gain = Tensor(np.ones(features, dtype=dtype), requires_grad=True)
        self.bias = Tensor(np.zeros(features, dtype=dtype), requires_grad=True)

    def __call__(self, x: Tensor) -> Tensor:
        return layer_norm(x, self.gain, self.bias)


class Conv2d(Module):
    """Channels-last convolution as patch extraction followed by one matrix product."""

    def __init__(self, in_channels: int, out_channels: int, kernel: int, stride: int, padding: int,
                 rng: np.random.Generator, dtype=np.float32):
        self.kernel, self.stride, self.padding = kernel, stride, padding
        limit = math.sqrt(6.0 / (in_channels * kernel * kernel + out_channels))
        self.weight = _parameter(rng, (kernel * kernel * in_channels, out_channels), limit, dtype)
        self.bias = Tensor(np.zeros(out_channels, dtype=dtype), requires_grad=True)

    def __call__(self, x: Tensor) -> Tensor:
        return unfold2d(x, self.kernel, self.stride, self.padding) @ self.weight + self.bias


class MultiHeadAttention(Module):

    def __init__(self, dim: int, heads: int, rng: np.random.Generator, dtype=np.float32):
        if dim % heads:
            raise ValueError(f"model dim {dim} is not divisible by {heads} heads")
        self.heads = heads
        self.query = Linear(dim, dim, rng, dtype)
        self.key = Linear(dim, dim, rng, dtype)
        self.value = Linear(dim, dim, rng, dtype)
        self.output = Linear(dim, dim, rng, dtype)

    def _split(self, x: Tensor) -> Tensor:
        batch, length, dim = x.shape
        return x.reshape(batch, length, self.heads, dim // self.heads).transpose(0, 2, 1, 3)

    def __call__(self, query: Tensor, key: Tensor, value: Tensor, padding_mask: np.ndarray | None = None) -> Tensor:
        """Attend from `query` [B, Tq, d] to `key`/`value` [B, Tk, d].

        `padding_mask` is a boolean [B, Tk] array, True where a key must be ignored.
        """
        batch, length, dim = query.shape
        q, k, v = self._split(self.query(query)), self._split(self.key(key)), self._split(self.value(value))
        scores = (q @ k.transpose(0, 1, 3, 2)) * (1.0 / math.sqrt(dim // self.heads))
        if padding_mask is not None:
            bias = np.where(padding_mask, -1e9, 0.0).astype(scores.dtype)[:, None, None, :]
            scores = scores + bias
        attended = scores.softmax(axis=-1) @ v
        return self.output(attended.transpose(0, 2, 1, 3).reshape(batch, length, dim))


class FeedForward(Module):
    def __init__(self, dim: int, hidden: int, rng: np.random.Generator, dtype=np.float32):
        self.expand = Linear(dim, hidden, rng, dtype)
        self.contract = Linear(hidden, dim, rng, dtype)

    def __call__(self, x: Tensor) -> Tensor:
        return self.contract(self.expand(x).relu())


class EncoderLayer(Module):
    """Post-norm self-attention layer; positions are added to queries and keys only."""

    def __init__(self, dim: int, heads: int, hidden: int, rng: np.random.Generator, dtype=np.float32):
        self.attention = MultiHeadAttention(dim, heads, rng, dtype)
        self.feed_forward = FeedForward(dim, hidden, rng, dtype)
        self.norm1 = LayerNorm(dim, dtype)
        self.norm2 = LayerNorm(dim, dtype)

    def __call__(self, x: Tensor, position: Tensor, padding_mask: np.ndarray | None = None) -> Tensor:
        keyed = x + position
        x = self.norm1(x + self.attention(keyed, keyed, x, padding_mask))
        return self.norm2(x + self.feed_forward(x))


class DecoderLayer(Module):
    """Post-norm decoder layer: self-attention over queries, cross-attention to the memory."""

    def __init__(self, dim: int, heads: int, hidden: int, rng: np.random.Generator, dtype=np.float32):
        self.self_attention = MultiHeadAttention(dim, heads, rng, dtype)
        self.cross_attention = MultiHeadAttention(dim, heads, rng, dtype)
        self.feed_forward = FeedForward(dim, hidden, rng, dtype)
        self.norm1 = LayerNorm(dim, dtype)
        self.norm2 = LayerNorm(dim, dtype)
        self.norm3 = LayerNorm(dim, dtype)

    def __call__(self, x: Tensor, query_position: Tensor, memory: Tensor, memory_position: Tensor) -> Tensor:
        keyed = x + query_position
        x = self.norm1(x + self.self_attention(keyed, keyed, x))
        x = self.norm2(x + self.cross_attention(x + query_position, memory + memory_position, memory))
        return self.norm3(x + self.feed_forward(x))


def sinusoidal_table(length: int, dim: int) -> np.ndarray:
    """Fixed 1-D sine/cosine position table [length, dim]."""
    position = np.arange(length)[:, None]
    rates = np.power(10000.0, -2.0 * (np.arange(dim) // 2) / dim)
    angles = position * rates[None, :]
    table = np.zeros((length, dim))
    table[:, 0::2] = np.sin(angles[:, 0::2])
    table[:, 1::2] = np.cos(angles[:, 1::2])
    return table


def sinusoidal_grid(height: int, width: int, dim: int) -> np.ndarray:
    """Fixed 2-D table [height * width, dim]: half the channels encode rows, half encode columns."""
    half = dim // 2
    rows = sinusoidal_table(height, half)
    cols = sinusoidal_table(width, dim - half)
    grid = np.concatenate([np.repeat(rows, width, axis=0), np.tile(cols, (height, 1))], axis=1)
    return grid
