"""Adam with bias-corrected first and second moments."""

import numpy as np

from .autograd import Tensor


class Adam:

    def __init__(self, parameters: list[Tensor], learning_rate: float = 1e-4, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.parameters = parameters
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.steps = 0
        self._first = [np.zeros_like(p.data) for p in parameters]
        self._second = [np.zeros_like(p.data) for p in parameters]

    def zero_grad(self) -> None:
        for parameter in self.parameters:
            parameter.zero_grad()

    def step(self) -> None:
        """Apply one update; parameters without a gradient are left untouched."""
        self.steps += 1
        first_correction = 1.0 - self.beta1 ** self.steps
        second_correction = 1.0 - self.beta2 ** self.steps
        for parameter, first, second in zip(self.parameters, self._first, self._second):
            if parameter.grad is None:
                continue
            grad = parameter.grad
            first *= self.beta1
            first += (1.0 - self.beta1) * grad
            second *= self.beta2
            second += (1.0 - self.beta2) * grad * grad
            update = (first / first_correction) / (np.sqrt(second / second_correction) + self.eps)
            parameter.data -= (self.learning_rate * update).astype(parameter.dtype)
