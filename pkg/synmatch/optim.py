# coding: utf-8

"""
    SynMatch

    AdamW with decoupled weight decay and bias-corrected moments.
"""  # noqa: E501

from __future__ import annotations

import logging
from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from synmatch.exceptions import NonFiniteError, ShapeMismatchError
from synmatch.tensor import Tensor

logger = logging.getLogger(__name__)

DEFAULT_LR = 1e-4
DEFAULT_BETAS = (0.9, 0.999)
DEFAULT_WEIGHT_DECAY = 1e-4
DEFAULT_EPS = 1e-8


class AdamWState:
    """Step counter plus first/second moment buffers keyed by parameter name."""

    def __init__(self) -> None:
        self.step = 0
        self.exp_avg: Dict[str, np.ndarray] = {}
        self.exp_avg_sq: Dict[str, np.ndarray] = {}

    def to_arrays(self) -> Dict[str, np.ndarray]:
        """Flatten into named arrays for the checkpoint archive."""
        arrays: Dict[str, np.ndarray] = {"optim.step": np.array([self.step], dtype=np.float32)}
        for name in self.exp_avg:
            arrays["optim.exp_avg." + name] = self.exp_avg[name]
            arrays["optim.exp_avg_sq." + name] = self.exp_avg_sq[name]
        return arrays

    @classmethod
    def from_arrays(cls, arrays: Mapping[str, np.ndarray]) -> "AdamWState":
        state = cls()
        if "optim.step" in arrays:
            state.step = int(arrays["optim.step"].reshape(-1)[0])
        for key, value in arrays.items():
            if key.startswith("optim.exp_avg_sq."):
                state.exp_avg_sq[key[len("optim.exp_avg_sq."):]] = value.copy()
            elif key.startswith("optim.exp_avg."):
                state.exp_avg[key[len("optim.exp_avg."):]] = value.copy()
        return state


def adamw_step(
    params: Mapping[str, Tensor],
    grads: Mapping[str, Optional[np.ndarray]],
    state: AdamWState,
    lr: float = DEFAULT_LR,
    betas: Tuple[float, float] = DEFAULT_BETAS,
    weight_decay: float = DEFAULT_WEIGHT_DECAY,
    eps: float = DEFAULT_EPS,
) -> AdamWState:
    """Apply one AdamW update in place and return the advanced state.

    Parameters whose gradient is None are left untouched (their moments are
    not advanced either).
    """
    for name, grad in grads.items():
        if grad is not None and not np.all(np.isfinite(grad)):
            raise NonFiniteError("non-finite gradient", ["adamw_step", name])

    state.step += 1
    beta1, beta2 = betas
    bias1 = 1.0 - beta1 ** state.step
    bias2 = 1.0 - beta2 ** state.step
    for name, param in params.items():
        grad = grads.get(name)
        if grad is None:
            continue
        if grad.shape != param.shape:
            raise ShapeMismatchError("gradient shape differs from parameter", ["adamw_step", name],
                                     expected=param.shape, actual=grad.shape)
        m = state.exp_avg.get(name)
        v = state.exp_avg_sq.get(name)
        if m is None or v is None:
            m = np.zeros_like(param.data)
            v = np.zeros_like(param.data)
        m = beta1 * m + (1.0 - beta1) * grad
        v = beta2 * v + (1.0 - beta2) * grad * grad
        state.exp_avg[name] = m
        state.exp_avg_sq[name] = v
        data = param.data
        if weight_decay:
            data = data * (1.0 - lr * weight_decay)
        m_hat = m / bias1
        v_hat = v / bias2
        param.data = (data - lr * m_hat / (np.sqrt(v_hat) + eps)).astype(param.data.dtype, copy=False)
    return state


class AdamW:
    """Stateful wrapper over `adamw_step` bound to a named parameter set."""

    def __init__(
        self,
        params: Mapping[str, Tensor],
        lr: float = DEFAULT_LR,
        betas: Tuple[float, float] = DEFAULT_BETAS,
        weight_decay: float = DEFAULT_WEIGHT_DECAY,
        eps: float = DEFAULT_EPS,
    ) -> None:
        self.params = dict(params)
        self.lr = lr
        self.betas = betas
        self.weight_decay = weight_decay
        self.eps = eps
        self.state = AdamWState()

    def zero_grad(self) -> None:
        for param in self.params.values():
            param.zero_grad()

    def step(self) -> None:
        grads = {name: p.grad for name, p in self.params.items()}
        adamw_step(self.params, grads, self.state, lr=self.lr, betas=self.betas,
                   weight_decay=self.weight_decay, eps=self.eps)
        logger.debug("adamw step %d", self.state.step)

    def state_arrays(self) -> Dict[str, np.ndarray]:
        return self.state.to_arrays()

    def load_state_arrays(self, arrays: Mapping[str, np.ndarray]) -> None:
        self.state = AdamWState.from_arrays(arrays)
