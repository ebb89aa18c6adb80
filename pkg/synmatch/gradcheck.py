# coding: utf-8

"""
    SynMatch

    Central finite-difference gradient checking for engine primitives.
"""  # noqa: E501

from __future__ import annotations

from typing import Callable, List, Sequence

import numpy as np

from synmatch.tensor import Tape, Tensor, backward, default_dtype, use_tape


def _scalar_objective(fn: Callable[..., Tensor], inputs: Sequence[Tensor], projection: np.ndarray) -> Tensor:
    out = fn(*inputs)
    if out.size == 1:
        return out.sum()
    return (out * Tensor(projection)).sum()


def gradcheck(
    fn: Callable[..., Tensor],
    arrays: Sequence[np.ndarray],
    eps: float = 1e-3,
    seed: int = 0,
    dtype: type = np.float64,
) -> List[float]:
    """Compare analytic and central-difference gradients of `fn`.

    Non-scalar outputs are reduced with a fixed random projection so every
    output element contributes. Returns one relative error per input,
    ||analytic - numeric|| / max(||analytic||, ||numeric||).
    """
    rng = np.random.default_rng(seed)
    with default_dtype(dtype), use_tape(Tape()):
        reference = fn(*[Tensor(a) for a in arrays])
        projection = rng.uniform(-1.0, 1.0, size=reference.shape)

        leaves = [Tensor(np.array(a, dtype=dtype), requires_grad=True) for a in arrays]
        loss = _scalar_objective(fn, leaves, projection)
        backward(loss)
        analytic = [leaf.grad if leaf.grad is not None else np.zeros_like(leaf.data) for leaf in leaves]

        errors: List[float] = []
        for index, base in enumerate(arrays):
            numeric = np.zeros(base.shape, dtype=dtype)
            flat = numeric.reshape(-1)
            for k in range(flat.size):
                values = [np.array(a, dtype=dtype) for a in arrays]
                values[index].reshape(-1)[k] += eps
                plus = _scalar_objective(fn, [Tensor(v) for v in values], projection).item()
                values[index].reshape(-1)[k] -= 2 * eps
                minus = _scalar_objective(fn, [Tensor(v) for v in values], projection).item()
                flat[k] = (plus - minus) / (2 * eps)
            scale = max(float(np.linalg.norm(analytic[index])), float(np.linalg.norm(numeric)), 1e-12)
            errors.append(float(np.linalg.norm(analytic[index] - numeric)) / scale)
        return errors
