# coding: utf-8

"""
    SynMatch

    Differentiable primitives used by the U-Net and the losses. All inputs are
    NCHW tensors.
"""  # noqa: E501

from __future__ import annotations

from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from synmatch.exceptions import ShapeMismatchError
from synmatch.tensor import Function, Tensor


def _require_rank4(op: str, name: str, shape: Tuple[int, ...]) -> None:
    if len(shape) != 4:
        raise ShapeMismatchError("{0} expects a rank-4 NCHW tensor".format(op),
                                 [op, name], expected=4, actual=len(shape))


class Conv2d(Function):
    def forward(self, x: np.ndarray, w: np.ndarray, b: np.ndarray,
                stride: int = 1, padding: int = 0) -> np.ndarray:
        n, c, h, wd = x.shape
        f, _, kh, kw = w.shape
        self.stride, self.padding = stride, padding
        self.x_shape, self.w = x.shape, w
        xp = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding))) if padding else x
        self.xp_shape = xp.shape
        windows = sliding_window_view(xp, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride]
        ho, wo = windows.shape[2], windows.shape[3]
        # rows: (n, ho, wo); cols: (c, kh, kw)
        cols = windows.transpose(0, 2, 3, 1, 4, 5).reshape(n * ho * wo, c * kh * kw)
        self.cols = cols
        self.out_hw = (ho, wo)
        out = cols @ w.reshape(f, -1).T + b
        return out.reshape(n, ho, wo, f).transpose(0, 3, 1, 2)

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        n, c, _, _ = self.x_shape
        f, _, kh, kw = self.w.shape
        ho, wo = self.out_hw
        s, p = self.stride, self.padding
        g2 = grad.transpose(0, 2, 3, 1).reshape(n * ho * wo, f)
        grad_w = (g2.T @ self.cols).reshape(self.w.shape)
        grad_b = g2.sum(axis=0)
        dcols = (g2 @ self.w.reshape(f, -1)).reshape(n, ho, wo, c, kh, kw)
        dxp = np.zeros(self.xp_shape, dtype=grad.dtype)
        for i in range(kh):
            for j in range(kw):
                dxp[:, :, i:i + s * ho:s, j:j + s * wo:s] += dcols[:, :, :, :, i, j].transpose(0, 3, 1, 2)
        if p:
            dxp = dxp[:, :, p:-p, p:-p]
        return (dxp, grad_w, grad_b)


def conv2d(x: Tensor, weight: Tensor, bias: Tensor, stride: int = 1, padding: int = 0) -> Tensor:
    """2D cross-correlation, output size floor((H + 2p - kh) / stride) + 1."""
    _require_rank4("conv2d", "input", x.shape)
    _require_rank4("conv2d", "weight", weight.shape)
    if stride < 1:
        raise ShapeMismatchError("stride must be >= 1", ["conv2d", "stride"], expected=">=1", actual=stride)
    if padding < 0:
        raise ShapeMismatchError("padding must be >= 0", ["conv2d", "padding"], expected=">=0", actual=padding)
    if weight.shape[1] != x.shape[1]:
        raise ShapeMismatchError("input channels do not match weight", ["conv2d", "input", 1],
                                 expected=weight.shape[1], actual=x.shape[1])
    if bias.shape != (weight.shape[0],):
        raise ShapeMismatchError("bias must have one entry per filter", ["conv2d", "bias", 0],
                                 expected=weight.shape[0], actual=bias.shape)
    for axis, k in ((2, weight.shape[2]), (3, weight.shape[3])):
        if k > x.shape[axis] + 2 * padding:
            raise ShapeMismatchError("kernel larger than padded input", ["conv2d", "input", axis],
                                     expected=">={0}".format(k), actual=x.shape[axis] + 2 * padding)
    return Conv2d.apply(x, weight, bias, stride=stride, padding=padding)


class MaxPool2(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        n, c, h, w = x.shape
        self.x_shape = x.shape
        win = x.reshape(n, c, h // 2, 2, w // 2, 2).transpose(0, 1, 2, 4, 3, 5).reshape(n, c, h // 2, w // 2, 4)
        self.argmax = win.argmax(axis=-1)
        return np.take_along_axis(win, self.argmax[..., None], axis=-1)[..., 0]

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        n, c, h, w = self.x_shape
        g4 = np.zeros((n, c, h // 2, w // 2, 4), dtype=grad.dtype)
        np.put_along_axis(g4, self.argmax[..., None], grad[..., None], axis=-1)
        dx = g4.reshape(n, c, h // 2, w // 2, 2, 2).transpose(0, 1, 2, 4, 3, 5).reshape(n, c, h, w)
        return (dx,)


def max_pool2(x: Tensor) -> Tensor:
    """2x2 max pooling with stride 2; ties route the gradient to the first maximum."""
    _require_rank4("max_pool2", "input", x.shape)
    for axis in (2, 3):
        if x.shape[axis] % 2:
            raise ShapeMismatchError("pooling needs even spatial dims", ["max_pool2", "input", axis],
                                     expected="even", actual=x.shape[axis])
    return MaxPool2.apply(x)


def bilinear_matrix(size: int, dtype: np.dtype) -> np.ndarray:
    """Row-stochastic [2*size, size] interpolation matrix (half-pixel centers)."""
    out = np.zeros((2 * size, size), dtype=dtype)
    for o in range(2 * size):
        src = max((o + 0.5) / 2.0 - 0.5, 0.0)
        i0 = int(np.floor(src))
        i1 = min(i0 + 1, size - 1)
        frac = src - i0
        out[o, i0] += 1.0 - frac
        out[o, i1] += frac
    return out


class UpsampleBilinear2(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        _, _, h, w = x.shape
        self.uh = bilinear_matrix(h, x.dtype)
        self.uw = bilinear_matrix(w, x.dtype)
        return np.einsum("oh,nchw,pw->ncop", self.uh, x, self.uw, optimize=True)

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        return (np.einsum("oh,ncop,pw->nchw", self.uh, grad, self.uw, optimize=True),)


def upsample_bilinear2(x: Tensor) -> Tensor:
    """Double H and W with bilinear weights."""
    _require_rank4("upsample_bilinear2", "input", x.shape)
    return UpsampleBilinear2.apply(x)


class UpsampleNearest2(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        return x.repeat(2, axis=2).repeat(2, axis=3)

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        n, c, h, w = grad.shape
        return (grad.reshape(n, c, h // 2, 2, w // 2, 2).sum(axis=(3, 5)),)


def upsample_nearest2(x: Tensor) -> Tensor:
    _require_rank4("upsample_nearest2", "input", x.shape)
    return UpsampleNearest2.apply(x)


class GroupNorm(Function):
    def forward(self, x: np.ndarray, gain: np.ndarray, shift: np.ndarray,
                groups: int = 4, eps: float = 1e-5) -> np.ndarray:
        n, c, h, w = x.shape
        self.groups = groups
        xg = x.reshape(n, groups, -1)
        mean = xg.mean(axis=-1, keepdims=True)
        var = xg.var(axis=-1, keepdims=True)
        self.inv_std = 1.0 / np.sqrt(var + eps)
        self.xhat = ((xg - mean) * self.inv_std).reshape(n, c, h, w)
        self.gain = gain
        return self.xhat * gain.reshape(1, c, 1, 1) + shift.reshape(1, c, 1, 1)

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        n, c, h, w = grad.shape
        grad_gain = (grad * self.xhat).sum(axis=(0, 2, 3))
        grad_shift = grad.sum(axis=(0, 2, 3))
        dxhat = (grad * self.gain.reshape(1, c, 1, 1)).reshape(n, self.groups, -1)
        xhat = self.xhat.reshape(n, self.groups, -1)
        dx = self.inv_std * (dxhat - dxhat.mean(axis=-1, keepdims=True)
                             - xhat * (dxhat * xhat).mean(axis=-1, keepdims=True))
        return (dx.reshape(n, c, h, w), grad_gain, grad_shift)


def group_norm(x: Tensor, groups: int, gain: Tensor, shift: Tensor, eps: float = 1e-5) -> Tensor:
    """Normalize each (sample, channel group) to zero mean and unit variance, then scale and shift."""
    _require_rank4("group_norm", "input", x.shape)
    channels = x.shape[1]
    if groups < 1 or channels % groups:
        raise ShapeMismatchError("channels must be divisible by groups", ["group_norm", "input", 1],
                                 expected="multiple of {0}".format(groups), actual=channels)
    for name, param in (("gain", gain), ("shift", shift)):
        if param.shape != (channels,):
            raise ShapeMismatchError("affine parameter must have one entry per channel",
                                     ["group_norm", name, 0], expected=channels, actual=param.shape)
    return GroupNorm.apply(x, gain, shift, groups=groups, eps=eps)


class Relu(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        self.mask = x > 0
        return np.where(self.mask, x, 0).astype(x.dtype, copy=False)

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        return (grad * self.mask,)


def relu(x: Tensor) -> Tensor:
    return Relu.apply(x)


def _softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - x.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


class SoftmaxChannels(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        self.out = _softmax(x)
        return self.out

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        s = self.out
        return (s * (grad - (grad * s).sum(axis=1, keepdims=True)),)


def softmax_channels(x: Tensor) -> Tensor:
    """Softmax over axis 1, computed with max subtraction."""
    if x.ndim < 2 or x.shape[1] < 1:
        raise ShapeMismatchError("softmax needs a channel axis", ["softmax_channels", "input", 1],
                                 expected=">=1", actual=x.shape)
    return SoftmaxChannels.apply(x)


class LogSoftmaxChannels(Function):
    def forward(self, x: np.ndarray) -> np.ndarray:
        shifted = x - x.max(axis=1, keepdims=True)
        logsum = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
        out = shifted - logsum
        self.softmax = np.exp(out)
        return out

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        return (grad - self.softmax * grad.sum(axis=1, keepdims=True),)


def log_softmax_channels(x: Tensor) -> Tensor:
    return LogSoftmaxChannels.apply(x)


class ConcatChannels(Function):
    def forward(self, *arrays: np.ndarray) -> np.ndarray:
        self.splits = np.cumsum([a.shape[1] for a in arrays])[:-1]
        return np.concatenate(arrays, axis=1)

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        return tuple(np.split(grad, self.splits, axis=1))


def concat_channels(tensors: Sequence[Tensor]) -> Tensor:
    first = tensors[0].shape
    for index, t in enumerate(tensors[1:], start=1):
        if t.shape[0] != first[0] or t.shape[2:] != first[2:]:
            raise ShapeMismatchError("concat needs matching N,H,W", ["concat_channels", index],
                                     expected=first, actual=t.shape)
    return ConcatChannels.apply(*tensors)


def softmax_numpy(logits: np.ndarray) -> np.ndarray:
    """Channel softmax on a plain array (inference paths)."""
    return _softmax(logits)
