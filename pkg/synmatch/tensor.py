# coding: utf-8

"""
    SynMatch

    Dense tensors and reverse-mode automatic differentiation.

    Every differentiable operation is a `Function` subclass. Applying it while
    recording is enabled appends one entry to the active `Tape`; `backward`
    walks that tape in reverse, visiting each entry once, and sums gradients
    across fan-out. After a backward pass the tape is cleared, so each training
    step records a fresh graph.
"""  # noqa: E501

from __future__ import annotations

import contextlib
import logging
import threading
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from synmatch.exceptions import GradientError, NonFiniteError, ShapeMismatchError

logger = logging.getLogger(__name__)

ArrayLike = Union["Tensor", np.ndarray, float, int, Sequence[Any]]


class _EngineState(threading.local):
    def __init__(self) -> None:
        self.grad_enabled = True
        self.dtype: np.dtype = np.dtype(np.float32)
        self.tape: Optional["Tape"] = None


_state = _EngineState()


def get_default_dtype() -> np.dtype:
    return _state.dtype


@contextlib.contextmanager
def default_dtype(dtype: Any) -> Iterator[None]:
    """Temporarily switch the engine dtype (float64 is used by gradient checks)."""
    previous = _state.dtype
    _state.dtype = np.dtype(dtype)
    try:
        yield
    finally:
        _state.dtype = previous


@contextlib.contextmanager
def no_grad() -> Iterator[None]:
    """Disable tape recording inside the block."""
    previous = _state.grad_enabled
    _state.grad_enabled = False
    try:
        yield
    finally:
        _state.grad_enabled = previous


def is_grad_enabled() -> bool:
    return _state.grad_enabled


class TapeEntry:
    __slots__ = ("function", "inputs", "output")

    def __init__(self, function: "Function", inputs: Tuple["Tensor", ...], output: "Tensor") -> None:
        self.function = function
        self.inputs = inputs
        self.output = output


class Tape:
    """Ordered record of the operations applied since the last backward pass.

    Entries are appended as operations run, so every entry's inputs were
    produced by earlier entries or are leaves.
    """

    def __init__(self) -> None:
        self.entries: List[TapeEntry] = []

    def __len__(self) -> int:
        return len(self.entries)

    def record(self, function: "Function", inputs: Tuple["Tensor", ...], output: "Tensor") -> None:
        self.entries.append(TapeEntry(function, inputs, output))

    def clear(self) -> None:
        for entry in self.entries:
            entry.output._creator = None
        self.entries = []


def get_tape() -> Tape:
    """The tape of the calling thread, created on first use."""
    if _state.tape is None:
        _state.tape = Tape()
    return _state.tape


@contextlib.contextmanager
def use_tape(tape: Tape) -> Iterator[Tape]:
    previous = _state.tape
    _state.tape = tape
    try:
        yield tape
    finally:
        _state.tape = previous


class Tensor:
    """Dense n-dimensional array with optional gradient tracking."""

    __array_priority__ = 100

    def __init__(self, data: ArrayLike, requires_grad: bool = False, name: Optional[str] = None) -> None:
        if isinstance(data, Tensor):
            data = data.data
        self.data: np.ndarray = np.ascontiguousarray(np.asarray(data, dtype=_state.dtype))
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self.name = name
        self._creator: Optional[Function] = None

    # -- basic properties -------------------------------------------------
    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return int(self.data.size)

    @property
    def is_leaf(self) -> bool:
        return self._creator is None

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeMismatchError("item() needs a single-element tensor",
                                     ["item"], expected=1, actual=self.data.size)
        return float(self.data.reshape(-1)[0])

    def detach(self) -> "Tensor":
        return Tensor(self.data.copy())

    def zero_grad(self) -> None:
        self.grad = None

    def __repr__(self) -> str:
        flag = ", requires_grad=True" if self.requires_grad else ""
        return "Tensor(shape={0}{1})".format(self.shape, flag)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: ArrayLike) -> "Tensor":
        return Add.apply(self, as_tensor(other))

    def __radd__(self, other: ArrayLike) -> "Tensor":
        return Add.apply(as_tensor(other), self)

    def __sub__(self, other: ArrayLike) -> "Tensor":
        return Sub.apply(self, as_tensor(other))

    def __rsub__(self, other: ArrayLike) -> "Tensor":
        return Sub.apply(as_tensor(other), self)

    def __mul__(self, other: ArrayLike) -> "Tensor":
        return Mul.apply(self, as_tensor(other))

    def __rmul__(self, other: ArrayLike) -> "Tensor":
        return Mul.apply(as_tensor(other), self)

    def __truediv__(self, other: ArrayLike) -> "Tensor":
        return Div.apply(self, as_tensor(other))

    def __rtruediv__(self, other: ArrayLike) -> "Tensor":
        return Div.apply(as_tensor(other), self)

    def __neg__(self) -> "Tensor":
        return Neg.apply(self)

    def sum(self, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False) -> "Tensor":
        return Sum.apply(self, axis=axis, keepdims=keepdims)

    def mean(self, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False) -> "Tensor":
        total = self.sum(axis=axis, keepdims=keepdims)
        count = self.size // max(total.size, 1)
        return total * (1.0 / count)

    def log(self) -> "Tensor":
        return Log.apply(self)

    def reshape(self, *shape: Any) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return Reshape.apply(self, shape=tuple(shape))

    def backward(self) -> None:
        backward(self)


def as_tensor(value: ArrayLike) -> Tensor:
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


class Function:
    """Base class for differentiable operations.

    Subclasses implement `forward` on numpy arrays and `backward`, which maps
    the gradient of the output to one gradient (or None) per input.
    """

    def __init__(self, *tensors: Tensor) -> None:
        self.tensors = tensors

    def forward(self, *args: np.ndarray, **kwargs: Any) -> np.ndarray:
        raise NotImplementedError("Forward pass not implemented for {0}".format(type(self).__name__))

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        raise NotImplementedError("Backward pass not implemented for {0}".format(type(self).__name__))

    @classmethod
    def apply(cls, *tensors: Tensor, **kwargs: Any) -> Tensor:
        func = cls(*tensors)
        out_data = func.forward(*(t.data for t in tensors), **kwargs)
        if not np.all(np.isfinite(out_data)):
            raise NonFiniteError("non-finite output", [cls.__name__])
        requires_grad = _state.grad_enabled and any(t.requires_grad for t in tensors)
        out = Tensor(out_data, requires_grad=requires_grad)
        if requires_grad:
            out._creator = func
            get_tape().record(func, tuple(tensors), out)
        return out

    @staticmethod
    def unbroadcast(grad: np.ndarray, to_shape: Tuple[int, ...]) -> np.ndarray:
        """Sum out broadcast dimensions so `grad` matches `to_shape`."""
        if grad.shape == to_shape:
            return grad
        while grad.ndim > len(to_shape):
            grad = grad.sum(axis=0)
        for axis, size in enumerate(to_shape):
            if size == 1 and grad.shape[axis] != 1:
                grad = grad.sum(axis=axis, keepdims=True)
        return grad


def backward(loss: Tensor, tape: Optional[Tape] = None) -> None:
    """Accumulate d(loss)/d(leaf) into `.grad` of every leaf that requires grad.

    Gradients are summed into existing `.grad` buffers; callers zero them
    before each optimizer step. The tape is cleared afterwards.
    """
    if loss.size != 1:
        raise GradientError("backward needs a scalar loss, got shape {0}".format(loss.shape))
    tape = get_tape() if tape is None else tape
    if not loss.requires_grad:
        tape.clear()
        return
    if loss._creator is None:
        # a leaf loss
        _accumulate(loss, np.ones_like(loss.data))
        tape.clear()
        return

    grads: Dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
    leaves: Dict[int, Tensor] = {}
    for entry in reversed(tape.entries):
        out_grad = grads.pop(id(entry.output), None)
        if out_grad is None:
            continue
        in_grads = entry.function.backward(out_grad)
        for tensor, g in zip(entry.inputs, in_grads):
            if g is None or not tensor.requires_grad:
                continue
            key = id(tensor)
            if key in grads:
                grads[key] = grads[key] + g
            else:
                grads[key] = g
            if tensor.is_leaf:
                leaves[key] = tensor
    for key, tensor in leaves.items():
        _accumulate(tensor, grads[key])
    logger.debug("backward visited %d tape entries, %d leaves", len(tape), len(leaves))
    tape.clear()


def _accumulate(tensor: Tensor, grad: np.ndarray) -> None:
    grad = grad.astype(tensor.data.dtype, copy=False).reshape(tensor.shape)
    if tensor.grad is None:
        tensor.grad = grad.copy()
    else:
        tensor.grad = tensor.grad + grad


# ---------------------------------------------------------------------------
# elementwise and reduction primitives

class Add(Function):
    def forward(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self.shapes = (a.shape, b.shape)
        return a + b

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        return (self.unbroadcast(grad, self.shapes[0]), self.unbroadcast(grad, self.shapes[1]))


class Sub(Function):
    def forward(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self.shapes = (a.shape, b.shape)
        return a - b

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        return (self.unbroadcast(grad, self.shapes[0]), self.unbroadcast(-grad, self.shapes[1]))


class Mul(Function):
    def forward(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self.a, self.b = a, b
        return a * b

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        return (self.unbroadcast(grad * self.b, self.a.shape),
                self.unbroadcast(grad * self.a, self.b.shape))


class Div(Function):
    def forward(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self.a, self.b = a, b
        return a / b

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        ga = grad / self.b
        gb = -grad * self.a / (self.b * self.b)
        return (self.unbroadcast(ga, self.a.shape), self.unbroadcast(gb, self.b.shape))


class Neg(Function):
    def forward(self, a: np.ndarray) -> np.ndarray:
        return -a

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        return (-grad,)


class Log(Function):
    def forward(self, a: np.ndarray) -> np.ndarray:
        self.a = a
        return np.log(a)

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        return (grad / self.a,)


class Sum(Function):
    def forward(self, a: np.ndarray, axis: Optional[Union[int, Tuple[int, ...]]] = None,
                keepdims: bool = False) -> np.ndarray:
        self.in_shape = a.shape
        self.axis = axis
        self.keepdims = keepdims
        return np.asarray(a.sum(axis=axis, keepdims=keepdims))

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        if self.axis is not None and not self.keepdims:
            axes = (self.axis,) if isinstance(self.axis, int) else self.axis
            axes = tuple(ax % len(self.in_shape) for ax in axes)
            for ax in sorted(axes):
                grad = np.expand_dims(grad, ax)
        return (np.broadcast_to(grad, self.in_shape).copy(),)


class Reshape(Function):
    def forward(self, a: np.ndarray, shape: Tuple[int, ...] = ()) -> np.ndarray:
        self.in_shape = a.shape
        return a.reshape(shape)

    def backward(self, grad: np.ndarray) -> Tuple[Optional[np.ndarray], ...]:
        return (grad.reshape(self.in_shape),)
