# coding: utf-8

"""
    SynMatch

    Tape recording, gradient accumulation and the engine's error paths.
"""  # noqa: E501


import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from synmatch.exceptions import GradientError, NonFiniteError, ShapeMismatchError
from synmatch.gradcheck import gradcheck
from synmatch.tensor import Tape, Tensor, backward, default_dtype, get_default_dtype, get_tape, no_grad, use_tape


class TestTensor(unittest.TestCase):
    """Tensor unit test stubs"""

    def setUp(self) -> None:
        self.tape = Tape()
        self._ctx = use_tape(self.tape)
        self._ctx.__enter__()

    def tearDown(self) -> None:
        self._ctx.__exit__(None, None, None)

    def test_broadcast_gradients(self) -> None:
        """Test case for gradients of broadcast operands"""
        a = Tensor(np.arange(6.0).reshape(2, 3), requires_grad=True)
        b = Tensor(np.array([1.0, 2.0, 3.0]), requires_grad=True)
        backward((a * b).sum())
        np.testing.assert_allclose(a.grad, np.broadcast_to(b.data, (2, 3)))
        np.testing.assert_allclose(b.grad, a.data.sum(axis=0))

    def test_fan_out_sums_gradients(self) -> None:
        """Test case for a leaf used by several operations"""
        x = Tensor(np.array([1.5, -2.0, 0.25]), requires_grad=True)
        backward((x * x + x).sum())
        np.testing.assert_allclose(x.grad, 2 * x.data + 1, rtol=1e-6)

    def test_gradients_accumulate_across_backward_calls(self) -> None:
        """Test case for summing into existing .grad buffers"""
        x = Tensor(np.array([1.0, 2.0]), requires_grad=True)
        backward((x * 3.0).sum())
        backward((x * 3.0).sum())
        np.testing.assert_allclose(x.grad, [6.0, 6.0])
        x.zero_grad()
        self.assertIsNone(x.grad)

    def test_tape_cleared_after_backward(self) -> None:
        """Test case for a fresh graph per step"""
        x = Tensor(np.ones((2, 2)), requires_grad=True)
        loss = (x * x).mean()
        self.assertGreater(len(self.tape), 0)
        backward(loss)
        self.assertEqual(len(self.tape), 0)

    def test_no_grad_records_nothing(self) -> None:
        """Test case for no_grad"""
        x = Tensor(np.ones(3), requires_grad=True)
        with no_grad():
            y = x * 2.0
        self.assertFalse(y.requires_grad)
        self.assertEqual(len(self.tape), 0)
        self.assertTrue(y.is_leaf)

    def test_backward_needs_scalar(self) -> None:
        """Test case for backward on a non-scalar loss"""
        x = Tensor(np.ones(3), requires_grad=True)
        with self.assertRaises(GradientError):
            backward(x * 2.0)

    def test_backward_without_history_is_noop(self) -> None:
        """Test case for a loss that does not depend on any trainable leaf"""
        loss = Tensor(np.zeros(()))
        backward(loss)
        self.assertIsNone(loss.grad)

    def test_leaf_loss(self) -> None:
        """Test case for backward called on a leaf"""
        x = Tensor(np.array(2.0), requires_grad=True)
        backward(x)
        np.testing.assert_allclose(x.grad, 1.0)

    def test_non_finite_output_raises(self) -> None:
        """Test case for the finiteness check of Function.apply"""
        with np.errstate(divide="ignore"):
            with self.assertRaises(NonFiniteError) as ctx:
                Tensor(np.array([0.0, 1.0])).log()
        self.assertIn("Log", str(ctx.exception))

    def test_item_needs_single_element(self) -> None:
        """Test case for item"""
        self.assertEqual(Tensor(np.array([4.0])).item(), 4.0)
        with self.assertRaises(ShapeMismatchError):
            Tensor(np.ones(2)).item()

    def test_default_dtype_context(self) -> None:
        """Test case for default_dtype"""
        self.assertEqual(get_default_dtype(), np.float32)
        with default_dtype(np.float64):
            self.assertEqual(Tensor([1.0]).data.dtype, np.float64)
        self.assertEqual(Tensor([1.0]).data.dtype, np.float32)

    def test_tape_is_per_context(self) -> None:
        """Test case for use_tape"""
        self.assertIs(get_tape(), self.tape)
        other = Tape()
        with use_tape(other):
            Tensor(np.ones(2), requires_grad=True) * 2.0
        self.assertEqual(len(other), 1)
        self.assertEqual(len(self.tape), 0)

    def test_elementwise_gradcheck(self) -> None:
        """Test case for finite-difference checks of the arithmetic primitives"""
        for seed in range(20):
            rng = np.random.default_rng(seed)
            a = rng.uniform(-1.0, 1.0, size=(2, 3))
            b = rng.uniform(0.5, 1.5, size=(3,)) * rng.choice([-1.0, 1.0], size=(3,))
            errors = gradcheck(lambda x, y: (x * y - x / y + (-x)).reshape(3, 2).mean(axis=0), [a, b], seed=seed)
            for err in errors:
                self.assertLess(err, 1e-3)

    def test_log_sum_gradcheck(self) -> None:
        """Test case for finite-difference checks of log and keepdims sums"""
        for seed in range(20):
            a = np.random.default_rng(seed).uniform(0.5, 2.0, size=(2, 2, 3))
            errors = gradcheck(lambda x: x.log().sum(axis=(0, 2), keepdims=True), [a], seed=seed)
            self.assertLess(errors[0], 1e-3)

    @settings(max_examples=20, deadline=None)
    @given(rows=st.integers(1, 4), cols=st.integers(1, 4))
    def test_mean_gradient_is_uniform(self, rows: int, cols: int) -> None:
        """Test case for mean over every shape"""
        with use_tape(Tape()):
            x = Tensor(np.ones((rows, cols)), requires_grad=True)
            backward(x.mean())
            np.testing.assert_allclose(x.grad, np.full((rows, cols), 1.0 / (rows * cols)), rtol=1e-6)


if __name__ == '__main__':
    unittest.main()
