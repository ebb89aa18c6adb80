# coding: utf-8

"""
    SynMatch

    U-Net parameter layout, forward shapes, feature taps and gradients.
"""  # noqa: E501


import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from synmatch.exceptions import CheckpointMismatchError, ConfigError, ShapeMismatchError
from synmatch.gradcheck import gradcheck
from synmatch.losses import ce_dice_loss
from synmatch.models.unet_config import UNetConfig
from synmatch.optim import AdamW
from synmatch.tensor import Tape, Tensor, backward, default_dtype, no_grad, use_tape
from synmatch.unet import UNetModel, expected_parameter_count, init_model


def count_by_hand(in_channels: int, classes: int, base: int, depth: int) -> int:
    def unit(cin: int, cout: int) -> int:
        return cout * cin * 9 + cout * 3

    widths = [base * 2 ** level for level in range(depth)]
    total = 0
    previous = in_channels
    for width in widths:
        total += unit(previous, width) + unit(width, width)
        previous = width
    for level in reversed(range(depth - 1)):
        total += unit(widths[level + 1], widths[level])
        total += unit(widths[level] * 2, widths[level]) + unit(widths[level], widths[level])
    return total + base * classes + classes


class TestUNetModel(unittest.TestCase):
    """UNetModel unit test stubs"""

    def setUp(self) -> None:
        self.config = UNetConfig(in_channels=1, num_classes=3, base_channels=4, depth=3, norm_groups=2)
        self.model = init_model(self.config, seed=0)
        self._ctx = use_tape(Tape())
        self._ctx.__enter__()

    def tearDown(self) -> None:
        self._ctx.__exit__(None, None, None)

    def test_parameter_count_closed_form(self) -> None:
        """Test case for depth=4, base=16, in=1, classes=4"""
        config = UNetConfig(in_channels=1, num_classes=4, base_channels=16, depth=4, norm_groups=4)
        model = init_model(config)
        self.assertEqual(model.num_parameters(), count_by_hand(1, 4, 16, 4))
        self.assertEqual(expected_parameter_count(config), count_by_hand(1, 4, 16, 4))

    def test_layout_names_and_shapes(self) -> None:
        """Test case for the parameter registry"""
        layout = dict(UNetModel.layout(self.config))
        self.assertEqual(layout["enc0.conv1.weight"], (4, 1, 3, 3))
        self.assertEqual(layout["enc2.conv2.weight"], (16, 16, 3, 3))
        self.assertEqual(layout["dec0.up.weight"], (4, 8, 3, 3))
        self.assertEqual(layout["dec0.conv1.weight"], (4, 8, 3, 3))
        self.assertEqual(layout["head.weight"], (3, 4, 1, 1))
        self.assertEqual(list(layout), [name for name, _ in self.model.parameters()])

    def test_initialization(self) -> None:
        """Test case for He weights, zero biases and shifts, unit gains"""
        params = self.model.params
        np.testing.assert_array_equal(params["enc0.conv1.bias"].data, 0.0)
        np.testing.assert_array_equal(params["enc0.conv1.shift"].data, 0.0)
        np.testing.assert_array_equal(params["enc0.conv1.gain"].data, 1.0)
        big = init_model(UNetConfig(base_channels=32, depth=2, norm_groups=4), seed=1)
        w = big.params["enc1.conv2.weight"].data
        self.assertAlmostEqual(float(w.std()), np.sqrt(2.0 / (64 * 9)), delta=0.005)
        self.assertTrue(all(p.requires_grad for _, p in self.model.parameters()))

    def test_init_is_seeded(self) -> None:
        """Test case for reproducible initialization"""
        again = init_model(self.config, seed=0)
        other = init_model(self.config, seed=1)
        for name, param in self.model.parameters():
            np.testing.assert_array_equal(param.data, again.params[name].data)
        self.assertFalse(np.array_equal(self.model.params["enc0.conv1.weight"].data,
                                        other.params["enc0.conv1.weight"].data))

    def test_init_needs_config(self) -> None:
        """Test case for init_model argument validation"""
        with self.assertRaises(ConfigError):
            init_model({"depth": 3})

    def test_forward_with_taps_shapes(self) -> None:
        """Test case for full-resolution logits and taps"""
        x = Tensor(np.random.default_rng(0).uniform(size=(2, 1, 16, 16)))
        out = self.model.forward_with_taps(x)
        self.assertEqual(out.logits.shape, (2, 3, 16, 16))
        self.assertEqual(out.texture.shape, (2, 4, 16, 16))
        self.assertEqual(out.shape.shape, (2, 4, 16, 16))
        # taps are taken after ReLU
        self.assertGreaterEqual(float(out.texture.data.min()), 0.0)
        self.assertGreaterEqual(float(out.shape.data.min()), 0.0)
        np.testing.assert_array_equal(self.model(x).data, out.logits.data)

    @settings(max_examples=15, deadline=None)
    @given(depth=st.integers(2, 4), base=st.sampled_from([2, 4, 6]), kh=st.integers(1, 3), kw=st.integers(1, 3),
           n=st.integers(1, 2))
    def test_tap_shapes_follow_config(self, depth: int, base: int, kh: int, kw: int, n: int) -> None:
        """Test case for texture and shape taps at input resolution with base_channels channels"""
        config = UNetConfig(in_channels=1, num_classes=3, base_channels=base, depth=depth, norm_groups=2)
        model = init_model(config, seed=0)
        h, w = kh * config.divisor, kw * config.divisor
        x = np.random.default_rng(depth).uniform(size=(n, 1, h, w))
        with no_grad():
            out = model.forward_with_taps(Tensor(x))
        self.assertEqual(out.texture.shape, (n, base, h, w))
        self.assertEqual(out.shape.shape, (n, base, h, w))
        self.assertEqual(out.logits.shape, (n, 3, h, w))

    def test_adamw_lowers_supervised_loss(self) -> None:
        """Test case for a few optimizer steps on a fixed batch"""
        config = UNetConfig(in_channels=1, num_classes=3, base_channels=4, depth=2, norm_groups=2)
        model = init_model(config, seed=0)
        optimizer = AdamW(dict(model.parameters()), lr=1e-2)
        x = np.random.default_rng(4).uniform(size=(2, 1, 8, 8))
        y = (x[:, 0] > 0.4).astype(np.int64) + (x[:, 0] > 0.8).astype(np.int64)
        losses = []
        for _ in range(10):
            optimizer.zero_grad()
            loss = ce_dice_loss(model.forward(Tensor(x)), y)
            losses.append(float(loss.data.reshape(-1)[0]))
            backward(loss)
            optimizer.step()
        self.assertLess(losses[-1], losses[0])
        self.assertLess(min(losses[5:]), losses[0])

    def test_nearest_upsampling(self) -> None:
        """Test case for the nearest decoder variant"""
        model = init_model(self.config.model_copy(update={"upsample": "nearest"}))
        self.assertEqual(model.forward(Tensor(np.zeros((1, 1, 8, 8)))).shape, (1, 3, 8, 8))

    def test_input_not_divisible(self) -> None:
        """Test case for spatial sizes that do not survive pooling"""
        with self.assertRaises(ShapeMismatchError) as ctx:
            self.model.forward(Tensor(np.zeros((1, 1, 10, 12))))
        self.assertEqual(ctx.exception.path_to_item, ["forward_with_taps", "x", 2])

    def test_wrong_channel_count(self) -> None:
        """Test case for an RGB batch fed to a grayscale model"""
        with self.assertRaises(ShapeMismatchError):
            self.model.forward(Tensor(np.zeros((1, 3, 16, 16))))

    def test_load_state_arrays(self) -> None:
        """Test case for restoring, missing and mis-shaped parameters"""
        other = init_model(self.config, seed=5)
        other.load_state_arrays(self.model.state_arrays())
        for name, param in other.parameters():
            np.testing.assert_array_equal(param.data, self.model.params[name].data)

        arrays = self.model.state_arrays()
        del arrays["head.bias"]
        with self.assertRaises(CheckpointMismatchError) as ctx:
            other.load_state_arrays(arrays)
        self.assertEqual(ctx.exception.tensor_name, "head.bias")

        arrays = self.model.state_arrays()
        arrays["head.weight"] = np.zeros((2, 4, 1, 1), dtype=np.float32)
        with self.assertRaises(CheckpointMismatchError):
            other.load_state_arrays(arrays)

    def test_first_layer_gradcheck(self) -> None:
        """Test case for d(loss)/d(first-layer weights) against finite differences"""
        config = UNetConfig(in_channels=1, num_classes=3, base_channels=4, depth=2, norm_groups=2)
        with default_dtype(np.float64):
            model = init_model(config, seed=3)
        rng = np.random.default_rng(3)
        x = rng.uniform(size=(1, 1, 8, 8))
        y = rng.integers(0, 3, size=(1, 8, 8))

        def loss(weight):
            params = dict(model.params)
            params["enc0.conv1.weight"] = weight
            return ce_dice_loss(UNetModel(config, params).forward(Tensor(x)), y)

        errors = gradcheck(loss, [model.params["enc0.conv1.weight"].data], eps=1e-7, seed=3)
        self.assertLess(errors[0], 1e-3)


if __name__ == '__main__':
    unittest.main()
