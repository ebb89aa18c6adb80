# coding: utf-8

"""
    SynMatch

    U-Net backbone whose forward pass also returns the two feature taps used
    for image synthesis: the texture tap (output of the first encoder block)
    and the shape tap (output of the last decoder block, i.e. the input of the
    1x1 segmentation head). Both are full resolution with `base_channels`
    channels and are taken after normalization and ReLU.
"""  # noqa: E501

from __future__ import annotations

import logging
from typing import Dict, Iterator, List, Mapping, Tuple

import numpy as np

from synmatch import functional as F
from synmatch.exceptions import CheckpointMismatchError, ConfigError, ShapeMismatchError
from synmatch.models.tapped_output import TappedOutput
from synmatch.models.unet_config import UNetConfig
from synmatch.tensor import Tensor, get_default_dtype

logger = logging.getLogger(__name__)


def unit_parameter_count(cin: int, cout: int, kernel: int = 3) -> int:
    """conv weight + bias + norm gain + norm shift."""
    return kernel * kernel * cin * cout + cout + 2 * cout


class UNetModel:
    """Encoder-decoder with skip connections and named tap points.

    Parameters live in an ordered name -> Tensor registry; the layout is a
    pure function of the config.
    """

    def __init__(self, config: UNetConfig, params: Dict[str, Tensor]) -> None:
        self.config = config
        self.params = params

    # -- registry ---------------------------------------------------------
    @staticmethod
    def layout(config: UNetConfig) -> List[Tuple[str, Tuple[int, ...]]]:
        """Parameter names and shapes in registry order."""
        shapes: List[Tuple[str, Tuple[int, ...]]] = []

        def unit(prefix: str, cin: int, cout: int) -> None:
            shapes.append((prefix + ".weight", (cout, cin, 3, 3)))
            shapes.append((prefix + ".bias", (cout,)))
            shapes.append((prefix + ".gain", (cout,)))
            shapes.append((prefix + ".shift", (cout,)))

        channels = config.level_channels()
        cin = config.in_channels
        for level, cout in enumerate(channels):
            unit("enc{0}.conv1".format(level), cin, cout)
            unit("enc{0}.conv2".format(level), cout, cout)
            cin = cout
        for level in range(config.depth - 2, -1, -1):
            cout = channels[level]
            unit("dec{0}.up".format(level), channels[level + 1], cout)
            unit("dec{0}.conv1".format(level), 2 * cout, cout)
            unit("dec{0}.conv2".format(level), cout, cout)
        shapes.append(("head.weight", (config.num_classes, config.base_channels, 1, 1)))
        shapes.append(("head.bias", (config.num_classes,)))
        return shapes

    def parameters(self) -> Iterator[Tuple[str, Tensor]]:
        return iter(self.params.items())

    def num_parameters(self) -> int:
        return sum(p.size for p in self.params.values())

    def zero_grad(self) -> None:
        for p in self.params.values():
            p.zero_grad()

    def state_arrays(self) -> Dict[str, np.ndarray]:
        return {name: p.data for name, p in self.params.items()}

    def load_state_arrays(self, arrays: Mapping[str, np.ndarray]) -> None:
        """Copy named arrays into the registry; every parameter must be present with its exact shape."""
        for name, param in self.params.items():
            if name not in arrays:
                raise CheckpointMismatchError("missing parameter in checkpoint", name,
                                              expected=param.shape, actual=None)
            value = arrays[name]
            if tuple(value.shape) != param.shape:
                raise CheckpointMismatchError("parameter shape differs from model", name,
                                              expected=param.shape, actual=tuple(value.shape))
        for name, param in self.params.items():
            param.data = np.array(arrays[name], dtype=param.data.dtype, copy=True)

    # -- forward ----------------------------------------------------------
    def _unit(self, prefix: str, x: Tensor) -> Tensor:
        p = self.params
        y = F.conv2d(x, p[prefix + ".weight"], p[prefix + ".bias"], stride=1, padding=1)
        y = F.group_norm(y, self.config.norm_groups, p[prefix + ".gain"], p[prefix + ".shift"])
        return F.relu(y)

    def _block(self, prefix: str, x: Tensor) -> Tensor:
        return self._unit(prefix + ".conv2", self._unit(prefix + ".conv1", x))

    def _upsample(self, x: Tensor) -> Tensor:
        if self.config.upsample == "nearest":
            return F.upsample_nearest2(x)
        return F.upsample_bilinear2(x)

    def forward_with_taps(self, x: Tensor) -> TappedOutput:
        if x.ndim != 4 or x.shape[1] != self.config.in_channels:
            raise ShapeMismatchError("input must be [N, in_channels, H, W]", ["forward_with_taps", "x", 1],
                                     expected=self.config.in_channels, actual=x.shape)
        self.config.check_input(x.shape[2], x.shape[3])

        skips: List[Tensor] = []
        h = x
        for level in range(self.config.depth):
            if level > 0:
                h = F.max_pool2(h)
            h = self._block("enc{0}".format(level), h)
            skips.append(h)
        texture = skips[0]
        for level in range(self.config.depth - 2, -1, -1):
            up = self._unit("dec{0}.up".format(level), self._upsample(h))
            h = self._block("dec{0}".format(level), F.concat_channels([up, skips[level]]))
        shape = h
        logits = F.conv2d(shape, self.params["head.weight"], self.params["head.bias"])
        return TappedOutput(logits=logits, texture=texture, shape=shape)

    def forward(self, x: Tensor) -> Tensor:
        return self.forward_with_taps(x).logits

    __call__ = forward


def expected_parameter_count(config: UNetConfig) -> int:
    channels = config.level_channels()
    total = 0
    cin = config.in_channels
    for cout in channels:
        total += unit_parameter_count(cin, cout) + unit_parameter_count(cout, cout)
        cin = cout
    for level in range(config.depth - 2, -1, -1):
        c = channels[level]
        total += unit_parameter_count(channels[level + 1], c)
        total += unit_parameter_count(2 * c, c) + unit_parameter_count(c, c)
    total += config.base_channels * config.num_classes + config.num_classes
    return total


def init_model(config: UNetConfig, seed: int = 0) -> UNetModel:
    """He-initialized U-Net: conv weights ~ N(0, 2 / fan_in), zero biases, unit gains, zero shifts."""
    if not isinstance(config, UNetConfig):
        raise ConfigError("init_model needs a UNetConfig", ["config"])
    rng = np.random.default_rng(seed)
    dtype = get_default_dtype()
    params: Dict[str, Tensor] = {}
    for name, shape in UNetModel.layout(config):
        kind = name.rsplit(".", 1)[1]
        if kind == "weight":
            fan_in = int(np.prod(shape[1:]))
            value = rng.standard_normal(shape) * np.sqrt(2.0 / fan_in)
        elif kind == "gain":
            value = np.ones(shape)
        else:
            value = np.zeros(shape)
        params[name] = Tensor(value.astype(dtype), requires_grad=True, name=name)
    model = UNetModel(config, params)
    logger.debug("initialized U-Net with %d parameters (seed %d)", model.num_parameters(), seed)
    return model

