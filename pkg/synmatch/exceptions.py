# coding: utf-8

"""
    SynMatch

    Exception hierarchy shared by the tensor engine, the data formats and the
    trainer. Every error raised on purpose by the package derives from
    `SynMatchException`.
"""  # noqa: E501

from typing import Any, Optional, Sequence, Union

PathItem = Union[str, int]


class SynMatchException(Exception):
    """The base exception class for all SynMatch errors"""


class ShapeMismatchError(SynMatchException, ValueError):
    def __init__(self, msg: str, path_to_item: Optional[Sequence[PathItem]] = None,
                 expected: Any = None, actual: Any = None) -> None:
        """ Raised when tensor or map shapes disagree

        Args:
            msg (str): the exception message

        Keyword Args:
            path_to_item (list): operation / argument / dimension leading to
                                 the offending size, e.g.
                                 ['conv2d', 'input', 1]
                                 None if unset
            expected: the size the operation needed
            actual: the size it got
        """
        self.path_to_item = list(path_to_item) if path_to_item else None
        self.expected = expected
        self.actual = actual
        full_msg = msg
        if path_to_item:
            full_msg = "{0} at {1}".format(msg, render_path(path_to_item))
        if expected is not None or actual is not None:
            full_msg = "{0} (expected {1}, got {2})".format(full_msg, expected, actual)
        super(ShapeMismatchError, self).__init__(full_msg)


class CheckpointMismatchError(ShapeMismatchError):
    """A checkpoint tensor does not fit the model it is loaded into."""

    def __init__(self, msg: str, tensor_name: str, expected: Any = None,
                 actual: Any = None) -> None:
        self.tensor_name = tensor_name
        super(CheckpointMismatchError, self).__init__(
            msg, path_to_item=[tensor_name], expected=expected, actual=actual)


class NonFiniteError(SynMatchException, FloatingPointError):
    def __init__(self, msg: str, path_to_item: Optional[Sequence[PathItem]] = None) -> None:
        """
        Args:
            msg (str): the exception message

        Keyword Args:
            path_to_item (list) operation or parameter name that produced the
                NaN/Inf. None if unset
        """
        self.path_to_item = list(path_to_item) if path_to_item else None
        full_msg = msg
        if path_to_item:
            full_msg = "{0} at {1}".format(msg, render_path(path_to_item))
        super(NonFiniteError, self).__init__(full_msg)


class ConfigError(SynMatchException, ValueError):
    def __init__(self, msg: str, path_to_item: Optional[Sequence[PathItem]] = None) -> None:
        """
        Raised for invalid configuration values and for a configuration that
        does not match the dataset manifest.

        Keyword Args:
            path_to_item (None/list) the key path inside the configuration
        """
        self.path_to_item = list(path_to_item) if path_to_item else None
        full_msg = msg
        if path_to_item:
            full_msg = "{0} at {1}".format(msg, render_path(path_to_item))
        super(ConfigError, self).__init__(full_msg)


class FormatError(SynMatchException, ValueError):

    def __init__(self, msg: str, path: Optional[str] = None, offset: Optional[int] = None) -> None:
        self.path = path
        self.offset = offset
        full_msg = msg
        if path is not None:
            full_msg = "{0} in {1}".format(full_msg, path)
        if offset is not None:
            full_msg = "{0} at byte {1}".format(full_msg, offset)
        super(FormatError, self).__init__(full_msg)


class TruncatedFileError(FormatError):
    pass


class GradientError(SynMatchException, RuntimeError):
    pass


class LabelRangeError(SynMatchException, ValueError):
    """A label map holds values outside [0, num_classes) that are not the ignore index."""

    def __init__(self, msg: str, path_to_item: Optional[Sequence[PathItem]] = None,
                 values: Optional[Sequence[int]] = None) -> None:
        self.path_to_item = list(path_to_item) if path_to_item else None
        self.values = list(values) if values is not None else None
        full_msg = msg
        if path_to_item:
            full_msg = "{0} at {1}".format(msg, render_path(path_to_item))
        if values:
            full_msg = "{0}: {1}".format(full_msg, self.values)
        super(LabelRangeError, self).__init__(full_msg)


def render_path(path_to_item: Sequence[PathItem]) -> str:
    """Returns a string representation of a path"""
    result = ""
    for pth in path_to_item:
        if isinstance(pth, int):
            result += "[{0}]".format(pth)
        else:
            result += "['{0}']".format(pth)
    return result
