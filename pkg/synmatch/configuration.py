# coding: utf-8

"""
    SynMatch

    Process-level settings: logging, worker threads and determinism.
"""  # noqa: E501


import copy
import logging
from logging import FileHandler
import os
import platform
import sys
from typing import Any, ClassVar, Dict, Optional

import numpy as np
from typing_extensions import Self

from synmatch.exceptions import ConfigError


THREADS_ENV_VAR = "SYNMATCH_THREADS"


def _threads_from_env() -> int:
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or raw.strip() == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(
            "{0} must be an integer, got {1!r}".format(THREADS_ENV_VAR, raw))
    return max(1, value)


class Configuration:
    """This class contains the runtime settings of the package.

    :param threads: Upper bound on worker threads used for batch preparation.
      Defaults to the `SYNMATCH_THREADS` environment variable, else 1.
    :param deterministic: When True, every random stream of a training run is
      keyed by the configured seed; when False the trainer draws a fresh run
      seed from OS entropy and logs it.
    :param progress: Show a tqdm progress bar while training.
    :param ignore_index: Label value of unannotated scribble pixels; written by
      gen-data and checked against the dataset manifest when training.
    :param debug: Turn on DEBUG logging for every package logger.

    :Example:

conf = synmatch.Configuration(threads=4)
conf.logger_file = "runs/exp1/train.log"
synmatch.Configuration.set_default(conf)
    """

    _default: ClassVar[Optional[Self]] = None
    # one console handler per process, shared by every instance
    _console_handler: ClassVar[Optional[logging.Handler]] = None

    def __init__(
        self,
        threads: Optional[int] = None,
        deterministic: bool = True,
        progress: bool = False,
        ignore_index: int = 255,
        *,
        debug: Optional[bool] = None,
    ) -> None:
        """Constructor
        """
        self.threads = _threads_from_env() if threads is None else max(1, int(threads))
        """Worker thread cap
        """
        self.deterministic = deterministic
        """Determinism switch
        """
        self.progress = progress
        """Progress bar switch
        """
        if not 0 <= ignore_index <= 255:
            raise ConfigError("ignore_index must fit in u8", ["ignore_index"])
        self.ignore_index = ignore_index
        """Ignore value for scribble maps
        """
        self.logger = {}
        """Logging Settings
        """
        self.logger["package_logger"] = logging.getLogger("synmatch")
        self.logger_format = '%(asctime)s %(levelname)s %(name)s %(message)s'
        """Log format
        """
        self.logger_stream_handler = None
        """Log stream handler
        """
        self.logger_file_handler: Optional[FileHandler] = None
        """Log file handler
        """
        self.logger_file = None
        """Debug file location
        """
        if debug is not None:
            self.debug = debug
        else:
            self.__debug = False
        """Debug switch
        """

    def __deepcopy__(self, memo: Dict[int, Any]) -> Self:
        cls = self.__class__
        result = cls.__new__(cls)
        memo[id(self)] = result
        for k, v in self.__dict__.items():
            if k not in ('logger', 'logger_file_handler', 'logger_stream_handler'):
                setattr(result, k, copy.deepcopy(v, memo))
        # shallow copy of loggers
        result.logger = copy.copy(self.logger)
        result.logger_stream_handler = self.logger_stream_handler
        result.logger_file_handler = None
        # use setters to configure loggers
        result.logger_file = self.logger_file
        result.debug = self.debug
        return result

    @classmethod
    def set_default(cls, default: Optional[Self]) -> None:
        """Set default instance of configuration.

        :param default: object of Configuration
        """
        cls._default = default

    @classmethod
    def get_default(cls) -> Self:
        """Return the default configuration, creating it on first use.

        :return: The configuration object.
        """
        if cls._default is None:
            cls._default = cls()
        return cls._default

    @property
    def logger_file(self) -> Optional[str]:
        """The logger file.

        If set, a file handler with the current format is attached to the
        package logger.

        :param value: The logger_file path.
        :type: str
        """
        return self.__logger_file

    @logger_file.setter
    def logger_file(self, value: Optional[str]) -> None:
        self.__logger_file = value
        if self.logger_file_handler is not None:
            for _, logger in self.logger.items():
                logger.removeHandler(self.logger_file_handler)
            self.logger_file_handler.close()
            self.logger_file_handler = None
        if self.__logger_file:
            self.logger_file_handler = logging.FileHandler(self.__logger_file)
            self.logger_file_handler.setFormatter(self.logger_formatter)
            for _, logger in self.logger.items():
                logger.addHandler(self.logger_file_handler)

    @property
    def debug(self) -> bool:
        """Debug status

        :param value: The debug status, True or False.
        :type: bool
        """
        return self.__debug

    @debug.setter
    def debug(self, value: bool) -> None:
        self.__debug = value
        if self.__debug:
            for _, logger in self.logger.items():
                logger.setLevel(logging.DEBUG)
        else:
            # default level `logging.WARNING`
            for _, logger in self.logger.items():
                logger.setLevel(logging.WARNING)

    @property
    def logger_format(self) -> str:
        """The logger format.

        The logger_formatter will be updated when sets logger_format.

        :param value: The format string.
        :type: str
        """
        return self.__logger_format

    @logger_format.setter
    def logger_format(self, value: str) -> None:
        self.__logger_format = value
        self.logger_formatter = logging.Formatter(self.__logger_format)

    def enable_console_logging(self, level: int = logging.INFO) -> None:
        """Attach a stream handler to the package logger (used by the CLI)."""
        cls = type(self)
        if cls._console_handler is None:
            cls._console_handler = logging.StreamHandler()
        cls._console_handler.setFormatter(self.logger_formatter)
        self.logger_stream_handler = cls._console_handler
        for _, logger in self.logger.items():
            if cls._console_handler not in logger.handlers:
                logger.addHandler(cls._console_handler)
        if not self.debug:
            for _, logger in self.logger.items():
                logger.setLevel(level)

    def to_debug_report(self) -> str:
        """Gets the essential information for debugging.

        :return: The report for debugging.
        """
        from synmatch import __version__
        return "SynMatch Debug Report:\n"\
               "OS: {env}\n"\
               "Python Version: {pyversion}\n"\
               "NumPy Version: {npversion}\n"\
               "Machine: {machine}\n"\
               "Threads: {threads}\n"\
               "Package Version: {version}".\
               format(env=sys.platform, pyversion=sys.version,
                      npversion=np.__version__, machine=platform.machine(),
                      threads=self.threads, version=__version__)
