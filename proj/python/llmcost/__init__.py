"""Training compute, time and cost estimates for large models."""

from ._core import *  # noqa: F401,F403
from ._core import ConfigError, __doc__  # noqa: F401

__version__ = "0.1.0"
