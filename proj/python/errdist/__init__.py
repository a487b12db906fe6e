"""Residual-based estimation of the error distribution in nonparametric regression."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
