"""Robust estimation and testing for one-shot devices under competing risks."""

from ._oneshot import *  # noqa: F401,F403
from ._oneshot import __doc__  # noqa: F401
