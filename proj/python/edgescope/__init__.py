"""Polynomial reservoir computers driven to the edge of stability."""

from edgescope._core import *  # noqa: F401,F403

__version__ = "0.1.0"
