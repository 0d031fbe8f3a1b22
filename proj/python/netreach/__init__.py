"""Reachability analysis and minimum-energy steering for leader-follower networks."""

from ._netreach import *  # noqa: F401,F403
from ._netreach import __doc__  # noqa: F401

__version__ = "1.0.0"
