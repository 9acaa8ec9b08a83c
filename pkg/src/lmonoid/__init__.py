"""Finite idempotent ordered monoids: nested sums, congruences, equations,
varieties and amalgamation."""

from .core import *  # noqa: F401,F403
from .nested import *  # noqa: F401,F403
from .terms import *  # noqa: F401,F403
from .congruence import *  # noqa: F401,F403
from .variety import *  # noqa: F401,F403
from .amalgamation import *  # noqa: F401,F403

__version__ = "0.1.0"
