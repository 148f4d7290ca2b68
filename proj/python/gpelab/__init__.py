"""Stationary states, stability spectra, and time evolution for the quasi-1D
Gross-Pitaevskii equation.

Everything is implemented in the C++ core; this package re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
