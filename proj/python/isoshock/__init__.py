"""Plane-shock perturbation laboratory for 2-D isothermal Euler flow."""

from ._isoshock import *  # noqa: F401,F403
from ._isoshock import __version__
