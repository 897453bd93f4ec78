"""Bayesian multiple-testing rules for the sparse normal means model.

Global-local shrinkage decision rules (fixed-tau, empirical Bayes, full
Bayes), classical baselines (BH, oracle thresholding, ell-values), and a
Monte Carlo risk laboratory, all backed by the C++ core.
"""

from ._core import *  # noqa: F401,F403
from ._core import __all__ as _core_all

__all__ = list(_core_all)
