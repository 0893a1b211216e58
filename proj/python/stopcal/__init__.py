"""Trailing stop-loss calibration from drawdown distributions.

Thin python surface over the C++ core: market-data loading and synthesis,
the hourly SMA baseline, drawdown-histogram threshold calibration (T and
rolling R variants), stop-managed backtests, and the comparison statistics.
"""

from stopcal._core import *  # noqa: F401,F403
from stopcal._core import __doc__ as _core_doc

__doc__ = _core_doc if _core_doc else __doc__
