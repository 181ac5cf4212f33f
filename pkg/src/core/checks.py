"""
Tolerance-aware inequality assertions shared by the builders and oracles.
"""

import logging
from typing import Any

from src.utils.errors import InequalityViolation

logger = logging.getLogger(__name__)

# Relative slack for every asserted inequality; exact on integer instances.
REL_TOL = 1e-9


def within(lhs: float, rhs: float) -> bool:
    """Return True when ``lhs <= rhs`` up to the relative tolerance."""
    return lhs <= rhs + REL_TOL * max(abs(lhs), abs(rhs), 1e-300)


def assert_le(inequality: str, lhs: float, rhs: float, detail: Any = None) -> None:
    """
    Assert ``lhs <= rhs`` up to REL_TOL.

    Raises:
        InequalityViolation: naming ``inequality`` when the bound fails.
    """
    if not within(lhs, rhs):
        logger.error(f"Inequality {inequality} violated: {lhs!r} > {rhs!r} ({detail})")
        raise InequalityViolation(inequality, lhs, rhs, detail)
