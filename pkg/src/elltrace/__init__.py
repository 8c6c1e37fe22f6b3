"""Elliptic-term arithmetic for GL(2) over the rationals and real quadratic fields."""

from __future__ import annotations

__version__ = "0.1.0"
