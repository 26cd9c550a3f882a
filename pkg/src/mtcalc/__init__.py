"""Numerical toolkit for modular tensor categories, modular invariants and Cardy algebras."""
from __future__ import annotations

from .category import Category, InputError, builtin, load_category, validate_category
from .report import CheckReport

__all__ = ["Category", "CheckReport", "InputError", "builtin", "load_category", "validate_category"]
