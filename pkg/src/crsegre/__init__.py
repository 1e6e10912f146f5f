"""Segre sets, minimality and Levi-flat containment for CR submanifolds."""

__version__ = "0.1.0"
