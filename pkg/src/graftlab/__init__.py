"""Exact checkers for forest-indexed sign calculus, foresty categories and their dg nerves."""

__version__ = "0.1.0"
