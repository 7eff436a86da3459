"""Exact decision and certification toolkit for sums of squares on reducible real affine curves."""

__version__ = "0.1.0"
