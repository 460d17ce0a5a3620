"""Exact computations with racks on conjugacy classes of W(B_n) and W(D_n)."""

__version__ = "0.1.0"
