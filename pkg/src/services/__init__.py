"""Exact distributions, invariant measure, blocks and mixing estimators."""
