"""Tests for zecklab."""
