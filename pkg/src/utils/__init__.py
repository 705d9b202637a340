"""Output rendering helpers."""
