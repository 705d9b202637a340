"""Numeration core: Q(phi) arithmetic, Zeckendorf words, the adic odometer."""
