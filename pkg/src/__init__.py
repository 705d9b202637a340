"""zecklab - Zeckendorf odometer, exact digit-sum distributions and mixing estimates."""

__version__ = "1.0.0"
