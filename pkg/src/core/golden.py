"""Exact arithmetic in Q(phi), phi = (1 + sqrt 5) / 2.

Elements are stored as a + b*phi with rational a, b. Since phi^2 = phi + 1
every power of phi has this shape (phi^k = F_k phi + F_{k-1}), so all masses
of the invariant measure are exact GoldenNumbers.
"""

from __future__ import annotations

import functools
import math
import re
from fractions import Fraction
from typing import Any, Dict, Union

from src.exceptions import DomainError

Rational = Union[int, Fraction]

_SQRT5 = math.sqrt(5.0)
PHI_FLOAT = (1.0 + _SQRT5) / 2.0

# phi and 1 - phi to 60 places, far below float resolution after rounding
_PHI_EXACT = Fraction("1.618033988749894848204586834365638117720309179805762862135449")
_PSI_EXACT = 1 - _PHI_EXACT

_TERM_RE = re.compile(
    r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*?\s*phi)?\s*",
    re.IGNORECASE,
)


def _signed_fib(n: int) -> int:
    """F_n for any integer n, with F_{-n} = (-1)^(n+1) F_n."""
    if n >= 0:
        a, b = 0, 1
        for _ in range(n):
            a, b = b, a + b
        return a
    m = -n
    return _signed_fib(m) if m % 2 == 1 else -_signed_fib(m)


@functools.total_ordering
class GoldenNumber:
    """An exact element a + b*phi of Q(phi)."""

    __slots__ = ("a", "b")

    def __init__(self, a: Rational = 0, b: Rational = 0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    # -- construction -------------------------------------------------------

    @classmethod
    def coerce(cls, value: Any) -> "GoldenNumber":
        if isinstance(value, GoldenNumber):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value, 0)
        raise TypeError(f"Cannot convert {type(value).__name__} to GoldenNumber")

    @classmethod
    def phi(cls) -> "GoldenNumber":
        return cls(0, 1)

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "GoldenNumber":
        return cls(Fraction(str(data["a"])), Fraction(str(data["b"])))

    @classmethod
    def parse(cls, text: str) -> "GoldenNumber":
        """Parse the textual form ``a+b*phi`` (e.g. ``2-phi``, ``1/3+2/5*phi``).

        Args:
            text: Sum of rational terms, each optionally multiplied by phi

        Returns:
            The parsed GoldenNumber

        Raises:
            ValueError: If the text is not of that form
        """
        s = text.strip()
        if not s:
            raise ValueError("empty golden number")
        a = Fraction(0)
        b = Fraction(0)
        pos = 0
        while pos < len(s):
            m = _TERM_RE.match(s, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise ValueError(f"cannot parse golden number {text!r}")
            if pos > 0 and not m.group(1):
                raise ValueError(f"missing operator in {text!r}")
            coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if m.group(1) == "-":
                coeff = -coeff
            if m.group(3):
                b += coeff
            else:
                a += coeff
            pos = m.end()
        return cls(a, b)

    # -- ring operations ------------------------------------------------------

    def __add__(self, other: Any) -> "GoldenNumber":
        try:
            o = GoldenNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return GoldenNumber(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "GoldenNumber":
        try:
            o = GoldenNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return GoldenNumber(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: Any) -> "GoldenNumber":
        return (-self) + other

    def __neg__(self) -> "GoldenNumber":
        return GoldenNumber(-self.a, -self.b)

    def __pos__(self) -> "GoldenNumber":
        return self

    def __mul__(self, other: Any) -> "GoldenNumber":
        try:
            o = GoldenNumber.coerce(other)
        except TypeError:
            return NotImplemented
        # (a + b phi)(c + d phi) with phi^2 = phi + 1
        bd = self.b * o.b
        return GoldenNumber(self.a * o.a + bd, self.a * o.b + self.b * o.a + bd)

    __rmul__ = __mul__

    def conjugate(self) -> "GoldenNumber":
        """Galois conjugate: phi -> 1 - phi."""
        return GoldenNumber(self.a + self.b, -self.b)

    def norm(self) -> Fraction:
        """Field norm a^2 + ab - b^2, zero only for 0."""
        return self.a * self.a + self.a * self.b - self.b * self.b

    def inv(self) -> "GoldenNumber":
        """Multiplicative inverse.

        Raises:
            ZeroDivisionError: For the zero element
        """
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GoldenNumber division by zero")
        c = self.conjugate()
        return GoldenNumber(c.a / n, c.b / n)

    def __truediv__(self, other: Any) -> "GoldenNumber":
        try:
            o = GoldenNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other: Any) -> "GoldenNumber":
        return GoldenNumber.coerce(other) * self.inv()

    def __pow__(self, exponent: int) -> "GoldenNumber":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inv() ** (-exponent)
        result = GoldenNumber(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- ordering -------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of a + b*phi.

        2(a + b phi) = u + v sqrt5 with u = 2a + b, v = b; the sign is decided by
        comparing u^2 with 5 v^2 when u and v disagree.
        """
        u = 2 * self.a + self.b
        v = self.b
        if u >= 0 and v >= 0:
            return 0 if (u == 0 and v == 0) else 1
        if u <= 0 and v <= 0:
            return -1
        diff = u * u - 5 * v * v
        if u > 0:
            return 1 if diff > 0 else -1
        return 1 if diff < 0 else -1

    def __eq__(self, other: Any) -> bool:
        try:
            o = GoldenNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other: Any) -> bool:
        try:
            o = GoldenNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __abs__(self) -> "GoldenNumber":
        return -self if self.sign() < 0 else self

    # -- conversion -----------------------------------------------------------

    def to_float(self) -> float:
        """Nearest float to a + b*phi.

        When a and b disagree in sign the value is evaluated as
        norm / (a + b*psi), a quotient of same-sign sums, so no digits cancel.

        Raises:
            DomainError: If the value lies outside the float range
        """
        if self.b == 0:
            exact = self.a
        elif (self.a >= 0) == (self.b > 0):
            exact = self.a + self.b * _PHI_EXACT
        else:
            exact = self.norm() / (self.a + self.b * _PSI_EXACT)
        try:
            return float(exact)
        except OverflowError:
            raise DomainError("value is outside the float range") from None

    __float__ = to_float

    def to_json(self) -> Dict[str, Any]:
        return {"a": str(self.a), "b": str(self.b), "approx": self.to_float()}

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.b == 1:
            b_part = "phi"
        elif self.b == -1:
            b_part = "-phi"
        else:
            b_part = f"{self.b}*phi"
        if self.a == 0:
            return b_part
        sep = "" if b_part.startswith("-") else "+"
        return f"{self.a}{sep}{b_part}"

    def __repr__(self) -> str:
        return f"GoldenNumber({str(self.a)!r}, {str(self.b)!r})"


ZERO = GoldenNumber(0)
ONE = GoldenNumber(1)
PHI = GoldenNumber(0, 1)


@functools.lru_cache(maxsize=4096)
def phi_pow(k: int) -> GoldenNumber:
    """phi^k for any integer k, as F_k phi + F_{k-1}.

    Args:
        k: Exponent, negative allowed

    Returns:
        Exact power of phi
    """
    return GoldenNumber(_signed_fib(k - 1), _signed_fib(k))


def golden_sum(values) -> GoldenNumber:
    """Exact sum of an iterable of GoldenNumbers (empty sum is 0)."""
    a = Fraction(0)
    b = Fraction(0)
    for v in values:
        g = GoldenNumber.coerce(v)
        a += g.a
        b += g.b
    return GoldenNumber(a, b)
