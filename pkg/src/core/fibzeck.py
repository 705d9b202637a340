"""Fibonacci numbers and Zeckendorf digit words.

Position k of a word holds the coefficient of F_k (F_1 = F_2 = 1); positions
start at 2. Words are rendered most-significant digit first, so "101" is
F_4 + F_2 = 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

from src.exceptions import DomainError, InadmissibleWordError

_FIBS: List[int] = [0, 1, 1]


def fib(k: int) -> int:
    """Return F_k with F_1 = F_2 = 1.

    Args:
        k: Index, k >= 1

    Returns:
        The k-th Fibonacci number

    Raises:
        DomainError: If k <= 0
    """
    if k <= 0:
        raise DomainError(f"fib index must be >= 1, got {k}")
    while len(_FIBS) <= k:
        _FIBS.append(_FIBS[-1] + _FIBS[-2])
    return _FIBS[k]


def fib_floor_index(r: int) -> int:
    """The unique l >= 2 with F_l <= r < F_{l+1}.

    Raises:
        DomainError: If r < 1
    """
    if r < 1:
        raise DomainError(f"fib_floor_index needs r >= 1, got {r}")
    k = 2
    while fib(k + 1) <= r:
        k += 1
    return k


def is_fibonacci(r: int) -> bool:
    if r < 1:
        return False
    return fib(fib_floor_index(r)) == r


@dataclass(frozen=True)
class DigitWord:
    """Admissible digit word; ``digits[0]`` is the digit at position 2."""

    digits: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        _check_admissible(self.digits, str(self))

    @classmethod
    def from_string(cls, text: str) -> "DigitWord":
        """Parse a most-significant-first string of 0/1 characters.

        Raises:
            InadmissibleWordError: On non-binary characters or adjacent ones
        """
        s = text.strip()
        if any(ch not in "01" for ch in s):
            raise InadmissibleWordError(s, "digits must be 0 or 1")
        return cls(tuple(int(ch) for ch in reversed(s)))

    @classmethod
    def from_positions(cls, positions: Iterable[int], length: int = 0) -> "DigitWord":
        """Word with ones at the given positions (>= 2), padded to ``length`` digits."""
        ones = sorted(set(positions))
        if ones and ones[0] < 2:
            raise DomainError(f"digit positions start at 2, got {ones[0]}")
        size = max(length, (ones[-1] - 1) if ones else 0)
        digits = [0] * size
        for p in ones:
            digits[p - 2] = 1
        return cls(tuple(digits))

    def __len__(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        return "".join(str(d) for d in reversed(self.digits))

    def digit(self, position: int) -> int:
        """Digit at ``position``; zero outside the word."""
        i = position - 2
        if 0 <= i < len(self.digits):
            return self.digits[i]
        return 0

    @property
    def top(self) -> int:
        """Position of the most significant one (0 for the zero word)."""
        for i in range(len(self.digits) - 1, -1, -1):
            if self.digits[i]:
                return i + 2
        return 0

    def ones(self) -> List[int]:
        """Positions holding a one, lowest first."""
        return [i + 2 for i, d in enumerate(self.digits) if d]

    def is_canonical(self) -> bool:
        return not self.digits or self.digits[-1] == 1

    def canonical(self) -> "DigitWord":
        top = self.top
        return DigitWord(self.digits[: top - 1] if top else ())

    def padded(self, length: int) -> "DigitWord":
        if length <= len(self.digits):
            return self
        return DigitWord(self.digits + (0,) * (length - len(self.digits)))

    @property
    def value(self) -> int:
        return sum(fib(i + 2) for i, d in enumerate(self.digits) if d)


WordLike = Union[DigitWord, str, Sequence[int]]


def _check_admissible(digits: Sequence[int], label: str) -> None:
    for i, d in enumerate(digits):
        if d not in (0, 1):
            raise InadmissibleWordError(label, "digits must be 0 or 1")
        if d and i + 1 < len(digits) and digits[i + 1]:
            raise InadmissibleWordError(label, "adjacent ones")


def as_word(w: WordLike) -> DigitWord:
    if isinstance(w, DigitWord):
        return w
    if isinstance(w, str):
        return DigitWord.from_string(w)
    return DigitWord(tuple(w))


def encode(n: int) -> DigitWord:
    """Greedy Zeckendorf encoding (largest Fibonacci number first).

    Args:
        n: Non-negative integer

    Returns:
        Canonical word with value n; the empty word for 0

    Raises:
        DomainError: If n is negative
    """
    if n < 0:
        raise DomainError(f"cannot encode negative integer {n}")
    if n == 0:
        return DigitWord(())
    top = fib_floor_index(n)
    digits = [0] * (top - 1)
    rest = n
    k = top
    while rest:
        if fib(k) <= rest:
            digits[k - 2] = 1
            rest -= fib(k)
            k -= 2
        else:
            k -= 1
    return DigitWord(tuple(digits))


def decode(w: WordLike) -> int:
    """Sum of digit_k * F_k; leading zeros are ignored.

    Raises:
        InadmissibleWordError: If the word has adjacent ones
    """
    return as_word(w).value


def digit_sum(w: WordLike) -> int:
    """Number of ones in the word (s(n) for w = encode(n))."""
    return sum(as_word(w).digits)


def admissible_words(length: int) -> Iterator[DigitWord]:
    """All admissible words of exactly ``length`` digits (F_{length+2} of them), in value order."""
    if length < 0:
        raise DomainError(f"word length must be >= 0, got {length}")
    for top_first in _admissible_msb(length):
        yield DigitWord(tuple(reversed(top_first)))


def _admissible_msb(length: int) -> Iterator[Tuple[int, ...]]:
    # most-significant digit first; a leading 1 forces the next digit to 0
    if length <= 0:
        yield ()
        return
    for rest in _admissible_msb(length - 1):
        yield (0,) + rest
    if length == 1:
        yield (1,)
        return
    for rest in _admissible_msb(length - 2):
        yield (1, 0) + rest
