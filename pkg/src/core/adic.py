"""Adic Zeckendorf prefixes, the odometer and the addition of Fibonacci numbers.

An AdicPrefix holds the digits x_2..x_L of a (possibly infinite) admissible
sequence; L is its horizon. Operations that would need a digit above L raise
HorizonExhaustedError so the caller can extend the prefix and retry.

The engine works in place on plain lists (index 0 is position 2) and reports
the change in the number of ones, which keeps orbit walks and the block
process cheap. The public functions copy before mutating.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from src.core.fibzeck import DigitWord, WordLike, as_word, encode
from src.exceptions import DomainError, HorizonExhaustedError

W0 = (0, 1, 0, 0, 0)
W1 = (1, 0, 0, 1, 0)


class FibAddCase(str, enum.Enum):
    """Which branch of the F_k addition table fired."""

    ISOLATED = "isolated"                    # x_k = 0, no neighbour: set x_k
    CARRY_LEFT = "carry_left"                # x_k = 0, x_{k+1} = 1: merge upward
    MERGE_RIGHT = "merge_right"              # x_k = 0, x_{k-1} = 1: absorb x_{k-1}, merge upward
    SPLIT_FREE = "split_free"                # x_k = 1, remainder lands on a free digit
    SPLIT_MERGE = "split_merge"              # x_k = 1, remainder merges with a lower one
    SPLIT_MERGE_UNITS = "split_merge_units"  # as above with the merge at position 2
    SPLIT_UNITS_EVEN = "split_units_even"    # x_k = 1, remainder is F_2 placed on x_2 (from F_2)
    SPLIT_UNITS_ODD = "split_units_odd"      # x_k = 1, remainder is F_1 placed on x_2
    SPLIT_FULL = "split_full"                # x_k = 1, nothing remains after the flips


class StoppingKind(str, enum.Enum):
    W0 = "W0"  # window 01000
    W1 = "W1"  # window 10010


@dataclass(frozen=True)
class StoppingPattern:
    kind: StoppingKind
    position: int  # leftmost (most significant) digit of the window


@dataclass(frozen=True)
class AdicPrefix:
    """Digits x_2..x_L of an adic sequence; ``digits[0]`` is x_2."""

    digits: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if not self.digits:
            raise DomainError("an adic prefix needs at least one digit (horizon >= 2)")
        # reuse the word validation for admissibility
        DigitWord(self.digits)

    @classmethod
    def from_int(cls, n: int, r: int = 0, horizon: Optional[int] = None) -> "AdicPrefix":
        """Integer-backed prefix, zero padded so that adding ``r`` is safe.

        Args:
            n: The integer to embed
            r: Largest addend the prefix must be safe for
            horizon: Minimum horizon L

        Returns:
            Prefix of the adic sequence of n (zeros above its top digit)
        """
        word = encode(n)
        length = max(len(word), len(encode(r))) + 4
        if horizon is not None:
            length = max(length, horizon - 1)
        return cls(word.padded(length).digits)

    @classmethod
    def from_word(cls, w: WordLike, horizon: Optional[int] = None) -> "AdicPrefix":
        word = as_word(w)
        length = max(len(word), 1)
        if horizon is not None:
            length = max(length, horizon - 1)
        return cls(word.padded(length).digits)

    @property
    def horizon(self) -> int:
        return len(self.digits) + 1

    def digit(self, position: int) -> int:
        """Digit at ``position``.

        Raises:
            HorizonExhaustedError: If the position lies above the horizon
        """
        if position < 2:
            raise DomainError(f"digit positions start at 2, got {position}")
        if position > self.horizon:
            raise HorizonExhaustedError(position, self.horizon, "digit read")
        return self.digits[position - 2]

    @property
    def word(self) -> DigitWord:
        return DigitWord(self.digits)

    @property
    def value(self) -> int:
        """Integer value of the finite prefix."""
        return self.word.value

    @property
    def ones(self) -> int:
        return sum(self.digits)

    def extended(self, more: Sequence[int]) -> "AdicPrefix":
        return AdicPrefix(self.digits + tuple(more))

    def __str__(self) -> str:
        return str(self.word)


# -- in-place engine ------------------------------------------------------------


def _read(d: List[int], pos: int) -> int:
    if pos > len(d) + 1:
        raise HorizonExhaustedError(pos, len(d) + 1)
    return d[pos - 2]


def _successor_inplace(d: List[int]) -> int:
    """Add one in place; return the change in the number of ones."""
    L = len(d) + 1
    p = 2
    # below the first double zero the digits alternate
    while True:
        if p + 1 > L:
            raise HorizonExhaustedError(p + 1, L, "odometer carry")
        if d[p - 2] == 0 and d[p - 1] == 0:
            break
        p += 1
    if p == 2:
        # ...00 -> ...01
        d[0] = 1
        return 1
    cleared = 0
    if d[0] == 0:
        # 00(10)^l -> 01(00)^l
        for q in range(3, p, 2):
            d[q - 2] = 0
            cleared += 1
    else:
        # 001(01)^l -> 010(00)^l
        for q in range(2, p, 2):
            d[q - 2] = 0
            cleared += 1
    d[p - 2] = 1
    return 1 - cleared


def _clear_run_up(d: List[int], start: int) -> Tuple[int, int]:
    """Clear the ones at start, start+2, ...; return (position after the run, ones cleared).

    The run stops at the first zero; that zero's position is returned.
    """
    q = start
    cleared = 0
    while _read(d, q) == 1:
        d[q - 2] = 0
        cleared += 1
        q += 2
    return q, cleared


def _add_fib_inplace(d: List[int], k: int) -> Tuple[FibAddCase, int]:
    """Add F_k in place; return (case, change in the number of ones)."""
    if k < 2:
        raise DomainError(f"Fibonacci index for addition must be >= 2, got {k}")
    L = len(d) + 1
    if k + 1 > L:
        raise HorizonExhaustedError(k + 1, L)

    if d[k - 2] == 0:
        if d[k - 1] == 1:
            # F_k + F_{k+1} + F_{k+3} + ... collapses into one digit above the run
            q, cleared = _clear_run_up(d, k + 1)
            d[q - 3] = 1  # position q - 1
            return FibAddCase.CARRY_LEFT, 1 - cleared
        if k >= 3 and d[k - 3] == 1:
            # F_{k-1} + F_k = F_{k+1}, which then merges with the run at k+2, k+4, ...
            d[k - 3] = 0
            q, cleared = _clear_run_up(d, k + 2)
            d[q - 3] = 1
            return FibAddCase.MERGE_RIGHT, -cleared
        d[k - 2] = 1
        return FibAddCase.ISOLATED, 1

    # 2 F_k = F_{k+1} + F_{k-2}
    change = -1
    d[k - 2] = 0
    q, cleared = _clear_run_up(d, k + 2)
    d[q - 3] = 1  # position q - 1 = k + 2l + 1
    change += 1 - cleared

    # remainder F_{k-2}: flip (01)^l' -> (10)^l' going down
    t = k - 1
    while t - 1 >= 2 and d[t - 2] == 0 and d[t - 3] == 1:
        d[t - 2] = 1
        d[t - 3] = 0
        t -= 2
    # F_{t-1} is left to add, with x_t = x_{t-1} = 0
    if t >= 4:
        if d[t - 4] == 1:
            d[t - 4] = 0
            d[t - 2] = 1
            case = FibAddCase.SPLIT_MERGE_UNITS if t == 4 else FibAddCase.SPLIT_MERGE
        else:
            d[t - 3] = 1
            change += 1
            case = FibAddCase.SPLIT_FREE
    elif t == 3:
        d[0] = 1
        change += 1
        case = FibAddCase.SPLIT_UNITS_EVEN
    elif t == 2:
        d[0] = 1
        change += 1
        case = FibAddCase.SPLIT_UNITS_ODD
    else:
        case = FibAddCase.SPLIT_FULL
    return case, change


def add_int_inplace(d: List[int], r: int) -> int:
    change = 0
    for k in encode(r).ones():
        _, c = _add_fib_inplace(d, k)
        change += c
    return change


# -- public operations ------------------------------------------------------------


def successor(x: AdicPrefix) -> AdicPrefix:
    """The odometer T: add one.

    Raises:
        HorizonExhaustedError: If no double zero lies below the horizon
    """
    d = list(x.digits)
    _successor_inplace(d)
    return AdicPrefix(tuple(d))


def add_fib(x: AdicPrefix, k: int) -> AdicPrefix:
    """Add F_k by the case table.

    Args:
        x: Prefix
        k: Fibonacci index, k >= 2

    Returns:
        Prefix of x + F_k with the same horizon

    Raises:
        HorizonExhaustedError: If the carry needs digits above the horizon
    """
    d = list(x.digits)
    _add_fib_inplace(d, k)
    return AdicPrefix(tuple(d))


def classify_add_fib(x: AdicPrefix, k: int) -> FibAddCase:
    """Return the addition-table branch used for x + F_k."""
    d = list(x.digits)
    case, _ = _add_fib_inplace(d, k)
    return case


def add_int(x: AdicPrefix, r: int) -> AdicPrefix:
    """Add r by adding F_k for each one of encode(r), lowest first."""
    if r < 0:
        raise DomainError(f"cannot add negative integer {r}")
    if r == 0:
        return x
    d = list(x.digits)
    add_int_inplace(d, r)
    return AdicPrefix(tuple(d))


def is_addition_safe(x: AdicPrefix, r: int) -> bool:
    """Whether x has a double zero at p, p+1 with p >= top(r) + 2 and p + 1 <= L - 1."""
    if r == 0:
        return True
    top = encode(r).top
    L = x.horizon
    d = x.digits
    for p in range(top + 2, L - 1):
        if d[p - 2] == 0 and d[p - 1] == 0:
            return True
    return False


def safe_horizon(x: AdicPrefix, r: int) -> Optional[int]:
    """Position p of the lowest double zero that makes x addition-safe for r, or None."""
    if r == 0:
        return 2
    top = encode(r).top
    d = x.digits
    for p in range(top + 2, x.horizon - 1):
        if d[p - 2] == 0 and d[p - 1] == 0:
            return p
    return None


def find_stopping_pattern(x: AdicPrefix, k: int) -> Optional[StoppingPattern]:
    """Largest j <= k+1 whose window x_j..x_{j-4} reads 01000 or 10010."""
    d = x.digits
    j = min(k + 1, x.horizon)
    while j - 4 >= 2:
        window = tuple(d[j - 2 - i] for i in range(5))
        if window == W0:
            return StoppingPattern(StoppingKind.W0, j)
        if window == W1:
            return StoppingPattern(StoppingKind.W1, j)
        j -= 1
    return None


def partial_digit_sum(x: AdicPrefix, k: int) -> int:
    """s_k(x): number of ones among x_2..x_k."""
    if k > x.horizon:
        raise HorizonExhaustedError(k, x.horizon, "partial digit sum")
    return sum(x.digits[: max(0, k - 1)])


def delta_k(x: AdicPrefix, r: int, k: int) -> int:
    """s_k(x + r) - s_k(x).

    Raises:
        HorizonExhaustedError: If k lies above the horizon or the carry escapes it
    """
    if k > x.horizon:
        raise HorizonExhaustedError(k, x.horizon, "delta_k")
    y = add_int(x, r)
    return partial_digit_sum(y, k) - partial_digit_sum(x, k)


def delta(x: AdicPrefix, r: int) -> int:
    """The stabilised variation of the number of ones, Delta^(r)(x).

    Raises:
        HorizonExhaustedError: If x is not addition-safe for r
    """
    if not is_addition_safe(x, r):
        raise HorizonExhaustedError(x.horizon + 1, x.horizon, "delta (prefix not addition-safe)")
    d = list(x.digits)
    return add_int_inplace(d, r)


def delta_int(n: int, r: int) -> int:
    """s(n + r) - s(n) through the carry engine."""
    return delta(AdicPrefix.from_int(n, r), r)


def delta_one_closed_form(x: AdicPrefix, k: Optional[int] = None) -> int:
    """Delta^(1)(x), or Delta_k^(1)(x), read off the cylinder x lies in.

    x is in C_{00(10)^d} when x_2 = 0 and in C_{001(01)^d} when x_2 = 1.
    """
    if k is not None and k < 2:
        raise DomainError(f"partial sums start at position 2, got k={k}")
    d = list(x.digits)
    if d[0] == 0:
        depth = 0
        while _read(d, 2 * depth + 3) == 1:
            depth += 1
        if k is None or k >= 2 * depth + 2:
            return 1 - depth
        return (2 - k) // 2 if k % 2 == 0 else (1 - k) // 2

    ones = 0
    while _read(d, 2 * ones + 2) == 1:
        ones += 1
    depth = ones - 1
    if k is None or k >= 2 * depth + 4:
        return -depth
    if k == 2 * depth + 3:
        return (3 - k) // 2
    return -(k // 2) if k % 2 == 0 else (1 - k) // 2


class DeltaWalker:
    """Walk the odometer orbit n = start, start+1, ... reporting Delta^(r)(n).

    Two registers hold n and n + r; both advance by the successor, so each
    step costs amortised O(1) digit operations.
    """

    def __init__(self, r: int, start: int, stop: int):
        if r < 0 or start < 0 or stop < start:
            raise DomainError(f"invalid walk r={r} over [{start}, {stop})")
        self.r = r
        self.start = start
        self.stop = stop
        size = len(encode(stop + r)) + 3
        self._n = list(encode(start).padded(size).digits)
        self._m = list(encode(start + r).padded(size).digits)
        self._sn = sum(self._n)
        self._sm = sum(self._m)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        for n in range(self.start, self.stop):
            yield n, self._sm - self._sn
            if n + 1 < self.stop:
                self._sn += _successor_inplace(self._n)
                self._sm += _successor_inplace(self._m)

    def values(self) -> List[int]:
        return [v for _, v in self]


def delta_values(r: int, start: int, stop: int) -> List[int]:
    """[Delta^(r)(n) for n in range(start, stop)]."""
    if stop <= start:
        return []
    return DeltaWalker(r, start, stop).values()
