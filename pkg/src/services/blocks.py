"""Block decomposition of r and the block-action process.

A block of r is a maximal run of the pattern 10 in its Zeckendorf word: ones
at positions q, q-2, ..., q-2(l-1) with the zero under the lowest one closing
the run. Blocks are numbered from the units side. When the lowest one sits at
position 2 the closing zero is the virtual digit at position 1.

Adding r block by block splits Delta^(r) into block actions X_1, ..., X_rho;
their sum telescopes back to Delta^(r).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from src.core.adic import AdicPrefix, add_int_inplace, is_addition_safe
from src.core.fibzeck import encode, fib
from src.core.golden import GoldenNumber
from src.exceptions import DomainError, HorizonExhaustedError
from src.services.measure import constrained_probability


@dataclass(frozen=True)
class Block:
    """One maximal 10-run: ``length`` ones, the lowest at ``low_one``."""

    low_one: int
    length: int

    @property
    def start(self) -> int:
        """n_i, the position of the closing zero (1 for the units convention)."""
        return self.low_one - 1

    @property
    def top(self) -> int:
        return self.low_one + 2 * (self.length - 1)

    @property
    def positions(self) -> Tuple[int, ...]:
        return tuple(range(self.low_one, self.top + 1, 2))

    @property
    def value(self) -> int:
        return sum(fib(q) for q in self.positions)

    @property
    def is_units_convention(self) -> bool:
        return self.low_one == 2


@dataclass(frozen=True)
class BlockDecomposition:
    r: int
    blocks: Tuple[Block, ...]
    partial_sums: Tuple[int, ...]  # r[0] = 0, ..., r[rho] = r

    @property
    def rho(self) -> int:
        return len(self.blocks)

    def increment(self, i: int) -> int:
        """r[i] - r[i-1] for the 1-based block index i."""
        return self.partial_sums[i] - self.partial_sums[i - 1]


def decompose(r: int) -> BlockDecomposition:
    """Split r into its blocks, lowest first.

    Args:
        r: Non-negative integer (0 gives the empty decomposition)

    Returns:
        Blocks with partial sums r[0..rho]

    Raises:
        DomainError: If r < 0
    """
    if r < 0:
        raise DomainError(f"cannot decompose negative integer {r}")
    ones = encode(r).ones()
    blocks: List[Block] = []
    i = 0
    while i < len(ones):
        j = i
        while j + 1 < len(ones) and ones[j + 1] == ones[j] + 2:
            j += 1
        blocks.append(Block(low_one=ones[i], length=j - i + 1))
        i = j + 1
    partial = [0]
    for b in blocks:
        partial.append(partial[-1] + b.value)
    return BlockDecomposition(r=r, blocks=tuple(blocks), partial_sums=tuple(partial))


def block_process(x: AdicPrefix, dec: BlockDecomposition) -> List[int]:
    """Block actions X_1..X_rho of x; their sum is Delta^(r)(x).

    X_i is Delta^(r[i]-r[i-1]) evaluated at x + r[i-1].

    Raises:
        HorizonExhaustedError: If x is not addition-safe for r
    """
    if not is_addition_safe(x, dec.r):
        raise HorizonExhaustedError(x.horizon + 1, x.horizon, "block process (prefix not addition-safe)")
    digits = list(x.digits)
    return [add_int_inplace(digits, dec.increment(i)) for i in range(1, dec.rho + 1)]


def block_process_digits(digits: Sequence[int], dec: BlockDecomposition) -> List[int]:
    """block_process on a raw digit row already known to be addition-safe."""
    work = list(digits)
    return [add_int_inplace(work, dec.increment(i)) for i in range(1, dec.rho + 1)]


def adm_window(dec: BlockDecomposition, i: int) -> List[int]:
    """Positions Adm(i) that must be zero for block i to be isolated.

    One-one blocks use [n_i - 2, n_i + 3]; longer blocks use
    [n_i - 2, n_i + 1] together with [n_i - 2 + 2l_i, n_i + 1 + 2l_i].
    Positions below 2 are dropped.

    Raises:
        DomainError: If i is not a block index
    """
    if not 1 <= i <= dec.rho:
        raise DomainError(f"block index must be in [1, {dec.rho}], got {i}")
    block = dec.blocks[i - 1]
    n = block.start
    if block.length == 1:
        window = list(range(n - 2, n + 4))
    else:
        window = list(range(n - 2, n + 2)) + list(range(n - 2 + 2 * block.length, n + 2 + 2 * block.length))
    return [p for p in window if p >= 2]


def stopping_condition_holds(x: AdicPrefix, dec: BlockDecomposition, i: int) -> bool:
    """Whether x vanishes on Adm(i).

    Raises:
        HorizonExhaustedError: If Adm(i) reaches above the horizon
    """
    window = adm_window(dec, i)
    top = max(window)
    if top > x.horizon:
        raise HorizonExhaustedError(top, x.horizon, "Adm window")
    return all(x.digits[p - 2] == 0 for p in window)


def stopping_event_probability(dec: BlockDecomposition, i: int) -> GoldenNumber:
    """Exact P(x vanishes on Adm(i)); at least 1/phi^|Adm(i)|."""
    return constrained_probability({p: 0 for p in adm_window(dec, i)})


def render_blocks(dec: BlockDecomposition) -> str:
    """Digit word of r with each block bracketed, e.g. ``10101 -> [10101(conv)]``."""
    if dec.rho == 0:
        return "0 -> []"
    word = encode(dec.r)
    spans = {b.start: b for b in dec.blocks}
    tops = {b.top: b for b in dec.blocks}
    out: List[str] = []
    for pos in range(word.top, 1, -1):
        if pos in tops:
            out.append("[")
        out.append(str(word.digit(pos)))
        if pos in spans:
            out.append("]")
    for b in dec.blocks:
        if b.is_units_convention:
            out.append("(conv)]")
    return f"{word} -> {''.join(out)}"
