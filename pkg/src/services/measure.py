"""The invariant measure of the Zeckendorf odometer and its digit sampler.

Under the unique invariant measure the digits (x_2, x_3, ...) form a Markov
chain: x_2 = 1 with probability 1/phi^2, a 0 is followed by a 1 with
probability 1/phi^2, and a 1 is always followed by a 0. Exact masses come
from a forward recursion over that chain in Q(phi); samples come from numpy
PCG64 generators seeded from (seed, worker).
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.config import config
from src.core.adic import AdicPrefix, is_addition_safe
from src.core.fibzeck import DigitWord, WordLike, admissible_words, as_word, fib
from src.core.golden import ONE, ZERO, GoldenNumber, golden_sum, phi_pow
from src.core.logging import logger
from src.exceptions import DomainError, PathologicalSampleError

INV_PHI = phi_pow(-1)
INV_PHI2 = phi_pow(-2)
INV_PHI2_FLOAT = INV_PHI2.to_float()

Matrix = Tuple[Tuple[GoldenNumber, GoldenNumber], Tuple[GoldenNumber, GoldenNumber]]


@dataclass(frozen=True)
class Cylinder:
    """The set of sequences whose digits x_2..x_{order+1} spell ``word``."""

    word: DigitWord

    @classmethod
    def of(cls, w: Union["Cylinder", WordLike]) -> "Cylinder":
        if isinstance(w, Cylinder):
            return w
        return cls(as_word(w))

    @property
    def order(self) -> int:
        return len(self.word)

    def fixed_digits(self, shift: int = 0) -> dict:
        """Constraints {position: digit}, optionally shifted up by ``shift`` positions."""
        return {i + 2 + shift: d for i, d in enumerate(self.word.digits)}

    def __str__(self) -> str:
        return f"C_{self.word}"


def cylinder_measure(c: Union[Cylinder, WordLike]) -> GoldenNumber:
    """Exact measure of a cylinder.

    Args:
        c: Cylinder or its name (most-significant digit first)

    Returns:
        1/phi^L if the leading digit is 0, 1/phi^(L+1) if it is 1 (L = name length)

    Raises:
        InadmissibleWordError: If the name has adjacent ones
    """
    cyl = Cylinder.of(c)
    L = cyl.order
    if L == 0:
        return ONE
    if cyl.word.digits[-1] == 1:
        return phi_pow(-(L + 1))
    return phi_pow(-L)


def tower_level_measure(k: int, small: bool = False) -> GoldenNumber:
    """Mass of one level of the large (1/phi^k) or small (1/phi^(k+1)) tower of order k."""
    return phi_pow(-(k + 1)) if small else phi_pow(-k)


def order_total_mass(k: int) -> GoldenNumber:
    """Sum of the measures of all F_{k+2} cylinders of order k (exactly 1)."""
    return golden_sum(cylinder_measure(w) for w in admissible_words(k))


def digit_probability(k: int) -> GoldenNumber:
    """P(x_k = 1) = F_{k-1} / phi^k.

    Raises:
        DomainError: If k < 2
    """
    if k < 2:
        raise DomainError(f"digit positions start at 2, got {k}")
    return fib(k - 1) * phi_pow(-k)


def transition_matrix() -> Matrix:
    """One-step kernel; row = current digit, column = next digit."""
    return ((INV_PHI, INV_PHI2), (ONE, ZERO))


def _mat_mul(p: Matrix, q: Matrix) -> Matrix:
    return (
        (p[0][0] * q[0][0] + p[0][1] * q[1][0], p[0][0] * q[0][1] + p[0][1] * q[1][1]),
        (p[1][0] * q[0][0] + p[1][1] * q[1][0], p[1][0] * q[0][1] + p[1][1] * q[1][1]),
    )


def transition_power(n: int) -> Matrix:
    """Exact n-step kernel by repeated squaring."""
    if n < 0:
        raise DomainError(f"transition power must be >= 0, got {n}")
    result: Matrix = ((ONE, ZERO), (ZERO, ONE))
    base = transition_matrix()
    while n:
        if n & 1:
            result = _mat_mul(result, base)
        base = _mat_mul(base, base)
        n >>= 1
    return result


def constrained_probability(fixed: Mapping[int, int]) -> GoldenNumber:
    """Exact P(x_j = v_j for every (j, v_j) in ``fixed``).

    Runs the chain forward from position 2 and jumps over unconstrained gaps
    with the n-step kernel.
    """
    if not fixed:
        return ONE
    items = sorted(fixed.items())
    if items[0][0] < 2:
        raise DomainError(f"digit positions start at 2, got {items[0][0]}")
    for pos, v in items:
        if v not in (0, 1):
            raise DomainError(f"digit at position {pos} must be 0 or 1, got {v}")

    # law of x_2
    state = [INV_PHI, INV_PHI2]
    pos = 2
    for target, v in items:
        if target > pos:
            m = transition_power(target - pos)
            state = [
                state[0] * m[0][0] + state[1] * m[1][0],
                state[0] * m[0][1] + state[1] * m[1][1],
            ]
            pos = target
        state = [state[0], ZERO] if v == 0 else [ZERO, state[1]]
    return state[0] + state[1]


def conditional_probability(event: Mapping[int, int], given: Sequence[Mapping[int, int]]) -> GoldenNumber:
    """P(event | union of the disjoint cylinders in ``given``)."""
    denom = golden_sum(constrained_probability(g) for g in given)
    if not denom:
        raise DomainError("conditioning on a null event")
    num = ZERO
    for g in given:
        joint = dict(g)
        clash = any(joint.get(pos, v) != v for pos, v in event.items())
        if clash:
            continue
        joint.update(event)
        num = num + constrained_probability(joint)
    return num / denom


def renewal_holds(prefix: WordLike, c: WordLike) -> bool:
    """Check the renewal identity for the cylinder ``prefix`` and a later cylinder ``c``.

    A prefix 0 r_k..r_2 renews after k digits; a prefix 1 0 r_{k-1}..r_2 after
    k + 1 digits (the forced zero is skipped). In both cases
    P(x in C_prefix, shifted x in C) = P(C_prefix) P(C).
    """
    w = as_word(prefix)
    if len(w) == 0:
        raise DomainError("renewal needs a non-empty prefix")
    shift = len(w) if w.digits[-1] == 0 else len(w) + 1
    lower = Cylinder(w).fixed_digits()
    upper = Cylinder.of(c).fixed_digits(shift=shift)
    joint = constrained_probability({**lower, **upper})
    return joint == cylinder_measure(w) * cylinder_measure(c)


def zero_run_probability(a_words: Sequence[WordLike], ks: Sequence[int]) -> GoldenNumber:
    """P_A(x_{k_1} = ... = x_{k_l} = 0) for A a union of cylinders of order k_0 - 1.

    Args:
        a_words: Names of length k_0 - 1 whose leading digit (position k_0) is 0
        ks: Increasing positions (k_0, k_1, ..., k_l)

    Returns:
        The exact conditional probability
    """
    words = [as_word(w) for w in a_words]
    k0 = ks[0]
    for w in words:
        if len(w) != k0 - 1 or w.digits[-1] != 0:
            raise DomainError(f"conditioning cylinder {w} must have length {k0 - 1} and lead with 0")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise DomainError("zero-run positions must increase")
    event = {k: 0 for k in ks[1:]}
    return conditional_probability(event, [Cylinder(w).fixed_digits() for w in words])


def zero_run_product(ks: Sequence[int]) -> GoldenNumber:
    """prod_i P(x_{k_i - k_{i-1} + 1} = 0), the closed form of zero_run_probability."""
    result = ONE
    for a, b in zip(ks, ks[1:]):
        result = result * (ONE - digit_probability(b - a + 1))
    return result


def zero_run_bounds(length: int) -> Tuple[GoldenNumber, GoldenNumber]:
    """(1/phi^l, (2/phi^2)^l), the bracket of any zero-run probability of l digits."""
    return phi_pow(-length), (2 * INV_PHI2) ** length


class DigitSampler:
    """Markov-chain digit generator driven by y_j = psi(y_{j-1}, U_j).

    psi(0, U) = 1 when U < 1/phi^2, psi(1, U) = 0; the chain starts from
    the virtual digit y_1 = 0.
    """

    def __init__(self, seed: int, worker: int = 0):
        self.seed = seed
        self.worker = worker
        self.rng = np.random.default_rng(np.random.SeedSequence([seed, worker]))
        self.last = 0

    def reset(self) -> None:
        self.last = 0

    def draw(self, count: int) -> List[int]:
        """Next ``count`` digits of the chain."""
        uniforms = self.rng.random(count)
        out: List[int] = []
        last = self.last
        for u in uniforms:
            last = 1 if (last == 0 and u < INV_PHI2_FLOAT) else 0
            out.append(last)
        self.last = last
        return out


def sample_prefix(s: DigitSampler, horizon: int) -> AdicPrefix:
    """Fresh sample of x_2..x_horizon.

    Raises:
        DomainError: If horizon < 2
    """
    if horizon < 2:
        raise DomainError(f"horizon must be >= 2, got {horizon}")
    s.reset()
    return AdicPrefix(tuple(s.draw(horizon - 1)))


def extend_until_safe(
    s: DigitSampler,
    x: AdicPrefix,
    r: int,
    cap: Optional[int] = None,
) -> AdicPrefix:
    """Extend a sampled prefix until it is addition-safe for r.

    Args:
        s: Sampler that produced x
        x: Current prefix
        r: Addend
        cap: Maximum number of digits (defaults to SAMPLER_MAX_DIGITS)

    Returns:
        x itself if already safe, else a longer prefix

    Raises:
        PathologicalSampleError: If the cap is reached first
    """
    limit = config.SAMPLER_MAX_DIGITS if cap is None else cap
    if is_addition_safe(x, r):
        return x
    s.last = x.digits[-1]
    digits = list(x.digits)
    while True:
        room = limit - len(digits)
        if room <= 0:
            raise PathologicalSampleError(len(digits), limit)
        digits.extend(s.draw(min(config.SAMPLER_CHUNK, room)))
        candidate = AdicPrefix(tuple(digits))
        if is_addition_safe(candidate, r):
            return candidate


def _sample_block(n: int, width: int, seed: int, worker: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence([seed, worker]))
    uniforms = rng.random((n, width))
    out = np.zeros((n, width), dtype=np.uint8)
    prev = np.zeros(n, dtype=bool)
    for j in range(width):
        col = (~prev) & (uniforms[:, j] < INV_PHI2_FLOAT)
        out[:, j] = col
        prev = col
    return out


def split_counts(n: int, workers: int) -> List[int]:
    """Split n items into ``workers`` near-equal shares (earlier workers get the extra)."""
    base, extra = divmod(n, workers)
    shares = [base + (1 if w < extra else 0) for w in range(workers)]
    return [s for s in shares if s > 0]


def sample_prefixes(n: int, horizon: int, seed: int, threads: Optional[int] = None) -> np.ndarray:
    """Sample ``n`` independent prefixes x_2..x_horizon.

    Args:
        n: Number of samples
        horizon: Last position L
        seed: Base seed; worker w uses SeedSequence([seed, w])
        threads: Worker count (defaults to ZECKLAB_THREADS)

    Returns:
        uint8 array of shape (n, horizon - 1); column j is position j + 2
    """
    if horizon < 2:
        raise DomainError(f"horizon must be >= 2, got {horizon}")
    workers = config.get_threads(threads)
    shares = split_counts(n, workers)
    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, len(shares))) as pool:
        parts = list(pool.map(
            lambda args: _sample_block(args[1], horizon - 1, seed, args[0]),
            enumerate(shares),
        ))
    samples = np.concatenate(parts, axis=0) if parts else np.zeros((0, horizon - 1), dtype=np.uint8)
    logger.debug(
        f"Sampled {n} prefixes up to position {horizon}",
        extra={"samples": n, "seed": seed, "workers": len(shares),
               "duration_ms": round((time.perf_counter() - started) * 1000, 2)},
    )
    return samples
