"""Exact law of Delta^(r): towers, new information zones and the mass algorithm.

For r with F_l <= r < F_{l+1}, the large tower of order k (integers
0..F_{k+1}-1, names of length k) carries Delta^(r) constant on a growing set
of levels. The levels where it becomes constant for the first time form the
new information zone NIZ_k:

    k < l       nothing
    k = l       [0, F_{l+1} - r)
    k = l + 1   [F_{l+1} - r, F_{l+2} - r)
    k >= l + 2  [F_k - r, F_k)

From order l + 2 on, NIZ_{k+2} is NIZ_k shifted by F_{k+1} with every value
lowered by one, so evaluating Delta on F_{l+2} + r integers fixes the whole
law, including its geometric tail of ratio 1/phi^2.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.config import config
from src.core.adic import AdicPrefix, delta, delta_int, delta_values
from src.core.cache import LRUResultCache
from src.core.fibzeck import DigitWord, encode, fib, fib_floor_index
from src.core.golden import ONE, ZERO, GoldenNumber, golden_sum, phi_pow
from src.core.logging import logger
from src.exceptions import DomainError, InvariantBreachError
from src.services.measure import split_counts

TAIL_RATIO = phi_pow(-2)


@dataclass(frozen=True)
class NizLevel:
    """A level of NIZ_k: the large-tower level of ``base`` at order ``order``."""

    order: int
    base: int
    value: int

    @property
    def word(self) -> DigitWord:
        return encode(self.base).padded(self.order)

    @property
    def mass(self) -> GoldenNumber:
        return phi_pow(-self.order)


@dataclass
class MuDistribution:
    """mu^(r): exact masses on [tail_threshold, d_max] plus a geometric tail below."""

    r: int
    ell: int
    masses: Dict[int, GoldenNumber]
    tail_threshold: int
    tail_ratio: GoldenNumber
    evaluations: int
    step1: Tuple[int, ...] = ()
    step2: Tuple[int, ...] = ()
    arr1: Tuple[int, ...] = ()
    arr2: Tuple[int, ...] = ()
    fibonacci_shortcut: bool = False

    @property
    def d_max(self) -> int:
        return max(self.masses)

    @property
    def d_min_finite(self) -> int:
        return self.tail_threshold

    def support_window(self) -> range:
        return range(self.tail_threshold, self.d_max + 1)


# -- new information zones -------------------------------------------------------


def niz_range(r: int, k: int) -> range:
    """Integers whose large-tower levels of order k form NIZ_k."""
    if r < 1:
        raise DomainError(f"new information zones need r >= 1, got {r}")
    ell = fib_floor_index(r)
    if k < ell:
        return range(0)
    if k == ell:
        return range(0, fib(ell + 1) - r)
    if k == ell + 1:
        return range(fib(ell + 1) - r, fib(ell + 2) - r)
    return range(fib(k) - r, fib(k))


def niz_levels(r: int, k: int) -> List[NizLevel]:
    """Levels of NIZ_k with the constant value of Delta^(r) on each.

    Args:
        r: Addend, r >= 1
        k: Order, k >= 2

    Returns:
        Levels in tower order (empty for k < l)
    """
    if k < 2:
        raise DomainError(f"tower orders start at 2, got {k}")
    span = niz_range(r, k)
    if not span:
        return []
    values = delta_values(r, span.start, span.stop)
    return [NizLevel(order=k, base=n, value=v) for n, v in zip(span, values)]


def _check_representative(r: int, k: int, n: int, value: int) -> None:
    # the level of n at order k also contains n + F_{k+3}
    other = n + fib(k + 3)
    again = delta(AdicPrefix.from_int(other, r), r)
    if again != value:
        raise InvariantBreachError(
            "Delta constant on NIZ levels",
            f"r={r} order={k}: Delta({n})={value} but Delta({other})={again}",
        )


# -- the algorithm -------------------------------------------------------------


def _evaluate(r: int, start: int, stop: int, threads: int) -> List[int]:
    """Delta^(r) on [start, stop), split in contiguous chunks across workers."""
    total = stop - start
    if total <= 0:
        return []
    shares = split_counts(total, max(1, threads))
    if len(shares) == 1:
        return delta_values(r, start, stop)
    bounds = []
    lo = start
    for s in shares:
        bounds.append((lo, lo + s))
        lo += s
    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        chunks = list(pool.map(lambda b: delta_values(r, b[0], b[1]), bounds))
    return [v for chunk in chunks for v in chunk]


def compute_mu(
    r: int,
    fibonacci_shortcut: bool = False,
    debug_check: Optional[bool] = None,
    threads: Optional[int] = None,
) -> MuDistribution:
    """Compute mu^(r) exactly.

    Args:
        r: Addend, r >= 0
        fibonacci_shortcut: For r = F_l, reuse the NIZ_{l+1} values instead of
            evaluating NIZ_{l+3} (F_{l+2} evaluations instead of F_{l+2} + r)
        debug_check: Re-evaluate every level on a second representative
            (defaults to ZECKLAB_MU_DEBUG)
        threads: Workers for the Delta sweeps

    Returns:
        The exact distribution

    Raises:
        DomainError: If r < 0
        InvariantBreachError: If a runtime diagnostic fails
    """
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    if r == 0:
        return MuDistribution(r=0, ell=0, masses={0: ONE}, tail_threshold=0,
                              tail_ratio=ZERO, evaluations=0)

    started = time.perf_counter()
    check = config.MU_DEBUG_CHECK if debug_check is None else debug_check
    workers = config.get_threads(threads)

    # Step 0
    ell = fib_floor_index(r)
    f1, f2, f3 = fib(ell + 1), fib(ell + 2), fib(ell + 3)
    shortcut = fibonacci_shortcut and fib(ell) == r

    # Steps 1-3 are one contiguous sweep [0, F_{l+2})
    head = _evaluate(r, 0, f2, workers)
    step1 = head[: f1 - r]
    step2 = head[f1 - r: f2 - r]
    arr1 = head[f2 - r:]
    if shortcut:
        # NIZ_{l+3} is NIZ_{l+1} shifted by F_{l+2}, values lowered by one
        arr2 = [v - 1 for v in step2]
        evaluations = f2
    else:
        arr2 = _evaluate(r, f3 - r, f3, workers)
        evaluations = f2 + r

    if check:
        for n, v in enumerate(step1):
            _check_representative(r, ell, n, v)
        for i, v in enumerate(step2):
            _check_representative(r, ell + 1, f1 - r + i, v)
        for i, v in enumerate(arr1):
            _check_representative(r, ell + 2, f2 - r + i, v)
        if not shortcut:
            for i, v in enumerate(arr2):
                _check_representative(r, ell + 3, f3 - r + i, v)

    m = min(min(arr1), min(arr2))
    early = step1 + step2
    if early and min(early) <= m:
        raise InvariantBreachError(
            "tail threshold below the first two zones",
            f"r={r}: min(ARR1 u ARR2)={m} but an order l/l+1 value is {min(early)}",
        )
    d_max = max(head + arr2)

    dist = MuDistribution(
        r=r, ell=ell, masses={}, tail_threshold=m, tail_ratio=TAIL_RATIO,
        evaluations=evaluations, step1=tuple(step1), step2=tuple(step2),
        arr1=tuple(arr1), arr2=tuple(arr2), fibonacci_shortcut=shortcut,
    )
    for d in range(m, d_max + 1):
        dist.masses[d] = direct_mass(dist, d)

    logger.info(
        f"Computed mu^({r}): l={ell}, support [{m}, {d_max}] plus tail, {evaluations} evaluations",
        extra={"r": r, "ell": ell, "evaluations": evaluations,
               "duration_ms": round((time.perf_counter() - started) * 1000, 2)},
    )
    return dist


_cache = LRUResultCache(config.MU_CACHE_SIZE)


def get_distribution(r: int, fibonacci_shortcut: bool = False) -> MuDistribution:
    """compute_mu through the shared LRU cache."""
    key = ("mu", r, fibonacci_shortcut)
    dist = _cache.get(key)
    if dist is None:
        dist = compute_mu(r, fibonacci_shortcut=fibonacci_shortcut)
        _cache.put(key, dist)
    return dist


def cache_status() -> dict:
    return _cache.get_status()


def clear_cache() -> None:
    _cache.clear()


# -- queries -------------------------------------------------------------------


def direct_mass(dist: MuDistribution, d: int) -> GoldenNumber:
    """mu^(r)(d) summed straight from the zone values, valid for every d.

    Orders l and l+1 contribute their own values; a value v of NIZ_{l+2}
    (resp. NIZ_{l+3}) reappears as v - j at order l + 2 + 2j (resp. l + 3 + 2j).
    """
    if dist.r == 0:
        return ONE if d == 0 else ZERO
    ell = dist.ell
    terms: List[GoldenNumber] = []
    count = dist.step1.count(d)
    if count:
        terms.append(count * phi_pow(-ell))
    count = dist.step2.count(d)
    if count:
        terms.append(count * phi_pow(-(ell + 1)))
    for base_order, values in ((ell + 2, dist.arr1), (ell + 3, dist.arr2)):
        for v, count in Counter(values).items():
            if v >= d:
                terms.append(count * phi_pow(-(base_order + 2 * (v - d))))
    return golden_sum(terms)


def mu_mass(dist: MuDistribution, d: int) -> GoldenNumber:
    """mu^(r)(d): finite part for d >= m, mu(m) phi^(-2(m-d)) below, 0 above d_max."""
    if d > dist.d_max:
        return ZERO
    if d >= dist.tail_threshold:
        return dist.masses.get(d, ZERO)
    if not dist.tail_ratio:
        return ZERO
    return dist.masses[dist.tail_threshold] * dist.tail_ratio ** (dist.tail_threshold - d)


def mass_window(dist: MuDistribution, lo: Optional[int] = None, hi: Optional[int] = None) -> range:
    """The window [lo, hi] of d values to report, defaulting to the finite part.

    Raises:
        DomainError: If the window is empty, wider than MU_MAX_WINDOW, or reaches
            more than MU_MAX_TAIL_DEPTH below the tail threshold
    """
    window = dist.support_window()
    lo = window.start if lo is None else lo
    hi = window.stop - 1 if hi is None else hi
    if hi < lo:
        raise DomainError(f"empty window [{lo}, {hi}]")
    if hi - lo + 1 > config.MU_MAX_WINDOW:
        raise DomainError(f"window [{lo}, {hi}] holds more than {config.MU_MAX_WINDOW} entries")
    if dist.tail_threshold - lo > config.MU_MAX_TAIL_DEPTH:
        raise DomainError(
            f"d = {lo} lies more than {config.MU_MAX_TAIL_DEPTH} below the tail threshold "
            f"{dist.tail_threshold} of mu^({dist.r})"
        )
    return range(lo, hi + 1)


def _tail_power_sums(q: GoldenNumber, p: int) -> List[GoldenNumber]:
    """S_i = sum_{j>=1} j^i q^j for i = 0..p (|q| < 1)."""
    scale = q / (ONE - q)
    sums: List[GoldenNumber] = []
    for i in range(p + 1):
        acc = ONE
        for t in range(i):
            acc = acc + math.comb(i, t) * sums[t]
        sums.append(scale * acc)
    return sums


def tail_sum(dist: MuDistribution) -> GoldenNumber:
    """Total mass strictly below the tail threshold."""
    return _tail_moment(dist, 0)


def _tail_moment(dist: MuDistribution, p: int) -> GoldenNumber:
    # sum_{j>=1} (m - j)^p mu(m) q^j, expanded binomially in j
    if not dist.tail_ratio:
        return ZERO
    m = dist.tail_threshold
    sums = _tail_power_sums(dist.tail_ratio, p)
    acc = ZERO
    for i in range(p + 1):
        coeff = math.comb(p, i) * m ** (p - i) * (-1) ** i
        if coeff:
            acc = acc + coeff * sums[i]
    return dist.masses[m] * acc


def moment(dist: MuDistribution, p: int) -> GoldenNumber:
    """Exact p-th moment sum_d d^p mu(d).

    Raises:
        DomainError: If p < 0
    """
    if p < 0:
        raise DomainError(f"moment order must be >= 0, got {p}")
    finite = golden_sum(d ** p * mass for d, mass in dist.masses.items())
    return finite + _tail_moment(dist, p)


def total_mass(dist: MuDistribution) -> GoldenNumber:
    return moment(dist, 0)


def distributions_equal(a: MuDistribution, b: MuDistribution) -> bool:
    """Whether two distributions give every d the same mass."""
    if a.tail_ratio != b.tail_ratio:
        return False
    lo = min(a.tail_threshold, b.tail_threshold) - 1
    hi = max(a.d_max, b.d_max) + 1
    return all(mu_mass(a, d) == mu_mass(b, d) for d in range(lo, hi + 1))


def verify_fib_identity(ell: int) -> bool:
    """mu^(F_l) = mu^(1).

    Raises:
        DomainError: If l < 2
    """
    if ell < 2:
        raise DomainError(f"Fibonacci index must be >= 2, got {ell}")
    return distributions_equal(get_distribution(fib(ell)), get_distribution(1))


def mu_one_closed_form(d: int) -> GoldenNumber:
    """mu^(1)(d): 1/phi^2 at 1, 1/phi^(2-2d) for d <= 0, nothing above 1."""
    if d >= 2:
        return ZERO
    if d == 1:
        return phi_pow(-2)
    return phi_pow(-(2 - 2 * d))


def delta_one_partition(depth: int) -> List[Tuple[str, int]]:
    """Cylinders on which Delta^(1) is constant, down to value -depth.

    C_00 carries 1; for d <= 0 both C_{0(01)^(1-d)} and C_{00(10)^(1-d)} carry d.
    """
    parts: List[Tuple[str, int]] = [("00", 1)]
    for d in range(0, -depth - 1, -1):
        e = 1 - d
        parts.append(("0" + "01" * e, d))
        parts.append(("00" + "10" * e, d))
    return parts


@dataclass
class NizProfile:
    """Values of Delta^(F_l) on the first three zones."""

    ell: int
    order_l: Counter = field(default_factory=Counter)
    order_l1: Counter = field(default_factory=Counter)
    order_l2: Counter = field(default_factory=Counter)
    sequence_l1: List[int] = field(default_factory=list)

    def run_lengths(self) -> List[int]:
        """Lengths of the maximal constant runs of the NIZ_{l+1} sequence."""
        runs: List[int] = []
        prev = None
        for v in self.sequence_l1:
            if v == prev:
                runs[-1] += 1
            else:
                runs.append(1)
                prev = v
        return runs


def fibonacci_niz_profile(ell: int) -> NizProfile:
    """Delta^(F_l) on NIZ_l, NIZ_{l+1} and NIZ_{l+2}."""
    if ell < 2:
        raise DomainError(f"Fibonacci index must be >= 2, got {ell}")
    r = fib(ell)
    seq = [lvl.value for lvl in niz_levels(r, ell + 1)]
    return NizProfile(
        ell=ell,
        order_l=Counter(lvl.value for lvl in niz_levels(r, ell)),
        order_l1=Counter(seq),
        order_l2=Counter(lvl.value for lvl in niz_levels(r, ell + 2)),
        sequence_l1=seq,
    )


# -- checks ----------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def distribution_checks(dist: MuDistribution) -> List[CheckResult]:
    """Normalisation, zero mean, tail law, non-negativity and evaluation count."""
    results: List[CheckResult] = []
    mass = total_mass(dist)
    results.append(CheckResult("normalization", mass == ONE, f"total mass {mass}"))
    mean = moment(dist, 1)
    results.append(CheckResult("zero_mean", mean == ZERO, f"mean {mean}"))

    m = dist.tail_threshold
    # recompute below the threshold from the zone values, not from the tail rule
    tail_ok = all(
        direct_mass(dist, d - 1) == direct_mass(dist, d) * dist.tail_ratio
        and direct_mass(dist, d - 1) == mu_mass(dist, d - 1)
        for d in range(m - 3, m + 1)
    ) if dist.r else True
    results.append(CheckResult("tail_law", tail_ok, f"threshold {m}"))

    negative = [d for d, v in dist.masses.items() if v.sign() < 0]
    results.append(CheckResult("non_negative", not negative,
                               f"negative at {negative}" if negative else ""))

    if dist.r == 0:
        expected = 0
    else:
        expected = fib(dist.ell + 2) + (0 if dist.fibonacci_shortcut else dist.r)
    results.append(CheckResult("evaluation_count", dist.evaluations == expected,
                               f"{dist.evaluations} of {expected}"))
    return results


def niz_shift_holds(r: int, k: int) -> bool:
    """NIZ_k levels start with 00 and n -> n + F_{k+1} lands in NIZ_{k+2} one lower (k >= l + 2)."""
    levels = niz_levels(r, k)
    upper = {lvl.base: lvl.value for lvl in niz_levels(r, k + 2)}
    for lvl in levels:
        word = lvl.word
        if word.digit(k + 1) or word.digit(k):
            return False
        if upper.get(lvl.base + fib(k + 1)) != lvl.value - 1:
            return False
    return True


# -- towers ----------------------------------------------------------------------


@dataclass(frozen=True)
class TowerLevel:
    index: int
    integer: int
    word: str
    mass: GoldenNumber
    parent_tower: Optional[str] = None
    parent_index: Optional[int] = None
    in_niz: bool = False
    niz_order: Optional[int] = None
    delta: Optional[int] = None


@dataclass(frozen=True)
class TowerDump:
    k: int
    r: Optional[int]
    large: Tuple[TowerLevel, ...]
    small: Tuple[TowerLevel, ...]


def _niz_annotation(r: Optional[int], n: int, k: int, small: bool) -> Tuple[bool, Optional[int], Optional[int]]:
    if not r:
        return False, None, None
    ell = fib_floor_index(r)
    in_niz = (not small) and n in niz_range(r, k)
    # the first order j in [l, k] at which the truncated name is a NIZ level
    word = encode(n)
    for j in range(ell, k + 1):
        if small and j == k:
            break
        low = DigitWord(word.digits[:j]).value
        if low < fib(j + 1) and low in niz_range(r, j):
            return in_niz, j, delta_int(low, r)
    return in_niz, None, None


def tower_dump(k: int, r: Optional[int] = None) -> TowerDump:
    """Both towers of order k with parentage at order k - 1 and NIZ annotations.

    Raises:
        DomainError: If k is outside [2, TOWER_MAX_ORDER]
    """
    if k < 2 or k > config.TOWER_MAX_ORDER:
        raise DomainError(f"tower order must be in [2, {config.TOWER_MAX_ORDER}], got {k}")
    if r is not None and r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    large_height = fib(k + 1)
    small_height = fib(k)
    large: List[TowerLevel] = []
    for j in range(large_height):
        parent: Tuple[Optional[str], Optional[int]] = (None, None)
        if k > 2:
            parent = ("large", j) if j < fib(k) else ("small", j - fib(k))
        in_niz, order, value = _niz_annotation(r, j, k, small=False)
        large.append(TowerLevel(
            index=j, integer=j, word=str(encode(j).padded(k)), mass=phi_pow(-k),
            parent_tower=parent[0], parent_index=parent[1],
            in_niz=in_niz, niz_order=order, delta=value,
        ))
    small: List[TowerLevel] = []
    for i in range(small_height):
        n = large_height + i
        in_niz, order, value = _niz_annotation(r, n, k, small=True)
        small.append(TowerLevel(
            index=i, integer=n, word=str(encode(n).padded(k)), mass=phi_pow(-(k + 1)),
            parent_tower="large" if k > 2 else None, parent_index=i if k > 2 else None,
            in_niz=in_niz, niz_order=order, delta=value,
        ))
    return TowerDump(k=k, r=r, large=tuple(large), small=tuple(small))
