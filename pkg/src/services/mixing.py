"""Mixing estimates for the digit process and the block-action process.

Estimators search a finite family of events and report the largest
observed dependence, which lower-bounds the supremum defining the mixing
coefficient. Acceptance therefore only asks estimate - 4 stderr <= bound.

Coordinate events: A fixes the last few digits of x_2..x_{p+1} (or is the
complement of such a cylinder), B fixes a window of digits starting at
x_{k+p+1}. Block events: A is a value tuple of the last block actions up to
X_p, B a value tuple of the first block actions from X_{k+p} or a threshold
event {X_{k+p} <= t}.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from tqdm import tqdm

from src.config import config
from src.core.adic import delta_values
from src.core.fibzeck import admissible_words, encode
from src.core.golden import ZERO, GoldenNumber, phi_pow
from src.core.logging import logger
from src.exceptions import DomainError, PreconditionError
from src.services.blocks import block_process_digits, decompose
from src.services.measure import (
    DigitSampler,
    constrained_probability,
    extend_until_safe,
    sample_prefix,
    sample_prefixes,
    split_counts,
)
from src.services.mudist import get_distribution, mu_mass

MIN_SAMPLES = 10_000
SLACK_SIGMAS = 4.0
PHI_F = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class MixingEstimate:
    k: int
    p: int
    estimate: float
    stderr: float
    n_samples: int
    event_family: str
    bound: float
    kind: str = "phi"

    @property
    def passed(self) -> bool:
        return self.estimate - SLACK_SIGMAS * self.stderr <= self.bound

    @property
    def trivially_passed(self) -> bool:
        """The bound is at least 1, so no estimate can exceed it."""
        return self.bound >= 1.0


# -- bounds --------------------------------------------------------------------


def phi_coordinate_bound(k: int) -> GoldenNumber:
    """2 / phi^(2k)."""
    return 2 * phi_pow(-2 * k)


def alpha_block_bound(k: int) -> float:
    """12 (1 - phi^-8)^(k/6) + phi^-2k."""
    return 12.0 * (1.0 - PHI_F ** -8) ** (k / 6.0) + PHI_F ** (-2 * k)


# -- pair tables -------------------------------------------------------------


@dataclass(frozen=True)
class _Best:
    value: float = 0.0
    stderr: float = 0.0
    label: str = ""


def _codes(samples: np.ndarray, first_pos: int, width: int) -> np.ndarray:
    """Integer code of the digits at positions first_pos..first_pos+width-1 (bit i = position first_pos+i)."""
    cols = samples[:, first_pos - 2: first_pos - 2 + width].astype(np.int64)
    weights = np.left_shift(1, np.arange(width, dtype=np.int64))
    return cols @ weights


def _joint(a_codes: np.ndarray, na: int, b_codes: np.ndarray, nb: int) -> np.ndarray:
    return np.bincount(a_codes * nb + b_codes, minlength=na * nb).reshape(na, nb).astype(np.float64)


def _scan_phi(joint: np.ndarray, n: int, min_count: int, label: str) -> _Best:
    """max |P(B|A) - P(B)| over rows A, their complements, and columns B."""
    n_a = joint.sum(axis=1)
    n_b = joint.sum(axis=0)
    p_b = n_b / n
    best = _Best()
    for rows, counts in ((joint, n_a), (n_b[None, :] - joint, n - n_a)):
        eligible = counts >= min_count
        if not eligible.any():
            continue
        cond = rows[eligible] / counts[eligible][:, None]
        diff = np.abs(cond - p_b[None, :])
        i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
        value = float(diff[i, j])
        if value > best.value:
            n_ai = float(counts[eligible][i])
            hits = float(rows[eligible][i, j])
            smoothed = (hits + 1.0) / (n_ai + 2.0)
            stderr = math.sqrt(smoothed * (1 - smoothed) / n_ai + p_b[j] * (1 - p_b[j]) / n)
            best = _Best(value, stderr, label)
    return best


def _scan_alpha(joint: np.ndarray, n: int, min_count: int, label: str) -> _Best:
    """max |P(A and B) - P(A) P(B)| over rows A whose complement is also populated."""
    n_a = joint.sum(axis=1)
    n_b = joint.sum(axis=0)
    eligible = (n_a >= min_count) & ((n - n_a) >= min_count)
    if not eligible.any():
        return _Best(0.0, 1.0 / n, label)
    p_ab = joint[eligible] / n
    diff = np.abs(p_ab - np.outer(n_a[eligible] / n, n_b / n))
    i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
    q = float(p_ab[i, j])
    stderr = max(math.sqrt(q * (1 - q) / n), 1.0 / n)
    return _Best(float(diff[i, j]), stderr, label)


def _better(a: _Best, b: _Best) -> _Best:
    return b if b.value > a.value else a


# -- coordinates ------------------------------------------------------------------


def _coordinate_windows(k: int, p: int) -> Tuple[int, int, int]:
    """(first A position, A width, B width)."""
    a = min(config.MIXING_EVENT_DIGITS, p)
    return p + 2 - a, a, config.MIXING_EVENT_DIGITS


def _check_coordinate_args(k: int, p: int, n: int) -> None:
    if k < 1 or p < 1:
        raise DomainError(f"gap and prefix length must be >= 1, got k={k}, p={p}")
    if n < MIN_SAMPLES:
        raise PreconditionError(f"at least {MIN_SAMPLES} samples are required, got {n}")


def _coordinate_scan(k: int, p: int, samples: np.ndarray, kind: str) -> _Best:
    n = samples.shape[0]
    a_first, a_width, b_width = _coordinate_windows(k, p)
    a_codes = _codes(samples, a_first, a_width)
    best = _Best(0.0, 1.0 / n, "")
    for w in range(1, b_width + 1):
        b_codes = _codes(samples, k + p + 1, w)
        joint = _joint(a_codes, 1 << a_width, b_codes, 1 << w)
        label = f"A: cylinders on x_{a_first}..x_{p + 1} and complements; B: cylinders on x_{k + p + 1}..x_{k + p + w}"
        scan = _scan_phi if kind == "phi" else _scan_alpha
        best = _better(best, scan(joint, n, config.MIXING_MIN_EVENT_COUNT, label))
    return best


def estimate_phi_coordinates(
    k: int, p: int, n: int, seed: int, threads: Optional[int] = None
) -> MixingEstimate:
    """Lower estimate of the phi-mixing coefficient of the digit process.

    Args:
        k: Gap
        p: Number of leading coordinates in the past (x_2..x_{p+1})
        n: Number of samples, at least 10^4
        seed: Base seed
        threads: Sampling workers

    Returns:
        Estimate with stderr and the bound 2/phi^(2k)

    Raises:
        PreconditionError: If n < 10^4
    """
    _check_coordinate_args(k, p, n)
    started = time.perf_counter()
    samples = sample_prefixes(n, k + p + config.MIXING_EVENT_DIGITS, seed, threads)
    best = _coordinate_scan(k, p, samples, "phi")
    logger.info(
        f"phi estimate k={k} p={p}: {best.value:.6g} +/- {best.stderr:.2g}",
        extra={"k": k, "p": p, "samples": n, "seed": seed,
               "duration_ms": round((time.perf_counter() - started) * 1000, 2)},
    )
    return MixingEstimate(k=k, p=p, estimate=best.value, stderr=best.stderr, n_samples=n,
                          event_family=best.label, bound=phi_coordinate_bound(k).to_float(), kind="phi")


def estimate_alpha_coordinates(
    k: int, p: int, n: int, seed: int, threads: Optional[int] = None
) -> MixingEstimate:
    """Lower estimate of the alpha-mixing coefficient of the digit process (bound phi bound / 2)."""
    _check_coordinate_args(k, p, n)
    samples = sample_prefixes(n, k + p + config.MIXING_EVENT_DIGITS, seed, threads)
    best = _coordinate_scan(k, p, samples, "alpha")
    return MixingEstimate(k=k, p=p, estimate=best.value, stderr=best.stderr, n_samples=n,
                          event_family=best.label, bound=phi_coordinate_bound(k).to_float() / 2,
                          kind="alpha")


def coordinate_estimates_from_samples(k: int, p: int, samples: np.ndarray) -> Tuple[float, float]:
    """(phi estimate, alpha estimate) on the same sample and event family."""
    return (_coordinate_scan(k, p, samples, "phi").value,
            _coordinate_scan(k, p, samples, "alpha").value)


def exact_phi_coordinates(k: int, p: int) -> GoldenNumber:
    """The coordinate event-family supremum, computed exactly from the chain.

    k = 1, p = 1 gives 1/phi^3 (A = {x_2 = 1}, B = {x_3 = 1}).
    """
    if k < 1 or p < 1:
        raise DomainError(f"gap and prefix length must be >= 1, got k={k}, p={p}")
    a_first, a_width, b_width = _coordinate_windows(k, p)
    a_events = []
    for w in admissible_words(a_width):
        fixed = {a_first + i: d for i, d in enumerate(w.digits)}
        a_events.append([fixed])
    # complements as unions of the other cylinders
    cylinders = [ev[0] for ev in a_events]
    a_events += [[c for c in cylinders if c is not own] for own in cylinders]

    best = ZERO
    for width in range(1, b_width + 1):
        for bw in admissible_words(width):
            b_fixed = {k + p + 1 + i: d for i, d in enumerate(bw.digits)}
            p_b = constrained_probability(b_fixed)
            for event in a_events:
                p_a = ZERO
                p_ab = ZERO
                for cyl in event:
                    p_a = p_a + constrained_probability(cyl)
                    p_ab = p_ab + constrained_probability({**cyl, **b_fixed})
                if not p_a:
                    continue
                gap = abs(p_ab / p_a - p_b)
                if gap > best:
                    best = gap
    return best


# -- block process -----------------------------------------------------------------


def _block_rows(r: int, count: int, seed: int, worker: int, progress: bool) -> np.ndarray:
    dec = decompose(r)
    sampler = DigitSampler(seed, worker)
    horizon = len(encode(r)) + 5
    rows = np.zeros((count, dec.rho), dtype=np.int32)
    for i in tqdm(range(count), disable=not progress, desc=f"block samples (worker {worker})", leave=False):
        x = sample_prefix(sampler, horizon)
        x = extend_until_safe(sampler, x, r)
        rows[i] = block_process_digits(x.digits, dec)
    return rows


def sample_block_process(r: int, n: int, seed: int, threads: Optional[int] = None) -> np.ndarray:
    """Block actions of ``n`` sampled points, one row (X_1..X_rho) per sample."""
    if r < 1:
        raise DomainError(f"block process needs r >= 1, got {r}")
    workers = config.get_threads(threads)
    shares = split_counts(n, workers)
    progress = config.progress_enabled()
    with ThreadPoolExecutor(max_workers=max(1, len(shares))) as pool:
        parts = list(pool.map(lambda a: _block_rows(r, a[1], seed, a[0], progress), enumerate(shares)))
    return np.concatenate(parts, axis=0)


def _tuple_codes(cols: np.ndarray) -> Tuple[np.ndarray, int]:
    if cols.shape[1] == 0:
        return np.zeros(cols.shape[0], dtype=np.int64), 1
    _, inverse = np.unique(cols, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    return inverse.astype(np.int64), int(inverse.max()) + 1


def alpha_from_block_samples(samples: np.ndarray, k: int, p: int) -> Tuple[float, float, str]:
    """alpha estimate (value, stderr, family) from a matrix of block actions.

    Column i - 1 holds X_i. An empty future (k + p > rho) gives 0.
    """
    n, rho = samples.shape
    if k + p > rho:
        return 0.0, 1.0 / n, "trivial: no block action at or after k+p"
    c = config.MIXING_BLOCK_COORDS
    lo = max(1, p - c + 1)
    a_codes, na = _tuple_codes(samples[:, lo - 1: p])
    best = _Best(0.0, 1.0 / n, "")
    start = k + p
    for w in range(1, c + 1):
        if start + w - 1 > rho:
            break
        b_codes, nb = _tuple_codes(samples[:, start - 1: start - 1 + w])
        label = f"A: values of X_{lo}..X_{p}; B: values of X_{start}..X_{start + w - 1}"
        best = _better(best, _scan_alpha(_joint(a_codes, na, b_codes, nb), n,
                                         config.MIXING_MIN_EVENT_COUNT, label))
    # threshold events {X_{k+p} <= t}
    col = samples[:, start - 1]
    levels, b_codes = np.unique(col, return_inverse=True)
    if len(levels) > 1:
        joint = _joint(a_codes, na, np.asarray(b_codes).reshape(-1).astype(np.int64), len(levels))
        cumulative = np.cumsum(joint, axis=1)[:, :-1]
        label = f"A: values of X_{lo}..X_{p}; B: thresholds on X_{start}"
        n_a = joint.sum(axis=1)
        # build a two-column table per threshold: B and its complement
        for t in range(cumulative.shape[1]):
            table = np.stack([cumulative[:, t], n_a - cumulative[:, t]], axis=1)
            best = _better(best, _scan_alpha(table, n, config.MIXING_MIN_EVENT_COUNT,
                                             f"{label} (t={int(levels[t])})"))
    return best.value, best.stderr, best.label


def check_block_preconditions(r: int, p: int, n: int) -> None:
    """Raise PreconditionError unless rho(r) >= p and n >= 10^4."""
    if p < 1:
        raise DomainError(f"prefix length must be >= 1, got p={p}")
    if n < MIN_SAMPLES:
        raise PreconditionError(f"at least {MIN_SAMPLES} samples are required, got {n}")
    rho = decompose(r).rho
    if rho < p:
        raise PreconditionError(f"rho({r}) = {rho} is smaller than p = {p}")


def estimate_alpha_blocks(
    r: int, k: int, p: int, n: int, seed: int,
    threads: Optional[int] = None,
    samples: Optional[np.ndarray] = None,
) -> MixingEstimate:
    """Lower estimate of alpha(k) for the block actions of r.

    Args:
        r: Integer whose blocks drive the process
        k: Gap
        p: Last block index of the past
        n: Number of samples, at least 10^4
        seed: Base seed
        threads: Sampling workers
        samples: Precomputed sample_block_process matrix to reuse

    Raises:
        PreconditionError: If rho(r) < p or n < 10^4
    """
    if k < 1:
        raise DomainError(f"gap must be >= 1, got k={k}")
    check_block_preconditions(r, p, n)
    started = time.perf_counter()
    if samples is None:
        samples = sample_block_process(r, n, seed, threads)
    value, stderr, label = alpha_from_block_samples(samples, k, p)
    logger.info(
        f"alpha estimate r={r} k={k} p={p}: {value:.6g} +/- {stderr:.2g}",
        extra={"r": r, "k": k, "p": p, "samples": int(samples.shape[0]), "seed": seed,
               "duration_ms": round((time.perf_counter() - started) * 1000, 2)},
    )
    return MixingEstimate(k=k, p=p, estimate=value, stderr=stderr, n_samples=int(samples.shape[0]),
                          event_family=label, bound=alpha_block_bound(k), kind="alpha_blocks")


# -- densities ------------------------------------------------------------------------


def empirical_distribution(r: int, N: int, threads: Optional[int] = None) -> Counter:
    """Counts of Delta^(r)(n) over n < N (exhaustive, deterministic)."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    shares = split_counts(N, config.get_threads(threads))
    bounds = []
    lo = 0
    for s in shares:
        bounds.append((lo, lo + s))
        lo += s
    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        parts = list(pool.map(lambda b: Counter(delta_values(r, b[0], b[1])), bounds))
    total: Counter = Counter()
    for part in parts:
        total.update(part)
    return total


def empirical_density(r: int, d: int, N: int, threads: Optional[int] = None) -> float:
    """(1/N) |{n < N : Delta^(r)(n) = d}|."""
    return empirical_distribution(r, N, threads)[d] / N


def density_inequality_holds(r: int, N: int, slack: float = 1e-12) -> bool:
    """Every empirical frequency is at most r phi^3 mu^(r)(d)."""
    counts = empirical_distribution(r, N)
    dist = get_distribution(r)
    factor = r * PHI_F ** 3
    return all(c / N <= factor * mu_mass(dist, d).to_float() + slack for d, c in counts.items())


def density_error(r: int, N: int) -> float:
    """max_d |empirical density - mu^(r)(d)| over the observed values and the finite support."""
    counts = empirical_distribution(r, N)
    dist = get_distribution(r)
    values = set(counts) | set(dist.masses)
    return max(abs(counts.get(d, 0) / N - mu_mass(dist, d).to_float()) for d in values)
