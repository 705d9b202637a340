"""Tests for block decompositions and block actions."""

import numpy as np
import pytest

from src.cli import DEFAULT_BLOCK_R
from src.core.adic import AdicPrefix, add_int, delta, delta_int
from src.core.fibzeck import encode, fib
from src.core.golden import phi_pow
from src.exceptions import DomainError, HorizonExhaustedError
from src.services.blocks import (
    Block,
    adm_window,
    block_process,
    block_process_digits,
    decompose,
    render_blocks,
    stopping_condition_holds,
    stopping_event_probability,
)
from src.services.measure import DigitSampler, extend_until_safe, sample_prefixes
from src.services.mixing import sample_block_process
from src.services.mudist import get_distribution, mu_mass, mu_one_closed_form

SEED = 20240917


class TestDecompose:
    """Tests for splitting r into blocks."""

    def test_fibonacci_single_block(self):
        """r = F_k is one block."""
        for k in range(2, 30):
            assert decompose(fib(k)).rho == 1

    def test_two_blocks(self):
        """F_3 + F_7 has partial sums 2 and 15."""
        dec = decompose(fib(3) + fib(7))
        assert dec.rho == 2
        assert dec.partial_sums == (0, 2, 15)
        assert dec.increment(2) == 13

    def test_units_convention(self):
        """A run ending at position 2 closes on the virtual zero."""
        dec = decompose(4)
        assert dec.rho == 1
        assert dec.blocks[0] == Block(low_one=2, length=2)
        assert dec.blocks[0].is_units_convention
        assert dec.blocks[0].start == 1

    def test_long_run(self):
        """10101 is a single block of three ones."""
        dec = decompose(12)
        assert dec.blocks == (Block(low_one=2, length=3),)
        assert dec.blocks[0].positions == (2, 4, 6)

    def test_zero(self):
        """r = 0 has no blocks."""
        dec = decompose(0)
        assert dec.rho == 0
        assert dec.partial_sums == (0,)

    def test_negative(self):
        """Negative r is rejected."""
        with pytest.raises(DomainError):
            decompose(-5)

    def test_values_add_up(self):
        """Block values sum to r."""
        for r in range(2000):
            dec = decompose(r)
            assert sum(b.value for b in dec.blocks) == r
            assert dec.partial_sums[-1] == r

    def test_default_block_r(self):
        """The default mixing addend has 40 blocks."""
        assert decompose(DEFAULT_BLOCK_R).rho == 40


class TestBlockProcess:
    """Tests for block actions."""

    @pytest.mark.parametrize("r", [1, 4, 12, 15, 33, 100, 1000])
    def test_telescoping(self, r):
        """X_1 + ... + X_rho = Delta^(r)."""
        dec = decompose(r)
        for n in range(400):
            assert sum(block_process(AdicPrefix.from_int(n, r), dec)) == delta_int(n, r)

    def test_actions_are_increments(self):
        """X_i = Delta^(r[i]-r[i-1]) at n + r[i-1]."""
        dec = decompose(fib(3) + fib(7) + fib(11))
        for n in range(200):
            xs = block_process(AdicPrefix.from_int(n, dec.r), dec)
            for i, value in enumerate(xs, start=1):
                assert value == delta_int(n + dec.partial_sums[i - 1], dec.increment(i))

    def test_raw_digits_agree(self):
        """The raw-row variant matches the prefix variant."""
        dec = decompose(33)
        for n in range(100):
            x = AdicPrefix.from_int(n, 33)
            assert block_process_digits(x.digits, dec) == block_process(x, dec)

    def test_requires_safety(self):
        """An unsafe prefix is rejected."""
        x = AdicPrefix.from_word("1010")
        with pytest.raises(HorizonExhaustedError):
            block_process(x, decompose(1))

    def test_default_r_telescoping(self):
        """Telescoping for the 40-block addend."""
        dec = decompose(DEFAULT_BLOCK_R)
        for n in (0, 1, 17, 10 ** 6, 10 ** 12):
            xs = block_process(AdicPrefix.from_int(n, DEFAULT_BLOCK_R), dec)
            assert len(xs) == 40
            assert sum(xs) == delta_int(n, DEFAULT_BLOCK_R)

    @pytest.mark.parametrize("r", [4, 33, fib(3) + fib(7) + fib(11), DEFAULT_BLOCK_R])
    def test_telescoping_on_sampled_prefixes(self, r):
        """Telescoping holds for random adic points, extended until safe."""
        dec = decompose(r)
        sampler = DigitSampler(SEED)
        rows = sample_prefixes(300, encode(r).top + 4, SEED)
        for row in rows:
            x = extend_until_safe(sampler, AdicPrefix(tuple(int(v) for v in row)), r)
            assert sum(block_process(x, dec)) == delta(x, r)

    def test_sampled_rows_in_support(self):
        """Row sums of the sampled block process are values mu^(r) charges."""
        r = fib(3) + fib(7) + fib(11)
        dist = get_distribution(r)
        samples = sample_block_process(r, 2000, SEED)
        assert samples.shape == (2000, 3)
        for total in np.unique(samples.sum(axis=1)):
            assert mu_mass(dist, int(total)).sign() == 1

    @pytest.mark.parametrize("k", [3, 6, 10])
    def test_single_block_law(self, k):
        """For r = F_k the single action X_1 follows mu^(1)."""
        n = 20_000
        samples = sample_block_process(fib(k), n, SEED)
        assert samples.shape == (n, 1)
        values = samples[:, 0]
        assert values.max() <= 1
        for d in (1, 0, -1, -2):
            p = mu_one_closed_form(d).to_float()
            stderr = (p * (1 - p) / n) ** 0.5
            assert abs(np.mean(values == d) - p) < 5 * stderr


class TestAdmWindows:
    """Tests for stopping windows."""

    @pytest.mark.parametrize("r", [4, 12, fib(3) + fib(7), fib(4) + fib(6) + fib(8) + fib(13), DEFAULT_BLOCK_R])
    def test_isolation_confines_carry(self, r):
        """Block i leaves every digit outside Adm(i) alone when it sees zeros there."""
        dec = decompose(r)
        sampler = DigitSampler(SEED)
        rows = sample_prefixes(1500, encode(r).top + 8, SEED)
        isolated = 0
        for row in rows:
            x = extend_until_safe(sampler, AdicPrefix(tuple(int(v) for v in row)), r)
            actions = block_process(x, dec)
            y = x
            for i in range(1, dec.rho + 1):
                z = add_int(y, dec.increment(i))
                if stopping_condition_holds(y, dec, i):
                    isolated += 1
                    window = adm_window(dec, i)
                    low, high = min(window), max(window)
                    assert z.digits[: low - 2] == y.digits[: low - 2]
                    assert z.digits[high - 1 :] == y.digits[high - 1 :]
                assert actions[i - 1] == sum(z.digits) - sum(y.digits)
                y = z
        assert isolated > 0

    def test_single_one_blocks(self):
        """One-one blocks use [n_i - 2, n_i + 3]."""
        dec = decompose(fib(3) + fib(7))
        assert adm_window(dec, 1) == [2, 3, 4, 5]
        assert adm_window(dec, 2) == [4, 5, 6, 7, 8, 9]

    def test_long_block(self):
        """Longer blocks use two windows."""
        dec = decompose(12)
        assert adm_window(dec, 1) == [2, 5, 6, 7, 8]

    def test_index_range(self):
        """Block indices are 1-based."""
        dec = decompose(15)
        with pytest.raises(DomainError):
            adm_window(dec, 0)
        with pytest.raises(DomainError):
            adm_window(dec, 3)

    def test_stopping_condition(self):
        """All-zero windows hold; windows past the horizon raise."""
        dec = decompose(15)
        assert stopping_condition_holds(AdicPrefix.from_int(0, 15), dec, 2)
        assert not stopping_condition_holds(AdicPrefix.from_int(fib(6), 15), dec, 2)
        with pytest.raises(HorizonExhaustedError):
            stopping_condition_holds(AdicPrefix.from_word("00000"), dec, 2)

    def test_event_probability_bound(self):
        """P(C^(i)) >= 1/phi^|Adm(i)|."""
        for r in (4, 12, 15, 33, 1000):
            dec = decompose(r)
            for i in range(1, dec.rho + 1):
                p = stopping_event_probability(dec, i)
                assert p >= phi_pow(-len(adm_window(dec, i)))


class TestRenderBlocks:
    """Tests for the bracketed rendering."""

    def test_units_convention(self):
        """Runs ending at position 2 are marked."""
        assert render_blocks(decompose(12)) == "10101 -> [10101(conv)]"
        assert render_blocks(decompose(4)) == "101 -> [101(conv)]"

    def test_separate_blocks(self):
        """Blocks are bracketed in place."""
        assert render_blocks(decompose(fib(8) + fib(4))) == "1000100 -> [10]00[10]0"

    def test_zero(self):
        """Empty decomposition."""
        assert render_blocks(decompose(0)) == "0 -> []"
