"""Tests for adic prefixes, the odometer and the carry engine."""

import pytest
from hypothesis import HealthCheck, assume, given, reject, settings
from hypothesis import strategies as st

from src.core.adic import (
    W0,
    W1,
    AdicPrefix,
    DeltaWalker,
    FibAddCase,
    StoppingKind,
    add_fib,
    add_int,
    classify_add_fib,
    delta,
    delta_int,
    delta_k,
    delta_one_closed_form,
    delta_values,
    find_stopping_pattern,
    is_addition_safe,
    partial_digit_sum,
    successor,
)
from src.core.fibzeck import digit_sum, encode, fib, fib_floor_index
from src.exceptions import DomainError, HorizonExhaustedError


def _word(text: str) -> AdicPrefix:
    return AdicPrefix.from_word(text)


def _admissible(bits):
    """Clear every one that follows a one."""
    digits = []
    prev = 0
    for b in bits:
        d = 1 if b and not prev else 0
        digits.append(d)
        prev = d
    return tuple(digits)


# random admissible prefixes with two spare zeros on top for carries
prefixes = st.lists(st.booleans(), min_size=30, max_size=60).map(
    lambda bits: AdicPrefix(_admissible(bits) + (0, 0))
)


class TestAdicPrefix:
    """Tests for the prefix type."""

    def test_from_int_padding(self):
        """Integer prefixes are padded beyond n and r."""
        x = AdicPrefix.from_int(4, 12)
        assert x.value == 4
        assert x.horizon >= len(encode(12)) + 5
        assert is_addition_safe(x, 12)

    def test_digit_read_above_horizon(self):
        """Reading past the horizon asks for an extension."""
        x = _word("0101")
        assert x.digit(5) == 0
        with pytest.raises(HorizonExhaustedError):
            x.digit(6)

    def test_inadmissible(self):
        """Adjacent ones are rejected."""
        with pytest.raises(Exception):
            AdicPrefix((1, 1, 0))


class TestSuccessor:
    """Tests for the odometer."""

    def test_examples(self):
        """Both add-one cases."""
        assert str(successor(_word("0010"))) == "0100"
        assert str(successor(_word("00101"))) == "01000"
        assert str(successor(_word("00"))) == "01"

    def test_matches_integers(self):
        """T(n) = n + 1 on integer prefixes."""
        for n in range(2000):
            assert successor(AdicPrefix.from_int(n, 1)).value == n + 1

    def test_horizon_exhausted(self):
        """No double zero below the horizon."""
        with pytest.raises(HorizonExhaustedError):
            successor(_word("10"))
        with pytest.raises(HorizonExhaustedError):
            successor(_word("1010"))


class TestAddFib:
    """Tests for the F_k addition table."""

    @pytest.mark.parametrize(
        "word,k,case,value",
        [
            ("0000", 3, FibAddCase.ISOLATED, 2),
            ("00010", 2, FibAddCase.CARRY_LEFT, 3),
            ("00001", 3, FibAddCase.MERGE_RIGHT, 3),
            ("0001", 2, FibAddCase.SPLIT_FULL, 2),
            ("00010", 3, FibAddCase.SPLIT_UNITS_ODD, 4),
            ("000100", 4, FibAddCase.SPLIT_UNITS_EVEN, 6),
            ("000010000", 6, FibAddCase.SPLIT_FREE, 16),
            ("000010010", 6, FibAddCase.SPLIT_MERGE, 18),
            ("00001001", 5, FibAddCase.SPLIT_MERGE_UNITS, 11),
        ],
    )
    def test_cases(self, word, k, case, value):
        """Each branch of the table with its result."""
        x = _word(word)
        assert classify_add_fib(x, k) == case
        assert add_fib(x, k).value == value

    def test_integer_oracle(self):
        """x + F_k agrees with integer addition."""
        for n in range(400):
            for k in range(2, 14):
                x = AdicPrefix.from_int(n, fib(k))
                y = add_fib(x, k)
                assert y.value == n + fib(k)
                assert y.word.canonical() == encode(n + fib(k))

    def test_rejects_small_index(self):
        """k < 2 is not a digit position."""
        with pytest.raises(DomainError):
            add_fib(_word("0000"), 1)

    def test_carry_past_horizon(self):
        """A carry that needs digits above the horizon raises."""
        with pytest.raises(HorizonExhaustedError):
            add_fib(_word("1010"), 3)

    def test_every_case_reached(self):
        """The integer sweep visits every branch."""
        seen = set()
        for n in range(300):
            for k in range(2, 9):
                seen.add(classify_add_fib(AdicPrefix.from_int(n, fib(k)), k))
        assert seen == set(FibAddCase)


class TestAddInt:
    """Tests for adding integers."""

    def test_zero(self):
        """Adding 0 is the identity."""
        x = AdicPrefix.from_int(17)
        assert add_int(x, 0) == x

    def test_negative(self):
        """Negative addends are rejected."""
        with pytest.raises(DomainError):
            add_int(AdicPrefix.from_int(3), -1)

    @given(st.integers(min_value=0, max_value=10 ** 6), st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=300)
    def test_integer_oracle(self, n, r):
        """add_int agrees with integer addition."""
        assert add_int(AdicPrefix.from_int(n, r), r).value == n + r

    def test_carry_blocking(self):
        """r < F_{l+1} and 00 at l+2, l+3 leave digits from l+3 up unchanged."""
        for r in range(1, 60):
            ell = fib_floor_index(r)
            for n in range(600):
                x = AdicPrefix.from_int(n, r)
                if x.digit(ell + 2) or x.digit(ell + 3):
                    continue
                y = add_int(x, r)
                assert y.digits[ell + 1:] == x.digits[ell + 1:]

    def test_decomposition(self):
        """delta(x, t + u) = delta(x, t) + delta(x + t, u)."""
        for n in range(150):
            for t in range(0, 25):
                for u in range(0, 25):
                    x = AdicPrefix.from_int(n, t + u)
                    assert delta(x, t + u) == delta(x, t) + delta(add_int(x, t), u)


class TestDelta:
    """Tests for the digit-sum variation."""

    def test_examples(self):
        """Delta^(4)(0) = 2 and Delta^(1)(3) = 1."""
        assert delta_int(0, 4) == 2
        assert delta_int(3, 1) == 1

    def test_matches_digit_sums(self):
        """delta_int(n, r) = s(n + r) - s(n)."""
        for n in range(300):
            for r in range(40):
                assert delta_int(n, r) == digit_sum(encode(n + r)) - digit_sum(encode(n))

    def test_requires_safety(self):
        """A prefix without room for the carry cannot give the stabilised value."""
        with pytest.raises(HorizonExhaustedError):
            delta(_word("1010"), 1)

    def test_delta_k_bounds(self):
        """delta_k above the horizon raises; at the horizon it is the full variation."""
        x = AdicPrefix.from_int(7, 5)
        with pytest.raises(HorizonExhaustedError):
            delta_k(x, 5, x.horizon + 1)
        assert delta_k(x, 5, x.horizon) == delta(x, 5)
        assert partial_digit_sum(x, x.horizon) == digit_sum(encode(7))

    def test_closed_form_delta_one(self):
        """The closed forms of Delta^(1) and Delta_k^(1)."""
        for n in range(500):
            x = AdicPrefix.from_int(n, 1)
            assert delta_one_closed_form(x) == delta(x, 1)
            for k in range(2, x.horizon + 1):
                assert delta_one_closed_form(x, k) == delta_k(x, 1, k)

    def test_closed_form_rejects_k(self):
        """Partial sums start at position 2."""
        with pytest.raises(DomainError):
            delta_one_closed_form(AdicPrefix.from_int(3, 1), 1)


class TestDeltaWalker:
    """Tests for the orbit walker."""

    def test_matches_delta(self):
        """Walker values equal per-point evaluation."""
        for r in range(0, 30):
            assert delta_values(r, 0, 300) == [delta_int(n, r) for n in range(300)]

    def test_offset_start(self):
        """Walks can start anywhere."""
        walk = list(DeltaWalker(7, 1000, 1010))
        assert [n for n, _ in walk] == list(range(1000, 1010))
        assert [v for _, v in walk] == [delta_int(n, 7) for n in range(1000, 1010)]

    def test_empty(self):
        """Empty ranges yield nothing."""
        assert delta_values(3, 5, 5) == []

    def test_invalid(self):
        """Negative r is rejected."""
        with pytest.raises(DomainError):
            DeltaWalker(-1, 0, 10)


class TestStoppingPattern:
    """Tests for right-stopping patterns."""

    def test_patterns(self):
        """01000 and 10010 windows."""
        assert find_stopping_pattern(_word("01000"), 6).kind == StoppingKind.W0
        found = find_stopping_pattern(_word("10010"), 6)
        assert found.kind == StoppingKind.W1
        assert found.position == 6

    def test_largest_position(self):
        """The largest window position at most k + 1 wins."""
        x = _word("0100001000")
        found = find_stopping_pattern(x, 10)
        assert found.position == 11
        assert find_stopping_pattern(x, 7).position == 6

    def test_none(self):
        """No window, no pattern."""
        assert find_stopping_pattern(_word("00000"), 6) is None


class TestRandomPrefixes:
    """Carry and stopping properties on random admissible prefixes."""

    @given(prefixes, st.data())
    @settings(max_examples=300, suppress_health_check=[HealthCheck.filter_too_much])
    def test_add_fib_oracle(self, x, data):
        """x + F_k is the finite sum and stays admissible."""
        k = data.draw(st.integers(min_value=2, max_value=x.horizon - 1))
        try:
            y = add_fib(x, k)
        except HorizonExhaustedError:
            reject()
        assert y.value == x.value + fib(k)
        assert y.horizon == x.horizon

    @given(prefixes, st.integers(min_value=1, max_value=10 ** 5))
    @settings(max_examples=300, suppress_health_check=[HealthCheck.filter_too_much])
    def test_carry_blocking(self, x, r):
        """r < F_{l+1} and 00 at l+2, l+3 leave digits from l+3 up unchanged."""
        ell = fib_floor_index(r)
        assume(x.digit(ell + 2) == 0 and x.digit(ell + 3) == 0)
        y = add_int(x, r)
        assert y.digits[ell + 1:] == x.digits[ell + 1:]

    @given(prefixes, st.data())
    @settings(max_examples=300, suppress_health_check=[HealthCheck.filter_too_much])
    def test_right_blocking(self, x, data):
        """00 at l, l+1 and r free of ones below l+2 leave digits up to l-2 unchanged."""
        ell = data.draw(st.integers(min_value=4, max_value=x.horizon - 8))
        assume(x.digit(ell) == 0 and x.digit(ell + 1) == 0)
        room = x.horizon - ell - 4
        bits = data.draw(st.lists(st.booleans(), min_size=1, max_size=room))
        r = sum(fib(ell + 2 + i) for i, b in enumerate(_admissible(bits)) if b)
        assume(r > 0)
        try:
            y = add_int(x, r)
        except HorizonExhaustedError:
            reject()
        assert y.digits[: ell - 3] == x.digits[: ell - 3]

    @given(prefixes, st.data())
    @settings(max_examples=300, suppress_health_check=[HealthCheck.filter_too_much])
    def test_zero_digit_keeps_low_part(self, x, data):
        """With x_k = 0, digits up to k-2 are unchanged."""
        k = data.draw(st.integers(min_value=2, max_value=x.horizon - 1))
        assume(x.digit(k) == 0)
        try:
            y = add_fib(x, k)
        except HorizonExhaustedError:
            reject()
        low = max(0, k - 3)
        assert y.digits[:low] == x.digits[:low]

    @given(prefixes, st.data())
    @settings(max_examples=400, suppress_health_check=[HealthCheck.filter_too_much])
    def test_stopping_pattern_evolution(self, x, data):
        """With x_k = 1 the window at j' flips and nothing at or below j'-4 moves."""
        k = data.draw(st.integers(min_value=5, max_value=x.horizon - 1))
        assume(x.digit(k) == 1)
        found = find_stopping_pattern(x, k)
        assume(found is not None)
        try:
            y = add_fib(x, k)
        except HorizonExhaustedError:
            reject()
        j = found.position
        assert y.digits[: j - 5] == x.digits[: j - 5]
        window = tuple(y.digit(j - i) for i in range(5))
        if found.kind == StoppingKind.W1:
            assert window == W0
        elif j == k + 1:
            assert window in (W1, (0, 0, 0, 1, 0))
        else:
            assert window == W1
