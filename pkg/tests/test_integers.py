import math
import random

import pytest

from airkey import (
    FactorBoundExceeded,
    Factorization,
    PrimeInput,
    factorize,
    is_probable_prime,
    radical,
    sample_distinct_primes,
    sample_prime,
)
from airkey.integers import sieve


def trial_division_is_prime(n: int) -> bool:
    # independent oracle, valid for any n we feed it here
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


class TestPrimality:
    def test_small_range_matches_trial_division(self):
        for n in range(2000):
            assert is_probable_prime(n) == trial_division_is_prime(n)

    def test_random_range_matches_trial_division(self):
        rng = random.Random(11)
        for _ in range(300):
            n = rng.randrange(10**6, 10**9)
            assert is_probable_prime(n) == trial_division_is_prime(n)

    @pytest.mark.parametrize("n", [561, 41041, 825265, 321197185])
    def test_carmichael_numbers_are_composite(self, n):
        assert not is_probable_prime(n)

    def test_sieve_matches_oracle(self):
        assert sieve(100) == [n for n in range(101) if trial_division_is_prime(n)]
        assert sieve(1) == []


class TestPrimeInput:
    def test_valid(self):
        assert PrimeInput(100003, 6).value == 100003

    def test_digit_count_mismatch(self):
        with pytest.raises(ValueError):
            PrimeInput(100003, 5)

    def test_composite_rejected(self):
        with pytest.raises(ValueError):
            PrimeInput(100001, 6)  # 11 * 9091


class TestSampling:
    def test_sample_prime_has_requested_digits(self):
        rng = random.Random(5)
        for d in range(1, 10):
            p = sample_prime(d, rng)
            assert p.digit_count == d
            assert len(str(p.value)) == d
            assert trial_division_is_prime(p.value)

    def test_sampling_is_deterministic(self):
        a = sample_prime(6, random.Random(42))
        b = sample_prime(6, random.Random(42))
        assert a == b

    def test_distinct_primes_are_distinct(self):
        primes, collisions = sample_distinct_primes(20, 4, random.Random(9))
        values = [p.value for p in primes]
        assert len(set(values)) == 20
        assert collisions >= 0

    def test_collisions_counted_in_tiny_pool(self):
        # only four 1-digit primes exist, so drawing all of them must collide
        primes, collisions = sample_distinct_primes(4, 1, random.Random(0))
        assert sorted(p.value for p in primes) == [2, 3, 5, 7]
        assert collisions > 0


class TestFactorization:
    def test_text_round_trip(self):
        f = Factorization(((3, 2), (5, 1), (100003, 4)))
        assert f.to_text() == "3^2 * 5^1 * 100003^4"
        assert Factorization.from_text(f.to_text()) == f

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            Factorization(((5, 1), (3, 1)))

    def test_radical(self):
        assert radical(Factorization(((2, 5), (7, 2)))) == 14

    def test_value(self):
        assert Factorization(((2, 3), (3, 1))).value() == 24


class TestFactorize:
    def test_small_cases(self):
        assert factorize(2).factors == ((2, 1),)
        assert factorize(360).factors == ((2, 3), (3, 2), (5, 1))

    def test_construct_then_factor_random(self):
        # oracle: we build the number, factorize must return the recipe
        rng = random.Random(13)
        for _ in range(40):
            picks = {}
            for _ in range(rng.randrange(1, 6)):
                p = sample_prime(rng.randrange(1, 7), rng).value
                picks[p] = picks.get(p, 0) + rng.randrange(1, 9)
            n = math.prod(p**e for p, e in picks.items())
            assert factorize(n).factors == tuple(sorted(picks.items()))

    def test_large_prime_power_products(self):
        # the full-duplex worst case: many 5-digit primes, exponents to 8
        rng = random.Random(17)
        primes, _ = sample_distinct_primes(12, 5, rng)
        n = math.prod(p.value ** rng.randrange(1, 9) for p in primes)
        f = factorize(n)
        assert f.value() == n
        assert f.primes() == sorted(p.value for p in primes)

    def test_semiprime_beyond_trial_division(self):
        # both factors above the smooth bound: exercises the rho stage
        p, q = 1_000_003, 9_999_991
        assert factorize(p * q).factors == ((p, 1), (q, 1))

    def test_effort_budget_raises(self):
        p, q = 1_000_003, 9_999_991
        with pytest.raises(FactorBoundExceeded):
            factorize(p * q, rho_effort=10)

    def test_rejects_below_two(self):
        with pytest.raises(ValueError):
            factorize(1)
