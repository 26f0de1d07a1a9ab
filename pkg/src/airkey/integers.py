"""Exact integer machinery: probable primes, factorization, radicals.

The full-duplex receiver knows no prime but its own, so recovery needs a
general-purpose (desk-scale) factorizer.  Small factors are stripped with
batched trial division (a gcd against a cached product tree of all primes
below a bound, which is orders of magnitude faster than dividing one prime
at a time on 400-digit inputs); whatever survives goes to Brent's variant
of Pollard's rho under an explicit effort budget.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import FactorBoundExceeded

_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_RANDOM_ROUNDS = 32  # error probability <= 4**-32 = 2**-64

DEFAULT_SMOOTH_BOUND = 100_000
DEFAULT_RHO_EFFORT = 2_000_000


def sieve(bound: int) -> list[int]:
    """All primes <= bound, by Eratosthenes."""
    if bound < 2:
        return []
    flags = bytearray([1]) * (bound + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(bound) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i, f in enumerate(flags) if f]


def _mr_witness(n: int, a: int) -> bool:
    """True if ``a`` witnesses that ``n`` is composite."""
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = (x * x) % n
        if x == n - 1:
            return False
    return True


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin below ~3.3e24, 32 random rounds above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < _MR_DETERMINISTIC_BOUND:
        return not any(_mr_witness(n, a) for a in _MR_BASES)
    rng = random.Random(n)
    return not any(
        _mr_witness(n, rng.randrange(2, n - 1)) for _ in range(_MR_RANDOM_ROUNDS)
    )


@dataclass(frozen=True)
class PrimeInput:
    """A user's secret prime together with its (public) digit-count policy."""

    value: int
    digit_count: int

    def __post_init__(self):
        if self.digit_count < 1:
            raise ValueError("digit_count must be positive")
        if len(str(self.value)) != self.digit_count:
            raise ValueError(
                f"{self.value} does not have exactly {self.digit_count} digits"
            )
        if not is_probable_prime(self.value):
            raise ValueError(f"{self.value} is not prime")


def sample_prime(digit_count: int, rng: random.Random) -> PrimeInput:
    """Uniform probable prime with exactly ``digit_count`` decimal digits.

    Rejection sampling keeps the draw uniform over the primes in range and
    deterministic for a given generator state.
    """
    if digit_count < 1:
        raise ValueError("digit_count must be positive")
    lo = 10 ** (digit_count - 1)
    hi = 10**digit_count - 1
    while True:
        candidate = rng.randrange(lo, hi + 1)
        if is_probable_prime(candidate):
            return PrimeInput(candidate, digit_count)


def sample_distinct_primes(
    n: int, digit_count: int, rng: random.Random
) -> tuple[list[PrimeInput], int]:
    """``n`` distinct primes; returns (primes, collision count)."""
    seen: set[int] = set()
    out: list[PrimeInput] = []
    collisions = 0
    while len(out) < n:
        p = sample_prime(digit_count, rng)
        if p.value in seen:
            collisions += 1
            continue
        seen.add(p.value)
        out.append(p)
    return out, collisions


@dataclass(frozen=True)
class Factorization:
    """Complete prime factorization, sorted ascending by prime."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.factors]
        if primes != sorted(primes) or len(set(primes)) != len(primes):
            raise ValueError("factors must be distinct and sorted ascending")
        if any(e < 1 for _, e in self.factors):
            raise ValueError("exponents must be positive")

    @classmethod
    def from_map(cls, exponents: dict[int, int]) -> "Factorization":
        return cls(tuple(sorted(exponents.items())))

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def to_text(self) -> str:
        return " * ".join(f"{p}^{e}" for p, e in self.factors)

    @classmethod
    def from_text(cls, text: str) -> "Factorization":
        pairs = []
        for part in text.split("*"):
            p, _, e = part.strip().partition("^")
            pairs.append((int(p), int(e) if e else 1))
        return cls(tuple(pairs))


def radical(f: Factorization) -> int:
    """Product of the distinct primes of ``f``."""
    out = 1
    for p in f.primes():
        out *= p
    return out


@lru_cache(maxsize=4)
def _prime_product_tree(bound: int) -> list[list[int]]:
    """Product tree over all primes <= bound; levels[0] are the primes."""
    level = sieve(bound)
    levels = [level]
    while len(level) > 1:
        nxt = [level[i] * level[i + 1] for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        levels.append(nxt)
        level = nxt
    return levels


def _collect_tree_primes(levels, level_idx, node_idx, g, out):
    """Descend the product tree collecting the primes dividing ``g``."""
    node = levels[level_idx][node_idx]
    d = math.gcd(g, node % g if node >= g else node)
    if d == 1:
        return
    if level_idx == 0:
        out.append(node)
        return
    below = levels[level_idx - 1]
    left = 2 * node_idx
    _collect_tree_primes(levels, level_idx - 1, left, d, out)
    if left + 1 < len(below):
        _collect_tree_primes(levels, level_idx - 1, left + 1, d, out)


def _small_prime_factors(n: int, bound: int) -> list[int]:
    """Distinct prime factors of ``n`` below ``bound``, via batched gcd."""
    levels = _prime_product_tree(bound)
    root = levels[-1][0]
    g = math.gcd(n, root % n if root >= n else root)
    if g == 1:
        return []
    out: list[int] = []
    _collect_tree_primes(levels, len(levels) - 1, 0, g, out)
    return out


def _brent_rho(n: int, seed: int, budget: int) -> tuple[int, int]:
    """Brent's cycle-finding rho; returns (factor, iterations spent).

    factor == n means this parametrization failed; factor == 0 means the
    budget ran out.
    """
    if n % 2 == 0:
        return 2, 0
    y, c, m = 2 + seed, 1 + seed, 128
    g, r, q = 1, 1, 1
    spent = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            step = min(m, r - k)
            for _ in range(step):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += step
            spent += step
            if spent > budget:
                return 0, spent
        r *= 2
    if g == n:
        # backtrack one step at a time
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            spent += 1
            if spent > budget:
                return 0, spent
    return g, spent


def factorize(
    n: int,
    smooth_bound: int = DEFAULT_SMOOTH_BOUND,
    rho_effort: int = DEFAULT_RHO_EFFORT,
) -> Factorization:
    """Complete prime factorization of ``n`` >= 2.

    Raises :class:`FactorBoundExceeded` when a composite cofactor resists
    the rho effort budget (deterministic: rho parameters are fixed).
    """
    if n < 2:
        raise ValueError("factorize requires n >= 2")
    exponents: dict[int, int] = {}
    m = n

    def strip(p: int):
        nonlocal m
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            exponents[p] = exponents.get(p, 0) + e

    for p in _small_prime_factors(m, smooth_bound):
        strip(p)

    # Pending chunks jointly cover every prime left in m; each discovered
    # prime is stripped from m itself, so stale chunks are harmless.
    budget = rho_effort
    pending = [m] if m > 1 else []
    while pending:
        c = math.gcd(pending.pop(), m)
        if c == 1:
            continue
        if is_probable_prime(c):
            strip(c)
            continue
        factor = 0
        for seed in range(64):
            factor, spent = _brent_rho(c, seed, budget)
            budget -= spent
            if budget <= 0:
                raise FactorBoundExceeded(
                    f"cofactor {c} resisted the rho effort budget ({rho_effort})"
                )
            if factor not in (0, c):
                break
        if factor in (0, c):
            raise FactorBoundExceeded(f"could not split cofactor {c}")
        pending.append(factor)
        pending.append(c // factor)
    if m != 1:
        raise FactorBoundExceeded(f"unfactored cofactor {m} remains")
    result = Factorization.from_map(exponents)
    assert result.value() == n
    return result
