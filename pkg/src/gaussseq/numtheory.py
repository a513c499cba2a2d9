"""Integer and series helpers shared by the Gauss-sum and sequence modules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

__all__ = [
    "ReducedFraction",
    "EuclidChain",
    "lcm_range",
    "least_prime_factor",
    "is_prime",
    "euclid_chain",
    "wrap_half_open",
    "fibonacci",
    "fibonacci_zeta_partial",
    "fibonacci_index_above",
]


@dataclass(frozen=True)
class ReducedFraction:
    """Coprime pair ``a/q`` with ``1 <= a < q``."""

    a: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError(f"denominator must be >= 2, got {self.q}")
        if not 1 <= self.a < self.q:
            raise ValueError(f"numerator must satisfy 1 <= a < q, got a={self.a}, q={self.q}")
        if math.gcd(self.a, self.q) != 1:
            raise ValueError(f"gcd({self.a}, {self.q}) != 1")

    @property
    def value(self) -> float:
        return self.a / self.q

    def as_fraction(self) -> Fraction:
        return Fraction(self.a, self.q)

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class EuclidChain:
    """Strictly decreasing remainders ``[q_0, q_1, ..., 1]``."""

    terms: tuple[int, ...]

    def __post_init__(self) -> None:
        t = self.terms
        if not t or t[-1] != 1:
            raise ValueError("chain must end in 1")
        for j in range(len(t) - 1):
            if t[j] <= t[j + 1]:
                raise ValueError("chain must be strictly decreasing")
        for j in range(len(t) - 2):
            if t[j + 2] != t[j] % t[j + 1]:
                raise ValueError(f"terms[{j + 2}] != terms[{j}] mod terms[{j + 1}]")

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


def lcm_range(k: int) -> int:
    """Return lcm(1, 2, ..., k)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return reduce(math.lcm, range(1, k + 1), 1)


def least_prime_factor(n: int) -> int:
    """Smallest prime dividing ``n`` (trial division; fine up to ~1e12)."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if n % 2 == 0:
        return 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return d
        d += 2
    return n


def is_prime(n: int) -> bool:
    return n >= 2 and least_prime_factor(n) == n


def euclid_chain(x: ReducedFraction) -> EuclidChain:
    """Remainder chain q_0 = q, q_1 = a, q_{j+1} = q_{j-1} mod q_j, down to 1."""
    terms = [x.q, x.a % x.q]
    while terms[-1] != 1:
        terms.append(terms[-2] % terms[-1])
    return EuclidChain(tuple(terms))


def wrap_half_open(t):
    """Reduce ``t`` modulo 1 into the interval (-1/2, 1/2].

    Works for floats and for :class:`fractions.Fraction` (exactly).
    """
    if isinstance(t, float) and not math.isfinite(t):
        raise ValueError(f"cannot wrap non-finite value {t!r}")
    half = Fraction(1, 2) if isinstance(t, Fraction) else 0.5
    r = t - math.floor(t + half)
    if r <= -half:
        r += 1
    elif r > half:
        r -= 1
    return r


def fibonacci(n: int) -> int:
    """F_n with F_1 = F_2 = 1 (exact integer recurrence)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a, b = 1, 1
    for _ in range(n - 1):
        a, b = b, a + b
    return a


def fibonacci_index_above(q: int) -> int:
    """Smallest n with F_n > q."""
    n, a, b = 1, 1, 1
    while a <= q:
        n += 1
        a, b = b, a + b
    return n


def fibonacci_zeta_partial(n: int) -> float:
    """Partial sum of 1/sqrt(F_j) for j = 1..n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    terms = []
    a, b = 1, 1
    for _ in range(n):
        terms.append(1.0 / math.sqrt(a))
        a, b = b, a + b
    return math.fsum(terms)
