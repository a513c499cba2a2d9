"""Chu and Alltop sequences and the four set constructions built from them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .numtheory import is_prime, lcm_range, least_prime_factor

__all__ = [
    "Family",
    "SetKind",
    "LazRegion",
    "PolyphaseSequence",
    "SequenceSet",
    "ConstructionError",
    "SearchError",
    "chu",
    "alltop",
    "build_C1",
    "build_C2",
    "build_A1",
    "build_A2",
    "build_set",
    "find_C1_modulus",
    "find_C2_modulus",
    "find_alltop_prime",
    "SEARCH_SPAN",
]

SEARCH_SPAN = 10**7


class Family(str, enum.Enum):
    CHU_ODD = "ChuOdd"
    CHU_EVEN = "ChuEven"
    ALLTOP = "Alltop"


class SetKind(str, enum.Enum):
    C1 = "C1"
    C2 = "C2"
    A1 = "A1"
    A2 = "A2"


class ConstructionError(ValueError):
    """A construction precondition failed; ``precondition`` names which one."""

    def __init__(self, precondition: str, message: str):
        super().__init__(f"[{precondition}] {message}")
        self.precondition = precondition


class SearchError(LookupError):
    pass


@dataclass(frozen=True)
class LazRegion:
    """Integer half-widths of the open window (-z_x, z_x) x (-z_y, z_y)."""

    z_x: int
    z_y: int

    def __post_init__(self) -> None:
        if self.z_x < 1 or self.z_y < 1:
            raise ValueError(f"LAZ half-widths must be >= 1, got ({self.z_x}, {self.z_y})")

    def check_length(self, length: int) -> None:
        if self.z_x > length - 1 or self.z_y > length - 1:
            raise ValueError(
                f"LAZ ({self.z_x}, {self.z_y}) exceeds length-{length} limits"
            )

    def delays(self) -> range:
        return range(-self.z_x + 1, self.z_x)

    def dopplers(self) -> range:
        return range(-self.z_y + 1, self.z_y)


def _unit(k: np.ndarray, n: int) -> np.ndarray:
    """e(k / n) for integer k already reduced mod n."""
    return np.exp(2j * np.pi * (k / n))


@dataclass(frozen=True, eq=False)
class PolyphaseSequence:
    length: int
    root: int
    family: Family
    samples: np.ndarray = field(repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyphaseSequence):
            return NotImplemented
        return (
            self.length == other.length
            and self.root == other.root
            and self.family == other.family
            and np.array_equal(self.samples, other.samples)
        )

    def __hash__(self) -> int:
        return hash((self.length, self.root, self.family))

    def __len__(self) -> int:
        return self.length

    def metadata(self) -> dict[str, Any]:
        return {"family": self.family.value, "modulus": self.length, "root": self.root}


def chu(L: int, r: int) -> PolyphaseSequence:
    """Chu sequence: e(r t(t-1) / 2L) for odd L, e(r t^2 / 2L) for even L."""
    if L < 2:
        raise ValueError(f"L must be >= 2, got {L}")
    if not 1 <= r <= L - 1:
        raise ValueError(f"root must lie in [1, {L - 1}], got {r}")
    t = np.arange(L, dtype=np.int64)
    if L % 2:
        # t(t-1) is even, so the phase is (r t(t-1)/2 mod L) / L exactly
        k = ((r % L) * ((t * (t - 1) // 2) % L)) % L
        return PolyphaseSequence(L, r, Family.CHU_ODD, _unit(k, L))
    k = ((r % (2 * L)) * ((t * t) % (2 * L))) % (2 * L)
    return PolyphaseSequence(L, r, Family.CHU_EVEN, _unit(k, 2 * L))


def _check_alltop_prime(p: int) -> None:
    if p < 5:
        raise ConstructionError("p_at_least_5", f"Alltop modulus must be >= 5, got {p}")
    if not is_prime(p):
        raise ConstructionError("p_prime", f"Alltop modulus must be prime, got {p}")


def alltop(p: int, r: int) -> PolyphaseSequence:
    """Alltop sequence e((t^3 + r t) / p); the root is reduced mod p for evaluation."""
    _check_alltop_prime(p)
    t = np.arange(p, dtype=np.int64)
    k = ((t * t % p) * t + (r % p) * t) % p
    return PolyphaseSequence(p, r, Family.ALLTOP, _unit(k, p))


@dataclass
class SequenceSet:
    kind: SetKind
    params: dict[str, int]
    members: list[PolyphaseSequence]
    laz: LazRegion | None = None
    small_modulus: bool = False

    @property
    def roots(self) -> list[int]:
        return [s.root for s in self.members]

    @property
    def length(self) -> int:
        return self.members[0].length

    def __len__(self) -> int:
        return len(self.members)

    def matrix(self) -> np.ndarray:
        """Members stacked row-wise, shape (K, length)."""
        return np.vstack([s.samples for s in self.members])


def _small(L: int, K: int) -> bool:
    return L < 10 * K * K


def _check_distinct(roots: list[int], modulus: int) -> None:
    reduced = [r % modulus for r in roots]
    if len(set(reduced)) != len(reduced):
        raise ConstructionError("distinct_roots", f"roots {roots} collide modulo {modulus}")


def _check_c1(K: int, L: int) -> None:
    if K < 2 or K % 2:
        raise ConstructionError("K_even", f"K must be an even integer >= 2, got {K}")
    if L < 3 or L % 2 == 0:
        raise ConstructionError("L_odd", f"L must be an odd integer >= 3, got {L}")
    delta = lcm_range(K // 2)
    if L % delta != 1 % delta:
        raise ConstructionError("L_congruence", f"L = {L} is not 1 mod lcm(1..{K // 2}) = {delta}")
    lpf = least_prime_factor(L)
    if lpf <= K:
        raise ConstructionError(
            "least_prime_factor", f"least prime factor of L = {L} is {lpf} <= K = {K}"
        )


def build_C1(K: int, L: int) -> SequenceSet:
    """K Chu sequences with roots (L-1)/a and L - (L-1)/a, a = 1..K/2."""
    _check_c1(K, L)
    half = K // 2
    roots = [(L - 1) // a for a in range(1, half + 1)]
    roots += [L - (L - 1) // a for a in range(1, half + 1)]
    _check_distinct(roots, L)
    for i, r1 in enumerate(roots):
        for r2 in roots[i + 1 :]:
            if math.gcd((r1 - r2) % L, L) != 1:
                raise ConstructionError(
                    "root_difference_coprime", f"gcd({r1} - {r2}, {L}) != 1"
                )
    return SequenceSet(
        SetKind.C1,
        {"K": K, "L": L},
        [chu(L, r) for r in roots],
        small_modulus=_small(L, K),
    )


def _c2_laz(K: int, m: int, L: int) -> LazRegion:
    # largest integers strictly below L/((2m+3)K) and K
    z_x = -(-L // ((2 * m + 3) * K)) - 1
    return LazRegion(max(z_x, 1), K - 1)


def build_C2(K: int, m: int, L: int) -> SequenceSet:
    """K Chu sequences with roots K + j m, j = 1..K, and their low-ambiguity zone."""
    if K < 2:
        raise ConstructionError("K_at_least_2", f"K must be >= 2, got {K}")
    if m < 1:
        raise ConstructionError("m_positive", f"m must be >= 1, got {m}")
    if L % 2 == 0:
        raise ConstructionError("L_odd", f"L must be odd, got {L}")
    modulus = 2 * m * lcm_range(K)
    if L % modulus != 1:
        raise ConstructionError("L_congruence", f"L = {L} is not 1 mod 2m lcm(1..K) = {modulus}")
    roots = [K + j * m for j in range(1, K + 1)]
    if roots[-1] > L - 1:
        raise ConstructionError("root_range", f"largest root {roots[-1]} exceeds L - 1 = {L - 1}")
    z_x = -(-L // ((2 * m + 3) * K)) - 1
    if z_x < 1:
        raise ConstructionError("laz_nonempty", f"L = {L} too small for a delay zone")
    return SequenceSet(
        SetKind.C2,
        {"K": K, "m": m, "L": L},
        [chu(L, r) for r in roots],
        laz=_c2_laz(K, m, L),
        small_modulus=_small(L, K),
    )


def build_A1(p: int) -> SequenceSet:
    """All p Alltop sequences, roots 1..p (root p acts as 0)."""
    _check_alltop_prime(p)
    return SequenceSet(SetKind.A1, {"p": p}, [alltop(p, r) for r in range(1, p + 1)])


def build_A2(p: int, K: int) -> SequenceSet:
    """K Alltop sequences with roots j * floor(p/K), j = 1..K."""
    _check_alltop_prime(p)
    if not 2 <= K < p:
        raise ConstructionError("K_range", f"K must satisfy 2 <= K < p = {p}, got {K}")
    step = p // K
    roots = [j * step for j in range(1, K + 1)]
    _check_distinct(roots, p)
    if any(r % p == 0 for r in roots):
        raise ConstructionError("nonzero_roots", f"a root of {roots} vanishes modulo {p}")
    if step < 2:
        raise ConstructionError("laz_nonempty", f"floor(p/K) = {step} leaves no Doppler zone")
    return SequenceSet(
        SetKind.A2,
        {"p": p, "K": K},
        [alltop(p, r) for r in roots],
        laz=LazRegion(p - 1, step - 1),
        small_modulus=_small(p, K),
    )


def build_set(kind: str | SetKind, **params: int) -> SequenceSet:
    """Dispatch on the set kind with keyword parameters (K, m, L, p)."""
    kind = SetKind(kind)
    try:
        if kind is SetKind.C1:
            return build_C1(params["K"], params["L"])
        if kind is SetKind.C2:
            return build_C2(params["K"], params["m"], params["L"])
        if kind is SetKind.A1:
            return build_A1(params["p"])
        return build_A2(params["p"], params["K"])
    except KeyError as exc:
        raise ConstructionError("missing_parameter", f"{kind.value} needs parameter {exc}") from None


def find_C1_modulus(K: int, L_min: int, span: int = SEARCH_SPAN) -> int:
    """Smallest odd L >= L_min with L = 1 mod lcm(1..K/2) and lpf(L) > K."""
    if K < 2 or K % 2:
        raise ConstructionError("K_even", f"K must be an even integer >= 2, got {K}")
    delta = lcm_range(K // 2)
    step = delta if delta % 2 == 0 else 2 * delta  # keep L odd and on the residue class
    L = max(L_min, 3)
    # first L >= L_min with L = 1 mod step
    L += (1 - L) % step
    while L <= L_min + span:
        if least_prime_factor(L) > K:
            return L
        L += step
    raise SearchError(f"no C1 modulus for K={K} within [{L_min}, {L_min + span}]")


def find_C2_modulus(K: int, m: int, L_min: int, span: int = SEARCH_SPAN) -> int:
    """Smallest L >= L_min with L = 1 mod 2m lcm(1..K) (always odd)."""
    if K < 2 or m < 1:
        raise ConstructionError("K_at_least_2", f"need K >= 2 and m >= 1, got K={K}, m={m}")
    modulus = 2 * m * lcm_range(K)
    L = max(L_min, 2)
    L += (1 - L) % modulus
    while L <= L_min + span:
        # roots up to K + K m and a nonempty delay zone
        if L - 1 >= K + K * m and L > (2 * m + 3) * K:
            return L
        L += modulus
    raise SearchError(f"no C2 modulus for K={K}, m={m} within [{L_min}, {L_min + span}]")


def find_alltop_prime(p_min: int, span: int = SEARCH_SPAN) -> int:
    """Smallest prime >= max(5, p_min)."""
    p = max(5, p_min)
    while p <= max(5, p_min) + span:
        if is_prime(p):
            return p
        p += 1
    raise SearchError(f"no prime within [{p_min}, {p_min + span}]")
