"""Generalized quadratic Gauss sums S_N(x, theta) = sum_{t=1}^N e(x t^2 / 2 + theta t).

Besides direct evaluation this module carries the one-step reduction
S_N(x, theta) -> S_M(-1/x, theta/x) with all of its correction pieces, the
explicit remainder bound for that step, and the telescoped bound obtained by
iterating it along the Euclid chain of a/q.

Rational slopes should be passed as :class:`fractions.Fraction` (or
:class:`~gaussseq.numtheory.ReducedFraction`): the quadratic phase is then
reduced modulo 1 in exact integer arithmetic before exponentiation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .erfc import erfc_series
from .numtheory import (
    EuclidChain,
    ReducedFraction,
    euclid_chain,
    wrap_half_open,
)

__all__ = [
    "E_BOUND",
    "GAUSS_BOUND_SLOPE",
    "GaussSumInput",
    "ParisDecomposition",
    "BoundCertificate",
    "partial_sums",
    "gauss_sum",
    "gauss_sum_direct",
    "gauss_closed_form_magnitude",
    "error_function_E",
    "cot_correction",
    "paris_decompose",
    "reduction_remainder",
    "reduction_remainder_bound",
    "gauss_sum_bound",
    "reduction_certificate",
]

E_BOUND = 2.035
GAUSS_BOUND_SLOPE = 20.07

_EXACT_DENOMINATOR_LIMIT = 2**31
_EIGHTH_TURN = cmath.exp(1j * math.pi / 4)


def _as_number(v):
    if isinstance(v, ReducedFraction):
        return v.as_fraction()
    if isinstance(v, Rational) and not isinstance(v, int):
        return Fraction(v)
    return v


def _quadratic_phase(t: np.ndarray, x) -> np.ndarray:
    """(x t^2 / 2) mod 1."""
    x = _as_number(x)
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        den = 2 * x.denominator
        if den < _EXACT_DENOMINATOR_LIMIT:
            c = x.numerator % den
            k = (c * ((t * t) % den)) % den
            return k / den
        x = float(x)
    return np.mod(0.5 * x * (t * t).astype(np.float64), 1.0)


def _linear_phase(t: np.ndarray, theta) -> np.ndarray:
    """(theta t) mod 1."""
    theta = _as_number(theta)
    if isinstance(theta, (int, Fraction)):
        theta = Fraction(theta)
        den = theta.denominator
        if den < _EXACT_DENOMINATOR_LIMIT:
            c = theta.numerator % den
            return ((c * (t % den)) % den) / den
        theta = float(theta)
    return np.mod(theta * t.astype(np.float64), 1.0)


def _terms(n: int, x, theta, start: int = 1) -> np.ndarray:
    t = np.arange(start, start + n, dtype=np.int64)
    phase = _quadratic_phase(t, x) + _linear_phase(t, theta)
    return np.exp(2j * np.pi * phase)


def partial_sums(n: int, x, theta) -> np.ndarray:
    """Array ``[S_1, S_2, ..., S_n]`` for arbitrary real ``x``.

    Running (sequential) sums; use :func:`gauss_sum` for a single value.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return np.zeros(0, dtype=np.complex128)
    return np.cumsum(_terms(n, x, theta))


def gauss_sum(n: int, x, theta) -> complex:
    """S_n(x, theta) for any real x; S_0 = 0. Pairwise summation."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return 0j
    return complex(np.sum(_terms(n, x, theta)))


@dataclass(frozen=True)
class GaussSumInput:
    """Validated (N, x, theta) with 0 < x < 1; ``theta`` is kept raw."""

    N: int
    x: float | Fraction
    theta: float | Fraction = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _as_number(self.x))
        object.__setattr__(self, "theta", _as_number(self.theta))
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not 0 < self.x < 1:
            raise ValueError(f"x must lie in (0, 1), got {self.x}")

    @property
    def theta_wrapped(self):
        return wrap_half_open(self.theta)

    @property
    def x_float(self) -> float:
        return float(self.x)


def gauss_sum_direct(inp: GaussSumInput) -> complex:
    return gauss_sum(inp.N, inp.x, inp.theta_wrapped)


def gauss_closed_form_magnitude(q: int, a: int, b: int) -> float:
    """|S_q(2a/q, b/q)| for gcd(a, q) = 1."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if math.gcd(a, q) != 1:
        raise ValueError(f"gcd({a}, {q}) != 1")
    if q % 2:
        return math.sqrt(q)
    sign = -1 if (a * (q // 2) + b) % 2 else 1
    return math.sqrt(q / 2) * (1 + sign)


def error_function_E(x: float, theta: float) -> complex:
    """E(x, theta) = e^{-pi i theta^2/x} erfc(e^{-pi i/4} theta sqrt(pi/x)).

    Evaluated by series (see :mod:`gaussseq.erfc`), ~1e-9 absolute.
    """
    x = float(x)
    theta = float(theta)
    if not 0 < x < 1:
        raise ValueError(f"x must lie in (0, 1), got {x}")
    if theta == 0:
        return 1 + 0j
    z = _EIGHTH_TURN.conjugate() * theta * math.sqrt(math.pi / x)
    return cmath.exp(-1j * math.pi * theta * theta / x) * erfc_series(z)


def cot_correction(t: float) -> float:
    """cot(pi t) - 1/(pi t), continuous at 0 with value 0."""
    t = float(t)
    if t == 0:
        return 0.0
    u = math.pi * t
    if abs(u) < 0.1:
        # Laurent series of cot minus its pole; next term is below 1e-17 here
        u2 = u * u
        return -u * (1 / 3 + u2 * (1 / 45 + u2 * (2 / 945 + u2 * (1 / 4725 + u2 * 2 / 93555))))
    return 1 / math.tan(u) - 1 / u


@dataclass(frozen=True)
class ParisDecomposition:
    """S_N(x, theta) split into a shorter reflected sum plus correction pieces.

    ``main_term + mu_term + E_term + g_term + residual_R`` reproduces the
    direct sum; ``residual_R`` is that difference.
    """

    main_term: complex
    mu_term: complex
    E_term: complex
    g_term: complex
    residual_R: complex
    M: int
    epsilon: float
    direct: complex

    @property
    def reconstruction(self) -> complex:
        return self.main_term + self.mu_term + self.E_term + self.g_term + self.residual_R


def _split_endpoint(N: int, x, theta) -> tuple[int, float]:
    # N x + theta = M + eps, eps in (-1/2, 1/2]; N x kept exact when rational.
    nx = N * x
    whole = math.floor(nx)
    v = (nx - whole) + theta
    eps = wrap_half_open(v)
    M = whole + int(round(v - eps))
    return M, float(eps)


def _reflected_sum(M: int, x, theta) -> complex:
    """S_M(-1/x, theta/x) through the conjugate S_M(1/x, -theta/x), theta/x wrapped."""
    if M == 0:
        return 0j
    inv = 1 / Fraction(x) if isinstance(x, Fraction) else 1.0 / x
    shift = wrap_half_open(-theta / x)
    if isinstance(shift, Fraction) and shift.denominator >= _EXACT_DENOMINATOR_LIMIT:
        shift = float(shift)
    return gauss_sum(M, inv, shift).conjugate()


def _main_factor(x: float, theta: float) -> complex:
    return cmath.exp(-1j * math.pi * theta * theta / x + 1j * math.pi / 4) / math.sqrt(x)


def paris_decompose(inp: GaussSumInput) -> ParisDecomposition:
    """Split S_N(x, theta) (theta wrapped first) into its reduction pieces."""
    x = inp.x
    theta = inp.theta_wrapped
    N = inp.N
    xf = float(x)
    thf = float(theta)
    M, eps = _split_endpoint(N, x, theta)

    direct = gauss_sum(N, x, theta)
    mu = complex(_terms(1, x, theta, start=N)[0])  # e(x N^2/2 + theta N)
    main = _main_factor(xf, thf) * _reflected_sum(M, x, theta)
    mu_term = (mu - 1) / 2
    E_term = _EIGHTH_TURN / (2 * math.sqrt(xf)) * (
        error_function_E(xf, thf) - mu * error_function_E(xf, eps)
    )
    g_term = 0.5j * (cot_correction(thf) - mu * cot_correction(eps))
    residual = direct - main - mu_term - E_term - g_term
    return ParisDecomposition(
        main_term=main,
        mu_term=mu_term,
        E_term=E_term,
        g_term=g_term,
        residual_R=residual,
        M=M,
        epsilon=eps,
        direct=direct,
    )


def reduction_remainder(inp: GaussSumInput) -> float:
    """|S_N(x, theta) - e^{-pi i theta^2/x + pi i/4} x^{-1/2} S_M(-1/x, theta/x)|."""
    x = inp.x
    theta = inp.theta_wrapped
    M, _ = _split_endpoint(inp.N, x, theta)
    direct = gauss_sum(inp.N, x, theta)
    main = _main_factor(float(x), float(theta)) * _reflected_sum(M, x, theta)
    return abs(direct - main)


def reduction_remainder_bound(x: float) -> float:
    """2.035 / sqrt(x) + 3."""
    return E_BOUND / math.sqrt(float(x)) + 3


def gauss_sum_bound(q: int) -> float:
    """20.07 sqrt(q) + 3, valid for |S_N(a/q, theta)| with N <= q."""
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    return GAUSS_BOUND_SLOPE * math.sqrt(q) + 3


@dataclass(frozen=True)
class BoundCertificate:
    """Bound on |S_N(a/q, theta)| from iterating the reduction down the Euclid chain."""

    chain: EuclidChain
    level_terms: tuple[float, ...]
    telescoped_bound: float
    closed_form_bound: float

    @property
    def dominated(self) -> bool:
        return self.telescoped_bound <= self.closed_form_bound


def reduction_certificate(x: ReducedFraction) -> BoundCertificate:
    chain = euclid_chain(x)
    q = chain.terms
    root = math.sqrt(q[0])
    levels = tuple(E_BOUND / math.sqrt(q[j] / q[j - 1]) + 3 for j in range(1, len(q)))
    inv_all = math.fsum(1 / math.sqrt(v) for v in q[1:])
    inv_inner = math.fsum(1 / math.sqrt(v) for v in q[1:-1])
    telescoped = root + E_BOUND * root * inv_all + 3 * root * inv_inner + 3
    return BoundCertificate(
        chain=chain,
        level_terms=levels,
        telescoped_bound=telescoped,
        closed_form_bound=gauss_sum_bound(x.q),
    )
