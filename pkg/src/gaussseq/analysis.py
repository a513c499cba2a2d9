"""Aperiodic correlation / ambiguity engines and set-level tolerance extraction.

Two engines compute the same quantities:

* direct summation over the overlap window (the reference);
* zero-padded FFT cross-correlation, used for whole profiles and sweeps.

Negative delays are always obtained from the swapped pair by conjugation,
R_{a,b}(-tau) = conj R_{b,a}(tau) and A_{a,b}(-tau, nu) = conj A_{b,a}(tau, -nu).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .report import best_of
from .sequences import LazRegion, PolyphaseSequence, SequenceSet

__all__ = [
    "ToleranceResult",
    "aperiodic_correlation",
    "correlation_profile",
    "correlation_profile_direct",
    "ambiguity",
    "ambiguity_profile",
    "ambiguity_profile_direct",
    "delta_tolerances",
    "theta_tolerances",
    "welch_bound",
    "t_sum_magnitude",
    "t_sum_direct",
    "b_r_search",
    "autocorrelation_peak_estimate",
]

SeqLike = Union[PolyphaseSequence, np.ndarray, Sequence[complex]]


def _samples(s: SeqLike) -> np.ndarray:
    if isinstance(s, PolyphaseSequence):
        return s.samples
    return np.asarray(s, dtype=np.complex128)


def _pair(a: SeqLike, b: SeqLike) -> tuple[np.ndarray, np.ndarray]:
    x, y = _samples(a), _samples(b)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"sequences must be 1-D of equal length, got {x.shape} and {y.shape}")
    return x, y


def _doppler(nu: int, L: int, count: int) -> np.ndarray:
    t = np.arange(count, dtype=np.int64)
    return np.exp(2j * np.pi * (((nu % L) * t) % L) / L)


def aperiodic_correlation(a: SeqLike, b: SeqLike, tau: int) -> complex:
    """R_{a,b}(tau) = sum_t a_t conj(b_{t+tau}) over the overlap; 0 for |tau| >= L."""
    x, y = _pair(a, b)
    L = x.size
    if abs(tau) >= L:
        return 0j
    if tau < 0:
        return aperiodic_correlation(y, x, -tau).conjugate()
    return complex(np.vdot(y[tau:], x[: L - tau]))


def ambiguity(a: SeqLike, b: SeqLike, tau: int, nu: int) -> complex:
    """A_{a,b}(tau, nu) = sum_t a_t conj(b_{t+tau}) e(nu t / L); equals R at nu = 0."""
    if nu == 0:
        return aperiodic_correlation(a, b, tau)
    x, y = _pair(a, b)
    L = x.size
    if abs(tau) >= L:
        return 0j
    if tau < 0:
        return ambiguity(y, x, -tau, -nu).conjugate()
    n = L - tau
    return complex(np.vdot(y[tau:], x[:n] * _doppler(nu, L, n)))


def _fft_size(L: int) -> int:
    return 1 << (2 * L - 2).bit_length()


def _lags(L: int) -> np.ndarray:
    return np.arange(-(L - 1), L)


def correlation_profile(a: SeqLike, b: SeqLike) -> np.ndarray:
    """R_{a,b}(tau) for tau = -(L-1)..(L-1) by zero-padded FFT."""
    x, y = _pair(a, b)
    L = x.size
    n = _fft_size(L)
    c = np.fft.ifft(np.fft.fft(x, n) * np.conj(np.fft.fft(y, n)))
    # c[k] = sum_u x_{u+k} conj(y_u) = R(-k)
    return c[(-_lags(L)) % n]


def correlation_profile_direct(a: SeqLike, b: SeqLike) -> np.ndarray:
    x, y = _pair(a, b)
    L = x.size
    return np.array([aperiodic_correlation(x, y, tau) for tau in _lags(L)])


def ambiguity_profile(a: SeqLike, b: SeqLike, nu: int) -> np.ndarray:
    """A_{a,b}(tau, nu) for tau = -(L-1)..(L-1) by FFT."""
    x, y = _pair(a, b)
    L = x.size
    lags = _lags(L)
    prof = correlation_profile(x * _doppler(nu, L, L), y)
    # for tau < 0 the modulation index is shifted by -tau
    neg = lags < 0
    prof[neg] *= np.exp(2j * np.pi * (((nu * lags[neg]) % L) / L))
    return prof


def ambiguity_profile_direct(a: SeqLike, b: SeqLike, nu: int) -> np.ndarray:
    x, y = _pair(a, b)
    return np.array([ambiguity(x, y, tau, nu) for tau in _lags(x.size)])


@dataclass(frozen=True)
class ToleranceResult:
    """Auto/cross tolerances of a set with the shift/pair that attains the maximum.

    Witnesses are ``(root1, root2, tau, nu)``.
    """

    auto_tol: float
    cross_tol: float
    auto_witness: tuple[int, int, int, int] | None
    cross_witness: tuple[int, int, int, int] | None

    @property
    def max_tol(self) -> float:
        return max(self.auto_tol, self.cross_tol)

    @property
    def witness(self) -> tuple[int, int, int, int] | None:
        cands = [
            (tol, _witness_key(w))
            for tol, w in ((self.auto_tol, self.auto_witness), (self.cross_tol, self.cross_witness))
            if w is not None
        ]
        best = best_of(cands)
        return _as_witness(best[1]) if best else None


def _witness_key(w: tuple[int, int, int, int]) -> tuple:
    r1, r2, tau, nu = w
    return (abs(tau), tau, nu, r1, r2)


def _best_in(mags: np.ndarray, key: Callable[[int], tuple]) -> tuple[float, tuple] | None:
    """Max of ``mags`` with the smallest ``key(index)`` among exact ties."""
    if mags.size == 0:
        return None
    peak = float(mags.max())
    return peak, min(key(int(i)) for i in np.flatnonzero(mags == peak))


def _reduce(cands: list[tuple[float, tuple] | None]) -> tuple[float, tuple] | None:
    return best_of(c for c in cands if c is not None)


def _map(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _as_witness(key: tuple | None) -> tuple[int, int, int, int] | None:
    if key is None:
        return None
    _, tau, nu, r1, r2 = key
    return (r1, r2, tau, nu)


def delta_tolerances(
    sset: SequenceSet | Sequence[PolyphaseSequence],
    engine: str = "fast",
    workers: int = 1,
) -> ToleranceResult:
    """delta_a over 0 < tau <= L-1 and delta_c over ordered distinct pairs, 0 <= tau <= L-1."""
    members = list(sset.members if isinstance(sset, SequenceSet) else sset)
    if not members:
        raise ValueError("empty sequence set")
    roots = [m.root for m in members]
    X = np.vstack([m.samples for m in members])
    K, L = X.shape

    if engine == "fast":
        n = _fft_size(L)
        F = np.fft.fft(X, n, axis=1)
        src = (-_lags(L)) % n

        def rows(i: int) -> np.ndarray:
            return np.fft.ifft(F[i][None, :] * np.conj(F[i:]), axis=1)[:, src]

    elif engine == "direct":

        def rows(i: int) -> np.ndarray:
            return np.vstack([correlation_profile_direct(X[i], X[j]) for j in range(i, K)])

    else:
        raise ValueError(f"unknown engine {engine!r}")

    def task(i: int):
        prof = np.abs(rows(i))
        auto = prof[0, L:]  # tau = 1..L-1
        auto_best = _best_in(auto, lambda k: (k + 1, k + 1, 0, roots[i], roots[i]))
        cross = []
        for off in range(1, K - i):
            j = i + off
            fwd = prof[off, L - 1 :]  # R_{i,j}(tau), tau = 0..L-1
            cross.append(_best_in(fwd, lambda t, j=j: (t, t, 0, roots[i], roots[j])))
            # R_{j,i}(tau) = conj R_{i,j}(-tau)
            bwd = prof[off, L - 1 :: -1]
            cross.append(_best_in(bwd, lambda t, j=j: (t, t, 0, roots[j], roots[i])))
        return auto_best, _reduce(cross)

    results = _map(task, range(K), workers)
    auto = _reduce([r[0] for r in results])
    cross = _reduce([r[1] for r in results])
    return ToleranceResult(
        auto_tol=auto[0] if auto else 0.0,
        cross_tol=cross[0] if cross else 0.0,
        auto_witness=_as_witness(auto[1] if auto else None),
        cross_witness=_as_witness(cross[1] if cross else None),
    )


def theta_tolerances(
    sset: SequenceSet | Sequence[PolyphaseSequence],
    laz: LazRegion | None = None,
    engine: str = "fast",
    workers: int = 1,
) -> ToleranceResult:
    """theta_a / theta_c over the open window tau in (-z_x, z_x), nu in (-z_y, z_y).

    Auto terms skip (tau, nu) = (0, 0). ``laz`` defaults to the set's own zone.
    """
    if laz is None:
        if not isinstance(sset, SequenceSet) or sset.laz is None:
            raise ValueError("no low-ambiguity zone given and the set carries none")
        laz = sset.laz
    members = list(sset.members if isinstance(sset, SequenceSet) else sset)
    if not members:
        raise ValueError("empty sequence set")
    roots = [m.root for m in members]
    X = np.vstack([m.samples for m in members])
    K, L = X.shape
    laz.check_length(L)
    delays = np.arange(-laz.z_x + 1, laz.z_x)
    window = delays + (L - 1)  # positions inside a full profile
    nonzero = delays != 0
    n = _fft_size(L)
    src = (-_lags(L)) % n
    if engine == "fast":
        F = np.fft.fft(X, n, axis=1)

    def task(nu: int):
        if engine == "fast":
            Fm = np.fft.fft(X * _doppler(nu, L, L)[None, :], n, axis=1)
            prof = np.fft.ifft(Fm[:, None, :] * np.conj(F)[None, :, :], axis=2)
            # magnitudes only: the tau < 0 phase correction is unimodular
            prof = prof[:, :, src[window]]
        elif engine == "direct":
            prof = np.array(
                [[[ambiguity(X[i], X[j], int(d), nu) for d in delays] for j in range(K)] for i in range(K)]
            )
        else:
            raise ValueError(f"unknown engine {engine!r}")
        mags = np.abs(prof)
        auto, cross = [], []
        for i in range(K):
            for j in range(K):
                row, ds = mags[i, j], delays
                if i == j and nu == 0:
                    # (tau, nu) = (0, 0) is the main lobe, not a sidelobe
                    row, ds = row[nonzero], delays[nonzero]
                key = lambda k, i=i, j=j, ds=ds: (abs(int(ds[k])), int(ds[k]), nu, roots[i], roots[j])
                (auto if i == j else cross).append(_best_in(row, key))
        return _reduce(auto), _reduce(cross)

    results = _map(task, range(-laz.z_y + 1, laz.z_y), workers)
    auto = _reduce([r[0] for r in results])
    cross = _reduce([r[1] for r in results])
    return ToleranceResult(
        auto_tol=auto[0] if auto else 0.0,
        cross_tol=cross[0] if cross else 0.0,
        auto_witness=_as_witness(auto[1] if auto else None),
        cross_witness=_as_witness(cross[1] if cross else None),
    )


def welch_bound(L: int, K: int) -> float:
    """L sqrt((K-1) / (K(2L-1) - 1)); zero for a single sequence."""
    if L < 1 or K < 1:
        raise ValueError(f"need L, K >= 1, got L={L}, K={K}")
    if K == 1:
        return 0.0
    return L * math.sqrt((K - 1) / (K * (2 * L - 1) - 1))


def t_sum_direct(N: int, r: int, tau: int) -> complex:
    t = np.arange(N - tau, dtype=np.int64)
    return complex(np.sum(np.exp(-2j * np.pi * (((r * tau) % N) * t % N) / N)))


def t_sum_magnitude(N: int, r: int, tau: int) -> float:
    """|sin(pi r tau^2 / N) / sin(pi r tau / N)|, or N - tau when r tau = 0 mod N."""
    if not (1 <= r and 1 <= tau <= N - 1):
        raise ValueError(f"need r >= 1 and 1 <= tau <= N-1, got r={r}, tau={tau}, N={N}")
    den = (r * tau) % N
    if den == 0:
        return float(N - tau)
    num = (r * tau * tau) % N
    return abs(math.sin(math.pi * num / N) / math.sin(math.pi * den / N))


def b_r_search(N: int, r: int) -> tuple[float, int]:
    """Largest |T_N(r, tau)| over tau = 1..N-1 and the smallest tau attaining it."""
    best = None
    for tau in range(1, N):
        v = t_sum_magnitude(N, r, tau)
        if best is None or v > best[0]:
            best = (v, tau)
    return best


def autocorrelation_peak_estimate(N: int, r: int) -> float | None:
    """Rough estimate of b_r_search(N, r)[0] for r >= 2 (diagnostic only).

    Uses the smallest b in [1, r/2] with b N = +-1 mod r; returns None if none.
    """
    if r < 2:
        raise ValueError("estimate needs r >= 2")
    for b in range(1, r // 2 + 1):
        if (b * N) % r in (1, r - 1):
            ratio = b / r
            if ratio <= 0.37:
                return 0.48 * math.sqrt(ratio) * N
            return N / math.pi * math.sin(math.pi * ratio)
    return None
