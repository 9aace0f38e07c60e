"""Lyapunov exponents: exact values on periodic orbits, Monte-Carlo ergodic
estimates, zero-exponent scans and the periodic-approximation diagnostic.

The Monte-Carlo estimator runs ``n_samples`` independent windows of
``n_steps`` steps each.  Sample ``i`` draws its letters exactly as
``measure.sample_window(measure, -1, n_steps - 1, seed=(seed, i))`` would
(the documented splitting rule), multiplies the per-step matrices with
max-entry renormalization at every step, and reports

    rate_i = (accumulated log scale + log spectral norm of the residual) / n_steps.

The estimate is the sample mean; stderr is the sample standard deviation over
the independent rates divided by sqrt(n_samples).  Everything is elementwise
arithmetic on per-sample lanes, so results are bit-identical whether energies
are estimated one at a time or batched on a grid, and identical at k and
acos(cos k) because the letter streams never depend on k and the matrices are
functions of the canonicalized cosine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .cocycle import ScaledMat2, a_matrix
from .measure import MarkovMeasure
from .sft import PeriodicPoint, enumerate_periodic_points
from .spectra import monodromy_trace

_BLOCK = 8192


@dataclass(frozen=True)
class McParams:
    """Monte-Carlo estimator controls shared by the scanning operations."""

    n_steps: int = 100_000
    n_samples: int = 100
    seed: int = 0


@dataclass(frozen=True)
class LyapunovEstimate:
    k: float
    value: float
    stderr: float
    n_steps: int
    n_samples: int
    seed: int


@dataclass(frozen=True)
class ZeroSetHit:
    """A grid point whose estimate fell below the zero threshold."""

    k: float
    estimate: LyapunovEstimate
    in_exclusion_window: bool


def lyapunov_periodic(p: PeriodicPoint, k: float) -> float:
    """(1/n_p) log(spectral radius) of the one-period product: zero when the
    trace lies in [-2, 2] (elliptic/parabolic), else log of the larger
    eigenvalue magnitude of the unimodular monodromy."""
    half = abs(monodromy_trace(p, k)) / 2.0
    if half <= 1.0:
        return 0.0
    return math.log(half + math.sqrt(half * half - 1.0)) / p.period


def growth_rate(sm: ScaledMat2, n_steps: int) -> float:
    """Per-step expansion rate of an accumulated renormalized product."""
    return (sm.log_scale + math.log(sm.mat.spectral_norm())) / n_steps


def _iter_pair_blocks(
    measure: MarkovMeasure, n_steps: int, n_samples: int, seed: int
) -> Iterator[np.ndarray]:
    """Stream (n_samples, block) matrices of letter-pair indices
    (prev-1)*l + (cur-1), drawing each sample's letters from its own
    generator seeded with entropy (seed, sample_index)."""
    l = measure.spec.alphabet_size
    gens = [
        np.random.Generator(np.random.PCG64(np.random.SeedSequence((int(seed), i))))
        for i in range(n_samples)
    ]
    interior_rows = np.cumsum(measure.transition, axis=1)[:, :-1]
    interior_stat = np.cumsum(measure.stationary)[:-1]
    u0 = np.array([g.random() for g in gens])
    cur = np.sum(u0[:, None] >= interior_stat[None, :], axis=1)
    done = 0
    while done < n_steps:
        b = min(_BLOCK, n_steps - done)
        u = np.empty((n_samples, b))
        for i, g in enumerate(gens):
            u[i] = g.random(b)
        pairs = np.empty((n_samples, b), dtype=np.intp)
        for t in range(b):
            nxt = np.sum(u[:, t][:, None] >= interior_rows[cur], axis=1)
            pairs[:, t] = cur * l + nxt
            cur = nxt
        yield pairs
        done += b


def _mc_rates(
    measure: MarkovMeasure, k_values: Sequence[float], n_steps: int, n_samples: int, seed: int
) -> np.ndarray:
    """Per-sample rates, shape (len(k_values), n_samples)."""
    l = measure.spec.alphabet_size
    n_k = len(k_values)
    e11 = np.full((n_k, l * l), np.nan)
    e12 = np.full((n_k, l * l), np.nan)
    e21 = np.full((n_k, l * l), np.nan)
    for a, k in enumerate(k_values):
        for prev in measure.spec.letters:
            for cur in measure.spec.letters:
                if measure.spec.allowed[prev - 1][cur - 1]:
                    m = a_matrix(k, prev, cur)
                    idx = (prev - 1) * l + (cur - 1)
                    e11[a, idx], e12[a, idx], e21[a, idx] = m.a11, m.a12, m.a21

    m11 = np.ones((n_k, n_samples))
    m12 = np.zeros((n_k, n_samples))
    m21 = np.zeros((n_k, n_samples))
    m22 = np.ones((n_k, n_samples))
    logs = np.zeros((n_k, n_samples))
    for pairs in _iter_pair_blocks(measure, n_steps, n_samples, seed):
        for t in range(pairs.shape[1]):
            idx = pairs[:, t]
            a11 = e11[:, idx]
            a12 = e12[:, idx]
            a21 = e21[:, idx]
            # single-step matrices have a zero lower-right entry
            n11 = a11 * m11 + a12 * m21
            n12 = a11 * m12 + a12 * m22
            n21 = a21 * m11
            n22 = a21 * m12
            mag = np.maximum(
                np.maximum(np.abs(n11), np.abs(n12)), np.maximum(np.abs(n21), np.abs(n22))
            )
            logs += np.log(mag)
            m11 = n11 / mag
            m12 = n12 / mag
            m21 = n21 / mag
            m22 = n22 / mag

    q = m11 * m11 + m12 * m12 + m21 * m21 + m22 * m22
    det = m11 * m22 - m12 * m21
    smax = np.sqrt((q + np.sqrt(np.maximum(q * q - 4.0 * det * det, 0.0))) / 2.0)
    return (logs + np.log(smax)) / n_steps


def _estimate_from_rates(row: np.ndarray, k: float, n_steps, n_samples, seed) -> LyapunovEstimate:
    value = float(np.mean(row))
    stderr = float(np.std(row, ddof=1) / math.sqrt(n_samples))
    return LyapunovEstimate(
        k=float(k), value=value, stderr=stderr, n_steps=n_steps, n_samples=n_samples, seed=seed
    )


def _check_mc_args(n_steps: int, n_samples: int):
    if n_steps < 1000:
        raise ValueError("n_steps must be at least 1000")
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")


def lyapunov_mc(
    measure: MarkovMeasure, k: float, n_steps: int, n_samples: int, seed: int
) -> LyapunovEstimate:
    """Monte-Carlo estimate of the exponent at a single energy."""
    _check_mc_args(n_steps, n_samples)
    rates = _mc_rates(measure, [k], n_steps, n_samples, seed)
    return _estimate_from_rates(rates[0], k, n_steps, n_samples, seed)


def lyapunov_mc_grid(
    measure: MarkovMeasure, k_values: Sequence[float], n_steps: int, n_samples: int, seed: int
) -> list[LyapunovEstimate]:
    """Estimates for a whole energy grid in one pass over the sampled paths;
    bit-identical to calling :func:`lyapunov_mc` per energy."""
    _check_mc_args(n_steps, n_samples)
    rates = _mc_rates(measure, list(k_values), n_steps, n_samples, seed)
    return [
        _estimate_from_rates(rates[i], k, n_steps, n_samples, seed)
        for i, k in enumerate(k_values)
    ]


def in_exclusion_window(k: float, halfwidth: float = 0.02) -> bool:
    """Whether k lies within ``halfwidth`` of one of 0, pi/2, pi, the three
    energies the positivity statements leave untouched."""
    return any(abs(k - x) <= halfwidth for x in (0.0, math.pi / 2.0, math.pi))


def zero_set_scan(
    measure: MarkovMeasure,
    k_grid: Sequence[float],
    epsilon: float,
    mc_params: McParams,
    exclusion_halfwidth: float = 0.02,
) -> list[ZeroSetHit]:
    """All grid points whose estimate falls below epsilon, annotated with
    whether they sit inside the exclusion windows around 0, pi/2, pi."""
    estimates = lyapunov_mc_grid(
        measure, k_grid, mc_params.n_steps, mc_params.n_samples, mc_params.seed
    )
    return [
        ZeroSetHit(est.k, est, in_exclusion_window(est.k, exclusion_halfwidth))
        for est in estimates
        if est.value < epsilon
    ]


def kalinin_gap(measure: MarkovMeasure, k: float, max_period: int, mc_params: McParams) -> float:
    """min over periodic points of period <= max_period of |periodic exponent
    - Monte-Carlo estimate|: a diagnostic that should shrink as the period
    budget grows."""
    est = lyapunov_mc(measure, k, mc_params.n_steps, mc_params.n_samples, mc_params.seed)
    points = enumerate_periodic_points(measure.spec, max_period)
    return min(abs(lyapunov_periodic(p, k) - est.value) for p in points)
