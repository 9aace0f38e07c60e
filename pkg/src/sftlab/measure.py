"""Stationary Markov measures on a subshift: the concrete, fully supported
ergodic measure class used everywhere downstream.

Sampling contract (stable across releases): a window draw with seed ``s``
uses ``numpy.random.Generator(PCG64(SeedSequence(s)))`` where ``s`` may be an
int or a tuple of ints, consumes exactly one uniform from ``Generator.random``
per letter, picks the first letter by inverse CDF on the stationary vector and
each subsequent letter by inverse CDF on the transition row of its
predecessor.  Inverse CDF on cumulative weights ``cum`` maps a uniform ``u``
to ``#{i < len(cum)-1 : cum[i] <= u}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotStochastic, SupportViolation
from .sft import SubshiftSpec, Word

_ROW_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    """Row-stochastic transitions supported exactly on the allowed pairs,
    plus the (unique) stationary probability vector."""

    spec: SubshiftSpec
    transition: np.ndarray
    stationary: np.ndarray

    def __post_init__(self):
        self.transition.setflags(write=False)
        self.stationary.setflags(write=False)


def stationary_markov(spec: SubshiftSpec, transition) -> MarkovMeasure:
    """Validate a transition matrix against the spec and attach its stationary
    vector (unique by strong connectivity of the allowed graph)."""
    p = np.asarray(transition, dtype=float)
    n = spec.alphabet_size
    if p.shape != (n, n):
        raise NotStochastic(f"transition matrix must be {n}x{n}, got shape {p.shape}")
    if np.any(p < 0.0):
        raise NotStochastic("transition probabilities must be nonnegative")
    rowsum = p.sum(axis=1)
    if np.any(np.abs(rowsum - 1.0) > _ROW_TOL):
        raise NotStochastic(f"rows must sum to 1 within {_ROW_TOL}; sums are {rowsum}")
    for i in range(n):
        for j in range(n):
            if spec.allowed[i][j] and p[i, j] <= 0.0:
                raise SupportViolation(
                    f"allowed transition ({i + 1}, {j + 1}) has probability 0: supp(mu) would miss part of the subshift"
                )
            if not spec.allowed[i][j] and p[i, j] != 0.0:
                raise SupportViolation(
                    f"forbidden transition ({i + 1}, {j + 1}) has positive probability {p[i, j]}"
                )

    # pi P = pi, sum(pi) = 1: replace one balance equation by the normalization
    a = p.T - np.eye(n)
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    pi = np.linalg.solve(a, b)
    pi = pi / pi.sum()
    if np.any(pi <= 0.0) or np.max(np.abs(pi @ p - pi)) > _ROW_TOL:
        raise NotStochastic("failed to compute a positive stationary vector")
    return MarkovMeasure(spec, p, pi)


def _pick(cum: np.ndarray, u: float) -> int:
    """Inverse CDF: number of interior cumulative weights <= u."""
    return int(np.sum(cum[:-1] <= u))


def sample_window(measure: MarkovMeasure, first_index: int, last_index: int, seed) -> Word:
    """Draw a window of letters covering [first_index, last_index].

    Deterministic in (measure, indices, seed); see the module docstring for
    the seed-to-stream mapping.
    """
    if first_index > last_index:
        raise ValueError("first_index must be <= last_index")
    length = last_index - first_index + 1
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    u = rng.random(length)
    cum_stat = np.cumsum(measure.stationary)
    cum_rows = np.cumsum(measure.transition, axis=1)
    letters = np.empty(length, dtype=np.int64)
    cur = _pick(cum_stat, u[0])
    letters[0] = cur
    for t in range(1, length):
        cur = _pick(cum_rows[cur], u[t])
        letters[t] = cur
    return Word(tuple(int(a) + 1 for a in letters), first_index)


def cylinder_probability(measure: MarkovMeasure, word: Word) -> float:
    """stationary[w_0] * prod transition[w_i][w_{i+1}]; base-index independent."""
    if len(word.letters) == 0:
        return 1.0
    p = float(measure.stationary[word.letters[0] - 1])
    for a, b in zip(word.letters, word.letters[1:]):
        p *= float(measure.transition[a - 1, b - 1])
    return p
