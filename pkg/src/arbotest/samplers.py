"""Sublinear primitives: near-uniform edge sampling and edge-count estimation.

Both speak only to the counted query oracle; the true edge count never leaks
in except as the caller-supplied hint that sizes the light/heavy threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .graph import QuerySession
from .ratio import Ratio, as_fraction, frac_ceil, ln_inverse, sqrt_ceil

EXACT_SCAN_LIMIT = 64  # below this, scan all degrees instead of sampling


class EdgeCountError(RuntimeError):
    """The estimator found no edges; it requires m >= 1."""


def sample_edge_almost_uniform(session: QuerySession, rng, n: int, eps_s: Ratio,
                               delta: Ratio, m_hint: int,
                               *, attempt_factor: int = 8) -> Optional[Tuple[int, int]]:
    """Draw one edge with per-edge probability within (1 +- eps_s)/m.

    Light vertices (degree <= theta) are entry points; a fair coin picks
    between emitting the sampled light slot directly and taking one more
    uniform step out of a heavy neighbor. Returns None (failure) once the
    attempt budget runs out, which happens with probability <= delta when
    m_hint is within a factor 2 of the truth.
    """
    e = as_fraction(eps_s)
    d = as_fraction(delta)
    if not 0 < e < 1 or not 0 < d < 1:
        raise ValueError("eps_s and delta must be in (0, 1)")
    if m_hint < 1:
        raise ValueError(f"m_hint must be >= 1, got {m_hint}")
    theta = max(1, sqrt_ceil(2 * Fraction(m_hint) / e))
    budget = max(1, math.ceil(attempt_factor * n * theta / m_hint * ln_inverse(d)))

    randrange = rng.randrange
    randint = rng.randint
    random = rng.random
    degree = session.degree
    neighbor = session.neighbor
    for _ in range(budget):
        u = randrange(n)
        du = degree(u)
        if du == 0 or du > theta:
            continue
        j = randint(1, theta)
        if j > du:
            continue
        w = neighbor(u, j)
        if random() < 0.5:
            return (u, w)
        dw = degree(w)
        if dw > theta:
            return (w, neighbor(w, randint(1, dw)))
    return None


@dataclass
class EdgeEstimate:
    m_bar: int
    trials_used: int  # degree samples drawn


def _degree_average(session: QuerySession, rng, n: int, samples: int) -> Fraction:
    """Unbiased estimate n * avg(sampled degree) / 2 of the edge count."""
    randrange = rng.randrange
    degree = session.degree
    total = 0
    for _ in range(samples):
        total += degree(randrange(n))
    return Fraction(n * total, 2 * samples)


def estimate_edge_count(session: QuerySession, rng, n: int, delta: Ratio,
                        *, sample_factor: int = 64) -> EdgeEstimate:
    """Estimate m into [m/2, m] with probability >= 1 - delta.

    Geometric guessing from n^2 downward: each guess gets a degree-average
    estimate sized for its scale, the first confirmed guess is refined with
    a fresh sample to relative error 1/5, and 5/6 of the refined value maps
    that accuracy into [2m/3, m]. Tiny graphs are scanned exactly.
    """
    d = as_fraction(delta)
    if not 0 < d < 1:
        raise ValueError(f"delta must be in (0, 1), got {d}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")

    if n <= EXACT_SCAN_LIMIT:
        degree = session.degree
        m = sum(degree(v) for v in range(n)) // 2
        if m == 0:
            raise EdgeCountError("graph has no edges")
        return EdgeEstimate(m_bar=frac_ceil(Fraction(5 * m, 6)), trials_used=n)

    used = 0
    guess = n * n
    k = 0
    estimate = Fraction(0)
    while guess >= 1:
        budget = d / (2 ** (k + 2))  # halved per guess, half of delta kept for the refine
        samples = max(1, math.ceil(sample_factor * n / math.sqrt(guess) * ln_inverse(budget)))
        estimate = _degree_average(session, rng, n, samples)
        used += samples
        if estimate >= guess:
            break
        guess //= 2
        k += 1
    if guess < 1:
        raise EdgeCountError("no edges detected at any scale")

    refine_budget = d / 2
    scale = max(1.0, float(estimate))
    samples = max(1, math.ceil(sample_factor * n / math.sqrt(scale) * ln_inverse(refine_budget)))
    refined = _degree_average(session, rng, n, samples)
    used += samples
    m_bar = max(1, frac_ceil(Fraction(5, 6) * refined))
    return EdgeEstimate(m_bar=m_bar, trials_used=used)
