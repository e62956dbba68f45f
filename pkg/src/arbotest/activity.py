"""Randomized local test for whether a vertex survives the peeling.

A call at level i answers NO outright when d(v) <= 3*alpha, YES outright at
the recursion floor, and otherwise estimates the surviving-neighbor fraction
from a small uniform sample of neighbors, recursing one level down with a
tightened failure budget. Sampling is with replacement and deliberately
unmemoized: each visit pays its own queries, which is what the complexity
accounting measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict

from .graph import QuerySession
from .ratio import Ratio, as_fraction, ln_inverse


def sample_size(delta: Fraction, gamma: Fraction) -> int:
    """ceil(ln(1/delta) / gamma^2), clamped to at least one sample."""
    g2 = float(gamma) * float(gamma)
    return max(1, math.ceil(ln_inverse(delta) / g2))


@dataclass
class SampleSchedule:
    """Per-level sample sizes and failure budgets of one top-level call."""

    gamma: Fraction
    delta: Fraction
    ell: int
    sizes: Dict[int, int]              # level i in [2, ell] -> t_i
    budgets: Dict[int, Fraction]       # level i in [2, ell] -> delta_i

    def recursion_floor(self, j: int) -> Fraction:
        """Exact lower bound (delta * gamma^4 / (4 j^2)) ** j for depth j."""
        return (self.delta * self.gamma ** 4 / (4 * j * j)) ** j

    def satisfies_recursion_bound(self) -> bool:
        """Check budgets[ell - j + 1] >= recursion_floor(j) at every depth."""
        for j in range(1, self.ell):
            if self.budgets[self.ell - j + 1] < self.recursion_floor(j):
                return False
        return True

    def query_ceiling(self) -> int:
        """Worst-case query count of one top-level call: prod(2 t_i + 1)."""
        total = 1
        for t in self.sizes.values():
            total *= 2 * t + 1
        return total


def sample_schedule(gamma: Ratio, delta: Ratio, ell: int) -> SampleSchedule:
    """Budgets delta_ell = delta, delta_i = delta_{i+1} / (2 t_{i+1})."""
    g = as_fraction(gamma)
    d = as_fraction(delta)
    if not 0 < g < 1:
        raise ValueError(f"gamma must be in (0, 1), got {g}")
    if not 0 < d < 1:
        raise ValueError(f"delta must be in (0, 1), got {d}")
    if ell < 1:
        raise ValueError(f"level must be >= 1, got {ell}")
    sizes: Dict[int, int] = {}
    budgets: Dict[int, Fraction] = {}
    cur = d
    for i in range(ell, 1, -1):
        budgets[i] = cur
        t = sample_size(cur, g)
        sizes[i] = t
        cur = cur / (2 * t)
    return SampleSchedule(gamma=g, delta=d, ell=ell, sizes=sizes, budgets=budgets)


@dataclass
class ActivityVerdict:
    active: bool
    degree_queries: int
    neighbor_queries: int

    @property
    def answer(self) -> str:
        return "YES" if self.active else "NO"


def is_active_raw(session: QuerySession, rng, alpha: int, gamma: Fraction,
                  delta: Fraction, v: int, level: int) -> bool:
    """Recursive core; gamma and delta must already be Fractions."""
    d = session.degree(v)
    if d <= 3 * alpha:
        return False
    if level == 1:
        return True
    t = sample_size(delta, gamma)
    child_delta = delta / (2 * t)
    randint = rng.randint
    neighbor = session.neighbor
    yes = 0
    for _ in range(t):
        u = neighbor(v, randint(1, d))
        if is_active_raw(session, rng, alpha, gamma, child_delta, u, level - 1):
            yes += 1
    # YES iff (yes/t) * d > 3*alpha + gamma*d, compared exactly
    p, q = gamma.numerator, gamma.denominator
    return yes * d * q > t * (3 * alpha * q + p * d)


def is_active(session: QuerySession, rng, alpha: int, gamma: Ratio, delta: Ratio,
              v: int, level: int) -> ActivityVerdict:
    """Decide activity of ``v`` at the given level, measuring queries used."""
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    g = as_fraction(gamma)
    d = as_fraction(delta)
    if not 0 < g < 1 or not 0 < d < 1:
        raise ValueError("gamma and delta must be in (0, 1)")
    d0 = session.degree_queries
    n0 = session.neighbor_queries
    answer = is_active_raw(session, rng, alpha, g, d, v, level)
    return ActivityVerdict(
        active=answer,
        degree_queries=session.degree_queries - d0,
        neighbor_queries=session.neighbor_queries - n0,
    )
