"""Tolerant query-model tester for bounded arboricity, plus its variants.

Pipeline: estimate the edge count, rule out an excess of edges between two
high-degree endpoints via near-uniform edge sampling, then estimate how many
edges with a low-degree endpoint survive the peeling by sampling vertex/index
pairs and running the local activity test on both endpoints. Each stage gets
an equal share of the total failure budget.

Verdict guarantees hold when the graph is either close to arboricity alpha
or far from arboricity 3*alpha; thresholds are compared in exact rational
arithmetic so boundary cases never flip on float noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .activity import is_active_raw
from .assign import ActivityTrace
from .graph import OUT_OF_RANGE, QueryGraph, QuerySession
from .ratio import Ratio, as_fraction, frac_ceil, ln_inverse
from .samplers import EdgeCountError, estimate_edge_count, sample_edge_almost_uniform

YES = "YES"
NO = "NO"
MANY = "MANY"
FEW = "FEW"

STAGE_HIGH = "high-edges"
STAGE_LOW = "low-edges"
STAGE_ESTIMATE_FAILURE = "edge-estimate-failure-path"

VARIANTS = ("standard", "known_m", "known_max_degree", "bounded_degree_model")


class DegreeContractError(RuntimeError):
    """A queried degree exceeded the declared maximum degree."""


class MaxDegreeSession:
    """Session proxy that enforces a declared degree bound on every answer."""

    __slots__ = ("_inner", "max_degree")

    def __init__(self, session: QuerySession, max_degree: int):
        self._inner = session
        self.max_degree = max_degree

    @property
    def n(self) -> int:
        return self._inner.n

    @property
    def degree_queries(self) -> int:
        return self._inner.degree_queries

    @property
    def neighbor_queries(self) -> int:
        return self._inner.neighbor_queries

    def degree(self, v: int) -> int:
        d = self._inner.degree(v)
        if d > self.max_degree:
            raise DegreeContractError(
                f"vertex {v} has degree {d}, above the declared bound {self.max_degree}"
            )
        return d

    def neighbor(self, v: int, i: int):
        return self._inner.neighbor(v, i)


@dataclass
class TesterConfig:
    """All tester parameters; sampling constants are tunable knobs."""

    alpha: int
    eps: Fraction
    delta_total: Fraction = Fraction(1, 3)
    ell: Optional[int] = None              # defaults to the peel iteration count
    variant: str = "standard"
    known_m: Optional[int] = None          # known_m variant
    max_degree: Optional[int] = None       # known_max_degree / bounded_degree_model
    high_sample_factor: int = 100
    low_sample_factor: int = 400
    sampler_eps: Fraction = Fraction(1, 10)
    sampler_attempt_factor: int = 8
    count_sample_factor: int = 64
    variant_sample_factor: int = 3         # known-m / known-degree edge censuses
    bdm_sample_factor: int = 400

    def __post_init__(self):
        self.eps = as_fraction(self.eps)
        self.delta_total = as_fraction(self.delta_total)
        self.sampler_eps = as_fraction(self.sampler_eps)
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if not 0 < self.eps <= Fraction(1, 20):
            raise ValueError(f"eps must be in (0, 1/20], got {self.eps}")
        if not 0 < self.delta_total < 1:
            raise ValueError(f"delta_total must be in (0, 1), got {self.delta_total}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        if self.variant == "known_m" and (self.known_m is None or self.known_m < 1):
            raise ValueError("known_m variant needs known_m >= 1")
        if self.variant in ("known_max_degree", "bounded_degree_model"):
            if self.max_degree is None or self.max_degree < 1:
                raise ValueError(f"{self.variant} variant needs max_degree >= 1")

    def effective_ell(self) -> int:
        from .ratio import peel_iterations

        return self.ell if self.ell is not None else peel_iterations(self.eps)


@dataclass
class Verdict:
    answer: str                  # YES / NO
    stage: str                   # which sub-procedure decided
    m_bar: Optional[int]
    degree_queries: int
    neighbor_queries: int

    @property
    def total_queries(self) -> int:
        return self.degree_queries + self.neighbor_queries


def _is_high(d: int, alpha: int, eps: Fraction) -> bool:
    # d > 2*alpha/eps without rounding
    return d * eps.numerator > 2 * alpha * eps.denominator


def is_high_degree(session, v: int, alpha: int, eps: Ratio) -> bool:
    """One degree query; true iff d(v) > 2*alpha/eps (exact threshold)."""
    return _is_high(session.degree(v), alpha, as_fraction(eps))


def estimate_high_edges(session, rng, n: int, alpha: int, eps: Ratio, delta: Ratio,
                        m_bar: int, *, sample_factor: int = 100,
                        sampler_eps: Ratio = Fraction(1, 10),
                        attempt_factor: int = 8) -> str:
    """MANY iff the sampled fraction of high edges exceeds 2.6*eps.

    Distinguishes more than 4*eps*m high edges from at most 2*eps*m, each
    with probability >= 1 - delta. A sampler failure folds into FEW.
    """
    e = as_fraction(eps)
    d = as_fraction(delta)
    r = max(1, math.ceil(sample_factor * ln_inverse(d / 4) / float(e)))
    per_draw = d / (2 * r)
    se = as_fraction(sampler_eps)
    highs = 0
    for _ in range(r):
        edge = sample_edge_almost_uniform(session, rng, n, se, per_draw, m_bar,
                                          attempt_factor=attempt_factor)
        if edge is None:
            return FEW
        u, v = edge
        u_high = _is_high(session.degree(u), alpha, e)
        v_high = _is_high(session.degree(v), alpha, e)
        if u_high and v_high:
            highs += 1
    # highs/r > 2.6*eps  <=>  5*q*highs > 13*p*r
    return MANY if 5 * e.denominator * highs > 13 * e.numerator * r else FEW


def estimate_remaining_low_edges(session, rng, n: int, alpha: int, eps: Ratio,
                                 delta: Ratio, ell: int, m_bar: int,
                                 *, sample_factor: int = 400) -> str:
    """FEW iff the scaled surviving-low-edge estimate is at most 14*eps.

    Assuming m_bar lands in [m/2, m]: at most 5*eps*m surviving low edges
    at slack 0 gives FEW, and at least 18*eps*m at slack 2*eps gives MANY,
    each with probability >= 1 - delta.
    """
    e = as_fraction(eps)
    d = as_fraction(delta)
    if m_bar < 1:
        raise ValueError(f"m_bar must be >= 1, got {m_bar}")
    t = max(1, math.ceil(sample_factor * n * alpha / (float(e) ** 2 * m_bar)
                         * ln_inverse(d / 2)))
    jmax = frac_ceil(2 * alpha / e)
    p, q = e.numerator, e.denominator
    high_cut = 2 * alpha * q
    ia_gamma = e
    ia_delta = e / 2
    randrange = rng.randrange
    randint = rng.randint
    degree = session.degree
    neighbor = session.neighbor
    hits = 0
    for _ in range(t):
        v = randrange(n)
        dv = degree(v)
        if dv * p > high_cut:
            continue
        u = neighbor(v, randint(1, jmax))
        if u is OUT_OF_RANGE:
            continue
        v_active = is_active_raw(session, rng, alpha, ia_gamma, ia_delta, v, ell)
        u_active = is_active_raw(session, rng, alpha, ia_gamma, ia_delta, u, ell)
        if v_active and u_active:
            du = degree(u)
            if (dv, v) < (du, u):
                hits += 1
    # mu = (n * jmax / m_bar) * hits/t <= 14*eps  <=>  hits*n*jmax*q <= 14*p*m_bar*t
    return FEW if hits * n * jmax * q <= 14 * p * m_bar * t else MANY


def is_bounded_arboricity(session, rng, n: int, config: TesterConfig) -> Verdict:
    """Standard pipeline: edge estimate, high-edge gate, surviving-low gate.

    YES with probability >= 2/3 when the graph is eps-close to arboricity
    alpha, NO with probability >= 2/3 when it is 20*eps-far from arboricity
    3*alpha. An edge-count failure (empty graph path) answers YES, which is
    correct for graphs with no edges.
    """
    d0 = session.degree_queries
    n0 = session.neighbor_queries
    counts = lambda: (session.degree_queries - d0, session.neighbor_queries - n0)
    stage_budget = config.delta_total / 3
    try:
        estimate = estimate_edge_count(session, rng, n, stage_budget,
                                       sample_factor=config.count_sample_factor)
    except EdgeCountError:
        dq, nq = counts()
        return Verdict(YES, STAGE_ESTIMATE_FAILURE, None, dq, nq)
    m_bar = estimate.m_bar
    high = estimate_high_edges(session, rng, n, config.alpha, config.eps,
                               stage_budget, m_bar,
                               sample_factor=config.high_sample_factor,
                               sampler_eps=config.sampler_eps,
                               attempt_factor=config.sampler_attempt_factor)
    if high == MANY:
        dq, nq = counts()
        return Verdict(NO, STAGE_HIGH, m_bar, dq, nq)
    low = estimate_remaining_low_edges(session, rng, n, config.alpha, config.eps,
                                       stage_budget, config.effective_ell(), m_bar,
                                       sample_factor=config.low_sample_factor)
    dq, nq = counts()
    return Verdict(YES if low == FEW else NO, STAGE_LOW, m_bar, dq, nq)


def _oriented_low_hits(session, rng, n: int, alpha: int, eps: Fraction,
                       jmax: int, samples: int) -> int:
    """Count sampled (vertex, index) pairs that land on an oriented low edge."""
    p, q = eps.numerator, eps.denominator
    high_cut = 2 * alpha * q
    randrange = rng.randrange
    randint = rng.randint
    degree = session.degree
    neighbor = session.neighbor
    hits = 0
    for _ in range(samples):
        v = randrange(n)
        dv = degree(v)
        if dv * p > high_cut:
            continue
        u = neighbor(v, randint(1, jmax))
        if u is OUT_OF_RANGE:
            continue
        du = degree(u)
        if (dv, v) < (du, u):
            hits += 1
    return hits


def _test_known_m(session, rng, n: int, config: TesterConfig) -> Verdict:
    """Exact m replaces estimation; the high-edge count is derived from a
    low-edge census over vertex/index pairs."""
    m = config.known_m
    e = config.eps
    alpha = config.alpha
    d0 = session.degree_queries
    n0 = session.neighbor_queries
    stage_budget = config.delta_total / 2
    jmax = frac_ceil(2 * alpha / e)
    samples = max(1, math.ceil(config.variant_sample_factor * n * jmax
                               / (float(e) ** 2 * m) * ln_inverse(stage_budget / 4)))
    hits = _oriented_low_hits(session, rng, n, alpha, e, jmax, samples)
    m_low = Fraction(hits * n * jmax, samples)
    if m - m_low > 3 * e * m:
        return Verdict(NO, STAGE_HIGH, m, session.degree_queries - d0,
                       session.neighbor_queries - n0)
    low = estimate_remaining_low_edges(session, rng, n, alpha, e, stage_budget,
                                       config.effective_ell(), m,
                                       sample_factor=config.low_sample_factor)
    return Verdict(YES if low == FEW else NO, STAGE_LOW, m,
                   session.degree_queries - d0, session.neighbor_queries - n0)


def _index_pair_edge_estimate(session, rng, n: int, dmax: int, delta: Fraction,
                              sample_factor: int) -> Fraction:
    """Estimate m to relative error 1/5 by sampling (vertex, index in [1, dmax])
    pairs; a pair hits when the index lands below the degree."""
    randrange = rng.randrange
    randint = rng.randint
    degree = session.degree

    def hit_count(samples: int) -> int:
        hits = 0
        for _ in range(samples):
            if randint(1, dmax) <= degree(randrange(n)):
                hits += 1
        return hits

    scale = n * dmax
    guess = max(1, scale // 2)
    k = 0
    estimate = Fraction(0)
    while guess >= 1:
        budget = delta / (2 ** (k + 2))
        samples = max(1, math.ceil(sample_factor * scale / (2 * guess) * ln_inverse(budget)))
        estimate = Fraction(hit_count(samples) * scale, 2 * samples)
        if estimate >= guess:
            break
        guess //= 2
        k += 1
    if guess < 1:
        raise EdgeCountError("no edges detected at any scale")
    refine_budget = delta / 2
    samples = max(1, math.ceil(sample_factor * scale / (2 * max(1.0, float(estimate)))
                               * ln_inverse(refine_budget)))
    refined = Fraction(hit_count(samples) * scale, 2 * samples)
    if refined == 0:
        raise EdgeCountError("no edges detected in the refinement sample")
    return refined


def _test_known_max_degree(session, rng, n: int, config: TesterConfig) -> Verdict:
    """Index sampling over [1, max_degree] replaces both edge estimators."""
    dmax = config.max_degree
    sess = MaxDegreeSession(session, dmax)
    e = config.eps
    alpha = config.alpha
    d0 = session.degree_queries
    n0 = session.neighbor_queries
    counts = lambda: (session.degree_queries - d0, session.neighbor_queries - n0)
    stage_budget = config.delta_total / 3
    try:
        m_est = _index_pair_edge_estimate(sess, rng, n, dmax, stage_budget,
                                          config.count_sample_factor)
    except EdgeCountError:
        dq, nq = counts()
        return Verdict(YES, STAGE_ESTIMATE_FAILURE, None, dq, nq)
    m_bar = max(1, frac_ceil(Fraction(5, 6) * m_est))
    jmax = dmax  # indices run over [1, max_degree], covering every neighbor slot
    samples = max(1, math.ceil(config.variant_sample_factor * n * dmax
                               / (float(e) ** 2 * float(m_est))
                               * ln_inverse(stage_budget / 4)))
    hits = _oriented_low_hits(sess, rng, n, alpha, e, jmax, samples)
    m_low = Fraction(hits * n * dmax, samples)
    if m_est - m_low > 3 * e * m_est:
        dq, nq = counts()
        return Verdict(NO, STAGE_HIGH, m_bar, dq, nq)
    low = estimate_remaining_low_edges(sess, rng, n, alpha, e, stage_budget,
                                       config.effective_ell(), m_bar,
                                       sample_factor=config.low_sample_factor)
    dq, nq = counts()
    return Verdict(YES if low == FEW else NO, STAGE_LOW, m_bar, dq, nq)


def _test_bounded_degree_model(session, rng, n: int, config: TesterConfig) -> Verdict:
    """Distance scale n*max_degree: constant-per-eps sample counts.

    High gate: estimated high-edge count above 3*eps*n*d answers NO. Low
    gate: estimated surviving low edges above 7*eps*n*d answers NO.
    """
    dmax = config.max_degree
    sess = MaxDegreeSession(session, dmax)
    e = config.eps
    alpha = config.alpha
    p, q = e.numerator, e.denominator
    high_cut = 2 * alpha * q
    d0 = session.degree_queries
    n0 = session.neighbor_queries
    stage_budget = config.delta_total / 2
    r = max(1, math.ceil(config.bdm_sample_factor * ln_inverse(stage_budget / 4) / float(e)))

    randrange = rng.randrange
    randint = rng.randint
    high_hits = 0
    for _ in range(r):
        v = randrange(n)
        dv = sess.degree(v)
        i = randint(1, dmax)
        if i > dv:
            continue
        u = sess.neighbor(v, i)
        du = sess.degree(u)
        if dv * p > high_cut and du * p > high_cut:
            high_hits += 1
    # hits*n*d/(2r) > 3*eps*n*d  <=>  hits*q > 6*p*r
    if high_hits * q > 6 * p * r:
        return Verdict(NO, STAGE_HIGH, None, session.degree_queries - d0,
                       session.neighbor_queries - n0)

    ell = config.effective_ell()
    ia_gamma = e
    ia_delta = e / 2
    low_hits = 0
    for _ in range(r):
        v = randrange(n)
        dv = sess.degree(v)
        if dv * p > high_cut:
            continue
        i = randint(1, dmax)
        if i > dv:
            continue
        u = sess.neighbor(v, i)
        v_active = is_active_raw(sess, rng, alpha, ia_gamma, ia_delta, v, ell)
        u_active = is_active_raw(sess, rng, alpha, ia_gamma, ia_delta, u, ell)
        if v_active and u_active:
            du = sess.degree(u)
            if (dv, v) < (du, u):
                low_hits += 1
    # hits*n*d/r <= 7*eps*n*d  <=>  hits*q <= 7*p*r
    answer = YES if low_hits * q <= 7 * p * r else NO
    return Verdict(answer, STAGE_LOW, None, session.degree_queries - d0,
                   session.neighbor_queries - n0)


def test_variant(session, rng, n: int, config: TesterConfig) -> Verdict:
    """Dispatch on the configured variant."""
    if config.variant == "standard":
        return is_bounded_arboricity(session, rng, n, config)
    if config.variant == "known_m":
        return _test_known_m(session, rng, n, config)
    if config.variant == "known_max_degree":
        return _test_known_max_degree(session, rng, n, config)
    if config.variant == "bounded_degree_model":
        return _test_bounded_degree_model(session, rng, n, config)
    raise ValueError(f"unknown variant {config.variant!r}")


# --- exact censuses (ground truth for tests; bypass the query oracle) -------


def count_high_edges(graph: QueryGraph, alpha: int, eps: Ratio) -> int:
    """Edges whose two endpoints both exceed the high-degree threshold."""
    e = as_fraction(eps)
    deg = [graph.degree_of(v) for v in range(graph.n)]
    return sum(1 for u, v in graph.edges()
               if _is_high(deg[u], alpha, e) and _is_high(deg[v], alpha, e))


def count_active_low_edges(graph: QueryGraph, trace: ActivityTrace, alpha: int,
                           eps: Ratio) -> int:
    """Surviving edges with at least one endpoint below the high threshold."""
    e = as_fraction(eps)
    deg = [graph.degree_of(v) for v in range(graph.n)]
    it = trace.inactivated_at
    return sum(1 for u, v in graph.edges()
               if it[u] == 0 and it[v] == 0
               and not (_is_high(deg[u], alpha, e) and _is_high(deg[v], alpha, e)))


def census_low_edge_pairs(graph: QueryGraph, trace: ActivityTrace, alpha: int,
                          eps: Ratio) -> int:
    """Pairs (v, j): v surviving and low, j <= d(v), the j-th neighbor
    surviving, and v preceding it in the degree/id order.

    In one-to-one correspondence with the surviving low edges oriented from
    their smaller endpoint.
    """
    e = as_fraction(eps)
    deg = [graph.degree_of(v) for v in range(graph.n)]
    it = trace.inactivated_at
    count = 0
    for v in range(graph.n):
        if it[v] != 0 or _is_high(deg[v], alpha, e):
            continue
        dv = deg[v]
        for u in graph.neighbors_of(v):
            if it[u] == 0 and (dv, v) < (deg[u], u):
                count += 1
    return count
