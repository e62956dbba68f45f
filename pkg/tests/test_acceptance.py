"""Acceptance suite: one test per criterion, printed as a pass/fail line.

Statistical criteria run with fixed seeds, so a passing suite is
reproducible. Instance pools are certified by the exact oracles before any
randomized procedure is measured against them.
"""

import math
import random
from collections import Counter
from fractions import Fraction

import pytest

from arbotest.activity import is_active, sample_schedule
from arbotest.assign import peel, verify_peel_bounds
from arbotest.bench import fit_power_law, fitted_envelope_constant, run_sweep, run_trials
from arbotest.exact import (brute_force_arboricity_small, distance_to_arboricity,
                            exact_arboricity)
from arbotest.generators import (gen_erdos_renyi, gen_forest,
                                 gen_matching_bipartite, gen_planted_clique,
                                 gen_preferential_attachment)
from arbotest.graph import QuerySession, load_graph
from arbotest.ratio import peel_iterations
from arbotest.samplers import sample_edge_almost_uniform
from arbotest.tester import (FEW, MANY, TesterConfig, census_low_edge_pairs,
                             count_active_low_edges, count_high_edges,
                             estimate_high_edges)
from conftest import (WORKERS, check_trace_invariants, complete_graph,
                      cycle_graph, gnp, path_graph, pool_map, star,
                      validate_decomposition)

EPS20 = Fraction(1, 20)
EPS40 = Fraction(1, 40)


def announce(number, name, detail):
    print(f"ACCEPTANCE {number} ({name}): PASS - {detail}")


# --- certified instance pools -------------------------------------------------


def _perturbed_matching(n, m_bar, alpha, extra, seed):
    base = gen_matching_bipartite(n, m_bar, alpha, seed=seed)
    rng = random.Random(seed + 999)
    present = set(base.edges())
    edges = list(base.edges())
    added = 0
    while added < extra:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in present:
            continue
        present.add(key)
        edges.append(key)
        added += 1
    return load_graph(edges, n)


def _disjoint_cliques(k, blocks):
    edges = []
    for b in range(blocks):
        base = k * b
        edges.extend((base + i, base + j) for i in range(k) for j in range(i + 1, k))
    return load_graph(edges, k * blocks)


@pytest.fixture(scope="session")
def close_pool():
    """Instances certified eps-close to arboricity alpha, with exact labels."""
    pool = []
    epses = [EPS20, EPS40]
    idx = 0

    def add(graph, alpha):
        nonlocal idx
        eps = epses[idx % 2]
        idx += 1
        report = distance_to_arboricity(graph, alpha)
        assert report.eps_exact <= eps, "pool instance failed its closeness label"
        pool.append((graph, alpha, eps, report))

    seed = 0
    for alpha in (1, 2, 3, 4):
        for side in (200, 400, 600):
            for _ in range(2):
                seed += 1
                add(gen_matching_bipartite(2 * side + 50, side * alpha, alpha,
                                           seed=seed), alpha)
    for alpha in (1, 2):
        for side in (300, 500):
            for k in range(3):
                seed += 1
                m_bar = side * alpha
                extra = max(1, (m_bar // 40) // 2)  # under eps*m/2 for both eps
                add(_perturbed_matching(2 * side + 40, m_bar, alpha, extra,
                                        seed=seed), alpha)
    for n in (500, 1500, 3000):
        for _ in range(2):
            seed += 1
            add(gen_forest(n, seed=seed), 1)
    for n, alpha in ((400, 2), (800, 2), (800, 3), (1200, 3)):
        seed += 1
        add(gen_preferential_attachment(n, alpha, seed=seed), alpha)
    for n in (600, 900, 1200, 1500):
        seed += 1
        add(gen_erdos_renyi(n, 0.8 / n, seed=seed), 2)
    assert len(pool) >= 50
    return pool


@pytest.fixture(scope="session")
def far_pool():
    """Instances with exact distance beta*m to arboricity 3*alpha."""
    pool = []
    epses = [EPS20, EPS40]
    idx = 0

    def add(graph, alpha):
        nonlocal idx
        eps = epses[idx % 2]
        idx += 1
        report = distance_to_arboricity(graph, 3 * alpha)
        assert report.deletions_needed > 0, "far pool instance is not far at all"
        pool.append((graph, alpha, eps, report))

    seed = 100
    for alpha in (1, 2, 4):
        for m_bar in (1000, 2000, 4000):
            for _ in range(2):
                seed += 1
                side = m_bar // alpha
                add(gen_planted_clique(2 * side + 80, m_bar, alpha, seed=seed),
                    alpha)
    for alpha in (2, 3):
        seed += 1
        side = 1500 // alpha
        add(gen_planted_clique(2 * side + 80, side * alpha, alpha, seed=seed),
            alpha)
    for q in (48, 64, 80, 96):
        for m_bar in (100, 200):
            for _ in range(2):
                seed += 1
                add(gen_planted_clique(2 * m_bar + q + 10, m_bar, 1, seed=seed,
                                       clique=q), 1)
    for q, alpha, pad in ((40, 1, 100), (40, 1, 300), (56, 1, 80), (64, 1, 150),
                          (64, 2, 150), (80, 1, 200), (100, 2, 100), (100, 2, 400)):
        add(complete_graph(q, n=q + pad), alpha)
    for k, blocks in ((7, 20), (7, 50), (9, 20), (9, 40), (11, 30), (12, 25)):
        add(_disjoint_cliques(k, blocks), 1)
    assert len(pool) >= 50
    return pool


# --- criteria ------------------------------------------------------------------


def test_criterion_1_close_direction(close_pool):
    checked = 0
    for graph, alpha, eps, report in close_pool:
        result = verify_peel_bounds(graph, alpha, eps, 0, beta=report.eps_exact)
        assert result.close_bound_holds, (alpha, eps, result)
        checked += 1
    announce(1, "peeling close bound", f"{checked} certified-close instances, "
             f"survivors <= 5*eps*m exactly")


def test_criterion_2_far_direction(far_pool):
    checked = 0
    nontrivial = 0
    for graph, alpha, eps, report in far_pool:
        beta = report.eps_exact
        for gamma in (Fraction(0), eps, 2 * eps):
            result = verify_peel_bounds(graph, alpha, eps, gamma, beta=beta)
            assert result.far_bound_holds, (alpha, eps, gamma, result)
            if result.far_threshold > 0:
                nontrivial += 1
        checked += 1
    assert nontrivial >= 100
    announce(2, "peeling far bound", f"{checked} certified-far instances x 3 "
             f"slacks, survivors > (beta-2*gamma)*m exactly")


def test_criterion_3_forest_decomposition(close_pool, far_pool):
    checked = 0
    for graph, alpha, eps, _ in close_pool + far_pool:
        ell = peel_iterations(eps)
        for gamma in (Fraction(0), 2 * eps):
            trace = peel(graph, alpha, gamma, ell)
            check_trace_invariants(graph, trace)
            validate_decomposition(graph, trace, alpha)
            checked += 1
    announce(3, "forest decomposition validity",
             f"{checked} traces: acyclic, out-degree <= 3*alpha, "
             f"<= 3*alpha forest labels, removal budget respected")


def test_criterion_4_local_activity_error_rate():
    gamma = Fraction(1, 4)
    delta = Fraction(1, 10)
    trials = 2000
    fixtures = [
        (complete_graph(8), 1, 2),
        (complete_graph(8), 1, 3),
        (star(30), 1, 2),
        (gnp(60, 0.25, seed=31), 2, 2),
        (gnp(50, 0.3, seed=32), 2, 3),
    ]
    # a center-hub-leaf tree adds inactive vertices of depth 2 and 3
    hub_edges = []
    nxt = 11
    for hub in range(1, 11):
        hub_edges.append((0, hub))
        for _ in range(5):
            hub_edges.append((hub, nxt))
            nxt += 1
    fixtures.append((load_graph(hub_edges, nxt), 1, 3))

    yes_jobs = []
    no_jobs = []
    for graph, alpha, ell in fixtures:
        trace0 = peel(graph, alpha, 0, ell)
        trace2g = peel(graph, alpha, 2 * gamma, ell)
        for v in range(graph.n):
            if trace2g.is_active(v):
                yes_jobs.append((graph, alpha, ell, v, True))
            elif not trace0.is_active(v) and graph.degree_of(v) > 3 * alpha:
                no_jobs.append((graph, alpha, ell, v, False))
    assert yes_jobs and no_jobs
    bound = float(delta) + 3 * math.sqrt(float(delta) / trials)
    rates = []
    for jobs, label in ((yes_jobs, "survivors"), (no_jobs, "peeled")):
        rng = random.Random(90210)
        errors = 0
        for t in range(trials):
            graph, alpha, ell, v, expect = jobs[t % len(jobs)]
            s = QuerySession(graph)
            got = is_active(s, rng, alpha, gamma, delta, v, ell).active
            errors += got != expect
        rate = errors / trials
        assert rate <= bound, (label, rate, bound)
        rates.append(f"{label}={rate:.4f}")
    announce(4, "local activity error rate",
             f"T={trials} per class, errors {' '.join(rates)} <= {bound:.4f}")


def test_criterion_5_schedule_recursion_bound():
    checked = 0
    for gamma in (Fraction(1, 20), Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)):
        for delta in (Fraction(1, 100), Fraction(1, 10)):
            for ell in range(1, 7):
                sched = sample_schedule(gamma, delta, ell)
                assert sched.satisfies_recursion_bound(), (gamma, delta, ell)
                checked += 1
    announce(5, "sample schedule floor",
             f"{checked} schedules hold the exact per-depth budget bound")


def _uniformity_job(args):
    name, graph, seed = args
    rng = random.Random(seed)
    session = QuerySession(graph)
    target = 100_000
    counts = Counter()
    draws = 0
    failures = 0
    successes = 0
    while successes < target:
        draws += 1
        edge = sample_edge_almost_uniform(session, rng, graph.n, Fraction(1, 10),
                                          Fraction(1, 20), graph.m)
        if edge is None:
            failures += 1
            continue
        u, v = edge
        counts[(min(u, v), max(u, v))] += 1
        successes += 1
    return name, graph.m, counts, draws, failures


def _two_cliques():
    edges = [(i, j) for i in range(40) for j in range(i + 1, 40)]
    edges += [(40 + i, 40 + j) for i in range(25) for j in range(i + 1, 25)]
    return load_graph(edges, 65)


def test_criterion_6_edge_sampler_uniformity():
    from scipy.stats import chisquare

    fixtures = [
        ("K30", complete_graph(30)),
        ("K60", complete_graph(60)),
        ("star50", star(50)),
        ("star4", star(4)),
        ("path200", path_graph(200)),
        ("cycle100", cycle_graph(100)),
        ("bipartite", load_graph([(i, 20 + j) for i in range(20) for j in range(30)], 50)),
        ("gnp150", gnp(150, 0.3, seed=61)),
        ("two-cliques", _two_cliques()),
        ("gnp200-dense", gnp(200, 0.5, seed=62)),
    ]
    assert len(fixtures) == 10
    assert all(g.m <= 10_000 for _, g in fixtures)
    results = pool_map(_uniformity_job, [(name, g, 6000 + i)
                                         for i, (name, g) in enumerate(fixtures)])
    details = []
    for name, m, counts, draws, failures in results:
        successes = draws - failures
        assert failures / draws <= 0.05, (name, failures, draws)
        p_lo, p_hi = 0.9 / m, 1.1 / m
        slack = 6 * math.sqrt((1 / m) * (1 - 1 / m) / successes)
        graph = dict(fixtures)[name]
        observed = []
        for edge in graph.edges():
            freq = counts[edge] / successes
            assert p_lo - slack <= freq <= p_hi + slack, (name, edge, freq)
            observed.append(counts[edge])
        stat, p_value = chisquare(observed)
        assert p_value > 0.01, (name, p_value)
        details.append(f"{name}:p={p_value:.3f}")
    announce(6, "edge sampler uniformity", "; ".join(details))


def test_criterion_7_edge_count_bracketing():
    delta = Fraction(1, 10)
    fixtures = [
        gen_matching_bipartite(1200, 1200, 2, seed=71),
        gen_planted_clique(1500, 1000, 2, seed=72, clique=45),
        gen_preferential_attachment(1200, 3, seed=73),
        gen_erdos_renyi(900, 0.004, seed=74),
        gen_forest(800, seed=75),
    ]
    rates = []
    for k, graph in enumerate(fixtures):
        reports = run_trials(graph, "estimate-m", {"delta": delta}, 200,
                             seed=7000 + 100 * k, workers=WORKERS, timing=False)
        rate = sum(1 for r in reports if r.verdict == "OK") / len(reports)
        assert rate >= 1 - float(delta) - 0.05, (k, rate)
        rates.append(f"{rate:.3f}")
    announce(7, "edge count bracketing",
             f"in-range rates {', '.join(rates)} over 200 trials each (>= 0.85)")


def _high_edge_trial(args):
    graph, alpha, seed = args
    session = QuerySession(graph)
    return estimate_high_edges(session, random.Random(seed), graph.n, alpha,
                               EPS20, Fraction(1, 10), graph.m)


def _hubs_and_blocks():
    """20 high hubs (41 pendant leaves each) pairwise adjacent, plus three
    K_41 low blocks: exactly C(20,2)=190 high edges out of m=3470 <= 2*eps*m."""
    edges = []
    for i in range(20):
        for j in range(i + 1, 20):
            edges.append((i, j))
    nxt = 20
    for i in range(20):
        for _ in range(41):
            edges.append((i, nxt))
            nxt += 1
    for _ in range(3):
        base = nxt
        for i in range(41):
            for j in range(i + 1, 41):
                edges.append((base + i, base + j))
        nxt += 41
    return load_graph(edges, nxt)


def _clique_with_blocks():
    """K_46 (all high at alpha=1) plus four K_30 low blocks: 1035 high edges
    out of m=2775 > 4*eps*m."""
    edges = [(i, j) for i in range(46) for j in range(i + 1, 46)]
    nxt = 46
    for _ in range(4):
        base = nxt
        for i in range(30):
            for j in range(i + 1, 30):
                edges.append((base + i, base + j))
        nxt += 30
    return load_graph(edges, nxt)


def test_criterion_8_high_edge_estimator():
    delta = Fraction(1, 10)
    trials = 200
    few_fixtures = [
        ("matching", gen_matching_bipartite(300, 300, 2, seed=81), 2),
        ("hubs", _hubs_and_blocks(), 1),
    ]
    many_fixtures = [
        ("K60", complete_graph(60), 1),
        ("clique+blocks", _clique_with_blocks(), 1),
    ]
    details = []
    for name, graph, alpha in few_fixtures:
        census = count_high_edges(graph, alpha, EPS20)
        assert census <= 2 * EPS20 * graph.m, (name, census)
        outs = pool_map(_high_edge_trial,
                        [(graph, alpha, 8000 + i) for i in range(trials)])
        rate = outs.count(FEW) / trials
        assert rate >= 1 - float(delta) - 0.05, (name, rate)
        details.append(f"{name}:FEW={rate:.3f}")
    for name, graph, alpha in many_fixtures:
        census = count_high_edges(graph, alpha, EPS20)
        assert census > 4 * EPS20 * graph.m, (name, census)
        outs = pool_map(_high_edge_trial,
                        [(graph, alpha, 9000 + i) for i in range(trials)])
        rate = outs.count(MANY) / trials
        assert rate >= 1 - float(delta) - 0.05, (name, rate)
        details.append(f"{name}:MANY={rate:.3f}")
    announce(8, "high edge estimator", "; ".join(details))


def test_criterion_9_end_to_end():
    trials = 100
    # close side: arboricity <= alpha by construction, certified anyway
    yes_graph = gen_matching_bipartite(800, 800, 2, seed=91)
    assert distance_to_arboricity(yes_graph, 2).deletions_needed == 0
    yes_cfg = TesterConfig(alpha=2, eps=EPS20)
    yes_reports = run_trials(yes_graph, "test", {"config": yes_cfg}, trials,
                             seed=9100, workers=WORKERS, timing=False)
    yes_rate = sum(1 for r in yes_reports if r.verdict == "YES") / trials

    # far side: certified more than 20*eps-far from arboricity 3*alpha
    no_eps = Fraction(1, 25)
    no_graph = gen_planted_clique(600, 200, 1, seed=92, clique=64)
    report = distance_to_arboricity(no_graph, 3)
    assert report.eps_exact > 20 * no_eps, report
    no_cfg = TesterConfig(alpha=1, eps=no_eps)
    no_reports = run_trials(no_graph, "test", {"config": no_cfg}, trials,
                            seed=9200, workers=WORKERS, timing=False)
    no_rate = sum(1 for r in no_reports if r.verdict == "NO") / trials

    assert yes_rate >= 0.6, yes_rate
    assert no_rate >= 0.6, no_rate
    announce(9, "end-to-end tester",
             f"YES rate {yes_rate:.2f} on close fixture, NO rate {no_rate:.2f} "
             f"on certified 20*eps-far fixture (beta={float(report.eps_exact):.3f})")


def test_criterion_10_query_scaling():
    sizes = [2 ** k for k in range(10, 17)]
    standard = run_sweep(sizes, alpha=2, eps=EPS20, trials=3, seed=1001,
                         workers=WORKERS)
    slope_std, _ = fit_power_law(standard)
    c_std = fitted_envelope_constant(standard)
    assert slope_std <= 1.0, slope_std

    known = run_sweep(sizes, alpha=2, eps=EPS20, trials=3, seed=1002,
                      variant="known_m", workers=WORKERS)
    slope_km, _ = fit_power_law(known)
    assert slope_km <= 0.5, slope_km
    announce(10, "query scaling",
             f"standard slope {slope_std:.2f} (<= 1.0, envelope c={c_std:.1f}); "
             f"known-m slope {slope_km:.2f} (<= 0.5; n*alpha/m is flat here)")


def test_criterion_11_oracle_cross_validation():
    import networkx as nx

    checked = 0
    for atlas_graph in nx.graph_atlas_g():
        n = atlas_graph.number_of_nodes()
        if n < 2 or atlas_graph.number_of_edges() == 0:
            continue
        if not nx.is_connected(atlas_graph):
            continue
        g = load_graph(list(atlas_graph.edges()), n)
        assert exact_arboricity(g) == brute_force_arboricity_small(g), atlas_graph
        checked += 1
    assert checked >= 850  # all connected graphs on up to 7 vertices

    rng = random.Random(110)
    randoms = 0
    while randoms < 200:
        n = rng.randint(2, 16)
        p = rng.uniform(0.1, 0.9)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < p]
        g = load_graph(edges, n)
        assert exact_arboricity(g) == brute_force_arboricity_small(g)
        randoms += 1
    announce(11, "oracle cross-validation",
             f"{checked} atlas graphs + {randoms} random graphs agree")


def test_criterion_12_pair_correspondence(close_pool, far_pool):
    checked = 0
    for graph, alpha, eps, _ in close_pool + far_pool:
        ell = peel_iterations(eps)
        for gamma in (Fraction(0), 2 * eps):
            trace = peel(graph, alpha, gamma, ell)
            pairs = census_low_edge_pairs(graph, trace, alpha, eps)
            edges = count_active_low_edges(graph, trace, alpha, eps)
            assert pairs == edges, (alpha, eps, gamma)
            checked += 1
    announce(12, "pair correspondence census",
             f"{checked} exhaustive censuses match the oriented low edge counts")
