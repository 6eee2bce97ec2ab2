import random

import networkx as nx
import pytest

from feedgame.closure import ClosureCode
from feedgame.gridworld import Actuation
from feedgame.harness import RunConfig, run
from feedgame.metrics import (
    RunMetrics,
    arc_status_histogram,
    clustering_coefficient,
    clustering_from_adjacency,
    facts_timeline,
    motivation_subnets,
    undirected_neighbours,
)
from feedgame.representation import Event, MotivationLedger, RepresentationNetwork


def clustering_of(n, edges):
    return clustering_from_adjacency(undirected_neighbours(range(n), edges))


def test_triangle():
    assert clustering_of(3, [(0, 1), (1, 2), (2, 0)]) == 1.0


def test_star():
    assert clustering_of(4, [(0, 1), (0, 2), (0, 3)]) == 0.0


def test_empty_graph():
    assert clustering_of(0, []) == 0.0
    assert clustering_coefficient(RepresentationNetwork()) == 0.0


def test_self_loops_and_antiparallel_arcs_collapse():
    edges = [(0, 1), (1, 0), (1, 2), (2, 0), (0, 0), (2, 2)]
    assert clustering_of(3, edges) == 1.0


def random_graph(rng, n=20):
    p = rng.uniform(0.05, 0.6)
    return [(a, b) for a in range(n) for b in range(n) if rng.random() < p]


def test_random_graphs_against_networkx():
    rng = random.Random(7)
    for _ in range(20):
        edges = random_graph(rng)
        g = nx.Graph()
        g.add_nodes_from(range(20))
        g.add_edges_from((a, b) for a, b in edges if a != b)
        assert clustering_of(20, edges) == pytest.approx(nx.average_clustering(g), abs=1e-12)


def fact_network():
    net = RepresentationNetwork()
    ledger = MotivationLedger()
    ledger.record(1 << 36, 1)
    net.extract_affective(ledger, 500)
    for t in range(9):
        net.incorporate(0b1, 1 << 36, Actuation(1, 1, 1, 1), t + 1)
    net.review_arcs(500)
    return net


def test_histogram_empty():
    assert arc_status_histogram(RepresentationNetwork()) == {}


def test_histogram_single_fact():
    net = fact_network()
    assert arc_status_histogram(net) == {"223": 1}
    assert net.fact_count == 1


def test_facts_timeline_without_facts():
    assert facts_timeline([], 5) == [(t, 0) for t in range(1, 6)]


def test_facts_timeline_step():
    events = [Event(1000, "fact", "fact-affective-endpoints", (1, 0))]
    series = dict(facts_timeline(events, 2000))
    assert series[999] == 0 and series[1000] == 1 and series[2000] == 1


def test_facts_timeline_sampling_keeps_last_point():
    series = facts_timeline([], 250, every=100)
    assert [t for t, _ in series] == [100, 200, 250]


def test_subnets_without_masks():
    net = RepresentationNetwork()
    assert motivation_subnets(net) == []


def test_isolated_mask_subnet():
    net = RepresentationNetwork()
    ledger = MotivationLedger()
    ledger.record(0b1, 4)
    net.extract_affective(ledger, 500)
    (sub,) = motivation_subnets(net)
    assert sub.size == 1 and sub.motivations == [4] and sub.clustering == 0.0


def test_subnet_collects_both_directions():
    net = fact_network()
    (sub,) = motivation_subnets(net)
    assert sub.nodes == [0, 1]


@pytest.fixture(scope="module")
def default_run():
    return run(RunConfig(seed=3, iterations=15000, focus="var"))


def test_final_fact_timeline_equals_histogram(default_run):
    m = default_run.metrics
    assert m.facts_timeline[-1] == (15000, m.fact_count)
    assert m.arc_histogram.get("223", 0) == m.fact_count == len(default_run.net.facts())


def test_histogram_totals_arc_count(default_run):
    m = default_run.metrics
    assert sum(m.arc_histogram.values()) == m.arc_count


def test_histogram_classes_are_reachable_codes(default_run):
    for k in default_run.metrics.arc_histogram:
        code = ClosureCode.parse(k)
        assert code.prev > 0 and code.curr > 0 and code.arc > 0


def test_metrics_dict_round_trip(default_run):
    m = default_run.metrics
    assert RunMetrics.from_dict(m.to_dict()) == m


def test_scalars_flatten_tables(default_run):
    s = default_run.metrics.scalars()
    assert s["fact_count"] == default_run.metrics.fact_count
    assert any(k.startswith("loops.") for k in s)
    assert any(k.startswith("arcs.") for k in s)


def test_variable_focus_has_at_least_as_many_subnets(standard_sweep):
    var = standard_sweep.mean("var", "nontrivial_subnets")
    fixed = {p: standard_sweep.mean(p, "nontrivial_subnets") for p in ("0", "0.25", "0.5", "0.75")}
    assert all(var >= v for v in fixed.values()), f"var={var:.1f}, fixed={fixed}"
