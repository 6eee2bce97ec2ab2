"""Structural read-outs of a representation network.

These look at the network from outside: which closure class each arc is in,
how many facts exist over time, and how clustered the network is.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from feedgame.representation import Event, RepresentationNetwork


def arc_class(net: RepresentationNetwork, source: int, target: int) -> str:
    arc = net.arcs[(source, target)]
    return f"{int(net.nodes[source].status)}{int(net.nodes[target].status)}{int(arc.status)}"


def arc_status_histogram(net: RepresentationNetwork) -> dict[str, int]:
    """Count of arcs per (source status, target status, arc status) class."""
    hist = Counter(arc_class(net, s, t) for (s, t) in net.arcs)
    return dict(sorted(hist.items()))


def undirected_neighbours(nodes: Iterable[int], arcs: Iterable[tuple[int, int]]) -> dict[int, set[int]]:
    """Simple undirected projection: self-loops dropped, antiparallel arcs merged."""
    adj: dict[int, set[int]] = {n: set() for n in nodes}
    for s, t in arcs:
        if s == t:
            continue
        adj[s].add(t)
        adj[t].add(s)
    return adj


def clustering_from_adjacency(adj: Mapping[int, set[int]]) -> float:
    """Mean local clustering coefficient; nodes of degree < 2 count as 0."""
    if not adj:
        return 0.0
    total = 0.0
    for v, nbrs in adj.items():
        k = len(nbrs)
        if k < 2:
            continue
        links = sum(len(adj[u] & nbrs) for u in nbrs) // 2
        total += links / (k * (k - 1) / 2)
    return total / len(adj)


def clustering_coefficient(net: RepresentationNetwork) -> float:
    return clustering_from_adjacency(undirected_neighbours(range(len(net.nodes)), net.arcs))


def facts_timeline(events: Iterable[Event], iterations: int, every: int = 1) -> list[tuple[int, int]]:
    """Cumulative fact count sampled at ``every, 2*every, ...`` and at ``iterations``."""
    new_facts = Counter(e.iteration for e in events if e.kind == "fact")
    series = []
    count = 0
    for t in range(1, iterations + 1):
        count += new_facts.get(t, 0)
        if t % every == 0 or t == iterations:
            series.append((t, count))
    return series


@dataclass
class Subnet:
    root: int
    motivations: list[int]
    nodes: list[int]
    clustering: float

    @property
    def size(self) -> int:
        return len(self.nodes)


def _reach(start: int, succ: Mapping[int, list[int]]) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        for nxt in succ.get(stack.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def motivation_subnets(net: RepresentationNetwork) -> list[Subnet]:
    """For each motivation-derived node, the subgraph reaching it or reachable from it."""
    fwd: dict[int, list[int]] = {}
    bwd: dict[int, list[int]] = {}
    for s, t in net.arcs:
        fwd.setdefault(s, []).append(t)
        bwd.setdefault(t, []).append(s)
    subnets = []
    for node in net.nodes:
        if not node.is_mask:
            continue
        members = _reach(node.id, fwd) | _reach(node.id, bwd)
        arcs = [(s, t) for (s, t) in net.arcs if s in members and t in members]
        coef = clustering_from_adjacency(undirected_neighbours(members, arcs))
        subnets.append(Subnet(node.id, list(node.motivations), sorted(members), coef))
    return subnets


@dataclass
class RunMetrics:
    iterations: int
    node_count: int
    arc_count: int
    fact_count: int
    arc_histogram: dict[str, int]
    clustering: float
    clustering_timeline: list[tuple[int, float]]
    facts_timeline: list[tuple[int, int]]
    subnets: list[tuple[int, int, float]]
    # None when the dynamics are unavailable (too few iterations, or a bare snapshot)
    loop_fraction: float | None = None
    transition_fraction: float | None = None
    att: float | None = None
    loop_table: dict[str, float] = field(default_factory=dict)
    transition_table: dict[str, float] = field(default_factory=dict)

    @property
    def nontrivial_subnets(self) -> int:
        return sum(1 for _, size, _ in self.subnets if size > 1)

    def scalars(self) -> dict[str, float]:
        """Flat numeric view used for cross-run aggregation."""
        out: dict[str, float] = {
            "node_count": self.node_count,
            "arc_count": self.arc_count,
            "fact_count": self.fact_count,
            "clustering": self.clustering,
            "nontrivial_subnets": self.nontrivial_subnets,
        }
        for name in ("loop_fraction", "transition_fraction", "att"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        for k, v in self.arc_histogram.items():
            out[f"arcs.{k}"] = v
        for k, v in self.loop_table.items():
            out[f"loops.{k}"] = v
        for k, v in self.transition_table.items():
            out[f"transitions.{k}"] = v
        return out

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "node_count": self.node_count,
            "arc_count": self.arc_count,
            "fact_count": self.fact_count,
            "arc_histogram": self.arc_histogram,
            "clustering": self.clustering,
            "clustering_timeline": [list(p) for p in self.clustering_timeline],
            "facts_timeline": [list(p) for p in self.facts_timeline],
            "subnets": [list(s) for s in self.subnets],
            "loop_fraction": self.loop_fraction,
            "transition_fraction": self.transition_fraction,
            "att": self.att,
            "loop_table": self.loop_table,
            "transition_table": self.transition_table,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunMetrics":
        return cls(
            iterations=d["iterations"],
            node_count=d["node_count"],
            arc_count=d["arc_count"],
            fact_count=d["fact_count"],
            arc_histogram=dict(d["arc_histogram"]),
            clustering=d["clustering"],
            clustering_timeline=[tuple(p) for p in d["clustering_timeline"]],
            facts_timeline=[tuple(p) for p in d["facts_timeline"]],
            subnets=[tuple(s) for s in d["subnets"]],
            loop_fraction=d["loop_fraction"],
            transition_fraction=d["transition_fraction"],
            att=d["att"],
            loop_table=dict(d["loop_table"]),
            transition_table=dict(d["transition_table"]),
        )
