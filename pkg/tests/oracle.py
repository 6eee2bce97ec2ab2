"""Independent reference implementations used only by the tests.

Nothing here imports the package's representation, closure or metrics code.
Sensing vectors are handled as frozensets of bit positions, probabilities as
Fractions, and lookups are plain scans.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

ACTUATORS = ("ex", "ey", "hx", "hy")


def bitset(value: int) -> frozenset[int]:
    return frozenset(i for i in range(value.bit_length()) if value >> i & 1)


class ReferenceInterpreter:
    """Straight-line reading of the closure-mechanism rules.

    ``review`` is ``"periodic"`` (codifiable test every ``period`` steps) or
    ``"traversal"`` (on every crossing).
    """

    def __init__(self, node_hits=8, arc_frequency=8, probability=Fraction(1, 2), period=500,
                 review="periodic", include_zero=False):
        self.node_hits = node_hits
        self.arc_frequency = arc_frequency
        self.probability = Fraction(probability)
        self.period = period
        self.review = review
        self.include_zero = include_zero
        self.nodes = []  # dicts
        self.arcs = []  # dicts, creation order
        self.motivations = {}  # motivation -> {"count", "and", "done"}
        self.exact_index = {}
        self.codes = []
        self.promotions = []  # (iteration, kind, subject)

    # lookups
    def find(self, s: frozenset[int]):
        if s in self.exact_index:
            return self.exact_index[s]
        best = None
        for node in self.nodes:
            if node["kind"] != "mask" or not node["bits"] <= s:
                continue
            if best is None or len(node["bits"]) > len(best["bits"]):
                best = node
        return None if best is None else best["id"]

    def arc(self, a, b):
        for arc in self.arcs:
            if arc["source"] == a and arc["target"] == b:
                return arc
        return None

    def status_digit(self, nid):
        if nid is None:
            return 0
        return 1 if self.nodes[nid]["status"] == "potential" else 2

    def arc_digit(self, arc):
        if arc is None:
            return 0
        return {"not_frequent": 1, "frequent": 2, "codifiable": 3}[arc["status"]]

    # rules
    def new_node(self, bits, kind, status, t):
        node = {"id": len(self.nodes), "bits": bits, "kind": kind, "status": status, "hits": 0, "created": t}
        self.nodes.append(node)
        if kind == "exact":
            self.exact_index[bits] = node["id"]
        return node["id"]

    def is_codifiable(self, arc):
        return any(Fraction(n, arc["frequency"]) > self.probability for n in arc["counts"].values())

    def step(self, t, prev, curr, motivation, effective):
        # motivation records
        rec = self.motivations.setdefault(motivation, {"count": 0, "and": None, "done": False})
        rec["count"] += 1
        rec["and"] = curr if rec["and"] is None else rec["and"] & curr

        if t % self.period == 0:
            for m in sorted(self.motivations):
                r = self.motivations[m]
                if r["done"] or (m == 0 and not self.include_zero) or not r["and"]:
                    continue
                r["done"] = True
                if not any(n["kind"] == "mask" and n["bits"] == r["and"] for n in self.nodes):
                    self.new_node(r["and"], "mask", "affective", t)
            if self.review == "periodic":
                for arc in self.arcs:
                    if arc["status"] == "frequent" and self.is_codifiable(arc):
                        arc["status"] = "codifiable"
                        self.promotions.append((t, "arc-codifiable", (arc["source"], arc["target"])))

        c = self.find(curr)
        if c is not None:
            p = self.find(prev)
            if p is None:
                p = self.new_node(prev, "exact", "potential", t)
            arc = self.arc(p, c)
            if arc is None:
                arc = {"source": p, "target": c, "frequency": 0, "status": "not_frequent",
                       "counts": {(a, v): 0 for a in ACTUATORS for v in (-1, 0, 1)}}
                self.arcs.append(arc)
            arc["frequency"] += 1
            for a, v in zip(ACTUATORS, effective):
                arc["counts"][(a, v)] += 1
            for nid in {p, c}:
                self.nodes[nid]["hits"] += 1
                if self.nodes[nid]["status"] == "potential" and self.nodes[nid]["hits"] > self.node_hits:
                    self.nodes[nid]["status"] = "affective"
                    self.promotions.append((t, "node-affective", nid))
            if arc["status"] == "not_frequent" and arc["frequency"] > self.arc_frequency:
                arc["status"] = "frequent"
                self.promotions.append((t, "arc-frequent", (p, c)))
            if self.review == "traversal" and arc["status"] == "frequent" and self.is_codifiable(arc):
                arc["status"] = "codifiable"
                self.promotions.append((t, "arc-codifiable", (p, c)))

        p, c = self.find(prev), self.find(curr)
        arc = self.arc(p, c) if p is not None and c is not None else None
        self.codes.append(f"{self.status_digit(p)}{self.status_digit(c)}{self.arc_digit(arc)}")

    def run(self, initial: int, steps):
        """``steps`` yields ``(sensing_int, motivation_int, effective_tuple)`` per iteration."""
        prev = bitset(initial)
        for t, (s, m, eff) in enumerate(steps, 1):
            curr = bitset(s)
            self.step(t, prev, curr, m, eff)
            prev = curr
        return self

    def facts(self):
        return sum(
            1 for a in self.arcs
            if a["status"] == "codifiable"
            and self.nodes[a["source"]]["status"] == "affective"
            and self.nodes[a["target"]]["status"] == "affective"
        )

    def summary(self):
        """Comparable view: nodes and arcs with patterns, statuses and counters."""
        nodes = [(n["kind"], tuple(sorted(n["bits"])), n["status"], n["hits"], n["created"]) for n in self.nodes]
        arcs = sorted(
            (a["source"], a["target"], a["frequency"], a["status"],
             tuple(a["counts"][(x, v)] for x in ACTUATORS for v in (-1, 0, 1)))
            for a in self.arcs
        )
        return nodes, arcs


def reference_for(result) -> ReferenceInterpreter:
    """Run the interpreter over the logged sensing/motivation/effective stream of a run."""
    cfg = result.log.config
    ref = ReferenceInterpreter(
        cfg.node_hits, cfg.arc_frequency, Fraction(str(cfg.probability)), cfg.extraction_period,
        cfg.codifiable_review, cfg.include_zero_motivation,
    )
    steps = ((r.sensing, r.motivation, tuple(r.effective)) for r in result.log.records)
    return ref.run(result.log.initial_sensing, steps)


def network_summary(net):
    """The package network in the interpreter's ``summary()`` shape, read attribute by attribute."""
    nodes = [
        ("mask" if n.is_mask else "exact", tuple(sorted(bitset(n.bits))), n.status.name.lower(), n.hit_count,
         n.created_at)
        for n in net.nodes
    ]
    arcs = sorted((a.source, a.target, a.frequency, a.status.name.lower(), tuple(a.counts)) for a in net.arcs.values())
    return nodes, arcs


def brute_force_clustering(n_nodes: int, directed_edges) -> float:
    """Average local clustering by enumerating every neighbour pair of every node."""
    adj = [[False] * n_nodes for _ in range(n_nodes)]
    for a, b in directed_edges:
        if a != b:
            adj[a][b] = adj[b][a] = True
    if n_nodes == 0:
        return 0.0
    total = Fraction(0)
    for v in range(n_nodes):
        nbrs = [u for u in range(n_nodes) if adj[v][u]]
        k = len(nbrs)
        if k < 2:
            continue
        tri = sum(1 for a, b in itertools.combinations(nbrs, 2) if adj[a][b])
        total += Fraction(tri, k * (k - 1) // 2)
    return float(total / n_nodes)


def expected_sensing(eye, hand, mouth, obj, world_size=7, eye_size=5) -> int:
    """Enumerate eye cells one by one and set the colour bits of whatever sits there."""
    r = eye_size // 2
    bits = 0
    for c in range(eye_size * eye_size):
        wx = eye[0] - r + c % eye_size
        wy = eye[1] - r + c // eye_size
        if not (0 <= wx < world_size and 0 <= wy < world_size):
            continue
        if (wx, wy) == tuple(obj):
            bits |= 1 << (3 * c)
        if (wx, wy) == tuple(mouth):
            bits |= 1 << (3 * c + 1)
        if (wx, wy) == tuple(hand):
            bits |= 1 << (3 * c + 2)
    n = 3 * eye_size * eye_size
    if tuple(hand) == tuple(obj):
        bits |= 1 << n
    if tuple(mouth) == tuple(obj):
        bits |= 1 << (n + 1)
    return bits
