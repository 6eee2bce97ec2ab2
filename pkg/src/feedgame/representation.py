"""The closure mechanism: a directed network of affective states and actuation arcs.

Nodes hold sensing patterns, arcs hold actuation statistics. The network
grows in two ways: affective states are extracted from the sensing bits that
always accompany a biological motivation, and potential affective states are
added for the sensing that preceded a recognised state. Arcs climb a
one-way ladder: not frequent, frequent, codifiable. A codifiable arc between
two affective nodes is a fact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import NamedTuple

from feedgame.gridworld import EffectiveDisplacement


class NodeStatus(IntEnum):
    POTENTIAL = 1
    AFFECTIVE = 2


class ArcStatus(IntEnum):
    NOT_FREQUENT = 1
    FREQUENT = 2
    CODIFIABLE = 3


class UndefinedDistribution(ValueError):
    pass


@dataclass(frozen=True)
class Thresholds:
    node_hits: int = 8
    arc_frequency: int = 8
    probability: float = 0.5
    extraction_period: int = 500
    include_zero_motivation: bool = False
    # "periodic": codifiability is judged on the accumulated history every
    # extraction_period iterations; "traversal": on every crossing.
    codifiable_review: str = "periodic"

    def __post_init__(self):
        if self.codifiable_review not in ("periodic", "traversal"):
            raise ValueError(f"codifiable_review must be 'periodic' or 'traversal', got {self.codifiable_review!r}")
        if self.node_hits <= 0 or self.arc_frequency <= 0 or self.extraction_period <= 0:
            raise ValueError("thresholds must be positive")
        if not 0.0 < self.probability < 1.0:
            raise ValueError(f"probability threshold must be in (0, 1), got {self.probability}")


@dataclass(slots=True)
class Node:
    id: int
    bits: int
    is_mask: bool
    status: NodeStatus
    hit_count: int = 0
    created_at: int = 0
    motivations: list[int] = field(default_factory=list)


@dataclass(slots=True)
class Arc:
    source: int
    target: int
    frequency: int = 0
    # counts[3 * actuator + value + 1], actuators ordered ex, ey, hx, hy
    counts: list[int] = field(default_factory=lambda: [0] * 12)
    status: ArcStatus = ArcStatus.NOT_FREQUENT
    created_at: int = 0

    def record(self, act: EffectiveDisplacement) -> None:
        self.frequency += 1
        c = self.counts
        c[act[0] + 1] += 1
        c[act[1] + 4] += 1
        c[act[2] + 7] += 1
        c[act[3] + 10] += 1


class Event(NamedTuple):
    """A structural change, tagged with the rule that produced it.

    ``subject`` is a node id or a ``(source, target)`` pair.
    """

    iteration: int
    kind: str
    rule: str
    subject: int | tuple[int, int]


# kind -> rule fired
NODE_FROM_MOTIVATION = ("node", "mechanism-1")
NODE_POTENTIAL = ("node", "mechanism-2")
ARC_WITH_POTENTIAL = ("arc", "arc-rule-1")
ARC_BETWEEN_NODES = ("arc", "arc-rule-2")
NODE_AFFECTIVE = ("node-affective", "promotion-hits")
ARC_FREQUENT = ("arc-frequent", "promotion-frequency")
ARC_CODIFIABLE = ("arc-codifiable", "promotion-probability")
FACT = ("fact", "fact-affective-endpoints")


def arc_distribution(arc: Arc) -> list[float]:
    """The 12 actuator probabilities ``p(ex=-1), p(ex=0), ..., p(hy=1)``."""
    if arc.frequency == 0:
        raise UndefinedDistribution(f"arc {arc.source}->{arc.target} has never been crossed")
    return [c / arc.frequency for c in arc.counts]


@dataclass(slots=True)
class MotivationRecord:
    count: int
    mask: int
    extracted: bool = False


class MotivationLedger:
    """Per-motivation occurrence count and running AND of co-occurring sensing."""

    def __init__(self):
        self.records: dict[int, MotivationRecord] = {}

    def record(self, sensing: int, motivation: int) -> None:
        rec = self.records.get(motivation)
        if rec is None:
            self.records[motivation] = MotivationRecord(1, sensing)
        else:
            rec.count += 1
            rec.mask &= sensing

    def __len__(self) -> int:
        return len(self.records)


class RepresentationNetwork:
    def __init__(self, thresholds: Thresholds = Thresholds()):
        self.thresholds = thresholds
        self.nodes: list[Node] = []
        self.arcs: dict[tuple[int, int], Arc] = {}
        self.out_arcs: list[list[Arc]] = []
        self.in_arcs: list[list[Arc]] = []
        self.fact_count = 0
        self._exact: dict[int, int] = {}
        # mask nodes by descending popcount, then ascending id
        self._masks: list[tuple[int, int]] = []

    # -- queries -----------------------------------------------------------

    def match(self, sensing: int) -> int | None:
        """Node corresponding to ``sensing``.

        An exact node wins; otherwise the matching mask with the most bits,
        lowest id on ties.
        """
        nid = self._exact.get(sensing)
        if nid is not None:
            return nid
        for mask, mid in self._masks:
            if sensing & mask == mask:
                return mid
        return None

    def is_fact(self, arc: Arc) -> bool:
        nodes = self.nodes
        return (
            arc.status is ArcStatus.CODIFIABLE
            and nodes[arc.source].status is NodeStatus.AFFECTIVE
            and nodes[arc.target].status is NodeStatus.AFFECTIVE
        )

    def facts(self) -> list[Arc]:
        return [a for a in self.arcs.values() if self.is_fact(a)]

    # -- growth ------------------------------------------------------------

    def _add_node(self, bits: int, is_mask: bool, status: NodeStatus, iteration: int) -> Node:
        node = Node(len(self.nodes), bits, is_mask, status, created_at=iteration)
        self.nodes.append(node)
        self.out_arcs.append([])
        self.in_arcs.append([])
        if is_mask:
            self._masks.append((bits, node.id))
            self._masks.sort(key=lambda m: (-m[0].bit_count(), m[1]))
        else:
            self._exact[bits] = node.id
        return node

    def _add_arc(self, source: int, target: int, iteration: int) -> Arc:
        arc = Arc(source, target, created_at=iteration)
        self.arcs[(source, target)] = arc
        self.out_arcs[source].append(arc)
        # self-loops are listed once, under out_arcs
        if target != source:
            self.in_arcs[target].append(arc)
        return arc

    def extract_affective(self, ledger: MotivationLedger, iteration: int) -> list[Event]:
        """Turn each pending motivation's mask into an affective node."""
        events = []
        by_mask = {n.bits: n for n in self.nodes if n.is_mask}
        for motivation in sorted(ledger.records):
            rec = ledger.records[motivation]
            if rec.extracted or rec.count < 1:
                continue
            if motivation == 0 and not self.thresholds.include_zero_motivation:
                continue
            if rec.mask == 0:
                continue
            rec.extracted = True
            node = by_mask.get(rec.mask)
            if node is None:
                node = self._add_node(rec.mask, True, NodeStatus.AFFECTIVE, iteration)
                by_mask[rec.mask] = node
                events.append(Event(iteration, *NODE_FROM_MOTIVATION, node.id))
            node.motivations.append(motivation)
        return events

    def incorporate(
        self, prev_sensing: int, curr_sensing: int, act: EffectiveDisplacement, iteration: int
    ) -> list[Event]:
        """Apply the node and arc rules to one pair of consecutive sensing states."""
        c = self.match(curr_sensing)
        if c is None:
            return []
        events = []
        p = self.match(prev_sensing)
        if p is None:
            p = self._add_node(prev_sensing, False, NodeStatus.POTENTIAL, iteration).id
            events.append(Event(iteration, *NODE_POTENTIAL, p))
            arc = self._add_arc(p, c, iteration)
            events.append(Event(iteration, *ARC_WITH_POTENTIAL, (p, c)))
        else:
            arc = self.arcs.get((p, c))
            if arc is None:
                arc = self._add_arc(p, c, iteration)
                events.append(Event(iteration, *ARC_BETWEEN_NODES, (p, c)))
        arc.record(act)
        self.nodes[p].hit_count += 1
        if c != p:
            self.nodes[c].hit_count += 1
        events.extend(self.promote(arc, iteration))
        return events

    def promote(self, arc: Arc, iteration: int, review: bool = False) -> list[Event]:
        """Latch promotions for the endpoints of ``arc`` and for ``arc`` itself.

        The codifiable test runs here only when ``review`` is set or the
        thresholds ask for per-traversal review.
        """
        th = self.thresholds
        events = []
        for nid in (arc.source, arc.target) if arc.source != arc.target else (arc.source,):
            node = self.nodes[nid]
            if node.status is NodeStatus.POTENTIAL and node.hit_count > th.node_hits:
                node.status = NodeStatus.AFFECTIVE
                events.append(Event(iteration, *NODE_AFFECTIVE, nid))
                events.extend(self._new_facts_at(node, iteration))

        if arc.status is ArcStatus.NOT_FREQUENT and arc.frequency > th.arc_frequency:
            arc.status = ArcStatus.FREQUENT
            events.append(Event(iteration, *ARC_FREQUENT, (arc.source, arc.target)))
        if review or th.codifiable_review == "traversal":
            events.extend(self._review(arc, iteration))
        return events

    def review_arcs(self, iteration: int) -> list[Event]:
        """Judge every frequent arc for codifiability, in creation order."""
        events = []
        for arc in list(self.arcs.values()):
            events.extend(self._review(arc, iteration))
        return events

    def _review(self, arc: Arc, iteration: int) -> list[Event]:
        if arc.status is not ArcStatus.FREQUENT:
            return []
        limit = self.thresholds.probability * arc.frequency
        if not any(n > limit for n in arc.counts):
            return []
        arc.status = ArcStatus.CODIFIABLE
        events = [Event(iteration, *ARC_CODIFIABLE, (arc.source, arc.target))]
        if self.is_fact(arc):
            self.fact_count += 1
            events.append(Event(iteration, *FACT, (arc.source, arc.target)))
        return events

    def _new_facts_at(self, node: Node, iteration: int) -> list[Event]:
        events = []
        for arc in self.out_arcs[node.id] + self.in_arcs[node.id]:
            if arc.status is ArcStatus.CODIFIABLE and self.is_fact(arc):
                self.fact_count += 1
                events.append(Event(iteration, *FACT, (arc.source, arc.target)))
        return events

    # -- snapshots ---------------------------------------------------------

    def to_records(self) -> tuple[list[dict], list[dict]]:
        width = max((n.bits.bit_length() for n in self.nodes), default=1)
        hex_width = max(1, (width + 3) // 4)
        nodes = [
            {
                "id": n.id,
                "kind": "mask" if n.is_mask else "exact",
                "bits": f"{n.bits:0{hex_width}x}",
                "status": n.status.name.lower(),
                "hit_count": n.hit_count,
                "created_at": n.created_at,
                "motivations": list(n.motivations),
            }
            for n in self.nodes
        ]
        arcs = [
            {
                "source": a.source,
                "target": a.target,
                "frequency": a.frequency,
                "counts": list(a.counts),
                "status": a.status.name.lower(),
                "created_at": a.created_at,
            }
            for a in self.arcs.values()
        ]
        return nodes, arcs

    @classmethod
    def from_records(
        cls, nodes: list[dict], arcs: list[dict], thresholds: Thresholds = Thresholds()
    ) -> "RepresentationNetwork":
        net = cls(thresholds)
        for i, rec in enumerate(nodes):
            if rec["id"] != i:
                raise ValueError(f"node records must be ordered by id; record {i} has id {rec['id']}")
            node = net._add_node(
                int(rec["bits"], 16), rec["kind"] == "mask", NodeStatus[rec["status"].upper()], rec["created_at"]
            )
            node.hit_count = rec["hit_count"]
            node.motivations = list(rec.get("motivations", []))
        for rec in arcs:
            s, t = rec["source"], rec["target"]
            if not (0 <= s < len(net.nodes) and 0 <= t < len(net.nodes)):
                raise ValueError(f"arc {s}->{t} references an unknown node")
            arc = net._add_arc(s, t, rec["created_at"])
            arc.frequency = rec["frequency"]
            arc.counts = list(rec["counts"])
            if len(arc.counts) != 12:
                raise ValueError(f"arc {s}->{t} must carry 12 counts")
            arc.status = ArcStatus[rec["status"].upper()]
        net.fact_count = sum(1 for a in net.arcs.values() if net.is_fact(a))
        return net
