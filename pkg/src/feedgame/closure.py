"""Closure codes and the probabilistic network of closure-code successions.

A closure code is the triple (previous node, current node, arc) with node
digits 0 (absent), 1 (potential), 2 (affective) and arc digits 0 (absent),
1 (not frequent), 2 (frequent), 3 (codifiable).
"""

from __future__ import annotations

from collections import Counter
from typing import TYPE_CHECKING, NamedTuple

if TYPE_CHECKING:
    from feedgame.representation import RepresentationNetwork


class EmptyDynamics(ValueError):
    pass


class ClosureCode(NamedTuple):
    prev: int
    curr: int
    arc: int

    @classmethod
    def parse(cls, text: "str | ClosureCode") -> "ClosureCode":
        if isinstance(text, ClosureCode):
            return text
        text = str(text).strip()
        if len(text) != 3 or not text.isdigit():
            raise ValueError(f"closure code must be three digits, got {text!r}")
        code = cls(int(text[0]), int(text[1]), int(text[2]))
        if not code.is_valid():
            raise ValueError(f"invalid closure code {text!r}")
        return code

    def is_valid(self) -> bool:
        return 0 <= self.prev <= 2 and 0 <= self.curr <= 2 and 0 <= self.arc <= 3

    def is_reachable(self) -> bool:
        """An arc digit above 0 needs both endpoints in the network."""
        return self.arc == 0 or (self.prev > 0 and self.curr > 0)

    def __str__(self) -> str:
        return f"{self.prev}{self.curr}{self.arc}"


ALL_CODES = tuple(ClosureCode(p, c, a) for p in range(3) for c in range(3) for a in range(4))
EMPTY_CODE = ClosureCode(0, 0, 0)


def closure_code(net: "RepresentationNetwork", prev_sensing: int, curr_sensing: int) -> ClosureCode:
    p = net.match(prev_sensing)
    c = net.match(curr_sensing)
    pd = 0 if p is None else int(net.nodes[p].status)
    cd = 0 if c is None else int(net.nodes[c].status)
    arc = net.arcs.get((p, c)) if p is not None and c is not None else None
    return ClosureCode(pd, cd, 0 if arc is None else int(arc.status))


def pair_label(a: ClosureCode, b: ClosureCode) -> str:
    return f"{a}-{b}"


class DynamicsNetwork:
    """Weighted directed graph over the 36 closure codes.

    Self-edges are loops (no structural change between consecutive
    iterations); every other edge is a transition.
    """

    def __init__(self):
        self.edges: Counter[tuple[ClosureCode, ClosureCode]] = Counter()
        self.loops = 0
        self.transitions = 0

    def record_step(self, prev_code: ClosureCode, curr_code: ClosureCode) -> bool:
        """Count one succession; returns True for a loop."""
        self.edges[(prev_code, curr_code)] += 1
        if prev_code == curr_code:
            self.loops += 1
            return True
        self.transitions += 1
        return False

    @property
    def total(self) -> int:
        return self.loops + self.transitions

    def relative_frequencies(self) -> tuple[dict[str, float], dict[str, float]]:
        """Loop and transition tables keyed by ``"abc-def"``, sorted by descending frequency."""
        total = self.total
        if total == 0:
            raise EmptyDynamics("no closure-code successions recorded")
        loops, transitions = {}, {}
        for (a, b), n in sorted(self.edges.items(), key=lambda kv: (-kv[1], str(kv[0][0]), str(kv[0][1]))):
            (loops if a == b else transitions)[pair_label(a, b)] = n / total
        return loops, transitions

    def loop_fraction(self) -> float:
        if self.total == 0:
            raise EmptyDynamics("no closure-code successions recorded")
        return self.loops / self.total

    def transition_fraction(self) -> float:
        if self.total == 0:
            raise EmptyDynamics("no closure-code successions recorded")
        return self.transitions / self.total

    def average_time_per_transition(self) -> float:
        if self.transitions == 0:
            raise EmptyDynamics("no transitions recorded")
        return self.total / self.transitions

    def rows(self) -> list[tuple[str, str, int, float]]:
        """Export rows ``(from_code, to_code, count, relative_frequency)``."""
        total = self.total
        return [
            (str(a), str(b), n, n / total)
            for (a, b), n in sorted(self.edges.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))
        ]
