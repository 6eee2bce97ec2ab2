"""The per-iteration pipeline, single runs, and offline replay."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from feedgame.agent import Agent
from feedgame.closure import ClosureCode, DynamicsNetwork, EmptyDynamics, closure_code
from feedgame.gridworld import Actuation, EffectiveDisplacement, World
from feedgame.harness.config import RunConfig
from feedgame.metrics import (
    RunMetrics,
    arc_status_histogram,
    clustering_coefficient,
    facts_timeline,
    motivation_subnets,
)
from feedgame.representation import Event, MotivationLedger, RepresentationNetwork


class ReplayMismatch(RuntimeError):
    pass


class IterationRecord(NamedTuple):
    iteration: int
    actuation: Actuation
    effective: EffectiveDisplacement
    chose_undo: bool
    sensing: int
    motivation: int
    code: ClosureCode
    focus: float
    game_completed: bool
    events: tuple[Event, ...]


@dataclass
class RunLog:
    config: RunConfig
    initial_sensing: int
    records: list[IterationRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)


class Pipeline:
    """Representation and closure-dynamics bookkeeping, fed one iteration at a time.

    Both live runs and replays go through this class, which is what makes
    offline recomputation identical to the in-process values.
    """

    def __init__(self, config: RunConfig, initial_sensing: int):
        self.config = config
        self.net = RepresentationNetwork(config.thresholds)
        self.ledger = MotivationLedger()
        self.dynamics = DynamicsNetwork()
        self.events: list[Event] = []
        self.clustering_timeline: list[tuple[int, float]] = []
        self.prev_sensing = initial_sensing
        self.code: ClosureCode | None = None
        self.iteration = 0

    def feed(self, sensing: int, motivation: int, effective: EffectiveDisplacement) -> tuple[ClosureCode, list[Event]]:
        t = self.iteration + 1
        net = self.net
        self.ledger.record(sensing, motivation)
        events = []
        if t % net.thresholds.extraction_period == 0:
            events.extend(net.extract_affective(self.ledger, t))
            if net.thresholds.codifiable_review == "periodic":
                events.extend(net.review_arcs(t))
        events.extend(net.incorporate(self.prev_sensing, sensing, effective, t))
        code = closure_code(net, self.prev_sensing, sensing)
        # the first iteration has no predecessor code and is not scored
        if self.code is not None:
            self.dynamics.record_step(self.code, code)
        self.events.extend(events)
        if t % self.config.snapshot_every == 0:
            self.clustering_timeline.append((t, clustering_coefficient(net)))
        self.prev_sensing = sensing
        self.code = code
        self.iteration = t
        return code, events

    def metrics(self) -> RunMetrics:
        net = self.net
        n = self.iteration
        coef = clustering_coefficient(net)
        timeline = list(self.clustering_timeline)
        if not timeline or timeline[-1][0] != n:
            timeline.append((n, coef))
        m = RunMetrics(
            iterations=n,
            node_count=len(net.nodes),
            arc_count=len(net.arcs),
            fact_count=net.fact_count,
            arc_histogram=arc_status_histogram(net),
            clustering=coef,
            clustering_timeline=timeline,
            facts_timeline=facts_timeline(self.events, n, self.config.timeline_every),
            subnets=[(s.root, s.size, s.clustering) for s in motivation_subnets(net)],
        )
        dyn = self.dynamics
        if dyn.total:
            m.loop_fraction = dyn.loop_fraction()
            m.transition_fraction = dyn.transition_fraction()
            m.loop_table, m.transition_table = dyn.relative_frequencies()
            try:
                m.att = dyn.average_time_per_transition()
            except EmptyDynamics:
                m.att = None
        return m


@dataclass
class RunResult:
    log: RunLog
    pipeline: Pipeline
    metrics: RunMetrics

    @property
    def net(self) -> RepresentationNetwork:
        return self.pipeline.net


def run(config: RunConfig) -> RunResult:
    """Play the feed game for ``config.iterations`` steps."""
    world = World(config.seed, config.mouth_position, config.geometry)
    agent = Agent.seeded(config.seed)
    policy = config.policy
    initial = world.sense()
    pipe = Pipeline(config, initial)
    log = RunLog(config, initial)
    records = log.records
    for t in range(1, config.iterations + 1):
        focus = policy.focus_for(pipe.code)
        act, undo = agent.select_actuation(focus)
        eff, completed = world.step(act)
        agent.observe(eff)
        sensing = world.sense()
        motivation = world.motivation()
        code, events = pipe.feed(sensing, motivation, eff)
        records.append(IterationRecord(t, act, eff, undo, sensing, motivation, code, focus, completed, tuple(events)))
    return RunResult(log, pipe, pipe.metrics())


def replay(log: RunLog, check: bool = True) -> Pipeline:
    """Rebuild the network and dynamics from a log.

    With ``check``, every logged closure code and event list must agree with
    the recomputation.
    """
    pipe = Pipeline(log.config, log.initial_sensing)
    for rec in log.records:
        code, events = pipe.feed(rec.sensing, rec.motivation, rec.effective)
        if check and (code != rec.code or tuple(events) != rec.events):
            raise ReplayMismatch(
                f"iteration {rec.iteration}: log says code {rec.code} with {len(rec.events)} events, "
                f"replay gives {code} with {len(events)} events"
            )
    return pipe
