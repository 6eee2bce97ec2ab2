"""The feed-game world: a square grid holding an eye, a hand, a mouth and one object.

Sensing vectors and motivation vectors are plain Python ints used as bit
sets. Bit ``i`` of the int is element ``i`` of the vector.

Sensing layout for an ``E x E`` eye: cell ``c`` (row-major, top-left first)
owns bits ``3c`` (R, object), ``3c + 1`` (G, mouth) and ``3c + 2`` (B, hand).
The two bits after the eye field are hand-touches-object and
mouth-touches-object. Motivation bits are ``[fovea R, fovea G, fovea B,
hand, mouth]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple

RED, GREEN, BLUE = 0, 1, 2
MOTIVATION_BITS = 5


class Position(NamedTuple):
    x: int
    y: int


class Actuation(NamedTuple):
    """Displacement command (or realised displacement) for eye and hand."""

    ex: int
    ey: int
    hx: int
    hy: int

    def negated(self) -> "Actuation":
        return Actuation(-self.ex, -self.ey, -self.hx, -self.hy)


# The realised, post-clamp motion has the same shape as a command.
EffectiveDisplacement = Actuation

ACTUATOR_VALUES = (-1, 0, 1)
ALL_ACTUATIONS = tuple(
    Actuation(ex, ey, hx, hy)
    for ex in ACTUATOR_VALUES
    for ey in ACTUATOR_VALUES
    for hx in ACTUATOR_VALUES
    for hy in ACTUATOR_VALUES
)


@dataclass(frozen=True)
class Geometry:
    world_size: int = 7
    eye_size: int = 5

    def __post_init__(self):
        if self.world_size < 1:
            raise ValueError(f"world_size must be positive, got {self.world_size}")
        if self.eye_size < 1 or self.eye_size % 2 == 0:
            raise ValueError(f"eye_size must be odd and positive, got {self.eye_size}")
        if self.eye_size > self.world_size:
            raise ValueError("eye must fit within the world")

    @property
    def eye_cells(self) -> int:
        return self.eye_size * self.eye_size

    @property
    def fovea_cell(self) -> int:
        return self.eye_cells // 2

    @property
    def hand_bit(self) -> int:
        return 3 * self.eye_cells

    @property
    def mouth_bit(self) -> int:
        return 3 * self.eye_cells + 1

    @property
    def sensing_bits(self) -> int:
        return 3 * self.eye_cells + 2

    def contains(self, p: Position) -> bool:
        return 0 <= p.x < self.world_size and 0 <= p.y < self.world_size

    def eye_cell(self, fovea: Position, p: Position) -> int | None:
        """Index of the eye cell that sees world cell ``p``, or None if out of view."""
        r = self.eye_size // 2
        dx = p.x - fovea.x + r
        dy = p.y - fovea.y + r
        if 0 <= dx < self.eye_size and 0 <= dy < self.eye_size:
            return dy * self.eye_size + dx
        return None


DEFAULT_GEOMETRY = Geometry()


def _clamp_move(v: int, d: int, size: int) -> int:
    n = v + d
    if n < 0 or n >= size:
        return 0
    return d


@dataclass(frozen=True)
class WorldSnapshot:
    """Coordinates only; used for tests and serialisation, never shown to the agent."""

    eye: Position
    hand: Position
    mouth: Position
    object: Position
    holding: bool


class World:
    """Mutable feed-game world.

    The world owns its random generator, so identical seeds give identical
    trajectories for identical actuation sequences.
    """

    def __init__(
        self,
        seed: int,
        mouth: Position = Position(3, 6),
        geometry: Geometry = DEFAULT_GEOMETRY,
    ):
        mouth = Position(*mouth)
        if not geometry.contains(mouth):
            raise ValueError(f"mouth {mouth} outside a {geometry.world_size}x{geometry.world_size} world")
        if geometry.world_size == 1:
            raise ValueError("world needs at least one cell besides the mouth")
        self.geometry = geometry
        self.rng = random.Random(f"world-{seed}")
        self.mouth = mouth
        size = geometry.world_size
        self.object = self._free_cell()
        self.hand = Position(self.rng.randrange(size), self.rng.randrange(size))
        self.eye = Position(self.rng.randrange(size), self.rng.randrange(size))
        self.holding = False

    def _free_cell(self) -> Position:
        # Uniform over every cell except the mouth: draw an index and skip past it.
        size = self.geometry.world_size
        k = self.rng.randrange(size * size - 1)
        if k >= self.mouth.y * size + self.mouth.x:
            k += 1
        return Position(k % size, k // size)

    @classmethod
    def from_snapshot(cls, snap: WorldSnapshot, seed: int = 0, geometry: Geometry = DEFAULT_GEOMETRY) -> "World":
        w = cls(seed, snap.mouth, geometry)
        for p in (snap.eye, snap.hand, snap.object):
            if not geometry.contains(p):
                raise ValueError(f"position {p} out of bounds")
        if snap.holding and snap.object != snap.hand:
            raise ValueError("a held object must sit on the hand")
        w.eye, w.hand, w.object, w.holding = snap.eye, snap.hand, snap.object, snap.holding
        return w

    def snapshot(self) -> WorldSnapshot:
        return WorldSnapshot(self.eye, self.hand, self.mouth, self.object, self.holding)

    def step(self, act: Actuation) -> tuple[EffectiveDisplacement, bool]:
        """Apply ``act`` and return the realised displacement and whether a game completed.

        Order within a step: move eye and hand (each axis clamped), then
        attach, then eat. A fresh object never spawns on the mouth.
        """
        size = self.geometry.world_size
        eye, hand = self.eye, self.hand
        eff = EffectiveDisplacement(
            _clamp_move(eye.x, act.ex, size),
            _clamp_move(eye.y, act.ey, size),
            _clamp_move(hand.x, act.hx, size),
            _clamp_move(hand.y, act.hy, size),
        )
        self.eye = Position(eye.x + eff.ex, eye.y + eff.ey)
        self.hand = hand = Position(hand.x + eff.hx, hand.y + eff.hy)

        if self.holding:
            self.object = hand
        elif hand == self.object:
            self.holding = True

        completed = False
        if self.holding and hand == self.mouth:
            completed = True
            self.holding = False
            self.object = self._free_cell()
        return eff, completed

    def sense(self) -> int:
        g = self.geometry
        bits = 0
        for entity, colour in ((self.object, RED), (self.mouth, GREEN), (self.hand, BLUE)):
            c = g.eye_cell(self.eye, entity)
            if c is not None:
                bits |= 1 << (3 * c + colour)
        if self.hand == self.object:
            bits |= 1 << g.hand_bit
        if self.mouth == self.object:
            bits |= 1 << g.mouth_bit
        return bits

    def motivation(self) -> int:
        return motivation_from_sensing(self.sense(), self.geometry)


def motivation_from_sensing(sensing: int, geometry: Geometry = DEFAULT_GEOMETRY) -> int:
    """Derive the 5-bit motivation from a sensing vector: fovea RGB, hand, mouth."""
    fovea = (sensing >> (3 * geometry.fovea_cell)) & 0b111
    hand = (sensing >> geometry.hand_bit) & 1
    mouth = (sensing >> geometry.mouth_bit) & 1
    return fovea | (hand << 3) | (mouth << 4)


def bits_to_list(value: int, width: int) -> list[int]:
    return [(value >> i) & 1 for i in range(width)]


def list_to_bits(bits) -> int:
    value = 0
    for i, b in enumerate(bits):
        if b:
            value |= 1 << i
    return value
