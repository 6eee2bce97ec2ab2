"""Random-walk agent with a single behaviour modulator, ``focus``.

With probability ``focus`` the agent undoes its last realised movement;
otherwise each actuator picks -1, 0 or 1 uniformly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from feedgame.closure import ClosureCode
from feedgame.gridworld import Actuation, EffectiveDisplacement

DEFAULT_HIGH_SET = frozenset(
    ClosureCode.parse(c) for c in ("222", "221", "211", "121", "212", "223", "213")
)


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class FixedFocus:
    value: float

    def __post_init__(self):
        _check_unit("focus", self.value)

    def focus_for(self, code: ClosureCode | None) -> float:
        return self.value

    @property
    def label(self) -> str:
        return f"{self.value:g}"


@dataclass(frozen=True)
class VariableFocus:
    """Reactive policy: ``high_value`` when the current closure code is in ``high_set``."""

    high_set: frozenset = DEFAULT_HIGH_SET
    high_value: float = 0.66
    low_value: float = 0.0

    def __post_init__(self):
        _check_unit("high_value", self.high_value)
        _check_unit("low_value", self.low_value)
        object.__setattr__(self, "high_set", frozenset(ClosureCode.parse(c) for c in self.high_set))

    def focus_for(self, code: ClosureCode | None) -> float:
        # No code exists before the first scored iteration.
        if code is not None and code in self.high_set:
            return self.high_value
        return self.low_value

    @property
    def label(self) -> str:
        return "var"


FocusPolicy = FixedFocus | VariableFocus


def focus_value(policy: FocusPolicy, code: ClosureCode | None) -> float:
    return policy.focus_for(code)


@dataclass
class Agent:
    rng: random.Random
    last_effective: EffectiveDisplacement | None = field(default=None)

    @classmethod
    def seeded(cls, seed: int) -> "Agent":
        return cls(random.Random(f"agent-{seed}"))

    def select_actuation(self, focus: float) -> tuple[Actuation, bool]:
        """Return the next command and whether it is an undo.

        One Bernoulli draw decides undo for the whole actuation. The draw is
        skipped when focus is 0, so a zero-focus agent never reads its memory.
        """
        rng = self.rng
        if focus > 0.0 and self.last_effective is not None and rng.random() < focus:
            return self.last_effective.negated(), True
        r = rng.randrange(81)
        return Actuation(r // 27 - 1, (r // 9) % 3 - 1, (r // 3) % 3 - 1, r % 3 - 1), False

    def observe(self, effective: EffectiveDisplacement) -> None:
        self.last_effective = effective
