"""Run configuration and its plain-text ``key = value`` file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from feedgame.agent import DEFAULT_HIGH_SET, FixedFocus, FocusPolicy, VariableFocus
from feedgame.gridworld import Geometry, Position
from feedgame.representation import Thresholds

SUPPORTED_RNG = "mt19937"
VARIABLE_LABELS = ("var", "variable")


class ConfigError(ValueError):
    pass


def _default_high_set() -> tuple[str, ...]:
    return tuple(sorted(str(c) for c in DEFAULT_HIGH_SET))


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    iterations: int = 15000
    focus: str = "0"
    high_set: tuple[str, ...] = field(default_factory=_default_high_set)
    high_value: float = 0.66
    low_value: float = 0.0
    node_hits: int = 8
    arc_frequency: int = 8
    probability: float = 0.5
    extraction_period: int = 500
    codifiable_review: str = "periodic"
    include_zero_motivation: bool = False
    world_size: int = 7
    eye_size: int = 5
    # None places the mouth at the bottom-centre cell
    mouth: tuple[int, int] | None = None
    snapshot_every: int = 500
    timeline_every: int = 100
    rng: str = SUPPORTED_RNG
    out: str | None = None

    def __post_init__(self):
        if self.iterations < 0:
            raise ConfigError(f"iterations must be >= 0, got {self.iterations}")
        if self.snapshot_every <= 0 or self.timeline_every <= 0:
            raise ConfigError("snapshot_every and timeline_every must be positive")
        if self.rng != SUPPORTED_RNG:
            raise ConfigError(f"unsupported rng {self.rng!r}; only {SUPPORTED_RNG!r} is implemented")
        try:
            self.geometry
            self.thresholds
            self.policy
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if not self.geometry.contains(self.mouth_position):
            raise ConfigError(f"mouth {self.mouth_position} outside the world")

    @property
    def geometry(self) -> Geometry:
        return Geometry(self.world_size, self.eye_size)

    @property
    def mouth_position(self) -> Position:
        if self.mouth is None:
            return Position(self.world_size // 2, self.world_size - 1)
        return Position(*self.mouth)

    @property
    def thresholds(self) -> Thresholds:
        return Thresholds(
            node_hits=self.node_hits,
            arc_frequency=self.arc_frequency,
            probability=self.probability,
            extraction_period=self.extraction_period,
            include_zero_motivation=self.include_zero_motivation,
            codifiable_review=self.codifiable_review,
        )

    @property
    def policy(self) -> FocusPolicy:
        if self.focus.strip().lower() in VARIABLE_LABELS:
            return VariableFocus(frozenset(self.high_set), self.high_value, self.low_value)
        try:
            value = float(self.focus)
        except ValueError:
            raise ConfigError(f"focus must be a number in [0, 1] or 'variable', got {self.focus!r}") from None
        return FixedFocus(value)

    @property
    def policy_label(self) -> str:
        return self.policy.label

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["high_set"] = list(self.high_set)
        d["mouth"] = None if self.mouth is None else list(self.mouth)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        unknown = set(d) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        d = dict(d)
        if d.get("high_set") is not None:
            d["high_set"] = tuple(str(c) for c in d["high_set"])
        if d.get("mouth") is not None:
            d["mouth"] = tuple(d["mouth"])
        return cls(**d)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def parse_value(key: str, text: str):
    """Convert the textual value of config key ``key``."""
    if key not in _FIELDS:
        raise ConfigError(f"unknown config key {key!r}")
    text = text.strip()
    default = _FIELDS[key].default
    try:
        if key == "high_set":
            return tuple(t for t in text.replace(",", " ").split() if t)
        if key == "mouth":
            if text.lower() in ("", "none", "default"):
                return None
            x, y = (int(t) for t in text.replace(",", " ").split())
            return (x, y)
        if key == "out":
            return text or None
        if key in ("focus", "codifiable_review", "rng"):
            return text
        if isinstance(default, bool):
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {text!r}") from None
    raise ConfigError(f"unhandled config key {key!r}")


def parse_config_text(text: str, source: str = "<config>") -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        try:
            values[key] = parse_value(key, value)
        except ConfigError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
    return values


def load_config(path: str | Path, **overrides) -> RunConfig:
    path = Path(path)
    values = parse_config_text(path.read_text(), str(path))
    values.update(overrides)
    return RunConfig(**values)


def dump_config(config: RunConfig) -> str:
    lines = []
    for name in _FIELDS:
        value = getattr(config, name)
        if name == "high_set":
            text = " ".join(value)
        elif name == "mouth":
            text = "default" if value is None else f"{value[0]} {value[1]}"
        elif value is None:
            text = ""
        else:
            text = str(value).lower() if isinstance(value, bool) else str(value)
        lines.append(f"{name} = {text}")
    return "\n".join(lines) + "\n"
