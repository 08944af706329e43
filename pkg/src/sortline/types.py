"""Core domain types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

STAGE_CAPACITY = 100.0
SPEED_INDICES = tuple(range(1, 11))


class EnvVariant(Enum):
    BASIC = "basic"
    ADVANCED = "advanced"


class InputType(Enum):
    RANDOM = "random"
    SEASONAL = "seasonal"


class SortingMode(Enum):
    """Internal machine configuration: neutral, or biased toward one material."""

    BASIC = "basic"
    POSITIVE = "positive"
    NEGATIVE = "negative"

    @classmethod
    def from_name(cls, name: str) -> "SortingMode":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown sorting mode {name!r}") from None


# Fixed ordering used for discretized state/action indexing.
MODE_ORDER = (SortingMode.BASIC, SortingMode.POSITIVE, SortingMode.NEGATIVE)
MODE_INDEX = {mode: i for i, mode in enumerate(MODE_ORDER)}


@dataclass(frozen=True, slots=True)
class MaterialMix:
    """Quantities of materials A and B at one stage, in percent of stage capacity."""

    a: float
    b: float

    # Tiny slack absorbs float dust from sorting arithmetic on full stages.
    _TOL = 1e-6

    def __post_init__(self) -> None:
        if self.a < 0.0 or self.b < 0.0:
            raise ValueError(f"negative material quantity: a={self.a}, b={self.b}")
        if self.a + self.b > STAGE_CAPACITY + self._TOL:
            raise ValueError(f"stage over capacity: a={self.a}, b={self.b}")

    @property
    def total(self) -> float:
        return self.a + self.b

    @property
    def is_empty(self) -> bool:
        return self.a == 0.0 and self.b == 0.0


EMPTY_MIX = MaterialMix(0.0, 0.0)


def speed_fraction(speed_index: int) -> float:
    """Belt speed as a fraction: index 1..10 maps to 0.1..1.0."""
    return speed_index / 10.0


@dataclass(frozen=True, slots=True)
class Action:
    """One agent decision: a speed setting and, in the advanced variant, a mode."""

    speed_index: int
    mode: SortingMode | None = None


def validate_action(action: Action, variant: EnvVariant) -> None:
    if action.speed_index not in SPEED_INDICES:
        raise ValueError(f"speed index out of range: {action.speed_index}")
    if variant is EnvVariant.BASIC and action.mode is not None:
        raise ValueError("basic variant takes no sorting mode")
    if variant is EnvVariant.ADVANCED and action.mode is None:
        raise ValueError("advanced variant requires a sorting mode")


def action_count(variant: EnvVariant) -> int:
    return 10 if variant is EnvVariant.BASIC else 30


def action_index(action: Action, variant: EnvVariant) -> int:
    """Dense index of an action; lower speeds come first within a mode slot."""
    validate_action(action, variant)
    if variant is EnvVariant.BASIC:
        return action.speed_index - 1
    return (action.speed_index - 1) * len(MODE_ORDER) + MODE_INDEX[action.mode]


def action_from_index(index: int, variant: EnvVariant) -> Action:
    if not 0 <= index < action_count(variant):
        raise ValueError(f"action index out of range: {index}")
    if variant is EnvVariant.BASIC:
        return Action(index + 1)
    speed, mode = divmod(index, len(MODE_ORDER))
    return Action(speed + 1, MODE_ORDER[mode])


def all_actions(variant: EnvVariant) -> tuple[Action, ...]:
    return tuple(action_from_index(i, variant) for i in range(action_count(variant)))


@dataclass(frozen=True, slots=True)
class Observation:
    """What the agent sees: the (possibly noisy) input-stage load as a fraction
    of capacity and, in the advanced variant, the true input ratio category."""

    input_total: float
    ratio_category: SortingMode | None = None


@dataclass(slots=True)
class StorageTally:
    """Cumulative contents of the two storage containers.

    ``a_true``/``b_true`` count correctly routed material; ``a_false`` counts
    material B that landed in container A, and ``b_false`` the reverse.
    """

    a_true: float = 0.0
    a_false: float = 0.0
    b_true: float = 0.0
    b_false: float = 0.0

    def add(self, delta: "StorageTally") -> None:
        self.a_true += delta.a_true
        self.a_false += delta.a_false
        self.b_true += delta.b_true
        self.b_false += delta.b_false

    @property
    def total(self) -> float:
        return self.a_true + self.a_false + self.b_true + self.b_false

    @property
    def true_total(self) -> float:
        return self.a_true + self.b_true
