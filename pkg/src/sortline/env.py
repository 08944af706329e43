"""The sorting-line environment: reset, the six-phase step, observation.

Material flows input -> belt -> machine -> storage, advancing one full stage
per step.  The accuracy for a batch is fixed while it sits on the belt (from
the speed and, in the advanced variant, the mode chosen that step) and
travels with the batch into the machine, so each batch is sorted with the
accuracy the agent bought for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .config import EnvConfig
from .inputs import InputGenerator, make_generator
from .rng import INPUT_STREAM, OBSERVATION_STREAM, SORTING_STREAM, make_stream
from .sorting import (
    apply_mode,
    base_accuracy,
    classify_ratio,
    deterministic_accuracy,
    occupancy,
    purity,
    sort_transfer,
    step_reward,
)
from .types import (
    EMPTY_MIX,
    STAGE_CAPACITY,
    Action,
    EnvVariant,
    MaterialMix,
    Observation,
    SortingMode,
    StorageTally,
    speed_fraction,
    validate_action,
)


class EpisodeDoneError(RuntimeError):
    """step() was called on a finished episode."""


@dataclass(slots=True)
class EnvState:
    """Mutable snapshot of the line.

    ``accuracy`` belongs to the batch currently on the belt;
    ``machine_accuracy`` is the value that batch carried when it moved on.
    """

    input: MaterialMix
    belt: MaterialMix
    machine: MaterialMix
    storage: StorageTally
    speed_index: int
    prev_speed_index: int | None
    mode: SortingMode
    accuracy: float
    machine_accuracy: float
    step_count: int


@dataclass(frozen=True, slots=True)
class StepResult:
    observation: Observation
    reward: float
    done: bool
    info: dict[str, Any]


def apply_observation_noise(total: float, u: float) -> float:
    """Multiplicative perturbation of a normalized total, clamped to [0, 1]."""
    observed = total * (1.0 + u)
    return 0.0 if observed < 0.0 else 1.0 if observed > 1.0 else observed


class SortingLineEnv:
    """Deterministic, seedable simulator of the two-material sorting line."""

    def __init__(self, config: EnvConfig):
        self.config = config.validate()
        self._state: EnvState | None = None
        self._generator: InputGenerator | None = None
        self._sorting_stream = None
        self._obs_stream = None

    @property
    def state(self) -> EnvState:
        if self._state is None:
            raise RuntimeError("reset() must be called first")
        return self._state

    @property
    def variant(self) -> EnvVariant:
        return self.config.variant

    def reset(self, seed: int | None = None) -> Observation:
        """Start a fresh episode; ``seed`` overrides the configured root seed."""
        root = self.config.seed if seed is None else seed
        self._generator = make_generator(self.config.input_type, make_stream(root, INPUT_STREAM))
        self._sorting_stream = make_stream(root, SORTING_STREAM)
        self._obs_stream = make_stream(root, OBSERVATION_STREAM)
        self._state = EnvState(
            input=self._generator.draw(),
            belt=EMPTY_MIX,
            machine=EMPTY_MIX,
            storage=StorageTally(),
            speed_index=1,
            prev_speed_index=None,
            mode=SortingMode.BASIC,
            accuracy=1.0,
            machine_accuracy=1.0,
            step_count=0,
        )
        return self.observe()

    def observe(self) -> Observation:
        """Observation of the input stage: the normalized total, perturbed by
        one multiplicative uniform draw, plus the true ratio category in the
        advanced variant.  Consumes one draw even at zero noise level."""
        state = self.state
        level = self.config.obs_noise_level
        u = self._obs_stream.uniform(-level, level)
        observed = apply_observation_noise(state.input.total / STAGE_CAPACITY, u)
        if self.config.variant is EnvVariant.ADVANCED:
            return Observation(observed, classify_ratio(state.input))
        return Observation(observed)

    def step(self, action: Action) -> StepResult:
        """Advance the line one step:

        1. sort the machine contents into storage at their carried accuracy
        2. shift belt -> machine, input -> belt, draw fresh input
        3. apply the action's speed (and mode)
        4. recompute accuracy for the batch now on the belt
        5. reward from that accuracy and speed, minus any change penalty
        6. observe the fresh input
        """
        state = self.state
        config = self.config
        if state.step_count >= config.episode_length:
            raise EpisodeDoneError("episode is finished; call reset()")
        validate_action(action, config.variant)

        if not state.machine.is_empty:
            _, delta = sort_transfer(state.machine, state.machine_accuracy)
            state.storage.add(delta)

        state.machine = state.belt
        state.machine_accuracy = state.accuracy
        state.belt = state.input
        state.input = self._generator.draw()

        speed_changed = (
            state.prev_speed_index is not None and action.speed_index != state.prev_speed_index
        )
        state.speed_index = action.speed_index
        if action.mode is not None:
            state.mode = action.mode

        occ = occupancy(state.belt)
        if config.variant is EnvVariant.ADVANCED:
            correct = classify_ratio(state.belt)
            mode_correct: bool | None = state.mode is correct
            pre_noise = deterministic_accuracy(state.speed_index, occ, config)
            state.accuracy = apply_mode(pre_noise, state.mode, correct, config, self._sorting_stream)
        else:
            mode_correct = None
            state.accuracy = base_accuracy(state.speed_index, occ, config, self._sorting_stream)

        reward = step_reward(state.accuracy, state.speed_index, config, speed_changed)
        state.prev_speed_index = state.speed_index

        state.step_count += 1
        done = state.step_count >= config.episode_length
        info = {
            "accuracy": state.accuracy,
            "occupancy": occ,
            "speed": speed_fraction(state.speed_index),
            "purity": purity(state.storage),
            "mode_correct": mode_correct,
        }
        return StepResult(self.observe(), reward, done, info)
