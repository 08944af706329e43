"""Baseline decision-makers: a greedy rule-based table and tabular Q-learning.

Both discretize the observed input total into equal-width bins on [0, 1]
(20 by default) and, in the advanced variant, key on the observed ratio
category as well.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ConfigError, EnvConfig
from .env import SortingLineEnv, StepResult
from .rng import AGENT_STREAM, make_stream
from .sorting import deterministic_accuracy, step_reward
from .types import (
    MODE_INDEX,
    Action,
    EnvVariant,
    Observation,
    SortingMode,
    action_count,
    action_from_index,
    all_actions,
)

DEFAULT_BINS = 20


def bin_index(value: float, bins: int = DEFAULT_BINS) -> int:
    """Equal-width bin of a value in [0, 1]; the top edge folds into the last bin."""
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"observation outside [0, 1]: {value}")
    return min(int(value * bins), bins - 1)


class Agent:
    """Minimal agent contract used by the episode and benchmark harnesses."""

    name = "agent"
    variant: EnvVariant

    def act(self, obs: Observation) -> Action:
        raise NotImplementedError

    def notify(self, result: StepResult) -> None:
        """Learning agents update here; stateless agents ignore it."""


class RandomAgent(Agent):
    name = "random"

    def __init__(self, variant: EnvVariant, seed: int = 0):
        self.variant = variant
        self._stream = make_stream(seed, AGENT_STREAM)

    def act(self, obs: Observation) -> Action:
        return action_from_index(self._stream.randrange(action_count(self.variant)), self.variant)


def expected_immediate_reward(
    config: EnvConfig,
    occ: float,
    action: Action,
    category: SortingMode | None = None,
) -> float:
    """One-step reward at the noise mean, with no change penalty.

    In the advanced variant the observed ``category`` is taken to be the true
    regime, so a matching mode earns the bonus and a mismatch the malus.
    """
    alpha = deterministic_accuracy(action.speed_index, occ, config)
    if config.variant is EnvVariant.ADVANCED:
        if action.mode is category:
            lo, hi = config.correct_mode_noise_range
            alpha = min(alpha + 0.15, 1.0) - (lo + hi) / 2.0
        else:
            lo, hi = config.incorrect_mode_noise_range
            alpha = max(alpha - 0.10, 0.0) - (lo + hi) / 2.0
    else:
        lo, hi = config.base_noise_range
        alpha = alpha - (lo + hi) / 2.0
    alpha = min(max(alpha, 0.0), 1.0)
    return step_reward(alpha, action.speed_index, config, speed_changed=False)


def best_action(config: EnvConfig, occ: float, category: SortingMode | None = None) -> Action:
    """Action maximizing the expected immediate reward at occupancy ``occ``.

    Ties resolve toward the lower speed index (and earlier mode).
    """
    best = None
    best_reward = -float("inf")
    for action in all_actions(config.variant):
        reward = expected_immediate_reward(config, occ, action, category)
        if reward > best_reward:
            best = action
            best_reward = reward
    return best


class RuleBasedAgent(Agent):
    """Greedy per-bin lookup built once from the reward model.

    Each bin's entry is the best action for the bin center, treating the
    observed total as the occupancy the batch will have on the belt.  The
    change penalty is deliberately ignored, so the agent re-optimizes every
    step.
    """

    name = "rba"

    def __init__(self, config: EnvConfig, bins: int = DEFAULT_BINS):
        if bins < 1:
            raise ConfigError(f"bins must be positive, got {bins}")
        self.variant = config.variant
        self.bins = bins
        categories: tuple[SortingMode | None, ...]
        if config.variant is EnvVariant.ADVANCED:
            categories = tuple(MODE_INDEX)
        else:
            categories = (None,)
        self.table: dict[tuple[int, SortingMode | None], Action] = {}
        for b in range(bins):
            center = (b + 0.5) / bins
            for category in categories:
                self.table[(b, category)] = best_action(config, center, category)

    def act(self, obs: Observation) -> Action:
        key = (bin_index(obs.input_total, self.bins), obs.ratio_category)
        try:
            return self.table[key]
        except KeyError:
            raise ValueError(f"observation does not match agent variant: {obs}") from None


QTABLE_MAGIC = "sortline-qtable"
QTABLE_FORMAT_VERSION = 1


class QLearningAgent(Agent):
    """One-step tabular Q-learning over binned observations.

    Epsilon decays linearly from ``epsilon_start`` to ``epsilon_final`` over
    the first ``epsilon_decay_fraction`` of the planned training steps.  With
    ``learning`` off (the default outside ``train``), ``act`` is the greedy
    policy with ties toward the lower speed index.
    """

    name = "qtable"

    def __init__(
        self,
        variant: EnvVariant,
        bins: int = DEFAULT_BINS,
        learning_rate: float = 0.1,
        discount: float = 0.9,
        epsilon_start: float = 1.0,
        epsilon_final: float = 0.05,
        epsilon_decay_fraction: float = 0.5,
        seed: int = 0,
    ):
        if bins < 1:
            raise ConfigError(f"bins must be positive, got {bins}")
        self.variant = variant
        self.bins = bins
        self.learning_rate = learning_rate
        self.discount = discount
        self.epsilon_start = epsilon_start
        self.epsilon_final = epsilon_final
        self.epsilon_decay_fraction = epsilon_decay_fraction
        self._stream = make_stream(seed, AGENT_STREAM)
        states = bins * (len(MODE_INDEX) if variant is EnvVariant.ADVANCED else 1)
        self.values = np.zeros((states, action_count(variant)))
        self.visits = np.zeros(states, dtype=np.int64)
        self.learning = False
        self._pending: tuple[int, int] | None = None
        self._planned_steps = 0
        self._steps_done = 0

    def state_index(self, obs: Observation) -> int:
        b = bin_index(obs.input_total, self.bins)
        if self.variant is EnvVariant.BASIC:
            return b
        if obs.ratio_category is None:
            raise ValueError("advanced agent needs a ratio category in the observation")
        return b * len(MODE_INDEX) + MODE_INDEX[obs.ratio_category]

    def epsilon(self) -> float:
        """Current exploration rate under the linear decay schedule."""
        horizon = self._planned_steps * self.epsilon_decay_fraction
        if horizon <= 0:
            return self.epsilon_final
        progress = min(self._steps_done / horizon, 1.0)
        return self.epsilon_start + (self.epsilon_final - self.epsilon_start) * progress

    def act(self, obs: Observation, epsilon: float | None = None) -> Action:
        state = self.state_index(obs)
        if epsilon is None:
            epsilon = self.epsilon() if self.learning else 0.0
        if epsilon > 0.0 and self._stream.random() < epsilon:
            index = self._stream.randrange(self.values.shape[1])
        else:
            index = int(np.argmax(self.values[state]))
        if self.learning:
            self._pending = (state, index)
        return action_from_index(index, self.variant)

    def notify(self, result: StepResult) -> None:
        if not self.learning or self._pending is None:
            return
        state, action = self._pending
        self._pending = None
        target = result.reward
        if not result.done:
            target += self.discount * float(np.max(self.values[self.state_index(result.observation)]))
        self.values[state, action] += self.learning_rate * (target - self.values[state, action])
        self.visits[state] += 1
        self._steps_done += 1

    def train(self, config: EnvConfig, episodes: int, steps_per_episode: int) -> "QLearningAgent":
        """Run seeded training episodes against a fresh environment.

        Episode seeds come from the agent's exploration stream, so the whole
        run is a deterministic function of the agent seed and the config.
        """
        if config.variant is not self.variant:
            raise ConfigError("agent and config variants differ")
        env = SortingLineEnv(replace(config, episode_length=steps_per_episode))
        self._planned_steps = episodes * steps_per_episode
        self._steps_done = 0
        self.learning = True
        try:
            for _ in range(episodes):
                obs = env.reset(seed=self._stream.getrandbits(63))
                for _ in range(steps_per_episode):
                    result = env.step(self.act(obs))
                    self.notify(result)
                    obs = result.observation
        finally:
            self.learning = False
        return self

    def save(self, path: str | Path) -> None:
        """Write the table as flat text: a four-line header (format tag,
        variant, bins, action count) followed by one row of values per state."""
        lines = [
            f"{QTABLE_MAGIC} {QTABLE_FORMAT_VERSION}",
            f"variant {self.variant.value}",
            f"bins {self.bins}",
            f"actions {self.values.shape[1]}",
        ]
        lines.extend(" ".join(repr(v) for v in row) for row in self.values.tolist())
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path: str | Path, seed: int = 0) -> "QLearningAgent":
        lines = Path(path).read_text().splitlines()
        try:
            magic, version = lines[0].split()
            if magic != QTABLE_MAGIC or int(version) != QTABLE_FORMAT_VERSION:
                raise ValueError
            fields = dict(line.split() for line in lines[1:4])
            variant = EnvVariant(fields["variant"])
            bins = int(fields["bins"])
            actions = int(fields["actions"])
        except (ValueError, KeyError, IndexError):
            raise ValueError(f"{path} is not a recognized table file") from None
        agent = cls(variant, bins=bins, seed=seed)
        if actions != agent.values.shape[1]:
            raise ValueError(f"{path}: {actions} actions does not match variant {variant.value}")
        rows = [[float(v) for v in line.split()] for line in lines[4:] if line.strip()]
        if len(rows) != agent.values.shape[0] or any(len(r) != actions for r in rows):
            raise ValueError(f"{path}: table shape does not match header")
        agent.values = np.array(rows)
        return agent
