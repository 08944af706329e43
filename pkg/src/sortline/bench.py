"""Episode driving, trace export, and the multi-seed benchmark protocol."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .agents import Agent, QLearningAgent, RuleBasedAgent
from .config import ConfigError, EnvConfig
from .env import SortingLineEnv
from .rng import stream_seed
from .types import EnvVariant, InputType, SortingMode, speed_fraction

TRACE_COLUMNS = ("step", "speed", "mode", "occupancy", "accuracy", "reward", "cum_reward", "purity")

# Numeric mode coding used in trace files, chosen to sit on a 0..1 plot axis.
MODE_CODE = {SortingMode.BASIC: 0.0, SortingMode.POSITIVE: 0.5, SortingMode.NEGATIVE: 1.0}
CODE_MODE = {code: mode for mode, code in MODE_CODE.items()}


@dataclass(frozen=True, slots=True)
class TraceRow:
    step: int
    speed: float
    mode: SortingMode
    occupancy: float
    accuracy: float
    reward: float
    cum_reward: float
    purity: float


@dataclass(slots=True)
class EpisodeTrace:
    rows: list[TraceRow]
    config_digest: str | None = None
    seed: int | None = None
    agent_name: str | None = None


@dataclass(frozen=True, slots=True)
class EpisodeSummary:
    """Per-episode aggregates, all recomputable from the trace rows.

    Speed and purity means are on the x100 scale (55.0 means a mean speed
    fraction of 0.55).
    """

    mean_speed: float
    mean_purity: float
    cumulative_reward: float
    speed_changes: int


def summarize(trace: EpisodeTrace) -> EpisodeSummary:
    rows = trace.rows
    if not rows:
        return EpisodeSummary(0.0, 0.0, 0.0, 0)
    changes = sum(1 for prev, cur in zip(rows, rows[1:]) if cur.speed != prev.speed)
    return EpisodeSummary(
        mean_speed=100.0 * sum(r.speed for r in rows) / len(rows),
        mean_purity=100.0 * sum(r.purity for r in rows) / len(rows),
        cumulative_reward=rows[-1].cum_reward,
        speed_changes=changes,
    )


def run_episode(
    config: EnvConfig,
    agent: Agent,
    steps: int | None = None,
    seed: int | None = None,
) -> tuple[EpisodeTrace, EpisodeSummary]:
    """Drive one full episode and record every step.

    ``steps`` and ``seed`` override the config's episode length and root seed.
    """
    if agent.variant is not config.variant:
        raise ConfigError(
            f"agent variant {agent.variant.value} does not match config {config.variant.value}"
        )
    run_config = replace(
        config,
        episode_length=config.episode_length if steps is None else steps,
        seed=config.seed if seed is None else seed,
    )
    env = SortingLineEnv(run_config)
    obs = env.reset()
    rows: list[TraceRow] = []
    cum_reward = 0.0
    for step in range(1, run_config.episode_length + 1):
        action = agent.act(obs)
        result = env.step(action)
        agent.notify(result)
        cum_reward += result.reward
        rows.append(
            TraceRow(
                step=step,
                speed=speed_fraction(action.speed_index),
                mode=action.mode or SortingMode.BASIC,
                occupancy=result.info["occupancy"],
                accuracy=result.info["accuracy"],
                reward=result.reward,
                cum_reward=cum_reward,
                purity=result.info["purity"],
            )
        )
        obs = result.observation
    trace = EpisodeTrace(
        rows,
        config_digest=run_config.digest(),
        seed=run_config.seed,
        agent_name=getattr(agent, "name", type(agent).__name__),
    )
    return trace, summarize(trace)


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def export_trace(trace: EpisodeTrace, path: str | Path) -> None:
    """Write a trace as CSV: one header line, then one row per step with all
    floats at six decimals and the mode numerically coded (0 / 0.5 / 1)."""
    lines = [",".join(TRACE_COLUMNS)]
    for r in trace.rows:
        lines.append(
            ",".join(
                (
                    str(r.step),
                    _fmt(r.speed),
                    _fmt(MODE_CODE[r.mode]),
                    _fmt(r.occupancy),
                    _fmt(r.accuracy),
                    _fmt(r.reward),
                    _fmt(r.cum_reward),
                    _fmt(r.purity),
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def load_trace(path: str | Path) -> EpisodeTrace:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != ",".join(TRACE_COLUMNS):
        raise ValueError(f"{path} is not a trace file")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(TRACE_COLUMNS):
            raise ValueError(f"{path}: malformed row {line!r}")
        rows.append(
            TraceRow(
                step=int(parts[0]),
                speed=float(parts[1]),
                mode=CODE_MODE[float(parts[2])],
                occupancy=float(parts[3]),
                accuracy=float(parts[4]),
                reward=float(parts[5]),
                cum_reward=float(parts[6]),
                purity=float(parts[7]),
            )
        )
    return EpisodeTrace(rows)


def standard_setups(
    variant: EnvVariant = EnvVariant.BASIC, base: EnvConfig | None = None
) -> dict[str, EnvConfig]:
    """The four benchmark settings: {random, seasonal} x {clean, noisy}
    observations, with a change penalty in the seasonal settings.

    ``base`` supplies every other field (thresholds, weights, seed, ...).
    """
    base = replace(base if base is not None else EnvConfig(), variant=variant)
    return {
        "A": replace(base, input_type=InputType.RANDOM, obs_noise_level=0.0, action_penalty=0.0),
        "B": replace(base, input_type=InputType.SEASONAL, obs_noise_level=0.0, action_penalty=0.5),
        "C": replace(base, input_type=InputType.RANDOM, obs_noise_level=0.3, action_penalty=0.0),
        "D": replace(base, input_type=InputType.SEASONAL, obs_noise_level=0.3, action_penalty=0.5),
    }


AgentFactory = Callable[[EnvConfig, int], Agent]


def default_agent_factories(
    train_steps: int = 100_000,
    episode_steps: int = 250,
    bins: int = 20,
) -> dict[str, AgentFactory]:
    """Factories for the bundled agents; the Q-agent trains on construction."""

    def rba(config: EnvConfig, train_seed: int) -> Agent:
        return RuleBasedAgent(config, bins=bins)

    def qtable(config: EnvConfig, train_seed: int) -> Agent:
        episodes = max(1, round(train_steps / episode_steps))
        agent = QLearningAgent(config.variant, bins=bins, seed=train_seed)
        return agent.train(config, episodes, episode_steps)

    return {"rba": rba, "qtable": qtable}


@dataclass(frozen=True, slots=True)
class BenchRecord:
    setup: str
    agent: str
    seeds: int
    mean_reward: float
    std_reward: float
    mean_speed: float
    mean_purity: float


@dataclass(slots=True)
class BenchmarkReport:
    records: list[BenchRecord] = field(default_factory=list)

    def to_records_text(self) -> str:
        """One JSON record per line, in evaluation order."""
        return "\n".join(json.dumps(asdict(r), sort_keys=True) for r in self.records) + "\n"

    def format_table(self) -> str:
        header = f"{'setup':<6}{'agent':<9}{'reward':>9}{'std':>8}{'speed':>8}{'purity':>8}"
        lines = [header, "-" * len(header)]
        for r in self.records:
            lines.append(
                f"{r.setup:<6}{r.agent:<9}{r.mean_reward:>9.2f}{r.std_reward:>8.2f}"
                f"{r.mean_speed:>8.1f}{r.mean_purity:>8.1f}"
            )
        return "\n".join(lines)


def run_benchmark(
    setups: Mapping[str, EnvConfig],
    agent_factories: Mapping[str, AgentFactory],
    seeds: Sequence[int],
    steps: int = 50,
) -> BenchmarkReport:
    """Train each agent once per setup, evaluate on every seed, aggregate.

    Evaluation order is fixed (setups in mapping order, seeds sorted), so the
    report is a deterministic function of its arguments.  Training seeds are
    derived from the first seed in the sorted list together with the setup
    and agent names.
    """
    ordered_seeds = sorted(seeds)
    if len(set(ordered_seeds)) != len(ordered_seeds):
        raise ConfigError("benchmark seeds must be distinct")
    if not ordered_seeds:
        raise ConfigError("benchmark needs at least one seed")
    report = BenchmarkReport()
    for setup_name, config in setups.items():
        for agent_name, factory in agent_factories.items():
            train_seed = stream_seed(ordered_seeds[0], f"train:{setup_name}:{agent_name}")
            agent = factory(config, train_seed)
            summaries = [
                run_episode(config, agent, steps=steps, seed=seed)[1] for seed in ordered_seeds
            ]
            rewards = np.array([s.cumulative_reward for s in summaries])
            report.records.append(
                BenchRecord(
                    setup=setup_name,
                    agent=agent_name,
                    seeds=len(ordered_seeds),
                    mean_reward=round(float(np.mean(rewards)), 2),
                    std_reward=round(float(np.std(rewards)), 2),
                    mean_speed=round(float(np.mean([s.mean_speed for s in summaries])), 1),
                    mean_purity=round(float(np.mean([s.mean_purity for s in summaries])), 1),
                )
            )
    return report
