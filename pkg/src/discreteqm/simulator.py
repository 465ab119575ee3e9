"""Monte-Carlo engine for scripted measurement sequences.

Observation mode: every measurement family gets one hidden outcome per
trial, drawn from the initial state's Born distribution and frozen, so
re-measurements always agree. Interaction mode: quantum sampling with
collapse, so re-measurements can be invalidated by an intervening
incompatible measurement.

Trial t of a run seeded with s uses the random substream keyed (s, t);
the realized initial state (when Haar-random) comes from the substream
keyed (s,) alone.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg, measurement as ma
from .exceptions import ModeError, ScriptError
from .measurement import Measurement

OBSERVATION = "observation"
INTERACTION = "interaction"

_PAIR_SEP = "|"


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    dim: int
    measurements: dict[str, Measurement]
    initial_state: np.ndarray | str = "haar_random"

    def __post_init__(self):
        if not self.measurements:
            raise ValueError("scenario needs at least one measurement")
        for name, m in self.measurements.items():
            if m.dim != self.dim:
                raise ValueError(f"measurement {name!r} has dim {m.dim}, expected {self.dim}")
        if not isinstance(self.initial_state, str):
            state = linalg.normalize(self.initial_state)
            if state.size != self.dim:
                raise ValueError("initial state has the wrong dimension")
            object.__setattr__(self, "initial_state", state)
        elif self.initial_state != "haar_random":
            raise ValueError("initial_state must be a vector or 'haar_random'")

    def resolve_initial(self, seed: int) -> np.ndarray:
        if isinstance(self.initial_state, str):
            return linalg.haar_random_state(self.dim, np.random.default_rng([seed]))
        return self.initial_state


@dataclass(frozen=True)
class ExperimentScript:
    steps: tuple[str, ...]

    @classmethod
    def parse(cls, text: str) -> "ExperimentScript":
        steps = tuple(s.strip() for s in text.split(",") if s.strip())
        if not steps:
            raise ScriptError("empty script")
        return cls(steps=steps)


@dataclass(frozen=True)
class MeasurementEvent:
    step_index: int
    measurement: str
    outcome_label: str
    value: float
    invalidated: tuple[tuple[str, str, str], ...] = ()

    def to_dict(self) -> dict:
        return {
            "step_index": self.step_index,
            "measurement": self.measurement,
            "outcome_label": self.outcome_label,
            "value": self.value,
            "invalidated": [list(t) for t in self.invalidated],
        }


@dataclass(frozen=True, eq=False)
class RunReport:
    mode: str
    trials: int
    seed: int
    scenario_name: str
    script: tuple[str, ...]
    initial_state: np.ndarray = field(repr=False)
    events: list = field(repr=False)
    step_frequencies: list
    invalidation_counts: dict
    order_effect: dict

    @property
    def invalidation_rate(self) -> dict:
        return {pair: (inv / opp if opp else 0.0)
                for pair, (inv, opp) in self.invalidation_counts.items()}

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "scenario": self.scenario_name,
            "script": list(self.script),
            "initial_state": [[float(z.real), float(z.imag)] for z in self.initial_state],
            "aggregate": {
                "step_frequencies": [
                    {label: freq for label, freq in sorted(step.items())}
                    for step in self.step_frequencies
                ],
                "invalidation_rate": {
                    _PAIR_SEP.join(pair): rate
                    for pair, rate in sorted(self.invalidation_rate.items())
                },
                "order_effect": {
                    _PAIR_SEP.join(pair): dist
                    for pair, dist in sorted(self.order_effect.items())
                },
            },
            "events": [[e.to_dict() for e in trial] for trial in self.events],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(f"# seed={self.seed}\n")
        out.write("trial,step,measurement,outcome,value,invalidated_count\n")
        for t, trial in enumerate(self.events):
            for e in trial:
                out.write(f"{t},{e.step_index},{e.measurement},{e.outcome_label},"
                          f"{e.value!r},{len(e.invalidated)}\n")
        return out.getvalue()


def _clamped_rows(probs: np.ndarray) -> np.ndarray:
    p = probs.copy()
    p[p < ma.PROB_FLOOR] = 0.0
    return p / p.sum(axis=-1, keepdims=True)


def _transition_tables(scenario: Scenario, initial: np.ndarray):
    """Initial Born distributions per measurement and outcome-to-outcome
    transition matrices per measurement pair; rows are cumulative-summed
    for inverse-CDF draws elsewhere."""
    names = list(scenario.measurements)
    first = {}
    for name in names:
        m = scenario.measurements[name]
        first[name] = _clamped_rows(np.abs(m.basis.conj().T @ initial) ** 2)
    cross = {}
    for a in names:
        for b in names:
            ma_, mb_ = scenario.measurements[a], scenario.measurements[b]
            t = np.abs(mb_.basis.conj().T @ ma_.basis) ** 2  # [j, i] -> [i, j]
            cross[(a, b)] = _clamped_rows(t.T)
    return first, cross


def _draw(cum_row: np.ndarray, u: float) -> int:
    idx = int(np.searchsorted(cum_row, u, side="right"))
    return min(idx, cum_row.size - 1)


def _resolve_script(scenario: Scenario, script: ExperimentScript) -> list[str]:
    for name in script.steps:
        if name not in scenario.measurements:
            raise ScriptError(f"script references unknown measurement {name!r}")
    return list(script.steps)


def exact_probe_distribution(scenario: Scenario, initial: np.ndarray,
                             sequence: list[str]) -> np.ndarray:
    """Chain-rule outcome distribution of the last measurement in an
    interaction-mode sequence."""
    first, cross = _transition_tables(scenario, initial)
    dist = first[sequence[0]]
    for prev, cur in zip(sequence, sequence[1:]):
        dist = dist @ cross[(prev, cur)]
    return dist


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return float(0.5 * np.sum(np.abs(np.asarray(p) - np.asarray(q))))


def run(scenario: Scenario, script: ExperimentScript, mode: str, trials: int,
        seed: int, with_order_effect: bool = True) -> RunReport:
    if mode not in (OBSERVATION, INTERACTION):
        raise ModeError(f"unknown mode {mode!r}")
    if trials < 1:
        raise ValueError("need at least one trial")
    steps = _resolve_script(scenario, script)
    initial = scenario.resolve_initial(seed)
    first, cross = _transition_tables(scenario, initial)
    first_cum = {k: np.cumsum(v) for k, v in first.items()}
    cross_cum = {k: np.cumsum(v, axis=1) for k, v in cross.items()}
    labels = {k: m.labels for k, m in scenario.measurements.items()}
    values = {k: m.values for k, m in scenario.measurements.items()}

    events: list[list[MeasurementEvent]] = []
    step_counts = [dict.fromkeys(labels[name], 0) for name in steps]
    inv_counts: dict[tuple[str, str], list[int]] = {}

    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        us = rng.random(len(steps))
        trial_events: list[MeasurementEvent] = []
        last_label: dict[str, str] = {}
        since_last: dict[str, set[str]] = {}
        hidden: dict[str, int] = {}
        cur: tuple[str, int] | None = None
        for i, name in enumerate(steps):
            if mode == OBSERVATION:
                if name not in hidden:
                    hidden[name] = _draw(first_cum[name], us[i])
                idx = hidden[name]
            else:
                if cur is None:
                    idx = _draw(first_cum[name], us[i])
                else:
                    idx = _draw(cross_cum[(cur[0], name)][cur[1]], us[i])
                cur = (name, idx)
            label = labels[name][idx]
            invalidated: tuple[tuple[str, str, str], ...] = ()
            if name in last_label:
                interveners = since_last.get(name, set())
                for other in interveners:
                    key = (name, other)
                    c = inv_counts.setdefault(key, [0, 0])
                    c[1] += 1
                    if label != last_label[name]:
                        c[0] += 1
                if label != last_label[name]:
                    invalidated = ((name, last_label[name], label),)
            last_label[name] = label
            since_last[name] = set()
            for other in since_last:
                if other != name:
                    since_last[other].add(name)
            step_counts[i][label] += 1
            trial_events.append(MeasurementEvent(
                step_index=i, measurement=name, outcome_label=label,
                value=float(values[name][idx]), invalidated=invalidated))
        events.append(trial_events)

    freqs = [{label: cnt / trials for label, cnt in counts.items()}
             for counts in step_counts]

    order = {}
    if with_order_effect:
        names = list(scenario.measurements)
        for i, m1 in enumerate(names):
            for m2 in names[i + 1:]:
                d1 = exact_probe_distribution(scenario, initial, [m1, m2, m1])
                d2 = exact_probe_distribution(scenario, initial, [m2, m1, m1])
                order[(m1, m2)] = total_variation(d1, d2)

    return RunReport(mode=mode, trials=trials, seed=seed,
                     scenario_name=scenario.name, script=tuple(steps),
                     initial_state=initial, events=events,
                     step_frequencies=freqs,
                     invalidation_counts={k: tuple(v) for k, v in inv_counts.items()},
                     order_effect=order)


def order_effect(scenario: Scenario, m1: str, m2: str, probe: str,
                 trials: int, seed: int) -> float:
    """Total-variation distance between the probe's sampled outcome
    distributions after (m1, m2) versus (m2, m1), same initial state."""
    for name in (m1, m2, probe):
        if name not in scenario.measurements:
            raise ScriptError(f"unknown measurement {name!r}")
    r1 = run(scenario, ExperimentScript(steps=(m1, m2, probe)), INTERACTION,
             trials, seed, with_order_effect=False)
    r2 = run(scenario, ExperimentScript(steps=(m2, m1, probe)), INTERACTION,
             trials, seed, with_order_effect=False)
    labels = scenario.measurements[probe].labels
    p = np.array([r1.step_frequencies[-1][lab] for lab in labels])
    q = np.array([r2.step_frequencies[-1][lab] for lab in labels])
    return total_variation(p, q)


def classical_fit_check(report: RunReport) -> bool:
    """True iff the run's statistics are inconsistent with any fixed-value
    (observation-mode) model: some re-measurement pair shows invalidations
    more than five standard deviations above the fixed-value prediction of
    exactly zero."""
    if report.mode == OBSERVATION:
        return False
    if report.mode != INTERACTION:
        raise ModeError(f"report has unknown mode {report.mode!r}")
    for inv, opp in report.invalidation_counts.values():
        if opp == 0 or inv == 0:
            continue
        rate = inv / opp
        sigma = math.sqrt(opp * rate * (1.0 - rate))
        if inv > 5.0 * max(sigma, 1.0):
            return True
    return False
