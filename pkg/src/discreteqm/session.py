"""Live measurement sessions: one simulated system plus its measurement
history. Pure library logic; the HTTP layer wraps this without adding any
randomness, so a (scenario, seed, action list) triple replays exactly.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import measurement as ma
from .exceptions import ScriptError
from .simulator import MeasurementEvent, Scenario


@dataclass(eq=False)
class SessionCore:
    scenario: Scenario
    seed: int
    created_at: float = field(default_factory=time.time)

    def __post_init__(self):
        self._rng = np.random.default_rng(self.seed)
        if isinstance(self.scenario.initial_state, str):
            z = self._rng.standard_normal(self.scenario.dim) \
                + 1j * self._rng.standard_normal(self.scenario.dim)
            from .linalg import normalize
            self.initial_state = normalize(z)
        else:
            self.initial_state = self.scenario.initial_state
        self.current_state = self.initial_state
        self.history: list[MeasurementEvent] = []
        self._last_label: dict[str, str] = {}
        self._since_last: dict[str, set[str]] = {}

    def perform(self, name: str) -> MeasurementEvent:
        if name not in self.scenario.measurements:
            raise ScriptError(f"unknown measurement {name!r}")
        m = self.scenario.measurements[name]
        idx, collapsed = ma.sample(self.current_state, m, self._rng)
        self.current_state = collapsed
        label = m.labels[idx]
        invalidated: tuple[tuple[str, str, str], ...] = ()
        if name in self._last_label and label != self._last_label[name]:
            invalidated = ((name, self._last_label[name], label),)
        self._last_label[name] = label
        self._since_last[name] = set()
        for other in self._since_last:
            if other != name:
                self._since_last[other].add(name)
        event = MeasurementEvent(step_index=len(self.history), measurement=name,
                                 outcome_label=label,
                                 value=float(m.values[idx]),
                                 invalidated=invalidated)
        self.history.append(event)
        return event

    def predictions(self) -> dict[str, dict[str, float]]:
        out = {}
        for name, m in self.scenario.measurements.items():
            dist = ma.predict(self.current_state, m)
            out[name] = {label: float(p) for label, p in dist.entries()}
        return out

    def view(self, session_id: str, reveal_state: bool = False) -> dict:
        body = {
            "id": session_id,
            "scenario": self.scenario.name,
            "dim": self.scenario.dim,
            "seed": self.seed,
            "measurements": [
                {"name": name,
                 "outcomes": [
                     {"label": o.label, "value": float(o.value)}
                     for o in m.outcomes],
                 "predicted": self.predictions()[name]}
                for name, m in self.scenario.measurements.items()
            ],
            "history": [e.to_dict() for e in self.history],
        }
        if reveal_state:
            body["state"] = [[float(z.real), float(z.imag)]
                             for z in self.current_state]
        return body

    def history_json(self) -> str:
        return json.dumps([e.to_dict() for e in self.history], sort_keys=True)


def replay(scenario: Scenario, seed: int, measurement_names: list[str]) -> SessionCore:
    """Re-run a recorded session through the library alone."""
    core = SessionCore(scenario=scenario, seed=seed)
    for name in measurement_names:
        core.perform(name)
    return core
