"""Self-verification suites exposed through the CLI.

Each suite re-checks the structural invariants of one part of the library
and returns one named pass/fail result per check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lab, linalg, measurement as ma, simulator
from .scenarios import table1_pair
from .simulator import ExperimentScript

SUITES = ("born", "mub", "real-search", "phase", "spin", "simulator")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "passed": self.passed,
                "detail": self.detail}


def _random_measurement(dim: int, rng: np.random.Generator) -> ma.Measurement:
    u = linalg.random_unitary(dim, rng)
    values = np.sort(rng.uniform(-5.0, 5.0, size=dim))
    outcomes = tuple(
        ma.Outcome(label=f"o{k}", value=float(values[k]), eigenstate=u[:, k])
        for k in range(dim))
    return ma.Measurement(name=f"random-{dim}", outcomes=outcomes)


def verify_born(seed: int = 0, pairs: int = 200) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    worst_sum = 0.0
    worst_route = 0.0
    for _ in range(pairs):
        dim = int(rng.integers(2, 9))
        state = linalg.haar_random_state(dim, rng)
        m = _random_measurement(dim, rng)
        dist = ma.predict(state, m)
        worst_sum = max(worst_sum, abs(float(dist.probabilities.sum()) - 1.0))
        op = ma.build_operator(m)
        via_probs = float(np.dot(m.values, dist.probabilities))
        worst_route = max(worst_route, abs(ma.expectation(state, op) - via_probs))
    return [
        CheckResult("born", "predict-sums-to-one", worst_sum <= 1e-9,
                    f"max |sum-1| = {worst_sum:.3e}"),
        CheckResult("born", "expectation-two-route", worst_route <= 1e-9,
                    f"max route mismatch = {worst_route:.3e}"),
    ]


def verify_mub(max_dim: int = 64) -> list[CheckResult]:
    worst = 0.0
    for n in range(2, max_dim + 1):
        basis = lab.fourier_basis(n).basis
        dev = np.max(np.abs(np.abs(basis) ** 2 - 1.0 / n))
        worst = max(worst, float(dev))
    return [CheckResult("mub", f"fourier-unbiased-up-to-{max_dim}", worst <= 1e-9,
                        f"max | |inner|^2 - 1/n | = {worst:.3e}")]


def verify_real_search() -> list[CheckResult]:
    expected = {2: True, 3: False, 4: True, 5: False}
    results = []
    for n, want in expected.items():
        report = lab.real_equal_modulus_search(n)
        results.append(CheckResult(
            "real-search", f"n={n}-feasible={'yes' if want else 'no'}",
            report.feasible == want,
            f"orthogonal={report.orthogonal_count} classes={report.equivalence_classes} "
            f"elapsed={report.elapsed_seconds:.2f}s"))
    return results


def verify_phase(seed: int = 0, instances: int = 10) -> list[CheckResult]:
    results = []
    for n in (2, 3, 4):
        converged = 0
        for k in range(instances):
            rng = np.random.default_rng([seed, n, k])
            u = linalg.random_unitary(n, rng)
            x = linalg.haar_random_state(n, rng)
            problem = lab.PhaseRetrievalProblem(
                moduli_a=np.abs(x), moduli_b=np.abs(u @ x), basis_change=u)
            sol = lab.retrieve_phases(problem, restarts=50, rng=rng)
            converged += sol.converged
        results.append(CheckResult(
            "phase", f"planted-n={n}", converged == instances,
            f"{converged}/{instances} converged"))
    return results


def verify_spin() -> list[CheckResult]:
    worst = 0.0
    for deg in range(0, 721):
        got = lab.spin_transition(float(deg))
        want = math.cos(math.radians(deg) / 2.0) ** 2
        worst = max(worst, abs(got - want))
    flip = float(np.max(np.abs(lab.spin_state(360.0) + lab.spin_state(0.0))))
    return [
        CheckResult("spin", "half-angle-law", worst <= 1e-12,
                    f"max |P - cos^2| = {worst:.3e}"),
        CheckResult("spin", "double-turn-sign-flip", flip <= 1e-12,
                    f"|v(360) + v(0)| = {flip:.3e}"),
    ]


def verify_simulator(seed: int = 0, trials: int = 10000) -> list[CheckResult]:
    sc = table1_pair()
    obs = simulator.run(sc, ExperimentScript.parse("A,B,A,B,A"),
                        simulator.OBSERVATION, trials, seed)
    no_inval = all(inv == 0 for inv, _ in obs.invalidation_counts.values())
    inter = simulator.run(sc, ExperimentScript.parse("A,B,A"),
                          simulator.INTERACTION, trials, seed)
    inv, opp = inter.invalidation_counts[("A", "B")]
    rate = inv / opp
    sigma = 3.0 * math.sqrt(0.25 / trials)
    repeat = simulator.run(sc, ExperimentScript.parse("A,A,A"),
                           simulator.INTERACTION, trials, seed)
    repeats_clean = all(not e.invalidated
                        for trial in repeat.events for e in trial)
    return [
        CheckResult("simulator", "observation-never-invalidates", no_inval),
        CheckResult("simulator", "incompatible-invalidation-rate-half",
                    abs(rate - 0.5) <= sigma,
                    f"rate = {rate:.4f}, 3-sigma = {sigma:.4f}"),
        CheckResult("simulator", "immediate-repeat-never-invalidates", repeats_clean),
        CheckResult("simulator", "classical-model-rejected",
                    simulator.classical_fit_check(inter)),
    ]


def run_suite(suite: str, seed: int = 0) -> list[CheckResult]:
    if suite == "all":
        out: list[CheckResult] = []
        for name in SUITES:
            out.extend(run_suite(name, seed))
        return out
    if suite == "born":
        return verify_born(seed)
    if suite == "mub":
        return verify_mub()
    if suite == "real-search":
        return verify_real_search()
    if suite == "phase":
        return verify_phase(seed)
    if suite == "spin":
        return verify_spin()
    if suite == "simulator":
        return verify_simulator(seed)
    raise ValueError(f"unknown suite {suite!r}")
