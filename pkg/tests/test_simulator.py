import math

import numpy as np
import pytest

from discreteqm import simulator as sim
from discreteqm.exceptions import ModeError, ScriptError
from discreteqm.scenarios import spin_zx, table1_pair
from discreteqm.simulator import ExperimentScript

from oracles import (
    exact_invalidation_probability,
    exact_probe_tv,
    exact_step_marginals,
)


def script(text):
    return ExperimentScript.parse(text)


class TestObservationMode:
    def test_never_invalidates(self):
        sc = table1_pair()
        report = sim.run(sc, script("A,B,A,B,A,B"), sim.OBSERVATION, 2000, 17)
        assert all(inv == 0 for inv, _ in report.invalidation_counts.values())
        assert all(not e.invalidated for trial in report.events for e in trial)

    def test_hidden_values_are_stable_within_a_trial(self):
        sc = spin_zx()
        report = sim.run(sc, script("Z,X,Z,X,Z"), sim.OBSERVATION, 500, 3)
        for trial in report.events:
            per_family = {}
            for e in trial:
                per_family.setdefault(e.measurement, set()).add(e.outcome_label)
            assert all(len(v) == 1 for v in per_family.values())

    def test_first_measurement_follows_born_statistics(self):
        sc = spin_zx()  # starts along +X, so Z is a fair coin
        report = sim.run(sc, script("Z"), sim.OBSERVATION, 10_000, 5)
        assert abs(report.step_frequencies[0]["z+"] - 0.5) \
            <= 3 * math.sqrt(0.25 / 10_000)


class TestInteractionMode:
    def test_intervening_incompatible_measurement_invalidates_half(self):
        sc = table1_pair()
        report = sim.run(sc, script("A,B,A"), sim.INTERACTION, 10_000, 42)
        inv, opp = report.invalidation_counts[("A", "B")]
        assert opp == 10_000
        assert abs(inv / opp - 0.5) <= 3 * math.sqrt(0.25 / 10_000)

    def test_immediate_repeats_never_invalidate(self):
        sc = table1_pair()
        report = sim.run(sc, script("A,A,A"), sim.INTERACTION, 5000, 1)
        assert report.invalidation_counts == {}
        assert all(not e.invalidated for trial in report.events for e in trial)

    def test_repeat_outcomes_identical(self):
        sc = table1_pair()
        report = sim.run(sc, script("B,B"), sim.INTERACTION, 2000, 9)
        for trial in report.events:
            assert trial[0].outcome_label == trial[1].outcome_label

    def test_same_seed_reproduces_event_log(self):
        sc = table1_pair()
        r1 = sim.run(sc, script("A,B,A,B"), sim.INTERACTION, 200, 8)
        r2 = sim.run(sc, script("A,B,A,B"), sim.INTERACTION, 200, 8)
        assert r1.to_json() == r2.to_json()
        assert r1.to_csv() == r2.to_csv()

    def test_unknown_measurement_rejected(self):
        with pytest.raises(ScriptError):
            sim.run(table1_pair(), script("A,Q"), sim.INTERACTION, 10, 0)

    def test_unknown_mode_rejected(self):
        with pytest.raises(ModeError):
            sim.run(table1_pair(), script("A"), "daydream", 10, 0)


class TestAgainstExhaustiveOracle:
    @pytest.mark.parametrize("text", ["A", "A,B", "A,B,A", "B,A,B,A", "A,B,B,A,B"])
    def test_step_marginals_match_path_enumeration(self, text):
        sc = table1_pair()
        trials = 20_000
        report = sim.run(sc, script(text), sim.INTERACTION, trials, 23)
        exact = exact_step_marginals(sc, report.initial_state, list(script(text).steps))
        for step_freq, step_exact in zip(report.step_frequencies, exact):
            for label, p in step_exact.items():
                sigma = math.sqrt(max(p * (1 - p), 1e-12) / trials)
                assert abs(step_freq[label] - p) <= 4 * sigma

    def test_invalidation_rate_matches_oracle(self):
        sc = table1_pair()
        trials = 20_000
        report = sim.run(sc, script("A,B,A"), sim.INTERACTION, trials, 31)
        p = exact_invalidation_probability(sc, report.initial_state,
                                           ["A", "B", "A"], "A")
        assert p == pytest.approx(0.5, abs=1e-12)  # chain rule on Table 1 rows
        inv, opp = report.invalidation_counts[("A", "B")]
        assert abs(inv / opp - p) <= 4 * math.sqrt(p * (1 - p) / trials)

    def test_compatible_limit_reproduces_observation_statistics(self):
        sc = spin_zx()
        trials = 10_000
        inter = sim.run(sc, script("Z,Z,Z"), sim.INTERACTION, trials, 2)
        obs = sim.run(sc, script("Z,Z,Z"), sim.OBSERVATION, trials, 2)
        for fi, fo in zip(inter.step_frequencies, obs.step_frequencies):
            for label in fi:
                assert abs(fi[label] - fo[label]) <= 3 * math.sqrt(0.25 / trials) * 2


class TestOrderEffect:
    def test_same_measurement_twice_has_no_effect(self):
        sc = table1_pair()
        assert sim.order_effect(sc, "A", "A", "A", 5000, 4) \
            <= 3 * math.sqrt(0.25 / 5000) * 2

    def test_mub_pair_probe_marginal_washes_out(self):
        # maximal incompatibility makes the probe marginal uniform in both
        # orders; the exact oracle distance is 0
        sc = table1_pair()
        initial = sc.resolve_initial(6)
        assert exact_probe_tv(sc, initial, "A", "B", "A") == pytest.approx(0.0, abs=1e-12)
        assert sim.order_effect(sc, "A", "B", "A", 20_000, 6) \
            <= 4 * math.sqrt(0.25 / 20_000) * 2

    def test_generic_angle_pair_shows_order_dependence(self):
        # bases at 22.5 degrees are neither compatible nor maximally
        # incompatible, so the probe marginal depends on the order
        import discreteqm.measurement as ma
        c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
        a = ma.Measurement(name="A", outcomes=(
            ma.Outcome(label="a+", value=1.0, eigenstate=np.array([1.0, 0.0])),
            ma.Outcome(label="a-", value=-1.0, eigenstate=np.array([0.0, 1.0]))))
        b = ma.Measurement(name="B", outcomes=(
            ma.Outcome(label="b+", value=1.0, eigenstate=np.array([c, s])),
            ma.Outcome(label="b-", value=-1.0, eigenstate=np.array([-s, c]))))
        sc = sim.Scenario(name="tilted", dim=2, measurements={"A": a, "B": b},
                          initial_state=np.array([c, s]))
        exact = exact_probe_tv(sc, sc.resolve_initial(0), "A", "B", "A")
        assert exact > 0.05
        est = sim.order_effect(sc, "A", "B", "A", 40_000, 11)
        assert abs(est - exact) <= 4 * math.sqrt(0.25 / 40_000) * 2

    def test_unknown_probe_rejected(self):
        with pytest.raises(ScriptError):
            sim.order_effect(table1_pair(), "A", "B", "Q", 10, 0)


class TestClassicalFitCheck:
    def test_observation_report_fits_classical_model(self):
        report = sim.run(table1_pair(), script("A,B,A"), sim.OBSERVATION, 2000, 1)
        assert not sim.classical_fit_check(report)

    def test_interaction_report_rejects_classical_model(self):
        report = sim.run(table1_pair(), script("A,B,A"), sim.INTERACTION, 10_000, 1)
        assert sim.classical_fit_check(report)

    def test_compatible_only_script_fits(self):
        report = sim.run(table1_pair(), script("A,A,A,A"), sim.INTERACTION, 5000, 1)
        assert not sim.classical_fit_check(report)


class TestReportSerialization:
    def test_frequencies_sum_to_one_per_step(self):
        report = sim.run(table1_pair(), script("A,B,A"), sim.INTERACTION, 500, 0)
        for freqs in report.step_frequencies:
            assert sum(freqs.values()) == pytest.approx(1.0, abs=1e-9)

    def test_csv_layout(self):
        report = sim.run(table1_pair(), script("A,B"), sim.INTERACTION, 3, 0)
        lines = report.to_csv().splitlines()
        assert lines[0] == "# seed=0"
        assert lines[1] == "trial,step,measurement,outcome,value,invalidated_count"
        assert len(lines) == 2 + 3 * 2
