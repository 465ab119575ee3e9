"""Acceptance gate: one test per acceptance criterion, each printing a
single PASS/FAIL line. Tolerances are pinned here, not configurable."""
import json
import math
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from discreteqm import lab, linalg, measurement as ma, simulator as sim
from discreteqm.scenarios import get_scenario, table1_pair
from discreteqm.service import create_app
from discreteqm.session import replay
from discreteqm.simulator import ExperimentScript

from oracles import exact_step_marginals


def report(name: str, passed: bool, detail: str = ""):
    status = "PASS" if passed else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"ACCEPTANCE {name}: {status}{suffix}")
    assert passed, f"{name}: {detail}"


def random_measurement(dim, rng):
    u = linalg.random_unitary(dim, rng)
    vals = np.sort(rng.uniform(-5, 5, dim))
    return ma.Measurement(name=f"r{dim}", outcomes=tuple(
        ma.Outcome(label=f"o{k}", value=float(vals[k]), eigenstate=u[:, k])
        for k in range(dim)))


def test_born_rule_suite():
    rng = np.random.default_rng(0)
    worst_sum = worst_route = 0.0
    for _ in range(1000):
        dim = int(rng.integers(2, 9))
        state = linalg.haar_random_state(dim, rng)
        m = random_measurement(dim, rng)
        dist = ma.predict(state, m)
        worst_sum = max(worst_sum, abs(float(dist.probabilities.sum()) - 1.0))
        via_op = ma.expectation(state, ma.build_operator(m))
        via_probs = float(np.dot(m.values, dist.probabilities))
        worst_route = max(worst_route, abs(via_op - via_probs))
    report("born-rule-suite", worst_sum <= 1e-9 and worst_route <= 1e-9,
           f"max|sum-1|={worst_sum:.2e}, max route gap={worst_route:.2e}")


def test_repeatability_is_exact():
    rng = np.random.default_rng(1)
    agreements = 0
    total = 10_000
    for _ in range(total):
        dim = int(rng.integers(2, 5))
        m = random_measurement(dim, rng)
        state = linalg.haar_random_state(dim, rng)
        idx1, collapsed = ma.sample(state, m, rng)
        idx2, _ = ma.sample(collapsed, m, rng)
        agreements += idx1 == idx2
    report("repeatability", agreements == total, f"{agreements}/{total} agreed")


def test_table1_reproduction():
    sc = table1_pair()
    table = lab.conditional_table(sc.measurements["A"], sc.measurements["B"])
    expected = np.array([
        [1.0, 0.0, 0.5, 0.5],
        [0.0, 1.0, 0.5, 0.5],
        [0.5, 0.5, 1.0, 0.0],
        [0.5, 0.5, 0.0, 1.0],
    ])
    dev = float(np.max(np.abs(table.p - expected)))
    report("table1-reproduction", dev <= 1e-12, f"max deviation={dev:.2e}")


def test_classical_mixture_failure():
    scan = lab.classical_mixture_scan(lab.table_for_mub_pair(2), 100_000)
    sc = table1_pair()
    a = sc.measurements["A"]
    superposed = linalg.normalize(a.outcomes[0].eigenstate + a.outcomes[1].eigenstate)
    quantum = ma.predict(superposed, sc.measurements["B"])["b+"]
    report("classical-mixture-failure",
           scan.max_b_probability == pytest.approx(0.5, abs=1e-12)
           and not scan.reaches_determinism
           and quantum == pytest.approx(1.0, abs=1e-12),
           f"classical sup={scan.max_b_probability}, quantum={quantum}")


def test_real_impossibility_search():
    want = {2: True, 3: False, 4: True, 5: False}
    got = {}
    timings = {}
    for n in want:
        t0 = time.monotonic()
        r = lab.real_equal_modulus_search(n)
        timings[n] = time.monotonic() - t0
        got[n] = r.feasible
        if n == 3:
            assert r.examined == 512
    ok = got == want and timings[3] < 1.0 and timings[5] < 120.0
    report("real-impossibility", ok,
           f"feasibility={got}, t3={timings[3]:.3f}s, t5={timings[5]:.3f}s")


def test_mub_property_up_to_64():
    worst = 0.0
    for n in range(2, 65):
        basis = lab.fourier_basis(n).basis
        worst = max(worst, float(np.max(np.abs(np.abs(basis) ** 2 - 1.0 / n))))
    report("mub-property", worst <= 1e-9, f"max | |inner|^2 - 1/n |={worst:.2e}")


def test_spin_half_angle():
    worst = 0.0
    for deg in range(0, 721):
        worst = max(worst, abs(lab.spin_transition(float(deg))
                               - math.cos(math.radians(deg) / 2.0) ** 2))
    flip = float(np.max(np.abs(lab.spin_state(360.0) + lab.spin_state(0.0))))
    report("spin-half-angle", worst <= 1e-12 and flip <= 1e-12,
           f"max law gap={worst:.2e}, |v(360)+v(0)|={flip:.2e}")


def test_eigensolver_planted_spectra():
    rng = np.random.default_rng(2)
    worst_spec = worst_recon = 0.0
    for _ in range(500):
        dim = int(rng.integers(2, 17))
        u = linalg.random_unitary(dim, rng)
        planted = np.sort(rng.uniform(-10, 10, dim))
        h = (u * planted) @ u.conj().T
        h = (h + h.conj().T) / 2
        decomp = linalg.hermitian_eigen(h)
        worst_spec = max(worst_spec,
                         float(np.max(np.abs(decomp.eigenvalues - planted))))
        worst_recon = max(worst_recon,
                          float(np.max(np.abs(decomp.reconstruct() - h))))
    report("eigensolver", worst_spec <= 1e-8 and worst_recon <= 1e-8,
           f"max spectrum gap={worst_spec:.2e}, max recon gap={worst_recon:.2e}")


def test_simulator_matches_exhaustive_oracle():
    sc = table1_pair()
    trials = 100_000
    worst_z = 0.0
    for text in ("A,B,A", "B,A,B,A", "A,B,B,A,B"):
        script = ExperimentScript.parse(text)
        run_report = sim.run(sc, script, sim.INTERACTION, trials, 37,
                             with_order_effect=False)
        exact = exact_step_marginals(sc, run_report.initial_state,
                                     list(script.steps))
        for freqs, exact_step in zip(run_report.step_frequencies, exact):
            for label, p in exact_step.items():
                sigma = math.sqrt(max(p * (1.0 - p), 1e-12) / trials)
                z = abs(freqs[label] - p) / sigma if sigma else 0.0
                worst_z = max(worst_z, z)
    obs = sim.run(sc, ExperimentScript.parse("A,B,A,B,A"), sim.OBSERVATION,
                  20_000, 41, with_order_effect=False)
    zero_inval = all(inv == 0 for inv, _ in obs.invalidation_counts.values())
    report("simulator-vs-oracle", worst_z <= 4.0 and zero_inval,
           f"worst z-score={worst_z:.2f}, observation invalidations zero={zero_inval}")


def test_phase_retrieval_planted_battery():
    results = {}
    for n in (2, 3, 4):
        converged = 0
        for k in range(100):
            rng = np.random.default_rng([n, k])
            u = linalg.random_unitary(n, rng)
            x = linalg.haar_random_state(n, rng)
            problem = lab.PhaseRetrievalProblem(
                moduli_a=np.abs(x), moduli_b=np.abs(u @ x), basis_change=u)
            converged += lab.retrieve_phases(problem, 50, rng).converged
        results[n] = converged
    report("phase-retrieval", all(v >= 99 for v in results.values()),
           f"converged per n: {results}")


def test_service_replay_byte_identical():
    actions = ["A", "B", "A", "A", "B", "B", "A"]
    with TestClient(create_app()) as client:
        view = client.post("/api/sessions",
                           json={"scenario": "table1-pair", "seed": 2024}).json()
        sid = view["id"]
        for name in actions:
            client.post(f"/api/sessions/{sid}/measurements",
                        json={"measurement": name})
        service_history = json.dumps(
            client.get(f"/api/sessions/{sid}").json()["history"], sort_keys=True)
    library_history = json.dumps(
        [e.to_dict() for e in replay(get_scenario("table1-pair"), 2024,
                                     actions).history],
        sort_keys=True)
    report("service-replay",
           service_history.encode() == library_history.encode(),
           f"{len(actions)} actions replayed")
