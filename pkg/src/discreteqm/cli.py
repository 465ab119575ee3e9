"""Command-line entry point.

Exit codes: 0 success, 2 usage/input error, 3 verification or convergence
failure. Every randomized command prints its seed in the output header so
published numbers are reproducible.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import lab, simulator
from .exceptions import DomainError, ScriptError, TableError
from .scenarios import get_scenario
from .simulator import ExperimentScript
from .verify import run_suite

USAGE_ERROR = 2
CHECK_FAILED = 3


def _emit(text: str, output_path: str | None) -> None:
    if output_path:
        Path(output_path).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _json_dump(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def cmd_simulate(args) -> int:
    try:
        scenario = get_scenario(args.scenario, args.dim)
        script = ExperimentScript.parse(args.script)
        report = simulator.run(scenario, script, args.mode, args.trials, args.seed)
    except (DomainError, ScriptError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if args.format == "json":
        _emit(report.to_json(), args.output)
    elif args.format == "csv":
        _emit(report.to_csv(), args.output)
    else:
        out = io.StringIO()
        out.write(f"scenario={report.scenario_name} mode={report.mode} "
                  f"trials={report.trials} seed={report.seed}\n")
        for i, freqs in enumerate(report.step_frequencies):
            pretty = " ".join(f"{lab_}={p:.4f}" for lab_, p in sorted(freqs.items()))
            out.write(f"step {i} [{report.script[i]}]: {pretty}\n")
        for pair, rate in sorted(report.invalidation_rate.items()):
            out.write(f"invalidation {pair[0]}|{pair[1]}: {rate:.4f}\n")
        _emit(out.getvalue(), args.output)
    return 0


def cmd_verify(args) -> int:
    try:
        results = run_suite(args.suite, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if args.format == "json":
        _emit(_json_dump({"seed": args.seed,
                          "results": [r.to_dict() for r in results]}),
              args.output)
    else:
        out = io.StringIO()
        out.write(f"suite={args.suite} seed={args.seed}\n")
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            detail = f"  ({r.detail})" if r.detail else ""
            out.write(f"[{status}] {r.suite}/{r.name}{detail}\n")
        _emit(out.getvalue(), args.output)
    return 0 if all(r.passed for r in results) else CHECK_FAILED


def cmd_spin(args) -> int:
    if not 0 < args.step_degrees <= 90:
        print("error: step must be in (0, 90]", file=sys.stderr)
        return USAGE_ERROR
    rows = []
    theta = 0.0
    while theta <= 720.0 + 1e-9:
        rows.append((theta, theta / 2.0, lab.spin_transition(theta)))
        theta += args.step_degrees
    if args.format == "json":
        _emit(_json_dump({"step_degrees": args.step_degrees,
                          "rows": [{"theta_physical": t, "phase_space_angle": h,
                                    "p_z_up": p} for t, h, p in rows]}),
              args.output)
    else:
        out = io.StringIO()
        out.write("theta_physical,phase_space_angle,p_z_up\n")
        for t, h, p in rows:
            out.write(f"{t!r},{h!r},{p!r}\n")
        _emit(out.getvalue(), args.output)
    return 0


def cmd_phase_retrieve(args) -> int:
    try:
        data = json.loads(Path(args.input).read_text(encoding="utf-8"))
        problem = lab.PhaseRetrievalProblem.from_dict(data)
    except (OSError, KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed problem input: {exc}", file=sys.stderr)
        return USAGE_ERROR
    rng = np.random.default_rng(args.seed)
    solution = lab.retrieve_phases(problem, restarts=args.restarts, rng=rng)
    payload = solution.to_dict()
    payload["seed"] = args.seed
    _emit(_json_dump(payload), args.output)
    return 0 if solution.converged else CHECK_FAILED


def cmd_serve(args) -> int:
    from .service import serve

    try:
        serve(port=args.port, reveal_state=args.reveal_state,
              snapshot_path=args.snapshot, ui_dir=args.ui_dir, host=args.host)
    except OSError as exc:
        print(f"error: cannot serve on port {args.port}: {exc}", file=sys.stderr)
        return USAGE_ERROR
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discreteqm")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", default=None)

    p = sub.add_parser("simulate", help="run a scripted measurement sequence")
    p.add_argument("--scenario", required=True,
                   choices=("table1-pair", "spin-zx", "fourier-n"))
    p.add_argument("--dim", type=int, default=None,
                   help="dimension for fourier-n")
    p.add_argument("--script", required=True,
                   help="comma-separated measurement names, e.g. A,B,A")
    p.add_argument("--mode", choices=("observation", "interaction"),
                   default="interaction")
    p.add_argument("--trials", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run self-verification suites")
    p.add_argument("--suite", default="all",
                   choices=("all", "born", "mub", "real-search", "phase",
                            "spin", "simulator"))
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("spin", help="emit the spin half-angle curve")
    p.add_argument("--step-degrees", type=float, default=1.0)
    common(p)
    p.set_defaults(func=cmd_spin)

    p = sub.add_parser("phase-retrieve", help="solve a phase retrieval problem")
    p.add_argument("--input", required=True, help="problem JSON path")
    p.add_argument("--restarts", type=int, default=50)
    common(p)
    p.set_defaults(func=cmd_phase_retrieve)

    p = sub.add_parser("serve", help="host the session service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--reveal-state", action="store_true")
    p.add_argument("--snapshot", default=None,
                   help="JSON snapshot path, loaded on start and written on shutdown")
    p.add_argument("--ui-dir", default=None,
                   help="serve a static UI build from this directory")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
