"""Built-in named scenarios for the CLI, service and tests."""
from __future__ import annotations

import math

import numpy as np

from .exceptions import DomainError
from .lab import fourier_basis
from .measurement import Measurement, Outcome
from .simulator import Scenario

_SQ2 = math.sqrt(0.5)


def _basis_measurement(name: str, columns, labels, values) -> Measurement:
    cols = np.asarray(columns, dtype=np.complex128)
    outcomes = tuple(
        Outcome(label=lab, value=float(val), eigenstate=cols[:, k])
        for k, (lab, val) in enumerate(zip(labels, values)))
    return Measurement(name=name, outcomes=outcomes)


def table1_pair() -> Scenario:
    """Two maximally incompatible binary measurements: A on the standard
    basis, B on the 45-degree basis."""
    a = _basis_measurement("A", np.eye(2), ("a+", "a-"), (1.0, -1.0))
    b = _basis_measurement("B", [[_SQ2, _SQ2], [_SQ2, -_SQ2]],
                           ("b+", "b-"), (1.0, -1.0))
    return Scenario(name="table1-pair", dim=2,
                    measurements={"A": a, "B": b},
                    initial_state="haar_random")


def spin_zx() -> Scenario:
    """Spin-1/2 restricted to the Z-X plane, starting along +X."""
    z = _basis_measurement("Z", np.eye(2), ("z+", "z-"), (1.0, -1.0))
    x = _basis_measurement("X", [[_SQ2, _SQ2], [_SQ2, -_SQ2]],
                           ("x+", "x-"), (1.0, -1.0))
    return Scenario(name="spin-zx", dim=2,
                    measurements={"Z": z, "X": x},
                    initial_state=np.array([_SQ2, _SQ2]))


def fourier_n(dim: int) -> Scenario:
    """Standard basis vs its discrete-Fourier partner in `dim` dimensions."""
    if dim < 2:
        raise DomainError("fourier-n needs dim >= 2")
    z = _basis_measurement("Z", np.eye(dim),
                           tuple(f"z{k}" for k in range(dim)),
                           tuple(float(k) for k in range(dim)))
    f = fourier_basis(dim)
    f = Measurement(name="F", outcomes=f.outcomes)
    return Scenario(name=f"fourier-{dim}", dim=dim,
                    measurements={"Z": z, "F": f},
                    initial_state="haar_random")


def get_scenario(name: str, dim: int | None = None) -> Scenario:
    if name == "table1-pair":
        return table1_pair()
    if name == "spin-zx":
        return spin_zx()
    if name == "fourier-n":
        return fourier_n(dim if dim is not None else 3)
    raise DomainError(f"unknown scenario {name!r}")


def scenario_descriptors() -> list[dict]:
    return [
        {"name": "table1-pair", "dim": 2, "measurements": ["A", "B"],
         "description": "Two maximally incompatible binary measurements."},
        {"name": "spin-zx", "dim": 2, "measurements": ["Z", "X"],
         "description": "Spin-1/2 in the Z-X plane, starting along +X."},
        {"name": "fourier-n", "dim": None, "measurements": ["Z", "F"],
         "description": "Standard basis vs Fourier basis; takes a dim parameter (default 3)."},
    ]
