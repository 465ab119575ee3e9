"""Measurements as value-labeled orthonormal bases.

Born-rule transition probabilities, collapse, sampling, compatibility,
operator construction and expectation values. A measurement is defined
spectrally: the outcomes are the source of truth, the Hermitian operator
is a derived view.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .exceptions import (
    DegenerateSpectrumError,
    DimensionError,
    ImpossibleOutcomeError,
    NotHermitianError,
)
from .linalg import HERMITIAN_TOL, NORM_TOL, ORTHO_TOL, as_matrix, as_state

# Probabilities below this are treated as structural zeros when sampling,
# so repeatability holds exactly rather than up to float residue.
PROB_FLOOR = 1e-15

DEGENERACY_GAP = 1e-8

RandomStream = np.random.Generator


@dataclass(frozen=True, eq=False)
class Outcome:
    label: str
    value: float
    eigenstate: np.ndarray

    def __post_init__(self):
        state = as_state(self.eigenstate)
        if not linalg.is_physical_state(state, NORM_TOL):
            raise ValueError(f"outcome {self.label!r}: eigenstate is not unit-norm")
        object.__setattr__(self, "eigenstate", state)


@dataclass(frozen=True, eq=False)
class Measurement:
    name: str
    outcomes: tuple[Outcome, ...]

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        object.__setattr__(self, "outcomes", outcomes)
        dims = {o.eigenstate.size for o in outcomes}
        if len(dims) != 1 or len(outcomes) != dims.pop():
            raise DimensionError(
                f"measurement {self.name!r}: need exactly dim outcomes of equal dim")
        labels = [o.label for o in outcomes]
        if len(set(labels)) != len(labels):
            raise ValueError(f"measurement {self.name!r}: duplicate outcome labels")
        basis = self.basis
        gram = basis.conj().T @ basis
        if np.max(np.abs(gram - np.eye(self.dim))) > ORTHO_TOL:
            raise ValueError(
                f"measurement {self.name!r}: eigenstates are not an orthonormal basis")

    @property
    def dim(self) -> int:
        return len(self.outcomes)

    @property
    def basis(self) -> np.ndarray:
        """Eigenstates as columns, in declared outcome order."""
        return np.column_stack([o.eigenstate for o in self.outcomes])

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(o.label for o in self.outcomes)

    @property
    def values(self) -> np.ndarray:
        return np.array([o.value for o in self.outcomes], dtype=float)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise DimensionError("operator matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise NotHermitianError("operator matrix is not Hermitian")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    labels: tuple[str, ...]
    probabilities: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.size != len(self.labels):
            raise DimensionError("labels and probabilities differ in length")
        if np.any(p < -NORM_TOL) or abs(p.sum() - 1.0) > NORM_TOL:
            raise ValueError("probabilities must be in [0,1] and sum to 1")
        object.__setattr__(self, "probabilities", np.clip(p, 0.0, 1.0))

    def entries(self) -> list[tuple[str, float]]:
        return list(zip(self.labels, (float(x) for x in self.probabilities)))

    def __getitem__(self, label: str) -> float:
        return float(self.probabilities[self.labels.index(label)])


def transition_probability(from_state, to_state) -> float:
    """Born rule: squared modulus of the inner product of unit states."""
    p = abs(linalg.inner_product(to_state, from_state)) ** 2
    return float(min(p, 1.0))


def predict(state, m: Measurement) -> OutcomeDistribution:
    state = as_state(state)
    if state.size != m.dim:
        raise DimensionError(
            f"state dim {state.size} does not match measurement dim {m.dim}")
    amp = m.basis.conj().T @ state
    probs = np.minimum(np.abs(amp) ** 2, 1.0)
    return OutcomeDistribution(labels=m.labels, probabilities=probs)


def collapse(state, m: Measurement, outcome_index: int) -> np.ndarray:
    dist = predict(state, m)
    if dist.probabilities[outcome_index] <= PROB_FLOOR:
        raise ImpossibleOutcomeError(
            f"outcome {m.labels[outcome_index]!r} has zero probability")
    return linalg.canonical_phase(m.outcomes[outcome_index].eigenstate)


def sample(state, m: Measurement, rng: RandomStream) -> tuple[int, np.ndarray]:
    """Draw an outcome by inverse CDF over outcomes in declared order;
    returns (outcome index, collapsed state)."""
    dist = predict(state, m)
    probs = dist.probabilities.copy()
    probs[probs < PROB_FLOOR] = 0.0
    probs /= probs.sum()
    cum = np.cumsum(probs)
    idx = int(np.searchsorted(cum, rng.random(), side="right"))
    idx = min(idx, m.dim - 1)
    return idx, linalg.canonical_phase(m.outcomes[idx].eigenstate)


def are_compatible(m1: Measurement, m2: Measurement, tol: float = ORTHO_TOL) -> bool:
    """True iff the outcome eigenstates match up to a bijection (shared set
    of final states)."""
    if m1.dim != m2.dim:
        raise DimensionError("measurements act on different dimensions")
    overlap = np.abs(m1.basis.conj().T @ m2.basis) ** 2
    matched = overlap >= 1.0 - tol
    # orthonormality makes matches exclusive, so a perfect matching exists
    # iff every row and column contains a match
    return bool(np.all(matched.any(axis=0)) and np.all(matched.any(axis=1)))


def build_operator(m: Measurement) -> HermitianOperator:
    """Value-weighted sum of outcome projectors."""
    basis = m.basis
    a = (basis * m.values) @ basis.conj().T
    return HermitianOperator(matrix=(a + a.conj().T) / 2.0)


def measurement_from_operator(op: HermitianOperator, labels) -> Measurement:
    labels = tuple(labels)
    if len(labels) != op.dim:
        raise DimensionError("need one label per dimension")
    decomp = linalg.hermitian_eigen(op.matrix)
    gaps = np.diff(decomp.eigenvalues)
    if decomp.dim > 1 and np.min(gaps) <= DEGENERACY_GAP:
        raise DegenerateSpectrumError(
            "eigenvalues are not pairwise separated; degenerate spectra are unsupported")
    outcomes = tuple(
        Outcome(label=labels[i],
                value=float(decomp.eigenvalues[i]),
                eigenstate=decomp.eigenvectors[:, i])
        for i in range(op.dim))
    return Measurement(name="from-operator", outcomes=outcomes)


def expectation(state, op: HermitianOperator) -> float:
    state = as_state(state)
    if state.size != op.dim:
        raise DimensionError("state and operator dims differ")
    return float(np.vdot(state, op.matrix @ state).real)
