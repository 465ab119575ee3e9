"""Structural demonstrations of measurement incompatibility.

Conditional-probability tables for maximally incompatible pairs, the
classical-mixture failure, Fourier (mutually unbiased) bases, the exhaustive
real-sign-matrix search, phase retrieval from two moduli distributions, and
the spin-1/2 half-angle scenario.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .exceptions import DimensionError, DomainError, TableError
from .measurement import Measurement, Outcome, RandomStream, transition_probability

DETERMINISM_TOL = 1e-12
PHASE_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ConditionalTable:
    """p[i][j] = P(col_j | row_i). Columns split into per-measurement
    blocks; each block of every row sums to 1."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    p: np.ndarray
    block_size: int

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (len(self.row_labels), len(self.col_labels)):
            raise TableError("table shape does not match labels")
        if len(self.col_labels) % self.block_size != 0:
            raise TableError("columns do not split into equal blocks")
        for start in range(0, p.shape[1], self.block_size):
            sums = p[:, start:start + self.block_size].sum(axis=1)
            if np.max(np.abs(sums - 1.0)) > linalg.NORM_TOL:
                raise TableError("a conditional block does not sum to 1")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class ScanReport:
    grid_steps: int
    max_b_probability: float
    argmax_lambda: float
    reaches_determinism: bool

    def to_dict(self) -> dict:
        return {
            "parameters": {"grid_steps": self.grid_steps},
            "findings": {
                "max_b_probability": self.max_b_probability,
                "argmax_lambda": self.argmax_lambda,
            },
            "reaches_determinism": self.reaches_determinism,
        }


@dataclass(frozen=True)
class SearchReport:
    n: int
    feasible: bool
    orthogonal_count: int
    equivalence_classes: int
    candidates_total: int
    examined: int
    representatives: tuple = ()
    elapsed_seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "parameters": {"n": self.n, "candidates_total": self.candidates_total},
            "findings": {
                "orthogonal_count": self.orthogonal_count,
                "equivalence_classes": self.equivalence_classes,
                "examined": self.examined,
                "representatives": [
                    [list(map(int, row)) for row in rep] for rep in self.representatives
                ],
                "elapsed_seconds": self.elapsed_seconds,
            },
            "feasible": self.feasible,
        }


@dataclass(frozen=True, eq=False)
class PhaseRetrievalProblem:
    """Recover phases of a vector with known moduli in basis A from its
    moduli in basis B, related by a unitary change of basis."""

    moduli_a: np.ndarray
    moduli_b: np.ndarray
    basis_change: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.moduli_a, dtype=float)
        b = np.asarray(self.moduli_b, dtype=float)
        u = linalg.as_matrix(self.basis_change)
        n = a.size
        if b.size != n or u.shape != (n, n):
            raise DimensionError("moduli and basis-change sizes disagree")
        if np.any(a < 0) or np.any(b < 0):
            raise DomainError("moduli must be non-negative")
        if abs(np.sum(a**2) - 1.0) > linalg.NORM_TOL or abs(np.sum(b**2) - 1.0) > linalg.NORM_TOL:
            raise DomainError("moduli must have unit squared sum")
        if not linalg.is_unitary(u, linalg.NORM_TOL):
            raise DomainError("basis change must be unitary")
        object.__setattr__(self, "moduli_a", a)
        object.__setattr__(self, "moduli_b", b)
        object.__setattr__(self, "basis_change", u)

    @property
    def n(self) -> int:
        return self.moduli_a.size

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "moduli_a": [float(x) for x in self.moduli_a],
            "moduli_b": [float(x) for x in self.moduli_b],
            "basis_change": [
                [[float(z.real), float(z.imag)] for z in row] for row in self.basis_change
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PhaseRetrievalProblem":
        u = np.array([[complex(re, im) for re, im in row]
                      for row in data["basis_change"]])
        return cls(moduli_a=np.asarray(data["moduli_a"], dtype=float),
                   moduli_b=np.asarray(data["moduli_b"], dtype=float),
                   basis_change=u)


@dataclass(frozen=True)
class PhaseSolution:
    phases: tuple[float, ...]
    residual: float
    converged: bool
    restarts_used: int

    def to_dict(self) -> dict:
        return {
            "parameters": {"restarts_used": self.restarts_used},
            "phases": list(self.phases),
            "residuals": {"residual": self.residual},
            "converged": self.converged,
        }


def table_for_mub_pair(n: int) -> ConditionalTable:
    """The 2n x 2n conditional table of two maximally incompatible
    n-outcome measurements: Kronecker delta within a basis, uniform 1/n
    across bases."""
    if n < 2:
        raise DomainError("need at least two outcomes")
    labels = tuple(f"a{k}" for k in range(n)) + tuple(f"b{k}" for k in range(n))
    p = np.empty((2 * n, 2 * n))
    eye = np.eye(n)
    uni = np.full((n, n), 1.0 / n)
    p[:n, :n] = eye
    p[n:, n:] = eye
    p[:n, n:] = uni
    p[n:, :n] = uni
    return ConditionalTable(row_labels=labels, col_labels=labels, p=p, block_size=n)


def conditional_table(m1: Measurement, m2: Measurement) -> ConditionalTable:
    """Conditional table computed from two measurements via the Born rule:
    rows and columns are the outcomes of m1 followed by those of m2."""
    if m1.dim != m2.dim:
        raise DimensionError("measurements act on different dimensions")
    states = [o.eigenstate for o in m1.outcomes] + [o.eigenstate for o in m2.outcomes]
    labels = m1.labels + m2.labels
    k = len(states)
    p = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            p[i, j] = transition_probability(states[i], states[j])
    return ConditionalTable(row_labels=labels, col_labels=labels, p=p,
                            block_size=m1.dim)


def classical_mixture_scan(table: ConditionalTable, grid_steps: int) -> ScanReport:
    """Scan classical mixtures lam*row(a+) + (1-lam)*row(a-) of the n=2
    maximally incompatible table and report the best B-outcome probability
    any mixture achieves."""
    if table.p.shape != (4, 4) or table.block_size != 2:
        raise TableError("scan requires the 4x4 two-outcome table")
    if grid_steps < 2:
        raise DomainError("need at least two grid points")
    expected = table_for_mub_pair(2).p
    if np.max(np.abs(table.p - expected)) > linalg.NORM_TOL:
        raise TableError("scan requires the maximally incompatible table")
    lam = np.linspace(0.0, 1.0, grid_steps)
    b_block = table.p[0:2, 2:4]
    mixed = np.outer(lam, b_block[0]) + np.outer(1.0 - lam, b_block[1])
    per_lambda_max = mixed.max(axis=1)
    best = int(np.argmax(per_lambda_max))
    sup = float(per_lambda_max[best])
    return ScanReport(grid_steps=grid_steps,
                      max_b_probability=sup,
                      argmax_lambda=float(lam[best]),
                      reaches_determinism=bool(sup >= 1.0 - DETERMINISM_TOL))


def fourier_basis(n: int) -> Measurement:
    """Discrete-Fourier measurement basis, mutually unbiased against the
    standard basis; outcome j is valued j."""
    if not 2 <= n <= linalg.MAX_DIM:
        raise DomainError(f"dimension must be in [2, {linalg.MAX_DIM}]")
    k = np.arange(n)
    outcomes = []
    for j in range(n):
        v = np.exp(2j * np.pi * j * k / n) / math.sqrt(n)
        outcomes.append(Outcome(label=f"f{j}", value=float(j),
                                eigenstate=linalg.canonical_phase(v)))
    return Measurement(name=f"fourier-{n}", outcomes=tuple(outcomes))


def _row_patterns(n: int) -> np.ndarray:
    """All 2^n sign rows of length n as +-1 vectors."""
    rows = np.empty((2**n, n), dtype=np.int8)
    for r in range(2**n):
        rows[r] = [1 if (r >> (n - 1 - k)) & 1 == 0 else -1 for k in range(n)]
    return rows


def _canonical_form(mats: np.ndarray) -> list[bytes]:
    """Canonical representative bytes per matrix under row/column negation
    and permutation: the lexicographic minimum over permutations of the
    sign-normalized matrix."""
    count, n, _ = mats.shape
    best = [None] * count
    perms = list(itertools.permutations(range(n)))
    for pr in perms:
        rowperm = mats[:, pr, :]
        for pc in perms:
            b = rowperm[:, :, pc].copy()
            b *= np.sign(b[:, :, :1])          # rows: first column -> +1
            b *= np.sign(b[:, :1, :])          # columns: first row -> +1
            for i in range(count):
                key = b[i].tobytes()
                if best[i] is None or key < best[i]:
                    best[i] = key
    return best


def real_equal_modulus_search(n: int) -> SearchReport:
    """Enumerate all n x n sign matrices and report those orthogonal after
    scaling by 1/sqrt(n), up to row/column sign and permutation.

    Exhaustive for n <= 4; for n = 5 rows are extended depth-first and a
    prefix whose rows already fail pairwise orthogonality prunes every
    completion (still covering the full space)."""
    if not 2 <= n <= 5:
        raise DomainError("search supports 2 <= n <= 5")
    t0 = time.monotonic()
    rows = _row_patterns(n)
    nrows = rows.shape[0]
    orth = (rows @ rows.T) == 0
    found: list[tuple[int, ...]] = []
    examined = 0

    if n <= 4:
        for combo in itertools.product(range(nrows), repeat=n):
            examined += 1
            ok = True
            for i in range(n - 1):
                for j in range(i + 1, n):
                    if not orth[combo[i], combo[j]]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                found.append(combo)
    else:
        stack = [()]
        while stack:
            prefix = stack.pop()
            if len(prefix) == n:
                found.append(prefix)
                continue
            for r in range(nrows):
                examined += 1
                if all(orth[r, p] for p in prefix):
                    stack.append(prefix + (r,))

    classes = 0
    reps: tuple = ()
    if found:
        mats = np.stack([rows[list(c)] for c in found]).astype(np.int8)
        canon = _canonical_form(mats)
        seen: dict[bytes, int] = {}
        rep_list = []
        for i, key in enumerate(canon):
            if key not in seen:
                seen[key] = i
                rep_list.append(tuple(tuple(int(x) for x in row) for row in mats[i]))
        classes = len(seen)
        reps = tuple(rep_list)
    return SearchReport(n=n, feasible=bool(found),
                        orthogonal_count=len(found),
                        equivalence_classes=classes,
                        candidates_total=2**(n * n),
                        examined=examined,
                        representatives=reps,
                        elapsed_seconds=time.monotonic() - t0)


def _phase_residual(phi_rest: np.ndarray, problem: PhaseRetrievalProblem):
    """Squared residual between |B (a * e^{i phi})| and b, with its gradient
    in the free phases (phi_0 fixed at 0)."""
    phi = np.concatenate(([0.0], phi_rest))
    x = problem.moduli_a * np.exp(1j * phi)
    c = problem.basis_change @ x
    mag = np.abs(c)
    r = mag - problem.moduli_b
    safe = np.where(mag > 0, mag, 1.0)
    # d|c_k|/d phi_j = Re(conj(c_k)/|c_k| * i * B[k,j] * x_j)
    w = (np.conj(c) / safe)[:, None] * (1j * problem.basis_change * x[None, :])
    grad = 2.0 * (r @ w.real)
    return float(np.sum(r**2)), grad[1:]


def retrieve_phases(problem: PhaseRetrievalProblem, restarts: int,
                    rng: RandomStream) -> PhaseSolution:
    """Multi-start local minimization of the moduli mismatch; the first
    phase is pinned to 0 (global-phase convention)."""
    if problem.n > 8:
        raise DomainError("phase retrieval supports n <= 8")
    n = problem.n
    best_phi = np.zeros(n)
    best_res = math.inf
    used = 0
    for attempt in range(max(1, restarts)):
        used = attempt + 1
        if attempt == 0:
            x0 = np.zeros(n - 1)
        else:
            x0 = rng.uniform(0.0, 2.0 * np.pi, size=n - 1)
        out = minimize(_phase_residual, x0, args=(problem,), jac=True,
                       method="L-BFGS-B",
                       options={"maxiter": 500, "ftol": 1e-18, "gtol": 1e-14})
        res, _ = _phase_residual(out.x, problem)
        if res < best_res:
            best_res = res
            best_phi = np.concatenate(([0.0], np.mod(out.x, 2.0 * np.pi)))
        if best_res <= PHASE_RESIDUAL_TOL:
            break
    return PhaseSolution(phases=tuple(float(p) for p in best_phi),
                         residual=best_res,
                         converged=bool(best_res <= PHASE_RESIDUAL_TOL),
                         restarts_used=used)


def spin_state(theta_physical_degrees: float) -> np.ndarray:
    """Phase-space vector for a spin pointing at the given physical angle in
    the Z-X plane: the phase-space angle is half the physical one. Not
    canonicalized, so the double-turn sign flip stays visible."""
    half = math.radians(theta_physical_degrees) / 2.0
    return np.array([math.cos(half), math.sin(half)], dtype=np.complex128)


def spin_transition(theta_physical_degrees: float) -> float:
    """Probability of measuring spin-up along Z for a spin at the given
    physical angle; equals cos^2(theta/2)."""
    up = np.array([1.0, 0.0], dtype=np.complex128)
    return transition_probability(spin_state(theta_physical_degrees), up)
