"""Complex linear algebra substrate.

States are 1-D complex128 numpy arrays; matrices are 2-D complex128 arrays.
A physical state is unit-norm and, after canonicalization, has its first
significant component real and positive (a fixed representative of the ray).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    ConvergenceError,
    DimensionError,
    NotHermitianError,
    ZeroVectorError,
)

# Single source of truth for the package's tolerances.
NORM_TOL = 1e-9
ORTHO_TOL = 1e-9
CANON_TOL = 1e-12

HERMITIAN_TOL = 1e-10
MAX_DIM = 64

_JACOBI_MAX_SWEEPS = 100
_JACOBI_REL_OFF_TOL = 1e-12


def as_state(amplitudes) -> np.ndarray:
    """Coerce to a 1-D complex vector, rejecting NaN/inf entries."""
    v = np.asarray(amplitudes, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError("state must be a non-empty 1-D vector")
    if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
        raise ValueError("state contains non-finite amplitudes")
    return v


def as_matrix(entries) -> np.ndarray:
    m = np.asarray(entries, dtype=np.complex128)
    if m.ndim != 2 or m.size == 0:
        raise DimensionError("matrix must be a non-empty 2-D array")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix contains non-finite entries")
    return m


def inner_product(a, b) -> complex:
    """Hermitian inner product, conjugate-linear in the first argument."""
    a = as_state(a)
    b = as_state(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.size} vs {b.size}")
    return complex(np.vdot(a, b))


def squared_norm(a) -> float:
    a = as_state(a)
    return float(np.vdot(a, a).real)


def is_physical_state(a, tol: float = NORM_TOL) -> bool:
    return abs(squared_norm(a) - 1.0) <= tol


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first component with modulus above
    CANON_TOL is real and positive."""
    v = as_state(v)
    significant = np.flatnonzero(np.abs(v) > CANON_TOL)
    if significant.size == 0:
        return v.copy()
    lead = v[significant[0]]
    return v * (abs(lead) / lead)


def normalize(a) -> np.ndarray:
    """Unit-norm, canonical-phase representative of the ray through `a`."""
    v = as_state(a)
    n2 = squared_norm(v)
    if n2 <= CANON_TOL**2:
        raise ZeroVectorError("cannot normalize a (near-)zero vector")
    return canonical_phase(v / math.sqrt(n2))


def is_unitary(m, tol: float = NORM_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError("unitarity is only defined for square matrices")
    dev = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(dev)) <= tol)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues in ascending order with matching orthonormal eigenvectors
    (columns of `eigenvectors`, each canonical-phase)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero out a[p, q] (and a[q, p]) with a complex Givens rotation,
    accumulating the transform into v."""
    apq = a[p, q]
    mod = abs(apq)
    u = apq / mod
    app = a[p, p].real
    aqq = a[q, q].real
    if app == aqq:
        t = 1.0
    else:
        tau = (app - aqq) / (2.0 * mod)
        t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(tau, 1.0))
    c = 1.0 / math.hypot(t, 1.0)
    s = t * c
    rot = np.array([[c, -s * u], [s * np.conj(u), c]], dtype=np.complex128)
    idx = [p, q]
    a[:, idx] = a[:, idx] @ rot
    a[idx, :] = rot.conj().T @ a[idx, :]
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ rot


def hermitian_eigen(m) -> EigenDecomposition:
    """Eigendecomposition of a dense complex Hermitian matrix by cyclic
    Jacobi sweeps (dims up to MAX_DIM)."""
    a = as_matrix(m).copy()
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise DimensionError("eigendecomposition requires a square matrix")
    if n > MAX_DIM:
        raise DimensionError(f"dimension {n} exceeds supported maximum {MAX_DIM}")
    if np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL:
        raise NotHermitianError("matrix is not Hermitian within tolerance")

    v = np.eye(n, dtype=np.complex128)
    fro = float(np.linalg.norm(a))
    target = _JACOBI_REL_OFF_TOL * fro
    converged = fro == 0.0 or n == 1

    def off_norm() -> float:
        # Measured directly from the off-diagonal entries; computing it as
        # sqrt(||A||^2 - ||diag||^2) cancels catastrophically and stalls
        # around sqrt(eps)*||A|| once the matrix is nearly diagonal.
        return float(np.linalg.norm(a - np.diag(np.diagonal(a))))

    for _ in range(_JACOBI_MAX_SWEEPS):
        if off_norm() <= target:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > target / n:
                    _jacobi_rotate(a, v, p, q)
    else:
        converged = off_norm() <= target
    if not converged:
        raise ConvergenceError("Jacobi sweeps did not converge")

    values = np.diagonal(a).real.copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    for k in range(n):
        vectors[:, k] = canonical_phase(vectors[:, k])
    return EigenDecomposition(eigenvalues=values, eigenvectors=vectors)


def haar_random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform ray representative in `dim` dimensions."""
    if dim < 1:
        raise DimensionError("dimension must be positive")
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return normalize(z)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
