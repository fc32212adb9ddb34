"""Dense complex linear-algebra primitives shared by every other module.

All tolerance-sensitive comparisons in the package are routed through a
single :class:`TolerancePolicy` so that assertions are reproducible across
modules.  Everything here operates on plain ``numpy`` arrays: vectors are
1-d complex arrays, operators are square 2-d complex arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

#: Hard cap on operator dimension.  All intended instances fit comfortably
#: below this; anything above it is almost certainly a configuration error.
DIM_CAP = 5000


class DimensionCapError(ValueError):
    """Raised when a requested dense operator would exceed DIM_CAP."""


class NonUnitaryError(ValueError):
    """Raised when a matrix expected to be unitary is not."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Shared numerical thresholds.

    rank_tol governs numerical-rank decisions, assert_tol governs
    pass/fail residual checks, eig_cluster_tol governs grouping of
    numerically split eigenphases.
    """

    rank_tol: float = 1e-10
    assert_tol: float = 1e-8
    eig_cluster_tol: float = 1e-9

    def __post_init__(self):
        if not (0.0 < self.rank_tol <= self.assert_tol):
            raise ValueError("require 0 < rank_tol <= assert_tol")


DEFAULT_TOL = TolerancePolicy()


def check_dim(dim: int) -> None:
    if dim <= 0:
        raise ValueError(f"dimension must be positive, got {dim}")
    if dim > DIM_CAP:
        raise DimensionCapError(f"dimension {dim} exceeds cap {DIM_CAP}")


@dataclass(frozen=True)
class Projector:
    """An orthogonal projector with its numerical rank."""

    matrix: np.ndarray
    rank: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def idempotency_residual(self) -> float:
        return float(np.max(np.abs(self.matrix @ self.matrix - self.matrix)))

    def check(self, tol: TolerancePolicy = DEFAULT_TOL) -> None:
        if self.hermiticity_residual() > tol.assert_tol:
            raise ValueError("projector is not Hermitian within tolerance")
        if self.idempotency_residual() > tol.assert_tol:
            raise ValueError("projector is not idempotent within tolerance")


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenphases and orthonormal eigenvectors of a unitary.

    phases[j] in (-pi, pi] and vectors[:, j] satisfy
    U @ vectors[:, j] == exp(1j * phases[j]) * vectors[:, j].
    """

    phases: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * np.exp(1j * self.phases)) @ self.vectors.conj().T


def _as_matrix(vectors, dim_hint: int | None = None) -> np.ndarray:
    """Stack a list of 1-d vectors as columns of a complex matrix."""
    if len(vectors) == 0:
        dim = 0 if dim_hint is None else dim_hint
        return np.zeros((dim, 0), dtype=complex)
    cols = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    dims = {c.shape[0] for c in cols}
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch among input vectors: {sorted(dims)}")
    return np.stack(cols, axis=1)


def orthonormalize(vectors, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as matrix columns) for the span of the inputs.

    Uses modified Gram-Schmidt with greedy column pivoting and one
    reorthogonalization pass.  A candidate is kept while its residual norm
    exceeds rank_tol times the largest input column norm, so the column
    count equals the numerical rank.
    """
    a = _as_matrix(vectors)
    dim, n = a.shape
    if n == 0:
        return a
    check_dim(dim)
    threshold = tol.rank_tol * float(np.max(np.linalg.norm(a, axis=0)))
    basis: list[np.ndarray] = []
    remaining = a.copy()
    alive = list(range(n))
    while alive:
        norms = np.linalg.norm(remaining[:, alive], axis=0)
        best = int(np.argmax(norms))
        if norms[best] <= threshold:
            break
        col = alive.pop(best)
        q = remaining[:, col]
        # second projection pass keeps orthogonality loss near roundoff
        for _ in range(2):
            for b in basis:
                q = q - b * (b.conj() @ q)
        nq = np.linalg.norm(q)
        if nq <= threshold:
            continue
        q = q / nq
        basis.append(q)
        for col2 in alive:
            remaining[:, col2] -= q * (q.conj() @ remaining[:, col2])
    if not basis:
        return np.zeros((dim, 0), dtype=complex)
    return np.stack(basis, axis=1)


def projector_from_set(vectors, tol: TolerancePolicy = DEFAULT_TOL,
                       dim: int | None = None) -> Projector:
    """Orthogonal projector onto the span of the given vectors."""
    a = _as_matrix(vectors, dim_hint=dim)
    if a.shape[1] == 0:
        if a.shape[0] == 0:
            raise ValueError("empty vector set with unknown dimension; pass dim=")
        return Projector(np.zeros((a.shape[0], a.shape[0]), dtype=complex), 0)
    q = orthonormalize(vectors, tol)
    return Projector(q @ q.conj().T, q.shape[1])


def reflection(p: Projector) -> np.ndarray:
    """The reflection 2P - I through the range of P."""
    return 2.0 * p.matrix - np.eye(p.dim, dtype=complex)


def unitarity_residual(u: np.ndarray) -> float:
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def unitary_eig(u: np.ndarray, tol: TolerancePolicy = DEFAULT_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a unitary matrix.

    Goes through a complex Schur factorization: for a normal matrix the
    Schur form is diagonal up to roundoff and the Schur basis is exactly
    orthonormal, which is what downstream overlap computations need.
    """
    u = np.asarray(u, dtype=complex)
    check_dim(u.shape[0])
    if unitarity_residual(u) > tol.assert_tol:
        raise NonUnitaryError("input matrix is not unitary within tolerance")
    t, q = scipy.linalg.schur(u, output="complex")
    phases = np.angle(np.diagonal(t))
    phases = np.where(phases <= -np.pi + 1e-300, np.pi, phases)
    dec = SpectralDecomposition(phases=phases, vectors=q)
    resid = float(np.max(np.abs(dec.reconstruct() - u)))
    if resid > tol.assert_tol:
        raise NonUnitaryError(f"spectral reconstruction residual {resid:.3e} too large")
    return dec


def cluster_phases(phases: np.ndarray, cluster_tol: float) -> list[np.ndarray]:
    """Group sorted phase indices into clusters closer than cluster_tol."""
    order = np.argsort(phases)
    clusters: list[list[int]] = []
    for idx in order:
        if clusters and abs(phases[idx] - phases[clusters[-1][-1]]) <= cluster_tol:
            clusters[-1].append(int(idx))
        else:
            clusters.append([int(idx)])
    return [np.array(c) for c in clusters]
