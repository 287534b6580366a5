"""Linear subspaces of C^n and the gap metric between them.

A subspace is stored as an orthonormal column basis; the zero subspace is
the n x 0 matrix.  The gap distance is the spectral norm of the
difference of orthogonal projectors, which metrizes the usual topology
on the full Grassmannian: distance strictly below 1 forces equal
dimensions.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError, ValidationError

_ORTHO_TOL = 1e-10


class Subspace:
    """An orthonormal-basis representation of a subspace of C^n."""

    __slots__ = ("basis",)

    def __init__(self, basis: np.ndarray):
        basis = np.asarray(basis, dtype=complex)
        if basis.ndim != 2:
            raise ShapeError("basis must be a 2-d array (columns span the subspace)")
        n, k = basis.shape
        if k > n:
            raise ShapeError(f"{k} columns cannot be independent in C^{n}")
        if k > 0:
            gram = basis.conj().T @ basis
            if np.max(np.abs(gram - np.eye(k))) > _ORTHO_TOL:
                raise ValidationError(
                    "basis is not orthonormal; use Subspace.from_spanning to orthonormalize"
                )
        self.basis = basis

    @staticmethod
    def from_spanning(vectors: np.ndarray, tol: float = 1e-10) -> "Subspace":
        """Orthonormalize a (possibly dependent) spanning set via SVD."""
        vectors = np.asarray(vectors, dtype=complex)
        if vectors.ndim == 1:
            vectors = vectors.reshape(-1, 1)
        if vectors.ndim != 2:
            raise ShapeError("spanning set must be a 2-d array")
        n = vectors.shape[0]
        if vectors.shape[1] == 0:
            return Subspace(np.zeros((n, 0), dtype=complex))
        u, s, _ = np.linalg.svd(vectors, full_matrices=False)
        smax = s[0] if len(s) else 0.0
        if smax <= tol:
            return Subspace(np.zeros((n, 0), dtype=complex))
        rank = int(np.sum(s > tol * max(1.0, smax)))
        return Subspace(u[:, :rank])

    @staticmethod
    def zero(n: int) -> "Subspace":
        return Subspace(np.zeros((n, 0), dtype=complex))

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(np.eye(n, dtype=complex))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        if self.dim == 0:
            return np.zeros((self.ambient_dim, self.ambient_dim), dtype=complex)
        return self.basis @ self.basis.conj().T

    def contains(self, vector: np.ndarray, tol: float = 1e-8) -> bool:
        v = np.asarray(vector, dtype=complex).reshape(-1)
        if v.shape[0] != self.ambient_dim:
            raise ShapeError("vector dimension mismatch")
        nrm = np.linalg.norm(v)
        if nrm == 0:
            return True
        resid = v - self.projector() @ v
        return bool(np.linalg.norm(resid) <= tol * nrm)

    def leq(self, other: "Subspace", tol: float = 1e-8) -> bool:
        """Containment self <= other as subspaces."""
        if self.ambient_dim != other.ambient_dim:
            raise ShapeError("ambient dimension mismatch")
        if self.dim == 0:
            return True
        resid = self.basis - other.projector() @ self.basis
        return bool(np.linalg.norm(resid, 2) <= tol)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def gap_distance(a: Subspace, b: Subspace) -> float:
    """Spectral-norm distance between orthogonal projectors."""
    if a.ambient_dim != b.ambient_dim:
        raise ShapeError("subspaces of different ambient spaces")
    diff = a.projector() - b.projector()
    if diff.shape[0] == 0:
        return 0.0
    return float(np.linalg.norm(diff, 2))


def sum_subspace(parts: list) -> Subspace:
    """Span of the union of the given subspaces."""
    if not parts:
        raise ValidationError("need at least one subspace")
    n = parts[0].ambient_dim
    for p in parts:
        if p.ambient_dim != n:
            raise ShapeError("ambient dimension mismatch")
    cols = np.hstack([p.basis for p in parts]) if parts else np.zeros((n, 0))
    return Subspace.from_spanning(cols)


def kernel_subspace(a: np.ndarray, tol: float = 1e-10) -> Subspace:
    """Numerical kernel via the small right singular vectors."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ShapeError("matrix expected")
    m, n = a.shape
    if m == 0 or n == 0:
        return Subspace.full(n)
    _, s, vh = np.linalg.svd(a)
    smax = s[0] if len(s) else 0.0
    # relative cutoff; powered non-normal matrices can have tiny norms, so
    # never let the threshold go absolute unless the matrix is exactly zero
    thr = tol * smax if smax > 0 else tol
    rank = int(np.sum(s > thr))
    return Subspace(vh[rank:, :].conj().T)


def generalized_eigenspace(a: np.ndarray, lam: complex, tol: float = 1e-10) -> Subspace:
    """Kernel of (A - lam I)^n, the maximal root space at lam."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ShapeError("square matrix expected")
    m = a - complex(lam) * np.eye(n)
    # normalize before powering so the tolerance keeps meaning
    scale = np.linalg.norm(m, 2)
    if scale > 0:
        m = m / scale
    return kernel_subspace(np.linalg.matrix_power(m, n), tol)


def intertwiner_dimension(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> int:
    """dim{ X : A X = X B } via the Sylvester operator's kernel."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError("first matrix must be square")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ShapeError("second matrix must be square")
    n, m = a.shape[0], b.shape[0]
    # vec(AX - XB) = (I_m (x) A - B^T (x) I_n) vec(X), columns stacked
    op = np.kron(np.eye(m), a) - np.kron(b.T, np.eye(n))
    return kernel_subspace(op, tol).dim
