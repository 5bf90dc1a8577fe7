"""Matrix-free symmetric linear operators.

The solver never forms its seed matrices densely. Everything it multiplies
by (the diagonal part D_k, the regularizer Hessian S_k, and their sum, the
seed B_k) is represented by one of the operator variants below, which only
expose matrix-vector products and diagonal extraction.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np
import scipy.sparse as sp


class SymmetricOperator(ABC):
    """A symmetric n-by-n linear map exposed through matrix-vector products."""

    @property
    @abstractmethod
    def dim(self) -> int:
        """Number of rows (= columns) of the operator."""

    @abstractmethod
    def apply(self, v: np.ndarray) -> np.ndarray:
        """Return the matrix-vector product with ``v`` (shape ``(dim,)``)."""

    @abstractmethod
    def diagonal(self) -> np.ndarray:
        """Return the operator's diagonal entries as a vector."""

    def _check_dim(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise ValueError(
                f"operator of dimension {self.dim} applied to vector of shape {v.shape}"
            )
        return v


class DiagonalOp(SymmetricOperator):
    """Diagonal operator given by its entry vector."""

    def __init__(self, entries: np.ndarray):
        entries = np.array(entries, dtype=float)
        if entries.ndim != 1 or entries.size == 0:
            raise ValueError("entries must be a non-empty vector")
        if not np.all(np.isfinite(entries)):
            raise ValueError("diagonal entries must be finite")
        entries.flags.writeable = False
        self.entries = entries

    @property
    def dim(self) -> int:
        return self.entries.size

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.entries * self._check_dim(v)

    def diagonal(self) -> np.ndarray:
        return self.entries.copy()


class ScaledIdentity(SymmetricOperator):
    """tau times the identity on R^n, tau >= 0."""

    def __init__(self, tau: float, n: int):
        if not (np.isfinite(tau) and tau >= 0):
            raise ValueError("tau must be finite and >= 0")
        if n < 1:
            raise ValueError("dimension must be >= 1")
        self.tau = float(tau)
        self._n = int(n)

    @property
    def dim(self) -> int:
        return self._n

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.tau * self._check_dim(v)

    def diagonal(self) -> np.ndarray:
        return np.full(self._n, self.tau)


class SparseSymmetric(SymmetricOperator):
    """Symmetric operator backed by compressed sparse row storage."""

    def __init__(self, matrix):
        m = sp.csr_matrix(matrix, dtype=float)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix must be square, got shape {m.shape}")
        gap = abs(m - m.T)
        scale = abs(m).max() if m.nnz else 0.0
        if gap.nnz and gap.max() > 1e-12 * max(scale, 1.0):
            raise ValueError("matrix is not symmetric")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.matrix.dot(self._check_dim(v))

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal()


class SumOp(SymmetricOperator):
    """Sum of two symmetric operators of equal dimension."""

    def __init__(self, left: SymmetricOperator, right: SymmetricOperator):
        if left.dim != right.dim:
            raise ValueError(f"dimension mismatch: {left.dim} vs {right.dim}")
        self.left = left
        self.right = right

    @property
    def dim(self) -> int:
        return self.left.dim

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.left.apply(v) + self.right.apply(v)

    def diagonal(self) -> np.ndarray:
        return self.left.diagonal() + self.right.diagonal()


def five_point_laplacian(grid_side: int, scale: float = 1.0) -> SparseSymmetric:
    """Five-point-stencil Laplacian on an m-by-m grid with zero boundary.

    Each interior node couples to its at most four grid neighbors; row
    entries are ``4*scale`` on the diagonal and ``-scale`` per neighbor.
    Returns an (m^2)-by-(m^2) :class:`SparseSymmetric`.
    """
    m = int(grid_side)
    if m < 1:
        raise ValueError("grid side must be >= 1")
    main = 2.0 * scale * np.ones(m)
    off = -scale * np.ones(m - 1)
    t = sp.diags([off, main, off], offsets=[-1, 0, 1], format="csr")
    eye = sp.identity(m, format="csr")
    return SparseSymmetric(sp.kron(eye, t) + sp.kron(t, eye))


def to_dense(op: SymmetricOperator) -> np.ndarray:
    """Materialize an operator as a dense array (exact-solve path and oracles)."""
    if isinstance(op, DiagonalOp):
        return np.diag(op.entries)
    if isinstance(op, ScaledIdentity):
        return op.tau * np.eye(op.dim)
    if isinstance(op, SparseSymmetric):
        return op.matrix.toarray()
    if isinstance(op, SumOp):
        return to_dense(op.left) + to_dense(op.right)
    cols = [op.apply(col) for col in np.eye(op.dim)]
    return np.column_stack(cols)
