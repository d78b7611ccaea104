"""Sparse complex operator algebra over a truncated two-mode Fock basis.

Operators are stored as canonical triplets (row, col, value): sorted by
row then column, duplicate positions merged, and entries of magnitude
at most ``PRUNE_TOL`` dropped.  Products and sums are delegated to
scipy.sparse CSR kernels; the canonical triplet form is restored after
every operation so that equality comparison stays well defined.

All operations are pure and every SparseOperator is immutable, so values
can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fock import FockBasis

# Absolute magnitude at or below which entries are dropped.  Small enough
# not to touch genuine sqrt(n) matrix elements at any sane hbar.
PRUNE_TOL = 1e-15


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Complex matrix in canonical sparse triplet form."""

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    def __post_init__(self):
        for arr in (self.rows, self.cols, self.vals):
            arr.flags.writeable = False

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def to_csr(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.vals, (self.rows, self.cols)),
            shape=(self.dim, self.dim),
            dtype=np.complex128,
        )

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        out[self.rows, self.cols] = self.vals
        return out

    def max_abs(self) -> float:
        """Largest entry magnitude (0 for the zero operator)."""
        return float(np.max(np.abs(self.vals))) if self.nnz else 0.0

    def fro_norm(self) -> float:
        """Frobenius norm over the stored entries."""
        return float(np.sqrt(np.sum(np.abs(self.vals) ** 2)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.vals, other.vals)
        )

    # light sugar; the canonical API is the module-level functions
    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        return add(self, other)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return add(self, scale(other, -1.0))

    def __neg__(self) -> "SparseOperator":
        return scale(self, -1.0)

    def __mul__(self, c: complex) -> "SparseOperator":
        return scale(self, c)

    __rmul__ = __mul__

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        return multiply(self, other)


def from_entries(
    dim: int,
    rows,
    cols,
    vals,
    prune_tol: float = PRUNE_TOL,
) -> SparseOperator:
    """Canonicalize raw triplets: sort, merge duplicates, prune."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.complex128)
    if not (rows.shape == cols.shape == vals.shape):
        raise ValueError("rows, cols and vals must have equal length")
    if len(rows) and (
        rows.min() < 0 or cols.min() < 0 or rows.max() >= dim or cols.max() >= dim
    ):
        raise ValueError(f"triplet index outside a {dim}x{dim} matrix")
    if len(rows):
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        # merge runs of identical (row, col)
        new_run = np.empty(len(rows), dtype=bool)
        new_run[0] = True
        new_run[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
        starts = np.flatnonzero(new_run)
        rows, cols = rows[starts], cols[starts]
        vals = np.add.reduceat(vals, starts)
        keep = np.abs(vals) > prune_tol
        rows, cols, vals = rows[keep], cols[keep], vals[keep]
    return SparseOperator(dim=int(dim), rows=rows, cols=cols, vals=vals)


def _from_csr(m: sp.spmatrix, prune_tol: float = PRUNE_TOL) -> SparseOperator:
    coo = m.tocoo()
    return from_entries(m.shape[0], coo.row, coo.col, coo.data, prune_tol)


def identity(dim: int) -> SparseOperator:
    idx = np.arange(dim, dtype=np.int64)
    return from_entries(dim, idx, idx, np.ones(dim, dtype=np.complex128))


def zero(dim: int) -> SparseOperator:
    return from_entries(dim, [], [], [])


def annihilation(basis: FockBasis, mode: int) -> SparseOperator:
    """Lowering operator of one mode: a_k |..n_k..> = sqrt(n_k) |..n_k - 1..>.

    States with n_k = 0 are annihilated.  The matrix never connects
    different total-occupation blocks upward, so it is exact everywhere
    in the truncated space.
    """
    if mode not in (1, 2):
        raise ValueError(f"mode must be 1 or 2, got {mode}")
    rows, cols, vals = [], [], []
    for pos, (n1, n2) in enumerate(basis.states):
        nk = n1 if mode == 1 else n2
        if nk == 0:
            continue
        lowered = (n1 - 1, n2) if mode == 1 else (n1, n2 - 1)
        rows.append(basis.index_of(lowered))
        cols.append(pos)
        vals.append(np.sqrt(nk))
    return from_entries(basis.size, rows, cols, vals)


def number_operator(basis: FockBasis, mode: int) -> SparseOperator:
    """Diagonal occupation operator n_k; equals adjoint(a_k) @ a_k exactly."""
    if mode not in (1, 2):
        raise ValueError(f"mode must be 1 or 2, got {mode}")
    occ = np.array(
        [(n1 if mode == 1 else n2) for n1, n2 in basis.states], dtype=np.complex128
    )
    idx = np.arange(basis.size, dtype=np.int64)
    return from_entries(basis.size, idx, idx, occ)


def adjoint(op: SparseOperator, prune_tol: float = PRUNE_TOL) -> SparseOperator:
    """Conjugate transpose.  In the truncated space a_k^dag = adjoint(a_k)."""
    return from_entries(op.dim, op.cols, op.rows, np.conj(op.vals), prune_tol)


def _check_dims(a: SparseOperator, b: SparseOperator):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def multiply(
    a: SparseOperator, b: SparseOperator, prune_tol: float = PRUNE_TOL
) -> SparseOperator:
    _check_dims(a, b)
    return _from_csr(a.to_csr() @ b.to_csr(), prune_tol)


def add(
    a: SparseOperator, b: SparseOperator, prune_tol: float = PRUNE_TOL
) -> SparseOperator:
    _check_dims(a, b)
    return from_entries(
        a.dim,
        np.concatenate([a.rows, b.rows]),
        np.concatenate([a.cols, b.cols]),
        np.concatenate([a.vals, b.vals]),
        prune_tol,
    )


def scale(
    a: SparseOperator, c: complex, prune_tol: float = PRUNE_TOL
) -> SparseOperator:
    return from_entries(a.dim, a.rows, a.cols, a.vals * complex(c), prune_tol)


def commutator(
    a: SparseOperator, b: SparseOperator, prune_tol: float = PRUNE_TOL
) -> SparseOperator:
    """ab - ba.  For the truncated ladder operators [a_k, a_k^dag] equals
    the identity only below the top shell n1 + n2 = n_max; the deviation
    there is real and expected, not a bug."""
    _check_dims(a, b)
    return add(multiply(a, b, prune_tol), scale(multiply(b, a, prune_tol), -1.0),
               prune_tol)
