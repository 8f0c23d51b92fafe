"""Deterministic dense complex linear algebra at the two sizes used here.

Everything operates on plain ``numpy`` arrays.  Matrices are 3x3 or 9x9;
9x9 matrices are always understood as operators on C^3 (x) C^3 with the
row-major index identification (i, j) -> 3*i + j of the tensor factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonHermitianError

Array = np.ndarray


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by the rank/eigenvalue helpers.

    eig_zero   absolute threshold below which an eigenvalue counts as zero
    rank_rel   singular values below rank_rel * sigma_max are discarded
    entry_eq   entrywise tolerance for matrix equality / symmetry checks
    """

    eig_zero: float = 1e-9
    rank_rel: float = 1e-8
    entry_eq: float = 1e-10

    def __post_init__(self) -> None:
        if not (self.eig_zero > 0 and self.rank_rel > 0 and self.entry_eq > 0):
            raise ValueError("all tolerances must be strictly positive")


DEFAULT_TOL = Tolerances()


def as_complex(m) -> Array:
    """Return ``m`` as a C-contiguous complex ndarray."""
    return np.ascontiguousarray(np.asarray(m, dtype=complex))


def hermiticity_defect(m) -> float:
    """Largest entrywise deviation of ``m`` from its conjugate transpose."""
    m = as_complex(m)
    return float(np.abs(m - m.conj().T).max()) if m.size else 0.0


def require_hermitian(m, tol: float = DEFAULT_TOL.entry_eq) -> Array:
    """Validate Hermiticity within ``tol`` and return the symmetrized matrix."""
    m = as_complex(m)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NonHermitianError(f"matrix is not Hermitian: defect {defect:.3e} > {tol:.1e}")
    return (m + m.conj().T) / 2


def hermitian_eigenvalues(m, tol: Tolerances = DEFAULT_TOL) -> Array:
    """Eigenvalues of a Hermitian matrix, ascending.

    Raises NonHermitianError if the symmetry defect exceeds ``tol.entry_eq``.
    """
    return np.linalg.eigvalsh(require_hermitian(m, tol.entry_eq))


def numeric_rank(m, tol: Tolerances = DEFAULT_TOL) -> int:
    """Number of singular values above ``tol.rank_rel`` relative to the largest.

    The zero matrix has rank 0.
    """
    m = as_complex(m)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel * s[0]))


def determinant(m) -> complex:
    """LU-based determinant of a square complex matrix."""
    m = as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"determinant requires a square matrix, got {m.shape}")
    return complex(np.linalg.det(m))


def partial_transpose(m) -> Array:
    """Transpose the second tensor factor of a 9x9 matrix.

    The entry at ((i, j), (k, l)) moves to ((i, l), (k, j)); applying the
    operation twice restores the input exactly.
    """
    m = as_complex(m)
    if m.shape != (9, 9):
        raise ValueError(f"partial_transpose requires a 9x9 matrix, got {m.shape}")
    return np.ascontiguousarray(m.reshape(3, 3, 3, 3).transpose(0, 3, 2, 1).reshape(9, 9))


def kron(a, b) -> Array:
    """Kronecker product of two 3x3 matrices, row-major block layout."""
    a = as_complex(a)
    b = as_complex(b)
    if a.shape != (3, 3) or b.shape != (3, 3):
        raise ValueError(f"kron requires 3x3 factors, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def basis_matrix(i: int, j: int, n: int = 3) -> Array:
    """Matrix unit e_ij (0-based indices)."""
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1.0
    return e
