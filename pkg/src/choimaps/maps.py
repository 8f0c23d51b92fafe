"""The four-parameter family of linear maps on 3x3 matrices.

A parameter tuple ``(a, b, c, theta)`` names one map of the family.  The map
acts on the diagonal of its argument through the cyclic coefficient pattern
(a, b, c) / (c, a, b) / (b, c, a) and multiplies the off-diagonal entries by
the phases -e^{i theta} (cyclic slots (0,1), (1,2), (2,0)) and -e^{-i theta}
(the transposed slots).  Its Choi matrix is the 9x9 block matrix with blocks
``apply_map(e_ij)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolatedError, ThetaOutOfRangeError
from .linalg import Array, as_complex, basis_matrix, require_hermitian

_TWO_THIRDS_PI = 2.0 * math.pi / 3.0


def _normalize_angle(theta: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    t = math.remainder(theta, 2.0 * math.pi)
    if t <= -math.pi:
        t += 2.0 * math.pi
    return t


@dataclass(frozen=True)
class MapParams:
    """The tuple (a, b, c, theta) naming one map of the family.

    a, b, c are finite nonnegative reals; theta is stored normalized to
    (-pi, pi].
    """

    a: float
    b: float
    c: float
    theta: float

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {v}")
        if not math.isfinite(self.theta):
            raise ValueError(f"theta must be finite, got {self.theta}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "theta", _normalize_angle(float(self.theta)))

    @property
    def abc(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)


def cp_threshold(theta: float) -> float:
    """Largest root of x^3 - 3x - 2cos(3 theta): the diagonal weight at which
    the map becomes completely positive.

    Computed as the explicit three-way maximum of 2cos(theta + k*2pi/3); the
    value lies in [1, 2], is even in theta and has period 2pi/3.
    """
    return max(
        2.0 * math.cos(theta - _TWO_THIRDS_PI),
        2.0 * math.cos(theta),
        2.0 * math.cos(theta + _TWO_THIRDS_PI),
    )


def apply_map(p: MapParams, x) -> Array:
    """Apply the map named by ``p`` to a 3x3 matrix."""
    x = as_complex(x)
    if x.shape != (3, 3):
        raise ValueError(f"apply_map requires a 3x3 argument, got {x.shape}")
    e = complex(math.cos(p.theta), math.sin(p.theta))
    a, b, c = p.a, p.b, p.c
    out = np.empty((3, 3), dtype=complex)
    out[0, 0] = a * x[0, 0] + b * x[1, 1] + c * x[2, 2]
    out[1, 1] = c * x[0, 0] + a * x[1, 1] + b * x[2, 2]
    out[2, 2] = b * x[0, 0] + c * x[1, 1] + a * x[2, 2]
    out[0, 1] = -e * x[0, 1]
    out[1, 2] = -e * x[1, 2]
    out[2, 0] = -e * x[2, 0]
    out[0, 2] = -e.conjugate() * x[0, 2]
    out[1, 0] = -e.conjugate() * x[1, 0]
    out[2, 1] = -e.conjugate() * x[2, 1]
    return out


_DIAG_SLOTS = (0, 4, 8)
# Diagonal of the Choi matrix as (a, b, c)-selectors per global index.
_DIAG_PATTERN = ("a", "c", "b", "b", "a", "c", "c", "b", "a")


def choi_matrix(p: MapParams) -> Array:
    """The 9x9 Choi matrix of the map named by ``p``.

    Diagonal pattern (a, c, b, b, a, c, c, b, a); entries -e^{i theta} at
    (0,4), (4,8), (8,0) and their conjugates transposed.
    """
    e = complex(math.cos(p.theta), math.sin(p.theta))
    vals = {"a": p.a, "b": p.b, "c": p.c}
    w = np.zeros((9, 9), dtype=complex)
    for k, sel in enumerate(_DIAG_PATTERN):
        w[k, k] = vals[sel]
    for u, v in ((0, 4), (4, 8), (8, 0)):
        w[u, v] = -e
        w[v, u] = -e.conjugate()
    return w


def phase_circulant(a: float, theta: float) -> Array:
    """Hermitian 3x3 matrix with constant diagonal ``a`` and cyclic phase
    off-diagonals; its positivity decides complete positivity of the map.

    det = a^3 - 3a - 2cos(3 theta).
    """
    e = complex(math.cos(theta), math.sin(theta))
    m = np.full((3, 3), 0.0, dtype=complex)
    np.fill_diagonal(m, a)
    for u, v in ((0, 1), (1, 2), (2, 0)):
        m[u, v] = -e
        m[v, u] = -e.conjugate()
    return m


def pairing_value(a, c) -> float:
    """Bilinear pairing Tr(A C^t) of two Hermitian 9x9 matrices.

    Equals the entrywise (unconjugated) sum of products.  The imaginary
    residue must not exceed 1e-10.
    """
    a = as_complex(a)
    c = as_complex(c)
    v = complex(np.sum(a * c))
    if abs(v.imag) > 1e-10:
        raise ValueError(f"pairing has imaginary residue {v.imag:.3e}")
    return v.real


def pairing(a, p: MapParams) -> float:
    """Pairing Tr(A C^t) of a Hermitian matrix A with the map named by ``p``."""
    a = require_hermitian(a)
    return pairing_value(a, choi_matrix(p))


def edge_state(b: float, theta: float, normalized: bool = False) -> Array:
    """The PPT entangled edge state with parameters (2cos theta, b, 1/b; theta).

    Defined for 0 < |theta| < pi/3 and b > 0; the matrix is PSD with PSD
    partial transpose and rank pair {8, 6}.  With ``normalized=True`` the
    trace-1 density matrix is returned instead of the raw Choi matrix.
    """
    if not 0.0 < abs(theta) < math.pi / 3.0:
        raise ThetaOutOfRangeError(f"edge state requires 0 < |theta| < pi/3, got {theta}")
    if not b > 0:
        raise ValueError(f"edge state requires b > 0, got {b}")
    w = choi_matrix(MapParams(2.0 * math.cos(theta), b, 1.0 / b, theta))
    if normalized:
        w = w / np.trace(w).real
    return w


def subtraction_generator(xi: complex, eta: complex, zeta: complex) -> Array:
    """Rank-1 PSD matrix v v* with v supported on the diagonal tensor slots
    (0,0), (1,1), (2,2) and coordinates (xi, eta, zeta) summing to zero."""
    if abs(xi + eta + zeta) > 1e-12:
        raise ConstraintViolatedError(
            f"coordinates must sum to zero, got {xi + eta + zeta}"
        )
    v = np.zeros(9, dtype=complex)
    v[0], v[4], v[8] = xi, eta, zeta
    return np.outer(v, v.conj())


def map_from_choi(w) -> Array:
    """Block tensor of the map with Choi matrix ``w``: component (i,j,k,l)
    multiplies X_{ik} into the output entry (j, l)."""
    w = as_complex(w)
    if w.shape != (9, 9):
        raise ValueError(f"expected a 9x9 Choi matrix, got {w.shape}")
    return w.reshape(3, 3, 3, 3)


def apply_choi_map(w, x) -> Array:
    """Apply the map with Choi matrix ``w`` to a 3x3 matrix."""
    return np.einsum("ik,ijkl->jl", as_complex(x), map_from_choi(w))


def tensor_unit(i: int, j: int) -> Array:
    """9-vector e_i (x) e_j (0-based)."""
    v = np.zeros(9, dtype=complex)
    v[3 * i + j] = 1.0
    return v


def choi_from_blocks(p: MapParams) -> Array:
    """Choi matrix assembled as sum_ij e_ij (x) apply_map(e_ij); used as an
    independent route for testing the direct construction."""
    w = np.zeros((9, 9), dtype=complex)
    for i in range(3):
        for j in range(3):
            w += np.kron(basis_matrix(i, j), apply_map(p, basis_matrix(i, j)))
    return w
