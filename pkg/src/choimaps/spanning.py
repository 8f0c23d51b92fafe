"""Product vectors annihilated by the pairing, and the rank/determinant
evidence behind the spanning and co-spanning verdicts.

A product vector xi (x) eta is in the kernel of a positive map when the map
applied to the projector of xi kills the conjugate of eta.  On the boundary
pieces of the positivity body the kernel is known in closed form; sampling
it at fixed phase choices gives square matrices whose determinants have
closed-form absolute values, used here as regression oracles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveMapError, UnsupportedCaseError
from .faces import require_generic_theta
from .linalg import Array, numeric_rank
from .maps import MapParams, apply_map, cp_threshold
from .positivity import is_positive

EQ_TOL = 1e-9

#: Default unimodular phase samples: pairs feed the three-vector boundary
#: families, triples feed the equal-modulus family.
DEFAULT_PAIRS = ((1.0, 1.0), (1.0, -1.0), (1.0, 1j))
DEFAULT_TRIPLES = ((1.0, 1.0, 1.0), (1.0, -1.0, 1.0), (1.0, 1j, -1j))

#: Richer deterministic samples for span computations: the equal-modulus
#: family spans a 7-dimensional subspace, so at least 7 generic triples are
#: needed to saturate it.
GENERIC_PAIRS = DEFAULT_PAIRS + tuple(
    (1.0, cmath.exp(1j * t)) for t in (0.8, 2.1, -0.9)
)
GENERIC_TRIPLES = DEFAULT_TRIPLES + tuple(
    (1.0, cmath.exp(1j * u), cmath.exp(1j * v))
    for u, v in ((0.7, -1.3), (-2.0, 0.4), (1.9, 2.6), (0.3, -2.8), (-1.1, 1.5))
)


@dataclass(frozen=True)
class ProductVector:
    """A pair (xi, eta) of nonzero complex 3-vectors standing for xi (x) eta."""

    xi: Array
    eta: Array

    def __post_init__(self) -> None:
        xi = np.asarray(self.xi, dtype=complex)
        eta = np.asarray(self.eta, dtype=complex)
        if xi.shape != (3,) or eta.shape != (3,):
            raise ValueError("product vector factors must be complex 3-vectors")
        if np.linalg.norm(xi) == 0 or np.linalg.norm(eta) == 0:
            raise ValueError("product vector factors must be nonzero")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)

    def tensor(self) -> Array:
        """The 9-vector with index convention (i, j) -> 3*i + j."""
        return np.kron(self.xi, self.eta)

    def partial_conjugate(self) -> "ProductVector":
        """xi (x) conj(eta)."""
        return ProductVector(self.xi, self.eta.conj())

    def projector(self) -> Array:
        z = self.tensor()
        return np.outer(z, z.conj())


def kernel_membership(p: MapParams, pv: ProductVector) -> bool:
    """True iff the map applied to the projector of xi annihilates conj(eta)."""
    if not is_positive(p):
        raise NotPositiveMapError(f"map {p} is not positive")
    xi, eta = pv.xi, pv.eta
    residue = np.linalg.norm(apply_map(p, np.outer(xi, xi.conj())) @ eta.conj())
    scale = float(np.vdot(xi, xi).real) * float(np.linalg.norm(eta))
    return residue <= 1e-9 * scale


# ---------------------------------------------------------------------------
# Closed-form kernel families on the boundary cases.
# ---------------------------------------------------------------------------


def _surface_family(p: MapParams, alpha: complex, beta: complex) -> list[ProductVector]:
    """Kernel vectors on the surface b*c = (1 - a)^2 with 0 < a <= 1."""
    a, b, c = p.abc
    e = cmath.exp(-1j * p.theta)
    root = math.sqrt(max(1.0 - a, 0.0))
    b4, c4, sb = b**0.25, c**0.25, math.sqrt(b)
    al, be = complex(alpha), complex(beta)
    raw = [
        ((b4 * al, c4 * be, 0.0), (al.conjugate() * e * root, be.conjugate() * sb, 0.0)),
        ((c4 * be, 0.0, b4 * al), (be.conjugate() * sb, 0.0, al.conjugate() * e * root)),
        ((0.0, b4 * al, c4 * be), (0.0, al.conjugate() * e * root, be.conjugate() * sb)),
    ]
    out = []
    for xi, eta in raw:
        if np.linalg.norm(xi) > 0 and np.linalg.norm(eta) > 0:
            out.append(ProductVector(np.array(xi), np.array(eta)))
    return out


def _copositive_family(p: MapParams, alpha: complex, beta: complex) -> list[ProductVector]:
    """Kernel vectors at a = 0, b*c = 1."""
    b = p.b
    e = cmath.exp(1j * p.theta)
    al, be = complex(alpha), complex(beta)
    raw = [
        ((al, be, 0.0), (al.conjugate(), e * be.conjugate() * b, 0.0)),
        ((be, 0.0, al), (e * be.conjugate() * b, 0.0, al.conjugate())),
        ((0.0, al, be), (0.0, al.conjugate(), e * be.conjugate() * b)),
    ]
    return [ProductVector(np.array(xi), np.array(eta)) for xi, eta in raw]


_OMEGA = cmath.exp(2j * math.pi / 3)


def _phase_twist(theta: float) -> tuple[complex, complex]:
    """Second-factor phase twist of the equal-modulus kernel family, chosen
    by the branch of theta.  Undefined at |theta| = pi/3 (threshold 1)."""
    third = math.pi / 3.0
    if -math.pi < theta < -third:
        return _OMEGA.conjugate(), _OMEGA
    if -third < theta < third:
        return 1.0 + 0j, 1.0 + 0j
    if third < theta <= math.pi:
        return _OMEGA, _OMEGA.conjugate()
    raise UnsupportedCaseError(f"no phase branch at theta={theta}")


def _equal_modulus_vector(theta: float, alpha: complex, beta: complex, gamma: complex) -> ProductVector:
    """Kernel vector (alpha, beta, gamma) (x) twisted conjugate, valid on the
    sum-threshold face."""
    u, v = _phase_twist(theta)
    xi = np.array([alpha, beta, gamma], dtype=complex)
    eta = np.array(
        [np.conj(alpha), np.conj(beta) * u, np.conj(gamma) * v], dtype=complex
    )
    return ProductVector(xi, eta)


def _axis_vectors(p: MapParams) -> list[ProductVector]:
    """Coordinate kernel vectors e_i (x) e_j present whenever the diagonal of
    the map on e_i e_i* has a zero entry."""
    a, b, c = p.abc
    diag_rows = ((a, c, b), (b, a, c), (c, b, a))
    basis = np.eye(3, dtype=complex)
    out = []
    for i, row in enumerate(diag_rows):
        for j, val in enumerate(row):
            if val <= 1e-12:
                out.append(ProductVector(basis[i], basis[j]))
    return out


def _boundary_case(p: MapParams) -> str | None:
    """Which closed-form kernel case the parameters fall in, if any."""
    pth = cp_threshold(p.theta)
    a, b, c = p.abc
    s = a + b + c
    on_surface = abs(b * c - (1.0 - a) ** 2) <= EQ_TOL and a <= 1.0 + EQ_TOL
    on_sum = abs(s - pth) <= EQ_TOL
    if a <= EQ_TOL and abs(b * c - 1.0) <= EQ_TOL:
        return "iii"
    if on_surface and on_sum and a >= 2.0 - pth - EQ_TOL:
        return "ii"
    if on_surface and a > EQ_TOL and s > pth + EQ_TOL:
        return "i"
    if on_sum:
        return "iv"
    return None


def kernel_family(
    p: MapParams, phase_samples: tuple | list | None = None
) -> list[ProductVector]:
    """Sampled kernel product vectors for parameters on a boundary case.

    ``phase_samples`` may mix pairs (fed to the three-vector families) and
    triples (fed to the equal-modulus family); defaults reproduce the
    determinant regression values.  Raises UnsupportedCaseError off the
    boundary cases; every returned vector is membership-checked.
    """
    require_generic_theta(p.theta)
    if not is_positive(p):
        raise NotPositiveMapError(f"map {p} is not positive")
    case = _boundary_case(p)
    if case is None:
        raise UnsupportedCaseError(
            f"parameters {p.abc} at theta={p.theta} are not in a kernel case"
        )
    if phase_samples is None:
        pairs, triples = DEFAULT_PAIRS, DEFAULT_TRIPLES
    else:
        pairs = tuple(s for s in phase_samples if len(s) == 2)
        triples = tuple(s for s in phase_samples if len(s) == 3)

    vectors: list[ProductVector] = []
    if case in ("i", "ii"):
        for al, be in pairs:
            vectors.extend(_surface_family(p, al, be))
    if case == "iii":
        for al, be in pairs:
            vectors.extend(_copositive_family(p, al, be))
    if case in ("ii", "iv"):
        for al, be, ga in triples:
            vectors.append(_equal_modulus_vector(p.theta, al, be, ga))
    vectors.extend(_axis_vectors(p))

    for pv in vectors:
        if not kernel_membership(p, pv):
            raise AssertionError(f"generated vector failed kernel membership for {p}")
    return vectors


def sampled_kernel_vectors(p: MapParams) -> list[ProductVector]:
    """Kernel sample rich enough for span computations, for any positive
    map: the closed-form family at generic phases when the parameters lie on
    a boundary case, otherwise just the coordinate vectors (possibly none,
    for strictly interior maps)."""
    try:
        return kernel_family(p, GENERIC_PAIRS + GENERIC_TRIPLES)
    except UnsupportedCaseError:
        vectors = _axis_vectors(p)
        for pv in vectors:
            if not kernel_membership(p, pv):
                raise AssertionError(f"axis vector failed kernel membership for {p}")
        return vectors


# ---------------------------------------------------------------------------
# Spanning / co-spanning verdicts with evidence.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpanningReport:
    """Closed-form verdict plus numeric evidence (rank of the sampled kernel,
    and |det| of the nine canonical columns against its closed form when a
    determinant case applies)."""

    has_property: bool
    case: str | None
    rank: int | None
    det_abs: float | None
    det_closed_form: float | None

    def __bool__(self) -> bool:
        return self.has_property


def _extended_rank(p: MapParams, conjugate: bool) -> int | None:
    """Rank of the generically sampled kernel (or its partial conjugates)."""
    vectors = sampled_kernel_vectors(p)
    if not vectors:
        return None
    if conjugate:
        vectors = [pv.partial_conjugate() for pv in vectors]
    return numeric_rank(np.array([pv.tensor() for pv in vectors]))


def _nine_columns(vectors: list[ProductVector], conjugate: bool = False) -> Array | None:
    if len(vectors) != 9:
        return None
    if conjugate:
        vectors = [pv.partial_conjugate() for pv in vectors]
    return np.array([pv.tensor() for pv in vectors]).T


def spanning_det_closed_form(p: MapParams) -> float | None:
    """Closed-form |det| of the nine canonical kernel columns, when defined."""
    case = _boundary_case(p)
    b, c = p.b, p.c
    if case in ("i", "ii"):
        return 64.0 * b**4.5 * c**2.25 * abs(1.0 + cmath.exp(-3j * p.theta))
    if case == "iii":
        return 64.0 * b**3 * abs(1.0 + b**3 * cmath.exp(3j * p.theta))
    return None


def cospanning_det_closed_form(p: MapParams) -> float | None:
    """Closed-form |det| of the partially conjugated canonical columns on the
    sum-threshold surface case, branchwise in theta."""
    if _boundary_case(p) != "ii":
        return None
    third = math.pi / 3.0
    if -math.pi < p.theta < -third:
        shift = p.theta + 2.0 * third
    elif -third < p.theta < third:
        shift = p.theta
    else:
        shift = p.theta - 2.0 * third
    b, c = p.b, p.c
    return (
        16.0
        * math.sqrt(2.0)
        * b**2.25
        * c**0.75
        * abs((math.sqrt(b) - math.sqrt(c) * cmath.exp(1j * shift)) ** 3 * (1.0 + cmath.exp(3j * p.theta)))
    )


def has_spanning_property(p: MapParams) -> SpanningReport:
    """Spanning verdict (kernel spans the 9-dimensional tensor space).

    Closed form: 0 <= a < 1 and b*c = (1 - a)^2.  Evidence: rank of the
    sampled kernel and, in the determinant cases, |det| of the nine
    canonical columns against the closed form.
    """
    require_generic_theta(p.theta)
    if not is_positive(p):
        raise NotPositiveMapError(f"map {p} is not positive")
    a, b, c = p.abc
    verdict = (
        a >= -EQ_TOL and a < 1.0 - EQ_TOL and abs(b * c - (1.0 - a) ** 2) <= EQ_TOL
    )

    case = _boundary_case(p)
    det_abs = None
    det_closed = spanning_det_closed_form(p)
    if det_closed is not None and case in ("i", "ii"):
        cols = _nine_columns([pv for al, be in DEFAULT_PAIRS for pv in _surface_family(p, al, be)])
        if cols is not None:
            det_abs = float(abs(np.linalg.det(cols)))
    elif det_closed is not None and case == "iii":
        cols = _nine_columns([pv for al, be in DEFAULT_PAIRS for pv in _copositive_family(p, al, be)])
        if cols is not None:
            det_abs = float(abs(np.linalg.det(cols)))
    rank = _extended_rank(p, conjugate=False)
    return SpanningReport(verdict, case, rank, det_abs, det_closed)


def cospanning_columns(p: MapParams) -> Array | None:
    """The nine partially conjugated canonical kernel columns on the
    sum-threshold surface case: six surface vectors at phase pairs
    (1, +-1) plus the three default equal-modulus triples."""
    if _boundary_case(p) != "ii":
        return None
    vectors = []
    for al, be in ((1.0, 1.0), (1.0, -1.0)):
        vectors.extend(_surface_family(p, al, be))
    if len(vectors) != 6:
        return None
    for al, be, ga in DEFAULT_TRIPLES:
        vectors.append(_equal_modulus_vector(p.theta, al, be, ga))
    return _nine_columns(vectors, conjugate=True)


def has_cospanning_property(p: MapParams) -> SpanningReport:
    """Co-spanning verdict (partial conjugates of the kernel span).

    Closed form: either the sum-threshold surface piece
    2 - pth <= a <= 1, b*c = (1 - a)^2, a + b + c = pth, or the coordinate
    piece 1 <= a <= pth, b*c = 0, a + b + c = pth.
    """
    pth = require_generic_theta(p.theta)
    if not is_positive(p):
        raise NotPositiveMapError(f"map {p} is not positive")
    a, b, c = p.abc
    on_sum = abs(a + b + c - pth) <= EQ_TOL
    surface_piece = (
        on_sum
        and 2.0 - pth - EQ_TOL <= a <= 1.0 + EQ_TOL
        and abs(b * c - (1.0 - a) ** 2) <= EQ_TOL
    )
    coordinate_piece = (
        on_sum and 1.0 - EQ_TOL <= a <= pth + EQ_TOL and min(b, c) <= EQ_TOL
    )
    verdict = surface_piece or coordinate_piece

    det_abs = None
    det_closed = cospanning_det_closed_form(p)
    if det_closed is not None:
        cols = cospanning_columns(p)
        if cols is not None:
            det_abs = float(abs(np.linalg.det(cols)))
    rank = _extended_rank(p, conjugate=True)
    case = _boundary_case(p)
    return SpanningReport(verdict, case, rank, det_abs, det_closed)
