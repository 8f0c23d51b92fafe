"""Optimality analysis: which completely positive directions can be
subtracted from a map while it stays block-positive.

Candidate directions live in the orthocomplement of the sampled kernel
product vectors.  Per direction the largest subtractable weight equals the
infimum over product vectors of the ratio (pairing with the map) /
(pairing with the direction); the probe measures that ratio on a grid with
Nelder-Mead descent, which stays meaningful even where boundary violations
are cubically suppressed and the plain bisection-on-the-oracle test loses
resolution.  The two named vertices also get a closed-form optimality
certificate extracted from the probe families the proof uses.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import ndtri
from scipy.stats import qmc

from .errors import NotPositiveMapError, UnsupportedCaseError, UnsupportedThetaError
from .faces import (
    FaceKind,
    FaceLabel,
    PropertyRow,
    classify_face,
    face_properties,
    require_generic_theta,
)
from .linalg import Array, require_hermitian
from .maps import MapParams, choi_matrix, cp_threshold, map_from_choi, pairing_value
from .positivity import _sphere_grid, _xi_from_angles, block_positivity_oracle
from .spanning import sampled_kernel_vectors

OPTIMAL_TOL = 1e-9
NOT_OPTIMAL_TOL = 1e-6


def subtraction_budget(theta: float) -> float:
    """Largest copositive-subtraction weight keeping the rotated angle inside
    (-pi/3, pi/3): the positive solution of arg(e^{i theta} - t) = +-pi/3."""
    if not 0.0 < abs(theta) < math.pi / 3.0:
        raise UnsupportedThetaError(f"budget defined for 0 < |theta| < pi/3, got {theta}")
    return math.cos(theta) - abs(math.sin(theta)) / math.sqrt(3.0)


def orthocomplement_basis(p: MapParams) -> list[Array]:
    """Orthonormal basis of the orthogonal complement of the span of the
    sampled kernel product vectors.

    Empty for maps with the spanning property.  For the two vertices with
    first coordinate 1 and a single nonzero partner coordinate (in the
    middle theta branch) the basis is validated to be 2-dimensional,
    supported on the diagonal tensor slots with coordinates summing to zero.
    """
    vectors = sampled_kernel_vectors(p)
    if not vectors:
        raise UnsupportedCaseError(
            f"no known kernel structure for {p.abc} at theta={p.theta}"
        )
    # The subtraction penalty at a product vector z is |v^T z|^2, so the
    # orthogonality that keeps kernel pairings at zero is the unconjugated
    # bilinear one: v must annihilate every kernel tensor under v^T z.
    rows = np.array([pv.tensor() for pv in vectors])
    _, s, vh = np.linalg.svd(rows)
    rank = int(np.count_nonzero(s > 1e-10 * s[0]))
    basis = [vh[k].conj() for k in range(rank, 9)]

    if _vertex_side(p) is not None and abs(p.theta) < math.pi / 3.0:
        if len(basis) != 2:
            raise AssertionError(f"vertex orthocomplement has dimension {len(basis)}")
        off = [k for k in range(9) if k not in (0, 4, 8)]
        for v in basis:
            if np.abs(v[off]).max() > 1e-9 or abs(v[0] + v[4] + v[8]) > 1e-9:
                raise AssertionError("vertex orthocomplement is not diagonal-slot with zero sum")
    return basis


def _vertex_side(p: MapParams) -> str | None:
    pth = cp_threshold(p.theta)
    a, b, c = p.abc
    if abs(a - 1.0) <= 1e-9 and abs(b - (pth - 1.0)) <= 1e-9 and abs(c) <= 1e-9:
        return "b_side"
    if abs(a - 1.0) <= 1e-9 and abs(c - (pth - 1.0)) <= 1e-9 and abs(b) <= 1e-9:
        return "c_side"
    return None


# ---------------------------------------------------------------------------
# Analytic vertex optimality.
# ---------------------------------------------------------------------------


def _probe_families(theta: float, vertex: str):
    """Two one-parameter product-vector families whose pairings against the
    vertex map vanish to third order while pairing quadratically against
    diagonal-slot subtraction directions."""
    e_m = cmath.exp(-1j * theta)
    e_p = cmath.exp(1j * theta)
    if vertex == "b_side":
        fam1 = lambda t: (np.array([math.sqrt(t) * e_m, t, 0.0]), np.array([math.sqrt(t), 1.0, 0.0]))
        fam2 = lambda t: (np.array([0.0, math.sqrt(t) * e_m, t]), np.array([0.0, math.sqrt(t), 1.0]))
    elif vertex == "c_side":
        fam1 = lambda t: (np.array([0.0, t, math.sqrt(t) * e_p]), np.array([0.0, 1.0, math.sqrt(t)]))
        fam2 = lambda t: (np.array([t, math.sqrt(t) * e_p, 0.0]), np.array([1.0, math.sqrt(t), 0.0]))
    else:
        raise ValueError(f"vertex must be 'b_side' or 'c_side', got {vertex!r}")
    return fam1, fam2


def _diag_pairing_form(family) -> Array:
    """Hermitian 3x3 matrix of the quadratic form v -> pairing(z z*, V[v]) / t^2
    for diagonal-slot directions v, extracted by reading off the linear
    coefficient of the diagonal tensor slots of the family."""
    xi, eta = family(1.0)
    z = np.kron(xi, eta)
    ell = z[[0, 4, 8]]
    for t in (0.25, 2.0):
        xi, eta = family(t)
        zt = np.kron(xi, eta)[[0, 4, 8]]
        if np.abs(zt - t * ell).max() > 1e-12 * max(1.0, t):
            raise AssertionError("probe family diagonal slots are not linear in t")
    return np.outer(ell.conj(), ell)


def vertex_optimality_analytic(theta: float, vertex: str = "b_side") -> bool:
    """Closed-form optimality certificate for the vertex maps with first
    coordinate 1 (middle theta branch).

    Checks that the pairing of the probe families against the vertex map is
    a pure cubic with coefficient cp_threshold - 1, then that the two
    quadratic constraint forms combined with the zero-sum condition force
    every diagonal-slot subtraction direction to vanish.
    """
    if not abs(theta) < math.pi / 3.0:
        raise UnsupportedThetaError(
            f"analytic vertex certificate covers |theta| < pi/3, got {theta}"
        )
    pth = require_generic_theta(theta)
    if vertex == "b_side":
        p = MapParams(1.0, pth - 1.0, 0.0, theta)
    elif vertex == "c_side":
        p = MapParams(1.0, 0.0, pth - 1.0, theta)
    else:
        raise ValueError(f"vertex must be 'b_side' or 'c_side', got {vertex!r}")
    w = choi_matrix(p)

    forms = []
    for family in _probe_families(theta, vertex):
        # pairing against the vertex map: fit to a polynomial and require a
        # pure cubic with the expected leading coefficient
        ts = np.array([0.2, 0.5, 1.0, 1.7, 2.4])
        vals = []
        for t in ts:
            xi, eta = family(t)
            z = np.kron(xi, eta)
            vals.append(pairing_value(np.outer(z, z.conj()), w))
        coeffs = np.polynomial.polynomial.polyfit(ts, np.array(vals), 3)
        if np.abs(coeffs[:3]).max() > 1e-10 or abs(coeffs[3] - (pth - 1.0)) > 1e-10:
            raise AssertionError(f"probe family pairing is not the expected cubic: {coeffs}")
        forms.append(_diag_pairing_form(family))

    stack = np.vstack(forms + [np.ones((1, 3), dtype=complex)])
    smin = np.linalg.svd(stack, compute_uv=False)[-1]
    return bool(smin > 1e-9)


# ---------------------------------------------------------------------------
# Numeric subtraction probe.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OptimalityProbeReport:
    """Largest subtractable weight found over the probed directions.

    verdict 'optimal' needs every direction at or below 1e-9; 'not_optimal'
    needs a direction above 1e-6 whose subtraction was re-verified with the
    block-positivity oracle; anything else is 'inconclusive'.
    """

    direction_count: int
    max_subtractable: float
    verdict: str
    witness_direction: Array | None = None
    verification: dict = field(default_factory=dict)

    @property
    def witness_diag_triple(self) -> tuple[complex, complex, complex] | None:
        """The (xi, eta, zeta) diagonal-slot coordinates of the witness
        direction, when it is supported there."""
        v = self.witness_direction
        if v is None:
            return None
        off = [k for k in range(9) if k not in (0, 4, 8)]
        if np.abs(v[off]).max() > 1e-8:
            return None
        return (complex(v[0]), complex(v[4]), complex(v[8]))


def _sobol_directions(dim: int, n: int) -> Array:
    """Deterministic low-discrepancy unit vectors in C^dim (2*dim reals).

    Degenerate draws (the midpoint sample maps to the zero vector under the
    Gaussian quantile) are dropped, so exactly ``n`` unit vectors return.
    """
    sampler = qmc.Sobol(d=2 * dim, scramble=False)
    sampler.fast_forward(1)
    u = np.clip(sampler.random(2 * n + 4), 1e-9, 1.0 - 1e-9)
    g = ndtri(u)
    v = g[:, :dim] + 1j * g[:, dim:]
    norms = np.linalg.norm(v, axis=1)
    keep = norms > 1e-6
    v = v[keep][:n]
    return v / np.linalg.norm(v, axis=1)[:, None]


def _ratio_on_grid(lam: Array, u: Array, directions_b: Array, lam_floor: Array) -> Array:
    """Largest subtractable weight at each grid point for each direction.

    lam, u: batched eigendecompositions of the map on the grid projectors;
    directions_b: (ndir, ngrid, 3) transformed direction vectors.
    """
    beta2 = np.abs(np.einsum("nij,dni->dnj", u.conj(), directions_b)) ** 2
    denom = np.sum(beta2 / lam_floor[None, :, :], axis=2)
    with np.errstate(divide="ignore"):
        return np.where(denom > 0, 1.0 / denom, np.inf)


def _ratio_at(w_blocks: Array, m: Array, params) -> float:
    """Largest weight p with (map(xi xi*) - p b b*) PSD at one grid point,
    b = m^T xi."""
    xi = _xi_from_angles(params)
    n2 = float(np.vdot(xi, xi).real)
    if n2 < 1e-30:
        return math.inf
    xi = xi / math.sqrt(n2)
    a = np.einsum("ik,ijkl->jl", np.outer(xi, xi.conj()), w_blocks)
    b = m.T @ xi
    nb2 = float(np.vdot(b, b).real)
    if nb2 < 1e-30:
        return math.inf
    lam, u = np.linalg.eigh(a)
    floor = 1e-18 * max(lam[-1], 1.0)
    beta2 = np.abs(u.conj().T @ b) ** 2
    denom = float(np.sum(beta2 / np.maximum(lam, floor)))
    return 1.0 / denom if denom > 0 else math.inf


# -- exact ratio limits at the sampled kernel vectors -----------------------
#
# Near a kernel product vector z0, both the map pairing and the subtraction
# penalty vanish quadratically along curves z(s) = (xi0 + s dxi)(x)(eta0 +
# s deta), so the attainable ratios converge to Q2(d) / |L d|^2 where Q2 is
# the second derivative of the map pairing and L the first derivative of the
# penalty amplitude.  Measuring this limit exactly avoids the eigenvalue
# noise floor that caps a direct grid descent around 1e-9.


def _real_tangent(x: Array) -> tuple[Array, Array]:
    dxi = x[0:3] + 1j * x[3:6]
    deta = x[6:9] + 1j * x[9:12]
    return dxi, deta


def _kernel_hessian(w: Array, xi0: Array, eta0: Array) -> tuple[Array, Array]:
    """Eigendecomposition of the 12x12 real Hessian of the map pairing along
    the product manifold at a kernel point (validates the vanishing linear
    term)."""
    z0 = np.kron(xi0, eta0)
    wz0 = w @ z0.conj()
    scale = max(1.0, float(np.linalg.norm(wz0)) * float(np.linalg.norm(z0)))

    def q2(x: Array) -> float:
        dxi, deta = _real_tangent(x)
        w1 = np.kron(dxi, eta0) + np.kron(xi0, deta)
        w2 = np.kron(dxi, deta)
        linear = (z0 @ (w @ w1.conj())).real
        if abs(linear) > 1e-8 * scale * max(1.0, float(np.linalg.norm(w1))):
            raise AssertionError("kernel point is not stationary on the product manifold")
        return float((w1 @ (w @ w1.conj())).real + 2.0 * (z0 @ (w @ w2.conj())).real)

    basis = np.eye(12)
    diag = np.array([q2(basis[i]) for i in range(12)])
    h = np.diag(diag)
    for i in range(12):
        for j in range(i + 1, 12):
            h[i, j] = h[j, i] = (q2(basis[i] + basis[j]) - diag[i] - diag[j]) / 2.0
    mu, e = np.linalg.eigh(h)
    return mu, e


def _penalty_rows(v: Array, xi0: Array, eta0: Array) -> Array:
    """2x12 real matrix of the linearized penalty amplitude v^T w1."""
    rows = np.empty((2, 12))
    basis = np.eye(12)
    for k in range(12):
        dxi, deta = _real_tangent(basis[k])
        amp = v @ (np.kron(dxi, eta0) + np.kron(xi0, deta))
        rows[0, k] = amp.real
        rows[1, k] = amp.imag
    return rows


def _kernel_limit_ratio(mu: Array, e: Array, rows: Array) -> float:
    """Infimum of Q2 / |L d|^2 from the eigendecomposition of Q2 and the
    penalty rows L: zero when the penalty sees the Hessian kernel, otherwise
    the reciprocal largest eigenvalue of L Q2^+ L^T."""
    b = rows @ e
    mu_max = max(float(mu[-1]), 0.0)
    cut = max(1e-10 * mu_max, 1e-12)
    null = mu <= cut
    row_scale = float(np.linalg.norm(rows))
    if row_scale < 1e-12:
        return math.inf
    if null.any() and float(np.linalg.norm(b[:, null])) > 1e-8 * row_scale:
        return 0.0
    pos = ~null
    if not pos.any():
        return math.inf
    m2 = (b[:, pos] / mu[pos]) @ b[:, pos].T
    top = float(np.linalg.eigvalsh(m2)[-1])
    return 1.0 / top if top > 1e-300 else math.inf


def optimality_probe(
    p: MapParams,
    n_directions: int = 64,
    p_max: float = 10.0,
    *,
    grid_n: int = 8,
    refine_steps: int = 250,
) -> OptimalityProbeReport:
    """Probe whether a completely positive direction can be subtracted from
    the map while keeping it block-positive.

    Directions sweep the unit sphere of the kernel orthocomplement (the full
    space when no kernel vector is known).  Per direction the measured
    quantity is the infimum over product vectors of the pairing ratio, from
    a grid scan plus Nelder-Mead descent on its logarithm; a candidate above
    the not-optimal threshold is re-verified by bisection against the
    block-positivity oracle.
    """
    if not math.isfinite(p_max) or p_max <= 0:
        raise ValueError(f"p_max must be positive, got {p_max}")
    w = choi_matrix(p)
    w_blocks = map_from_choi(w)

    try:
        basis = orthocomplement_basis(p)
    except UnsupportedCaseError:
        basis = [np.eye(9, dtype=complex)[k] for k in range(9)]
    if not basis:
        return OptimalityProbeReport(
            direction_count=0,
            max_subtractable=0.0,
            verdict="optimal",
            verification={"reason": "empty orthocomplement (spanning property)"},
        )

    basis_mat = np.array(basis)  # (dim, 9)
    coeffs = _sobol_directions(len(basis), n_directions)
    directions = coeffs @ basis_mat  # (ndir, 9)
    matrices = directions.reshape(-1, 3, 3)

    angles, xi_grid, projectors = _sphere_grid(grid_n)
    lam, u = np.linalg.eigh(np.einsum("nik,ijkl->njl", projectors, w_blocks))
    lam_floor = np.maximum(lam, 1e-18 * np.maximum(lam[:, -1:], 1.0))
    directions_b = np.einsum("dji,nj->dni", matrices, xi_grid)
    grid_ratios = _ratio_on_grid(lam, u, directions_b, lam_floor)

    kernels = sampled_kernel_vectors(p)
    hessians = [_kernel_hessian(w, pv.xi, pv.eta) for pv in kernels]

    best = 0.0
    best_dir = None
    per_direction = np.empty(len(directions))
    for d in range(len(directions)):
        r_best = math.inf
        for pv, (mu, e) in zip(kernels, hessians):
            r_best = min(r_best, _kernel_limit_ratio(mu, e, _penalty_rows(directions[d], pv.xi, pv.eta)))
            if r_best <= 0.0:
                break
        m = matrices[d]
        if r_best > OPTIMAL_TOL / 10:
            vals = grid_ratios[d]
            order = np.argsort(vals, kind="stable")[:3]
            r_best = min(r_best, float(vals[order[0]]))
            for idx in order:
                if r_best <= OPTIMAL_TOL / 10:
                    break
                res = minimize(
                    lambda x: math.log(min(max(_ratio_at(w_blocks, m, x), 1e-300), 1e9)),
                    angles[idx],
                    method="Nelder-Mead",
                    options={"maxiter": refine_steps, "xatol": 1e-13, "fatol": 1e-13},
                )
                if math.isfinite(res.fun):
                    r_best = min(r_best, math.exp(res.fun))
        per_direction[d] = min(r_best, p_max)
        if per_direction[d] > best:
            best = per_direction[d]
            best_dir = directions[d]

    verification: dict = {}
    verdict = "inconclusive"
    if best <= OPTIMAL_TOL:
        verdict = "optimal"
    elif best > NOT_OPTIMAL_TOL:
        vv = np.outer(best_dir, best_dir.conj())
        keep = block_positivity_oracle(w - 0.5 * best * vv, grid_n=grid_n).min_value
        brk = block_positivity_oracle(w - min(2.0 * best, p_max) * vv, grid_n=grid_n).min_value
        verification = {"oracle_at_half": keep, "oracle_at_double": brk}
        if keep >= -OPTIMAL_TOL:
            verdict = "not_optimal"
    return OptimalityProbeReport(
        direction_count=len(directions),
        max_subtractable=float(best),
        verdict=verdict,
        witness_direction=best_dir,
        verification=verification,
    )


# ---------------------------------------------------------------------------
# Co-optimality disproof on the sum-threshold face.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CooptimalitySubtraction:
    """Witnessed subtraction of a completely copositive map from a
    sum-threshold interior point: the subtracted matrix is again a positive
    family member at a rotated angle, so the point is not co-optimal."""

    p_value: float
    new_params: MapParams
    theta_prime: float


def cooptimality_subtraction(p: MapParams) -> CooptimalitySubtraction:
    """Subtract the completely copositive member (0, 1, 1; 0) from an
    interior point (1, b, c; theta) of the sum-threshold face.

    The weight is half the budget at which the rotated angle reaches pi/3 in
    magnitude, additionally capped by the smaller diagonal coefficient (the
    rescaled parameters must stay nonnegative).  Verifies the matrix identity
    entrywise to 1e-10, that the rescaled parameters are positive (hence the
    original map is not co-optimal), and the threshold sum identity to 1e-10.
    """
    pth = require_generic_theta(p.theta)
    a, b, c = p.abc
    if not (
        abs(a - 1.0) <= 1e-9
        and b > 1e-12
        and c > 1e-12
        and abs(b + c - (pth - 1.0)) <= 1e-9
        and 0.0 < abs(p.theta) < math.pi / 3.0
    ):
        raise UnsupportedCaseError(
            "subtraction requires an interior sum-threshold point (1, b, c; theta) "
            f"with 0 < |theta| < pi/3; got {p}"
        )
    weight = min(subtraction_budget(p.theta), b, c) / 2.0
    z = cmath.exp(1j * p.theta) - weight
    scale = abs(z)
    theta_prime = cmath.phase(z)
    new_params = MapParams(1.0 / scale, (b - weight) / scale, (c - weight) / scale, theta_prime)

    lhs = choi_matrix(p) - weight * choi_matrix(MapParams(0.0, 1.0, 1.0, 0.0))
    rhs = scale * choi_matrix(new_params)
    if np.abs(lhs - rhs).max() > 1e-10:
        raise AssertionError("subtraction matrix identity failed")
    sums = new_params.a + new_params.b + new_params.c
    if abs(sums - cp_threshold(theta_prime)) > 1e-10:
        raise AssertionError("subtraction threshold sum identity failed")
    from .positivity import is_positive

    if not is_positive(new_params):
        raise AssertionError("rescaled parameters are not positive")
    return CooptimalitySubtraction(weight, new_params, theta_prime)


# ---------------------------------------------------------------------------
# Full classification against the property table.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OptimalityClassification:
    face: FaceLabel
    row: PropertyRow
    evidence: dict


def classify_optimality(p: MapParams) -> OptimalityClassification:
    """Property-table row for a positive map, with the evidence source of
    each flag recorded.

    Spanning flags come from the closed forms with rank/determinant
    evidence; the optimal flag at the two non-spanning optimal vertices is
    certified analytically in the middle theta branch and numerically
    elsewhere; the co-optimality disproof on the sum-threshold face runs the
    explicit subtraction when the point is on its unit-first-coordinate
    slice.
    """
    from .spanning import has_cospanning_property, has_spanning_property

    face = classify_face(p)
    if face.kind is FaceKind.EXTERIOR:
        raise NotPositiveMapError(f"map {p} is not positive")
    evidence: dict = {"face": face.kind.value}
    if face.kind is FaceKind.INTERIOR:
        evidence["optimal"] = "interior point: smallest face is the whole body"
        return OptimalityClassification(
            face, PropertyRow(False, False, False, False), evidence
        )

    row = face_properties(face)
    span = has_spanning_property(p)
    cospan = has_cospanning_property(p)
    if span.has_property != row.spanning or cospan.has_property != row.co_spanning:
        raise AssertionError(f"closed-form spanning flags disagree with the table at {p}")
    evidence["spanning"] = {
        "source": "closed form",
        "rank": span.rank,
        "det_abs": span.det_abs,
        "det_closed_form": span.det_closed_form,
    }
    evidence["co_spanning"] = {
        "source": "closed form",
        "rank": cospan.rank,
        "det_abs": cospan.det_abs,
        "det_closed_form": cospan.det_closed_form,
    }

    if row.spanning:
        evidence["optimal"] = "spanning property implies optimality"
    elif row.optimal:
        side = _vertex_side(p)
        if side is not None and abs(p.theta) < math.pi / 3.0:
            if not vertex_optimality_analytic(p.theta, side):
                raise AssertionError(f"analytic vertex certificate failed at {p}")
            evidence["optimal"] = f"analytic vertex certificate ({side})"
        else:
            report = optimality_probe(p)
            if report.verdict != "optimal":
                raise AssertionError(f"numeric probe verdict {report.verdict} at {p}")
            evidence["optimal"] = "numeric subtraction probe"
    else:
        evidence["optimal"] = "facial structure (smallest face contains CP maps)"

    if row.co_spanning:
        evidence["co_optimal"] = "co-spanning property implies co-optimality"
    elif face.kind is FaceKind.F_ABC and abs(p.a - 1.0) <= 1e-9 and 0.0 < abs(p.theta) < math.pi / 3.0:
        sub = cooptimality_subtraction(p)
        evidence["co_optimal"] = {
            "source": "explicit copositive subtraction",
            "weight": sub.p_value,
            "theta_prime": sub.theta_prime,
        }
    else:
        evidence["co_optimal"] = "facial structure (smallest face contains CCP maps)"
    return OptimalityClassification(face, row, evidence)
