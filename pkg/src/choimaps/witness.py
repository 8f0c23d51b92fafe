"""Construction of optimal PPTES witnesses detecting the edge states.

For an edge state with angle theta and parameter b, the witness ansatz is a
9x9 matrix with diagonal pattern built from three positive numbers
(alpha~, beta~, gamma~) and off-diagonal entries 1 + e^{+-i theta}; it is a
positive multiple of a family member at the rotated angle pi - theta/2 whose
normalized parameters sit on the bi-spanning part of the boundary curve.
The quadratic system fixing (beta~, gamma~) from alpha~ keeps them there.
Detection is decided by the direct trace pairing against the unnormalized
edge state.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoDetectingChoiceError, OutOfRangeError, ThetaOutOfRangeError
from .linalg import Array, hermitian_eigenvalues, partial_transpose
from .maps import MapParams, choi_matrix, cp_threshold, edge_state, pairing_value
from .positivity import block_positivity_oracle

ALPHA_MARGIN = 1e-3  # auto-scan margin, relative to the interval width


def _check_theta(theta: float) -> float:
    if not 0.0 < abs(theta) < math.pi / 3.0:
        raise ThetaOutOfRangeError(f"witness construction requires 0 < |theta| < pi/3, got {theta}")
    return math.cos(theta / 2.0)


def alpha_range(theta: float) -> tuple[float, float]:
    """Open interval of admissible alpha~ values, (2t(2 - t - sqrt(3(1-t^2))), 2t)
    with t = cos(theta/2); always nonempty on the admissible angles."""
    t = _check_theta(theta)
    root = math.sqrt(3.0 * (1.0 - t * t))
    return (2.0 * t * (2.0 - t - root), 2.0 * t)


def solve_beta_gamma(theta: float, alpha_tilde: float) -> tuple[float, float]:
    """The two positive roots (descending) of
    x^2 - [2t(t + sqrt(3(1-t^2))) - alpha~] x + (2t - alpha~)^2 = 0.

    Requires alpha~ in the admissible interval (the lower endpoint is
    allowed and gives a double root); the discriminant is nonnegative there.
    """
    t = _check_theta(theta)
    lo, hi = alpha_range(theta)
    if not lo - 1e-12 <= alpha_tilde < hi - 1e-12:
        raise OutOfRangeError(
            f"alpha~ must lie in [{lo!r}, {hi!r}) for theta={theta}, got {alpha_tilde}"
        )
    s = 2.0 * t * (t + math.sqrt(3.0 * (1.0 - t * t))) - alpha_tilde
    prod = (2.0 * t - alpha_tilde) ** 2
    disc = s * s - 4.0 * prod
    if disc < -1e-12:
        raise AssertionError(f"negative discriminant {disc} inside the admissible interval")
    half = math.sqrt(max(disc, 0.0)) / 2.0
    beta, gamma = s / 2.0 + half, s / 2.0 - half
    if beta <= 0 or gamma <= 0:
        raise AssertionError(f"roots not positive: {(beta, gamma)}")
    return beta, gamma


def witness_matrix(theta: float, alpha_tilde: float, b_slot: float, c_slot: float) -> Array:
    """The unnormalized witness ansatz: diagonal pattern
    (alpha~, c_slot, b_slot, ...) scaled by nothing, off-diagonals
    1 + e^{-i theta} at (0,4), (4,8), (8,0) and conjugates transposed.

    Equals 2cos(theta/2) times the family Choi matrix at parameters
    (alpha~, b_slot, c_slot) / (2cos(theta/2)) and angle pi - theta/2.
    """
    w = np.zeros((9, 9), dtype=complex)
    diag = (alpha_tilde, c_slot, b_slot, b_slot, alpha_tilde, c_slot, c_slot, b_slot, alpha_tilde)
    for k, v in enumerate(diag):
        w[k, k] = v
    e = cmath.exp(1j * theta)
    for u, v in ((0, 4), (4, 8), (8, 0)):
        w[u, v] = 1.0 + e.conjugate()
        w[v, u] = 1.0 + e
    return w


@dataclass(frozen=True)
class WitnessSpec:
    """A constructed witness and its validation data.

    ``matrix`` is the unnormalized ansatz; ``scale`` is the trace-style
    normalization factor 2t / (3(alpha~ + beta~ + gamma~)) of the normalized
    witness; ``detection_value`` is the direct trace pairing of the
    unnormalized ansatz against the unnormalized edge state (negative means
    the witness detects it); ``normalized_params`` are the family parameters
    of ``matrix`` / (2t) at angle pi - theta/2.
    """

    theta: float
    b: float
    t: float
    alpha_tilde: float
    beta_tilde: float
    gamma_tilde: float
    normalized_params: MapParams
    scale: float
    detection_value: float
    matrix: Array
    b_slot: float
    c_slot: float

    @property
    def detects(self) -> bool:
        return self.detection_value < 0.0


def _assemble(theta: float, b: float, alpha_tilde: float, beta: float, gamma: float,
              b_slot: float, c_slot: float) -> WitnessSpec:
    t = math.cos(theta / 2.0)
    w = witness_matrix(theta, alpha_tilde, b_slot, c_slot)
    params = MapParams(
        alpha_tilde / (2.0 * t), b_slot / (2.0 * t), c_slot / (2.0 * t), math.pi - theta / 2.0
    )
    detection = pairing_value(edge_state(b, theta), w)
    return WitnessSpec(
        theta=theta,
        b=b,
        t=t,
        alpha_tilde=alpha_tilde,
        beta_tilde=beta,
        gamma_tilde=gamma,
        normalized_params=params,
        scale=2.0 * t / (3.0 * (alpha_tilde + beta + gamma)),
        detection_value=detection,
        matrix=w,
        b_slot=b_slot,
        c_slot=c_slot,
    )


def _validate(spec: WitnessSpec) -> None:
    """Check the constructed witness is block-positive but neither PSD nor
    co-PSD, with normalized parameters on the bi-spanning boundary piece."""
    from .spanning import has_cospanning_property, has_spanning_property

    if hermitian_eigenvalues(spec.matrix)[0] >= -1e-6:
        raise AssertionError("witness is PSD within tolerance; it cannot detect anything")
    if hermitian_eigenvalues(partial_transpose(spec.matrix))[0] >= -1e-6:
        raise AssertionError("witness is co-PSD within tolerance")
    if block_positivity_oracle(spec.matrix).min_value < -1e-6:
        raise AssertionError("witness failed the block-positivity oracle")
    if not has_spanning_property(spec.normalized_params).has_property:
        raise AssertionError("normalized parameters lost the spanning property")
    if not has_cospanning_property(spec.normalized_params).has_property:
        raise AssertionError("normalized parameters lost the co-spanning property")


def build_witness(
    theta: float, b: float, alpha_tilde: float | None = None, validate: bool = True
) -> WitnessSpec:
    """Construct a witness for the edge state with parameters (b, theta).

    With ``alpha_tilde`` given, the quadratic roots are placed in the two
    diagonal slots both ways and the assignment with the smaller detection
    pairing is kept (a nonnegative pairing is allowed but flagged through
    ``detects``).  Without it, 64 samples across the admissible interval
    (with a relative margin of 1e-3 at both ends) are scanned over both
    assignments and the minimizer is kept; if no choice pairs below -1e-9,
    NoDetectingChoiceError is raised.
    """
    _check_theta(theta)
    if not b > 0:
        raise ValueError(f"witness construction requires b > 0, got {b}")

    def candidates(at: float):
        beta, gamma = solve_beta_gamma(theta, at)
        yield at, beta, gamma, beta, gamma
        yield at, beta, gamma, gamma, beta

    best: WitnessSpec | None = None
    if alpha_tilde is not None:
        for at, beta, gamma, bs, cs in candidates(alpha_tilde):
            spec = _assemble(theta, b, at, beta, gamma, bs, cs)
            if best is None or spec.detection_value < best.detection_value:
                best = spec
    else:
        lo, hi = alpha_range(theta)
        margin = ALPHA_MARGIN * (hi - lo)
        for at in np.linspace(lo + margin, hi - margin, 64):
            for at_, beta, gamma, bs, cs in candidates(float(at)):
                spec = _assemble(theta, b, at_, beta, gamma, bs, cs)
                if best is None or spec.detection_value < best.detection_value:
                    best = spec
        if best is None or best.detection_value >= -1e-9:
            raise NoDetectingChoiceError(
                f"no scanned alpha~ detects the edge state at theta={theta}, b={b}"
            )
    assert best is not None
    if validate:
        _validate(best)
    return best


def edge_kernel_vectors(b: float, theta: float) -> tuple[Array, Array, Array, Array]:
    """The kernel 9-vector of the edge state and the three kernel 9-vectors
    of its partial transpose.

    Validated: the pairing of the first against the edge state and of the
    others against its partial transpose vanish to 1e-10.
    """
    _check_theta(theta)
    if not b > 0:
        raise ValueError(f"b must be positive, got {b}")
    e = cmath.exp(1j * theta)
    sb = math.sqrt(b)
    z = np.zeros(9, dtype=complex)
    z[[0, 4, 8]] = 1.0
    w1 = np.zeros(9, dtype=complex)
    w1[1], w1[3] = sb, e / sb
    w2 = np.zeros(9, dtype=complex)
    w2[5], w2[7] = sb, e / sb
    w3 = np.zeros(9, dtype=complex)
    w3[2], w3[6] = e / sb, sb

    rho = edge_state(b, theta)
    rho_pt = partial_transpose(rho)
    if abs(pairing_value(np.outer(z, z.conj()), rho)) > 1e-10:
        raise AssertionError("state kernel vector pairing is nonzero")
    for w in (w1, w2, w3):
        if abs(pairing_value(np.outer(w, w.conj()), rho_pt)) > 1e-10:
            raise AssertionError("partial-transpose kernel vector pairing is nonzero")
    return z, w1, w2, w3


def equal_subtraction_restriction(b: float, theta: float) -> bool:
    """Whether the equal-parameter witness shortcut can be optimal at
    (b, theta): requires b + 1/b <= 2 - sqrt(3) + sqrt(6 sqrt(3) - 6) and
    cos(theta/2) <= (3 + sqrt(21)) / 8."""
    if not b > 0:
        raise ValueError(f"b must be positive, got {b}")
    bound_b = 2.0 - math.sqrt(3.0) + math.sqrt(6.0 * math.sqrt(3.0) - 6.0)
    bound_t = (3.0 + math.sqrt(21.0)) / 8.0
    return b + 1.0 / b <= bound_b and math.cos(theta / 2.0) <= bound_t


def detection_closed_form(theta: float, b: float, alpha_tilde: float,
                          b_slot: float, c_slot: float) -> float:
    """Detection pairing of the unnormalized ansatz against the edge state
    via the family pairing identity; independent of the 9x9 trace route."""
    t = math.cos(theta / 2.0)
    pth = cp_threshold(theta)
    return 3.0 * (pth * alpha_tilde + b * b_slot + c_slot / b - 4.0 * t * t)
