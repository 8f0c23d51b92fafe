import numpy as np
import pytest

from choimaps import (
    MapParams,
    NegativeInputError,
    NotApplicableError,
    block_positivity_oracle,
    choi_matrix,
    cp_threshold,
    cubic_form,
    cubic_form_gradient,
    edge_state,
    form_coefficients,
    hermitian_eigenvalues,
    indecomposability_certificate,
    is_completely_copositive,
    is_completely_positive,
    is_positive,
    pairing,
    partial_transpose,
    stationary_form_determinant,
)


def random_params(rng, amax=2.5):
    return MapParams(*rng.uniform(0.0, amax, 3), rng.uniform(-np.pi, np.pi))


class TestClosedForms:
    def test_completely_positive_examples(self):
        assert is_completely_positive(MapParams(2, 0, 0, 0))
        assert not is_completely_positive(MapParams(1.7, 5, 5, np.pi / 6))
        assert is_completely_positive(MapParams(1, 0, 0, np.pi / 3))

    def test_completely_copositive_examples(self):
        assert is_completely_copositive(MapParams(0, 2, 0.5, np.pi / 6))
        assert not is_completely_copositive(MapParams(5, 0.5, 0.5, 1.2))
        for t in (0.3, 1.0, 4.2):
            assert is_completely_copositive(MapParams(0, t, 1 / t, 0.7))

    def test_positive_examples(self):
        th = np.pi / 6
        assert is_positive(MapParams(1, cp_threshold(th) - 1, 0, th))
        assert not is_positive(MapParams(0.5, 0.1, 0.1, th))
        assert is_positive(MapParams(0.5, 1, 0.25, th))

    def test_cp_ccp_agree_with_spectra(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            p = random_params(rng)
            w = choi_matrix(p)
            cp_spec = hermitian_eigenvalues(w)[0] >= -1e-9
            ccp_spec = hermitian_eigenvalues(partial_transpose(w))[0] >= -1e-9
            if abs(p.a - cp_threshold(p.theta)) > 1e-8:
                assert is_completely_positive(p) == cp_spec
            if abs(p.b * p.c - 1.0) > 1e-8:
                assert is_completely_copositive(p) == ccp_spec


class TestCubicForm:
    def test_diagonal_identity(self):
        p = MapParams(1, 1, 0, 0)
        s = p.a + p.b + p.c
        assert cubic_form(p, 1, 1, 1) == pytest.approx(s**3 - 3 * s - 2, abs=1e-12)
        rng = np.random.default_rng(1)
        for _ in range(50):
            q = random_params(rng)
            x = rng.uniform(0.1, 2.0)
            s = q.a + q.b + q.c
            expected = (s**3 - 3 * s - 2 * np.cos(3 * q.theta)) * x**3
            assert cubic_form(q, x, x, x) == pytest.approx(expected, rel=1e-10, abs=1e-10)

    def test_face_restriction_instance(self):
        assert cubic_form(MapParams(1, 1, 0, 0), 0, 1, 1) == pytest.approx(1.0)

    def test_single_variable(self):
        rng = np.random.default_rng(2)
        p = random_params(rng)
        assert cubic_form(p, 1, 0, 0) == pytest.approx(p.a * p.b * p.c, abs=1e-12)

    def test_homogeneous(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            p = random_params(rng)
            x, y, z = rng.uniform(0, 2, 3)
            lam = rng.uniform(0.1, 3.0)
            f1 = cubic_form(p, lam * x, lam * y, lam * z)
            f2 = lam**3 * cubic_form(p, x, y, z)
            assert abs(f1 - f2) <= 1e-10 * max(1.0, abs(f2))

    def test_negative_input_rejected(self):
        with pytest.raises(NegativeInputError):
            cubic_form(MapParams(1, 1, 1, 0), -0.1, 1, 1)

    def test_matches_map_determinant_on_projectors(self):
        # det of the map applied to a rank-1 projector equals the form at
        # the squared moduli (phases cancel)
        rng = np.random.default_rng(4)
        from choimaps import apply_map

        for _ in range(100):
            p = random_params(rng)
            v = rng.normal(size=3) + 1j * rng.normal(size=3)
            det = np.linalg.det(apply_map(p, np.outer(v, v.conj()))).real
            form = cubic_form(p, *(np.abs(v) ** 2))
            assert abs(det - form) <= 1e-9 * max(1.0, abs(form))

    def test_minor_bound(self):
        # second-diagonal 2x2 minor of the map on a projector dominates the
        # x=0 restriction of the form divided by its linear factor
        rng = np.random.default_rng(5)
        for _ in range(100):
            p = random_params(rng)
            if not is_positive(p):
                continue
            a, b, c = p.abc
            x, y, z = rng.uniform(0.0, 2.0, 3)
            if b * y + c * z <= 1e-9:
                continue
            minor = (c * x + a * y + b * z) * (b * x + c * y + a * z) - y * z
            bound = cubic_form(p, 0.0, y, z) / (b * y + c * z)
            assert minor >= bound - 1e-9


class TestGradient:
    def test_coefficient_instance(self):
        fc = form_coefficients(MapParams(1, 1, 0, 0))
        assert fc.p == 0.0
        assert fc.q == pytest.approx(1.0)
        assert fc.r == pytest.approx(0.0)
        assert fc.s == pytest.approx(-1.5)

    def test_coefficient_invariants(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            p = random_params(rng)
            fc = form_coefficients(p)
            assert fc.p == 3.0 * p.a * p.b * p.c
            two_s = p.a**3 + p.b**3 + p.c**3 + 3 * p.a * p.b * p.c - 3 * p.a - 2 * np.cos(3 * p.theta)
            assert abs(2 * fc.s - two_s) <= 1e-12 * max(1.0, abs(two_s))

    def test_symmetric_point(self):
        p = MapParams(0.8, 1.3, 0.4, 0.9)
        gx, gy, gz = cubic_form_gradient(p, 1, 1, 1)
        assert gx == pytest.approx(gy)
        assert gy == pytest.approx(gz)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(7)
        h = 1e-5
        for _ in range(100):
            p = random_params(rng)
            x, y, z = rng.uniform(0.1, 3.0, 3)
            g = cubic_form_gradient(p, x, y, z)
            fd = (
                (cubic_form(p, x + h, y, z) - cubic_form(p, x - h, y, z)) / (2 * h),
                (cubic_form(p, x, y + h, z) - cubic_form(p, x, y - h, z)) / (2 * h),
                (cubic_form(p, x, y, z + h) - cubic_form(p, x, y, z - h)) / (2 * h),
            )
            for u, v in zip(g, fd):
                assert abs(u - v) <= 1e-6 * max(1.0, abs(v))

    def test_stationary_combination_expansion(self):
        # the circulant combination of the gradient forms expands into
        # sum-of-squares and sum-of-products parts
        rng = np.random.default_rng(8)
        p = random_params(rng)
        fc = form_coefficients(p)
        d = fc.p + fc.q + fc.r
        e = fc.q + fc.r + fc.s
        m = np.array([[d, e, e], [e, d, e], [e, e, d]])
        for _ in range(20):
            v = rng.normal(size=3)
            lhs = v @ m @ v
            rhs = d * (v @ v) + 2 * e * (v[0] * v[1] + v[1] * v[2] + v[2] * v[0])
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    def test_stationary_determinant(self):
        assert stationary_form_determinant(MapParams(1, 1, 0, 0)) == pytest.approx(0.0, abs=1e-12)
        rng = np.random.default_rng(9)
        for _ in range(100):
            p = random_params(rng)
            stationary_form_determinant(p)  # internal direct-vs-factored assert

    def test_second_factor_sign_on_threshold_plane(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            th = rng.uniform(-np.pi, np.pi)
            pth = cp_threshold(th)
            a = rng.uniform(0, min(1.0, pth))
            b = rng.uniform(0, pth - a)
            p = MapParams(a, b, pth - a - b, th)
            s = a + b + (pth - a - b)
            assert s**3 - 3 * s - 2 * np.cos(3 * th) >= -1e-9


class TestBlockPositivityOracle:
    def test_vertex_map_is_block_positive(self):
        th = np.pi / 6
        w = choi_matrix(MapParams(1, cp_threshold(th) - 1, 0, th))
        report = block_positivity_oracle(w, grid_n=10, refine_steps=120)
        assert report.min_value >= -1e-6

    def test_violating_map_yields_witness(self):
        p = MapParams(0.5, 0.1, 0.1, np.pi / 6)
        report = block_positivity_oracle(choi_matrix(p), grid_n=10, refine_steps=120)
        assert report.min_value < -1e-4
        assert report.status == "negative"
        # the reported product vector reproduces the reported minimum
        z = np.kron(report.argmin_xi, report.argmin_eta)
        value = pairing(np.outer(z, z.conj()), p)
        assert abs(value - report.min_value) <= 1e-9
        assert np.linalg.norm(report.argmin_xi) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(report.argmin_eta) == pytest.approx(1.0, abs=1e-12)

    def test_psd_matrix_is_block_positive(self):
        report = block_positivity_oracle(edge_state(1.0, np.pi / 6), grid_n=8, refine_steps=80)
        assert report.min_value >= -1e-9
        assert report.status == "nonnegative"
        assert report.grid_points == 8**4


class TestIndecomposability:
    def test_certificate_instance(self):
        cert = indecomposability_certificate(MapParams(0.5, 1, 0.25, np.pi / 6))
        assert cert is not None
        assert abs(cert.value - 1.5 * (np.sqrt(3.0) - 2.0)) <= 1e-6
        assert cert.state_params.a == pytest.approx(np.sqrt(3.0))
        assert cert.state_params.b == pytest.approx(0.5)

    def test_no_certificate_at_collapsed_angles(self):
        # rotated threshold is exactly 2 at theta = pi/3: value 0, no certificate
        th = np.pi / 3
        p = MapParams(0.5, 1, 0.25, th)
        assert indecomposability_certificate(p) is None

    def test_not_applicable_cases(self):
        with pytest.raises(NotApplicableError):
            indecomposability_certificate(MapParams(0.5, 1, 0.25, 0.0))
        with pytest.raises(NotApplicableError):
            indecomposability_certificate(MapParams(1, np.sqrt(3.0) - 1, 0, np.pi / 6))
        with pytest.raises(NotApplicableError):
            indecomposability_certificate(MapParams(0.5, 1, 1, np.pi / 6))

    def test_zero_value_at_copositive_vertex(self):
        # a = 0, b*c = 1 gives value 0: no certificate
        assert indecomposability_certificate(MapParams(0, 2, 0.5, np.pi / 6)) is None
