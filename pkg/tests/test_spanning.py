import numpy as np
import pytest

from choimaps import (
    MapParams,
    NotPositiveMapError,
    ProductVector,
    UnsupportedCaseError,
    boundary_parametrization,
    cp_threshold,
    has_cospanning_property,
    has_spanning_property,
    kernel_family,
    kernel_membership,
    pairing,
)
from choimaps.spanning import (
    DEFAULT_TRIPLES,
    _boundary_case,
    _equal_modulus_vector,
    cospanning_columns,
    cospanning_det_closed_form,
    sampled_kernel_vectors,
    spanning_det_closed_form,
)


def surface_point(rng, theta):
    """Random parameters on b*c = (1-a)^2 with sum above the threshold."""
    pth = cp_threshold(theta)
    while True:
        a = rng.uniform(0.05, 0.95)
        b = rng.uniform(0.1, 2.5)
        c = (1 - a) ** 2 / b
        if a + b + c > pth + 1e-3:
            return MapParams(a, b, c, theta)


def generic_theta(rng):
    while True:
        th = rng.uniform(-np.pi, np.pi)
        if 1 + 1e-3 < cp_threshold(th) < 2 - 1e-3:
            return th


class TestKernelMembership:
    def test_surface_family_member(self):
        p = MapParams(0.5, 1, 0.25, np.pi / 6)
        pv = kernel_family(p)[0]
        assert kernel_membership(p, pv)

    def test_basis_tensor_not_in_kernel(self):
        e1 = np.array([1.0, 0, 0], dtype=complex)
        assert not kernel_membership(MapParams(1, 1, 0, 0), ProductVector(e1, e1))

    def test_equal_modulus_member_on_sum_face(self):
        th = np.pi / 6
        pth = cp_threshold(th)
        p = MapParams(1, (pth - 1) / 2, (pth - 1) / 2, th)
        pv = ProductVector(np.ones(3, complex), np.ones(3, complex))
        assert kernel_membership(p, pv)

    def test_requires_positive_map(self):
        e1 = np.array([1.0, 0, 0], dtype=complex)
        with pytest.raises(NotPositiveMapError):
            kernel_membership(MapParams(0.1, 0.1, 0.1, np.pi / 6), ProductVector(e1, e1))


class TestKernelFamily:
    def test_surface_case_nine_members(self):
        p = MapParams(0.5, 1, 0.25, np.pi / 6)
        vectors = kernel_family(p)
        assert len(vectors) == 9
        for pv in vectors:
            assert kernel_membership(p, pv)

    def test_copositive_case_members(self):
        # nine canonical vectors plus the three diagonal axis vectors
        p = MapParams(0, 2, 0.5, np.pi / 6)
        vectors = kernel_family(p)
        assert len(vectors) == 12
        for pv in vectors:
            assert kernel_membership(p, pv)

    def test_sum_face_interior_only_equal_modulus(self):
        th = np.pi / 6
        pth = cp_threshold(th)
        p = MapParams(1.2, (pth - 1.2) / 2, (pth - 1.2) / 2, th)
        vectors = kernel_family(p)
        assert len(vectors) == len(DEFAULT_TRIPLES)
        for pv in vectors:
            assert np.allclose(np.abs(pv.xi), np.abs(pv.xi)[0])

    def test_generic_interior_unsupported(self):
        with pytest.raises(UnsupportedCaseError):
            kernel_family(MapParams(2, 2, 2, np.pi / 6))

    def test_zero_pairing_invariant(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            th = generic_theta(rng)
            p = surface_point(rng, th)
            for pv in kernel_family(p):
                z = pv.tensor()
                value = pairing(np.outer(z, z.conj()), p)
                scale = float(np.vdot(z, z).real)
                assert abs(value) <= 1e-9 * max(1.0, scale)

    def test_equal_modulus_branches(self):
        rng = np.random.default_rng(1)
        for th in (-2.8, -1.5, 0.4, 1.5, 2.8):
            if not 1 + 1e-6 < cp_threshold(th) < 2 - 1e-6:
                continue
            a, b, c = boundary_parametrization(th, 1.3)
            p = MapParams(a, b, c, th)
            for al, be, ga in DEFAULT_TRIPLES:
                pv = _equal_modulus_vector(th, al, be, ga)
                assert kernel_membership(p, pv)


class TestSpanningProperty:
    def test_surface_case_instance(self):
        report = has_spanning_property(MapParams(0.5, 1, 0.25, np.pi / 6))
        assert report
        assert report.case == "i"
        assert report.rank == 9
        assert report.det_abs == pytest.approx(4.0, abs=1e-8)
        assert report.det_closed_form == pytest.approx(4.0, abs=1e-8)

    def test_vertex_is_not_spanning(self):
        th = np.pi / 6
        report = has_spanning_property(MapParams(1, cp_threshold(th) - 1, 0, th))
        assert not report
        assert report.rank is not None and report.rank < 9

    def test_copositive_case_instance(self):
        report = has_spanning_property(MapParams(0, 2, 0.5, np.pi / 6))
        assert report
        expected = 512 * np.sqrt(65.0)
        assert report.det_abs == pytest.approx(expected, rel=1e-8)
        assert report.det_closed_form == pytest.approx(expected, rel=1e-8)
        assert report.rank == 9

    def test_det_oracle_on_random_surface_points(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            th = generic_theta(rng)
            p = surface_point(rng, th)
            report = has_spanning_property(p)
            assert report
            assert report.det_abs == pytest.approx(report.det_closed_form, rel=1e-8)

    def test_verdict_matches_rank_on_family_points(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            th = generic_theta(rng)
            p = surface_point(rng, th)
            report = has_spanning_property(p)
            assert report.has_property == (report.rank == 9)


class TestCospanningProperty:
    def test_sum_surface_point(self):
        a, b, c = boundary_parametrization(np.pi / 6, 1.0)
        report = has_cospanning_property(MapParams(a, b, c, np.pi / 6))
        assert report
        assert report.rank == 9
        assert report.det_abs == pytest.approx(report.det_closed_form, rel=1e-8)

    def test_sum_face_interior_is_not_cospanning(self):
        th = np.pi / 6
        pth = cp_threshold(th)
        report = has_cospanning_property(MapParams(1, (pth - 1) / 2, (pth - 1) / 2, th))
        assert not report
        assert report.rank is not None and report.rank < 9

    def test_coordinate_edge_is_cospanning(self):
        th = np.pi / 6
        report = has_cospanning_property(MapParams(1.2, 0, np.sqrt(3.0) - 1.2, th))
        assert report
        assert report.rank == 9

    def test_named_vertices_cospanning_with_full_rank(self):
        th = -np.pi / 4
        pth = cp_threshold(th)
        for abc in ((1, pth - 1, 0), (1, 0, pth - 1)):
            report = has_cospanning_property(MapParams(*abc, th))
            assert report
            assert report.rank == 9

    def test_branchwise_det_oracle(self):
        rng = np.random.default_rng(4)
        count = 0
        while count < 50:
            th = generic_theta(rng)
            t = rng.uniform(0.2, 4.0)
            a, b, c = boundary_parametrization(th, t)
            if a > 1 - 1e-3 or a < 2 - cp_threshold(th) + 1e-3:
                pass  # keep interior margin but all curve points qualify
            p = MapParams(a, b, c, th)
            report = has_cospanning_property(p)
            assert report
            assert report.det_abs == pytest.approx(report.det_closed_form, rel=1e-8)
            assert report.det_abs > 1e-10  # nonvanishing below threshold 2
            count += 1

    def test_columns_exist_only_on_sum_surface_case(self):
        assert cospanning_columns(MapParams(0.5, 1, 0.25, np.pi / 6)) is None
        assert cospanning_det_closed_form(MapParams(0, 2, 0.5, np.pi / 6)) is None


class TestCaseDetection:
    def test_cases(self):
        th = np.pi / 6
        pth = cp_threshold(th)
        assert _boundary_case(MapParams(0.5, 1, 0.25, th)) == "i"
        a, b, c = boundary_parametrization(th, 2.0)
        assert _boundary_case(MapParams(a, b, c, th)) == "ii"
        assert _boundary_case(MapParams(0, 2, 0.5, th)) == "iii"
        assert _boundary_case(MapParams(1.2, (pth - 1.2), 0, th)) == "iv"
        assert _boundary_case(MapParams(2, 2, 2, th)) is None

    def test_spanning_closed_forms_defined_per_case(self):
        th = np.pi / 6
        assert spanning_det_closed_form(MapParams(0.5, 1, 0.25, th)) is not None
        assert spanning_det_closed_form(MapParams(2, 2, 2, th)) is None


class TestSampledKernel:
    def test_axis_fallback_off_the_cases(self):
        p = MapParams(1.5, 0.5, 0, np.pi / 6)
        vectors = sampled_kernel_vectors(p)
        assert len(vectors) == 3
        for pv in vectors:
            assert kernel_membership(p, pv)

    def test_empty_for_strict_interior(self):
        assert sampled_kernel_vectors(MapParams(2, 2, 2, np.pi / 6)) == []


def test_product_vector_validation():
    with pytest.raises(ValueError):
        ProductVector(np.zeros(3), np.ones(3))
    pv = ProductVector(np.array([1, 0, 0]), np.array([0, 1j, 0]))
    assert pv.tensor()[1] == 1j
    assert pv.partial_conjugate().eta[1] == -1j
