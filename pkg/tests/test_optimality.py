import cmath

import numpy as np
import pytest

from choimaps import (
    FaceKind,
    MapParams,
    NotPositiveMapError,
    UnsupportedCaseError,
    UnsupportedThetaError,
    block_positivity_oracle,
    boundary_parametrization,
    choi_matrix,
    classify_face,
    classify_optimality,
    cooptimality_subtraction,
    cp_threshold,
    face_properties,
    optimality_probe,
    orthocomplement_basis,
    subtraction_budget,
    vertex_optimality_analytic,
)


class TestOrthocomplement:
    def test_vertex_basis_is_diagonal_with_zero_sum(self):
        th = np.pi / 6
        p = MapParams(1, cp_threshold(th) - 1, 0, th)
        basis = orthocomplement_basis(p)
        assert len(basis) == 2
        off = [k for k in range(9) if k not in (0, 4, 8)]
        for v in basis:
            assert np.abs(np.asarray(v)[off]).max() <= 1e-9
            assert abs(v[0] + v[4] + v[8]) <= 1e-9

    def test_spanning_point_has_empty_basis(self):
        a, b, c = boundary_parametrization(np.pi / 6, 2.0)
        assert orthocomplement_basis(MapParams(a, b, c, np.pi / 6)) == []

    def test_sum_face_interior_dimension(self):
        th = np.pi / 6
        pth = cp_threshold(th)
        basis = orthocomplement_basis(MapParams(1.2, (pth - 1.2) / 2, (pth - 1.2) / 2, th))
        assert len(basis) == 2

    def test_strict_interior_unsupported(self):
        with pytest.raises(UnsupportedCaseError):
            orthocomplement_basis(MapParams(2, 2, 2, np.pi / 6))


class TestVertexAnalytic:
    def test_both_sides(self):
        assert vertex_optimality_analytic(np.pi / 6, "b_side")
        assert vertex_optimality_analytic(np.pi / 4, "c_side")

    def test_small_angle(self):
        assert vertex_optimality_analytic(0.05, "b_side")

    def test_negative_angles(self):
        assert vertex_optimality_analytic(-np.pi / 6, "b_side")
        assert vertex_optimality_analytic(-np.pi / 4, "c_side")

    def test_out_of_branch_rejected(self):
        with pytest.raises(UnsupportedThetaError):
            vertex_optimality_analytic(np.pi / 2, "b_side")
        with pytest.raises(UnsupportedThetaError):
            vertex_optimality_analytic(0.0, "b_side")

    def test_bad_vertex_name(self):
        with pytest.raises(ValueError):
            vertex_optimality_analytic(np.pi / 6, "diagonal")


class TestProbe:
    def test_vertex_is_optimal(self):
        th = np.pi / 6
        report = optimality_probe(MapParams(1, cp_threshold(th) - 1, 0, th))
        assert report.verdict == "optimal"
        assert report.max_subtractable <= 1e-9
        assert report.direction_count == 64

    def test_coordinate_face_interior_not_optimal(self):
        report = optimality_probe(MapParams(1.5, 0.5, 0, np.pi / 6))
        assert report.verdict == "not_optimal"
        assert report.max_subtractable > 1e-6
        assert report.witness_direction is not None
        assert report.verification["oracle_at_half"] >= -1e-9
        # tightness: doubling the subtraction breaks block-positivity
        assert report.verification["oracle_at_double"] < -1e-9

    def test_completely_positive_map_not_optimal(self):
        report = optimality_probe(MapParams(2.0, 0, 0, np.pi / 6))
        assert report.verdict == "not_optimal"
        assert report.max_subtractable > 1e-6

    def test_spanning_point_trivially_optimal(self):
        a, b, c = boundary_parametrization(np.pi / 6, 2.0)
        report = optimality_probe(MapParams(a, b, c, np.pi / 6))
        assert report.verdict == "optimal"
        assert report.direction_count == 0

    def test_agrees_with_analytic_certificate(self):
        for th in (np.pi / 12, -np.pi / 12, np.pi / 6, -np.pi / 6, np.pi / 4, -np.pi / 4):
            pth = cp_threshold(th)
            assert vertex_optimality_analytic(th, "b_side")
            report = optimality_probe(MapParams(1, pth - 1, 0, th), p_max=10.0)
            assert report.verdict == "optimal", (th, report.max_subtractable)

    def test_other_branch_vertex_via_probe(self):
        # outside the analytic branch the numeric probe still certifies
        th = 2.0
        pth = cp_threshold(th)
        assert 1 < pth < 2
        report = optimality_probe(MapParams(1, pth - 1, 0, th))
        assert report.verdict == "optimal"


class TestCooptimalitySubtraction:
    def test_instance(self):
        th = np.pi / 6
        pth = cp_threshold(th)
        sub = cooptimality_subtraction(MapParams(1, (pth - 1) / 2, (pth - 1) / 2, th))
        assert sub.p_value > 0
        assert abs(sub.theta_prime) < np.pi / 3
        assert sub.p_value == pytest.approx(min(subtraction_budget(th), (pth - 1) / 2) / 2)

    def test_identities_on_random_interior_points(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            th = rng.uniform(0.05, np.pi / 3 - 0.05) * rng.choice([-1.0, 1.0])
            pth = cp_threshold(th)
            lam = rng.uniform(0.1, 0.9)
            p = MapParams(1, lam * (pth - 1), (1 - lam) * (pth - 1), th)
            sub = cooptimality_subtraction(p)  # internal identity asserts
            assert abs(sub.theta_prime) < np.pi / 3
            s = sub.new_params.a + sub.new_params.b + sub.new_params.c
            assert abs(s - cp_threshold(sub.theta_prime)) <= 1e-10

    def test_small_weight_continuity(self):
        # the subtraction identity degenerates continuously at tiny weight
        th, b = np.pi / 6, 0.3
        pth = cp_threshold(th)
        c = pth - 1 - b
        weight = 1e-9
        z = cmath.exp(1j * th) - weight
        lhs = choi_matrix(MapParams(1, b, c, th)) - weight * choi_matrix(MapParams(0, 1, 1, 0))
        rhs = abs(z) * choi_matrix(
            MapParams(1 / abs(z), (b - weight) / abs(z), (c - weight) / abs(z), cmath.phase(z))
        )
        assert np.abs(lhs - rhs).max() <= 1e-10
        assert np.abs(rhs - choi_matrix(MapParams(1, b, c, th))).max() <= 1e-8

    def test_unsupported_points(self):
        th = np.pi / 6
        pth = cp_threshold(th)
        with pytest.raises(UnsupportedCaseError):
            cooptimality_subtraction(MapParams(1, pth - 1, 0, th))  # b*c = 0
        with pytest.raises(UnsupportedCaseError):
            cooptimality_subtraction(MapParams(1.2, 0.2, pth - 1.4, th))  # a != 1


class TestClassifyOptimality:
    def test_named_vertex(self):
        th = np.pi / 6
        cls = classify_optimality(MapParams(1, 0, cp_threshold(th) - 1, th))
        assert cls.row.optimal and not cls.row.spanning
        assert "analytic vertex certificate" in cls.evidence["optimal"]

    def test_product_surface_edge(self):
        cls = classify_optimality(MapParams(0.5, 1, 0.25, np.pi / 6))
        assert cls.row.spanning and cls.row.optimal and not cls.row.co_optimal

    def test_copositive_face_interior(self):
        cls = classify_optimality(MapParams(0, 2, 1, np.pi / 6))
        assert not any(
            [cls.row.spanning, cls.row.co_spanning, cls.row.optimal, cls.row.co_optimal]
        )

    def test_sum_face_interior_records_subtraction(self):
        th = np.pi / 6
        pth = cp_threshold(th)
        cls = classify_optimality(MapParams(1, (pth - 1) / 2, (pth - 1) / 2, th))
        assert not cls.row.co_optimal
        assert cls.evidence["co_optimal"]["source"] == "explicit copositive subtraction"

    def test_interior_point_all_negative(self):
        cls = classify_optimality(MapParams(2, 2, 2, np.pi / 6))
        assert cls.face.kind is FaceKind.INTERIOR
        assert not cls.row.optimal

    def test_exterior_rejected(self):
        with pytest.raises(NotPositiveMapError):
            classify_optimality(MapParams(0.1, 0.1, 0.1, np.pi / 6))

    def test_rows_match_table_for_every_face(self):
        th = np.pi / 6
        pth = cp_threshold(th)
        mid = (1 + pth) / 2
        reps = {
            FaceKind.F_ABC: (1, (pth - 1) / 2, (pth - 1) / 2),
            FaceKind.F_AB: (1.5, 0.5, 0),
            FaceKind.F_AC: (1.5, 0, 0.5),
            FaceKind.F_BC: (0, 2, 1),
            FaceKind.E_A: (2.2, 0, 0),
            FaceKind.E_B: (1, pth - 1 + 0.3, 0),
            FaceKind.E_C: (1, 0, pth - 1 + 0.3),
            FaceKind.E_AB: (mid, pth - mid, 0),
            FaceKind.E_AC: (mid, 0, pth - mid),
            FaceKind.E_T: (0.5, 1, 0.25),
            FaceKind.V_P00: (pth, 0, 0),
            FaceKind.V_10C: (1, 0, pth - 1),
            FaceKind.V_1B0: (1, pth - 1, 0),
            FaceKind.V_PARAM_T: boundary_parametrization(th, 2.0),
            FaceKind.V_0T: (0, 2, 0.5),
        }
        for kind, abc in reps.items():
            p = MapParams(*abc, th)
            assert classify_face(p).kind is kind
            cls = classify_optimality(p)
            assert cls.row == face_properties(kind), kind


def test_subtraction_budget_positive_in_branch():
    for th in (0.05, np.pi / 6, np.pi / 3 - 0.01, -0.4):
        assert subtraction_budget(th) > 0
    with pytest.raises(UnsupportedThetaError):
        subtraction_budget(0.0)
