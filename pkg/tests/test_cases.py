import dataclasses
import math

import numpy as np
import pytest

from boundarycalc.algebra import Algebra
from boundarycalc.cases import (
    CaseReport,
    GradeMismatchError,
    builtin_cases,
    dualize_case,
    get_case,
    identity_suite,
    run_case,
    run_suite,
)
from boundarycalc.quadrature import QuadratureRule

G2, G3, G4 = Algebra(2), Algebra(3), Algebra(4)

PI = math.pi

# Closed forms, one per case, each a short hand computation from the
# registered field and manifold.  E.g. C3: the curl of I3 x is 3 I3 and
# the ball's directed volume is (4 pi/3) I3, so the volume side is
# (4 pi/3) I3 . 3 I3 = -4 pi.
ANCHORS = {
    "C0": Algebra(1).scalar(1.0),
    "C1": G2.scalar(-2.0 * PI),
    "C2": G2.blade(0b11, 2.0 * PI),
    "C3": G3.scalar(-4.0 * PI),
    "C4": G3.blade(0b101, -4.0 * PI / 3.0),  # equals +(4 pi/3) e31
    "C5": G4.blade(0b1111, 4.0 * PI / 3.0),
    "C6": G3.blade(0b011, 8.0 * PI / 3.0),
    "C7": G3.scalar(4.0 * PI),
    "C8": G2.scalar(0.0),
}


def test_catalogue_ids_and_lookup():
    assert list(builtin_cases()) == [f"C{i}" for i in range(9)]
    assert get_case("C3").field == "radial_spin3d"
    with pytest.raises(KeyError, match="unknown case"):
        get_case("C9")


@pytest.mark.parametrize("case_id", list(ANCHORS))
def test_cases_verify_at_order_8(case_id):
    report = run_case(case_id, QuadratureRule(8))
    assert report.rel_err <= 1e-6, f"{case_id}: rel_err {report.rel_err:.3e}"
    anchor = ANCHORS[case_id]
    err = max((report.lhs - anchor).norm(), (report.rhs - anchor).norm())
    assert err <= 1e-6 * max(anchor.norm(), 1.0)
    assert report.anchor_rel_err <= 1e-6
    assert report.passes(1e-6)


@pytest.mark.parametrize("case_id", list(ANCHORS))
def test_cases_verify_at_order_16(case_id):
    report = run_case(case_id, QuadratureRule(16))
    assert report.rel_err <= 1e-9, f"{case_id}: rel_err {report.rel_err:.3e}"


def test_case_sides_are_pinned():
    # Freeze a few coefficients so the suite notices silent sign or
    # orientation regressions immediately.
    r = run_case("C4")
    assert r.lhs.coeffs[0b101] == pytest.approx(-4.0 * PI / 3.0, rel=1e-9)
    assert r.rhs.coeffs[0b101] == pytest.approx(-4.0 * PI / 3.0, rel=1e-9)
    r = run_case("C1")
    assert r.lhs.scalar_part() == pytest.approx(-2.0 * PI, rel=1e-9)
    r = run_case("C5")
    assert r.rhs.coeffs[0b1111] == pytest.approx(4.0 * PI / 3.0, rel=1e-9)


def test_reports_carry_convergence_information():
    ball_case = run_case("C4")
    assert not ball_case.at_floor
    assert ball_case.slope >= 1.9

    # C1's boundary integrand is polynomial in the quadrature sense:
    # every order is already exact, so the sweep reports a floor.
    loop_case = run_case("C1")
    assert loop_case.at_floor
    assert loop_case.slope == math.inf


def test_result_grades_are_enforced():
    spec = get_case("C2")
    wrong = dataclasses.replace(spec, result_grades=frozenset({0}))
    with pytest.raises(GradeMismatchError, match="unexpected grades"):
        run_case(wrong)


def test_run_suite_subsets():
    reports = run_suite(["C0", "C8"])
    assert [r.case_id for r in reports] == ["C0", "C8"]
    assert all(isinstance(r, CaseReport) for r in reports)


def test_case_report_passes_thresholds():
    report = run_case("C3")
    assert report.passes(1e-6)
    assert not report.passes(1e-16)


# ---------------------------------------------------------------------------
# Duality between case pairs
# ---------------------------------------------------------------------------

def test_plane_duality_c1_c2():
    verdict = dualize_case("C1")
    assert verdict.case_ids == ("C1", "C2")
    assert verdict.field_identity_err == 0.0
    assert verdict.closed_form_ok
    assert verdict.numeric_err <= 1e-9
    assert verdict.ok()
    assert dualize_case("C2").case_ids == ("C1", "C2")


def test_space_duality_c3_c7():
    verdict = dualize_case("C3")
    assert verdict.case_ids == ("C3", "C7")
    assert verdict.field_identity_err == 0.0
    assert verdict.closed_form_ok
    assert verdict.numeric_err <= 1e-9
    assert verdict.ok()


def test_duality_rejects_unpaired_cases():
    with pytest.raises(ValueError, match="no duality mapping"):
        dualize_case("C0")


# ---------------------------------------------------------------------------
# Differential identities
# ---------------------------------------------------------------------------

def test_identity_suite_residuals_are_small():
    report = identity_suite(seed=2024)
    assert set(report.residuals) == {
        "closed_gradient_circuit", "curl_of_gradient",
        "divergence_of_curl", "laplacian_consistency",
    }
    for name, residual in report.residuals.items():
        assert residual <= 1e-6, f"{name}: {residual:.3e}"
    assert report.ok()
    assert not report.ok(tolerance=1e-15)


def test_identity_suite_is_reproducible():
    a = identity_suite(seed=7)
    b = identity_suite(seed=7)
    assert a.residuals == b.residuals


def test_identity_suite_seeds_differ():
    a = identity_suite(seed=1)
    b = identity_suite(seed=2)
    assert a.residuals != b.residuals
    assert b.ok()
