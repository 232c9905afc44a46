import numpy as np
import pytest

from boundarycalc.algebra import Algebra
from boundarycalc.fields import (
    FieldEvaluator,
    PolyField,
    Polynomial,
    builtin_fields,
    dual_field,
    get_field,
    random_polynomial,
)

G1, G2, G3, G4 = Algebra(1), Algebra(2), Algebra(3), Algebra(4)


# ---------------------------------------------------------------------------
# Polynomial arithmetic
# ---------------------------------------------------------------------------

def test_polynomial_merges_and_drops_zero_terms():
    p = Polynomial(2, {(1, 0): 2.0, (0, 1): 0.0})
    q = Polynomial(2, {(1, 0): -2.0})
    assert (0, 1) not in p.terms
    assert (p + q).terms == {}


def test_polynomial_constant_and_variable():
    c = Polynomial.constant(3, 5.0)
    x2 = Polynomial.variable(3, 2)
    assert c(np.array([9.0, 9.0, 9.0])) == 5.0
    assert x2(np.array([1.0, 7.0, 3.0])) == 7.0


def test_polynomial_batch_evaluation_matches_pointwise():
    rng = np.random.default_rng(3)
    p = random_polynomial(rng, 3)
    pts = rng.uniform(-2, 2, size=(20, 3))
    batch = p(pts)
    assert batch.shape == (20,)
    for row, x in zip(batch, pts):
        assert row == pytest.approx(p(x), rel=1e-14)


def test_polynomial_diff_pinned():
    # d/dx1 (x1^2 x2) = 2 x1 x2, d/dx2 = x1^2
    p = Polynomial(2, {(2, 1): 1.0})
    assert p.diff(1) == Polynomial(2, {(1, 1): 2.0})
    assert p.diff(2) == Polynomial(2, {(2, 0): 1.0})
    assert p.diff(1).diff(1).diff(2) == Polynomial.constant(2, 2.0)


def test_polynomial_product_and_degree():
    x, y = Polynomial.variable(2, 1), Polynomial.variable(2, 2)
    p = (x + y) * (x + y)
    assert p == Polynomial(2, {(2, 0): 1.0, (1, 1): 2.0, (0, 2): 1.0})
    assert p.degree() == 2
    assert Polynomial(2).degree() == 0
    assert (3.0 * x).terms == {(1, 0): 3.0}


def test_polynomial_validation():
    with pytest.raises(ValueError):
        Polynomial(2, {(1,): 1.0})
    with pytest.raises(ValueError):
        Polynomial(2, {(-1, 0): 1.0})
    with pytest.raises(ValueError):
        Polynomial.variable(2, 1) + Polynomial.variable(3, 1)
    with pytest.raises(ValueError):
        Polynomial.variable(2, 1) * Polynomial.variable(3, 1)


def test_random_polynomial_properties():
    rng = np.random.default_rng(11)
    for _ in range(50):
        p = random_polynomial(rng, 3, max_degree=3)
        assert p.terms, "must not be identically zero"
        assert p.degree() <= 3
        assert all(v == int(v) for v in p.terms.values())


# ---------------------------------------------------------------------------
# PolyField: exact evaluation and calculus
# ---------------------------------------------------------------------------

def test_polyfield_evaluates_blades():
    f = get_field("rotor2d")
    val = f(np.array([2.0, 5.0]))
    assert val == G2.vector([-5.0, 2.0])


def test_polyfield_batch_matches_pointwise():
    rng = np.random.default_rng(5)
    pts = rng.uniform(-1, 1, size=(17, 3))
    f = get_field("radial_spin3d")
    stack = f.evaluate_batch(pts)
    for row, x in zip(stack, pts):
        assert np.array_equal(row, f(x).coeffs)


def test_polyfield_partial_is_exact():
    f = get_field("grad_poly2d")  # (2 x1 x2, x1^2)
    df = f.partial(1)
    val = df(np.array([3.0, 4.0]))
    assert val == G2.vector([8.0, 6.0])


def test_analytic_vector_derivative_pinned():
    x = np.array([0.3, -0.7])
    assert get_field("rotor2d").analytic_vector_derivative(x) == G2.blade(0b11, 2.0)
    assert get_field("radial2d").analytic_vector_derivative(x) == G2.scalar(2.0)
    y = np.array([0.3, -0.7, 0.2])
    assert get_field("radial3d").analytic_vector_derivative(y) == G3.scalar(3.0)
    assert get_field("radial_spin3d").analytic_vector_derivative(y) == G3.blade(0b111, 3.0)


def test_polyfield_validation():
    with pytest.raises(ValueError):
        PolyField("bad", G2, {0b100: Polynomial.constant(2, 1.0)})
    with pytest.raises(ValueError):
        PolyField("bad", G2, {0b01: Polynomial.constant(3, 1.0)})


def test_field_evaluator_rejects_non_finite_values():
    reciprocal = FieldEvaluator(
        "reciprocal", G1,
        lambda x: G1.scalar(1.0 / x[0] if x[0] else np.inf), {0})
    assert reciprocal(np.array([2.0])).scalar_part() == 0.5
    with pytest.raises(ValueError, match="non-finite"):
        reciprocal(np.array([0.0]))


# ---------------------------------------------------------------------------
# Duality of fields
# ---------------------------------------------------------------------------

def test_dual_of_rotor2d_is_radial2d():
    rot = get_field("rotor2d")
    rad = get_field("radial2d")
    dual = dual_field(rot)
    assert isinstance(dual, PolyField)
    assert dual.blade_polys == rad.blade_polys


def test_dual_field_matches_pointwise_dual():
    rng = np.random.default_rng(8)
    for name in ("radial3d", "radial_spin3d", "linear_bivector"):
        f = get_field(name)
        g = dual_field(f)
        for x in rng.uniform(-2, 2, size=(10, 3)):
            assert (g(x) - f(x).dual()).norm() == 0.0


def test_dual_field_generic_path():
    f = get_field("toroidal_bivector")  # not a PolyField
    g = dual_field(f)
    assert not isinstance(g, PolyField)
    assert g.codomain_grades == {1}
    x = np.array([2.0, 0.0, 0.1])
    assert (g(x) - f(x).dual()).norm() == 0.0


def test_rotor3d_dual_pinned():
    # (-x2 e1 + x1 e2) I3^{-1} = x2 e23 + x1 e13
    f = get_field("rotor3d_dual")
    val = f(np.array([3.0, 5.0, -9.0]))
    assert val == G3.blade(0b101, 3.0) + G3.blade(0b110, 5.0)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def test_registry_contents_and_grades():
    fields = builtin_fields()
    expected_grades = {
        "cubic1d": {0},
        "rotor2d": {1},
        "radial2d": {1},
        "grad_poly2d": {1},
        "rotor3d": {1},
        "radial3d": {1},
        "radial_spin3d": {2},
        "linear_bivector": {2},
        "hyper_bivector": {2},
        "rotor3d_dual": {2},
        "toroidal_bivector": {2},
        "monopole_potential": {2},
    }
    assert set(fields) == set(expected_grades)
    for name, grades in expected_grades.items():
        assert fields[name].codomain_grades == frozenset(grades), name


def test_get_field_unknown_name():
    with pytest.raises(KeyError, match="unknown field"):
        get_field("nosuchfield")


def test_cubic1d_is_x_cubed():
    f = get_field("cubic1d")
    assert f(np.array([2.0])).scalar_part() == 8.0
    assert f.algebra is G1


def test_hyper_bivector_lives_in_g4():
    f = get_field("hyper_bivector")
    assert f.algebra is G4
    assert f(np.array([2.0, 0.0, 0.0, 0.0])) == G4.blade(0b1001, 2.0)


def test_toroidal_bivector_shape():
    f = get_field("toroidal_bivector")
    on_core = f(np.array([2.0, 0.0, 0.0]))
    far = f(np.array([6.0, 0.0, 0.0]))
    assert on_core.grades() == {2}
    assert on_core.norm() == pytest.approx(1.0)  # unit bivector at the core
    assert far.norm() < 1e-6                     # Gaussian decay
    assert f(np.array([0.0, 0.0, 0.5])).norm() == 0.0  # vanishes on the axis


def test_monopole_potential_inverse_square():
    f = get_field("monopole_potential")
    assert f(np.array([2.0, 0.0, 0.0])).norm() == pytest.approx(0.25)
    with pytest.raises(ValueError, match="singular"):
        f(np.array([0.0, 0.0, 0.0]))
