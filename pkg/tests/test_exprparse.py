import numpy as np
import pytest

from boundarycalc.algebra import Algebra
from boundarycalc.exprparse import (
    FieldExpr,
    ParseError,
    expr_to_field,
    format_field_expr,
    parse_field_expr,
    parse_multivector,
    tokenize,
)
from boundarycalc.fields import get_field

G2, G3 = Algebra(2), Algebra(3)


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

def test_tokens_and_positions():
    kinds = [t.kind for t in tokenize("2 x1^3 e12 - .5")]
    assert kinds == ["number", "var", "op", "number", "blade", "op", "number"]
    assert [t.pos for t in tokenize("x1 + e2")] == [0, 3, 5]


def test_e_prefix_always_lexes_as_a_blade():
    # There is no exponent notation: '2e12' is the coefficient 2 times
    # the blade e12, never a float literal.
    tokens = tokenize("2e12")
    assert [(t.kind, t.text) for t in tokens] == [("number", "2"), ("blade", "e12")]


def test_unexpected_character_is_located():
    with pytest.raises(ParseError, match="position 3"):
        tokenize("x1 @")


# ---------------------------------------------------------------------------
# Parsing and canonical form
# ---------------------------------------------------------------------------

def test_terms_are_merged_and_sorted():
    assert format_field_expr(parse_field_expr("e12 + e12")) == "2 e12"
    a = parse_field_expr("x1 e2 + 3 + x2^2 e1")
    b = parse_field_expr("3 + x2^2 e1 + x1 e2")
    assert a == b
    assert format_field_expr(a) == "3 + x2^2 e1 + x1 e2"


def test_blade_digit_order_folds_into_the_sign():
    assert parse_field_expr("x2 e31") == parse_field_expr("-x2 e13")
    assert format_field_expr(parse_field_expr("e21")) == "-e12"
    assert parse_field_expr("e132 + e123") == FieldExpr(())  # cancels


def test_cancellation_prints_zero():
    expr = parse_field_expr("x1 e2 - x1 e2")
    assert expr.terms == ()
    assert format_field_expr(expr) == "0"
    assert parse_field_expr("0") == expr


def test_parse_errors_carry_positions():
    cases = {
        "": "empty expression",
        "x1 +": "empty term",
        "e11": "repeated digit",
        "e10": "1-based",
        "x5": "outside x1..x4",
        "x1^2.5": "integer power",
        "e12 x1": "blade must end",
        "x1 x2 +": "empty term",
    }
    for text, message in cases.items():
        with pytest.raises(ParseError, match=message):
            parse_field_expr(text)
    try:
        parse_field_expr("x1 + @")
    except ParseError as exc:
        assert exc.position == 5


def test_roundtrip_on_a_200_expression_corpus():
    rng = np.random.default_rng(99)
    blades = ["", "e1", "e2", "e3", "e12", "e31", "e23", "e123", "e4",
              "e1234", "e21", "e132"]
    coeffs = ["", "2 ", "0.5 ", "3.25 ", "11 ", "0.125 "]

    def random_source():
        parts = []
        for _ in range(int(rng.integers(1, 5))):
            mono = " ".join(
                f"x{rng.integers(1, 5)}"
                + (f"^{rng.integers(2, 4)}" if rng.random() < 0.3 else "")
                for _ in range(int(rng.integers(0, 3))))
            body = " ".join(p for p in (
                str(rng.choice(coeffs)).strip(), mono, str(rng.choice(blades)))
                if p) or "1"
            parts.append(("- " if rng.random() < 0.4 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    for _ in range(200):
        source = random_source()
        parsed = parse_field_expr(source)
        assert parse_field_expr(format_field_expr(parsed)) == parsed, source


# ---------------------------------------------------------------------------
# Compilation to fields and multivectors
# ---------------------------------------------------------------------------

def test_compiles_to_rotor2d():
    f = expr_to_field("-x2 e1 + x1 e2")
    ref = get_field("rotor2d")
    assert f.algebra is G2
    rng = np.random.default_rng(1)
    for x in rng.uniform(-3, 3, size=(100, 2)):
        assert (f(x) - ref(x)).norm() == 0.0


def test_compiles_to_radial_spin3d():
    f = expr_to_field("x1 e23 + x2 e31 + x3 e12")
    ref = get_field("radial_spin3d")
    assert f.algebra is G3
    rng = np.random.default_rng(2)
    for x in rng.uniform(-3, 3, size=(100, 3)):
        assert (f(x) - ref(x)).norm() == 0.0


def test_ambient_dimension_is_inferred():
    assert expr_to_field("x1").algebra.dim == 1
    assert expr_to_field("x3 e12").algebra.dim == 3
    assert expr_to_field("e1234").algebra.dim == 4
    with pytest.raises(ValueError, match="dimensions"):
        expr_to_field("x1 e23", algebra=G2)


def test_parse_multivector():
    mv = parse_multivector(G3, "2 e12 - 0.5 e3 + 1")
    want = G3.scalar(1.0) + G3.blade(0b011, 2.0) + G3.blade(0b100, -0.5)
    assert mv == want
    with pytest.raises(ParseError, match="variables are not allowed"):
        parse_multivector(G3, "x1 e2")
    with pytest.raises(ValueError, match="outside G_2"):
        parse_multivector(G2, "e123")
