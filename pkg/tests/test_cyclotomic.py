import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dmball.cyclotomic import (
    CycloNumber,
    conjugate,
    cyclotomic_polynomial,
    embed_complex,
    euler_phi,
    field_arith,
    is_algebraic_integer,
    root_of_unity,
)

CONDUCTORS = [1, 2, 3, 4, 5, 6, 7, 8, 9, 12]


@st.composite
def cyclo(draw, d=None):
    d = d or draw(st.sampled_from(CONDUCTORS))
    k = euler_phi(d)
    coeffs = draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=k, max_size=k))
    return CycloNumber(d, coeffs)


def close(x, z, tol=1e-9):
    return abs(embed_complex(x) - z) <= tol * max(1.0, abs(z))


def test_roots_of_unity():
    assert root_of_unity(0, 1) == 1
    assert root_of_unity(1, 2) == -1
    i = root_of_unity(1, 4)
    assert i * i == root_of_unity(1, 2)
    assert root_of_unity(5, 4) == i
    assert root_of_unity(-1, 4) == root_of_unity(3, 4)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_division_examples():
    assert 1 / (1 - root_of_unity(1, 2)) == Fraction(1, 2)
    i = root_of_unity(1, 4)
    assert 1 / (1 - i) == (1 + i) / 2
    with pytest.raises(ZeroDivisionError):
        _ = CycloNumber(4, [1]) / CycloNumber(4)


def test_conjugation_examples():
    assert conjugate(root_of_unity(1, 4)) == root_of_unity(3, 4)
    assert conjugate(CycloNumber(1, [Fraction(3, 7)])) == Fraction(3, 7)
    w = root_of_unity(1, 3)
    x = 1 / (1 - w)
    assert conjugate(x) == 1 / (1 - w * w)
    assert (x * conjugate(x)).is_rational()


def test_integrality_examples():
    assert is_algebraic_integer(root_of_unity(1, 6))
    assert not is_algebraic_integer(CycloNumber(1, [Fraction(1, 2)]))
    s = 2 * root_of_unity(1, 3) + 1
    assert is_algebraic_integer(s) and s * s == -3


def test_embedding_examples():
    assert embed_complex(CycloNumber(1, [1])) == 1
    assert abs(embed_complex(root_of_unity(1, 4)) - 1j) < 1e-12
    assert abs(embed_complex(root_of_unity(1, 6)) - complex(0.5, math.sqrt(3) / 2)) < 1e-10


def test_mixed_conductors_promote():
    x = root_of_unity(1, 4) + root_of_unity(1, 3)
    assert x.d == 12
    assert close(x, 1j + cmath.exp(2j * math.pi / 3))


def test_field_arith_dispatch():
    a, b = root_of_unity(1, 5), CycloNumber(5, [2, 1])
    assert field_arith(a, b, "add") == a + b
    assert field_arith(a, b, "div") * b == a
    with pytest.raises(ValueError):
        field_arith(a, b, "pow")


def test_json_roundtrip():
    x = CycloNumber(12, [Fraction(1, 3), -2, 0, 5])
    assert CycloNumber.from_json(x.to_json()) == x


@given(cyclo(), cyclo())
def test_embedding_is_a_ring_homomorphism(x, y):
    ex, ey = embed_complex(x), embed_complex(y)
    assert close(x + y, ex + ey)
    assert close(x * y, ex * ey, 1e-8)
    assert close(x.conjugate(), ex.conjugate())


@given(cyclo())
def test_inverse_and_involution(x):
    assert x - x == 0
    assert x.conjugate().conjugate() == x
    if not x.is_zero():
        assert x * x.inverse() == 1


@given(st.sampled_from(CONDUCTORS), st.integers(0, 40))
def test_power_of_root(d, k):
    assert root_of_unity(1, d) ** k == root_of_unity(k, d)
    assert root_of_unity(1, d) ** d == 1
