import random

import pytest
from hypothesis import given, strategies as st

from dmball import lattice as L
from dmball import linalg
from dmball.errors import HypothesisError, InvalidInput
from dmball.intersection import normalized_hermitian
from dmball.mulist import parse_mu

RINGS = ["gaussian", "eisenstein"]


def lat(ring, rows):
    return L.RLattice.parse(ring, rows)


def test_parse_and_format():
    assert L.format_element("gaussian", L.parse_element("gaussian", "2-3i")) == "2-3i"
    assert L.parse_element("eisenstein", "1+w") == L.ring_element("eisenstein", 1, 1)
    with pytest.raises(InvalidInput):
        L.parse_element("gaussian", "1+w")


def test_discriminant_examples():
    I3 = lat("gaussian", [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert L.discriminant(I3) == 1 and L.is_unimodular(I3)
    two = lat("gaussian", [[2]])
    assert L.discriminant(two) == 2 and not L.is_unimodular(two)


def test_dual_quotient_examples():
    assert L.dual_quotient(lat("gaussian", [[1, 0], [0, 1]])) == []
    assert [L.format_element("gaussian", x) for x in L.dual_quotient(lat("gaussian", [[2]]))] == ["2"]
    one, zero, t = (L.parse_element("gaussian", x) for x in (1, 0, "1+i"))
    d = L.invariant_factors("gaussian", [[one, zero], [zero, t]])
    assert [L.format_element("gaussian", x) for x in d] == ["1", "1+i"]


def test_ancestral_lattices_frozen():
    g = L.RLattice("gaussian", normalized_hermitian(parse_mu("1/4x8")).entries)
    assert L.format_element("gaussian", L.discriminant(g)) == "-8"
    assert g.signature()[:2] == (1, 5)
    comp, _ = L.orthogonal_complement(g, [1, 0, 0, 0, 0, 0])
    assert comp.rank == 5 and comp.signature()[:2] == (1, 4)
    assert [L.format_element("gaussian", x) for x in L.dual_quotient(g)] == ["1+i"] * 6
    e = L.RLattice("eisenstein", normalized_hermitian(parse_mu("1/6x12")).entries)
    assert L.format_element("eisenstein", L.discriminant(e)) == "-243"
    assert e.signature()[:2] == (1, 9)
    assert [L.format_element("eisenstein", x) for x in L.dual_quotient(e)] == ["2+w"] * 10


def test_complement_examples():
    comp, basis = L.orthogonal_complement(lat("gaussian", [[1, 0], [0, 1]]), [1, 0])
    assert comp.gram == [[1]]
    _, basis = L.orthogonal_complement(lat("gaussian", [[0, 1], [1, 0]]), [1, 0])
    assert len(basis) == 1 and basis[0][1] == 0


def test_primitivity():
    assert L.is_primitive("gaussian", [1, "1+i"])
    assert not L.is_primitive("gaussian", [2, "2i"])
    assert not L.is_primitive("gaussian", ["1+i", 2])


@pytest.mark.parametrize("ring,order", [("gaussian", 4), ("eisenstein", 6)])
def test_ambiguity(ring, order):
    unimod = lat(ring, [[1, 0], [0, 1]])
    assert L.extension_ambiguity(unimod, [1, 0]).order == order
    assert L.extension_ambiguity(unimod, [1, 1]).order == 1
    with pytest.raises(InvalidInput):
        L.extension_ambiguity(unimod, [2, 0])
    with pytest.raises(HypothesisError):
        L.extension_ambiguity(lat(ring, [[2, 0], [0, 1]]), [0, 1])


@st.composite
def element(draw, ring):
    return L.ring_element(ring, draw(st.integers(-30, 30)), draw(st.integers(-30, 30)))


@pytest.mark.parametrize("ring", RINGS)
@given(data=st.data())
def test_euclid_remainder_is_smaller(ring, data):
    a = data.draw(element(ring))
    b = data.draw(element(ring).filter(lambda x: not x.is_zero()))
    q, r = L.euclid_divmod(ring, a, b)
    assert q * b + r == a and L.norm(r) < L.norm(b)


@pytest.mark.parametrize("ring", RINGS)
def test_invariant_factor_product(ring):
    rng = random.Random(7)
    for _ in range(30):
        g = L.random_hermitian_gram(ring, rng.randint(1, 4), rng)
        inv = L.invariant_factors(ring, g)
        prod = inv[0]
        for x in inv[1:]:
            prod = prod * x
        assert L.is_unit(prod / linalg.det(g))
        for x, y in zip(inv, inv[1:]):
            assert L.euclid_divmod(ring, y, x)[1].is_zero()


def test_units():
    assert len(L.units("gaussian")) == 4 and len(L.units("eisenstein")) == 6
