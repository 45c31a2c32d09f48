import random
from fractions import Fraction

import pytest

from dmball import hurwitz as H
from dmball.errors import HypothesisError, InvalidInput
from dmball.intersection import signature
from dmball.mulist import nontrivial_support

F = Fraction
TRIPLES = [(3, 2, 12), (4, 2, 8), (6, 2, 6), (3, 3, 6), (4, 4, 4)]


def test_classify_property_g():
    assert H.classify_property_g() == TRIPLES
    for a, b, d in TRIPLES:
        assert F(1, a) + F(1, b) + F(2, d) == 1


def test_pullback_examples():
    prof = H.parse_fibers([F(1, 3), F(1, 2), F(1, 6)], "3x4|2x6|1x12")
    mu = H.pullback_mu(prof)
    assert mu.support_weights() == (F(1, 6),) * 12
    assert nontrivial_support(mu) == tuple(range(11, 23))
    prof = H.parse_fibers([F(1, 4), F(1, 2), F(1, 4)], "4x2|2x4|1x8")
    assert H.pullback_mu(prof).support_weights() == (F(1, 4),) * 8
    ident = H.parse_fibers([F(1, 3), F(1, 5), F(7, 15)], "1|1|1")
    assert H.pullback_mu(ident).weights == (F(1, 3), F(1, 5), F(7, 15))


def test_hurwitz_codim():
    c = H.hurwitz_codim(H.property_g_profile(3, 2, 12))
    assert (c.codim, c.reduced_dim) == (14, 8)
    c = H.hurwitz_codim(H.property_g_profile(4, 2, 8))
    assert (c.codim, c.reduced_dim) == (10, 4)
    assert H.hurwitz_codim(H.parse_fibers([F(1, 2)] * 3, "1|1|1")).codim == 0


@pytest.mark.parametrize("a,b,d", TRIPLES)
def test_spi_and_signature(a, b, d):
    prof = H.property_g_profile(a, b, d)
    s = H.spi_codim_in_dm(prof)
    assert s.value == 1 and s.hypothesis_ok
    mu = H.pullback_mu(prof)
    assert set(mu.support_weights()) == {F(2, d)} and len(mu.support_weights()) == d
    assert tuple(signature(mu)) == (1, d - 3)
    assert d * (1 - F(1, a) - F(1, b)) + 2 - 3 == 1


def test_spi_hypothesis_failure():
    prof = H.parse_fibers([F(1, 2)] * 4, "2|2|1,1|1,1")
    with pytest.raises(HypothesisError):
        H.spi_codim_in_dm(prof)
    assert not H.spi_codim_in_dm(prof, strict=False).hypothesis_ok


def test_profile_validation():
    with pytest.raises(InvalidInput):
        H.parse_fibers([F(1, 2)] * 3, "2|1|1,1")
    with pytest.raises(InvalidInput):
        H.parse_fibers([F(1, 2)] * 3, "2|2")


def test_profile_json_roundtrip():
    prof = H.property_g_profile(3, 2, 12)
    assert H.RamificationProfile.from_json(prof.to_json()).to_json() == prof.to_json()


def test_smallest_cover():
    c = H.build_property_g_cover(2, 2, H.BinaryForm.parse("1,0"), H.BinaryForm.parse("0,1"))
    assert c.d == 2 and c.D.coeffs == (1, 0, 1)
    prof = H.verify_ramification(c)
    assert [sorted(bp.fiber) for bp in prof.branch_points] == [[2], [2], [1, 1]]


def test_repeated_root_rejected():
    with pytest.raises(InvalidInput):
        H.build_property_g_cover(2, 2, H.BinaryForm.parse("1,0,0"), H.BinaryForm.parse("0,1,0"))


def test_binary_form_multiplicities():
    assert H.BinaryForm.parse("1,0,0").multiplicities() == [2]
    assert H.BinaryForm.parse("0,0,1").multiplicities() == [2]
    assert H.BinaryForm.parse("1,-3,3,-1").multiplicities() == [3]
    f = H.BinaryForm.exact([F(1), F(-3), F(2)])
    assert f.multiplicities() == H.numeric_multiplicities(H.BinaryForm(tuple(float(c) for c in f.coeffs)))


@pytest.mark.parametrize("a,b,d", TRIPLES)
def test_random_covers_have_declared_fibers(a, b, d):
    rng = random.Random(a * 100 + b)
    want = [bp.fiber for bp in H.property_g_profile(a, b, d).branch_points]
    for _ in range(20):
        prof = H.verify_ramification(H.random_property_g_cover(a, b, d, rng))
        assert [bp.fiber for bp in prof.branch_points] == want
        assert prof.ramification_total() == d + 2 <= 2 * d - 2
