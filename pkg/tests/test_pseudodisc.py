
import pytest

from dmball import pseudodisc as P
from dmball.cyclotomic import root_of_unity
from dmball.hurwitz import BinaryForm, classify_property_g
from dmball.errors import InvalidInput


def test_delta_examples():
    assert P.delta(BinaryForm.parse("1,0"), BinaryForm.parse("0,1"), 2, 2).coeffs == (1, 0, 1)
    A, B = BinaryForm.parse("1,2,-1,3,1"), BinaryForm.parse("2,0,1,-1,0,5,1")
    assert P.delta(A, B, 3, 2).degree == 12
    assert P.check_equivariance(A, B, 3, 2)
    with pytest.raises(InvalidInput):
        P.delta(A, B, 2, 2)


@pytest.mark.parametrize("a,b,n", [(3, 2, 1), (6, 2, 2), (4, 4, 4), (6, 4, 2), (5, 7, 1)])
def test_orbit_count_examples(a, b, n):
    assert P.orbit_count(a, b) == n


def test_same_weighted_class():
    A = [root_of_unity(0, 4) * x for x in (1, 2)]
    B = [root_of_unity(0, 4) * x for x in (3, 1, 1)]
    i = root_of_unity(1, 4)
    assert P.same_weighted_class(A, B, [i * x for x in A], [-x for x in B])
    assert not P.same_weighted_class(A, B, [i * x for x in A], B)


def test_generic_degree():
    assert P.generic_degree(6, 2, 1, 3).to_json() == {"value": 2, "certificate": "proved"}
    assert P.generic_degree(3, 2, 4, 6).to_json() == {"value": 1, "certificate": "proved"}
    assert P.generic_degree(3, 2, 2, 3).certificate == "lower-bound"


def test_hypersurface():
    assert P.hypersurface_condition(3, 2, 4, 6)
    assert P.hypersurface_condition(4, 4, 1, 1)
    assert not P.hypersurface_condition(2, 2, 3, 3)
    assert P.hypersurface_solutions() == classify_property_g()


@pytest.mark.parametrize("t,classes", [((6, 2, 1, 3), 2), ((4, 2, 2, 4), 2), ((3, 2, 4, 6), 1)])
def test_fiber_witness(t, classes):
    for seed in range(5):
        rep = P.fiber_witness(*t, seed=seed)
        assert rep.ok and rep.orbit_classes_found == classes and rep.extra_found == 0


def test_witness_guards():
    with pytest.raises(InvalidInput):
        P.fiber_witness(3, 3, 2, 2)
    with pytest.raises(InvalidInput):
        P.fiber_witness(6, 2, 3, 9)
