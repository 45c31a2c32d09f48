import numpy as np
import pytest

from dmball import braid, linalg
from dmball.cyclotomic import embed_complex, root_of_unity
from dmball.errors import InvalidInput
from dmball.intersection import intersection_matrix
from dmball.mulist import parse_mu
from dmball.sampling import random_mu

G, E = parse_mu("1/4x8"), parse_mu("1/6x12")


def fixed_codim(r):
    n = len(r)
    return linalg.rank(linalg.add(r, linalg.neg(linalg.identity(n, r[0][0].d))))


def test_parabolic_four_point_generator():
    ref = braid.braid_reflection(parse_mu("1/2x4"), 1)
    assert ref.matrix == [[1, -2], [0, 1]]
    assert ref.order == braid.INFINITE
    form = intersection_matrix(parse_mu("1/2x4")).entries
    assert braid.preserves_form(ref.matrix, form)


@pytest.mark.parametrize("m,k", [(G, 2), (E, 3)])
def test_ancestral_orders_and_mirrors(m, k):
    form = intersection_matrix(m).entries
    n = len(form)
    for i in range(1, n + 1):
        r = braid.braid_reflection(m, i).matrix
        assert braid.reflection_order(m, i) == k
        assert linalg.is_identity(linalg.mat_pow(r, k))
        assert not linalg.is_identity(r)
        assert braid.preserves_form(r, form)
        assert fixed_codim(r) == 1


def test_reflection_oracle_examples():
    o = braid.reflection_oracle(G, 3)
    assert o.metadata["mirror_dim"] == 5
    o = braid.reflection_oracle(E, 1)
    ev = np.linalg.eigvals(linalg.to_numpy(o.matrix))
    w = embed_complex(root_of_unity(1, 3))
    assert sum(abs(x - 1) < 1e-9 for x in ev) == 9
    assert sum(abs(x - w) < 1e-9 for x in ev) == 1


def test_oracle_conjugate_on_third_roots():
    braid.reflection_oracle(parse_mu("1/3x6"), 2)


def test_words():
    assert linalg.is_identity(braid.evaluate_word(G, []))
    assert linalg.is_identity(braid.evaluate_word(G, [(1, 2)]))
    assert linalg.is_identity(braid.evaluate_word(E, [(4, 3)]))
    assert linalg.is_identity(braid.evaluate_word(E, [(2, 1), (2, -1)]))
    with pytest.raises(InvalidInput):
        braid.evaluate_word(G, [(7, 1)])


@pytest.mark.xfail(strict=True, reason="full-twist generators of (1/4x8) do not satisfy the braid relation")
def test_braid_relation_on_gaussian_ancestor():
    lhs = braid.evaluate_word(G, [(1, 1), (2, 1), (1, 1)])
    rhs = braid.evaluate_word(G, [(2, 1), (1, 1), (2, 1)])
    assert lhs == rhs


def test_braid_relation_holds_on_eisenstein_ancestor():
    lhs = braid.evaluate_word(E, [(1, 1), (2, 1), (1, 1)])
    rhs = braid.evaluate_word(E, [(2, 1), (1, 1), (2, 1)])
    assert lhs == rhs


@pytest.mark.parametrize("text", ["1/4x8", "1/6x12", "1/3x6", "1/5x10"])
def test_half_twists_satisfy_braid_relation(text):
    chk = braid.braid_check(parse_mu(text))
    assert chk.half_twist_braid_failures == []


def test_far_commutation_and_invariants_random(rng):
    for _ in range(40):
        chk = braid.braid_check(random_mu(rng, n_max=8))
        assert chk.invariants_ok
        assert chk.commute_failures == []


def test_wrap_generator():
    for m in (G, E):
        ref = braid.wrap_reflection(m)
        assert braid.preserves_form(ref.matrix, intersection_matrix(m).entries)
    with pytest.raises(InvalidInput):
        braid.wrap_reflection(parse_mu("1/2x4"))


def test_boundary_relations():
    gammas, cs = braid.boundary_cycles(G)
    assert len(gammas) == len(cs)
