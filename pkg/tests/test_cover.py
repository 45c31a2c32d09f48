import random
from fractions import Fraction

import pytest

from dmball import cover
from dmball.errors import InvalidInput

F = Fraction


def z_squared():
    return cover.CoverMonodromy.from_three(2, [(1, 2)], [], [(1, 2)])


def test_monodromy_validation():
    cm = z_squared()
    assert cm.genus() == 0 and cm.m == 3
    with pytest.raises(InvalidInput):
        cover.CoverMonodromy.from_three(2, [(1, 2)], [], [])
    with pytest.raises(InvalidInput):
        cover.CoverMonodromy.from_three(2, [], [], [])
    with pytest.raises(InvalidInput):
        cover.CoverMonodromy.from_cycles(2, [[(1, 2)]] * 4)


def test_identity_pullback_is_base_cycle():
    cm = cover.CoverMonodromy(1, ((0,),) * 5)
    nu = [F(1, 3)] * 3 + [F(1, 2)] * 2
    for pair in [(1, 2), (2, 4), (1, 5)]:
        res = cover.pullback_cycle(cm, nu, pair)
        assert res.vector == res.base_vector


def test_z_squared_pullback_nonzero():
    res = cover.pullback_cycle(z_squared(), [F(1, 4), F(1, 2), F(1, 4)], (1, 3))
    assert res.nonzero
    assert res.upstairs_mu.support_weights() == (F(1, 2),) * 4


def test_sampled_property_g_cover():
    cm = cover.sample_property_g_monodromy(3, 2, 12, random.Random(1))
    assert cm.cycle_types()[0] == (3, 3, 3, 3) and cm.cycle_types()[1] == (2,) * 6
    nu = [F(1, 3), F(1, 2)] + [F(1)] * (cm.m - 3) + [F(1, 6)]
    rep = cover.pairing_constant(cm, nu)
    assert rep.image_rank == 1 and rep.constant_is_uniform


# Measured: the pulled-back pairing scales by the cover degree.
@pytest.mark.parametrize("name,deg", [("identity", 1), ("z^2", 2)])
def test_pairing_constant_is_degree(name, deg):
    if name == "identity":
        cm, nu = cover.CoverMonodromy(1, ((0,),) * 6), [F(1, 3)] * 6
    else:
        cm, nu = z_squared(), [F(1, 4), F(1, 2), F(1, 4)]
    rep = cover.pairing_constant(cm, nu)
    assert rep.constant_is_uniform and rep.relative_spread < 1e-9
    assert rep.constant == deg
    assert rep.matches_claim == (deg == 1)


def test_trivial_base_point_rejected():
    with pytest.raises(InvalidInput):
        cover.pullback_cycle(cover.CoverMonodromy(1, ((0,),) * 4), [F(1, 2), F(1), F(1, 2), F(1)], (1, 2))
