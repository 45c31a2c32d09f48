"""Seeded random weight lists for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .mulist import MuList

__all__ = ["random_mu"]


def random_mu(
    rng: random.Random,
    n_min: int = 4,
    n_max: int = 9,
    max_den: int = 12,
    integral: bool | None = None,
    stable_prefix: bool = True,
) -> MuList:
    """Weights k/d with a common denominator d in 2..max_den (entries in (0, 1)).

    ``integral`` forces (True) or forbids (False) an integral total;
    ``stable_prefix`` rejects lists with an integral proper initial-segment sum.
    """
    while True:
        d = rng.randint(2, max_den)
        n = rng.randint(n_min, n_max)
        ws = tuple(Fraction(rng.randint(1, d - 1), d) for _ in range(n))
        total = sum(ws, Fraction(0))
        if integral is not None and (total.denominator == 1) != integral:
            continue
        if stable_prefix:
            acc = Fraction(0)
            bad = False
            for w in ws[:-1]:
                acc += w
                if acc.denominator == 1:
                    bad = True
                    break
            if bad:
                continue
        return MuList(ws)
