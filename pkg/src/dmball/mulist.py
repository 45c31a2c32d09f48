"""Weight lists mu and their elementary combinatorics.

A weight mu_j in (0, 1] encodes the local monodromy exp(2 pi i mu_j) at the
j-th puncture; the value 1 marks a point with trivial monodromy.  Index sets
exposed to callers are 1-based.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInput

__all__ = [
    "MuList",
    "NonIntegralSum",
    "normalize",
    "parse_mu",
    "format_mu",
    "nontrivial_support",
    "ih1_dimension",
    "is_stable_partition",
    "hodge_dims",
    "frac",
]


class NonIntegralSum(InvalidInput):
    """The Hodge dimension formula needs an integral weight sum."""


def frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


def _to_unit_interval(x: Fraction) -> Fraction:
    f = frac(x)
    return Fraction(1) if f == 0 else f


@dataclass(frozen=True)
class MuList:
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) < 3:
            raise InvalidInput(f"a weight list needs at least 3 entries, got {len(self.weights)}")
        for w in self.weights:
            if not isinstance(w, Fraction):
                raise InvalidInput(f"weight {w!r} is not an exact rational")
            if not (0 < w <= 1):
                raise InvalidInput(f"weight {w} outside (0, 1]")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def d(self) -> int:
        return math.lcm(*(w.denominator for w in self.weights))

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def support_weights(self) -> tuple[Fraction, ...]:
        return tuple(w for w in self.weights if w != 1)

    def pruned(self) -> "MuList":
        return MuList(self.support_weights())

    def canonical(self) -> tuple[Fraction, ...]:
        return tuple(sorted(self.weights))

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __str__(self) -> str:
        return format_mu(self.weights)


def normalize(raw: Sequence[Fraction | int | str]) -> MuList:
    if len(raw) < 3:
        raise InvalidInput(f"a weight list needs at least 3 entries, got {len(raw)}")
    return MuList(tuple(_to_unit_interval(Fraction(x)) for x in raw))


_TOKEN = re.compile(r"^([+-]?\d+(?:/\d+)?)(?:[x\*](\d+))?$")


def parse_mu(text: str) -> MuList:
    """Parse ``1/6x12`` style input: comma separated fractions with optional repetition."""
    cleaned = "".join(text.split())
    if not cleaned:
        raise InvalidInput("empty weight list")
    out: list[Fraction] = []
    for tok in cleaned.split(","):
        m = _TOKEN.match(tok)
        if not m:
            raise InvalidInput(f"cannot parse weight token {tok!r}")
        try:
            value = Fraction(m.group(1))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"bad fraction {m.group(1)!r}") from exc
        reps = int(m.group(2)) if m.group(2) else 1
        if reps < 1:
            raise InvalidInput(f"repetition count must be positive in {tok!r}")
        out.extend([value] * reps)
    return normalize(out)


def format_mu(weights: Iterable[Fraction]) -> str:
    """Inverse of ``parse_mu`` using run-length compression."""
    parts = []
    ws = list(weights)
    i = 0
    while i < len(ws):
        j = i
        while j + 1 < len(ws) and ws[j + 1] == ws[i]:
            j += 1
        count = j - i + 1
        parts.append(f"{ws[i]}" + (f"x{count}" if count > 1 else ""))
        i = j + 1
    return ",".join(parts)


def nontrivial_support(m: MuList) -> tuple[int, ...]:
    return tuple(j + 1 for j, w in enumerate(m.weights) if w != 1)


def ih1_dimension(m: MuList) -> int:
    k = len(nontrivial_support(m))
    if k < 2:
        raise InvalidInput(f"only {k} point(s) with nontrivial monodromy; the local system is degenerate")
    return k - 2


def _check_part(m: MuList, part: Iterable[int]) -> tuple[int, ...]:
    idx = tuple(sorted(set(part)))
    support = set(nontrivial_support(m))
    if not idx:
        raise InvalidInput("empty index subset")
    if not set(idx) <= support:
        raise InvalidInput(f"indices {sorted(set(idx) - support)} are outside the nontrivial support")
    if len(idx) == len(support):
        raise InvalidInput("the subset must be proper")
    return idx


def is_stable_partition(m: MuList, part: Iterable[int]) -> bool:
    idx = _check_part(m, part)
    s = sum((m.weights[i - 1] for i in idx), Fraction(0))
    return s.denominator != 1


def hodge_dims(m: MuList) -> tuple[int, int]:
    ih1_dimension(m)
    ws = m.support_weights()
    total = sum(ws, Fraction(0))
    if total.denominator != 1:
        raise NonIntegralSum(f"weight sum {total} is not an integer")
    p = total - 1
    q = sum((1 - w for w in ws), Fraction(0)) - 1
    return int(p), int(q)
