"""INT and Sigma-INT predicates, bounded enumeration, collisions and descendants."""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .errors import InvalidInput
from .mulist import MuList, format_mu, nontrivial_support

__all__ = [
    "ClassifiedMu",
    "UnstableCollision",
    "check_int",
    "check_sigma_int",
    "classify",
    "ring_tag",
    "enumerate_mu",
    "collide",
    "descendants",
    "DescendantPoset",
    "is_ancestral_descendant",
    "GAUSSIAN_ANCESTOR",
    "EISENSTEIN_ANCESTOR",
]

GAUSSIAN_ANCESTOR = MuList((Fraction(1, 4),) * 8)
EISENSTEIN_ANCESTOR = MuList((Fraction(1, 6),) * 12)


class UnstableCollision(UserWarning):
    """Two points with integral total weight were merged."""


@dataclass
class ClassifiedMu:
    mu: MuList
    sum: Fraction
    int_pass: bool
    int_witnesses: list[tuple[int, int]]
    sigma_int_pass: bool
    sigma_witnesses: list[tuple[int, int]]
    ring: str
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "mu": format_mu(self.mu.weights),
            "sum": str(self.sum),
            "int": self.int_pass,
            "int_witnesses": [list(p) for p in self.int_witnesses],
            "sigma_int": self.sigma_int_pass,
            "sigma_witnesses": [list(p) for p in self.sigma_witnesses],
            "ring": self.ring,
            "reason": self.reason,
        }


def ring_tag(d: int) -> str:
    if 4 % d == 0:
        return "gaussian"
    if d in (3, 6):
        return "eisenstein"
    return f"other({d})"


def classify(m: MuList, literal_sigma: bool = False) -> ClassifiedMu:
    idx = nontrivial_support(m)
    ws = [m.weights[i - 1] for i in idx]
    total = sum(ws, Fraction(0))
    int_bad = _pair_failures(ws, idx, False, False)
    sig_bad = _pair_failures(ws, idx, True, literal_sigma)
    reason = ""
    sum_ok = total == 2
    if not sum_ok:
        reason = "sum"
    return ClassifiedMu(
        mu=m,
        sum=total,
        int_pass=sum_ok and not int_bad,
        int_witnesses=int_bad,
        sigma_int_pass=sum_ok and not sig_bad,
        sigma_witnesses=sig_bad,
        ring=ring_tag(MuList(tuple(ws)).d if len(ws) >= 3 else m.d),
        reason=reason,
    )


def check_int(m: MuList) -> ClassifiedMu:
    return classify(m)


def check_sigma_int(m: MuList, literal: bool = False) -> ClassifiedMu:
    return classify(m, literal_sigma=literal)


def _pair_ok(x: Fraction, y: Fraction, sigma: bool, literal: bool) -> bool:
    s = x + y
    if s >= 1:
        return True
    gap = 1 - s
    if sigma and x == y:
        return (2 * gap).denominator == 1 if literal else (2 / gap).denominator == 1
    return (1 / gap).denominator == 1


def _pair_failures(ws: Sequence[Fraction], idx: Sequence[int], sigma: bool, literal: bool) -> list[tuple[int, int]]:
    return [(idx[a], idx[b]) for a, b in combinations(range(len(ws)), 2) if not _pair_ok(ws[a], ws[b], sigma, literal)]


def _admissible(total: int, parts: int, lo: int, hi: int, lcd: int, prefix: list[Fraction],
                sigma: bool, literal: bool) -> Iterator[tuple[Fraction, ...]]:
    """Non-decreasing numerators in [lo, hi] summing to ``total``, pruned by the pair condition."""
    if parts == 0:
        if total == 0:
            yield tuple(prefix)
        return
    for x in range(lo, min(hi, total) + 1):
        if x * parts > total:
            break
        if x + hi * (parts - 1) < total:
            continue
        w = Fraction(x, lcd)
        if not all(_pair_ok(y, w, sigma, literal) for y in prefix):
            continue
        prefix.append(w)
        yield from _admissible(total - x, parts - 1, x, hi, lcd, prefix, sigma, literal)
        prefix.pop()


def enumerate_mu(n: int, max_denominator: int = 24, condition: str = "INT", literal_sigma: bool = False) -> list[ClassifiedMu]:
    """All weight multisets of size n in (0,1) with sum 2 and lcd <= bound passing the condition."""
    if n < 4:
        raise InvalidInput("n must be at least 4")
    if not 2 <= max_denominator <= 60:
        raise InvalidInput("max_denominator must lie in 2..60")
    cond = condition.upper().replace("-", "").replace("_", "")
    if cond in ("SIGMA", "SIGMAINT"):
        cond = "SIGMAINT"
    if cond not in ("INT", "SIGMAINT"):
        raise InvalidInput(f"unknown condition {condition!r}")
    sigma = cond == "SIGMAINT"
    found = set()
    for lcd in range(2, max_denominator + 1):
        for ws in _admissible(2 * lcd, n, 1, lcd - 1, lcd, [], sigma, literal_sigma):
            if math.lcm(*(w.denominator for w in ws)) == lcd:
                found.add(ws)
    out = [classify(MuList(ws), literal_sigma) for ws in sorted(found)]
    assert all(c.sigma_int_pass if sigma else c.int_pass for c in out)
    return out


def collide(m: MuList, i: int, j: int) -> MuList:
    """Merge points i and j (1-based); the merged weight sits at position min(i, j)."""
    if i == j:
        raise InvalidInput("cannot collide a point with itself")
    n = m.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise InvalidInput(f"indices must lie in 1..{n}")
    s = m.weights[i - 1] + m.weights[j - 1]
    if s.denominator == 1:
        warnings.warn(f"collision of points {i} and {j} is not stable (weight sum {s})", UnstableCollision, stacklevel=2)
    merged = s - math.floor(s)
    if merged == 0:
        merged = Fraction(1)
    lo, hi = sorted((i, j))
    ws = list(m.weights)
    ws[lo - 1] = merged
    del ws[hi - 1]
    return MuList(tuple(ws))


@dataclass
class DescendantPoset:
    root: tuple[Fraction, ...]
    nodes: dict[tuple[Fraction, ...], ClassifiedMu] = field(default_factory=dict)
    depth_of: dict[tuple[Fraction, ...], int] = field(default_factory=dict)
    edges: list[tuple[tuple[Fraction, ...], tuple[Fraction, ...], tuple[int, int]]] = field(default_factory=list)

    def descendants(self) -> list[tuple[Fraction, ...]]:
        return [k for k in self.nodes if k != self.root]

    def contains(self, ws: Sequence[Fraction]) -> bool:
        return tuple(sorted(ws)) in self.nodes and tuple(sorted(ws)) != self.root

    def to_dot(self) -> str:
        lines = ["digraph descendants {"]
        for key in self.nodes:
            lines.append(f'  "{format_mu(key)}";')
        for a, b, (i, j) in self.edges:
            lines.append(f'  "{format_mu(a)}" -> "{format_mu(b)}" [label="{i},{j}"];')
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "root": format_mu(self.root),
            "nodes": [
                {"mu": format_mu(k), "depth": self.depth_of[k], **{x: y for x, y in self.nodes[k].to_json().items() if x != "mu"}}
                for k in self.nodes
            ],
            "edges": [{"from": format_mu(a), "to": format_mu(b), "pair": [i, j]} for a, b, (i, j) in self.edges],
        }


def _stable_children(ws: tuple[Fraction, ...]) -> Iterator[tuple[tuple[Fraction, ...], tuple[int, int]]]:
    seen = set()
    for a, b in combinations(range(len(ws)), 2):
        s = ws[a] + ws[b]
        if s.denominator == 1:
            continue
        if len(ws) <= 3:
            continue
        merged = s - math.floor(s)
        child = list(ws)
        del child[b]
        child[a] = merged
        key = tuple(sorted(child))
        if key in seen:
            continue
        seen.add(key)
        yield key, (a + 1, b + 1)


def descendants(m: MuList, depth: int) -> DescendantPoset:
    """Multisets reachable by at most ``depth`` stable collisions (breadth first)."""
    if depth < 1:
        raise InvalidInput("depth must be at least 1")
    root = tuple(sorted(m.support_weights()))
    poset = DescendantPoset(root)
    poset.nodes[root] = classify(MuList(root))
    poset.depth_of[root] = 0
    queue = deque([root])
    while queue:
        cur = queue.popleft()
        if poset.depth_of[cur] == depth:
            continue
        for child, pair in _stable_children(cur):
            poset.edges.append((cur, child, pair))
            if child not in poset.nodes:
                poset.nodes[child] = classify(MuList(child))
                poset.depth_of[child] = poset.depth_of[cur] + 1
                queue.append(child)
    return poset


_ANCESTOR_CACHE: dict[str, frozenset] = {}


def _reachable(name: str, root: MuList) -> frozenset:
    if name not in _ANCESTOR_CACHE:
        poset = descendants(root, root.n - 4)
        _ANCESTOR_CACHE[name] = frozenset(poset.nodes)
    return _ANCESTOR_CACHE[name]


def is_ancestral_descendant(m: MuList) -> str:
    ws = tuple(sorted(m.support_weights()))
    if len(ws) < 4:
        raise InvalidInput("need at least 4 points with nontrivial monodromy")
    g = ws in _reachable("gaussian", GAUSSIAN_ANCESTOR)
    e = ws in _reachable("eisenstein", EISENSTEIN_ANCESTOR)
    if g and e:
        return "both"
    if g:
        return "gaussian"
    if e:
        return "eisenstein"
    return "neither"
