"""Permutation covers of the sphere and the pull-back of twisted cycles.

The base sphere is cut along an equator through the marked points
p_1, ..., p_m into an upper polygon T+ and a lower polygon T-.  A cover of
degree d with monodromy permutations sigma_j (product sigma_1 ... sigma_m = 1,
composed left to right) is the polygon complex with d copies T+_s, T-_t.
Chains carry coefficients relative to the pulled-back horizontal sections, so
the lift of a base arc is the plain sum of its sheet copies.

Upstairs cycles are written in a standard basis built from a Jordan curve
through the points of nontrivial monodromy, found in the barycentric
refinement of the polygon complex.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .cyclotomic import CycloNumber, as_cyclo, embed_complex
from .errors import InconsistencyError, InvalidInput
from .hurwitz import BranchPoint, RamificationProfile
from .intersection import alphas, intersection_matrix
from .mulist import MuList, frac

__all__ = [
    "CoverMonodromy",
    "CellularCover",
    "PullbackResult",
    "PairingReport",
    "pullback_cycle",
    "pairing_constant",
    "sample_property_g_monodromy",
]

Perm = tuple[int, ...]


def _compose(p: Perm, q: Perm) -> Perm:
    """Left-to-right product: apply p, then q."""
    return tuple(q[p[s]] for s in range(len(p)))


def _inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for s, t in enumerate(p):
        out[t] = s
    return tuple(out)


def _orbits(p: Perm) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for s in range(len(p)):
        if s in seen:
            continue
        orb = [s]
        seen.add(s)
        t = p[s]
        while t != s:
            orb.append(t)
            seen.add(t)
            t = p[t]
        out.append(orb)
    return out


def _cycles_to_perm(cycles: Sequence[Sequence[int]], d: int) -> Perm:
    out = list(range(d))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            out[a - 1] = b - 1
    return tuple(out)


@dataclass(frozen=True)
class CoverMonodromy:
    """Degree-d cover branched over p_1..p_m (equator order) with monodromies sigma_j (0-based images)."""

    degree: int
    perms: tuple[Perm, ...]

    def __post_init__(self):
        d = self.degree
        if d < 1 or len(self.perms) < 3:
            raise InvalidInput("need a positive degree and at least three marked points")
        for p in self.perms:
            if sorted(p) != list(range(d)):
                raise InvalidInput(f"{p} is not a permutation of {d} sheets")
        prod = tuple(range(d))
        for p in self.perms:
            prod = _compose(prod, p)
        if prod != tuple(range(d)):
            raise InvalidInput("the monodromy product is not the identity")
        reach = {0}
        frontier = [0]
        while frontier:
            s = frontier.pop()
            for p in self.perms:
                for t in (p[s], _inverse(p)[s]):
                    if t not in reach:
                        reach.add(t)
                        frontier.append(t)
        if len(reach) != d:
            raise InvalidInput("the monodromy group is not transitive (disconnected cover)")
        if self.genus() != 0:
            raise InvalidInput(f"the cover has genus {self.genus()}, not a sphere")

    @classmethod
    def from_cycles(cls, degree: int, perms: Sequence[Sequence[Sequence[int]]]) -> "CoverMonodromy":
        """Permutations in 1-based cycle notation, e.g. [[(1, 2)], [], [(1, 2)]]."""
        return cls(degree, tuple(_cycles_to_perm(c, degree) for c in perms))

    @classmethod
    def from_three(cls, degree: int, s0, s1, sinf) -> "CoverMonodromy":
        return cls.from_cycles(degree, [s0, s1, sinf])

    @property
    def m(self) -> int:
        return len(self.perms)

    def cycle_types(self) -> list[tuple[int, ...]]:
        return [tuple(sorted((len(o) for o in _orbits(p)), reverse=True)) for p in self.perms]

    def genus(self) -> int:
        ram = sum(self.degree - len(_orbits(p)) for p in self.perms)
        return (ram - 2 * self.degree + 2) // 2

    def profile(self, nu: Sequence[Fraction]) -> RamificationProfile:
        return RamificationProfile(
            self.degree, tuple(BranchPoint(Fraction(w), tuple(len(o) for o in _orbits(p))) for w, p in zip(nu, self.perms))
        )

    def to_json(self) -> dict:
        return {
            "d": self.degree,
            "perms": [[[s + 1 for s in o] for o in _orbits(p) if len(o) > 1] for p in self.perms],
        }


def _random_perm_of_type(d: int, part: int, rng: random.Random) -> Perm:
    sheets = list(range(d))
    rng.shuffle(sheets)
    return _cycles_to_perm([[s + 1 for s in sheets[i:i + part]] for i in range(0, d, part)], d)


def _transposition_factorization(p: Perm) -> list[Perm]:
    """Minimal list of transpositions whose left-to-right product is p."""
    d = len(p)
    out = []
    for orb in _orbits(p):
        # (c0 c1 ... ck) = (c0 c1)(c0 c2)...(c0 ck) applied left to right.
        for x in orb[1:]:
            out.append(_cycles_to_perm([[orb[0] + 1, x + 1]], d))
    return out


def sample_property_g_monodromy(a: int, b: int, d: int, rng: random.Random, tries: int = 500) -> CoverMonodromy:
    """Random genus-0 monodromy with cycle types a^(d/a), b^(d/b), 1^d plus simple branch points.

    Marked points in equator order: t_0, t_1, the free points, t_inf.
    """
    free = d // a + d // b - 2
    ident = tuple(range(d))
    for _ in range(tries):
        s0 = _random_perm_of_type(d, a, rng)
        s1 = _random_perm_of_type(d, b, rng)
        target = _inverse(_compose(s0, s1))
        taus = _transposition_factorization(target)
        slack = free - len(taus)
        if slack < 0 or slack % 2:
            continue
        for _ in range(slack // 2):
            i, j = rng.sample(range(d), 2)
            t = _cycles_to_perm([[i + 1, j + 1]], d)
            taus = taus + [t, t]
        try:
            return CoverMonodromy(d, (s0, s1, *taus, ident))
        except InvalidInput:
            continue
    raise InconsistencyError(f"no transitive ({a},{b},{d}) monodromy in {tries} samples")


@dataclass
class PullbackResult:
    vector: list[CycloNumber]
    upstairs_mu: MuList
    base_vector: list[CycloNumber]

    @property
    def nonzero(self) -> bool:
        return any(not x.is_zero() for x in self.vector)

    def to_json(self) -> dict:
        return {
            "upstairs_mu": str(self.upstairs_mu),
            "vector": [x.to_json() for x in self.vector],
            "base_vector": [x.to_json() for x in self.base_vector],
            "nonzero": self.nonzero,
        }


class CellularCover:
    """Polygon complex of a permutation cover with a twisted chain model."""

    def __init__(self, cm: CoverMonodromy, nu: Sequence[Fraction], seed: int = 0, tries: int = 400):
        if len(nu) != cm.m:
            raise InvalidInput(f"{cm.m} marked points but {len(nu)} weights")
        self.cm = cm
        self.nu = tuple(Fraction(w) for w in nu)
        if any(not 0 < w <= 1 for w in self.nu):
            raise InvalidInput("weights must lie in (0, 1]")
        if sum(self.nu, Fraction(0)).denominator != 1:
            raise InvalidInput("base weights must have an integral sum")
        self.d, self.m = cm.degree, cm.m
        cond = math.lcm(4, *(w.denominator for w in self.nu))
        self.al = alphas(self.nu, cond)
        self.one = as_cyclo(1, cond)
        # Lower-polygon section over E_j equals factor[j] times the upper one.
        self._form = None
        self.factor = [self.one]
        for j in range(1, self.m):
            self.factor.append(self.factor[-1] * self.al[j].conjugate())
        self._build_cells()
        self._build_basis(random.Random(seed), tries)

    # -- cells ---------------------------------------------------------------

    def _build_cells(self) -> None:
        d, m = self.d, self.m
        perms = self.cm.perms
        self.orbit_of = []
        self.vertices = []
        self.vertex_weight = {}
        self.lam = []  # single-valued section near a vertex = lam[j][s] * upper section of sheet s
        for j, p in enumerate(perms):
            orbs = _orbits(p)
            lookup = [0] * d
            lam = [None] * d
            for o_idx, orb in enumerate(orbs):
                w = frac(len(orb) * self.nu[j])
                key = (j, o_idx)
                self.vertices.append(key)
                self.vertex_weight[key] = Fraction(1) if w == 0 else w
                step = self.al[j].conjugate()
                cur = self.one
                for s in orb:
                    lookup[s] = o_idx
                    lam[s] = cur
                    cur = cur * step
            self.orbit_of.append(lookup)
            self.lam.append(lam)
        # g[j][s]: lower polygon glued to edge j of T+_s.
        ident = tuple(range(d))
        self.g = [ident]
        for j in range(1, m):
            self.g.append(_compose(_inverse(perms[j]), self.g[-1]))
        self.ginv = [_inverse(x) for x in self.g]
        self.edges = [(j, s) for j in range(m) for s in range(d)]
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.k_vertices = [v for v in self.vertices if self.vertex_weight[v] != 1]
        chi = len(self.vertices) - len(self.edges) + 2 * d
        if chi != 2:
            raise InconsistencyError(f"polygon complex has Euler characteristic {chi}")
        for t in range(d):
            for j in range(m):
                a = self.orbit_of[j][self.ginv[j][t]]
                b = self.orbit_of[j][self.ginv[j - 1][t]] if j else self.orbit_of[0][self.ginv[m - 1][t]]
                if a != b:
                    raise InconsistencyError("lower polygon corners do not close up")

    def edge_vertices(self, j: int, s: int) -> tuple[tuple[int, int], tuple[int, int]]:
        nxt = (j + 1) % self.m
        return (j, self.orbit_of[j][s]), (nxt, self.orbit_of[nxt][s])

    def corner(self, sign: str, sheet: int, j: int) -> tuple[int, int]:
        s = sheet if sign == "+" else self.ginv[j][sheet]
        return (j, self.orbit_of[j][s])

    def boundary_2(self) -> list[list[CycloNumber]]:
        """Columns: upper faces then lower faces; rows: edges (j, s)."""
        d, m = self.d, self.m
        zero = self.one * 0
        cols = []
        for s in range(d):
            col = [zero] * len(self.edges)
            for j in range(m):
                col[self.edge_index[(j, s)]] = self.one
            cols.append(col)
        for t in range(d):
            col = [zero] * len(self.edges)
            for j in range(m):
                col[self.edge_index[(j, self.ginv[j][t])]] = -self.factor[j]
            cols.append(col)
        return cols

    def boundary_1(self, chain: Sequence[CycloNumber]) -> dict:
        """Boundary at vertices of trivial monodromy, in the local single-valued section."""
        out: dict = {}
        for (j, s), c in zip(self.edges, chain):
            if c.is_zero():
                continue
            start, end = self.edge_vertices(j, s)
            for v, sign, jj in ((end, 1, (j + 1) % self.m), (start, -1, j)):
                if v in self.k_vertices:
                    continue
                out[v] = out.get(v, self.one * 0) + c * sign / self.lam[jj][s]
        return {v: c for v, c in out.items() if not c.is_zero()}

    # -- Jordan curve and standard basis ------------------------------------

    def _graph(self):
        adj: dict = {}

        def link(a, b, eid):
            adj.setdefault(a, []).append((b, eid))
            adj.setdefault(b, []).append((a, eid))

        for j, s in self.edges:
            a, b = self.edge_vertices(j, s)
            link(("v",) + a, ("v",) + b, ("e", j, s))
        for sign in "+-":
            for sheet in range(self.d):
                for j in range(self.m):
                    link(("c", sign, sheet), ("v",) + self.corner(sign, sheet, j), ("sp", sign, sheet, j))
        return adj

    def _edge_ends(self, eid):
        if eid[0] == "e":
            a, b = self.edge_vertices(eid[1], eid[2])
            return ("v",) + a, ("v",) + b
        _, sign, sheet, j = eid
        return ("c", sign, sheet), ("v",) + self.corner(sign, sheet, j)

    def _find_curve(self, rng: random.Random, tries: int):
        if self.d == 1:
            nodes = [("v", j, 0) for j in range(self.m)]
            return nodes, [("e", j, 0) for j in range(self.m)]
        adj = self._graph()
        targets = [("v",) + v for v in self.k_vertices]
        for _ in range(tries):
            start = targets[0]
            nodes, eids = [start], []
            used = {start}
            remaining = set(targets[1:])
            ok = True
            while remaining:
                path = self._bfs(adj, nodes[-1], lambda x: x in remaining, used, set(eids), rng)
                if path is None:
                    ok = False
                    break
                for node, eid in path:
                    nodes.append(node)
                    eids.append(eid)
                    used.add(node)
                    remaining.discard(node)
            if not ok:
                continue
            used.discard(start)
            path = self._bfs(adj, nodes[-1], lambda x: x == start, used, set(eids), rng)
            if path is None or (len(path) == 1 and len(eids) == 0):
                continue
            for node, eid in path:
                nodes.append(node)
                eids.append(eid)
            return nodes[:-1], eids
        raise InconsistencyError(f"no Jordan curve through the special points in {tries} attempts")

    @staticmethod
    def _bfs(adj, src, is_goal, blocked, used_edges, rng):
        prev = {src: None}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            nbrs = list(adj[x])
            rng.shuffle(nbrs)
            for y, eid in nbrs:
                if y in prev or eid in used_edges:
                    continue
                if y in blocked and not is_goal(y):
                    continue
                prev[y] = (x, eid)
                if is_goal(y):
                    path = []
                    while prev[y] is not None:
                        x0, e0 = prev[y]
                        path.append((y, e0))
                        y = x0
                    return path[::-1]
                queue.append(y)
        return None

    def _triangles_of(self, eid):
        """Triangles adjacent to a refined edge, with the edge's sign in each boundary."""
        if eid[0] == "e":
            _, j, s = eid
            return [(("+", s, j), 1), (("-", self.g[j][s], j), -1)]
        _, sign, sheet, j = eid
        prev_j = (j - 1) % self.m
        if sign == "+":
            return [((sign, sheet, j), 1), ((sign, sheet, prev_j), -1)]
        return [((sign, sheet, j), -1), ((sign, sheet, prev_j), 1)]

    def _triangle_edges(self, tri):
        sign, sheet, j = tri
        nxt = (j + 1) % self.m
        e = ("e", j, sheet if sign == "+" else self.ginv[j][sheet])
        return [e, ("sp", sign, sheet, j), ("sp", sign, sheet, nxt)]

    def _build_basis(self, rng: random.Random, tries: int) -> None:
        if len(self.k_vertices) < 3:
            raise InvalidInput("fewer than three upstairs points with nontrivial monodromy")
        nodes, eids = self._find_curve(rng, tries)
        if len(set(nodes)) != len(nodes) or len(set(eids)) != len(eids):
            raise InconsistencyError("curve is not simple")
        dirs = []
        for i, eid in enumerate(eids):
            a, b = self._edge_ends(eid)
            nxt = nodes[(i + 1) % len(nodes)]
            dirs.append(1 if (a, b) == (nodes[i], nxt) else -1)
            if {a, b} != {nodes[i], nxt}:
                raise InconsistencyError("curve edge does not match its endpoints")
        on_curve = set(eids)
        seed_tri = next(t for t, sgn in self._triangles_of(eids[0]) if sgn == dirs[0])
        # Flood fill the left side, carrying the section scale per polygon.
        scale = {(seed_tri[0], seed_tri[1]): self.one}
        inside = {seed_tri}
        queue = deque([seed_tri])
        while queue:
            tri = queue.popleft()
            poly = (tri[0], tri[1])
            for eid in self._triangle_edges(tri):
                if eid in on_curve:
                    continue
                for other, _ in self._triangles_of(eid):
                    if other == tri:
                        continue
                    opoly = (other[0], other[1])
                    if eid[0] == "e":
                        f = self.factor[eid[1]]
                        val = scale[poly] / f if tri[0] == "+" else scale[poly] * f
                    else:
                        val = scale[poly]
                    if opoly in scale and scale[opoly] != val:
                        raise InconsistencyError("section does not extend over the disk")
                    scale[opoly] = val
                    if other not in inside:
                        inside.add(other)
                        queue.append(other)
        total = 2 * self.d * self.m
        if not 0 < len(inside) < total:
            raise InconsistencyError("curve does not split the sphere")
        self.left = inside
        # Rotate so the curve starts at a special point and cut it into arcs.
        kset = {("v",) + v for v in self.k_vertices}
        first = next(i for i, x in enumerate(nodes) if x in kset)
        nodes = nodes[first:] + nodes[:first]
        eids = eids[first:] + eids[:first]
        dirs = dirs[first:] + dirs[:first]
        arcs: list[list[CycloNumber]] = []
        weights = []
        zero = self.one * 0
        chain = None
        i = 0
        n = len(eids)
        while i < n:
            if nodes[i] in kset:
                if chain is not None:
                    arcs.append(chain)
                chain = [zero] * len(self.edges)
                weights.append(self.vertex_weight[nodes[i][1:]])
            eid, eps = eids[i], dirs[i]
            if eid[0] == "e":
                tri = next(t for t, sgn in self._triangles_of(eid) if sgn == eps)
                poly = (tri[0], tri[1])
                coeff = scale[poly] * eps
                if poly[0] == "-":
                    coeff = coeff * self.factor[eid[1]]
                idx = self.edge_index[(eid[1], eid[2])]
                chain[idx] = chain[idx] + coeff
                i += 1
                continue
            # Through a polygon center: corner a -> center -> corner b.
            nxt_eid = eids[(i + 1) % n]
            if nxt_eid[0] != "sp" or nxt_eid[1:3] != eid[1:3]:
                raise InconsistencyError("curve enters a polygon center without leaving it")
            sign, sheet = eid[1], eid[2]
            a_idx, b_idx = eid[3], nxt_eid[3]
            lam = scale[(sign, sheet)]
            k = a_idx
            while k != b_idx:
                s = sheet if sign == "+" else self.ginv[k][sheet]
                coeff = lam if sign == "+" else lam * self.factor[k]
                idx = self.edge_index[(k, s)]
                chain[idx] = chain[idx] + coeff
                k = (k + 1) % self.m
            i += 2
        arcs.append(chain)
        self.curve_nodes = nodes
        self.arcs = arcs
        self.upstairs_mu = MuList(tuple(weights))
        self._check_relations()

    def _solve(self, columns: list[list[CycloNumber]], target: Sequence[CycloNumber]):
        mat = [list(row) for row in zip(*columns)]
        return linalg.solve(mat, list(target))

    def _check_relations(self) -> None:
        k = len(self.arcs)
        ws = self.upstairs_mu.weights
        al = alphas(ws, math.lcm(4, *(w.denominator for w in ws)))
        c = [as_cyclo(1)]
        for j in range(1, k):
            c.append(c[-1] * al[j].conjugate())
        b2 = self.boundary_2()
        for coeffs in ([as_cyclo(1)] * k, c):
            total = [sum((cc * arc[e] for cc, arc in zip(coeffs, self.arcs)), self.one * 0) for e in range(len(self.edges))]
            if self._solve(b2, total) is None:
                raise InconsistencyError("upstairs arcs violate the boundary relations")
        for arc in self.arcs:
            if self.boundary_1(arc):
                raise InconsistencyError("an upstairs arc has boundary at a regular point")
        cols = self.arcs[: k - 2] + b2
        if linalg.rank([list(r) for r in zip(*cols)]) != len(cols):
            raise InconsistencyError("upstairs arcs and faces are dependent")

    def coordinates(self, chain: Sequence[CycloNumber]) -> list[CycloNumber]:
        """Coordinates of a cycle in the first k-2 arcs of the standard basis."""
        if self.boundary_1(chain):
            raise InvalidInput("chain is not a cycle")
        k = len(self.arcs)
        sol = self._solve(self.arcs[: k - 2] + self.boundary_2(), chain)
        if sol is None:
            raise InconsistencyError("cycle is not in the span of the standard basis")
        return sol[: k - 2]

    def base_arc(self, j: int, jp: int) -> list[CycloNumber]:
        """Lift of the equator arc from p_j to p_jp (0-based, j < jp) summed over sheets."""
        zero = self.one * 0
        chain = [zero] * len(self.edges)
        for i in range(j, jp):
            for s in range(self.d):
                chain[self.edge_index[(i, s)]] = self.one
        return chain

    def gram(self, xs: Sequence[Sequence[CycloNumber]]) -> linalg.Matrix:
        """Matrix of Int(x_p, y_q) = x_p^T Int conj(x_q)."""
        if self._form is None:
            self._form = intersection_matrix(self.upstairs_mu).entries
        left = linalg.matmul([list(x) for x in xs], self._form)
        return linalg.matmul(left, linalg.conj_transpose([list(x) for x in xs]))


def _base_model(nu: Sequence[Fraction]) -> CellularCover:
    ident = tuple(range(1))
    return CellularCover(CoverMonodromy(1, (ident,) * len(nu)), nu)


def _check_pair(nu: Sequence[Fraction], pair: tuple[int, int]) -> tuple[int, int]:
    j, jp = pair
    m = len(nu)
    if not (1 <= j < jp <= m):
        raise InvalidInput(f"base pair must satisfy 1 <= j < j' <= {m}")
    for i in (j, jp):
        if Fraction(nu[i - 1]).denominator == 1:
            raise InvalidInput(f"base point {i} has trivial monodromy")
    return j - 1, jp - 1


def pullback_cycle(cm: CoverMonodromy, nu: Sequence[Fraction], base_pair: tuple[int, int], seed: int = 0) -> PullbackResult:
    """Pull back the base arc I_{j,j'} (1-based marked points) and express it upstairs."""
    j, jp = _check_pair(nu, base_pair)
    up = CellularCover(cm, nu, seed)
    down = _base_model(nu)
    vec = up.coordinates(up.base_arc(j, jp))
    base = down.coordinates(down.base_arc(j, jp))
    return PullbackResult(vec, up.upstairs_mu, base)


@dataclass
class PairingReport:
    constant: Fraction | None
    constant_is_uniform: bool
    pairs_tested: int
    relative_spread: float
    claimed: Fraction
    image_rank: int
    upstairs_mu: MuList

    @property
    def matches_claim(self) -> bool:
        return self.constant == self.claimed

    def to_json(self) -> dict:
        return {
            "constant": None if self.constant is None else str(self.constant),
            "uniform": self.constant_is_uniform,
            "pairs_tested": self.pairs_tested,
            "relative_spread": self.relative_spread,
            "claimed": str(self.claimed),
            "matches_claim": self.matches_claim,
            "image_rank": self.image_rank,
            "upstairs_mu": str(self.upstairs_mu),
        }


def pairing_constant(cm: CoverMonodromy, nu: Sequence[Fraction], seed: int = 0) -> PairingReport:
    """Measure c with Psi(pi^* x, pi^* y) = c Psi(x, y) over all base arcs between special points."""
    up = CellularCover(cm, nu, seed)
    down = _base_model(nu)
    special = [i for i, w in enumerate(nu) if Fraction(w).denominator != 1]
    cycles = [(a, b) for ai, a in enumerate(special) for b in special[ai + 1:]]
    xs_up = [up.coordinates(up.base_arc(a, b)) for a, b in cycles]
    xs_down = [down.coordinates(down.base_arc(a, b)) for a, b in cycles]
    g_up, g_down = up.gram(xs_up), down.gram(xs_down)
    ratios = []
    uniform = True
    numeric = []
    for p in range(len(cycles)):
        for q in range(len(cycles)):
            top, bottom = g_up[p][q], g_down[p][q]
            if bottom.is_zero():
                uniform &= top.is_zero()
                continue
            r = top / bottom
            ratios.append(r)
            numeric.append(embed_complex(top) / embed_complex(bottom))
    const = None
    if ratios:
        first = ratios[0]
        uniform &= all(r == first for r in ratios) and first.is_rational() and first.rational_value() > 0
        const = first.rational_value() if first.is_rational() else None
    spread = 0.0
    if numeric:
        mean = sum(numeric) / len(numeric)
        spread = max(abs(z - mean) for z in numeric) / abs(mean)
    image_rank = linalg.rank(xs_up) if xs_up else 0
    return PairingReport(const, uniform, len(ratios), spread, Fraction(1), image_rank, up.upstairs_mu)
