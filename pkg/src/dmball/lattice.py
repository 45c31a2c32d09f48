"""Hermitian lattices over the Gaussian integers Z[i] and the Eisenstein integers Z[w].

Elements are ``CycloNumber`` values of conductor 4 (basis 1, i) or 3
(basis 1, w with w = exp(2 pi i / 3)) with integral coordinates.  The form is
Psi(x, y) = x^T G conj(y).
"""

from __future__ import annotations

import cmath
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .cyclotomic import CycloNumber, as_cyclo, embed_complex, is_algebraic_integer, root_of_unity
from .errors import HypothesisError, InconsistencyError, InvalidInput

__all__ = [
    "RING_CONDUCTOR",
    "ring_element",
    "parse_element",
    "format_element",
    "norm",
    "is_unit",
    "units",
    "normalize_associate",
    "euclid_divmod",
    "ring_gcd",
    "smith_normal_form",
    "invariant_factors",
    "RLattice",
    "discriminant",
    "is_unimodular",
    "dual_quotient",
    "orthogonal_complement",
    "is_primitive",
    "AmbiguityVerdict",
    "extension_ambiguity",
    "random_hermitian_gram",
]

RING_CONDUCTOR = {"gaussian": 4, "eisenstein": 3}
_GEN = {"gaussian": "i", "eisenstein": "w"}
_SECTOR = {"gaussian": math.pi / 2, "eisenstein": math.pi / 3}


def _conductor(ring: str) -> int:
    try:
        return RING_CONDUCTOR[ring]
    except KeyError:
        raise InvalidInput(f"unknown ring {ring!r}; use gaussian or eisenstein") from None


def ring_element(ring: str, a: int, b: int = 0) -> CycloNumber:
    """a + b*i or a + b*w."""
    return CycloNumber(_conductor(ring), [a, b])


_TERM = re.compile(r"([+-]?)(\d*)([iw]?)")


def parse_element(ring: str, text) -> CycloNumber:
    d = _conductor(ring)
    if isinstance(text, bool):
        raise InvalidInput(f"bad ring element {text!r}")
    if isinstance(text, int):
        return as_cyclo(text, d)
    if isinstance(text, dict):
        x = CycloNumber.from_json(text).promote(d) if text.get("d", d) != d else CycloNumber.from_json(text)
        return _check_integral(x, text)
    s = str(text).replace(" ", "").replace("*", "")
    if not s:
        raise InvalidInput("empty ring element")
    pos = 0
    a = b = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise InvalidInput(f"cannot parse ring element {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        if not m.group(2) and not m.group(3):
            raise InvalidInput(f"cannot parse ring element {text!r}")
        coef = int(m.group(2)) if m.group(2) else 1
        gen = m.group(3)
        if gen and gen != _GEN[ring]:
            raise InvalidInput(f"generator {gen!r} does not belong to the {ring} ring")
        if gen:
            b += sign * coef
        else:
            a += sign * coef
        pos = m.end()
    return ring_element(ring, a, b)


def _check_integral(x: CycloNumber, src) -> CycloNumber:
    if not is_algebraic_integer(x):
        raise InvalidInput(f"{src!r} is not an algebraic integer")
    return x


def format_element(ring: str, x: CycloNumber) -> str:
    c = x.promote(_conductor(ring)).coeffs if x.d != _conductor(ring) else x.coeffs
    a, b = (list(c) + [Fraction(0), Fraction(0)])[:2]
    g = _GEN[ring]
    if b == 0:
        return str(a)
    bpart = ("" if abs(b) == 1 else str(abs(b))) + g
    if a == 0:
        return ("-" if b < 0 else "") + bpart
    return f"{a}{'-' if b < 0 else '+'}{bpart}"


def _coords(ring: str, x: CycloNumber) -> tuple[Fraction, Fraction]:
    d = _conductor(ring)
    y = x if x.d == d else x.to_conductor(d)
    c = list(y.coeffs) + [Fraction(0)] * 2
    return c[0], c[1]


def norm(x: CycloNumber) -> int:
    n = (x * x.conjugate()).rational_value()
    if n.denominator != 1:
        raise InvalidInput(f"{x} is not a ring integer")
    return int(n)


def is_unit(x: CycloNumber) -> bool:
    return not x.is_zero() and norm(x) == 1


def units(ring: str) -> list[CycloNumber]:
    order = 4 if ring == "gaussian" else 6
    d = _conductor(ring)
    return [root_of_unity(k, order).to_conductor(d) if order != d else root_of_unity(k, order) for k in range(order)]


def normalize_associate(ring: str, x: CycloNumber) -> CycloNumber:
    """The associate with argument in [0, pi/2) (gaussian) or [0, pi/3) (eisenstein)."""
    if x.is_zero():
        return x
    sector = _SECTOR[ring]
    for u in units(ring):
        y = x * u
        arg = cmath.phase(embed_complex(y)) % (2 * math.pi)
        if arg < sector - 1e-12 or arg > 2 * math.pi - 1e-12:
            return y
    raise InconsistencyError("no normalized associate found")


def euclid_divmod(ring: str, a: CycloNumber, b: CycloNumber) -> tuple[CycloNumber, CycloNumber]:
    """a = q b + r with N(r) < N(b); q is the nearest lattice point to a / b."""
    if b.is_zero():
        raise InvalidInput("division by zero")
    x, y = _coords(ring, a / b)
    target = embed_complex(a / b)
    best = None
    for qx in {math.floor(x), math.ceil(x)}:
        for qy in {math.floor(y), math.ceil(y)}:
            q = ring_element(ring, qx, qy)
            qc = embed_complex(q)
            key = (round(abs(target - qc) ** 2, 12), norm(q), round(qc.real, 12), round(qc.imag, 12))
            if best is None or key < best[0]:
                best = (key, q)
    q = best[1]
    r = a - q * b
    if not r.is_zero() and norm(r) >= norm(b):
        raise InconsistencyError("Euclidean step did not reduce the norm")
    return q, r


def ring_gcd(ring: str, xs: Sequence[CycloNumber]) -> CycloNumber:
    g = as_cyclo(0, _conductor(ring))
    for x in xs:
        a, b = g, x
        while not b.is_zero():
            _, r = euclid_divmod(ring, a, b)
            a, b = b, r
        g = a
    return normalize_associate(ring, g)


def _divides(ring: str, a: CycloNumber, b: CycloNumber) -> bool:
    if a.is_zero():
        return b.is_zero()
    return euclid_divmod(ring, b, a)[1].is_zero()


def smith_normal_form(ring: str, mat: Sequence[Sequence[CycloNumber]]) -> list[CycloNumber]:
    """Diagonal of the Smith normal form (normalized associates, divisibility order)."""
    a = [list(r) for r in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    zero = as_cyclo(0, _conductor(ring))
    diag = []
    for t in range(min(rows, cols)):
        while True:
            cand = [(norm(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if not a[i][j].is_zero()]
            if not cand:
                return diag + [zero] * (min(rows, cols) - t)
            _, pi, pj = min(cand)
            a[t], a[pi] = a[pi], a[t]
            for r in a:
                r[t], r[pj] = r[pj], r[t]
            clean = True
            for i in range(t + 1, rows):
                if not a[i][t].is_zero():
                    q, rem = euclid_divmod(ring, a[i][t], a[t][t])
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    clean &= rem.is_zero()
            for j in range(t + 1, cols):
                if not a[t][j].is_zero():
                    q, rem = euclid_divmod(ring, a[t][j], a[t][t])
                    for r in a:
                        r[j] = r[j] - q * r[t]
                    clean &= rem.is_zero()
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if not _divides(ring, a[t][t], a[i][j])), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        diag.append(normalize_associate(ring, a[t][t]))
    return diag


def invariant_factors(ring: str, mat: Sequence[Sequence[CycloNumber]]) -> list[CycloNumber]:
    return smith_normal_form(ring, mat)


@dataclass
class RLattice:
    ring: str
    gram: list[list[CycloNumber]]
    check_nondegenerate: bool = True

    def __post_init__(self):
        d = _conductor(self.ring)
        n = len(self.gram)
        if n == 0 or any(len(r) != n for r in self.gram):
            raise InvalidInput("the Gram matrix must be square and nonempty")
        self.gram = [[x if x.d == d else (x.promote(d) if d % x.d == 0 else x.to_conductor(d)) for x in r] for r in self.gram]
        for r in self.gram:
            for x in r:
                _check_integral(x, format_element(self.ring, x))
        if not linalg.mat_eq(self.gram, linalg.conj_transpose(self.gram)):
            raise InvalidInput("the Gram matrix is not Hermitian")
        if self.check_nondegenerate and linalg.det(self.gram).is_zero():
            raise InvalidInput("the Gram matrix is degenerate")

    @classmethod
    def parse(cls, ring: str, data) -> "RLattice":
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise InvalidInput("the Gram matrix must be a JSON list of rows")
        return cls(ring, [[parse_element(ring, x) for x in r] for r in data])

    @property
    def rank(self) -> int:
        return len(self.gram)

    def psi(self, x: Sequence[CycloNumber], y: Sequence[CycloNumber]) -> CycloNumber:
        return sum(
            (x[a] * self.gram[a][b] * y[b].conjugate() for a in range(self.rank) for b in range(self.rank)),
            as_cyclo(0, _conductor(self.ring)),
        )

    def signature(self) -> tuple[int, int, int]:
        ev = np.linalg.eigvalsh(linalg.to_numpy(self.gram))
        return int((ev > 1e-9).sum()), int((ev < -1e-9).sum()), int((abs(ev) <= 1e-9).sum())

    def to_json(self) -> dict:
        return {"ring": self.ring, "gram": [[format_element(self.ring, x) for x in r] for r in self.gram]}


def discriminant(L: RLattice) -> CycloNumber:
    return linalg.det(L.gram)


def is_unimodular(L: RLattice) -> bool:
    return is_unit(discriminant(L))


def dual_quotient(L: RLattice) -> list[CycloNumber]:
    """Non-unit invariant factors of the Gram matrix: C(L) = L*/L."""
    return [x for x in smith_normal_form(L.ring, L.gram) if not is_unit(x)]


def _vector(ring: str, z) -> list[CycloNumber]:
    d = _conductor(ring)
    out = [parse_element(ring, x) if not isinstance(x, CycloNumber) else x for x in z]
    out = [x if x.d == d else x.to_conductor(d) for x in out]
    if all(x.is_zero() for x in out):
        raise InvalidInput("the vector z must be nonzero")
    return out


def orthogonal_complement(L: RLattice, z) -> tuple[RLattice, list[list[CycloNumber]]]:
    """Basis (as rows) of {x : Psi(x, z) = 0} and the restricted Gram matrix."""
    ring = L.ring
    zv = _vector(ring, z)
    if len(zv) != L.rank:
        raise InvalidInput(f"z has {len(zv)} coordinates, the lattice has rank {L.rank}")
    w = linalg.matvec(L.gram, [x.conjugate() for x in zv])
    n = L.rank
    d = _conductor(ring)
    # Unimodular column operations on the row vector w; track them in u.
    u = linalg.identity(n, d)
    w = list(w)
    while True:
        nz = [(norm(x), j) for j, x in enumerate(w) if not x.is_zero()]
        if len(nz) <= 1:
            break
        _, p = min(nz)
        for j in range(n):
            if j != p and not w[j].is_zero():
                q, _ = euclid_divmod(ring, w[j], w[p])
                w[j] = w[j] - q * w[p]
                for r in u:
                    r[j] = r[j] - q * r[p]
    pivot = next((j for j, x in enumerate(w) if not x.is_zero()), None)
    basis = [[u[i][j] for i in range(n)] for j in range(n) if j != pivot]
    if pivot is None:
        raise InvalidInput("z is in the radical of the form; the complement is everything")
    for b in basis:
        if not L.psi(b, zv).is_zero():
            raise InconsistencyError("complement vector is not orthogonal to z")
    if basis and any(not is_unit(x) for x in smith_normal_form(ring, basis)):
        raise InconsistencyError("complement is not a primitive sublattice")
    if not basis:
        return RLattice(ring, [[as_cyclo(0, d)]], check_nondegenerate=False), basis
    gram = linalg.matmul(linalg.matmul(basis, L.gram), linalg.conj_transpose(basis))
    return RLattice(ring, gram, check_nondegenerate=False), basis


def is_primitive(L: RLattice | str, z) -> bool:
    ring = L.ring if isinstance(L, RLattice) else L
    return is_unit(ring_gcd(ring, _vector(ring, z)))


@dataclass(frozen=True)
class AmbiguityVerdict:
    order: int
    psi_zz: CycloNumber
    ring: str

    @property
    def extends_uniquely(self) -> bool:
        return self.order == 1

    def to_json(self) -> dict:
        return {"order": self.order, "psi_zz": format_element(self.ring, self.psi_zz), "extends_uniquely": self.extends_uniquely}


def extension_ambiguity(L: RLattice, z) -> AmbiguityVerdict:
    """Order of the ambiguity when extending an automorphism of the complement of z."""
    zv = _vector(L.ring, z)
    if not is_primitive(L, zv):
        raise InvalidInput("z is not primitive")
    if not is_unimodular(L):
        raise HypothesisError("criterion inapplicable: the lattice is not unimodular")
    r = L.psi(zv, zv)
    if is_unit(r):
        return AmbiguityVerdict(4 if L.ring == "gaussian" else 6, r, L.ring)
    return AmbiguityVerdict(1, r, L.ring)


def random_hermitian_gram(ring: str, n: int, rng: random.Random, bound: int = 4) -> list[list[CycloNumber]]:
    """Random nondegenerate integral Hermitian Gram matrix of rank n."""
    while True:
        g = [[as_cyclo(0, _conductor(ring)) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            g[i][i] = as_cyclo(rng.randint(-bound, bound), _conductor(ring))
            for j in range(i + 1, n):
                x = ring_element(ring, rng.randint(-bound, bound), rng.randint(-bound, bound))
                g[i][j] = x
                g[j][i] = x.conjugate()
        if not linalg.det(g).is_zero():
            return g
