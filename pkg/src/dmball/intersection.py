"""Intersection form on twisted first homology of the punctured sphere.

For nontrivial weights mu_1..mu_k (alpha_j = exp(2 pi i mu_j)) the cycles
I_{i,i+1}, i = 1..k-2, form a basis.  Consecutive cycles share the point
s_{i+1}, which fixes the off-diagonal entries:

    Int(i,i)   = 1/(1-alpha_i) - 1 + 1/(1-alpha_{i+1})
    Int(i,i+1) = -1/(1-alpha_{i+1})
    Int(i+1,i) = 1/(1-conj(alpha_{i+1}))

The pairing is linear in the first argument: <x, y> = x^T Int conj(y).
Multiplying by a positive multiple of i gives the Hermitian form Psi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import mpmath
import numpy as np

from . import linalg
from .cyclotomic import CycloNumber, as_cyclo, embed_complex, root_of_unity
from .errors import InconsistencyError, InvalidInput
from .mulist import MuList, frac, nontrivial_support

__all__ = [
    "SesquiForm",
    "CycleSpec",
    "Signature",
    "alphas",
    "self_intersection",
    "intersection_matrix",
    "normalized_hermitian",
    "psi_scale",
    "cycle_self_value",
    "cycle_self_sign",
    "signature",
    "signature_report",
    "real_sign",
]


@dataclass
class SesquiForm:
    d: int
    entries: linalg.Matrix
    kind: str  # "skew" or "hermitian"
    scale: str
    support: tuple[int, ...] = ()
    isotropic_pairs: tuple[tuple[int, int], ...] = ()

    @property
    def size(self) -> int:
        return len(self.entries)

    def is_valid(self) -> bool:
        ct = linalg.conj_transpose(self.entries)
        if self.kind == "skew":
            return linalg.mat_eq(ct, linalg.neg(self.entries))
        return linalg.mat_eq(ct, self.entries)

    def is_tridiagonal(self) -> bool:
        n = self.size
        return all(self.entries[i][j].is_zero() for i in range(n) for j in range(n) if abs(i - j) > 1)

    def pair(self, x: Sequence[CycloNumber], y: Sequence[CycloNumber]) -> CycloNumber:
        """<x, y> = x^T M conj(y)."""
        total = as_cyclo(0)
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            for j, yj in enumerate(y):
                e = self.entries[i][j]
                if yj.is_zero() or e.is_zero():
                    continue
                total = total + xi * e * yj.conjugate()
        return total

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "kind": self.kind,
            "entries": [[x.to_json() for x in row] for row in self.entries],
        }


@dataclass(frozen=True)
class CycleSpec:
    I: tuple[int, ...]
    J: tuple[int, ...]

    def __post_init__(self):
        if not self.I or not self.J:
            raise InvalidInput("both index sets of a cycle must be nonempty")
        if set(self.I) & set(self.J):
            raise InvalidInput("cycle index sets must be disjoint")


class Signature(NamedTuple):
    p: int
    q: int


def alphas(ws: Sequence[Fraction], d: int | None = None) -> list[CycloNumber]:
    """Local monodromies exp(2 pi i w), all over one common conductor."""
    if d is None:
        d = math.lcm(*(w.denominator for w in ws)) if ws else 1
    return [root_of_unity(int(w * d), d) for w in ws]


def self_intersection(a: CycloNumber, b: CycloNumber) -> CycloNumber:
    """Self-intersection of a segment between points with monodromies a and b."""
    return 1 / (1 - a) - 1 + 1 / (1 - b)


def _int_entries(ws: Sequence[Fraction]) -> linalg.Matrix:
    al = alphas(ws)
    n = len(ws) - 2
    d = al[0].d
    mat = linalg.zeros(n, n, d)
    for i in range(n):
        mat[i][i] = self_intersection(al[i], al[i + 1])
        if i + 1 < n:
            shared = al[i + 1]
            mat[i][i + 1] = -1 / (1 - shared)
            mat[i + 1][i] = 1 / (1 - shared.conjugate())
    return mat


def intersection_matrix(m: MuList) -> SesquiForm:
    """Skew-Hermitian Int in the basis I_{i,i+1} over the nontrivial support."""
    support = nontrivial_support(m)
    if len(support) < 3:
        raise InvalidInput(f"need at least 3 points with nontrivial monodromy, got {len(support)}")
    ws = [m.weights[j - 1] for j in support]
    iso = tuple(
        (support[i], support[i + 1]) for i in range(len(ws) - 2) if (ws[i] + ws[i + 1]).denominator == 1
    )
    form = SesquiForm(m.d, _int_entries(ws), "skew", "identity", support, iso)
    return form


def psi_scale(d: int, promote: bool = False) -> tuple[CycloNumber, str]:
    """Normalization tau (a positive real multiple of i) for the conductor d."""
    if 4 % d == 0:
        return 2 * root_of_unity(1, 4), "2i"
    if 6 % d == 0:
        return 2 * root_of_unity(1, 3) + 1, "i*sqrt(3)"
    if promote:
        return 2 * root_of_unity(1, 4), "2i"
    raise InvalidInput(f"conductor {d} is neither Gaussian nor Eisenstein type; pass promote=True")


def normalized_hermitian(m: MuList, promote: bool = False) -> SesquiForm:
    skew = intersection_matrix(m)
    d = m.pruned().d
    tau, label = psi_scale(d, promote)
    entries = linalg.scale(skew.entries, tau)
    big = linalg.common_conductor(entries)
    return SesquiForm(big, entries, "hermitian", label, skew.support, skew.isotropic_pairs)


def _cycle_sums(m: MuList, c: CycleSpec) -> tuple[Fraction, Fraction]:
    support = set(nontrivial_support(m))
    for idx in c.I + c.J:
        if idx not in support:
            raise InvalidInput(f"index {idx} is not in the nontrivial support")
    sI = sum((m.weights[i - 1] for i in c.I), Fraction(0))
    sJ = sum((m.weights[j - 1] for j in c.J), Fraction(0))
    if sI.denominator == 1 or sJ.denominator == 1:
        raise InvalidInput("cycle index sets must have non-integral weight sums")
    return sI, sJ


def cycle_self_value(m: MuList, c: CycleSpec) -> CycloNumber:
    """Exact Int self-intersection of I_{I,J}."""
    sI, sJ = _cycle_sums(m, c)
    a, b = alphas([frac(sI), frac(sJ)])
    return -1 / (a - 1) - 1 + 1 / (1 - b)


def real_sign(x: CycloNumber, tol: float = 1e-9) -> int:
    """Sign of a real cyclotomic number; exact zero test, then high precision if needed."""
    if x.is_zero():
        return 0
    v = embed_complex(x)
    if abs(v.imag) > 1e-8 * max(1.0, abs(v)):
        raise InconsistencyError(f"expected a real number, got {v}")
    if abs(v.real) > tol:
        return 1 if v.real > 0 else -1
    with mpmath.workdps(60):
        acc = mpmath.mpf(0)
        for k, c in enumerate(x.numerators):
            if c:
                acc += c * mpmath.cos(2 * mpmath.pi * k / x.d)
        acc /= x.denominator
        if acc == 0:
            raise InconsistencyError(f"nonzero exact value {x} evaluates to zero")
        return 1 if acc > 0 else -1


def _psi_sign_of_skew(x: CycloNumber) -> int:
    """Sign of i*x for x purely imaginary."""
    return real_sign(x * root_of_unity(1, 4))


def cycle_self_sign(m: MuList, c: CycleSpec) -> int:
    """-1, 0 or +1: the sign of Psi(I_{I,J}, I_{I,J}) for any positive normalization."""
    sI, sJ = _cycle_sums(m, c)
    s = frac(sI) + frac(sJ)
    predicted = (s > 1) - (s < 1)
    exact = _psi_sign_of_skew(cycle_self_value(m, c))
    if predicted != exact:
        raise InconsistencyError(f"sign rule {predicted} disagrees with exact value sign {exact} for {c}")
    return predicted


@dataclass
class SignatureReport:
    formula: Signature | None
    constructive: Signature
    eigen: Signature
    nullity: int
    pivots: list[CycloNumber] = field(default_factory=list)
    nested_checked: int = 0

    @property
    def value(self) -> Signature:
        return self.formula if self.formula is not None else self.constructive


def _constructive(ws: Sequence[Fraction], mat: linalg.Matrix) -> tuple[Signature, int, list, int]:
    """Congruence diagonalization of Int with 1x1 and 2x2 pivots.

    Each 1x1 pivot at step m is compared with the self-intersection of the
    nested cycle I_{{1..m},{m+1}} whenever no earlier 2x2 pivot occurred.
    """
    al = alphas(ws)
    s = [list(r) for r in mat]
    n = len(s)
    p = q = null = 0
    pivots = []
    nested_ok = True
    checked = 0
    prod = al[0]
    order = list(range(n))
    m = 0
    while m < n:
        piv = s[m][m]
        if not piv.is_zero():
            sign = _psi_sign_of_skew(piv)
            if prod == 1:
                nested_ok = False
            if nested_ok:
                expected = self_intersection(prod, al[m + 1])
                if expected != piv:
                    raise InconsistencyError(f"pivot {m + 1} differs from the nested cycle self-intersection")
                rule = frac(sum(ws[: m + 1], Fraction(0))) + ws[m + 1]
                if sign != (rule > 1) - (rule < 1):
                    raise InconsistencyError(f"nested cycle sign rule fails at step {m + 1}")
                checked += 1
            pivots.append(piv)
            p += sign > 0
            q += sign < 0
            inv = piv.inverse()
            for i in range(m + 1, n):
                if s[i][m].is_zero():
                    continue
                f = s[i][m] * inv
                for j in range(m + 1, n):
                    if not s[m][j].is_zero():
                        s[i][j] = s[i][j] - f * s[m][j]
            prod = prod * al[m + 1]
            m += 1
            continue
        partner = next((j for j in range(m + 1, n) if not s[m][j].is_zero()), None)
        if partner is None:
            null += 1
            nested_ok = False
            m += 1
            continue
        nested_ok = False
        if partner != m + 1:
            t = m + 1
            s[t], s[partner] = s[partner], s[t]
            for row in s:
                row[t], row[partner] = row[partner], row[t]
            order[t], order[partner] = order[partner], order[t]
        # 2x2 block [[0, b], [-conj(b), c]] has one positive and one negative Psi direction
        block = [[s[m][m], s[m][m + 1]], [s[m + 1][m], s[m + 1][m + 1]]]
        blk_inv = linalg.inverse(block)
        p += 1
        q += 1
        pivots.append(linalg.det(block))
        for i in range(m + 2, n):
            ci = [s[i][m], s[i][m + 1]]
            if all(x.is_zero() for x in ci):
                continue
            coef = [ci[0] * blk_inv[0][0] + ci[1] * blk_inv[1][0], ci[0] * blk_inv[0][1] + ci[1] * blk_inv[1][1]]
            for j in range(m + 2, n):
                upd = coef[0] * s[m][j] + coef[1] * s[m + 1][j]
                if not upd.is_zero():
                    s[i][j] = s[i][j] - upd
        m += 2
    return Signature(p, q), null, pivots, checked


def _eigen(mat: linalg.Matrix, threshold: float = 1e-9) -> tuple[Signature, int]:
    h = 1j * linalg.to_numpy(mat)
    h = (h + h.conj().T) / 2
    ev = np.linalg.eigvalsh(h)
    p = int(np.sum(ev > threshold))
    q = int(np.sum(ev < -threshold))
    return Signature(p, q), len(ev) - p - q


def signature_report(m: MuList) -> SignatureReport:
    form = intersection_matrix(m)
    ws = [m.weights[j - 1] for j in form.support]
    total = sum(ws, Fraction(0))
    formula = None
    if total.denominator == 1:
        formula = Signature(int(total - 1), int(sum((1 - w for w in ws), Fraction(0)) - 1))
    cons, null, pivots, checked = _constructive(ws, form.entries)
    eig, eig_null = _eigen(form.entries)
    if cons != eig or null != eig_null:
        raise InconsistencyError(f"constructive signature {cons} (nullity {null}) != eigenvalue count {eig} (nullity {eig_null})")
    if formula is not None and formula != cons:
        raise InconsistencyError(f"formula signature {formula} != constructive {cons}")
    return SignatureReport(formula, cons, eig, null, pivots, checked)


def signature(m: MuList) -> Signature:
    return signature_report(m).value
