"""The pseudo-discriminant Delta(A, B) = A^a + B^b on weighted projective classes."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .cyclotomic import CycloNumber, as_cyclo, root_of_unity
from .errors import InconsistencyError, InvalidInput
from .hurwitz import BinaryForm

__all__ = [
    "delta",
    "check_equivariance",
    "same_weighted_class",
    "orbit_classes",
    "orbit_count",
    "generic_degree",
    "hypersurface_condition",
    "hypersurface_solutions",
    "WitnessReport",
    "fiber_witness",
]

WITNESS_BUDGET = 2**12


def delta(A: BinaryForm, B: BinaryForm, a: int, b: int) -> BinaryForm:
    if a < 1 or b < 1:
        raise InvalidInput("exponents must be positive")
    if A.degree * a != B.degree * b:
        raise InvalidInput(f"deg A * a = {A.degree * a} differs from deg B * b = {B.degree * b}")
    return (A**a) + (B**b)


def check_equivariance(A: BinaryForm, B: BinaryForm, a: int, b: int, lams: Sequence[Fraction] = (2, -3, Fraction(1, 2))) -> bool:
    """delta(l^d1 A, l^d2 B) = l^N delta(A, B) exactly."""
    base = delta(A, B, a, b)
    n = base.degree
    for lam in lams:
        lam = Fraction(lam)
        lhs = delta(A.scaled(lam**A.degree), B.scaled(lam**B.degree), a, b)
        if lhs != base.scaled(lam**n):
            return False
    return True


def _ratio(p: Sequence[CycloNumber], q: Sequence[CycloNumber]) -> CycloNumber | None:
    """c with q = c p coefficientwise, or None."""
    i0 = next((i for i, x in enumerate(p) if not x.is_zero()), None)
    if i0 is None:
        raise InvalidInput("zero form")
    for x, y in zip(p, q):
        if (x * q[i0]) != (y * p[i0]):
            return None
    return q[i0] / p[i0]


def same_weighted_class(A: Sequence[CycloNumber], B: Sequence[CycloNumber], A2: Sequence[CycloNumber],
                        B2: Sequence[CycloNumber]) -> bool:
    """Whether (A2, B2) = (l^d1 A, l^d2 B) for some nonzero complex l, by exact ratio tests."""
    d1, d2 = len(A) - 1, len(B) - 1
    ca, cb = _ratio(A, A2), _ratio(B, B2)
    if ca is None or cb is None or ca.is_zero() or cb.is_zero():
        return False
    g = math.gcd(d1, d2)
    if g == 0:
        return True
    # u d1 + v d2 = g; l^g = ca^u cb^v is then forced.
    u = pow(d1 // g, -1, d2 // g) if d2 // g > 1 else 1
    v = (g - u * d1) // d2 if d2 else 0
    c = ca**u * cb**v
    return c ** (d1 // g) == ca and c ** (d2 // g) == cb


def _generic_pair(d1: int, d2: int, rng: random.Random) -> tuple[list[int], list[int]]:
    def nz():
        return rng.choice([x for x in range(-9, 10) if x])
    return [nz() for _ in range(d1 + 1)], [nz() for _ in range(d2 + 1)]


def orbit_classes(a: int, b: int, seed: int = 0) -> list[list[tuple[int, int]]]:
    """Partition of the rescalings (z_a^j A, z_b^k B) into weighted classes.

    Classes follow from the congruences x = j (mod a), x = k (mod b): two
    rescalings agree iff j - j' = k - k' (mod gcd(a, b)).  The partition is
    cross-checked by exact ratio tests on a random generic pair over Q(z_N).
    """
    if a < 1 or b < 1:
        raise InvalidInput("a and b must be positive")
    g = math.gcd(a, b)
    n = math.lcm(a, b)
    classes: dict[int, list[tuple[int, int]]] = {}
    for j in range(a):
        for k in range(b):
            classes.setdefault((j - k) % g, []).append((j, k))
    crt = [classes[r] for r in sorted(classes)]
    d1, d2 = n // a, n // b
    A0, B0 = _generic_pair(d1, d2, random.Random(seed))
    A = [as_cyclo(x, n) for x in A0]
    B = [as_cyclo(x, n) for x in B0]
    za = [root_of_unity(j, a).promote(n) for j in range(a)]
    zb = [root_of_unity(k, b).promote(n) for k in range(b)]
    # Rescaling commutes with the weighted action, so classes are cosets of the class of (0, 0).
    base_class = sorted(
        (j, k) for j in range(a) for k in range(b)
        if same_weighted_class(A, B, [za[j] * x for x in A], [zb[k] * x for x in B])
    )
    if base_class != sorted(crt[0]):
        raise InconsistencyError(f"ratio tests and congruences disagree for ({a}, {b})")
    return crt


def orbit_count(a: int, b: int, seed: int = 0) -> int:
    count = len(orbit_classes(a, b, seed))
    if count != math.gcd(a, b):
        raise InconsistencyError(f"orbit count {count} differs from gcd({a}, {b})")
    return count


@dataclass(frozen=True)
class GenericDegree:
    value: int
    certificate: str

    def to_json(self) -> dict:
        return {"value": self.value, "certificate": self.certificate}


def generic_degree(a: int, b: int, d1: int, d2: int) -> GenericDegree:
    """gcd(a, b), proved when b = 2 and d2 > d1 + 1, otherwise a lower bound."""
    if min(a, b) < 1 or min(d1, d2) < 0:
        raise InvalidInput("degrees and exponents must be nonnegative, exponents positive")
    proved = b == 2 and d2 > d1 + 1
    return GenericDegree(math.gcd(a, b), "proved" if proved else "lower-bound")


def hypersurface_condition(a: int, b: int, d1: int, d2: int) -> bool:
    if a * d1 != b * d2:
        raise InvalidInput(f"a*d1 = {a * d1} differs from b*d2 = {b * d2}")
    n = a * d1
    return d1 + d2 + 2 == n


def hypersurface_solutions(max_ab: int = 12, max_n: int = 24) -> list[tuple[int, int, int]]:
    """Triples (a, b, N) with a >= b >= 2 satisfying the hypersurface condition and the ring constraint."""
    out = []
    for b in range(2, max_ab + 1):
        for a in range(b, max_ab + 1):
            for n in range(3, max_n + 1):
                if n % a or n % b:
                    continue
                if not hypersurface_condition(a, b, n // a, n // b):
                    continue
                if math.lcm(a, b, Fraction(2, n).denominator) in (2, 3, 4, 6):
                    out.append((a, b, n))
    return out


@dataclass
class WitnessReport:
    a: int
    b: int
    d1: int
    d2: int
    seed: int
    orbit_classes_found: int
    expected_classes: int
    extra_found: int
    assignments_tried: int
    budget_exceeded: bool
    samples: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.extra_found == 0 and self.orbit_classes_found == self.expected_classes

    def to_json(self) -> dict:
        return {
            "a": self.a, "b": self.b, "d1": self.d1, "d2": self.d2, "seed": self.seed,
            "orbit_classes_found": self.orbit_classes_found, "expected_classes": self.expected_classes,
            "extra_found": self.extra_found, "assignments_tried": self.assignments_tried,
            "budget_exceeded": self.budget_exceeded, "samples": self.samples, "ok": self.ok,
        }


def _form_roots(coeffs: np.ndarray) -> list[complex | None]:
    """Roots of a binary form (u-degree descending); None marks the point v = 0."""
    lead = int(np.flatnonzero(np.abs(coeffs) > 1e-12)[0])
    finite = list(np.roots(coeffs[lead:])) if len(coeffs) - lead > 1 else []
    return [None] * lead + finite


def _product(roots: Sequence[complex | None], degree: int) -> np.ndarray:
    poly = np.array([1.0 + 0j])
    for r in roots:
        lin = np.array([0.0, 1.0]) if r is None else np.array([1.0, -r])
        poly = np.convolve(poly, lin)
    return poly[-(degree + 1):] if len(poly) > degree + 1 else poly


def _split_solutions(F: np.ndarray, B1: np.ndarray, d2: int, budget: int) -> tuple[list[np.ndarray], int, bool]:
    """All B2 with F = (B2 - B1)(B2 + B1), by splitting the roots of F into two halves."""
    roots = _form_roots(F)
    n = len(roots)
    found: list[np.ndarray] = []
    tried = 0
    for subset in combinations(range(n), d2):
        if tried >= budget:
            return found, tried, True
        tried += 1
        rest = [i for i in range(n) if i not in subset]
        p = _product([roots[i] for i in subset], d2)
        q = _product([roots[i] for i in rest], n - d2)
        pq = np.convolve(p, q)
        i0 = int(np.argmax(np.abs(pq)))
        scale_c = F[i0] / pq[i0]
        # (C/k) q - k p = 2 B1, i.e. k^2 p + 2 k B1 - C q = 0 at the best-conditioned index.
        j0 = int(np.argmax(np.abs(p)))
        for k in np.roots([p[j0], 2 * B1[j0], -scale_c * q[j0]]):
            if abs(k) < 1e-12:
                continue
            resid = (scale_c / k) * q - k * p - 2 * B1
            if np.max(np.abs(resid)) <= 1e-7 * max(1.0, float(np.max(np.abs(B1)))):
                found.append(((scale_c / k) * q + k * p) / 2)
    return found, tried, False


def fiber_witness(a: int, b: int, d1: int, d2: int, seed: int = 0, budget: int = WITNESS_BUDGET,
                  samples: int = 2) -> WitnessReport:
    """Bounded search for preimages of Delta(A1, B1) via A1^a - A2^a = (B2 - B1)(B2 + B1)."""
    if b != 2:
        raise InvalidInput("the witness search needs b = 2")
    if a * d1 != b * d2:
        raise InvalidInput(f"a*d1 = {a * d1} differs from b*d2 = {b * d2}")
    n = a * d1
    if n > 12:
        raise InvalidInput(f"N = {n} exceeds the desk-scale bound 12")
    rng = random.Random(seed)
    A0, B0 = _generic_pair(d1, d2, rng)
    nconductor = math.lcm(a, b)
    A = [as_cyclo(x, nconductor) for x in A0]
    B = [as_cyclo(x, nconductor) for x in B0]
    # Orbit points: A2 = z_a^j A1 kills the left side, leaving B2 = +-B1.
    reps: list[tuple[list[CycloNumber], list[CycloNumber]]] = []
    for j in range(a):
        z = root_of_unity(j, a).promote(nconductor)
        for sgn in (1, -1):
            cand = ([z * x for x in A], [x * sgn for x in B])
            if not any(same_weighted_class(r[0], r[1], cand[0], cand[1]) for r in reps):
                reps.append(cand)
    A1 = np.array(A0, dtype=complex)
    B1 = np.array(B0, dtype=complex)
    target = delta(BinaryForm.exact(A0), BinaryForm.exact(B0), a, 2)
    extra = 0
    tried = 0
    exceeded = False
    per = max(1, budget // max(1, samples))
    for _ in range(samples):
        A2 = np.array([rng.randint(-9, 9) + 1j * rng.randint(-9, 9) for _ in range(d1 + 1)])
        F = _power(A1, a) - _power(A2, a)
        if np.max(np.abs(F)) < 1e-9:
            continue
        sols, t, over = _split_solutions(F, B1, d2, per)
        tried += t
        exceeded |= over
        for B2 in sols:
            check = _power(A2, a) + np.convolve(B2, B2)
            want = np.array([float(c) for c in target.coeffs])
            if np.max(np.abs(check - want)) <= 1e-6 * max(1.0, float(np.max(np.abs(want)))):
                extra += 1
    return WitnessReport(a, b, d1, d2, seed, len(reps), math.gcd(a, b), extra, tried, exceeded, samples)


def _power(p: np.ndarray, k: int) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for _ in range(k):
        out = np.convolve(out, p)
    return out
