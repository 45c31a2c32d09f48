"""Ramification profiles, Hurwitz dimension counts and property-G covers.

A property-G cover is pi = A^a / (A^a + B^b) for binary forms A, B.  Fibers
are read off from exact root multiplicities: over 0 the roots of A^a, over 1
the roots of -B^b, over infinity the roots of A^a + B^b.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy
from sympy import Poly, QQ

from .errors import HypothesisError, InconsistencyError, InvalidInput
from .mulist import MuList, frac, nontrivial_support

__all__ = [
    "BranchPoint",
    "RamificationProfile",
    "HurwitzCount",
    "SpiCodim",
    "BinaryForm",
    "PropertyGCover",
    "pullback_mu",
    "hurwitz_codim",
    "spi_codim_in_dm",
    "classify_property_g",
    "property_g_profile",
    "build_property_g_cover",
    "verify_ramification",
    "random_property_g_cover",
    "parse_fibers",
    "numeric_multiplicities",
]

_U, _V = sympy.symbols("u v")


@dataclass(frozen=True)
class BranchPoint:
    nu: Fraction
    fiber: tuple[int, ...]
    label: str = ""


@dataclass(frozen=True)
class RamificationProfile:
    degree: int
    branch_points: tuple[BranchPoint, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise InvalidInput("cover degree must be positive")
        if not self.branch_points:
            raise InvalidInput("a profile needs at least one branch point")
        for bp in self.branch_points:
            if any(r < 1 for r in bp.fiber):
                raise InvalidInput(f"ramification indices must be positive, got {list(bp.fiber)}")
            if sum(bp.fiber) != self.degree:
                raise InvalidInput(f"fiber {list(bp.fiber)} does not sum to the degree {self.degree}")
        if self.ramification_total() > 2 * self.degree - 2:
            raise InvalidInput(
                f"total ramification {self.ramification_total()} exceeds 2d-2 = {2 * self.degree - 2}"
            )

    def ramification_total(self) -> int:
        return sum(r - 1 for bp in self.branch_points for r in bp.fiber)

    @property
    def free_branch_points(self) -> int:
        return 2 * self.degree - 2 - self.ramification_total()

    def nu(self) -> tuple[Fraction, ...]:
        return tuple(bp.nu for bp in self.branch_points)

    def to_json(self) -> dict:
        return {
            "d": self.degree,
            "branch": [{"nu": str(bp.nu), "fiber": list(bp.fiber)} for bp in self.branch_points],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RamificationProfile":
        try:
            return cls(
                int(data["d"]),
                tuple(BranchPoint(Fraction(b["nu"]), tuple(int(r) for r in b["fiber"])) for b in data["branch"]),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"malformed profile: {exc}") from exc


def parse_fibers(nu: Sequence[Fraction], text: str) -> RamificationProfile:
    """Parse ``"3;3;3;3|2;2;2;2;2;2|1x12"`` (one block per branch point)."""
    blocks = [b.strip() for b in text.split("|")]
    if len(blocks) != len(nu):
        raise InvalidInput(f"{len(nu)} weights but {len(blocks)} fiber blocks")
    bps = []
    for w, block in zip(nu, blocks):
        fiber: list[int] = []
        for tok in block.replace(",", ";").split(";"):
            tok = tok.strip()
            if not tok:
                continue
            try:
                if "x" in tok:
                    r, k = tok.split("x")
                    fiber.extend([int(r)] * int(k))
                else:
                    fiber.append(int(tok))
            except ValueError as exc:
                raise InvalidInput(f"bad fiber token {tok!r}") from exc
        bps.append(BranchPoint(Fraction(w), tuple(fiber)))
    degrees = {sum(bp.fiber) for bp in bps}
    if len(degrees) != 1:
        raise InvalidInput(f"fibers have different total degrees {sorted(degrees)}")
    return RamificationProfile(degrees.pop(), tuple(bps))


def pullback_mu(profile: RamificationProfile) -> MuList:
    out = []
    for bp in profile.branch_points:
        for r in bp.fiber:
            f = frac(r * bp.nu)
            out.append(Fraction(1) if f == 0 else f)
    return MuList(tuple(out))


@dataclass(frozen=True)
class HurwitzCount:
    codim: int
    dim: int
    reduced_dim: int


def hurwitz_codim(profile: RamificationProfile) -> HurwitzCount:
    codim = profile.ramification_total()
    dim = 2 * profile.degree + 1 - codim
    return HurwitzCount(codim, dim, dim - 3)


@dataclass(frozen=True)
class SpiCodim:
    value: int
    hypothesis_ok: bool
    reason: str = ""


def spi_codim_in_dm(profile: RamificationProfile, strict: bool = True) -> SpiCodim:
    """Codimension of the pulled-back family inside the DM configuration space.

    Valid when the support of the pulled-back weights is a single full fiber
    and some branch weight has denominator above 2; otherwise only an upper
    bound, raised as ``HypothesisError`` when ``strict``.
    """
    mu = pullback_mu(profile)
    support = nontrivial_support(mu)
    owners = []
    for j, bp in enumerate(profile.branch_points):
        owners.extend([j] * len(bp.fiber))
    fibers_hit = {owners[i - 1] for i in support}
    reasons = []
    if len(fibers_hit) != 1:
        reasons.append("support is not contained in a single fiber")
    else:
        j = fibers_hit.pop()
        if len(support) != len(profile.branch_points[j].fiber):
            reasons.append("support is not a full fiber")
    if not any(bp.nu.denominator > 2 for bp in profile.branch_points):
        reasons.append("no branch weight with denominator above 2")
    value = (len(support) - 3) - hurwitz_codim(profile).reduced_dim
    if reasons and strict:
        raise HypothesisError("; ".join(reasons) + f" (value {value} is only an upper bound)")
    return SpiCodim(value, not reasons, "; ".join(reasons))


_G_RINGS = (2, 3, 4, 6)


def classify_property_g(max_ab: int = 12, max_d: int = 24) -> list[tuple[int, int, int]]:
    """Solutions of 1/a + 1/b + 2/d = 1 with a >= b >= 2, a | d, b | d and lcd of the weights in {2,3,4,6}.

    The lcd bound forces a, b | 12 and the reduced denominator of 2/d into
    {2,3,4,6}, hence d <= 12; the default box is therefore exhaustive.
    """
    out = []
    for b in range(2, max_ab + 1):
        for a in range(b, max_ab + 1):
            for d in range(3, max_d + 1):
                if Fraction(1, a) + Fraction(1, b) + Fraction(2, d) != 1:
                    continue
                if d % a or d % b:
                    continue
                lcd = math.lcm(a, b, Fraction(2, d).denominator)
                if lcd in _G_RINGS:
                    out.append((a, b, d))
    return out


def property_g_profile(a: int, b: int, d: int) -> RamificationProfile:
    if d % a or d % b:
        raise InvalidInput(f"({a},{b},{d}) violates a | d and b | d")
    return RamificationProfile(
        d,
        (
            BranchPoint(Fraction(1, a), (a,) * (d // a), "0"),
            BranchPoint(Fraction(1, b), (b,) * (d // b), "1"),
            BranchPoint(Fraction(2, d), (1,) * d, "inf"),
        ),
    )


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form sum_k coeffs[k] u^(deg-k) v^k (u-degree descending)."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise InvalidInput("a binary form needs at least one coefficient")
        if all(c == 0 for c in self.coeffs):
            raise InvalidInput("the zero form is not allowed")

    @classmethod
    def exact(cls, coeffs: Sequence) -> "BinaryForm":
        try:
            return cls(tuple(Fraction(c) for c in coeffs))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"bad coefficient list {list(coeffs)!r}") from exc

    @classmethod
    def parse(cls, text: str) -> "BinaryForm":
        return cls.exact([t for t in text.replace(" ", "").split(",") if t])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def poly(self) -> Poly:
        if not self.is_exact:
            raise InvalidInput("exact operation on a floating form")
        n = self.degree
        expr = sum(sympy.Rational(c.numerator, c.denominator) * _U ** (n - k) * _V**k for k, c in enumerate(self.coeffs))
        return Poly(expr, _U, _V, domain=QQ)

    @classmethod
    def from_poly(cls, p: Poly, degree: int) -> "BinaryForm":
        coeffs = [Fraction(0)] * (degree + 1)
        for (i, j), c in p.terms():
            if i + j != degree:
                raise InconsistencyError("polynomial is not homogeneous of the expected degree")
            coeffs[j] = Fraction(int(c.p), int(c.q))
        return cls(tuple(coeffs))

    def scaled(self, lam) -> "BinaryForm":
        return BinaryForm(tuple(c * lam for c in self.coeffs))

    def __pow__(self, k: int) -> "BinaryForm":
        return BinaryForm.from_poly(self.poly() ** k, self.degree * k)

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise InvalidInput(f"cannot add forms of degrees {self.degree} and {other.degree}")
        return BinaryForm(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def multiplicities(self) -> list[int]:
        """Root multiplicities on P^1, sorted descending (exact squarefree decomposition)."""
        if not self.is_exact:
            return numeric_multiplicities(self)
        n = self.degree
        f = Poly(self.poly().as_expr().subs(_V, 1), _U, domain=QQ)
        out: list[int] = []
        inf = n - f.degree() if not f.is_zero else n
        if inf:
            out.append(inf)
        if f.degree() > 0:
            _, factors = f.sqf_list()
            for g, k in factors:
                out.extend([k] * g.degree())
        return sorted(out, reverse=True)

    def is_squarefree(self) -> bool:
        return all(k == 1 for k in self.multiplicities())

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self) -> str:
        return str(self.poly().as_expr()) if self.is_exact else repr(self.coeffs)


def numeric_multiplicities(form: BinaryForm, rel_tol: float = 1e-6) -> list[int]:
    """Cluster numerically computed roots at relative distance ``rel_tol``."""
    coeffs = np.array([complex(c) for c in form.coeffs])
    lead = np.flatnonzero(np.abs(coeffs) > 0)[0]
    roots = np.roots(coeffs[lead:]) if len(coeffs) - lead > 1 else np.array([])
    out: list[int] = [int(lead)] if lead else []
    used = np.zeros(len(roots), dtype=bool)
    for i, r in enumerate(roots):
        if used[i]:
            continue
        scale = max(1.0, abs(r))
        close = (~used) & (np.abs(roots - r) <= rel_tol * scale)
        used |= close
        out.append(int(close.sum()))
    return sorted(out, reverse=True)


@dataclass
class PropertyGCover:
    a: int
    b: int
    A: BinaryForm
    B: BinaryForm
    d: int = field(init=False)
    D: BinaryForm = field(init=False)

    def __post_init__(self):
        self.d = self.a * self.A.degree
        self.D = (self.A**self.a) + (self.B**self.b)

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "d": self.d, "A": self.A.to_json(), "B": self.B.to_json(), "D": self.D.to_json()}


def build_property_g_cover(a: int, b: int, A: BinaryForm, B: BinaryForm) -> PropertyGCover:
    if a < 1 or b < 1:
        raise InvalidInput("exponents must be positive")
    if A.degree * a != B.degree * b or A.degree < 1:
        raise InvalidInput(f"deg A * a = {A.degree * a} differs from deg B * b = {B.degree * b}")
    if not A.is_squarefree():
        raise InvalidInput(f"A = {A} has a repeated root")
    if not B.is_squarefree():
        raise InvalidInput(f"B = {B} has a repeated root")
    if sympy.gcd(A.poly(), B.poly()).total_degree() > 0:
        raise InvalidInput("A and B share a root; the cover degree drops")
    cover = PropertyGCover(a, b, A, B)
    mult = cover.D.multiplicities()
    if len(set(mult)) != 1:
        raise InvalidInput(f"A^a + B^b has mixed root multiplicities {mult}")
    return cover


def _wronskian(n: Poly, d: Poly) -> Poly:
    return n.diff(_U) * d.diff(_V) - n.diff(_V) * d.diff(_U)


def verify_ramification(cover: PropertyGCover) -> RamificationProfile:
    """Fibers over 0, 1, infinity plus a Riemann-Hurwitz check through the Wronskian."""
    d = cover.d
    n_poly = (cover.A**cover.a).poly()
    d_poly = cover.D.poly()
    over0 = (cover.A**cover.a).multiplicities()
    over1 = (cover.B**cover.b).multiplicities()
    overinf = cover.D.multiplicities()
    for fib, name in ((over0, "0"), (over1, "1"), (overinf, "infinity")):
        if sum(fib) != d:
            raise InconsistencyError(f"fiber over {name} has total multiplicity {sum(fib)} != {d}")
    w = _wronskian(n_poly, d_poly)
    if w.is_zero:
        raise InconsistencyError("vanishing Wronskian: the map is constant")
    w_form = BinaryForm.from_poly(w, 2 * d - 2)
    special = sum(r - 1 for fib in (over0, over1, overinf) for r in fib)
    # Each special point of index r is a root of the Wronskian of order r - 1.
    residual = w
    for base, fib in ((cover.A.poly(), over0), (cover.B.poly(), over1)):
        k = fib[0] - 1
        if k:
            q, r = sympy.div(residual, base**k)
            if not r.is_zero:
                raise InconsistencyError("Wronskian does not vanish to the expected order at a special fiber")
            residual = Poly(q, _U, _V, domain=QQ)
    if overinf[0] > 1:
        base = Poly(sympy.sqf_part(d_poly.as_expr()), _U, _V, domain=QQ)
        q, r = sympy.div(residual, base ** (overinf[0] - 1))
        if not r.is_zero:
            raise InconsistencyError("Wronskian does not vanish to the expected order over infinity")
        residual = Poly(q, _U, _V, domain=QQ)
    free = residual.total_degree()
    if special + free != 2 * d - 2 or sum(w_form.multiplicities()) != 2 * d - 2:
        raise InconsistencyError(f"Riemann-Hurwitz fails: {special} + {free} != {2 * d - 2}")
    return RamificationProfile(
        d,
        (
            BranchPoint(Fraction(1, cover.a), tuple(over0), "0"),
            BranchPoint(Fraction(1, cover.b), tuple(over1), "1"),
            BranchPoint(Fraction(2, d), tuple(overinf), "inf"),
        ),
    )


def random_property_g_cover(a: int, b: int, d: int, rng: random.Random, bound: int = 9, tries: int = 200) -> PropertyGCover:
    """Sample integer A, B until the cover validates (rejection rate is tiny)."""
    for _ in range(tries):
        try:
            A = BinaryForm.exact([rng.randint(-bound, bound) for _ in range(d // a + 1)])
            B = BinaryForm.exact([rng.randint(-bound, bound) for _ in range(d // b + 1)])
            return build_property_g_cover(a, b, A, B)
        except InvalidInput:
            continue
    raise InconsistencyError(f"no valid ({a},{b},{d}) cover in {tries} samples")
