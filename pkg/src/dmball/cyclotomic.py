"""Exact arithmetic in cyclotomic fields Q(zeta_d).

Elements are stored in the power basis 1, z, ..., z^(phi(d)-1) modulo the
d-th cyclotomic polynomial.  Internally a value is an integer numerator vector
with one positive common denominator, which keeps the hot loops in machine
integers instead of ``Fraction`` objects.

>>> z4 = root_of_unity(1, 4)
>>> z4 * z4 == -1
True
>>> print(1 / (1 - z4))
(1/2) + (1/2)*z ; d=4
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "CycloNumber",
    "CycloDivisionError",
    "root_of_unity",
    "field_arith",
    "conjugate",
    "is_algebraic_integer",
    "embed_complex",
    "cyclotomic_polynomial",
    "euler_phi",
    "as_cyclo",
]


class CycloDivisionError(ZeroDivisionError):
    """Division by the zero element of a cyclotomic field."""


@lru_cache(maxsize=None)
def cyclotomic_polynomial(d: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_d, lowest degree first."""
    if d < 1:
        raise ValueError(f"invalid conductor {d}")
    # x^d - 1 divided by Phi_e for every proper divisor e of d
    num = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            num = _poly_exact_div(num, list(cyclotomic_polynomial(e)))
    return tuple(num)


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        q, r = divmod(num[k + len(den) - 1], lead)
        assert r == 0
        out[k] = q
        for i, c in enumerate(den):
            num[k + i] -= q * c
    assert not any(num[: len(den) - 1])
    return out


def euler_phi(d: int) -> int:
    return len(cyclotomic_polynomial(d)) - 1


@lru_cache(maxsize=None)
def _power_table(d: int) -> tuple[tuple[int, ...], ...]:
    """Row j holds the power-basis coordinates of z^j for 0 <= j < d."""
    phi = euler_phi(d)
    poly = cyclotomic_polynomial(d)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(d):
        rows.append(tuple(cur))
        # multiply by z and reduce with z^phi = -sum poly[k] z^k
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for k in range(phi):
                cur[k] -= top * poly[k]
    return tuple(rows)


@lru_cache(maxsize=None)
def _product_reduction(d: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Sparse reductions of z^k for 0 <= k <= 2*phi-2, used by multiplication."""
    phi = euler_phi(d)
    table = _power_table(d)
    out = []
    for k in range(max(2 * phi - 1, 1)):
        row = table[k % d]
        out.append(tuple((i, c) for i, c in enumerate(row) if c))
    return tuple(out)


@lru_cache(maxsize=None)
def _conjugation_map(d: int) -> tuple[tuple[int, ...], ...]:
    table = _power_table(d)
    phi = euler_phi(d)
    return tuple(table[(-j) % d] for j in range(phi))


@lru_cache(maxsize=None)
def _promotion_map(d: int, big: int) -> tuple[tuple[int, ...], ...]:
    """Images of the power basis of Q(zeta_d) inside Q(zeta_big), big % d == 0."""
    step = big // d
    table = _power_table(big)
    return tuple(table[(j * step) % big] for j in range(euler_phi(d)))


class CycloNumber:
    """An element of Q(zeta_d) in the reduced power basis."""

    __slots__ = ("d", "_num", "_den")

    def __init__(self, d: int, coeffs: Iterable[int | Fraction | str] | None = None):
        if not isinstance(d, int) or d < 1:
            raise ValueError(f"invalid conductor {d!r}")
        phi = euler_phi(d)
        vals = [Fraction(c) for c in (coeffs if coeffs is not None else [])]
        if len(vals) > phi:
            raise ValueError(f"expected at most {phi} coefficients for d={d}, got {len(vals)}")
        vals += [Fraction(0)] * (phi - len(vals))
        den = 1
        for v in vals:
            den = den * v.denominator // math.gcd(den, v.denominator)
        self.d = d
        self._num = tuple(int(v * den) for v in vals)
        self._den = den
        self._normalize()

    @classmethod
    def _raw(cls, d: int, num: Sequence[int], den: int) -> "CycloNumber":
        obj = object.__new__(cls)
        obj.d = d
        obj._num = tuple(num)
        obj._den = den
        obj._normalize()
        return obj

    def _normalize(self) -> None:
        g = self._den
        for c in self._num:
            if c:
                g = math.gcd(g, c)
                if g == 1:
                    break
        if not any(self._num):
            self._num = (0,) * len(self._num)
            self._den = 1
            return
        if self._den < 0:
            g = -g
        if g != 1:
            self._num = tuple(c // g for c in self._num)
            self._den //= g

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rational(cls, q: int | Fraction, d: int = 1) -> "CycloNumber":
        q = Fraction(q)
        num = [0] * euler_phi(d)
        num[0] = q.numerator
        return cls._raw(d, num, q.denominator)

    @classmethod
    def zeta_power(cls, j: int, d: int) -> "CycloNumber":
        return cls._raw(d, _power_table(d)[j % d], 1)

    # -- accessors ----------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    # -- conductor handling -------------------------------------------------

    def promote(self, big: int) -> "CycloNumber":
        """Same element viewed inside Q(zeta_big); requires d | big."""
        if big == self.d:
            return self
        if big % self.d:
            raise ValueError(f"cannot promote conductor {self.d} to {big}")
        out = [0] * euler_phi(big)
        for c, img in zip(self._num, _promotion_map(self.d, big)):
            if c:
                for k, e in enumerate(img):
                    if e:
                        out[k] += c * e
        return CycloNumber._raw(big, out, self._den)

    def to_conductor(self, e: int) -> "CycloNumber":
        """Rewrite over conductor e; raises ValueError when not in Q(zeta_e)."""
        if e == self.d:
            return self
        if e % self.d == 0:
            return self.promote(e)
        big = self.d * e // math.gcd(self.d, e)
        target = self.promote(big)
        basis = [CycloNumber.zeta_power(j, e).promote(big) for j in range(euler_phi(e))]
        # solve sum x_j basis_j = target over Q
        rows = [[Fraction(b._num[k], b._den) for b in basis] + [Fraction(target._num[k], target._den)]
                for k in range(euler_phi(big))]
        sol = _rational_solve(rows, len(basis))
        if sol is None:
            raise ValueError(f"{self} does not lie in Q(zeta_{e})")
        return CycloNumber(e, sol)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "CycloNumber | None":
        if isinstance(other, CycloNumber):
            return other
        if isinstance(other, (int, Rational)):
            return CycloNumber.from_rational(Fraction(other), self.d)
        return None

    def _align(self, other: "CycloNumber") -> tuple["CycloNumber", "CycloNumber"]:
        if self.d == other.d:
            return self, other
        big = self.d * other.d // math.gcd(self.d, other.d)
        return self.promote(big), other.promote(big)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        den = a._den * b._den // math.gcd(a._den, b._den)
        fa, fb = den // a._den, den // b._den
        return CycloNumber._raw(a.d, [x * fa + y * fb for x, y in zip(a._num, b._num)], den)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber._raw(self.d, [-x for x in self._num], self._den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, CycloNumber):
            q = Fraction(other)
            return CycloNumber._raw(self.d, [x * q.numerator for x in self._num], self._den * q.denominator)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        if a.is_rational():
            a, b = b, a
        if b.is_rational():
            return CycloNumber._raw(a.d, [x * b._num[0] for x in a._num], a._den * b._den)
        phi = len(a._num)
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        conv[i + j] += x * y
        out = [0] * phi
        red = _product_reduction(a.d)
        for k, c in enumerate(conv):
            if c:
                for idx, e in red[k]:
                    out[idx] += c * e
        return CycloNumber._raw(a.d, out, a._den * b._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise CycloDivisionError("division by zero in Q(zeta_%d)" % self.d)
        if self.is_rational():
            return CycloNumber._raw(self.d, [self._den] + [0] * (len(self._num) - 1), self._num[0])
        bar = self.conjugate()
        norm = self * bar
        if norm.is_rational():
            return bar * (1 / norm.rational_value())
        # solve (multiplication-by-self matrix) * y = e_0 over Q
        phi = len(self._num)
        cols = []
        for j in range(phi):
            prod = self * CycloNumber.zeta_power(j, self.d)
            cols.append(prod.coeffs)
        rows = [[cols[j][k] for j in range(phi)] + [Fraction(int(k == 0))] for k in range(phi)]
        sol = _rational_solve(rows, phi)
        assert sol is not None
        return CycloNumber(self.d, sol)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloNumber.from_rational(1, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "CycloNumber":
        out = [0] * len(self._num)
        for c, img in zip(self._num, _conjugation_map(self.d)):
            if c:
                for k, e in enumerate(img):
                    if e:
                        out[k] += c * e
        return CycloNumber._raw(self.d, out, self._den)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        return a._den == b._den and a._num == b._num

    __hash__ = None  # equality crosses conductors, so no cheap canonical hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- numerics and rendering ---------------------------------------------

    def __complex__(self) -> complex:
        return embed_complex(self)

    def __repr__(self) -> str:
        return f"CycloNumber({self.d}, [{', '.join(repr(str(c)) for c in self.coeffs)}])"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if k == 0:
                terms.append(f"({c})")
            else:
                terms.append(f"({c})*{mono}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} ; d={self.d}"

    def to_json(self) -> dict:
        return {"d": self.d, "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "CycloNumber":
        return cls(int(obj["d"]), [Fraction(c) for c in obj["coeffs"]])


def _rational_solve(rows: list[list[Fraction]], nvars: int) -> list[Fraction] | None:
    """Solve an augmented rational system; None if inconsistent.  Free variables are set to 0."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(nvars):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][nvars] != 0:
            return None
    sol = [Fraction(0)] * nvars
    for i, c in enumerate(pivots):
        sol[c] = rows[i][nvars]
    return sol


def as_cyclo(x, d: int = 1) -> CycloNumber:
    if isinstance(x, CycloNumber):
        return x
    return CycloNumber.from_rational(Fraction(x), d)


def root_of_unity(p: int, q: int) -> CycloNumber:
    """zeta_q^p, i.e. exp(2 pi i p / q)."""
    if not isinstance(q, int) or q < 1:
        raise ValueError(f"invalid conductor {q!r}")
    return CycloNumber.zeta_power(p % q, q)


def field_arith(x: CycloNumber, y: CycloNumber, op: str) -> CycloNumber:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown field operation {op!r}")


def conjugate(z: CycloNumber) -> CycloNumber:
    return z.conjugate()


def is_algebraic_integer(z: CycloNumber) -> bool:
    # Z[zeta_d] is the full ring of integers, so integrality is coefficientwise
    return z.denominator == 1


def embed_complex(z: CycloNumber) -> complex:
    """Principal embedding zeta_d -> exp(2 pi i / d)."""
    total = 0j
    for k, c in enumerate(z.numerators):
        if c:
            total += c * cmath.exp(2j * math.pi * k / z.d)
    return total / z.denominator
