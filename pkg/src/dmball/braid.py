"""Braid monodromy on IH_1: the full-twist reflections R_{i,i+1} and friends.

Matrices act on column coordinate vectors in the basis I_{j,j+1}; a word is
evaluated left to right, so its first letter acts first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from . import linalg
from .cyclotomic import CycloNumber, as_cyclo
from .errors import InconsistencyError, InvalidInput
from .intersection import alphas, intersection_matrix, self_intersection
from .mulist import MuList

__all__ = [
    "ReflectionMatrix",
    "braid_reflection",
    "reflection_order",
    "reflection_oracle",
    "evaluate_word",
    "boundary_cycles",
    "wrap_reflection",
    "half_twist",
    "reflection_about",
    "preserves_form",
    "braid_check",
]

Order = Union[int, str]
INFINITE = "infinite"


@dataclass
class ReflectionMatrix:
    matrix: linalg.Matrix
    index: int
    order: Order
    d: int
    metadata: dict = field(default_factory=dict)


def _setup(m: MuList):
    form = intersection_matrix(m)
    ws = [m.weights[j - 1] for j in form.support]
    return ws, alphas(ws), form.entries


def _check_index(i: int, n: int) -> None:
    if not 1 <= i <= n:
        raise InvalidInput(f"generator index {i} outside 1..{n}")


def preserves_form(r: linalg.Matrix, form: linalg.Matrix) -> bool:
    """R^T Int conj(R) == Int, the invariance for a form linear in its first slot."""
    return linalg.mat_eq(linalg.matmul(linalg.matmul(linalg.transpose(r), form), linalg.conj(r)), form)


def _raw_reflection(al: Sequence[CycloNumber], n: int, i: int) -> linalg.Matrix:
    d = al[0].d
    r = linalg.identity(n, d)
    a, b = al[i - 1], al[i]
    r[i - 1][i - 1] = a * b
    if i >= 2:
        r[i - 1][i - 2] = 1 - b
    if i <= n - 1:
        r[i - 1][i] = b * (1 - a)
    return r


def _order_of(r: linalg.Matrix, pair_sum: Fraction) -> Order:
    n = len(r)
    one = linalg.identity(n)
    if linalg.mat_eq(r, one):
        return 1
    if pair_sum.denominator == 1:
        # unipotent and nontrivial: infinite order
        diff = linalg.add(r, linalg.neg(one))
        if not all(x.is_zero() for row in linalg.matmul(diff, diff) for x in row):
            raise InconsistencyError("integral pair sum but R - I is not nilpotent")
        return INFINITE
    k = pair_sum.denominator
    power = linalg.identity(n)
    for e in range(1, k + 1):
        power = linalg.matmul(power, r)
        if linalg.mat_eq(power, one) != (e == k):
            raise InconsistencyError(f"R^{e} identity test contradicts order {k}")
    return k


def braid_reflection(m: MuList, i: int) -> ReflectionMatrix:
    ws, al, form = _setup(m)
    n = len(form)
    _check_index(i, n)
    r = _raw_reflection(al, n, i)
    if not preserves_form(r, form):
        raise InconsistencyError(f"R_{i},{i + 1} does not preserve Int")
    order = _order_of(r, ws[i - 1] + ws[i])
    return ReflectionMatrix(r, i, order, al[0].d)


def reflection_order(m: MuList, i: int) -> Order:
    return braid_reflection(m, i).order


def reflection_about(form: linalg.Matrix, v: Sequence[CycloNumber], eigenvalue: CycloNumber) -> linalg.Matrix:
    """x -> x + (lambda - 1) <x,v>/<v,v> v with <x,y> = x^T form conj(y)."""
    n = len(form)
    vbar = [x.conjugate() for x in v]
    w = linalg.matvec(form, vbar)  # <x, v> = sum_b x_b w_b
    vv = sum((v[a] * w[a] for a in range(n)), as_cyclo(0))
    if vv.is_zero():
        raise InvalidInput("isotropic reflection vector")
    coef = (eigenvalue - 1) / vv
    out = linalg.identity(n)
    for a in range(n):
        if v[a].is_zero():
            continue
        for b in range(n):
            if not w[b].is_zero():
                out[a][b] = out[a][b] + coef * v[a] * w[b]
    return out


def reflection_oracle(m: MuList, i: int) -> ReflectionMatrix:
    """Rebuild R_{i,i+1} from its eigenstructure.

    In a basis (v, v^perp) the reflection is diag(lambda, 1, ..., 1); the result
    is conjugated back to the standard basis and compared with the explicit
    matrix.
    """
    ws, al, form = _setup(m)
    n = len(form)
    _check_index(i, n)
    if (ws[i - 1] + ws[i]).denominator == 1:
        raise InvalidInput(f"pair ({i},{i + 1}) is isotropic; the reflection formula divides by <v,v>")
    lam = al[i - 1] * al[i]
    v = [as_cyclo(int(j == i - 1)) for j in range(n)]
    functional = [[form[b][i - 1] for b in range(n)]]  # x -> <x, v>
    perp = linalg.kernel(functional)
    basis = linalg.transpose([v] + perp)
    diag = linalg.identity(n, lam.d)
    diag[0][0] = lam
    r = linalg.matmul(linalg.matmul(basis, diag), linalg.inverse(basis))
    explicit = _raw_reflection(al, n, i)
    if not linalg.mat_eq(r, explicit):
        raise InconsistencyError(f"oracle reflection differs from R_{i},{i + 1}")
    formula = reflection_about(form, v, lam)
    if not linalg.mat_eq(formula, explicit):
        raise InconsistencyError("reflection formula differs from the explicit matrix")
    order = _order_of(r, ws[i - 1] + ws[i])
    return ReflectionMatrix(r, i, order, lam.d, {"good_basis": basis, "mirror_dim": len(perp)})


def evaluate_word(m: MuList, word: Sequence[tuple[int, int]]) -> linalg.Matrix:
    """Product of generator powers; the first letter acts first."""
    ws, al, form = _setup(m)
    n = len(form)
    gens: dict[int, linalg.Matrix] = {}
    inverses: dict[int, linalg.Matrix] = {}
    result = linalg.identity(n)
    for idx, exp in word:
        _check_index(idx, n)
        if idx not in gens:
            gens[idx] = _raw_reflection(al, n, idx)
        g = gens[idx]
        if exp < 0:
            if idx not in inverses:
                inverses[idx] = linalg.inverse(g)
            g, exp = inverses[idx], -exp
        for _ in range(exp):
            result = linalg.matmul(g, result)
    if not preserves_form(result, form):
        raise InconsistencyError("word does not preserve Int")
    return result


def boundary_cycles(m: MuList) -> tuple[list[CycloNumber], list[CycloNumber]]:
    """Coordinates of I_{k-1,k} and I_{k,1} in the basis I_{j,j+1}, j <= k-2.

    Uses the two relations sum_j I_j = 0 and sum_j c_j I_j = 0 with c_1 = 1 and
    c_j = conj(alpha_2 ... alpha_j).  Needs an integral weight sum.
    """
    ws, al, form = _setup(m)
    if sum(ws, Fraction(0)).denominator != 1:
        raise InvalidInput("boundary relations need an integral weight sum")
    k = len(ws)
    n = k - 2
    c = [as_cyclo(1)]
    for j in range(1, k):
        c.append(c[-1] * al[j].conjugate())
    s_vec = [as_cyclo(-1) for _ in range(n)]
    t_vec = [-c[j] for j in range(n)]
    denom = c[k - 1] - c[k - 2]
    last = [(t - c[k - 2] * s) / denom for s, t in zip(s_vec, t_vec)]
    prev = [s - x for s, x in zip(s_vec, last)]
    _check_boundary(form, al, prev, last)
    return prev, last


def _check_boundary(form, al, prev, last) -> None:
    k = len(al)
    n = k - 2

    def pair(x, y):
        return sum(
            (x[a] * form[a][b] * y[b].conjugate() for a in range(n) for b in range(n)
             if not x[a].is_zero() and not y[b].is_zero()),
            as_cyclo(0),
        )

    e = [[as_cyclo(int(a == j)) for a in range(n)] for j in range(n)]
    checks = [
        (pair(prev, prev), self_intersection(al[k - 2], al[k - 1])),
        (pair(last, last), self_intersection(al[k - 1], al[0])),
        (pair(prev, last), -1 / (1 - al[k - 1])),
        (pair(e[n - 1], prev), -1 / (1 - al[k - 2])),
        (pair(last, e[0]), -1 / (1 - al[0])),
    ]
    for j in range(n - 1):
        checks.append((pair(e[j], prev), as_cyclo(0)))
    for j in range(1, n):
        checks.append((pair(e[j], last), as_cyclo(0)))
    for got, want in checks:
        if got != want:
            raise InconsistencyError("boundary cycle coordinates fail a local intersection check")


def wrap_reflection(m: MuList) -> ReflectionMatrix:
    """The wrap-around generator R_{k,1}, reflecting in the cycle I_{k,1}."""
    ws, al, form = _setup(m)
    _, last = boundary_cycles(m)
    k = len(ws)
    lam = al[k - 1] * al[0]
    pair_sum = ws[k - 1] + ws[0]
    if pair_sum.denominator == 1:
        raise InvalidInput("the pair (k,1) is isotropic; no reflection formula")
    r = reflection_about(form, last, lam)
    if not preserves_form(r, form):
        raise InconsistencyError("wrap generator does not preserve Int")
    order = _order_of(r, pair_sum)
    meta = {
        "construction": "reflection in I_{k,1} with eigenvalue alpha_k*alpha_1",
        "ambiguity": "agrees with the geometric generator up to the central element of the mapping class group",
    }
    return ReflectionMatrix(r, k, order, lam.d, meta)


def half_twist(m: MuList, i: int) -> ReflectionMatrix:
    """Half-twist exchanging two equal-weight points: eigenvalue -alpha_i on I_{i,i+1}."""
    ws, al, form = _setup(m)
    n = len(form)
    _check_index(i, n)
    if ws[i - 1] != ws[i]:
        raise InvalidInput(f"half-twist needs equal weights at {i} and {i + 1}")
    lam = -al[i - 1]
    v = [as_cyclo(int(j == i - 1)) for j in range(n)]
    r = reflection_about(form, v, lam)
    if not preserves_form(r, form):
        raise InconsistencyError("half-twist does not preserve Int")
    sq = linalg.matmul(r, r)
    if not linalg.mat_eq(sq, _raw_reflection(al, n, i)):
        raise InconsistencyError("half-twist squared differs from the full twist")
    return ReflectionMatrix(r, i, _order_finite(lam), lam.d)


def _order_finite(lam: CycloNumber) -> int:
    x = lam
    for e in range(1, 4 * lam.d + 1):
        if x == 1:
            return e
        x = x * lam
    raise InconsistencyError("eigenvalue is not a root of unity")


@dataclass
class BraidCheck:
    form_preserved: bool
    orders_ok: bool
    fixed_codim_one: bool
    braid_failures: list[int]
    commute_failures: list[tuple[int, int]]
    half_twist_braid_failures: list[int]

    @property
    def invariants_ok(self) -> bool:
        return self.form_preserved and self.orders_ok and self.fixed_codim_one and not self.commute_failures

    @property
    def all_ok(self) -> bool:
        return self.invariants_ok and not self.braid_failures


def braid_check(m: MuList) -> BraidCheck:
    ws, al, form = _setup(m)
    n = len(form)
    gens = [_raw_reflection(al, n, i) for i in range(1, n + 1)]
    form_ok = all(preserves_form(g, form) for g in gens)
    orders_ok = True
    fixed_ok = True
    for i, g in enumerate(gens, start=1):
        try:
            _order_of(g, ws[i - 1] + ws[i])
        except InconsistencyError:
            orders_ok = False
        if (ws[i - 1] + ws[i]).denominator != 1:
            fixed = linalg.kernel(linalg.add(g, linalg.neg(linalg.identity(n))))
            fixed_ok &= len(fixed) == n - 1
            # the mirror is the orthogonal complement of I_{i,i+1}
            fixed_ok &= all(sum((x[b] * form[b][i - 1] for b in range(n)), as_cyclo(0)).is_zero() for x in fixed)
    braid_fail = []
    for i in range(n - 1):
        a, b = gens[i], gens[i + 1]
        if not linalg.mat_eq(linalg.matmul(linalg.matmul(a, b), a), linalg.matmul(linalg.matmul(b, a), b)):
            braid_fail.append(i + 1)
    comm_fail = []
    for i in range(n):
        for j in range(i + 2, n):
            if not linalg.mat_eq(linalg.matmul(gens[i], gens[j]), linalg.matmul(gens[j], gens[i])):
                comm_fail.append((i + 1, j + 1))
    half_fail = []
    for i in range(1, n):
        if ws[i - 1] == ws[i] == ws[i + 1] and (2 * ws[i]).denominator != 1:
            a = half_twist(m, i).matrix
            b = half_twist(m, i + 1).matrix
            if not linalg.mat_eq(linalg.matmul(linalg.matmul(a, b), a), linalg.matmul(linalg.matmul(b, a), b)):
                half_fail.append(i)
    return BraidCheck(form_ok, orders_ok, fixed_ok, braid_fail, comm_fail, half_fail)
