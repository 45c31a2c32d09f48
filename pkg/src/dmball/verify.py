"""Cross-module invariant suite behind ``dmball verify``.

Invariants are statements the implementation must satisfy; any failure is an
internal inconsistency.  Deviations are checked claims known to fail (they are
reported, and only count against the run with ``strict``).
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import braid, classifier, cover, hurwitz, intersection, lattice, linalg, pseudodisc
from .errors import DMError, InconsistencyError
from .mulist import MuList, ih1_dimension, parse_mu
from .sampling import random_mu

__all__ = ["CheckResult", "VerifyReport", "run_verify", "SECTIONS"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float
    deviation: bool = False

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "kind": "deviation" if self.deviation else "invariant"}


@dataclass
class VerifyReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def invariants_ok(self) -> bool:
        return all(r.passed for r in self.results if not r.deviation)

    @property
    def deviations(self) -> list[CheckResult]:
        return [r for r in self.results if r.deviation and not r.passed]


def _sizes(max_den: int) -> dict:
    small = max_den < 12
    return {"lists": 40 if small else 80, "covers": 5 if small else 10, "seeds": 5 if small else 10,
            "grams": 20 if small else 40}


def _forms(max_den: int, seed: int) -> str:
    rng = random.Random(seed)
    n = _sizes(max_den)["lists"]
    for _ in range(n):
        m = random_mu(rng, max_den=max_den)
        f = intersection.intersection_matrix(m)
        if not f.is_valid() or not f.is_tridiagonal():
            raise InconsistencyError(f"Int for {m} is not skew-Hermitian tridiagonal")
        intersection.signature_report(m)
    return f"{n} random lists: Int skew-Hermitian, three signature methods agree"


def _hodge(max_den: int, seed: int) -> str:
    rng = random.Random(seed + 1)
    n = _sizes(max_den)["lists"]
    from .mulist import hodge_dims
    for _ in range(n):
        m = random_mu(rng, max_den=max_den, integral=True)
        if tuple(intersection.signature(m)) != hodge_dims(m):
            raise InconsistencyError(f"signature of {m} differs from the Hodge numbers")
    return f"{n} integral lists: signature equals (sum mu - 1, sum(1 - mu) - 1)"


def _reflections(max_den: int, seed: int) -> str:
    rng = random.Random(seed + 2)
    n = _sizes(max_den)["lists"] // 2
    for _ in range(n):
        m = random_mu(rng, n_max=8, max_den=max_den)
        chk = braid.braid_check(m)
        if not chk.invariants_ok:
            raise InconsistencyError(f"reflection invariants fail on {m}: {chk}")
    for text, k in (("1/4x8", 2), ("1/6x12", 3)):
        m = parse_mu(text)
        for i in range(1, ih1_dimension(m) + 1):
            if braid.reflection_order(m, i) != k:
                raise InconsistencyError(f"order of R_{i} on {text} is not {k}")
        braid.reflection_oracle(m, 1)
        braid.wrap_reflection(m)
    return f"{n} random lists plus both ancestral lists: form preserved, orders, mirrors, far commutation"


def _braid_relations(max_den: int, seed: int) -> str:
    rng = random.Random(seed + 3)
    n = _sizes(max_den)["lists"] // 2
    bad = 0
    for _ in range(n):
        m = random_mu(rng, n_max=8, max_den=max_den)
        bad += bool(braid.braid_check(m).braid_failures)
    if bad:
        raise InconsistencyError(f"R_i R_(i+1) R_i = R_(i+1) R_i R_(i+1) fails on {bad} of {n} lists")
    return f"braid relations hold on {n} lists"


def _half_twists(max_den: int, seed: int) -> str:
    for text in ("1/4x8", "1/6x12", "1/3x6", "1/5x10"):
        if braid.braid_check(parse_mu(text)).half_twist_braid_failures:
            raise InconsistencyError(f"half-twists violate the braid relation on {text}")
    return "half-twists satisfy the braid relation on equal-weight lists"


def _classifier(max_den: int, seed: int) -> str:
    bound = min(max_den, 24)
    total = 0
    for n in (5, 6, 7):
        ints = classifier.enumerate_mu(n, bound, "INT")
        if ints != classifier.enumerate_mu(n, bound, "INT"):
            raise InconsistencyError("enumeration is not deterministic")
        for c in ints:
            if not c.sigma_int_pass:
                raise InconsistencyError(f"{c.mu} passes INT but not Sigma-INT")
            total += 1
    rng = random.Random(seed + 4)
    for _ in range(_sizes(max_den)["lists"]):
        m = random_mu(rng, n_min=5, max_den=max_den)
        i, j = rng.sample(range(1, m.n + 1), 2)
        if (m.weights[i - 1] + m.weights[j - 1]).denominator != 1:
            if ih1_dimension(classifier.collide(m, i, j)) != ih1_dimension(m) - 1:
                raise InconsistencyError("stable collision does not drop the dimension by one")
    for root in (classifier.GAUSSIAN_ANCESTOR, classifier.EISENSTEIN_ANCESTOR):
        poset = classifier.descendants(root, 1)
        for _, child, (i, j) in poset.edges:
            if braid.reflection_order(MuList(poset.root), i) == braid.INFINITE:
                raise InconsistencyError(f"collided pair ({i},{j}) has infinite order")
    return f"{total} INT solutions pass Sigma-INT; collisions and depth-1 descendants consistent"


def _int_census(max_den: int, seed: int) -> str:
    counts = {n: len(classifier.enumerate_mu(n, 24, "INT")) for n in range(7, 11)}
    claimed = {7: 1, 8: 0, 9: 0, 10: 0}
    if counts != claimed:
        raise InconsistencyError(f"INT census {counts} differs from the claimed {claimed}")
    return f"INT census {counts}"


def _property_g(max_den: int, seed: int) -> str:
    triples = hurwitz.classify_property_g()
    if triples != pseudodisc.hypersurface_solutions():
        raise InconsistencyError("property-G triples differ from the hypersurface solutions")
    rng = random.Random(seed + 5)
    per = _sizes(max_den)["covers"]
    for a, b, d in triples:
        prof = hurwitz.property_g_profile(a, b, d)
        mu = hurwitz.pullback_mu(prof)
        k = len(mu.support_weights())
        if hurwitz.spi_codim_in_dm(prof).value != 1:
            raise InconsistencyError(f"({a},{b},{d}) does not have codimension 1")
        if tuple(intersection.signature(mu)) != (1, k - 3):
            raise InconsistencyError(f"pull-back of ({a},{b},{d}) is not hyperbolic")
        if Fraction(d) * (1 - Fraction(1, a) - Fraction(1, b)) + 2 - 3 != 1:
            raise InconsistencyError("codimension identity fails")
        for _ in range(per):
            c = hurwitz.random_property_g_cover(a, b, d, rng)
            got = hurwitz.verify_ramification(c)
            if [bp.fiber for bp in got.branch_points] != [bp.fiber for bp in prof.branch_points]:
                raise InconsistencyError(f"random ({a},{b},{d}) cover has fibers {got}")
    return f"5 triples, {per} random covers each: codimension 1, signature (1, |S|-3), fibers verified"


def _pullback_cases(seed: int):
    rng = random.Random(seed + 6)
    ident = (0,)
    yield "identity", cover.CoverMonodromy(1, (ident,) * 8), [Fraction(1, 4)] * 8, Fraction(1)
    yield "z^2", cover.CoverMonodromy.from_three(2, [(1, 2)], [], [(1, 2)]), [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)], Fraction(2)
    cm = cover.sample_property_g_monodromy(3, 2, 12, rng)
    nu = [Fraction(1, 3), Fraction(1, 2)] + [Fraction(1)] * (cm.m - 3) + [Fraction(1, 6)]
    yield "(3,2,12)", cm, nu, Fraction(12)


def _pullback(max_den: int, seed: int) -> str:
    parts = []
    for name, cm, nu, deg in _pullback_cases(seed):
        rep = cover.pairing_constant(cm, nu)
        if not rep.constant_is_uniform or rep.constant != deg or rep.image_rank < 1:
            raise InconsistencyError(f"pairing constant for the {name} cover is not uniform: {rep}")
        parts.append(f"{name}: c={rep.constant}")
    return "; ".join(parts)


def _pullback_claim(max_den: int, seed: int) -> str:
    off = []
    for name, cm, nu, _ in _pullback_cases(seed):
        rep = cover.pairing_constant(cm, nu)
        if not rep.matches_claim:
            off.append(f"{name}: c={rep.constant}")
    if off:
        raise InconsistencyError("pairing constant differs from the claimed 1 (" + "; ".join(off) + ")")
    return "pairing constant equals 1 on all covers"


def _pseudodisc(max_den: int, seed: int) -> str:
    for a in range(2, 13):
        for b in range(2, 13):
            pseudodisc.orbit_count(a, b)
    n = _sizes(max_den)["seeds"]
    for t in ((6, 2, 1, 3), (4, 2, 2, 4), (3, 2, 4, 6)):
        for s in range(seed, seed + n):
            rep = pseudodisc.fiber_witness(*t, seed=s)
            if not rep.ok:
                raise InconsistencyError(f"witness search found an extra preimage for {t}: {rep}")
    A = hurwitz.BinaryForm.exact([1, -2, 3, 0, 5])
    B = hurwitz.BinaryForm.exact([2, 0, -1, 1, 0, 3, 1])
    if not pseudodisc.check_equivariance(A, B, 3, 2):
        raise InconsistencyError("Delta is not weighted-equivariant")
    return f"orbit counts equal gcd for 2 <= a, b <= 12; witness search clean over {n} seeds per triple"


def _lattices(max_den: int, seed: int) -> str:
    rng = random.Random(seed + 7)
    n = _sizes(max_den)["grams"]
    for ring in ("gaussian", "eisenstein"):
        for _ in range(n):
            g = lattice.random_hermitian_gram(ring, rng.randint(1, 4), rng)
            L = lattice.RLattice(ring, g)
            inv = lattice.invariant_factors(ring, g)
            prod = inv[0]
            for x in inv[1:]:
                prod = prod * x
            if not lattice.is_unit(prod / lattice.discriminant(L)):
                raise InconsistencyError("invariant factors do not multiply to the discriminant")
            z = [lattice.ring_element(ring, rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(L.rank)]
            if all(x.is_zero() for x in z) or L.rank < 2:
                continue
            try:
                comp, basis = lattice.orthogonal_complement(L, z)
            except DMError:
                continue
            for v in basis:
                if not L.psi(v, z).is_zero():
                    raise InconsistencyError("complement is not orthogonal")
        unimod = lattice.RLattice(ring, linalg.identity(3, lattice.RING_CONDUCTOR[ring]))
        if lattice.dual_quotient(unimod):
            raise InconsistencyError("unimodular lattice has a nontrivial dual quotient")
        want = 4 if ring == "gaussian" else 6
        if lattice.extension_ambiguity(unimod, [1, 0, 0]).order != want:
            raise InconsistencyError("unit-length ambiguity is wrong")
    return f"{n} random Gram matrices per ring: invariant factors, complements, ambiguity"


SECTIONS: list[tuple[str, Callable[[int, int], str], bool]] = [
    ("intersection form and signature", _forms, False),
    ("Hodge formula", _hodge, False),
    ("reflection structure", _reflections, False),
    ("half-twist braid relations", _half_twists, False),
    ("classifier", _classifier, False),
    ("property-G covers", _property_g, False),
    ("pull-back pairing constancy", _pullback, False),
    ("pseudo-discriminant", _pseudodisc, False),
    ("lattices", _lattices, False),
    ("claim: full-twist braid relations", _braid_relations, True),
    ("claim: INT census n=7..10", _int_census, True),
    ("claim: pull-back constant equals 1", _pullback_claim, True),
]


def _run_one(idx: int, max_den: int, seed: int) -> CheckResult:
    name, fn, deviation = SECTIONS[idx]
    t0 = time.perf_counter()
    try:
        detail = fn(max_den, seed)
        ok = True
    except DMError as exc:
        detail, ok = (str(exc) if deviation else f"{type(exc).__name__}: {exc}"), False
    except Exception as exc:  # noqa: BLE001
        detail, ok = f"unexpected {type(exc).__name__}: {exc}", False
    return CheckResult(name, ok, detail, time.perf_counter() - t0, deviation)


def run_verify(max_den: int = 12, seed: int = 0, threads: int | None = None) -> VerifyReport:
    if threads is None:
        threads = int(os.environ.get("DMBALL_THREADS", "1") or 1)
    idx = range(len(SECTIONS))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_one, idx, [max_den] * len(SECTIONS), [seed] * len(SECTIONS)))
    else:
        results = [_run_one(i, max_den, seed) for i in idx]
    return VerifyReport(results)
