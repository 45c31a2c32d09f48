"""The ten acceptance criteria, one test (or pair of tests) each."""

import json
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import oracle_signature, record
from dmball import braid, classifier, cover, hurwitz, lattice, linalg, pseudodisc
from dmball.cli import main
from dmball.cyclotomic import embed_complex, root_of_unity
from dmball.intersection import intersection_matrix, signature, signature_report
from dmball.mulist import parse_mu
from dmball.sampling import random_mu

F = Fraction
i4 = root_of_unity(1, 4)


def test_criterion_01_four_point_form(capsys):
    t0 = time.perf_counter()
    assert main(["psi", "--mu", "1/2x4", "--skew", "--json"]) == 0
    skew = json.loads(capsys.readouterr().out)
    assert main(["psi", "--mu", "1/2x4", "--json"]) == 0
    herm = json.loads(capsys.readouterr().out)
    elapsed = time.perf_counter() - t0
    coeffs = [[e["coeffs"] for e in row] for row in skew["entries"]]
    ok = coeffs == [[["0/1"], ["-1/2"]], [["1/2"], ["0/1"]]]
    # Hermitian normalization is 2i * Int: [[0, -i], [i, 0]], twice [[0, -i/2], [i/2, 0]].
    ok &= intersection_matrix(parse_mu("1/2x4")).entries == [[0, F(-1, 2)], [F(1, 2), 0]]
    ok &= herm["kind"] == "hermitian" and herm["d"] == 4
    ok &= [[e["coeffs"] for e in row] for row in herm["entries"]] == [[["0/1", "0/1"], ["0/1", "-1/1"]], [["0/1", "1/1"], ["0/1", "0/1"]]]
    ok &= elapsed < 1.0
    record(1, ok, f"skew form exact, Hermitian = 2 x [[0,-i/2],[i/2,0]], {elapsed:.2f}s")
    assert ok


def test_criterion_02_signature_formula():
    rng = random.Random(2)
    t0 = time.perf_counter()
    lists = [random_mu(rng, n_max=9, max_den=12, integral=True) for _ in range(250)]
    lists += [random_mu(rng, n_max=9, max_den=12) for _ in range(250)]
    disagreements = 0
    formula_used = 0
    for m in lists:
        rep = signature_report(m)
        ws = [m.weights[j - 1] for j in intersection_matrix(m).support]
        ok = tuple(rep.constructive) == tuple(rep.eigen) == oracle_signature(ws)
        if m.total.denominator == 1:
            formula_used += 1
            want = (int(m.total - 1), int(sum(1 - w for w in m.weights) - 1))
            ok &= tuple(rep.formula) == tuple(rep.constructive) == want
        disagreements += not ok
    elapsed = time.perf_counter() - t0
    ok = disagreements == 0 and formula_used >= 250 and elapsed < 30
    record(2, ok, f"500 lists ({formula_used} with integral sum), {disagreements} disagreements, {elapsed:.1f}s")
    assert ok


def test_criterion_03_reflection_structure():
    t0 = time.perf_counter()
    ok = True
    for text, k in (("1/4x8", 2), ("1/6x12", 3)):
        m = parse_mu(text)
        form = intersection_matrix(m).entries
        n = len(form)
        for i in range(1, n + 1):
            r = braid.braid_reflection(m, i).matrix
            ok &= linalg.is_identity(linalg.mat_pow(r, k)) and not linalg.is_identity(r)
            ok &= braid.preserves_form(r, form)
            ok &= linalg.rank(linalg.add(r, linalg.neg(linalg.identity(n, r[0][0].d)))) == 1
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5
    record(3, ok, f"orders 2 and 3, Int preserved, mirrors of codimension 1, {elapsed:.2f}s")
    assert ok


def _random_braid_checks():
    rng = random.Random(4)
    return [braid.braid_check(random_mu(rng, n_max=9, max_den=12)) for _ in range(100)]


@pytest.mark.xfail(strict=True, reason="R_i R_(i+1) R_i = R_(i+1) R_i R_(i+1) fails for the full-twist generators on most lists")
def test_criterion_04_braid_relations():
    t0 = time.perf_counter()
    checks = _random_braid_checks()
    braid_bad = sum(bool(c.braid_failures) for c in checks)
    commute_bad = sum(bool(c.commute_failures) for c in checks)
    elapsed = time.perf_counter() - t0
    ok = braid_bad == 0 and commute_bad == 0 and elapsed < 30
    record(4, ok, f"braid relation fails on {braid_bad}/100 lists, far commutation fails on {commute_bad}/100")
    assert ok


def test_criterion_04_supporting_far_commutation_and_half_twists():
    checks = _random_braid_checks()
    assert all(c.invariants_ok and not c.commute_failures for c in checks)
    for text in ("1/4x8", "1/6x12", "1/3x6"):
        assert braid.braid_check(parse_mu(text)).half_twist_braid_failures == []


def _census(capsys, n):
    assert main(["enumerate", "--n", str(n), "--max-den", "24", "--condition", "int", "--json"]) == 0
    return json.loads(capsys.readouterr().out)


def test_criterion_05_census_n7(capsys):
    t0 = time.perf_counter()
    sols = _census(capsys, 7)
    assert len(sols) == 1 and sols[0]["mu"] == "1/4x6,1/2"
    assert time.perf_counter() - t0 < 60


@pytest.mark.xfail(strict=True, reason="n=8 has the solution (1/4)^8, so the n=8..10 census is not empty")
def test_criterion_05_census_n8_to_10(capsys):
    t0 = time.perf_counter()
    counts = {n: len(_census(capsys, n)) for n in (7, 8, 9, 10)}
    elapsed = time.perf_counter() - t0
    ok = counts == {7: 1, 8: 0, 9: 0, 10: 0} and elapsed < 60
    record(5, ok, f"counts {counts}; the n=8 solution is 1/4x8")
    assert ok


def test_criterion_06_sigma_int_chain():
    t0 = time.perf_counter()
    E, G = parse_mu("1/6x12"), parse_mu("1/4x8")
    ok = classifier.check_sigma_int(E).sigma_int_pass and classifier.check_sigma_int(G).sigma_int_pass
    m = E
    for k in range(6):
        m = classifier.collide(m, k + 1, k + 2)
        if k == 4:
            five = m
    ok &= sorted(m.weights) == [F(1, 3)] * 6
    ok &= sorted(five.weights) == [F(1, 6)] * 2 + [F(1, 3)] * 5
    ok &= classifier.check_sigma_int(five).sigma_int_pass
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1
    record(6, ok, f"(1/3x6) after six collisions, (1/3x5,1/6x2) after five passes Sigma-INT, {elapsed:.2f}s")
    assert ok


def test_criterion_07_property_g(capsys):
    t0 = time.perf_counter()
    assert main(["classify-g", "--json"]) == 0
    triples = [tuple(t) for t in json.loads(capsys.readouterr().out)]
    ok = set(triples) == {(3, 2, 12), (4, 2, 8), (6, 2, 6), (3, 3, 6), (4, 4, 4)} and len(triples) == 5
    for a, b, d in triples:
        prof = hurwitz.property_g_profile(a, b, d)
        mu = hurwitz.pullback_mu(prof)
        ok &= hurwitz.spi_codim_in_dm(prof).value == 1
        ok &= mu.support_weights() == (F(2, d),) * d
        ok &= tuple(signature(mu)) == (1, d - 3)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1
    record(7, ok, f"five triples, codimension 1, equal weights 2/d, signature (1, d-3), {elapsed:.2f}s")
    assert ok


def test_criterion_08_pseudo_discriminant():
    t0 = time.perf_counter()
    import math

    ok = all(pseudodisc.orbit_count(a, b) == math.gcd(a, b) for a in range(2, 13) for b in range(2, 13))
    for a in range(2, 7):
        for b in range(2, 7):
            for d1 in range(1, 6):
                for d2 in range(1, 8):
                    cert = pseudodisc.generic_degree(a, b, d1, d2).certificate
                    ok &= (cert == "proved") == (b == 2 and d2 > d1 + 1)
    extra = 0
    for t in ((6, 2, 1, 3), (4, 2, 2, 4), (3, 2, 4, 6)):
        for seed in range(50):
            rep = pseudodisc.fiber_witness(*t, seed=seed)
            ok &= rep.ok
            extra += rep.extra_found
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    record(8, ok, f"orbit counts = gcd on 2..12, certificates exact, {extra} extra preimages over 150 witness runs, {elapsed:.1f}s")
    assert ok


def test_criterion_09_pullback_pairing():
    t0 = time.perf_counter()
    ident = cover.CoverMonodromy(1, ((0,),) * 6)
    z2 = cover.CoverMonodromy.from_three(2, [(1, 2)], [], [(1, 2)])
    reps = {
        "identity": cover.pairing_constant(ident, [F(1, 3)] * 6),
        "degree 2": cover.pairing_constant(z2, [F(1, 4), F(1, 2), F(1, 4)]),
    }
    elapsed = time.perf_counter() - t0
    ok = all(r.constant_is_uniform and r.constant > 0 and r.relative_spread < 1e-9 for r in reps.values())
    ok &= elapsed < 10
    note = ", ".join(f"{k}: c={r.constant} (claimed {r.claimed}, {'matches' if r.matches_claim else 'differs'})"
                     for k, r in reps.items())
    record(9, ok, note)
    assert ok
    # Frozen measurement: the constant is the cover degree.
    assert reps["identity"].constant == 1 and reps["degree 2"].constant == 2


def _unimodular_gram(ring, n, rng):
    d = lattice.RING_CONDUCTOR[ring]
    u = linalg.identity(n, d)
    for _ in range(3 * n if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = lattice.ring_element(ring, rng.randint(-2, 2), rng.randint(-2, 2))
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]
    return linalg.matmul(linalg.conj_transpose(u), u)


def test_criterion_10_lattices():
    t0 = time.perf_counter()
    rng = random.Random(10)
    ok = True
    unit_cases = other_cases = 0
    for ring in ("gaussian", "eisenstein"):
        for _ in range(100):
            g = lattice.random_hermitian_gram(ring, rng.randint(1, 4), rng)
            L = lattice.RLattice(ring, g)
            inv = lattice.dual_quotient(L)
            prod = inv[0] if inv else lattice.ring_element(ring, 1)
            for x in inv[1:]:
                prod = prod * x
            ok &= lattice.is_unit(prod / lattice.discriminant(L))
        want = 4 if ring == "gaussian" else 6
        for _ in range(30):
            n = rng.randint(1, 4)
            L = lattice.RLattice(ring, _unimodular_gram(ring, n, rng))
            z = [lattice.ring_element(ring, rng.randint(-1, 1), rng.randint(-1, 1)) for _ in range(n)]
            if rng.random() < 0.5:
                z = [lattice.ring_element(ring, int(k == 0)) for k in range(n)]
            if not lattice.is_primitive(L, z):
                continue
            g = np.array([[embed_complex(x) for x in row] for row in L.gram])
            zv = np.array([embed_complex(x) for x in z])
            length = (zv @ g @ zv.conj()).real
            verdict = lattice.extension_ambiguity(L, z).order
            if abs(abs(length) - 1) < 1e-9:
                unit_cases += 1
                ok &= verdict == want
            else:
                other_cases += 1
                ok &= verdict == 1
    elapsed = time.perf_counter() - t0
    ok &= unit_cases > 0 and other_cases > 0 and elapsed < 30
    record(10, ok, f"200 Gram matrices, {unit_cases} unit-length and {other_cases} other ambiguity cases, {elapsed:.1f}s")
    assert ok
