"""Command line entry point: ``dmball <subcommand> ...``.

Exit codes: 0 pass, 2 invalid input, 3 checked condition failed, 4 internal
inconsistency.  Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Sequence

from . import braid, classifier, cover, hurwitz, intersection, lattice, linalg, pseudodisc, verify
from .cyclotomic import CycloNumber
from .errors import ConditionFailed, DMError, InconsistencyError, InvalidInput
from .mulist import format_mu, parse_mu

EXIT_OK, EXIT_INVALID, EXIT_FAILED, EXIT_INCONSISTENT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise InvalidInput(message)


def _emit(obj: Any) -> None:
    print(json.dumps(obj, separators=(",", ":"), sort_keys=False))


def _fmt(x: CycloNumber) -> str:
    """Exact text form over the power basis of z = exp(2 pi i / d)."""
    if x.is_rational():
        return str(x.rational_value())
    terms = []
    for k, c in enumerate(x.coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms).replace("+ -", "- ")


def _print_matrix(mat: linalg.Matrix, d: int, header: str) -> None:
    print(f"{header} (z = exp(2 pi i/{d}))")
    for row in mat:
        print("[" + ", ".join(_fmt(x) for x in row) + "]")


def _matrix_json(mat: linalg.Matrix) -> list:
    return [[x.to_json() for x in row] for row in mat]


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{what} is not valid JSON: {exc}") from exc


# subcommand handlers -------------------------------------------------------


def cmd_psi(args) -> int:
    m = parse_mu(args.mu)
    form = intersection.intersection_matrix(m) if args.skew else intersection.normalized_hermitian(m, args.promote)
    if args.json:
        _emit(form.to_json())
    else:
        _print_matrix(form.entries, form.d, f"{form.kind} form for {m}, scale {form.scale}")
    return EXIT_OK


def cmd_signature(args) -> int:
    m = parse_mu(args.mu)
    rep = intersection.signature_report(m)
    p, q = rep.value
    if args.json:
        _emit({"p": p, "q": q})
    else:
        print(f"signature (p, q) = ({p}, {q}) for {m}; nullity {rep.nullity}")
        print(f"  formula: {tuple(rep.formula) if rep.formula else 'n/a (non-integral sum)'}")
        print(f"  constructive: {tuple(rep.constructive)}  eigenvalues: {tuple(rep.eigen)}")
    return EXIT_OK


def cmd_braid(args) -> int:
    m = parse_mu(args.mu)
    if args.gen == "wrap":
        ref = braid.wrap_reflection(m)
        mat = linalg.mat_pow(ref.matrix, args.power) if args.power >= 0 else linalg.mat_pow(linalg.inverse(ref.matrix), -args.power)
        label = "R_wrap"
    else:
        try:
            i = int(args.gen)
        except ValueError as exc:
            raise InvalidInput(f"--gen must be an index or 'wrap', got {args.gen!r}") from exc
        ref = braid.braid_reflection(m, i)
        mat = braid.evaluate_word(m, [(i, args.power)])
        label = f"R_{i}"
    order = ref.order if isinstance(ref.order, str) else int(ref.order)
    if args.json:
        _emit({"generator": args.gen, "power": args.power, "order": order, "d": linalg.common_conductor(mat),
               "matrix": _matrix_json(mat)})
    else:
        _print_matrix(mat, linalg.common_conductor(mat), f"{label}^{args.power} on {m}, order {order}")
    return EXIT_OK


def cmd_braid_check(args) -> int:
    m = parse_mu(args.mu)
    chk = braid.braid_check(m)
    data = {
        "form_preserved": chk.form_preserved, "orders_ok": chk.orders_ok, "fixed_codim_one": chk.fixed_codim_one,
        "braid_failures": chk.braid_failures, "commute_failures": [list(p) for p in chk.commute_failures],
        "half_twist_braid_failures": chk.half_twist_braid_failures, "all_ok": chk.all_ok,
    }
    if args.json:
        _emit(data)
    else:
        for k, v in data.items():
            print(f"{k}: {v}")
    if not chk.invariants_ok:
        raise InconsistencyError(f"reflection invariants fail on {m}")
    return EXIT_OK if chk.all_ok else EXIT_FAILED


def cmd_check_int(args) -> int:
    m = parse_mu(args.mu)
    res = classifier.classify(m, literal_sigma=args.literal_sigma)
    sigma = args.sigma or args.literal_sigma
    passed = res.sigma_int_pass if sigma else res.int_pass
    witnesses = res.sigma_witnesses if sigma else res.int_witnesses
    if args.json:
        _emit(res.to_json())
    else:
        print(f"{'Sigma-INT' if sigma else 'INT'} {'pass' if passed else 'fail'} for {m} ({res.ring})")
    if not passed:
        for i, j in witnesses[:10]:
            print(f"failing pair ({i}, {j})", file=sys.stderr)
        if len(witnesses) > 10:
            print(f"... {len(witnesses) - 10} more failing pairs", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_enumerate(args) -> int:
    out = classifier.enumerate_mu(args.n, args.max_den, args.condition, args.literal_sigma)
    if args.json:
        _emit([c.to_json() for c in out])
    else:
        for c in out:
            print(f"{format_mu(c.mu)}  sum={c.sum}  {c.ring}")
        print(f"{len(out)} solution(s)")
    return EXIT_OK


def cmd_descend(args) -> int:
    poset = classifier.descendants(parse_mu(args.mu), args.depth)
    if args.dot:
        print(poset.to_dot())
    elif args.json:
        _emit(poset.to_json())
    else:
        for node in poset.nodes:
            print(f"depth {poset.depth_of[node]}: {format_mu(node)}")
        print(f"{len(poset.nodes)} node(s), {len(poset.edges)} edge(s)")
    return EXIT_OK


def _parse_perms(text: str, degree: int) -> cover.CoverMonodromy:
    data = _load_json(text, "--perms")
    if not isinstance(data, list) or not all(isinstance(p, list) for p in data):
        raise InvalidInput("--perms must be a JSON list of 1-based image lists")
    try:
        perms = tuple(tuple(int(x) - 1 for x in p) for p in data)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"bad permutation entry: {exc}") from exc
    return cover.CoverMonodromy(degree, perms)


def cmd_pullback(args) -> int:
    nu = parse_mu(args.nu).weights
    prof = hurwitz.parse_fibers(nu, args.fibers)
    mu = hurwitz.pullback_mu(prof)
    hc = hurwitz.hurwitz_codim(prof)
    spi = hurwitz.spi_codim_in_dm(prof, strict=False)
    data: dict[str, Any] = {
        "mu": str(mu), "profile": prof.to_json(),
        "hurwitz": {"codim": hc.codim, "dim": hc.dim, "reduced_dim": hc.reduced_dim},
        "spi_codim": spi.value, "hypothesis_ok": spi.hypothesis_ok,
        "subball": spi.hypothesis_ok and spi.value == 1,
    }
    if spi.reason:
        data["reason"] = spi.reason
    if args.perms:
        cm = _parse_perms(args.perms, prof.degree)
        got = [sorted(bp.fiber) for bp in cm.profile(nu).branch_points]
        if got != [sorted(bp.fiber) for bp in prof.branch_points]:
            raise InvalidInput("the permutations do not realize the given fibers")
        data["pairing"] = cover.pairing_constant(cm, nu, args.seed).to_json()
    if args.json:
        _emit(data)
    else:
        print(f"pulled-back weights: {mu}")
        print(f"Hurwitz codimension {hc.codim}, dimension {hc.dim}, reduced {hc.reduced_dim}")
        verdict = "sub-ball of codimension 1" if data["subball"] else "no sub-ball certificate"
        print(f"codimension in the DM ball: {spi.value}{'' if spi.hypothesis_ok else ' (upper bound: ' + spi.reason + ')'}; {verdict}")
        if "pairing" in data:
            p = data["pairing"]
            print(f"pairing constant {p['constant']} (uniform: {p['uniform']}, claimed {p['claimed']}), image rank {p['image_rank']}")
    return EXIT_OK


def cmd_classify_g(args) -> int:
    triples = hurwitz.classify_property_g()
    if args.json:
        _emit([list(t) for t in triples])
    else:
        for a, b, d in triples:
            print(f"({a},{b},{d})")
    return EXIT_OK


def cmd_cover_check(args) -> int:
    c = hurwitz.build_property_g_cover(args.a, args.b, hurwitz.BinaryForm.parse(args.A), hurwitz.BinaryForm.parse(args.B))
    prof = hurwitz.verify_ramification(c)
    if args.json:
        _emit({"cover": c.to_json(), "profile": prof.to_json()})
    else:
        print(f"cover of degree {c.d}: A^{c.a} / (A^{c.a} + B^{c.b})")
        for bp in prof.branch_points:
            print(f"  over {bp.label}: fiber {list(bp.fiber)}")
        print("Riemann-Hurwitz verified")
    return EXIT_OK


def cmd_pseudo_disc(args) -> int:
    a, b = args.a, args.b
    if a < 1 or b < 1:
        raise InvalidInput("a and b must be positive")
    if (args.d1 is None) != (args.d2 is None):
        raise InvalidInput("give both --d1 and --d2 or neither")
    if args.d1 is None:
        n = math.lcm(a, b)
        d1, d2 = n // a, n // b
    else:
        d1, d2 = args.d1, args.d2
    data: dict[str, Any] = {
        "a": a, "b": b, "d1": d1, "d2": d2,
        "orbit_count": pseudodisc.orbit_count(a, b, args.seed),
        "generic_degree": pseudodisc.generic_degree(a, b, d1, d2).to_json(),
        "hypersurface": pseudodisc.hypersurface_condition(a, b, d1, d2),
    }
    ok = True
    if args.witness:
        rep = pseudodisc.fiber_witness(a, b, d1, d2, seed=args.seed, budget=args.budget)
        data["witness"] = rep.to_json()
        ok = rep.ok
    if args.json:
        _emit(data)
    else:
        g = data["generic_degree"]
        print(f"Delta = A^{a} + B^{b}, deg A = {d1}, deg B = {d2}")
        print(f"rescaling orbit classes: {data['orbit_count']}")
        print(f"generic degree: {g['value']} ({g['certificate']})")
        print(f"hypersurface condition d1 + d2 + 2 = N: {data['hypersurface']}")
        if args.witness:
            w = data["witness"]
            print(f"witness: {w['orbit_classes_found']} orbit classes, {w['extra_found']} extra, "
                  f"{w['assignments_tried']} splits tried{' (budget exceeded)' if w['budget_exceeded'] else ''}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_lattice(args) -> int:
    L = lattice.RLattice.parse(args.ring, _load_json(args.gram, "--gram"))
    fe = lambda x: lattice.format_element(args.ring, x)  # noqa: E731
    if args.dual_quotient:
        inv = lattice.dual_quotient(L)
        data: Any = {"dual_quotient": [fe(x) for x in inv]}
        text = "C(L) = " + (" + ".join(f"R/({fe(x)})" for x in inv) if inv else "0")
    elif args.complement is not None:
        comp, basis = lattice.orthogonal_complement(L, _load_json(args.complement, "--complement"))
        data = {"basis": [[fe(x) for x in v] for v in basis], "gram": comp.to_json()["gram"]}
        text = "complement basis:\n" + "\n".join("  [" + ", ".join(fe(x) for x in v) + "]" for v in basis)
    elif args.ambiguity is not None:
        verdict = lattice.extension_ambiguity(L, _load_json(args.ambiguity, "--ambiguity"))
        data = verdict.to_json()
        text = f"ambiguity order {verdict.order} (psi(z,z) = {fe(verdict.psi_zz)})"
    else:
        p, q, z = L.signature()
        data = {"rank": L.rank, "discriminant": fe(lattice.discriminant(L)), "unimodular": lattice.is_unimodular(L),
                "signature": [p, q, z]}
        text = f"rank {L.rank}, discriminant {data['discriminant']}, unimodular {data['unimodular']}, signature ({p}, {q})"
    if args.json:
        _emit(data)
    else:
        print(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = verify.run_verify(args.max_den, args.seed)
    if args.json:
        _emit({"invariants_ok": rep.invariants_ok, "results": [r.to_json() for r in rep.results]})
    else:
        width = max(len(r.name) for r in rep.results)
        for r in rep.results:
            status = "PASS" if r.passed else ("DEVIATES" if r.deviation else "FAIL")
            print(f"{r.name:<{width}}  {status:<8}  {r.detail}")
    if not rep.invariants_ok:
        return EXIT_INCONSISTENT
    if args.strict and rep.deviations:
        return EXIT_FAILED
    return EXIT_OK


# parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="compact JSON output")
    common.add_argument("--seed", type=int, default=0, help="master seed for randomized steps")
    p = _Parser(prog="dmball", description="Exact Deligne-Mostow lattice computations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("psi", cmd_psi, "intersection form or its Hermitian normalization")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--skew", action="store_true", help="print the skew-Hermitian Int")
    sp.add_argument("--promote", action="store_true", help="use the exact imaginary-unit scaling")

    sp = add("signature", cmd_signature, "signature of the Hermitian form")
    sp.add_argument("--mu", required=True)

    sp = add("braid", cmd_braid, "monodromy generator matrix")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--gen", required=True, help="1-based index or 'wrap'")
    sp.add_argument("--power", type=int, default=1)

    sp = add("braid-check", cmd_braid_check, "reflection and braid invariant suite")
    sp.add_argument("--mu", required=True)

    sp = add("check-int", cmd_check_int, "INT or Sigma-INT condition")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--sigma", action="store_true")
    sp.add_argument("--literal-sigma", action="store_true")

    sp = add("enumerate", cmd_enumerate, "enumerate weight lists satisfying a condition")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-den", type=int, default=24)
    sp.add_argument("--condition", default="int")
    sp.add_argument("--literal-sigma", action="store_true")

    sp = add("descend", cmd_descend, "collision descendant poset")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--dot", action="store_true", help="graph description output")

    sp = add("pullback", cmd_pullback, "pull-back weights, Hurwitz counts and sub-ball verdict")
    sp.add_argument("--nu", required=True)
    sp.add_argument("--fibers", required=True)
    sp.add_argument("--perms", help="JSON list of 1-based permutation images, one per branch point")

    add("classify-g", cmd_classify_g, "property-G triples")

    sp = add("cover-check", cmd_cover_check, "validate A^a/(A^a+B^b) and read off its ramification")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--A", required=True, help="comma separated coefficients, u-degree descending")
    sp.add_argument("--B", required=True)

    sp = add("pseudo-disc", cmd_pseudo_disc, "pseudo-discriminant degree analysis")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--d1", type=int)
    sp.add_argument("--d2", type=int)
    sp.add_argument("--witness", action="store_true")
    sp.add_argument("--budget", type=int, default=pseudodisc.WITNESS_BUDGET)

    sp = add("lattice", cmd_lattice, "Hermitian lattices over Z[i] and Z[w]")
    sp.add_argument("--ring", required=True, choices=["gaussian", "eisenstein"])
    sp.add_argument("--gram", required=True, help="JSON matrix of elements such as \"1+i\" or \"2-w\"")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--dual-quotient", action="store_true")
    g.add_argument("--complement", metavar="VECTOR")
    g.add_argument("--ambiguity", metavar="VECTOR")

    sp = add("verify", cmd_verify, "cross-module invariant suite")
    sp.add_argument("--max-den", type=int, default=12)
    sp.add_argument("--strict", action="store_true", help="exit 3 when a checked claim deviates")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InvalidInput as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConditionFailed as exc:
        print(f"condition failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (InconsistencyError, DMError) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
