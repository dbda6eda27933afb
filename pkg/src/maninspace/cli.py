"""Command line: ``maninspace run --scenario FILE [options]``.

Exit codes: 0 when every executed check passes, 1 when any fails, 2 on a
parse or configuration error (nothing else is printed to stdout then).
Timings appear in the text format only, so machine reports are reproducible
byte for byte.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from . import algebroid, courant, hamiltonian, liestruct
from .report import Report
from .scenario import Scenario, ScenarioError, load_scenario

CONVENTIONS = {
    "contraction": "(xi1^xi2) _| P = i(xi2) i(xi1) P",
    "d-operator": "(Df | e) = 1/2 rho(e) f, so e o e = D(e|e)",
    "schouten": "[X,f] = X(f), [Pi,f] = -Pi#(df), <b, Pi# a> = Pi(a,b)",
}


@dataclass(frozen=True)
class Check:
    id: str
    summary: str
    needs: tuple
    after: tuple
    run: object


def _ham(sc: Scenario):
    return sc.hamiltonian()


def _double(sc, points, seed):
    rep = Report("double")
    d = liestruct.build_double(sc.quasi)
    n = sc.quasi.dim
    rep.absorb(liestruct.check_jacobi(d))
    rep.absorb(liestruct.check_ad_invariance(d))
    halves = [("g", range(n))]
    if not sc.quasi.omega_upper():
        halves.append(("h", range(n, 2 * n)))
    else:
        rep.note("h is not a subalgebra when Omega is nonzero; only g is checked")
    for name, idx in halves:
        sub = liestruct.check_lagrangian_subalgebra(d, liestruct.Subspace.span_of_units(2 * n, idx))
        sub.check = f"lagrangian {name}"
        rep.absorb(sub)
    return rep.finish()


def _quasi_bialgebroid(sc, points, seed):
    rep = Report("quasi-bialgebroid")
    rep.absorb(algebroid.check_two_differential(sc.qlb))
    rep.absorb(algebroid.check_quasi_bialgebroid(sc.qlb))
    return rep.finish()


def _action(sc, points, seed):
    h = _ham(sc)
    return algebroid.check_action(sc.algebroid, h.action)


def _base_bivector(sc, points, seed):
    Pi, rep = hamiltonian.base_canonical_pis(sc.qlb)
    rep.note(f"Pi_S = {Pi.render()}")
    return rep


def _phi(sc, points, seed):
    _, rep = hamiltonian.phi_from_action(_ham(sc), points, seed, sc.locus)
    return rep


def _reduction(sc, points, seed):
    h = _ham(sc)
    rep = hamiltonian.check_reduction_poisson(h, sc.admissible, points, seed, sc.kernel_frame, sc.locus)
    if sc.quotient is not None and rep.ok:
        _, br = hamiltonian.reduced_bracket(h, sc.admissible, points, seed, sc.kernel_frame,
                                            sc.quotient, sc.locus)
        rep.notes.extend(br.notes)
        rep.data["sign"] = br.data.get("sign")
    return rep


def _characteristic(sc, points, seed):
    rep = hamiltonian.characteristic_distribution(_ham(sc), points, seed, sc.locus)
    dims = sorted(set(rep.data["dimensions"]))
    rep.note(f"dimensions {dims}")
    return rep


def _courant_axioms(sc, points, seed):
    return courant.check_courant_axioms(sc.courant, trials=100, seed=seed)


def _sign(sc, points, seed):
    rep = hamiltonian.check_sign_correspondence(sc.quasi_poisson())
    rep.note(f"quasi-Poisson {rep.data['quasi_poisson']}, Hamiltonian reading {rep.data['hamiltonian']}")
    return rep


CHECKS = (
    Check("lie-jacobi", "Jacobi identity of the Lie algebra g", ("algebra",), (),
          lambda sc, p, s: liestruct.check_jacobi(sc.lie)),
    Check("double", "double of the quasi-Lie bialgebra: Jacobi, ad-invariance, g and h Lagrangian",
          ("algebra",), (), _double),
    Check("algebroid", "Lie algebroid axioms", ("algebroid",), (),
          lambda sc, p, s: algebroid.check_algebroid_axioms(sc.algebroid)),
    Check("quasi-bialgebroid", "2-differential, delta squared and delta Omega", ("algebroid",),
          ("algebroid",), _quasi_bialgebroid),
    Check("action", "action of the algebroid on X along J", ("algebroid", "space", "action"),
          ("algebroid",), _action),
    Check("hamiltonian", "split Hamiltonian conditions on (action, Pi_X)",
          ("algebroid", "space", "action"), ("action",),
          lambda sc, p, s: hamiltonian.check_hamiltonian_qlb(_ham(sc))),
    Check("manin", "generalized Dirac structure in the product Courant algebroid",
          ("algebroid", "space", "action", "bivector"), (),
          lambda sc, p, s: hamiltonian.check_manin_hamiltonian(_ham(sc), p, s, sc.locus)),
    Check("base-bivector", "canonical bivector on the base", ("algebroid",), ("quasi-bialgebroid",),
          _base_bivector),
    Check("phi", "bundle map Phi recovered from the action", ("algebroid", "space", "action"),
          ("action",), _phi),
    Check("f-of-a", "F(A) is Lagrangian and closed", ("algebroid", "space", "action"),
          ("hamiltonian",),
          lambda sc, p, s: hamiltonian.check_f_of_a(_ham(sc), p, s, sc.kernel_frame, sc.locus)),
    Check("characteristic", "characteristic distribution equals the action distribution",
          ("algebroid", "space", "action"), ("hamiltonian",), _characteristic),
    Check("reduction", "reduced bracket on admissible functions is Poisson",
          ("algebroid", "space", "action", "admissible"), ("hamiltonian",), _reduction),
    Check("courant-axioms", "Courant algebroid axioms on random sections", ("courant",), (),
          _courant_axioms),
    Check("dirac", "frame spans a Dirac structure", ("courant", "frame"), (),
          lambda sc, p, s: courant.check_dirac(sc.courant, sc.frame, p, s, locus=sc.locus)),
    Check("quasi-poisson", "quasi-Poisson action and moment map conditions",
          ("algebra", "space", "action"), (),
          lambda sc, p, s: hamiltonian.check_quasi_poisson(sc.quasi_poisson())),
    Check("sign-correspondence", "quasi-Poisson verdict for Pi_X against the Hamiltonian verdict for -Pi_X",
          ("algebra", "space", "action", "dressing"), (), _sign),
)
BY_ID = {c.id: c for c in CHECKS}


def _available(sc: Scenario, check: Check) -> bool:
    if "algebroid" in check.needs and sc.algebroid is None:
        return False
    return all(n == "algebroid" or sc.has(n) for n in check.needs)


def _missing(sc: Scenario, check: Check) -> list[str]:
    out = []
    for n in check.needs:
        if n == "algebroid":
            if sc.algebroid is None:
                out.append("algebroid (or [algebra] with [dressing], or [delta])")
        elif not sc.has(n):
            out.append(n)
    return out


def run_checks(sc: Scenario, requested=None, points: int = 25, seed: int = 0) -> list[Report]:
    """Run the requested checks (default: every check the scenario supports)
    plus their prerequisites; a failed or skipped prerequisite skips the check."""
    if requested is None:
        wanted = [c.id for c in CHECKS if _available(sc, c)]
    else:
        for cid in requested:
            if cid not in BY_ID:
                raise ScenarioError(f"unknown check id {cid!r}")
            missing = _missing(sc, BY_ID[cid])
            if missing:
                raise ScenarioError(f"check {cid!r} needs {', '.join(missing)}")
        wanted = list(requested)
    closure, stack = set(), list(wanted)
    while stack:
        cid = stack.pop()
        if cid not in closure:
            closure.add(cid)
            stack.extend(BY_ID[cid].after)
    results = {}
    for check in CHECKS:
        if check.id not in closure:
            continue
        blocked = [d for d in check.after if results[d].status != "pass"]
        if blocked:
            results[check.id] = Report.skipped(check.id, f"prerequisite {', '.join(blocked)} did not pass")
            continue
        start = time.perf_counter()
        rep = check.run(sc, points, seed)
        rep.check = check.id
        rep.data["seconds"] = time.perf_counter() - start
        results[check.id] = rep
    return [results[cid] for cid in sorted(results)]


def emit_report(reports, fmt: str, seed: int, points: int, name: str = "") -> str:
    if fmt == "machine":
        doc = {
            "conventions": CONVENTIONS,
            "points": points,
            "scenario": name,
            "seed": seed,
            "checks": [{
                "check": r.check,
                "status": r.status,
                "witness": r.witnesses[0].as_dict() if r.witnesses else None,
                "witnesses": [w.as_dict() for w in r.witnesses],
                "notes": list(r.notes),
            } for r in reports],
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    lines = [f"scenario: {name}" if name else "scenario", f"seed {seed}, sample points {points}",
             "conventions:"]
    lines += [f"  {k}: {v}" for k, v in sorted(CONVENTIONS.items())]
    lines.append("")
    for r in reports:
        secs = r.data.get("seconds")
        lines.append(f"{r.check}: {r.status.upper()}" + (f" ({secs:.3f}s)" if secs is not None else ""))
        lines += [f"  witness {w}" for w in r.witnesses]
        lines += [f"  note: {n}" for n in r.notes]
    return "\n".join(lines) + "\n"


def list_checks() -> str:
    width = max(len(c.id) for c in CHECKS)
    out = []
    for c in CHECKS:
        extra = f" (after {', '.join(c.after)})" if c.after else ""
        out.append(f"{c.id.ljust(width)}  {c.summary}; needs {', '.join(c.needs)}{extra}")
    return "\n".join(out) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="maninspace", description="Exact checks on Hamiltonian spaces "
                                "for quasi-Lie bialgebroids.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run checks on a scenario file")
    run.add_argument("--scenario", help="scenario file")
    run.add_argument("--check", help="comma separated check ids")
    run.add_argument("--points", type=int, default=25, help="sample points for pointwise checks")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--format", choices=("text", "machine"), default="text")
    run.add_argument("--list-checks", action="store_true", help="print the check table and exit")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.list_checks:
        sys.stdout.write(list_checks())
        return 0
    if not args.scenario:
        print("error: --scenario is required", file=sys.stderr)
        return 2
    if args.points < 1:
        print("error: --points must be positive", file=sys.stderr)
        return 2
    try:
        with open(args.scenario, encoding="utf-8") as fh:
            text = fh.read()
        sc = load_scenario(text)
        requested = [c.strip() for c in args.check.split(",") if c.strip()] if args.check else None
        reports = run_checks(sc, requested, args.points, args.seed)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ScenarioError as exc:
        print(f"{args.scenario}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_report(reports, args.format, args.seed, args.points, sc.name))
    return 1 if any(r.failed for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
