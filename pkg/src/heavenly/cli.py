"""Command-line front end: build solution families from user expressions,
run verification and classification suites over grids, and emit
deterministic JSON or CSV reports."""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys

from . import __version__
from . import expr as ex
from .classify import (ConformallyNonInvariant, Inconclusive,
                       InvariantCaseMatched, classify_b)
from .errors import (DomainError, EtaVanishes, FVanishes, HeavenlyError,
                     NegativeDiscriminant, ParseError, SingularMap)
from .fields import Point, conformal_pushforward, make_solution
from .invariants import (COMMUTATOR_PAIRS, commutator_residual, invariants_at,
                         liouville_residual, pde_residual)
from .resolving import (ResolvingPoint, ansatz_functions, jacobi_residual,
                        resolving_residuals, ResolvingFunctions)
from .symmetry import GeneratorSpec, algebra_commutator_check, \
    invariance_residual, x2_apply

SCHEMA = "foliation-report/1"
DEFAULT_TOL = 1e-9
COMMUTATOR_TOL = 1e-7

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# --- serialization helpers ------------------------------------------------

def _num(v):
    """JSON-friendly value: float stays float, complex becomes [re, im]."""
    if isinstance(v, complex):
        if v.imag == 0:
            return v.real
        return [v.real, v.imag]
    return float(v)


def _point_key(rec):
    p = rec["point"]
    return (p["t"], p["re"], p["im"])


def _emit(report: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "re", "im", "kind", "value"])
        for rec in report["records"]:
            p = rec["point"]
            for kind in sorted(rec["residuals"]):
                writer.writerow([p["t"], p["re"], p["im"], kind,
                                 rec["residuals"][kind]])
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _base_report(args, family=None, parameters=None) -> dict:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": sys.argv[1:],
        "kappa": getattr(args, "kappa", None),
        "family": family,
        "parameters": parameters or {},
        "tolerance": args.tol,
        "seed": getattr(args, "seed", None),
        "records": [],
        "excluded": {"count": 0, "reasons": {}},
        "summary": {},
    }


def _exclude(report, reason):
    exc = report["excluded"]
    exc["count"] += 1
    exc["reasons"][reason] = exc["reasons"].get(reason, 0) + 1


def _finish(report, args) -> int:
    report["records"].sort(key=_point_key)
    maxima = {}
    for rec in report["records"]:
        for kind, val in rec["residuals"].items():
            maxima[kind] = max(maxima.get(kind, 0.0), abs(complex(
                *val) if isinstance(val, list) else val))
    report["summary"]["max_residuals"] = maxima
    ok = all(v <= args.tol for v in maxima.values())
    ok = ok and report["summary"].get("pass", True)
    report["summary"]["pass"] = ok
    _emit(report, args)
    return EXIT_PASS if ok else EXIT_FAIL


# --- argument parsing -----------------------------------------------------

def parse_grid(spec: str) -> list[Point]:
    """Grid spec "t=a:b:n,re=a:b:n,im=a:b:n" -> inclusive product grid."""
    ranges = {}
    for part in spec.split(","):
        if "=" not in part:
            raise ValueError(f"malformed grid component {part!r}")
        key, _, rng = part.partition("=")
        pieces = rng.split(":")
        if len(pieces) != 3:
            raise ValueError(f"range {rng!r} is not start:stop:count")
        start, stop, count = float(pieces[0]), float(pieces[1]), int(pieces[2])
        if count < 1:
            raise ValueError(f"count must be >= 1 in {part!r}")
        if count == 1:
            ranges[key] = [start]
        else:
            step = (stop - start) / (count - 1)
            ranges[key] = [start + k * step for k in range(count)]
    missing = {"t", "re", "im"} - set(ranges)
    if missing:
        raise ValueError(f"grid is missing components: {sorted(missing)}")
    return [Point(t, complex(x, y))
            for t in ranges["t"] for x in ranges["re"] for y in ranges["im"]]


def _const_arg(text: str) -> complex:
    return ex.evaluate_value(ex.parse(text, ()), {})


def _family_from_args(args):
    """(field, family name, parameter echo) from the family flags."""
    fam = args.family
    params = {}
    echo = {}

    def grab_expr(flag, variables=("z",)):
        text = getattr(args, flag, None)
        if text is None:
            raise ValueError(f"family {fam!r} requires --{flag.replace('_', '-')}")
        echo[flag] = text
        return ex.parse(text, variables)

    def grab_const(flag):
        text = getattr(args, flag, None)
        if text is None:
            raise ValueError(f"family {fam!r} requires --{flag}")
        echo[flag] = text
        return _const_arg(text)

    if fam == "f0":
        params["C"] = grab_const("C").real
    elif fam == "f0general":
        params["l"] = grab_const("l").real
        params["C1"] = grab_const("C1").real
        params["C2"] = grab_const("C2").real
        params["a"] = grab_expr("a")
    elif fam == "noninv":
        params["b"] = grab_expr("b")
    elif fam == "general_noninv":
        params["b"] = grab_expr("b")
        params["c"] = grab_expr("c")
    elif fam == "confinv":
        params["f"] = grab_expr("f", ("xi", "t"))
        params["A"] = grab_expr("A")
        params["a"] = grab_expr("a")
    elif fam == "liouville":
        params["c"] = grab_expr("c")
    else:
        raise ValueError(f"unknown family {fam!r}")
    return make_solution(fam, params, args.kappa), fam, echo


# --- subcommands ----------------------------------------------------------

def cmd_verify(args) -> int:
    field, fam, echo = _family_from_args(args)
    report = _base_report(args, fam, echo)
    residual_fn = liouville_residual if fam == "liouville" else pde_residual
    for p in parse_grid(args.grid):
        try:
            r = residual_fn(field, p)
            rec = {"point": {"t": p.t, "re": p.z.real, "im": p.z.imag},
                   "residuals": {"equation": abs(r)},
                   "invariants": {}}
            if fam != "liouville":
                s = invariants_at(field, p)
                rec["invariants"] = {
                    "u_t": _num(s.u_t), "u_tt": _num(s.u_tt),
                    "rho": _num(s.rho), "eta": _num(s.eta),
                    "sigma": _num(s.sigma), "sigma_bar": _num(s.sigma_bar),
                    "tau": _num(s.tau),
                }
            report["records"].append(rec)
        except DomainError as err:
            _exclude(report, str(err))
    return _finish(report, args)


def cmd_classify(args) -> int:
    b = ex.parse(args.b, ("z",))
    report = _base_report(args, "noninv", {"b": args.b})
    grid = parse_grid(args.grid)
    verdict = classify_b(b, args.kappa, grid)
    if isinstance(verdict, InvariantCaseMatched):
        report["summary"]["verdict"] = {
            "kind": "InvariantCaseMatched",
            "case_id": verdict.case_id,
            "max_residual": verdict.max_residual,
            "note": verdict.note,
        }
    elif isinstance(verdict, ConformallyNonInvariant):
        report["summary"]["verdict"] = {
            "kind": "ConformallyNonInvariant",
            "witness": {"t": verdict.witness.t, "re": verdict.witness.z.real,
                        "im": verdict.witness.z.imag},
            "asymmetry": verdict.asymmetry,
        }
    else:
        report["summary"]["verdict"] = {"kind": "Inconclusive",
                                        "reason": verdict.reason}
    field = make_solution("noninv", {"b": b}, args.kappa)
    for p in grid:
        try:
            r = pde_residual(field, p)
        except DomainError as err:
            _exclude(report, str(err))
            continue
        report["records"].append(
            {"point": {"t": p.t, "re": p.z.real, "im": p.z.imag},
             "residuals": {"equation": abs(r)}})
    report["summary"]["pass"] = not isinstance(verdict, Inconclusive)
    return _finish(report, args)


def _perturbed(rf: ResolvingFunctions, spec: str) -> ResolvingFunctions:
    name, _, amount = spec.partition(":")
    shift = _const_arg(amount.lstrip("+"))
    keys = {"F": "F", "lambda": "lambda_", "lambda_bar": "lambda_bar",
            "tau": "tau"}
    if name not in keys:
        raise ValueError(f"--perturb target must be one of {sorted(keys)}")
    kw = {"F": rf.F, "lambda_": rf.lambda_, "lambda_bar": rf.lambda_bar,
          "tau": rf.tau,
          "requires_nonneg_discriminant": rf.requires_nonneg_discriminant}
    old = kw[keys[name]]
    kw[keys[name]] = ex.Expr(ex.Add(old.root, ex.Const(shift)), old.variables)
    return ResolvingFunctions(**kw)


def cmd_resolving(args) -> int:
    phi = ex.parse(args.phi, ("xi", "theta"))
    rf = ansatz_functions(phi, args.kappa)
    if args.perturb:
        rf = _perturbed(rf, args.perturb)
    report = _base_report(args, "ansatz", {"phi": args.phi,
                                           "perturb": args.perturb})
    rng = random.Random(args.seed)
    produced = 0
    attempts = 0
    while produced < args.samples and attempts < 50 * args.samples:
        attempts += 1
        t = rng.uniform(-2.0, 2.0)
        ut = rng.uniform(-1.0, 1.0)
        rho = args.kappa * rng.uniform(0.55, 2.0)
        p = ResolvingPoint(t=t, ut=ut, rho=rho, kappa=args.kappa)
        if p.discriminant <= 1e-6:
            _exclude(report, "discriminant outside the admissible region")
            continue
        try:
            res = resolving_residuals(rf, p)
            jac = jacobi_residual(rf, p)
        except (FVanishes, NegativeDiscriminant, DomainError) as err:
            _exclude(report, type(err).__name__)
            continue
        produced += 1
        residuals = {k: abs(v) for k, v in res.as_dict().items()}
        residuals["jacobi"] = max(abs(v) for v in jac)
        report["records"].append(
            {"point": {"t": t, "re": ut, "im": rho}, "residuals": residuals})
    report["summary"]["samples"] = produced
    return _finish(report, args)


def cmd_symmetry(args) -> int:
    report = _base_report(args)
    if args.check == "invariants":
        a = ex.parse(args.a, ("z",))
        field, fam, echo = _family_from_args(args)
        report["family"] = fam
        report["parameters"] = dict(echo, a=args.a)
        for p in parse_grid(args.grid):
            try:
                residuals = {f"x2_{name}": abs(x2_apply(a, name, field, p))
                             for name in ("T", "Ut", "Utt", "Rho", "Eta")}
            except DomainError as err:
                _exclude(report, str(err))
                continue
            report["records"].append(
                {"point": {"t": p.t, "re": p.z.real, "im": p.z.imag},
                 "residuals": residuals})
    elif args.check == "algebra":
        a = ex.parse(args.a, ("z",))
        b = ex.parse(args.b_gen, ("z",))
        report["parameters"] = {"a": args.a, "b_gen": args.b_gen}
        for z in (0.7 + 0.2j, -0.4 + 0.9j, 1.1 - 0.5j):
            rz, ru = algebra_commutator_check(a, b, (z, 0j))
            report["records"].append(
                {"point": {"t": 0.0, "re": z.real, "im": z.imag},
                 "residuals": {"bracket_z": abs(rz), "bracket_u": abs(ru)}})
    elif args.check == "criterion":
        field, fam, echo = _family_from_args(args)
        gen = GeneratorSpec(args.alpha, args.beta,
                            ex.parse(args.a, ("z",)) if args.a else None)
        report["family"] = fam
        report["parameters"] = dict(echo, a=args.a, alpha=args.alpha,
                                    beta=args.beta)
        for p in parse_grid(args.grid):
            try:
                r = invariance_residual(field, gen, p)
            except DomainError as err:
                _exclude(report, str(err))
                continue
            report["records"].append(
                {"point": {"t": p.t, "re": p.z.real, "im": p.z.imag},
                 "residuals": {"criterion": abs(r)}})
    else:
        raise ValueError(f"unknown symmetry check {args.check!r}")
    return _finish(report, args)


def cmd_orbit(args) -> int:
    field, fam, echo = _family_from_args(args)
    phi = ex.parse(args.phi, ("z",))
    report = _base_report(args, fam, dict(echo, phi=args.phi))
    pushed = conformal_pushforward(field, phi)
    for p in parse_grid(args.grid):
        try:
            w = ex.eval_jet1(phi, p.z, 0).value
            r = pde_residual(pushed, p)
            s_new = invariants_at(pushed, p)
            s_old = invariants_at(field, Point(p.t, w))
        except DomainError as err:
            _exclude(report, str(err))
            continue
        report["records"].append(
            {"point": {"t": p.t, "re": p.z.real, "im": p.z.imag},
             "residuals": {"equation": abs(r),
                           "rho_match": abs(s_new.rho - s_old.rho),
                           "eta_match": abs(s_new.eta - s_old.eta)}})
    return _finish(report, args)


# --- entry point ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="heavenly",
        description="Verification suites for the group foliation of "
                    "u_zzbar = kappa (e^u)_tt")
    sub = top.add_subparsers(dest="cmd", required=True)

    def common(p, grid=True):
        p.add_argument("--kappa", type=int, choices=(1, -1), default=1)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jet-order", type=int, choices=(2, 3, 4), default=4)
        if grid:
            p.add_argument("--grid", default="t=0.5:2:4,re=0.5:2:4,im=-0.5:0.5:3")

    def family_flags(p):
        p.add_argument("--family", default="noninv",
                       choices=("f0", "f0general", "noninv", "general_noninv",
                                "confinv", "liouville"))
        for flag in ("b", "c", "C", "l", "C1", "C2", "a", "f", "A"):
            p.add_argument(f"--{flag}", default=None)

    pv = sub.add_parser("verify", help="equation residuals for a family")
    common(pv); family_flags(pv)
    pv.set_defaults(fn=cmd_verify)

    pc = sub.add_parser("classify", help="invariance classification of b(z)")
    common(pc)
    pc.add_argument("--b", required=True)
    pc.set_defaults(fn=cmd_classify)

    pr = sub.add_parser("resolving", help="resolving-system residual suite")
    common(pr, grid=False)
    pr.add_argument("--phi", required=True)
    pr.add_argument("--samples", type=int, default=100)
    pr.add_argument("--perturb", default=None)
    pr.set_defaults(fn=cmd_resolving)

    ps = sub.add_parser("symmetry", help="prolongation and algebra checks")
    common(ps); family_flags(ps)
    ps.add_argument("--check", required=True,
                    choices=("invariants", "algebra", "criterion"))
    ps.add_argument("--b-gen", default=None)
    ps.add_argument("--alpha", type=float, default=0.0)
    ps.add_argument("--beta", type=float, default=0.0)
    ps.set_defaults(fn=cmd_symmetry)

    po = sub.add_parser("orbit", help="conformal pushforward checks")
    common(po); family_flags(po)
    po.add_argument("--phi", required=True)
    po.set_defaults(fn=cmd_orbit)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as err:
        print(f"error: parse failure at position {err.position}: {err}",
              file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, SingularMap, EtaVanishes, HeavenlyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
