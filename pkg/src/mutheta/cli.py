"""
Command line interface.

    mutheta space build --model ao21 -p 5
    mutheta space verify space.json
    mutheta deform check -n 5 -m 4 -p 7
    mutheta fj theta f.json

Exit status: 0 when every requested check passes, 1 when a mathematical
check fails, 2 for malformed input.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass

from . import deformation, dieudonne, fjexp, weights
from .exactring import is_odd_prime
from .serialize import (
    InputError,
    dumps,
    fj_from_json,
    fj_to_json,
    load_file,
    space_from_json,
    space_to_json,
)

DEFAULT_SEED = 42
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    p: int = 5
    s: int = 1
    n: int | None = None
    m: int | None = None
    seed: int = DEFAULT_SEED
    trunc: int = 100
    json: bool = False


def make_config(args) -> RunConfig:
    """Validate the shared flags."""
    seed = args.seed if args.seed is not None else default_seed()
    cfg = RunConfig(
        f"{args.group} {args.action}", args.p, args.s, args.n, args.m, seed, args.trunc, args.json
    )
    if not is_odd_prime(cfg.p):
        raise InputError(f"p must be an odd prime, got {cfg.p}")
    if cfg.s < 1:
        raise InputError("s must be >= 1")
    if cfg.m is not None and cfg.m < 0:
        raise InputError("m must be >= 0")
    if cfg.n is not None and cfg.m is not None and cfg.m > cfg.n:
        raise InputError(f"need 0 <= m <= n, got n={cfg.n}, m={cfg.m}")
    if cfg.trunc < 0:
        raise InputError("--trunc must be >= 0")
    return cfg


def default_seed() -> int:
    env = os.environ.get("MUTHETA_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise InputError(f"MUTHETA_SEED must be an integer, got {env!r}") from None


def _emit(args, report: dict, lines: list[str]):
    if args.json:
        print(dumps(report))
    else:
        print("\n".join(lines))


def _fmt_matrix(M) -> str:
    return "[" + "; ".join(" ".join(str(x) for x in r) for r in M) + "]"


# space ---------------------------------------------------------------------------------------


def _load_space(args) -> dieudonne.DieudonneSpace:
    if getattr(args, "file", None):
        return space_from_json(load_file(args.file))
    model = args.model or "ao21"
    if model not in dieudonne.MODELS:
        raise InputError(f"unknown model {model!r}; choose from {sorted(dieudonne.MODELS)}")
    if model in ("mu_ordinary", "ao_space") and (args.n is None or args.m is None):
        raise InputError(f"model {model} needs -n and -m")
    try:
        return dieudonne.MODELS[model](args.p, args.n, args.m)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_space_build(args) -> int:
    print(dumps(space_to_json(_load_space(args))))
    return EXIT_OK


def cmd_space_verify(args) -> int:
    D = space_from_json(load_file(args.file))
    rep = dieudonne.verify(D)
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}" for name, ok in rep.checks.items()]
    if rep.failures:
        lines.append("violated: " + "; ".join(rep.failures))
    _emit(args, rep.as_dict(), lines)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_space_show(args) -> int:
    D = _load_space(args)
    rep = dieudonne.verify(D)
    out = {"basis": list(D.names), "verified": rep.ok}
    lines = ["basis: " + " ".join(D.names), f"verified: {rep.ok}"]
    if args.derived:
        if not rep.ok:
            lines.append("derived data needs a verified space; failed: " + "; ".join(rep.failures))
            _emit(args, out, lines)
            return EXIT_FAIL
        desc = D.describe()
        out.update(desc)
        lines += [
            f"signature: {tuple(desc['signature'])}",
            f"omega: {desc['omega']}",
            f"P0: {desc['P0']}",
            f"hasse matrix (twist 2): {_fmt_matrix(desc['hasse_matrix'])}",
            f"hasse invariant: {desc['hasse_invariant']}",
        ]
    _emit(args, out, lines)
    return EXIT_OK if rep.ok else EXIT_FAIL


# deform ------------------------------------------------------------------------------------------


def cmd_deform_check(args) -> int:
    if args.n is None or args.m is None:
        raise InputError("deform check needs -n and -m")
    n, m = args.n, args.m
    if args.case != "auto":
        want = "I" if n == m + 1 else "II" if n >= m + 2 else "n=m"
        if args.case != want:
            raise InputError(f"signature ({n},{m}) belongs to case {want}, not {args.case}")
    try:
        rep = deformation.theorem_report(n, m, args.p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    df = deformation.universal_ao_deformation(n, m, args.p)
    hf = deformation.hasse_family(df)
    lines = [
        f"signature ({n},{m}), p = {args.p}, case {rep['case']}",
        f"parameters ({len(rep['params'])}): {' '.join(rep['params'])}",
        "admissible: " + ", ".join(f"{k}={v}" for k, v in rep["admissible"].items()),
        f"V_Q = {_fmt_matrix(hf['V_Q'].matrix)}",
        f"V_P = {_fmt_matrix(hf['V_P'].matrix)}",
        f"H   = {_fmt_matrix(hf['H'].matrix)}",
        f"local equation: {rep['local_equation']}",
        f"KS rank: {rep['ks_rank']} / {rep['ks_size']}",
        "psi(du) = 0" if rep["psi(du) = 0"] else "psi(du) != 0",
        "nonzero psi(dt) for t in: " + " ".join(rep["nonzero psi"]),
        "RESULT: " + ("PASS" if rep["ok"] else "FAIL"),
    ]
    _emit(args, rep, lines)
    return EXIT_OK if rep["ok"] else EXIT_FAIL


def cmd_deform_audit(args) -> int:
    e = args.ramification if args.ramification is not None else args.p * args.p - 1
    try:
        rep = deformation.pole_order_audit(args.weight, args.p, e)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    lines = [f"{k}: {v}" for k, v in rep.items()]
    _emit(args, rep, lines)
    return EXIT_OK if rep["holomorphic"] else EXIT_FAIL


# weights ------------------------------------------------------------------------------------------


def cmd_weights_dk(args) -> int:
    try:
        kappa = weights.parse_kappa(args.kappa)
        kp = weights.parse_kappa(args.kappa_prime)
        rep = weights.dk_report(kappa, kp, args.p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    lines = [f"{k}: {v}" for k, v in rep.items()]
    _emit(args, rep, lines)
    return EXIT_OK if rep["sum_symmetric"] else EXIT_FAIL


def cmd_weights_dim(args) -> int:
    try:
        lam = tuple(int(x) for x in args.lam.split(","))
        if args.m is not None and args.m != len(lam):
            raise ValueError(f"lambda has {len(lam)} entries but -m is {args.m}")
        expr = weights.rho_lambda_expr(lam)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    dim = expr.dimension({"st_Q": len(lam)})
    closed = weights.rho_lambda_dim(lam)
    rep = {"lambda": list(lam), "expression": str(expr), "dim": dim, "closed_form": closed}
    lines = [f"rho_{lam} = {expr}", f"dim = {dim}"]
    _emit(args, rep, lines)
    return EXIT_OK if dim == closed else EXIT_FAIL


# fj -------------------------------------------------------------------------------------------------


def cmd_fj_theta(args) -> int:
    f = fj_from_json(load_file(args.file))
    print(dumps(fj_to_json(fjexp.theta_iterate(f, args.times))))
    return EXIT_OK


def cmd_fj_kernel(args) -> int:
    f = fj_from_json(load_file(args.file))
    support_test = fjexp.is_in_theta_kernel(f)
    theta_zero = not fjexp.theta(f).terms
    rep = {"support_in_pH": support_test, "theta_is_zero": theta_zero}
    lines = [f"support in p*H+: {support_test}", f"theta(f) = 0: {theta_zero}"]
    _emit(args, rep, lines)
    # the two tests must agree for m = 1 over F_(p^2)
    agree = support_test == theta_zero or f.m > 1 or f.ring.s > 1
    return EXIT_OK if agree else EXIT_FAIL


def cmd_fj_cycle(args) -> int:
    try:
        rep = fjexp.cycle_report(args.k0, args.i0, args.p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    lines = [
        "weights: " + " -> ".join(map(str, rep["weights"])),
        f"closes: {rep['closes']}",
        f"congruences mod p^2-1: {rep['congruences']}",
    ]
    _emit(args, rep, lines)
    return EXIT_OK if rep["closes"] and rep["congruences"] else EXIT_FAIL


def cmd_fj_mult(args) -> int:
    f = fj_from_json(load_file(args.file))
    g = fj_from_json(load_file(args.other))
    try:
        h = fjexp.multiply(f, g)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(dumps(fj_to_json(h)))
    return EXIT_OK


def cmd_fj_random(args) -> int:
    rng = random.Random(args.seed)
    try:
        f = fjexp.random_expansion(args.p, rng, m=args.m or 1, s=args.s, trunc=args.trunc, size=args.size)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(dumps(fj_to_json(f)))
    return EXIT_OK


# parser ------------------------------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("-p", "--p", type=int, default=5, help="odd prime (default 5)")
    c.add_argument("-s", type=int, default=1, help="Witt length (default 1)")
    c.add_argument("-n", type=int, default=None)
    c.add_argument("-m", type=int, default=None)
    c.add_argument("--seed", type=int, default=None, help=f"RNG seed (default {DEFAULT_SEED} or $MUTHETA_SEED)")
    c.add_argument("--trunc", type=int, default=100, help="trace bound for expansions")
    c.add_argument("--json", action="store_true", help="print the report as canonical JSON")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="mutheta", description=__doc__.split("\n\n")[0].strip())
    top = parser.add_subparsers(dest="group", required=True)

    space = top.add_parser("space", help="Dieudonne spaces").add_subparsers(dest="action", required=True)
    b = space.add_parser("build", parents=[common], help="print a model space as JSON")
    b.add_argument("--model", default="ao21", choices=sorted(dieudonne.MODELS))
    b.set_defaults(func=cmd_space_build, file=None)
    v = space.add_parser("verify", parents=[common], help="check the axioms of a space file")
    v.add_argument("file")
    v.set_defaults(func=cmd_space_verify)
    s = space.add_parser("show", parents=[common], help="describe a space")
    s.add_argument("file", nargs="?")
    s.add_argument("--model", default=None, choices=sorted(dieudonne.MODELS))
    s.add_argument("--derived", action="store_true", help="also print omega, P0, signature, Hasse data")
    s.set_defaults(func=cmd_space_show)

    deform = top.add_parser("deform", help="deformations at almost-ordinary points").add_subparsers(
        dest="action", required=True
    )
    c = deform.add_parser("check", parents=[common], help="Hasse family, KS and psi(du)")
    c.add_argument("--case", default="auto", choices=["auto", "I", "II", "n=m"])
    c.set_defaults(func=cmd_deform_check)
    a = deform.add_parser("audit", parents=[common], help="pole-order audit")
    a.add_argument("--weight", type=int, required=True)
    a.add_argument("--ramification", type=int, default=None, help="p^2-1 (default) or p-1")
    a.set_defaults(func=cmd_deform_audit)

    w = top.add_parser("weights", help="weight calculus").add_subparsers(dest="action", required=True)
    dk = w.add_parser("dk", parents=[common], help="sum-symmetry and target of D_kappa^kappa'")
    dk.add_argument("--kappa", required=True, help="a1,a2/b1,b2/c1,...")
    dk.add_argument("--kappa-prime", required=True, help="a'1,a'2/b'1,b'2/")
    dk.set_defaults(func=cmd_weights_dk)
    dm = w.add_parser("dim", parents=[common], help="dimension of rho_lambda")
    dm.add_argument("--lambda", dest="lam", required=True, help="comma separated, weakly decreasing")
    dm.set_defaults(func=cmd_weights_dim)

    fj = top.add_parser("fj", help="Fourier-Jacobi expansions").add_subparsers(dest="action", required=True)
    t = fj.add_parser("theta", parents=[common], help="apply theta to an expansion file")
    t.add_argument("file")
    t.add_argument("--times", type=int, default=1)
    t.set_defaults(func=cmd_fj_theta)
    k = fj.add_parser("kernel", parents=[common], help="is the expansion killed by theta?")
    k.add_argument("file")
    k.set_defaults(func=cmd_fj_kernel)
    cy = fj.add_parser("cycle", parents=[common], help="theta cycle model")
    cy.add_argument("--k0", type=int, required=True)
    cy.add_argument("--i0", type=int, required=True)
    cy.set_defaults(func=cmd_fj_cycle)
    mu = fj.add_parser("mult", parents=[common], help="product of two scalar expansions")
    mu.add_argument("file")
    mu.add_argument("other")
    mu.set_defaults(func=cmd_fj_mult)
    r = fj.add_parser("random", parents=[common], help="a random expansion")
    r.add_argument("--size", type=int, default=12)
    r.set_defaults(func=cmd_fj_random)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.seed = make_config(args).seed
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
