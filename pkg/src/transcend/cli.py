"""transcend <command> <spec.json> [flags]

Exit codes: 0 success, 1 usage or parse error, 2 mathematical failure,
3 precision or truncation exhaustion. Errors are also written to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import SingularPoint, TranscendError, UsageError
from .exactnum import to_fraction
from .measure import ValueVector, estimate_wd, liouville_scan
from .polyseries import MonomialBasis, MultiPoly, monomial_series
from .relations import buchberger, ledger, relation_kernel, specialize
from .siegel import (build_auxiliary, check_multiplicity,
                     mahler_step, target_valuation, theta_step)
from .specfile import load_spec, parse_multipoly
from .systems import (choose_ell, companion, extend_series, is_regular,
                      mahler_compose, monomial_system)

COMMANDS = ("series", "system", "regular", "pade", "iterate", "relations", "ledger",
            "multiplicity", "eval", "scan", "wd", "compose")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="transcend", description="Exact tools for E-functions, Mahler functions and polynomial scans at their values.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("spec", help="instance JSON file")
    p.add_argument("--precision", type=int, help="ball precision in bits")
    p.add_argument("--order", type=int, help="series truncation order")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategy", choices=("exhaustive", "lattice"), default="exhaustive")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--alpha", help="override the evaluation point (rational string)")
    # command-specific
    p.add_argument("--n", type=int, default=2, help="z-degree bound of auxiliary forms")
    p.add_argument("--vstar", type=int, help="target valuation (default from epsilon)")
    p.add_argument("--epsilon", help="epsilon for the default target valuation")
    p.add_argument("--degree", type=int, default=1, help="X-degree bound of the monomial basis")
    p.add_argument("--steps", type=int, default=3, help="number of Theta or Mahler steps")
    p.add_argument("--D", type=int, default=2, help="X-degree bound for relations")
    p.add_argument("--M", type=int, default=0, help="z-degree bound")
    p.add_argument("--N", type=int, default=2, help="X-degree bound for multiplicity trials")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--margin", type=int)
    p.add_argument("--delta", type=int, default=1)
    p.add_argument("--d", type=int, default=1, help="polynomial degree")
    p.add_argument("--P", help="polynomial as JSON [[exponents, coefficient], ...]")
    p.add_argument("--hmax", type=int, default=64)
    p.add_argument("--schedule", help="comma-separated heights for wd")
    p.add_argument("--ell", type=int, help="composition length")
    p.add_argument("--rho", help="convergence radius lower bound for choose_ell")
    p.add_argument("--order-name", dest="monomial_order", default="grlex",
                   choices=("lex", "grlex", "grevlex"))
    p.add_argument("--require-regular", action="store_true",
                   help="exit 2 when the point is singular")
    p.add_argument("--mode", choices=("certified", "heuristic"), default="certified")
    return p


def _series_json(s):
    return {"order": s.order, "coeffs": [str(c) for c in s.coeffs]}


def _alpha(spec, args):
    if args.alpha is not None:
        return spec.field.coerce(to_fraction(args.alpha))
    if spec.alpha is None:
        raise UsageError("this command needs an evaluation point alpha")
    return spec.alpha


def _t(spec):
    return spec.declared_t if spec.declared_t is not None else spec.m


def cmd_series(spec, args, params):
    order = params["order"]
    return {"series": {f.name: _series_json(extend_series(f, order)) for f in spec.functions}}


def cmd_system(spec, args, params):
    return {"companions": {f.name: companion(f).to_json() for f in spec.functions},
            "system": spec.linear_system().to_json(),
            "explicit": spec.system is not None}


def cmd_regular(spec, args, params):
    alpha = _alpha(spec, args)
    res = is_regular(spec.linear_system(), alpha, spec.embedding, params["precision"])
    if args.require_regular and not res:
        raise SingularPoint(f"alpha = {alpha} is singular for the system", **res.to_json())
    return {"alpha": str(alpha), **res.to_json()}


def _monomial_vector(spec, D, order):
    Y = spec.solution(order)
    basis = MonomialBasis(len(Y), D)
    return basis, monomial_series(basis, Y)


def _vstar(args, params, p, n):
    if args.vstar is not None:
        return args.vstar
    return target_valuation(p, n, to_fraction(params["epsilon"]))


def cmd_pade(spec, args, params):
    basis, _ = _monomial_vector(spec, args.degree, 1)
    p = basis.p
    vstar = _vstar(args, params, p, args.n)
    _, g = _monomial_vector(spec, args.degree, max(params["order"], vstar + 1))
    form, h = build_auxiliary(g, args.n, vstar, params["precision"])
    val = form.valuation(g)
    params.update(n=args.n, vstar=vstar, degree=args.degree)
    return {"form": form.to_json(), "height": str(h), "valuation": str(val), "p": p}


def cmd_iterate(spec, args, params):
    system = monomial_system(spec.linear_system(), args.degree)
    basis, _ = _monomial_vector(spec, args.degree, 1)
    vstar = _vstar(args, params, basis.p, args.n)
    order = max(params["order"], vstar + 1)
    _, g = _monomial_vector(spec, args.degree, order)
    form, h = build_auxiliary(g, args.n, vstar, params["precision"])
    trace = [{"k": 0, "valuation": str(form.valuation(g)), "height": str(h),
              "degree": form.degree}]
    for k in range(1, args.steps + 1):
        if system.kind == "differential":
            form = theta_step(form, system)
            extra = {}
        else:
            form, dpow = mahler_step(form, system)
            extra = {"clearing_power": dpow}
        trace.append({"k": k, "valuation": str(form.valuation(g)),
                      "height": str(form.height(params["precision"])),
                      "degree": form.degree, **extra})
    params.update(n=args.n, vstar=vstar, degree=args.degree, steps=args.steps)
    return {"trace": trace, "final": form.to_json()}


def cmd_relations(spec, args, params):
    basis = MonomialBasis(spec.m, args.D)
    order = args.order or max(4 * basis.p * (args.M + 1), 32)
    margin = args.margin or params["margin"]
    rel = relation_kernel(spec.functions, args.D, args.M, order, margin)
    out = {"relations": rel.to_json()}
    alpha = spec.alpha if args.alpha is None else _alpha(spec, args)
    if alpha is not None:
        spec_rel = specialize(rel, alpha)
        gb = buchberger(spec_rel, args.monomial_order)
        out["specialized"] = [Q.to_json() for Q in spec_rel]
        out["groebner"] = [Q.to_json() for Q in gb]
    params.update(D=args.D, M=args.M, order=order, margin=margin)
    return out


def _parse_P(spec, args):
    if args.P is None:
        return MultiPoly.variable(0, spec.m)
    try:
        data = json.loads(args.P)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--P is not valid JSON: {exc.msg}") from exc
    return parse_multipoly(data, spec.field, spec.m, "--P")


def cmd_ledger(spec, args, params):
    P = _parse_P(spec, args)
    L = ledger(spec.functions, P, args.delta, args.d, spec.value_relations,
               h=spec.field.degree, t=_t(spec), M=args.M, order=args.order,
               alpha=spec.alpha, relation_order=args.monomial_order)
    params.update(delta=args.delta, d=args.d, P=repr(P))
    return {"ledger": L.to_json()}


def cmd_multiplicity(spec, args, params):
    order = args.order or 256
    r = check_multiplicity(spec.functions, _t(spec), args.trials, args.M, args.N,
                           args.seed, order)
    params.update(M=args.M, N=args.N, trials=args.trials, seed=args.seed, order=order)
    return {"multiplicity": r.to_json()}


def _values(spec, args, params):
    return ValueVector.from_functions(spec.functions, _alpha(spec, args), params["precision"],
                                      args.mode, spec.embedding)


def cmd_eval(spec, args, params):
    w = _values(spec, args, params)
    return {"alpha": str(w.alpha), "values": {f.name: v.to_json()
                                              for f, v in zip(spec.functions, w.values)},
            "mode": w.mode}


def cmd_scan(spec, args, params):
    w = _values(spec, args, params)
    rep = liouville_scan(w, args.d, args.hmax, args.strategy, _t(spec), spec.value_relations)
    params.update(d=args.d, hmax=args.hmax, strategy=args.strategy)
    if args.format == "csv":
        return rep.to_csv()
    return {"scan": rep.to_json()}


def cmd_wd(spec, args, params):
    w = _values(spec, args, params)
    schedule = ([int(x) for x in args.schedule.split(",")] if args.schedule
                else [2 ** k for k in range(4, 13)])
    est = estimate_wd(w, args.d, schedule, _t(spec), spec.value_relations, args.strategy)
    params.update(d=args.d, schedule=schedule)
    return {"wd": est.to_json()}


def cmd_compose(spec, args, params):
    system = spec.linear_system()
    out = {}
    if system.kind != "mahler":
        raise UsageError("compose needs a mahler instance")
    if args.rho is not None or spec.alpha is not None:
        rho = to_fraction(args.rho) if args.rho else _default_rho(spec)
        if rho is not None and spec.alpha:
            out["ell"] = choose_ell(rho, _alpha(spec, args), system.q, spec.field,
                                    spec.embedding, params["precision"])
            out["rho"] = str(rho)
    ell = args.ell or out.get("ell", 1)
    composed = mahler_compose(system, ell)
    out["composed"] = composed.to_json()
    out["regular"] = is_regular(composed, _alpha(spec, args), spec.embedding,
                                params["precision"]).to_json() if spec.alpha else None
    params.update(ell=ell)
    return out


def _default_rho(spec):
    gs = [f.growth_bound("g") for f in spec.functions]
    if any(g is None for g in gs):
        return None
    return min(1 / g for g in gs)


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        spec = load_spec(args.spec)
        params = {
            "precision": args.precision or int(spec.default("precision")),
            "order": args.order or int(spec.default("order")),
            "margin": int(spec.default("margin")),
            "epsilon": str(args.epsilon or spec.default("epsilon")),
            "seed": args.seed,
        }
        result = HANDLERS[args.command](spec, args, params)
        if isinstance(result, str):
            text = result
        else:
            report = {"schema": 1, "command": args.command, "instance": spec.name,
                      "parameters": params, **result}
            text = json.dumps(report, indent=1, sort_keys=False, default=_json_default) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        return 0
    except TranscendError as exc:
        stderr.write(json.dumps(exc.to_json(), default=str) + "\n")
        return exc.exit_code


def _json_default(x):
    return str(x)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

