"""Command-line front end.

    nefcone check   MODEL --class NAME        psef / nef / big / nef_codim
    nefcone mult    MODEL --class NAME --stratum 1,2
    nefcone table   MODEL --class NAME        multiplicity of every stratum
    nefcone zariski MODEL --class NAME
    nefcone cone    MODEL --codim K [--facets | --generators]
    nefcone example NAME [--emit | --selftest] [--param k=2 ...]

Exit codes: 0 success (a non-psef answer is a success), 1 usage, parse or
lookup error, 2 model validation error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bundle_model as bm
from . import examples, polycone
from .bundle_model import BundleClass, BundleModel, ModelError, NotPsefError, Stratum
from .modelfile import ModelFileError, ModelValidationError, dumps, parse_model, rat, serialize_model
from .ratlp import as_rational, dot, vadd, vscale

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


def _vec(v):
    return [rat(e) for e in v]


def _class_doc(a: BundleClass):
    return {"beta": _vec(a.beta), "lambda": rat(a.lam)}


def _lp_cert(label, lp, outcome):
    return {"label": label, "lp": lp.to_dict(), "outcome": outcome.to_dict()}


def parse_coeffs(text: str) -> BundleClass:
    """``"b1,b2;lam"`` -> class."""
    if ";" not in text:
        raise UsageError(f'--coeffs needs the form "beta1,...;lambda", got {text!r}')
    left, right = text.split(";", 1)
    try:
        beta = tuple(as_rational(t) for t in left.split(",") if t.strip())
        return BundleClass(beta, as_rational(right))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --coeffs: {exc}") from None


def _resolve_class(model: BundleModel, classes, args) -> tuple[str, BundleClass]:
    if args.coeffs is not None:
        alpha = parse_coeffs(args.coeffs)
        label = args.coeffs
    elif args.class_name is not None:
        if args.class_name not in classes:
            raise UsageError(f"unknown class {args.class_name!r}; known: {sorted(classes)}")
        alpha, label = classes[args.class_name], args.class_name
    else:
        raise UsageError("give --class NAME or --coeffs")
    try:
        model.check_class(alpha)
    except ModelError as exc:
        raise UsageError(str(exc)) from None
    return label, alpha


def _nef_evidence(model: BundleModel, alpha: BundleClass):
    points = [vadd(alpha.beta, vscale(alpha.lam, l)) for l in model.fibers]
    out = {"lambda": rat(alpha.lam), "vertex_points": [_vec(p) for p in points]}
    viol = bm.nef_violation(model, alpha)
    if viol is not None:
        i, f = viol
        out["violation"] = {"vertex": i, "facet": _vec(f), "value": rat(dot(f, points[i]))}
    return out


def _big_evidence(model: BundleModel, alpha: BundleClass):
    cone = model.psef_cone
    return {
        "psef_facets": [_vec(f) for f in cone.facets],
        "values": [rat(dot(f, alpha.coords)) for f in cone.facets],
        "full_dimensional": polycone.is_full_dimensional(cone),
    }


def _mult_doc(res: bm.MultiplicityResult):
    if not res.is_value:
        return {"status": res.status.value}
    return {
        "status": res.status.value,
        "nu": rat(res.nu),
        "witness": {
            "u": {str(i): rat(w) for i, w in res.u.items()},
            "v": {str(j): rat(w) for j, w in res.v.items()},
            "nef_point": _vec(res.nef_point),
        },
    }


def _codim_doc(value):
    return value.value if isinstance(value, bm.MultStatus) else value


def cmd_check(model, alpha, args):
    ps = bm.is_psef(model, alpha)
    result = {
        "psef": ps.psef,
        "nef": bm.is_nef(model, alpha),
        "big": bm.is_big(model, alpha),
        "nef_codim": _codim_doc(bm.nef_codim(model, alpha)),
    }
    if ps.psef:
        result["psef_witness"] = {"weights": _vec(ps.weights), "nef_point": _vec(ps.nef_point)}
    certs = [_lp_cert("psef", ps.lp, ps.outcome)]
    if ps.psef:
        for s in model.strata():
            res = bm.min_multiplicity(model, alpha, s)
            certs.append(_lp_cert(f"mult {s.label()}", res.lp, res.outcome))
    extra = {"nef": _nef_evidence(model, alpha), "big": _big_evidence(model, alpha)}
    return result, certs, extra


def cmd_mult(model, alpha, args):
    if args.stratum is None:
        raise UsageError("mult needs --stratum i,j,...")
    try:
        s = Stratum.parse(args.stratum)
        res = bm.min_multiplicity(model, alpha, s)
    except (ValueError, ModelError) as exc:
        raise UsageError(f"bad stratum {args.stratum!r}: {exc}") from None
    result = {"stratum": list(s.indices), **_mult_doc(res)}
    return result, [_lp_cert(f"mult {s.label()}", res.lp, res.outcome)], {}


def cmd_table(model, alpha, args):
    ps = bm.is_psef(model, alpha)
    if not ps.psef:
        return {"status": bm.NOT_PSEF.value}, [_lp_cert("psef", ps.lp, ps.outcome)], {}
    rows, certs = [], []
    for s in model.strata():
        res = bm.min_multiplicity(model, alpha, s)
        rows.append({"stratum": list(s.indices), "codim": s.codim, "nu": rat(res.nu)})
        certs.append(_lp_cert(f"mult {s.label()}", res.lp, res.outcome))
    locus = [r["stratum"] for r in rows if as_rational(r["nu"]) > 0]
    return {"status": "value", "strata": rows, "non_nef_locus": locus}, certs, {}


def cmd_zariski(model, alpha, args):
    certs = []
    for i in range(model.r + 1):
        res = bm.min_multiplicity(model, alpha, Stratum((i,)))
        certs.append(_lp_cert(f"mult {i}", res.lp, res.outcome))
    try:
        z = bm.zariski(model, alpha)
    except NotPsefError:
        return {"status": bm.NOT_PSEF.value}, certs, {}
    result = {
        "status": "value",
        "coefficients": _vec(z.coefficients),
        "negative": _class_doc(z.negative),
        "projection": _class_doc(z.projection),
        "projection_nef": bm.is_nef(model, z.projection),
    }
    return result, certs, {}


def cmd_cone(model, args):
    if args.codim is None:
        raise UsageError("cone needs --codim K")
    try:
        cone = bm.positivity_cone(model, args.codim)
    except ModelError as exc:
        raise UsageError(str(exc)) from None
    result = {"codim": args.codim}
    if args.facets or not args.generators:
        result["facets"] = [_vec(f) for f in cone.facets]
    if args.generators or not args.facets:
        result["generators"] = [_vec(g) for g in cone.generators]
    return result


def _example_params(pairs):
    params = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"--param needs key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            params[k.strip()] = int(v) if k.strip() in ("k", "g", "p", "q") else as_rational(v)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --param {item!r}: {exc}") from None
    return params


def run_example(args, out) -> int:
    try:
        inst = examples.build_named(args.name, **_example_params(args.param))
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad example parameters: {exc}") from None
    if args.selftest:
        report = examples.verify_expectations(inst)
        ok = all(r.passed for r in report)
        if args.json:
            doc = {
                "query": "example-selftest",
                "inputs": {"name": inst.name},
                "result": {
                    "passed": ok,
                    "checks": [
                        {"check": r.expectation.describe(), "passed": r.passed,
                         "computed": examples._fmt(r.computed),
                         "expected": examples._fmt(r.expectation.expected)}
                        for r in report
                    ],
                },
            }
            out.write(dumps(doc) + "\n")
        else:
            for r in report:
                out.write(r.line() + "\n")
            out.write(f"{inst.name}: {'all passed' if ok else 'FAILED'}\n")
        return EXIT_OK if ok else EXIT_USAGE
    out.write(dumps(serialize_model(inst.model, inst.classes)) + "\n")
    return EXIT_OK


def _print_human(query, result, out):
    out.write(f"{query}:\n")
    for key in sorted(result):
        value = result[key]
        if key == "strata":
            for row in value:
                out.write(f"  I={{{','.join(map(str, row['stratum']))}}}  codim={row['codim']}  nu={row['nu']}\n")
        elif isinstance(value, list) and value and isinstance(value[0], list):
            out.write(f"  {key}:\n")
            for v in value:
                out.write(f"    ({', '.join(map(str, v))})\n")
        elif isinstance(value, (dict, list)):
            out.write(f"  {key}: {json.dumps(value, sort_keys=True)}\n")
        else:
            out.write(f"  {key}: {value}\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nefcone", description="Positivity of classes on split projective bundles.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_class=True):
        sp.add_argument("model", help="model JSON file")
        if needs_class:
            sp.add_argument("--class", dest="class_name")
            sp.add_argument("--coeffs", help='explicit class "beta1,...;lambda"')
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--certificates", action="store_true")

    for name in ("check", "table", "zariski"):
        common(sub.add_parser(name))
    mp = sub.add_parser("mult")
    common(mp)
    mp.add_argument("--stratum")
    cp = sub.add_parser("cone")
    common(cp, needs_class=False)
    cp.add_argument("--codim", type=int)
    cp.add_argument("--facets", action="store_true")
    cp.add_argument("--generators", action="store_true")
    ep = sub.add_parser("example")
    ep.add_argument("name", choices=sorted(examples.REGISTRY))
    mode = ep.add_mutually_exclusive_group()
    mode.add_argument("--emit", action="store_true")
    mode.add_argument("--selftest", action="store_true")
    ep.add_argument("--param", action="append", metavar="KEY=VALUE")
    ep.add_argument("--json", action="store_true")
    return p


COMMANDS = {"check": cmd_check, "mult": cmd_mult, "table": cmd_table, "zariski": cmd_zariski}


def execute(args, model: BundleModel, classes) -> dict:
    """Run a parsed query against ``model``; returns the result document."""
    if args.command == "cone":
        return {"query": "cone", "inputs": {"codim": args.codim}, "result": cmd_cone(model, args)}
    label, alpha = _resolve_class(model, classes, args)
    result, certs, extra = COMMANDS[args.command](model, alpha, args)
    inputs = {"class": label, "value": _class_doc(alpha)}
    if args.command == "mult":
        inputs["stratum"] = args.stratum
    doc = {"query": args.command, "inputs": inputs, "result": result}
    if args.certificates:
        doc["certificates"] = {"lp": certs, **extra}
    return doc


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "example":
            return run_example(args, out)
        model, classes = parse_model(args.model)
        doc = execute(args, model, classes)
    except ModelFileError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ModelValidationError as exc:
        err.write(f"invalid model: {exc}\n")
        return EXIT_INVALID
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    if args.json:
        out.write(dumps(doc) + "\n")
    else:
        _print_human(doc["query"], doc["result"], out)
        if "certificates" in doc:
            out.write(f"  certificates: {len(doc['certificates']['lp'])} LP outcome(s); use --json to see them\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
