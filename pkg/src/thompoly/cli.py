"""Command-line front end.

Exit status: 0 on success, 1 when a mathematical check fails (a candidate
fails verification, a class is not in the avoiding ideal, inconsistent
equations, invalid scalar data), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import kazarian, projective, repmodel, solver
from .polyring import GradedPolynomial, parse_polynomial
from .symfunc import DegreeMultiset

# desk-scale limits; --force lifts them
LIMITS = {
    "porteous": {"n": 6, "k": 4},
    "antisymmetric": {"n": 8},
    "symmetric": {"n": 7},
    "gl2": {"n": 12},
    "contact": {"k": 3, "m": 6},
}


class UsageError(Exception):
    pass


class MathFailure(Exception):
    pass


def _read_arg(value: str) -> str:
    """``@path`` reads the text from a file."""
    if value.startswith("@"):
        try:
            return Path(value[1:]).read_text()
        except OSError as e:
            raise UsageError(f"cannot read {value[1:]}: {e.strerror}") from None
    return value


def _polynomial(value: str, alphabet) -> GradedPolynomial:
    text = _read_arg(value).strip()
    try:
        if text.startswith("["):
            return GradedPolynomial.from_json(alphabet, json.loads(text))
        return parse_polynomial(text, alphabet)
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"cannot parse polynomial: {e}") from None


def _json_arg(value: str):
    try:
        return json.loads(_read_arg(value))
    except json.JSONDecodeError as e:
        raise UsageError(f"invalid JSON: {e}") from None


# -- model selection ---------------------------------------------------------------------


def _add_model_args(p: argparse.ArgumentParser, orbit: bool = True):
    p.add_argument("model", help="catalog name (porteous, antisymmetric, symmetric, gl2, contact) "
                                 "or path to a model JSON file")
    p.add_argument("--n", type=int, help="rank / size parameter")
    p.add_argument("--k", type=int, help="relative dimension (porteous, contact)")
    p.add_argument("--m", type=int, help="contact: A_m index (also the largest orbit built)")
    if orbit:
        p.add_argument("--s", type=int, help="porteous: corank of the orbit")
        p.add_argument("--r", type=int, help="bilinear forms: corank of the orbit")
        p.add_argument("--orbit", help="orbit name (overrides --s/--r/--m)")
    p.add_argument("--force", action="store_true", help="ignore the desk-scale parameter limits")


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"{args.model} needs --{name}")


def _load(args) -> repmodel.RepresentationModel:
    name = args.model
    if name not in repmodel.CATALOGS:
        path = Path(name)
        if not path.exists():
            raise UsageError(f"unknown catalog or missing model file: {name}")
        try:
            return repmodel.load_model(path.read_text())
        except OSError as e:
            raise UsageError(f"cannot read {name}: {e.strerror}") from None
        except repmodel.ModelError as e:
            raise UsageError(f"invalid model file {name}: {e}") from None
    params = {}
    if name == "porteous":
        _need(args, "n")
        params = {"n": args.n, "k": args.k or 0}
    elif name in ("antisymmetric", "symmetric", "gl2"):
        _need(args, "n")
        params = {"n": args.n}
    elif name == "contact":
        _need(args, "m")
        params = {"k": args.k or 0, "m": args.m}
    if not args.force:
        for key, bound in LIMITS[name].items():
            if params[key] > bound:
                raise UsageError(f"{key}={params[key]} exceeds the limit {bound} for {name}; use --force")
    try:
        return repmodel.build_catalog(name, **params)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _orbit(args, model) -> str:
    if getattr(args, "orbit", None):
        name = args.orbit
    else:
        catalog = model.params.get("catalog")
        if catalog == "porteous":
            _need(args, "s")
            name = f"Sigma_{args.s}"
        elif catalog in ("antisymmetric", "symmetric"):
            _need(args, "r")
            name = f"Sigma^{args.r}"
        elif catalog == "gl2":
            name = "eta_0"
        elif catalog == "contact":
            name = f"A_{args.m}"
        else:
            raise UsageError("model files need --orbit")
    try:
        model.orbit(name)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None
    return name


# -- output ----------------------------------------------------------------------------


def _emit(args, doc, text: str):
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def _report_text(report: solver.VerifyReport) -> str:
    lines = [f"{report.orbit}: {'PASS' if report.passed else 'FAIL'}"]
    for c in report.checks:
        mark = "pass" if c.passed else "FAIL"
        extra = "" if c.passed else f"  residual {c.residual}"
        lines.append(f"  {mark}  {c.kind:15s} {c.orbit}{extra}")
    return "\n".join(lines)


# -- commands --------------------------------------------------------------------------


def cmd_catalog(args):
    if args.action == "list":
        _emit(args, [{"name": k, "description": v} for k, v in repmodel.CATALOGS.items()],
              "\n".join(f"{k:14s} {v}" for k, v in repmodel.CATALOGS.items()))
        return 0
    model = _load(args)
    lines = [model.name + (" (partial)" if model.partial else "")]
    lines.append("ambient: " + ", ".join(f"{v.name}[{v.degree}]" for v in model.ambient.variables))
    for o in model.orbits:
        lines.append(f"  {o.name}: codim {o.codim}; stabilizer {', '.join(o.stabilizer.names)}")
        lines.append(f"    euler: {o.euler if o.euler is not None else '-'}")
    _emit(args, repmodel.serialize(model), "\n".join(lines))
    return 0


def cmd_tp(args):
    model = _load(args)
    orbit = _orbit(args, model)
    res = solver.solve_tp(model, orbit, include_principal=not args.no_principal)
    doc = res.to_json()
    doc["status"] = res.status
    text = [f"tp({orbit}) = {res.polynomial}"]
    if not res.unique:
        text.append(f"non-unique: kernel dimension {res.kernel_dimension}")
        text.extend(f"  kernel: {k}" for k in res.kernel)
    text.append(f"equations {res.num_equations}, unknowns {res.num_unknowns}, "
                f"orbits used: {', '.join(res.orbits_used)}")
    if args.quotient:
        try:
            q = solver.quotient_reduce(res.polynomial)
        except KeyError:
            raise UsageError("quotient variables need 'source' and 'target' factors") from None
        doc["quotient"] = {"status": q.status,
                           "polynomial": None if q.polynomial is None else q.polynomial.to_json()}
        text.append(f"in quotient variables: {q.polynomial if q.in_subring else 'not in subring'}"
                    + (" (rank-truncated)" if q.rank_truncated else ""))
    _emit(args, doc, "\n".join(text))
    return 0


def cmd_verify(args):
    model = _load(args)
    orbit = _orbit(args, model)
    cand = _polynomial(args.candidate, model.ambient)
    try:
        report = solver.verify_tp(model, orbit, cand)
    except solver.SolverError as e:
        raise UsageError(str(e)) from None
    _emit(args, report.to_json(), _report_text(report))
    return 0 if report.passed else 1


def cmd_restrict(args):
    model = _load(args)
    orbit = _orbit(args, model)
    p = _polynomial(args.poly, model.ambient)
    img = solver.restrict(model, orbit, p)
    _emit(args, {"orbit": orbit, "polynomial": img.to_json()}, str(img))
    return 0


def cmd_ideal(args):
    model = _load(args)
    orbit = _orbit(args, model)
    p = _polynomial(args.poly, model.ambient)
    try:
        member, witness = solver.avoiding_ideal_contains(model, orbit, p)
    except solver.SolverError as e:
        raise UsageError(str(e)) from None
    doc = {"orbit": orbit, "member": member,
           "witness": None if witness is None else {"orbit": witness[0], "residual": witness[1].to_json()}}
    text = "member" if member else f"not a member: restriction to {witness[0]} is {witness[1]}"
    _emit(args, doc, text)
    return 0 if member else 1


def _scalar_data(args, model) -> projective.ScalarData:
    if args.weights:
        return projective.ScalarData.from_json(_json_arg(args.weights))
    return projective.preset(model, args.preset)


def cmd_projective(args):
    model = _load(args)
    orbit = _orbit(args, model)
    sd = _scalar_data(args, model)
    p = projective.projective_tp(model, orbit, sd)
    coeffs = projective.xi_coefficients(p)
    doc = {"orbit": orbit, "scalar_data": sd.to_json(), "polynomial": p.to_json(),
           "xi_coefficients": [c.to_json() for c in coeffs],
           "codim_below_dimension": projective.codim_below_dimension(model, orbit)}
    text = f"ptp({orbit}) = {p}"
    if doc["codim_below_dimension"] is False:
        text += "\n(note: codimension is not below dim V)"
    _emit(args, doc, text)
    return 0


def cmd_degree(args):
    model = _load(args)
    orbit = _orbit(args, model)
    sd = _scalar_data(args, model)
    deg = projective.degree(model, orbit, sd)
    _emit(args, {"orbit": orbit, "scalar_data": sd.to_json(), "degree": deg}, str(deg))
    return 0


def _columns(args) -> list[kazarian.ColumnSpec]:
    if args.columns:
        doc = _json_arg(args.columns)
        cols = doc.get("columns") if isinstance(doc, dict) else doc
        if not isinstance(cols, list):
            raise UsageError("columns document needs a 'columns' list")
        try:
            return [kazarian.ColumnSpec.from_json(c) for c in cols]
        except (kazarian.SpectralError, ValueError) as e:
            raise UsageError(str(e)) from None
    if args.builtin == "corank":
        return kazarian.corank_columns(args.s_max, args.k or 0)
    if args.builtin == "singularity":
        return kazarian.singularity_columns(args.s_max)
    raise UsageError("give --columns or --builtin")


def _ambient(args) -> DegreeMultiset:
    if args.ambient in (None, "all"):
        return DegreeMultiset.all_degrees()
    try:
        return DegreeMultiset.from_json(_json_arg(args.ambient))
    except (TypeError, ValueError) as e:
        raise UsageError(f"bad ambient degrees: {e}") from None


def cmd_kazarian(args):
    if args.action == "euler":
        results = {n: kazarian.euler_identity_check(n) for n in range(args.n_min, args.n + 1)}
        ok = all(results.values())
        _emit(args, {"results": {str(n): v for n, v in results.items()}, "pass": ok},
              "\n".join(f"n={n}: {'holds' if v else 'fails'}" for n, v in results.items()))
        return 0 if ok else 1
    cols = _columns(args)
    if args.action == "ranks":
        table = kazarian.e1_ranks(cols, args.max_t)
        _emit(args, table.to_json(), table.render(by_fiber=args.by_fiber))
        return 0
    ambient = _ambient(args)
    if args.action == "check":
        res = kazarian.diagonal_check(cols, ambient, args.max_t)
        ok = not any(res)
        _emit(args, {"residuals": res, "consistent": ok},
              "\n".join(f"t={t}: residual {r}" for t, r in enumerate(res)))
        return 0 if ok else 1
    if args.target is None:
        raise UsageError("predict needs --target")
    count = kazarian.predict_stratum_count(cols, ambient, args.target)
    _emit(args, {"target_codim": args.target, "count": count}, str(count))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thompoly", description="Thom polynomials by restriction equations")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", parents=[common], help="list catalogs or show a model")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("model", nargs="?")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("tp", parents=[common], help="solve for a Thom polynomial")
    _add_model_args(p)
    p.add_argument("--quotient", action="store_true", help="also express in quotient variables h_i")
    p.add_argument("--no-principal", action="store_true", help="use the homogeneous equations only")
    p.set_defaults(func=cmd_tp)

    p = sub.add_parser("verify", parents=[common], help="check a candidate against the restriction equations")
    _add_model_args(p)
    p.add_argument("--candidate", required=True, help="polynomial (JSON terms, text, or @file)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("restrict", parents=[common], help="restrict a class to an orbit")
    _add_model_args(p)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("ideal-member", parents=[common], help="avoiding-ideal membership")
    _add_model_args(p)
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_ideal)

    for name, func, helptext in (("projective", cmd_projective, "projective Thom polynomial"),
                                 ("degree", cmd_degree, "degree of the projectivized orbit closure")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _add_model_args(p)
        p.add_argument("--preset", choices=projective.PRESETS)
        p.add_argument("--weights", help='scalar data JSON {"q": int, "weights": {factor: [...]}}')
        p.set_defaults(func=func)

    p = sub.add_parser("kazarian", parents=[common], help="spectral-sequence rank bookkeeping")
    p.add_argument("action", choices=("ranks", "check", "predict", "euler"))
    p.add_argument("--columns", help='JSON {"columns": [{"codim", "degrees", "multiplicity"}]} or @file')
    p.add_argument("--builtin", choices=("corank", "singularity"))
    p.add_argument("--s-max", type=int, default=3, help="largest corank / codim of the built-in columns")
    p.add_argument("--k", type=int)
    p.add_argument("--ambient", help='"all" (default) or a JSON degree list')
    p.add_argument("--max-t", type=int, default=8)
    p.add_argument("--by-fiber", action="store_true", help="rows by fiber degree instead of total degree")
    p.add_argument("--target", type=int)
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--n-min", type=int, default=1)
    p.set_defaults(func=cmd_kazarian)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "catalog" and args.action == "show" and not args.model:
            raise UsageError("catalog show needs a model")
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (solver.SolverError, projective.ProjectiveError, kazarian.SpectralError) as e:
        print(f"failed: {e}", file=sys.stderr)
        return 1


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
