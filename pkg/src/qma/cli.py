"""Command-line interface: ``qma <subcommand> [options]``.

Exit codes: 0 success, 1 the mathematical statement is false, 2 usage or
input error, 3 rewriting step cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import analysis, lattice, repmod, structure
from .errors import NotQNormal, QMAError, StepCapExceeded
from .ncalg import check_confluence, load_presentation
from .scalar import make_field

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _field(args):
    if args.m is None:
        raise UsageError("--m is required")
    if args.field == "prime" and args.p is None:
        raise UsageError("--field prime needs --p")
    return make_field(args.field, args.m, args.p if args.field == "prime" else None)


def _algebra(args):
    if Path(args.algebra).exists():
        return load_presentation(args.algebra)
    return load_presentation(args.algebra, _field(args))


def _inputs(args, *names):
    d = {"algebra": args.algebra, "field": args.field, "m": args.m}
    if args.field == "prime":
        d["p"] = args.p
    for nm in names:
        d[nm] = getattr(args, nm)
    return d


# -- subcommand handlers: each returns (exit_code, report, text) -------------


def cmd_normalize(args):
    P = _algebra(args)
    x = P.parse(args.expr)
    text = P.format(x)
    return EXIT_OK, {"inputs": _inputs(args, "expr"), "result": text}, text


def cmd_central(args):
    P = _algebra(args)
    z = P.parse(args.expr)
    ok = structure.is_central(z, P)
    report = {"inputs": _inputs(args, "expr"), "result": ok}
    if not ok:
        for name in P.names:
            g = P.x(name)
            c = P.normalize(z * g - g * z)
            if c:
                report["witness"] = {"generator": name, "commutator": P.format(c)}
                break
    return (EXIT_OK if ok else EXIT_FALSE), report, f"central: {str(ok).lower()}"


def cmd_qnormal(args):
    P = _algebra(args)
    z = P.parse(args.expr)
    try:
        prof = structure.q_normal_profile(z, P)
    except NotQNormal as exc:
        return EXIT_FALSE, {"inputs": _inputs(args, "expr"), "result": None, "witness": str(exc)}, str(exc)
    text = "\n".join(f"{g}: {e}" for g, e in prof.items())
    return EXIT_OK, {"inputs": _inputs(args, "expr"), "result": prof}, text


def _identity_worker(job):
    family, index, r, backend, m, p, corrected = job
    from .ncalg import builtin_presentation

    F = make_field(backend, m, p)
    P = builtin_presentation("dd2" if family == "dd" else "rea2", F)
    return structure.verify_power_identity(family, index, r, P, corrected)


def cmd_identity(args):
    F = _field(args)
    allowed = ("i", "ii") if args.family == "dd" else ("i", "ii", "iii", "iv")
    if args.index not in allowed:
        raise UsageError(f"--index for {args.family} must be one of {', '.join(allowed)}")
    if args.max_r < 1:
        raise UsageError("--max-r must be >= 1")
    jobs = [(args.family, args.index, r, F.backend.value, F.m, F.p, args.corrected) for r in range(1, args.max_r + 1)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_identity_worker, jobs))
    else:
        results = [_identity_worker(j) for j in jobs]
    per_r = {str(r): ok for r, ok in zip(range(1, args.max_r + 1), results)}
    ok = all(results)
    inputs = _inputs(args, "family", "index", "max_r", "corrected")
    inputs["algebra"] = "dd2" if args.family == "dd" else "rea2"
    report = {"inputs": inputs, "result": ok, "per_r": per_r}
    if not ok:
        report["witness"] = {"first_failing_r": next(r for r, v in zip(range(1, args.max_r + 1), results) if not v)}
    text = "\n".join(f"r={r}: {'holds' if v else 'FAILS'}" for r, v in per_r.items())
    return (EXIT_OK if ok else EXIT_FALSE), report, text


def cmd_confluence(args):
    P = _algebra(args)
    amb = check_confluence(P)
    items = [
        {"word": P.word_str(a.word), "left": P.format(a.left), "right": P.format(a.right)} for a in amb
    ]
    report = {"inputs": _inputs(args), "result": not items}
    if items:
        report["witness"] = items
    text = "confluent" if not items else "\n".join(f"{i['word']}: {i['left']}  vs  {i['right']}" for i in items)
    return (EXIT_OK if not items else EXIT_FALSE), report, text


def cmd_pideg(args):
    if (args.dd_n is None) == (args.matrix is None):
        raise UsageError("pideg needs exactly one of --dd-n or --matrix")
    if args.m is None:
        raise UsageError("--m is required")
    if args.dd_n is not None:
        val = lattice.pi_degree_dd(args.dd_n, args.m)
        closed = lattice.pi_degree_dd_closed_form(args.dd_n, args.m)
        report = {"inputs": {"dd_n": args.dd_n, "m": args.m}, "result": val, "closed_form": closed}
        code = EXIT_OK if val == closed else EXIT_FALSE
        return code, report, str(val)
    H = lattice.parse_matrix(Path(args.matrix).read_text(encoding="utf-8"))
    h = lattice.image_cardinality_mod(H, args.m)
    val = lattice.pi_degree(H, args.m)
    snf = lattice.smith_normal_form(H)
    report = {
        "inputs": {"matrix": args.matrix, "m": args.m},
        "result": val,
        "image_cardinality": h,
        "invariant_factors": snf.invariant_factors,
    }
    return EXIT_OK, report, str(val)


def _load_spec(path, args):
    spec = repmod.load_json(path)
    if "matrices" in spec:
        return repmod.import_representation(spec)
    if "field" not in spec and args.field == "prime":
        spec = dict(spec, field="prime", prime=args.p)
    return repmod.build_from_spec(spec)


def cmd_module_build(args):
    R = _load_spec(args.params, args)
    data = repmod.export_representation(R)
    if args.out:
        Path(args.out).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    report = {"inputs": {"params": args.params, "out": args.out}, "result": {"dim": R.dim, "family": R.family}}
    if not args.out:
        report["representation"] = data
    return EXIT_OK, report, json.dumps(data, indent=1, sort_keys=True) if not args.out else f"dim {R.dim} -> {args.out}"


def cmd_module_verify(args):
    R = _load_spec(args.inp, args)
    bad = repmod.verify_relations(R)
    report = {"inputs": {"in": args.inp}, "result": {"dim": R.dim, "violations": bad}}
    text = "all relations hold" if not bad else "\n".join(f"violated: {b}" for b in bad)
    return (EXIT_OK if not bad else EXIT_FALSE), report, text


def cmd_module_analyze(args):
    path = args.inp or args.params
    if not path or (args.inp and args.params):
        raise UsageError("module-analyze needs exactly one of --in or --params")
    R = _load_spec(path, args)
    gdim = analysis.generated_algebra_dim(R)
    simple = gdim == R.dim * R.dim
    C = analysis.commutant(R)
    result = {
        "family": R.family,
        "dim": R.dim,
        "generated_algebra_dim": gdim,
        "simple": simple,
        "commutant_dim": C.dim,
    }
    witness = None
    try:
        cert = analysis.indecomposability_certificate(R, C)
        result["radical_dim"] = cert.data["dim_radical"]
        result["indecomposable"] = {"Indecomposable": True, "Decomposable": False}.get(cert.kind)
        result["certificate"] = cert.kind
        result["semisimple"] = True if simple else analysis.is_semisimple(R)
        if cert.witness is not None:
            witness = {"idempotent": [[str(x) for x in row] for row in cert.witness.to_dense()]}
    except QMAError as exc:
        result["certificate"] = f"unavailable: {exc}"
    sub = None if simple else analysis.find_proper_submodule(R)
    if sub is not None:
        result["proper_submodule_dim"] = sub.dim
    report = {"inputs": {"in": path}, "result": result}
    if witness:
        report["witness"] = witness
    text = "\n".join(f"{k}: {json.dumps(v)}" for k, v in result.items())
    return EXIT_OK, report, text


def cmd_module_iso(args):
    A = _load_spec(args.a, args)
    B = _load_spec(args.b, args)
    iso = repmod.is_isomorphic(A, B, seed=args.seed)
    result = {"isomorphic": iso, "intertwiner_dim": len(repmod.intertwiners(A, B))}
    if A.family == B.family and A.family.startswith("dd-") and A.field == B.field:
        result["parameter_criterion"] = repmod.dd_iso_param_check(A.family, A.params, B.params)
    report = {"inputs": {"a": args.a, "b": args.b, "seed": args.seed}, "result": result}
    return (EXIT_OK if iso else EXIT_FALSE), report, f"isomorphic: {str(iso).lower()}"


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", default="dd2", help="built-in name (dd2, ddN, rea2) or presentation file")
    common.add_argument("--field", choices=("cyclotomic", "prime"), default="cyclotomic")
    common.add_argument("--m", type=int, help="order of the root of unity q")
    common.add_argument("--p", type=int, help="prime for the prime-field backend")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)

    ap = argparse.ArgumentParser(prog="qma", description="Quantized matrix algebras at roots of unity.")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (
        ("normalize", cmd_normalize, "PBW normal form of an expression"),
        ("central", cmd_central, "test whether an element is central"),
        ("qnormal", cmd_qnormal, "q-commutation exponents of an element"),
    ):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("-e", "--expr", required=True)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("identity", parents=[common], help="check a power identity for r = 1..R")
    sp.add_argument("--family", choices=("dd", "rea"), required=True)
    sp.add_argument("--index", choices=("i", "ii", "iii", "iv"), required=True)
    sp.add_argument("--max-r", type=int, default=8)
    sp.add_argument("--corrected", action="store_true", help="use the derived coefficient for rea (iii)")
    sp.set_defaults(func=cmd_identity)

    sp = sub.add_parser("confluence", parents=[common], help="overlap check of the rewrite rules")
    sp.set_defaults(func=cmd_confluence)

    sp = sub.add_parser("pideg", parents=[common], help="PI degree via Smith normal form")
    sp.add_argument("--dd-n", type=int)
    sp.add_argument("--matrix")
    sp.set_defaults(func=cmd_pideg)

    sp = sub.add_parser("module-build", parents=[common], help="build a module from a parameter file")
    sp.add_argument("--params", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_module_build)

    sp = sub.add_parser("module-verify", parents=[common], help="check the defining relations on a module")
    sp.add_argument("--in", dest="inp", required=True)
    sp.set_defaults(func=cmd_module_verify)

    sp = sub.add_parser("module-analyze", parents=[common], help="simplicity and indecomposability report")
    sp.add_argument("--in", dest="inp")
    sp.add_argument("--params")
    sp.set_defaults(func=cmd_module_analyze)

    sp = sub.add_parser("module-iso", parents=[common], help="isomorphism test via intertwiners")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.set_defaults(func=cmd_module_iso)
    return ap


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        code, report, text = args.func(args)
    except StepCapExceeded as exc:
        print(f"qma: step cap exceeded: {exc}", file=stderr)
        return EXIT_CAP
    except (UsageError, QMAError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"qma {args.command}: {exc}", file=stderr)
        return EXIT_USAGE
    if args.json:
        payload = {"command": args.command}
        payload.update(report)
        print(json.dumps(payload, sort_keys=True), file=stdout)
    else:
        print(text, file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
