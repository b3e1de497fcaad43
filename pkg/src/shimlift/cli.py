"""Command line entry point.

Subcommands: lift, project, level-predict, verify, weil-selftest, fixtures.
Exit codes are a stable contract: 0 success, 1 a verification ran and
failed, 2 invalid input or a violated theorem hypothesis (the payload names
it), 3 precision shortfall (the payload carries the required window).

With --json all output is a single deterministic JSON object on stdout
(sorted keys, no whitespace), suitable for byte-exact round trips.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .characters import DirichletCharacter, character_from_json
from .errors import (
    HypothesisError,
    PrecisionError,
    SchemaError,
    TailBoundError,
    VerificationFailure,
)
from .fixtures import fixture, fixture_defaults, fixture_names
from .plusspace import PlusContext, is_plus_space, project_plus, project_two
from .qseries import QExp, qexp_from_json, qexp_to_json
from .scalars import kronecker, scalar_to_json
from .shimura import (
    CharacterOrbit,
    predict_level,
    shimura_St,
    shimura_general,
    split_square,
)
from .verify import level1_exact_check, modularity_residual
from .weilrep import weil_selftest

__all__ = ["main"]


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(args, payload: dict, human: str) -> None:
    if getattr(args, "json", False):
        print(_dump(payload))
    else:
        print(human)


def _read_json_source(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _load_series(args, needed_hi: int | None = None) -> QExp:
    if getattr(args, "fixture", None):
        prec = needed_hi if needed_hi is not None else args.prec
        return fixture(args.fixture, prec)
    if getattr(args, "input", None):
        try:
            doc = _read_json_source(args.input)
        except json.JSONDecodeError as e:
            raise SchemaError("input is not JSON: %s" % e) from None
        if isinstance(doc, dict):
            for wrapper in ("lift", "projection"):
                if wrapper in doc and "coefficients" not in doc:
                    doc = doc[wrapper]
                    break
        return qexp_from_json(doc)
    raise SchemaError("need --input PATH or --fixture NAME")


def _resolve(args, field: str, default=None):
    v = getattr(args, field, None)
    if v is not None:
        return v
    if getattr(args, "fixture", None):
        meta = fixture_defaults(args.fixture)
        if field in meta:
            return meta[field]
    return default


def _parse_character(spec: str | None, modulus: int):
    if spec is None or spec == "trivial":
        return None
    if spec.startswith("kronecker:"):
        t = int(spec.split(":", 1)[1])
        return DirichletCharacter.from_kronecker(t, modulus)
    if spec.startswith("json:"):
        return character_from_json(_read_json_source(spec.split(":", 1)[1]))
    raise SchemaError(
        "character spec %r; use trivial, kronecker:t, or json:PATH" % spec
    )


def _series_payload(f: QExp) -> dict:
    return qexp_to_json(f)


def _series_human(f: QExp, limit: int = 12) -> str:
    names = []
    shown = 0
    for a in sorted(f.coeffs):
        if shown >= limit:
            names.append("...")
            break
        e = "q^%d" % a if f.denom == 1 else "q^(%d/%d)" % (a, f.denom)
        names.append("%s: %s" % (e, f.coeffs[a]))
        shown += 1
    if not names:
        names = ["0"]
    return "window [%d, %d)/%d, weight %s\n  " % (f.lo, f.hi, f.denom, f.weight) + "\n  ".join(names)


def _cmd_lift(args) -> int:
    T = args.t * args.s * args.s
    needed = T * args.prec * args.prec + 1
    f = _load_series(args, needed_hi=needed)
    k = _resolve(args, "k")
    if k is None:
        raise SchemaError("weight parameter k is not fixed by the input; pass --k")
    eps = _resolve(args, "eps", 1)
    N = _resolve(args, "N", 1)
    level = args.M * N
    chi = _parse_character(args.character, level)
    orbit = CharacterOrbit(chi) if chi is not None else None
    if args.extended or args.s > 1:
        out = shimura_general(f, level, k, args.t, args.s, eps, args.prec, orbit)
    else:
        out = shimura_St(f, level, k, args.t, eps, args.prec, orbit)
    t0, _ = split_square(T)
    plus_flag = (
        t0 % 2 == 1
        and f.denom == 1
        and eps == kronecker(-1, t0)
        and is_plus_space(f, eps)
    )
    verdict = predict_level(
        N, args.t, args.s, args.M,
        plus_space_matching_eps=plus_flag,
        psi_subspace_known=args.psi_known,
    )
    payload = {"lift": _series_payload(out), "verdict": verdict.to_json()}
    human = "case (%s), level %s\n%s" % (verdict.case_tag, verdict.level, _series_human(out))
    _emit(args, payload, human)
    return 0


def _cmd_project(args) -> int:
    f = _load_series(args)
    k = _resolve(args, "k")
    if k is None:
        raise SchemaError("pass --k (not fixed by the input)")
    if args.xi is not None:
        ctx = PlusContext(k, args.xi, args.N)
    else:
        eps = _resolve(args, "eps", 1)
        ctx = PlusContext.from_epsilon(k, eps, args.N)
    out = project_two(f, ctx) if args.two else project_plus(f, ctx)
    _emit(args, {"projection": _series_payload(out)}, _series_human(out))
    return 0


def _cmd_level_predict(args) -> int:
    verdict = predict_level(
        args.N, args.t, args.s, args.M,
        plus_space_matching_eps=args.plus,
        psi_subspace_known=args.psi_known,
    )
    if verdict.covered:
        human = "case (%s): level %d%s" % (
            verdict.case_tag,
            verdict.level,
            " (corrected combination)" if verdict.needs_correction else "",
        )
    else:
        human = "case (%s): not covered without a known psi-subspace" % verdict.case_tag
    _emit(args, {"verdict": verdict.to_json()}, human)
    return 0


def _cmd_verify(args) -> int:
    f = _load_series(args)
    weight = Fraction(args.weight)
    if args.mode == "exact":
        if weight.denominator != 1:
            raise SchemaError("exact mode decomposes integral weights only")
        try:
            dec = level1_exact_check(f, int(weight))
        except VerificationFailure as e:
            payload = {"passed": False, "reason": str(e)}
            if e.first_mismatch is not None:
                n, got, want = e.first_mismatch
                payload["first_mismatch"] = {
                    "exponent": n,
                    "combination": scalar_to_json(got),
                    "input": scalar_to_json(want),
                }
            _emit(args, payload, "FAIL: %s" % e)
            return 1
        terms = sorted(((a, b), scalar_to_json(c)) for (a, b), c in dec.items())
        payload = {"passed": True, "decomposition": [[list(m), c] for m, c in terms]}
        human = "exact decomposition: " + (
            " + ".join("%s * E4^%d E6^%d" % (c, m[0], m[1]) for m, c in terms) or "0"
        )
        _emit(args, payload, human)
        return 0
    chi = _parse_character(args.character, args.level)
    report = modularity_residual(
        f, weight, args.level, chi, terms=args.terms, tail_tol=args.tol
    )
    ok = report.max_residual < args.tol
    payload = {"passed": ok, "report": report.to_json()}
    human = "max residual %.3g over %d samples (threshold %g): %s" % (
        report.max_residual,
        len(report.residuals),
        args.tol,
        "ok" if ok else "FAIL",
    )
    _emit(args, payload, human)
    return 0 if ok else 1


def _cmd_weil_selftest(args) -> int:
    report = weil_selftest(max_n=args.max_n, words=args.words, perturb=args.perturb)
    report = {k: (v.item() if hasattr(v, "item") else v) for k, v in report.items()}
    _emit(args, report, "weil selftest ok: %r" % (report,))
    return 0


def _cmd_fixtures(args) -> int:
    if args.list:
        _emit(args, {"fixtures": fixture_names()}, "\n".join(fixture_names()))
        return 0
    if args.reemit:
        f = qexp_from_json(_read_json_source(args.reemit))
        print(_dump(qexp_to_json(f)))
        return 0
    if not args.name:
        raise SchemaError("need --name, --list, or --reemit")
    f = fixture(args.name, args.prec)
    if args.json:
        print(_dump(qexp_to_json(f)))
    else:
        print(_series_human(f))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shimlift", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add_io(sp, default_prec=200):
        sp.add_argument("--input", help="q-expansion JSON (path or - for stdin)")
        sp.add_argument("--fixture", help="named fixture instead of --input")
        sp.add_argument("--prec", type=int, default=default_prec,
                        help="fixture window / output precision")
        sp.add_argument("--json", action="store_true", help="machine output")

    sp = sub.add_parser("lift", help="apply the half-integral to integral weight lift")
    add_io(sp, default_prec=50)
    sp.add_argument("--N", type=int, default=None, help="level parameter (fixture default, else 1)")
    sp.add_argument("--k", type=int, default=None, help="integral part of the input weight k + 1/2")
    sp.add_argument("--t", type=int, default=1, help="square-free part of the lift index")
    sp.add_argument("--s", type=int, default=1, help="square part: full index is t s^2")
    sp.add_argument("--M", type=int, default=1, help="push the input up to level M N first")
    sp.add_argument("--epsilon", dest="eps", type=int, choices=(1, -1), default=None)
    sp.add_argument("--character", help="trivial | kronecker:t | json:PATH")
    sp.add_argument("--extended", action="store_true",
                    help="use the everywhere-defined index formula, skipping hypothesis gates")
    sp.add_argument("--psi-known", action="store_true", dest="psi_known",
                    help="assert the input sits in a single psi-eigenspace (level case viii)")
    sp.set_defaults(func=_cmd_lift)

    sp = sub.add_parser("project", help="plus-space / mod-two coefficient projection")
    add_io(sp)
    sp.add_argument("--N", type=int, default=4)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--xi", type=int, choices=(1, -1), default=None)
    sp.add_argument("--epsilon", dest="eps", type=int, choices=(1, -1), default=None)
    sp.add_argument("--two", action="store_true", help="project onto residues {0,2} instead")
    sp.set_defaults(func=_cmd_project)

    sp = sub.add_parser("level-predict", help="predicted level of a lift")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--plus", action="store_true",
                    help="input is plus-space with matching epsilon")
    sp.add_argument("--psi-known", action="store_true", dest="psi_known")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=_cmd_level_predict)

    sp = sub.add_parser("verify", help="exact or numeric modularity check")
    add_io(sp, default_prec=260)
    sp.add_argument("--weight", required=True, help="e.g. 4 or 5/2")
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--character", help="trivial | kronecker:t | json:PATH")
    sp.add_argument("--mode", choices=("exact", "numeric"), default="numeric")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--terms", type=int, default=200)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("weil-selftest", help="representation relation suite")
    sp.add_argument("--max-n", type=int, default=12, dest="max_n")
    sp.add_argument("--words", type=int, default=100)
    sp.add_argument("--perturb", action="store_true", help=argparse.SUPPRESS)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=_cmd_weil_selftest)

    sp = sub.add_parser("fixtures", help="emit reference expansions")
    sp.add_argument("--name", help="fixture name")
    sp.add_argument("--prec", type=int, default=50)
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--reemit", help="re-emit a q-expansion JSON canonically (path or -)")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=_cmd_fixtures)
    return p


def _error_payload(e: Exception) -> dict:
    payload = {"error": type(e).__name__, "message": str(e)}
    if isinstance(e, HypothesisError):
        payload["obstruction"] = e.obstruction
        if e.case:
            payload["case"] = e.case
    if isinstance(e, PrecisionError):
        payload["required_window"] = list(e.required_window)
    return payload


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        if isinstance(e, PrecisionError):
            code = 3
        elif isinstance(e, (VerificationFailure, TailBoundError)):
            code = 1
        else:
            code = 2
        if getattr(args, "json", False):
            print(_dump(_error_payload(e)))
        else:
            print("error: %s" % e, file=sys.stderr)
            if isinstance(e, PrecisionError):
                print("required window: [%d, %d)" % e.required_window, file=sys.stderr)
            if isinstance(e, HypothesisError) and e.case:
                print("level theorem case (%s)" % e.case, file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
