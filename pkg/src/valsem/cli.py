"""Command-line front end.

Subcommands: valuate, expand, tilde, count, example3, wild, selftest.
Exit codes: 0 success/verified, 1 verification failed, 2 usage or parse
error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction

from .errors import CapExceeded, ParseError, UsageError, VerificationError
from .exact import Dyadic, QuadReal, format_lexvec, format_scalar, parse_scalar
from .genseq import (
    SeqFamily,
    ValuationDef,
    check_key_identity,
    eta,
    eta_closed,
    expand,
    valuate,
)
from .gensemi import DEFAULT_STATE_CAP, Box, GenSemigroup, box_bound_check
from .poly import MPoly, format_poly, parse_poly
from .semigroups import contradiction_table, stair_count, stair_members, theorem1_bound
from .wild import WildParams, make_wild_valuation, parse_bound, wild_certificate

_SQRT2_FLOAT = 1.4142135623730951


def _default_cap() -> int:
    raw = os.environ.get("VALSEM_MAX_STATES")
    if raw is None:
        return DEFAULT_STATE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"VALSEM_MAX_STATES must be an integer, got {raw!r}")
    if cap < 1:
        raise UsageError("VALSEM_MAX_STATES must be positive")
    return cap


def _approx(x) -> float:
    if isinstance(x, int):
        return float(x)
    if isinstance(x, Dyadic):
        return x.num / (1 << x.k)
    if isinstance(x, QuadReal):
        return _approx(x.rat) + _approx(x.surd) * _SQRT2_FLOAT
    if isinstance(x, Fraction):
        return x.numerator / x.denominator
    raise UsageError(f"cannot approximate {x!r}")


def _approx_vec(v) -> str:
    return "(" + ", ".join(f"{_approx(c):.6g}" for c in v.coords) + ")"


def _parse_weights(text: str, what: str):
    try:
        return [int(w) for w in text.split(",") if w.strip()]
    except ValueError:
        raise UsageError(f"bad {what} list {text!r}; expected comma-separated integers")


def _vdef_from_args(args, default_sigma=None) -> ValuationDef:
    sigma = _parse_weights(args.sigma, "sigma") if args.sigma else None
    tau = _parse_weights(args.tau, "tau") if args.tau else None
    if sigma is None and tau is None and default_sigma is not None:
        sigma = list(default_sigma)
    if sigma is not None and tau is not None:
        return ValuationDef.combined(sigma, tau)
    if sigma is not None:
        return ValuationDef.p3(sigma)
    if tau is not None:
        return ValuationDef.q3(tau)
    raise UsageError("a valuation needs --sigma and/or --tau weights")


def _format_term(vdef: ValuationDef, term) -> str:
    factors = []
    coeff = str(term.coeff)
    if "+" in coeff[1:] or "-" in coeff[1:]:
        coeff = f"({coeff})"
    if coeff != "1" or (not term.alpha and not term.beta):
        factors.append(coeff)
    for fam, exps in ((vdef.p, term.alpha), (vdef.q, term.beta)):
        for i, e in enumerate(exps):
            if not e:
                continue
            name = ("x" if fam.kind == "P" else "u") if i == 0 else fam.name(i)
            factors.append(name if e == 1 else f"{name}^{e}")
    return " * ".join(factors)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _emit_json(args, payload: dict) -> None:
    _emit(args, json.dumps(payload, indent=2))


def _emit_csv(args, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    _emit(args, buf.getvalue().rstrip("\n"))


def _load_poly(args) -> MPoly:
    if args.poly is not None:
        text = args.poly
    elif args.poly_file is not None:
        with open(args.poly_file) as fh:
            text = fh.read()
    else:
        raise UsageError("provide --poly TEXT or --poly-file FILE")
    return parse_poly(text)


def cmd_valuate(args) -> int:
    vdef = _vdef_from_args(args)
    f = _load_poly(args)
    if f.is_zero():
        raise UsageError("the zero polynomial has no value")
    res = valuate(vdef, f)
    if args.format == "json":
        _emit_json(
            args,
            {
                "valuation": vdef.descriptor(),
                "value": format_lexvec(res.value),
                "witness": _format_term(vdef, res.witness),
                "expansion": [_format_term(vdef, t) for t in res.expansion],
            },
        )
        return 0
    if args.format == "csv":
        raise UsageError("valuate does not produce CSV; use json or pretty")
    lines = [format_lexvec(res.value)]
    if args.approx:
        lines[0] += f"   [approx {_approx_vec(res.value)}]"
    lines.append(f"witness: {_format_term(vdef, res.witness)}")
    lines.append("expansion:")
    for t in res.expansion:
        lines.append(f"  {_format_term(vdef, t)}")
    _emit(args, "\n".join(lines))
    return 0


def cmd_expand(args) -> int:
    vdef = _vdef_from_args(args)
    f = _load_poly(args)
    if f.is_zero():
        raise UsageError("the zero polynomial has no expansion")
    terms = expand(vdef, f)
    if args.format == "json":
        _emit_json(
            args,
            {
                "valuation": vdef.descriptor(),
                "polynomial": format_poly(f),
                "terms": [_format_term(vdef, t) for t in terms],
            },
        )
        return 0
    if args.format == "csv":
        raise UsageError("expand does not produce CSV; use json or pretty")
    _emit(args, "\n".join(_format_term(vdef, t) for t in terms))
    return 0


def _named_semigroup(vdef: ValuationDef):
    """The generated sub-semigroup plus a value -> generator-name map."""
    named = [("z", vdef.z_value())]
    for fam in vdef.families():
        for i in range(0, fam.max_index + 1):
            base = ("x" if fam.kind == "P" else "u") if i == 0 else fam.name(i)
            named.append((base, vdef.gen_value(fam, i)))
    sg = GenSemigroup(vdef.group, [v for _, v in named])
    names = {}
    for name, v in named:
        names.setdefault(v, name)
    return sg, names


def _parse_lambda(text: str):
    text = text.strip()
    if "sqrt2" in text:
        return parse_scalar(text, "quad")
    try:
        return parse_scalar(text, "dyadic")
    except ParseError:
        pass
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad lambda {text!r}")


def cmd_tilde(args) -> int:
    vdef = _vdef_from_args(args, default_sigma=(2, 5))
    sg, names = _named_semigroup(vdef)
    lam = _parse_lambda(getattr(args, "lambda"))
    entry = sg.tilde(lam, cap=args.max_states)
    if entry is None:
        _emit(args, "not in projected semigroup")
        return 1
    parts = []
    for g, e in zip(sg.generators, entry.witness):
        if e:
            name = names.get(g, format_lexvec(g))
            parts.append(name if e == 1 else f"{name}^{e}")
    witness = " * ".join(parts) if parts else "1"
    if args.format == "json":
        _emit_json(
            args,
            {
                "lambda": format_scalar(lam),
                "tilde": format_lexvec(entry.tilde),
                "witness": witness,
            },
        )
        return 0
    if args.format == "csv":
        raise UsageError("tilde does not produce CSV; use json or pretty")
    line = f"{format_lexvec(entry.tilde)}, witness {witness}"
    if args.approx:
        line += f"   [approx {_approx_vec(entry.tilde)}]"
    _emit(args, line)
    return 0


def cmd_count(args) -> int:
    vdef = _vdef_from_args(args, default_sigma=(2, 5))
    report = box_bound_check(vdef, args.y1, args.y2, cap=args.max_states)
    verdict = "pass" if report.ok else "FAIL"
    if args.format == "json":
        _emit_json(
            args,
            {
                "kind": "box_count",
                "parameters": {"y1": args.y1, "y2": args.y2, **vdef.descriptor()},
                "rows": [
                    {
                        "y1": report.y1,
                        "y2": report.y2,
                        "count": report.count,
                        "bound": format_scalar(report.bound),
                        "ok": report.ok,
                    }
                ],
            },
        )
    elif args.format == "csv":
        _emit_csv(
            args,
            ["y1", "y2", "count", "bound", "ok"],
            [[report.y1, report.y2, report.count, format_scalar(report.bound), report.ok]],
        )
    else:
        _emit(args, f"count {report.count}, bound {format_scalar(report.bound)}, {verdict}")
    return 0 if report.ok else 1


def _y2_grid(y2_max: int):
    out = [1]
    while out[-1] * 2 <= y2_max:
        out.append(out[-1] * 2)
    return out


def cmd_example3(args) -> int:
    rows = contradiction_table(args.r, args.y1, _y2_grid(args.y2_max), args.d)
    crossed = any(r.crossed for r in rows)
    header = ["y2", "lower_bound", "exact_count", "claimed_bound", "crossed"]
    table = [[r.y2, r.lower_bound, r.exact_count, r.claimed_bound, r.crossed] for r in rows]
    if args.format == "json":
        _emit_json(
            args,
            {
                "kind": "example3",
                "parameters": {"r": args.r, "y1": args.y1, "d": args.d},
                "rows": [dict(zip(header, row)) for row in table],
            },
        )
    elif args.format == "csv":
        _emit_csv(args, header, table)
    else:
        lines = ["  ".join(str(c) for c in [*header])]
        for row in table:
            lines.append("  ".join(str(c) for c in row))
        lines.append("crossover found" if crossed else "no crossover in range")
        _emit(args, "\n".join(lines))
    return 0 if crossed else 1


def cmd_wild(args) -> int:
    params = WildParams(
        a=_parse_lambda(args.a) if args.a else 1,
        c=args.c,
        a2=_parse_lambda(args.a2) if args.a2 else None,
    )
    f = parse_bound(args.f) if args.f else parse_bound("neg_linear")
    g = parse_bound(args.g) if args.g else parse_bound("linear")
    if args.sigma or args.tau:
        vdef = _vdef_from_args(args)
        if args.kind == "decreasing" and vdef.form != "P3":
            raise UsageError("decreasing kind expects --sigma weights only")
        if args.kind == "increasing" and vdef.form != "Q3":
            raise UsageError("increasing kind expects --tau weights only")
        if args.kind == "both" and vdef.form != "C5":
            raise UsageError("the both kind expects --sigma and --tau weights")
    else:
        vdef = make_wild_valuation(args.kind, f=f, g=g, N=args.N, params=params)
    cert = wild_certificate(
        args.kind, vdef, params, f=f, g=g, N=args.N, tilde_cap=args.max_states
    )
    if args.format == "csv":
        header = ["n", "i", "chain", "lambda", "witness", "lhs", "rhs", "ok"]
        _emit_csv(
            args,
            header,
            [[r.n, r.i, r.chain, r.lam, r.witness, r.lhs, r.rhs, r.ok] for r in cert.rows],
        )
    elif args.format == "pretty":
        bad = cert.first_bad()
        lines = [
            f"kind {cert.kind}, rows {len(cert.rows)}, "
            + ("all ok" if cert.valid else f"FIRST BAD n={bad.n} ({bad.chain}-chain)")
        ]
        _emit(args, "\n".join(lines))
    else:
        _emit_json(args, cert.to_json())
    return 0 if cert.valid else 1


def cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    failures = []

    def check(name, ok):
        print(f"{name}: {'ok' if ok else 'FAIL'}")
        if not ok:
            failures.append(name)

    vdef = ValuationDef.p3([2, 5])
    res = valuate(vdef, parse_poly("y^2"))
    check("valuate y^2 = (5, -2)", res.value == vdef.group.vec(5, -2))
    check("eta closed form", all(eta(i) == eta_closed(i) for i in range(20)))
    # the symbolic check at index i expands the (i+1)-th member, so the
    # weight list must run one index further
    vdef_id = ValuationDef.p3([2, 5, 3])
    check("key identities", all(check_key_identity(vdef_id, i) for i in (1, 2)))
    check(
        "stair counts vs enumeration",
        all(
            stair_count(1, n) == len(stair_members(1, n, n + 1))
            for n in rng.sample(range(1, 33), 8)
        ),
    )
    sg, _ = _named_semigroup(vdef)
    entry = sg.tilde(Dyadic(21, 2))
    check("tilde(21/4) = (21/4, -3)", entry is not None
          and entry.tilde == vdef.group.vec(Dyadic(21, 2), -3))
    report = box_bound_check(vdef, 4, 4)
    check("box count within bound at (4, 4)", report.ok)
    cert = wild_certificate(
        "decreasing",
        make_wild_valuation("decreasing", f=lambda n: -n, N=64),
        WildParams(),
        f=lambda n: -n,
        N=64,
    )
    check("wild certificate n<=64", cert.valid)
    return 0 if not failures else 1


def _add_common(sp, with_poly=False, with_weights=True):
    if with_weights:
        sp.add_argument("--sigma", help="comma-separated P-family weights")
        sp.add_argument("--tau", help="comma-separated Q-family weights")
    if with_poly:
        sp.add_argument("--poly", help="polynomial text")
        sp.add_argument("--poly-file", help="file containing polynomial text")
    sp.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    sp.add_argument("--out", help="write output to FILE instead of stdout")
    sp.add_argument("--approx", action="store_true",
                    help="append decimal renderings, clearly marked approximate")
    sp.add_argument("--max-states", type=int, default=None,
                    help="enumeration state cap (default from VALSEM_MAX_STATES)")
    sp.add_argument("--seed", type=int, default=0, help="seed for randomized demos")
    sp.add_argument("--threads", type=int, default=1,
                    help="worker count; results are identical for any value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="valsem",
        description="exact rank-2 valuation semigroup computations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("valuate", help="value and expansion of a polynomial")
    _add_common(sp, with_poly=True)
    sp.set_defaults(func=cmd_valuate)

    sp = sub.add_parser("expand", help="canonical expansion of a polynomial")
    _add_common(sp, with_poly=True)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("tilde", help="tilde value of a first coordinate")
    _add_common(sp)
    sp.add_argument("--lambda", required=True, help="first-coordinate value")
    sp.set_defaults(func=cmd_tilde)

    sp = sub.add_parser("count", help="pseudo-box count against the growth bound")
    _add_common(sp)
    sp.add_argument("--y1", type=int, required=True)
    sp.add_argument("--y2", type=int, required=True)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("example3", help="staircase semigroup contradiction table")
    _add_common(sp, with_weights=False)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--y1", type=int, default=64)
    sp.add_argument("--y2-max", type=int, default=4096)
    sp.add_argument("--d", type=int, default=10**6)
    sp.set_defaults(func=cmd_example3)

    sp = sub.add_parser("wild", help="wild tilde certificate")
    _add_common(sp)
    sp.add_argument("--kind", choices=("decreasing", "increasing", "both"),
                    required=True)
    sp.add_argument("--f", help="bound descriptor for the decreasing chain")
    sp.add_argument("--g", help="bound descriptor for the increasing chain")
    sp.add_argument("--N", type=int, default=4096)
    sp.add_argument("--a", help="witness scale a (dyadic)")
    sp.add_argument("--c", type=int, default=1, help="second-coordinate scale c")
    sp.add_argument("--a2", help="sqrt2-chain scale for the both kind")
    sp.set_defaults(func=cmd_wild)

    sp = sub.add_parser("selftest", help="run a small built-in check battery")
    _add_common(sp, with_weights=False)
    sp.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "max_states", None) is None:
            args.max_states = _default_cap()
        if args.max_states < 1:
            raise UsageError("--max-states must be positive")
        return args.func(args)
    except ParseError as exc:
        print(f"parse error at position {exc.pos}: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return 3
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
