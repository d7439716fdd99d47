"""Command-line front end.

Subcommands: compute, cf, hensley, scan, moment, largeval, verify.
Logs (including the resolved invocation) go to stderr; data to stdout or
--out. Exit codes: 0 success, 1 verification failure, 2 validation error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import dataclass

from . import characters, contfrac, dedekind, stats
from .errors import ValidationError


@dataclass(frozen=True)
class CliInvocation:
    subcommand: str
    flags: dict


def _parse_character(q, spec):
    if spec == "legendre":
        return characters.legendre_character(q)
    if spec.startswith("idx:"):
        return characters.character_from_index(q, int(spec[4:]))
    raise ValidationError(f"bad character spec {spec!r}: use 'legendre' or 'idx:<k>'")


def _pair_from_args(args):
    return _parse_character(args.q1, args.chi1), _parse_character(args.q2, args.chi2)


def _add_pair_flags(p, q_default=None, chi_default=None):
    req = q_default is None
    p.add_argument("--q1", type=int, required=req, default=q_default)
    p.add_argument("--chi1", default=chi_default, required=chi_default is None and req,
                   help="'legendre' or 'idx:<k>'")
    p.add_argument("--q2", type=int, required=req, default=q_default)
    p.add_argument("--chi2", default=chi_default, required=chi_default is None and req,
                   help="'legendre' or 'idx:<k>'")


def _fmt_complex(z, digits=12):
    return f"{z.real:.{digits}g} {z.imag:+.{digits}g}i"


def _fmt_s(z):
    re = 0.0 if abs(z.real) < 5e-7 else z.real
    im = 0.0 if abs(z.imag) < 5e-7 else z.imag
    if im == 0.0:
        return f"{re:.6f}"
    return f"{re:.6f}{im:+.6f}i"


def cmd_compute(args):
    chi1, chi2 = _pair_from_args(args)
    results = {}
    if args.method in ("double_sum", "both"):
        results["double_sum"] = dedekind.s_double_sum(chi1, chi2, args.a, args.c)
    if args.method in ("analytic", "both"):
        results["analytic"] = dedekind.s_analytic(chi1, chi2, args.a, args.c, args.eps)
    primary = results.get("analytic", results.get("double_sum"))
    print(f"S = {_fmt_s(primary.value)}")
    for name, res in results.items():
        line = f"S_{name} = {_fmt_complex(res.value)}"
        if name == "analytic":
            line += f"  (truncation_bound {res.truncation_bound:.3g})"
        print(line)
    cp = args.c // chi2.modulus
    trivial = chi1.modulus * args.c
    print(f"D(a,c') = {primary.max_partial_quotient}")
    print(f"trivial_bound = {trivial}")
    print(
        "bound_ratio = "
        f"{abs(primary.value) / (primary.max_partial_quotient * math.log(cp) ** 2):.6g}"
    )
    return 0


def cmd_cf(args):
    cf = contfrac.expand(args.a, args.c)
    if not cf.partials:
        print(str(cf))
        return 0
    line = f"{cf} D={max(cf.partials)}"
    a = args.a % args.c
    rev = contfrac.reverse_denominator_expansion(a, args.c)
    ok = a * rev.numerator % args.c == 1
    line += f" reversed→{rev.numerator}/{rev.denominator} {'ok' if ok else 'MISMATCH'}"
    print(line)
    return 0 if ok else 1


def cmd_hensley(args):
    phi = contfrac.phi_count(args.alpha, args.C)
    g = contfrac.g_count(args.alpha, args.C)
    pred = contfrac.hensley_prediction(args.alpha, args.C)
    print(f"phi_count = {phi}")
    print(f"g_count = {g}")
    print(f"prediction = {pred:.6g}")
    print(f"ratio = {phi / pred:.6g}")
    return 0


def cmd_scan(args):
    chi1, chi2 = _pair_from_args(args)
    config = stats.ScanConfig(
        char_pair=(chi1.label, chi2.label),
        C_max=args.C,
        alpha=args.alpha,
        method=args.method,
        target_error=args.eps,
        worker_count=args.workers,
        exceedances_only=args.exceedances_only,
    )
    count, records = stats.scan_F(config)
    print(f"count = {count}", file=sys.stderr)
    if args.out:
        stats.emit(records, args.format, args.out)
    else:
        sys.stdout.write(stats.emit(records, args.format))
    summary = stats.summarize(config, count, records)
    if args.summary:
        with open(args.summary, "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    else:
        print(f"summary: {json.dumps(summary)}", file=sys.stderr)
    return 0


def cmd_moment(args):
    chi1, chi2 = _pair_from_args(args)
    print("c,second_moment,exponent")
    for c in args.c:
        m = stats.second_moment(chi1, chi2, c, args.method, args.eps)
        expo = math.log(m) / math.log(c) if m > 0 and c > 1 else float("nan")
        print(f"{c},{m:.12g},{expo:.12g}")
    return 0


def cmd_largeval(args):
    chi1, chi2 = _pair_from_args(args)
    records = stats.largeval_sweep(
        chi1, chi2, args.n, range(args.kmin, args.kmax + 1), args.eps
    )
    if args.out:
        stats.emit(records, args.format, args.out)
    else:
        sys.stdout.write(stats.emit(records, args.format))
    return 0


def _suite_dw(args):
    failures = []
    for p in (5, 7, 13):
        chi = characters.legendre_character(p)
        for k in range(1, args.kmax + 1):
            for l in range(1, p + 1):
                want = dedekind.dw_exact(p, k, l)
                got = dedekind.s_double_sum_exact(chi, chi, 1 + l * k * p, k * p * p)
                if got != want:
                    failures.append(f"dw: exact S(1+{l}*{k}*{p}, {k}*{p}^2) = {got} != {want}")
                approx = dedekind.s_analytic(chi, chi, 1 + l * k * p, k * p * p).value
                if abs(approx - float(want)) > 1e-6:
                    failures.append(f"dw: analytic off by {abs(approx - float(want)):.2g} "
                                    f"at (p={p}, k={k}, l={l})")
    return failures


def _suite_korobov(args):
    failures = []
    rng = random.Random(args.seed)
    spot = []
    for q in range(2, args.qmax + 1):
        a_vals, s1, s2, D = dedekind._korobov_table(q)
        lim1 = 2 * q * math.log(q)
        lim2 = 18 * D * math.log(q) ** 2
        for i in range(len(a_vals)):
            if s1[i] > lim1:
                failures.append(f"korobov: sum_1({a_vals[i]}, {q}) = {s1[i]:.6g} > {lim1:.6g}")
            if s2[i] > lim2[i]:
                failures.append(f"korobov: sum_2({a_vals[i]}, {q}) = {s2[i]:.6g} > {lim2[i]:.6g}")
        if q > 2 and rng.random() < 0.05:
            i = rng.randrange(len(a_vals))
            spot.append((int(a_vals[i]), q, float(s1[i]), float(s2[i])))
    # the batch table must agree with the public scalar functions
    for a, q, v1, v2 in spot[:100]:
        if abs(dedekind.korobov_sum_1(a, q) - v1) > 1e-9 * max(1.0, v1):
            failures.append(f"korobov: batch/scalar sum_1 mismatch at ({a}, {q})")
        if abs(dedekind.korobov_sum_2(a, q) - v2) > 1e-9 * max(1.0, v2):
            failures.append(f"korobov: batch/scalar sum_2 mismatch at ({a}, {q})")
    return failures


def _suite_agreement(args):
    failures = []
    rng = random.Random(args.seed)
    chi1, chi2 = _pair_from_args(args)
    q1q2 = chi1.modulus * chi2.modulus
    cmax = args.cmax if args.cmax is not None else 2000
    for _ in range(args.trials):
        c = q1q2 * rng.randint(1, max(1, cmax // q1q2))
        while True:
            a = rng.randint(1, c - 1)
            if math.gcd(a, c) == 1:
                break
        exact = dedekind.s_double_sum(chi1, chi2, a, c)
        approx = dedekind.s_analytic(chi1, chi2, a, c, args.eps)
        dev = abs(exact.value - approx.value)
        if dev > 1e-6 + approx.truncation_bound:
            failures.append(f"agreement: |diff| = {dev:.3g} at (a={a}, c={c})")
    return failures


def _suite_cf(args):
    failures = []
    cmax = args.cmax if args.cmax is not None else 500
    for c in range(2, cmax + 1):
        for a in range(1, c):
            if math.gcd(a, c) != 1:
                continue
            rev = contfrac.reverse_denominator_expansion(a, c)
            if a * rev.numerator % c != 1:
                failures.append(f"cf: reversal wrong inverse at ({a}, {c})")
            if abs(contfrac.digit_symmetry_delta(a, c)) > 1:
                failures.append(f"cf: |delta| > 1 at ({a}, {c})")
    for c in range(2, min(cmax, 300) + 1):
        for a in range(1, c):
            if math.gcd(a, c) != 1:
                continue
            odd = contfrac.to_parity_form(contfrac.expand(a, c), want_odd_n=True)
            m = contfrac.matrix_factorization(odd)
            det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
            gamma = dedekind.complete_matrix(a, c, 1, 1)
            if det != 1 or (m[0][0], m[1][0]) != (a, c):
                failures.append(f"cf: matrix det/column wrong at ({a}, {c})")
            if (m[0][1], m[1][1]) != (gamma.b, gamma.d):
                failures.append(f"cf: matrix b/d entries wrong at ({a}, {c})")
    return failures


_SUITES = {
    "dw": _suite_dw,
    "korobov": _suite_korobov,
    "agreement": _suite_agreement,
    "cf": _suite_cf,
}


def cmd_verify(args):
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    failures = []
    for name in names:
        failures.extend(_SUITES[name](args))
    for f in failures:
        print(f"FAIL {f}", file=sys.stderr)
    print(f"verify {'+'.join(names)}: "
          f"{'ok' if not failures else f'{len(failures)} failure(s)'}")
    return 1 if failures else 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="nfds",
        description="Twisted Dedekind sums: evaluation, continued-fraction "
        "statistics, and sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate S(a, c) for a character pair")
    _add_pair_flags(p)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--method", choices=("both", "double_sum", "analytic"), default="both")
    p.add_argument("--eps", type=float, default=1e-8)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("cf", help="continued fraction, D, and reversal check")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("hensley", help="density counts vs the closed-form prediction")
    p.add_argument("--C", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=cmd_hensley)

    p = sub.add_parser("scan", help="sweep all admissible (a, c) up to C")
    _add_pair_flags(p)
    p.add_argument("--C", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--method", choices=("analytic", "double_sum", "both"),
                   default="analytic")
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--summary", default="")
    p.add_argument("--exceedances-only", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("moment", help="second moment over a mod c")
    _add_pair_flags(p)
    p.add_argument("--c", type=int, action="append", required=True,
                   help="repeatable")
    p.add_argument("--method", choices=("analytic", "double_sum"), default="analytic")
    p.add_argument("--eps", type=float, default=1e-6)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("largeval", help="S vs the predicted main term along c = k*q1*q2")
    _add_pair_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmin", type=int, default=1)
    p.add_argument("--kmax", type=int, default=40)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--out", default="")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=cmd_largeval)

    p = sub.add_parser("verify", help="run a property suite; nonzero exit on failure")
    p.add_argument("--suite", choices=(*_SUITES, "all"), required=True)
    p.add_argument("--qmax", type=int, default=1000)
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--cmax", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=1e-8)
    _add_pair_flags(p, q_default=5, chi_default="legendre")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "func")}
    invocation = CliInvocation(args.command, flags)
    print(
        f"config: {json.dumps({'subcommand': invocation.subcommand, 'flags': invocation.flags}, default=str)}",
        file=sys.stderr,
    )
    try:
        return args.func(args)
    except ValidationError as err:
        print(f"validation error ({type(err).__name__}): {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"validation error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
