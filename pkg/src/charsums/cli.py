"""Command-line front end: ``charsums sum | verify | sarkozy | hypotheses | diag``.

Set arguments accept ``1,2,4`` (inline), ``file:PATH`` (set file),
``rand:N@SEED`` (seeded random subset), ``full`` and ``qr``.

Exit codes: 0 success, 1 a verified inequality failed, 2 configuration
error, 3 computation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from .errors import CharSumError
from .field import FieldContext, legendre, make_character, make_field
from .sarkozy import DEFAULT_BUDGET, quadratic_residues, sarkozy_sweep
from .sets import ResidueSet, full_set, load_set, random_subset, residue_set
from . import sums, verify

EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_COMPUTE = 3

THREADS_ENV = "CHARSUMS_THREADS"


class ConfigError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def clean(obj):
    """Round floats to 12 significant digits and map non-finite floats to null."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}") if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(clean(obj), separators=(",", ":"))


def parse_set(ctx: FieldContext, spec: str | None, slot: str) -> ResidueSet:
    if spec is None:
        raise ConfigError(f"missing set --{slot}")
    spec = spec.strip()
    if spec == "full":
        return full_set(ctx)
    if spec == "qr":
        return quadratic_residues(ctx)
    if spec.startswith("file:"):
        try:
            return load_set(ctx, spec[5:])
        except (OSError, ValueError) as exc:
            raise ConfigError(f"--{slot}: {exc}") from exc
    if spec.startswith("rand:"):
        body = spec[5:]
        if "@" not in body:
            raise ConfigError(f"--{slot}: random sets need a seed, as rand:N@SEED")
        n, seed = body.split("@", 1)
        try:
            return random_subset(ctx, int(n), int(seed))
        except ValueError as exc:
            raise ConfigError(f"--{slot}: {exc}") from exc
    if spec == "":
        return residue_set(ctx, ())
    try:
        values = [int(v) for v in spec.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"--{slot}: cannot parse {spec!r}") from exc
    bad = [v for v in values if not 0 <= v < ctx.p]
    if bad:
        raise ConfigError(f"--{slot}: residues out of range mod {ctx.p}: {bad}")
    return residue_set(ctx, values)


def parse_chi(ctx: FieldContext, spec: str):
    if spec == "legendre":
        return legendre(ctx)
    try:
        return make_character(ctx, int(spec))
    except ValueError as exc:
        raise ConfigError(f"--chi: {exc}") from exc


def parse_ints(spec: str, flag: str) -> list[int]:
    try:
        return [int(v) for v in spec.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"{flag}: cannot parse {spec!r}") from exc


def get_field(p) -> FieldContext:
    if p is None:
        raise ConfigError("--p is required")
    try:
        return make_field(p)
    except CharSumError as exc:
        raise ConfigError(str(exc)) from exc


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


# sum

FAMILIES = ("paley", "ternary", "mult-ternary", "mixed", "exp-bilinear", "poly", "moment")


def _parse_roots(p: int, spec: str | None):
    if not spec:
        raise ConfigError("poly needs --roots like 0:1,6:1")
    roots = []
    for part in spec.split(","):
        a, _, e = part.partition(":")
        try:
            roots.append((int(a), int(e) if e else 1))
        except ValueError as exc:
            raise ConfigError(f"--roots: cannot parse {part!r}") from exc
    try:
        return sums.polynomial(p, roots)
    except ValueError as exc:
        raise ConfigError(f"--roots: {exc}") from exc


def build_sum(args):
    """Parse arguments and return a thunk computing (record, lines)."""
    ctx = get_field(args.p)
    fam = args.family
    method = args.method
    S = lambda slot: parse_set(ctx, getattr(args, slot), slot)  # noqa: E731
    if fam == "exp-bilinear":
        A, B = S("A"), S("B")
        return lambda: _sum_record(fam, ctx, None, sums.bilinear_exponential_sum(ctx, args.x, A, B, method),
                                   len(A) * len(B), math.sqrt(ctx.p * len(A) * len(B)), {"x": args.x})
    chi = parse_chi(ctx, args.chi)
    if fam == "paley":
        A, B = S("A"), S("B")
        return lambda: _sum_record(fam, ctx, chi, sums.paley_sum(chi, A, B, method),
                                   len(A) * len(B), math.sqrt(ctx.p * len(A) * len(B)))
    if fam == "ternary":
        A, B, C = S("A"), S("B"), S("C")
        return lambda: _sum_record(fam, ctx, chi, sums.ternary_sum(chi, A, B, C, method), len(A) * len(B) * len(C))
    if fam == "mult-ternary":
        A, B, C = S("A"), S("B"), S("C")
        return lambda: _sum_record(fam, ctx, chi, sums.mult_ternary_sum(chi, A, B, C, method), len(A) * len(B) * len(C))
    if fam == "mixed":
        A, B, C, D = S("A"), S("B"), S("C"), S("D")
        return lambda: _sum_record(fam, ctx, chi, sums.mixed_quaternary_sum(chi, A, B, C, D, method),
                                   len(A) * len(B) * len(C) * len(D))
    if fam == "poly":
        f = _parse_roots(ctx.p, args.roots)
        extra = {"roots": [list(r) for r in f.roots], "lth_power": sums.is_lth_power(f, chi.order)}
        return lambda: _sum_record(fam, ctx, chi, sums.polynomial_char_sum(chi, f, method), ctx.p,
                                   f.r * math.sqrt(ctx.p), extra, bound_name="weil_bound")
    if fam == "moment":
        A = S("A")
        k = args.k
        mode = "naive" if method == "naive" else "auto"

        def run():
            value = sums.moment_sum(chi, A, k, mode)
            bound = len(A) ** (2 * k) * 2 * k * math.sqrt(ctx.p) + (2 * k * len(A)) ** k * ctx.p
            rec = {"family": fam, "p": ctx.p, "chi": chi.m, "order": chi.order, "k": k,
                   "value": value, "trivial_bound": ctx.p * len(A) ** (2 * k), "moment_bound": bound}
            return rec
        return run
    raise ConfigError(f"unknown family {fam!r}")


def _sum_record(fam, ctx, chi, value, trivial, barrier=None, extra=None, bound_name="sqrt_barrier"):
    rec = {"family": fam, "p": ctx.p}
    if chi is not None:
        rec.update(chi=chi.m, order=chi.order)
    rec.update(value.to_dict())
    rec["trivial_bound"] = trivial
    if barrier is not None:
        rec[bound_name] = barrier
    if extra:
        rec.update(extra)
    return rec


def cmd_sum(args, out) -> int:
    thunk = build_sum(args)
    try:
        rec = thunk()
    except CharSumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    if args.format == "json":
        print(dumps(rec), file=out)
    else:
        for key, val in rec.items():
            shown = "[" + ", ".join(fmt(v) for v in val) + "]" if isinstance(val, list) else fmt(val)
            print(f"{key:<14}{shown}", file=out)
    return 0


# verify

def cmd_verify(args, out) -> int:
    if args.check == "arg" and args.values is not None:
        try:
            values = [complex(v.replace(" ", "")) for v in args.values.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"--values: {exc}") from exc
        delta = args.delta if args.delta is not None else 0.0
        try:
            reports = [verify.check_arg_lemma(values, delta)]
        except CharSumError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_COMPUTE
    else:
        if args.seed is None:
            raise ConfigError("--seed is required for randomized sweeps")
        checks = verify.CHECKS if args.check == "all" else (args.check,)
        ctx = get_field(args.p)
        ks = parse_ints(args.k, "--k")
        if not ks or min(ks) < 1:
            raise ConfigError("--k values must be >= 1")
        chi_index = None
        if args.chi is not None:
            chi_index = parse_chi(ctx, args.chi).m
            if chi_index == 0:
                raise ConfigError("--chi must be nontrivial")
        try:
            reports = verify.run_sweep(checks, ctx, args.trials, args.seed, ks, chi_index, args.threads)
        except CharSumError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_COMPUTE
    failures = 0
    worst = math.inf
    for r in reports:
        print(dumps(r.to_dict()), file=out)
        failures += not r.holds
        worst = min(worst, r.slack)
    summary = {"summary": {"reports": len(reports), "failures": failures, "worst_slack": worst}}
    print(dumps(summary), file=out)
    return EXIT_FAILED if failures else 0


# sarkozy

CSV_COLUMNS = ["p", "status", "qr_size", "nodes_explored", "wall_time_ms", "witness_A", "witness_B"]


def cmd_sarkozy(args, out) -> int:
    lo, hi = args.lo, args.hi
    if lo > hi or hi < 0 or args.budget < 1:
        raise ConfigError(f"bad range [{lo}, {hi}] or budget")
    rows = sarkozy_sweep(lo, hi, args.budget, args.threads)
    if args.format == "json":
        for row in rows:
            print(dumps(row.to_dict()), file=out)
        return 0
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        d = row.to_dict()
        d["witness_A"] = " ".join(map(str, d["witness_A"]))
        d["witness_B"] = " ".join(map(str, d["witness_B"]))
        writer.writerow([d[c] for c in CSV_COLUMNS])
    return 0


# hypotheses / diag

def cmd_hypotheses(args, out) -> int:
    ctx = get_field(args.p)
    sizes = []
    for slot in "ABCD":
        spec = getattr(args, slot)
        if spec is not None and spec.startswith("size:"):
            sizes.append(int(spec[5:]))
        else:
            sizes.append(len(parse_set(ctx, spec, slot)))
    try:
        rep = verify.hypotheses_from_sizes(ctx.p, *sizes, args.delta, args.eps)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc
    print(dumps(rep.to_dict()), file=out)
    return 0


def cmd_diag(args, out) -> int:
    ctx = get_field(args.p)
    A = parse_set(ctx, args.A, "A")
    print(dumps({"bsg": verify.bsg_diagnostics(A), "rudnev": verify.rudnev_diagnostics(A)}), file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="charsums", description="Exact character-sum laboratory over F_p.")
    sub = parser.add_subparsers(dest="command", required=True)

    def set_flags(sp, slots="ABCD"):
        for slot in slots:
            sp.add_argument(f"--{slot}", help="set: 1,2,4 | file:PATH | rand:N@SEED | full | qr")

    s = sub.add_parser("sum", help="evaluate one character sum")
    s.add_argument("family", choices=FAMILIES)
    s.add_argument("--p", type=int)
    s.add_argument("--chi", default="legendre", help="'legendre' or an index m in [0, p-2]")
    set_flags(s)
    s.add_argument("--x", type=int, default=1, help="frequency for exp-bilinear")
    s.add_argument("--roots", help="poly roots as a:e,b:e,...")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--method", choices=("fast", "naive"), default="fast")
    s.add_argument("--format", choices=("human", "json"), default="human")

    v = sub.add_parser("verify", help="run inequality checks, one JSON line per report")
    v.add_argument("check", choices=verify.CHECKS + ("all",))
    v.add_argument("--p", type=int)
    v.add_argument("--k", default="1,2,3")
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--seed", type=int)
    v.add_argument("--chi", default=None)
    v.add_argument("--threads", type=int, default=default_threads())
    v.add_argument("--delta", type=float)
    v.add_argument("--values", help="complex values for 'arg', e.g. 1,1+0.3j")

    z = sub.add_parser("sarkozy", help="decide whether QR(p) is a sumset for a range of primes")
    z.add_argument("--from", dest="lo", type=int, required=True)
    z.add_argument("--to", dest="hi", type=int, required=True)
    z.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    z.add_argument("--format", choices=("csv", "json"), default="csv")
    z.add_argument("--threads", type=int, default=default_threads())

    h = sub.add_parser("hypotheses", help="evaluate the size hypotheses for H_chi estimates")
    h.add_argument("--p", type=int)
    set_flags(h)
    h.add_argument("--delta", default="0")
    h.add_argument("--eps", default="0")

    d = sub.add_parser("diag", help="energy and sumset diagnostics for a set")
    d.add_argument("--p", type=int)
    set_flags(d, "A")
    return parser


COMMANDS = {"sum": cmd_sum, "verify": cmd_verify, "sarkozy": cmd_sarkozy, "hypotheses": cmd_hypotheses, "diag": cmd_diag}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
