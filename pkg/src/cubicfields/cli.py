"""Command-line interface.

Subcommands: field, char, census, tuples, sieve-count. Data goes to stdout
(or --out), progress to stderr. Exit codes: 0 success (empty results
included), 1 usage error, 2 internal consistency error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from decimal import Decimal, InvalidOperation

from .characters import build_character, char_exponent, splitting_type
from .errors import InternalConsistencyError, IntegralityError
from .experiments import THREADS_ENV, REFERENCE_LINES, default_threads, run_census, run_tuples
from .fields import SimplestCubicField, regulator, roots
from .lfunc import EXACT_COST_LIMIT, class_number, l1_euler_truncated, l1_exact
from .numcore import primes_up_to
from .sieve import SieveSpec, brute_force_survivors, sieve_survivors

CENSUS_COLUMNS = ["t", "g", "d", "R", "absL", "h", "ratio", "split_bound"]
TUPLE_COLUMNS = ["tuple", "j"] + CENSUS_COLUMNS + ["in_window"]

log = logging.getLogger("cubicfields")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _jnum(v):
    # floats go through the same 12-digit rendering as CSV
    if isinstance(v, float):
        return float(fmt(v))
    return v


# ---------------------------------------------------------------------------
# census serialization


def census_record(r) -> dict:
    return {
        "t": r.t,
        "g": r.conductor,
        "d": r.discriminant,
        "R": _jnum(r.regulator),
        "absL": _jnum(r.abs_L),
        "h": r.h,
        "ratio": _jnum(r.ratio),
        "split_bound": r.split_bound,
    }


def summary_record(s) -> dict:
    return {
        "rows": s.rows,
        "backend": s.backend,
        "A": _jnum(float(s.A)),
        "thresholds": {k: _jnum(v) for k, v in REFERENCE_LINES.items()},
        "counts_at_or_above": dict(s.counts_at_or_above),
        "spearman_split_vs_ratio": _jnum(s.spearman_split_vs_ratio),
        "median_ratio_by_split_bound": {str(k): _jnum(v) for k, v in s.median_ratio_by_split_bound.items()},
    }


def census_csv(records, summary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CENSUS_COLUMNS)
    for rec in records:
        w.writerow([fmt(rec[c]) for c in CENSUS_COLUMNS])
    buf.write(f"# summary rows={summary['rows']} backend={summary['backend']} A={fmt(summary['A'])}\n")
    for name, c in summary["thresholds"].items():
        buf.write(f"# count ratio>={fmt(c)} ({name}): {summary['counts_at_or_above'][name]}\n")
    buf.write(f"# spearman(split_bound, ratio)={fmt(summary['spearman_split_vs_ratio'])}\n")
    for b, m in summary["median_ratio_by_split_bound"].items():
        buf.write(f"# median ratio split_bound={b}: {fmt(m)}\n")
    return buf.getvalue()


def census_json(records, summary) -> str:
    lines = [json.dumps(rec) for rec in records]
    lines.append(json.dumps({"summary": summary}))
    return "\n".join(lines) + "\n"


def census_json_to_csv(text: str) -> str:
    records, summary = [], None
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        if "summary" in obj:
            summary = obj["summary"]
        else:
            records.append(obj)
    return census_csv(records, summary)


# ---------------------------------------------------------------------------
# tuples serialization


def tuple_records(rep) -> list[dict]:
    c = rep.construction
    out = [
        {
            "type": "construction",
            "k": rep.k,
            "epsilon": _jnum(rep.epsilon),
            "x": rep.x,
            "bound": _jnum(c.bound),
            "q": c.q,
            "alpha": _jnum(rep.alpha),
            "X": str(rep.X),
            "window_lo": rep.window[0],
            "window_hi": rep.window[1],
            "z": rep.z,
            "z_mode": rep.z_mode,
            "status": rep.status,
        }
    ]
    for p in c.prime_list:
        out.append({"type": "prime", "p": p, "residues": [c.prescribed(p, j) for j in range(c.k)]})
    for j, (a, d) in enumerate(zip(c.a, c.deltas), start=1):
        out.append({"type": "offset", "j": j, "a": a, "delta": d})
    if rep.empty:
        out.append({"type": "no_tuples", "reason": rep.status})
        return out
    for i, tup in enumerate(rep.tuples, start=1):
        for j, r in enumerate(tup, start=1):
            rec = {"type": "field", "tuple": i, "j": j}
            rec.update(census_record(r))
            rec["in_window"] = rep.in_window[i - 1]
            out.append(rec)
    for i, gexp in enumerate(rep.gap_exponents, start=1):
        out.append({"type": "gap", "tuple": i, "gap_exponent": _jnum(gexp)})
    return out


def tuples_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    by_type: dict[str, list[dict]] = {}
    for r in records:
        by_type.setdefault(r["type"], []).append(r)
    con = by_type["construction"][0]
    keys = [k for k in con if k != "type"]
    buf.write("# construction\n")
    w.writerow(keys)
    w.writerow([fmt(con[k]) for k in keys])
    buf.write("# primes\n")
    w.writerow(["p", "residues"])
    for r in by_type["prime"]:
        w.writerow([r["p"], ";".join(map(str, r["residues"]))])
    buf.write("# offsets\n")
    w.writerow(["j", "a", "delta"])
    for r in by_type["offset"]:
        w.writerow([r["j"], r["a"], r["delta"]])
    if "no_tuples" in by_type:
        buf.write(f"# no tuples: {by_type['no_tuples'][0]['reason']}\n")
        return buf.getvalue()
    buf.write("# tuples\n")
    w.writerow(TUPLE_COLUMNS)
    for r in by_type["field"]:
        w.writerow([fmt(r[c]) for c in TUPLE_COLUMNS])
    if "gap" in by_type:
        buf.write("# gaps\n")
        w.writerow(["tuple", "gap_exponent"])
        for r in by_type["gap"]:
            w.writerow([r["tuple"], fmt(r["gap_exponent"])])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands


def cmd_field(args) -> str:
    t = args.t
    fld = SimplestCubicField.from_t(t)
    out = {"t": t, "conductor": fld.conductor, "squarefree": fld.squarefree_conductor}
    rt = roots(t, precision_bits=args.precision)
    out["roots"] = [_jnum(v) for v in rt.as_floats()]
    out["root_error"] = _jnum(rt.error)
    out["splitting"] = {str(p): splitting_type(t, p).value for p in primes_up_to(100)}
    if not fld.squarefree_conductor:
        out["note"] = f"conductor {fld.conductor} not squarefree: no discriminant/h"
    else:
        out["discriminant"] = fld.discriminant
        R = regulator(t, args.precision)
        out["regulator"] = _jnum(R.value)
        out["regulator_error"] = _jnum(R.error)
        chi = build_character(t)
        Q = args.Q if args.Q is not None else fld.conductor
        out["absL_euler"] = _jnum(l1_euler_truncated(chi, args.A, Q).abs_value)
        if fld.conductor <= EXACT_COST_LIMIT:
            out["absL_exact"] = _jnum(l1_exact(chi).abs_value)
            cn = class_number(t, "exact")
        else:
            cn = class_number(t, "euler", A=args.A, Q=Q)
        out["h"] = cn.h
        out["h_raw"] = _jnum(cn.raw)
        out["h_backend"] = cn.backend
    if args.format == "json":
        return json.dumps(out) + "\n"
    lines = []
    for k, v in out.items():
        if k == "splitting":
            v = " ".join(f"{p}:{s[0].upper()}" for p, s in v.items())
        elif isinstance(v, list):
            v = " ".join(fmt(x) for x in v)
        else:
            v = fmt(v)
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def cmd_char(args) -> str:
    chi = build_character(args.t, args.test_prime_bound)
    out = {
        "t": args.t,
        "conductor": chi.conductor,
        "components": [{"p": p, "generator": g, "exponent": e} for p, g, e in chi.components],
        "conjugate_equivalent": chi.conjugate_equivalent,
        "values": {str(n): char_exponent(chi, n) for n in primes_up_to(args.upto)},
    }
    if args.format == "json":
        return json.dumps(out) + "\n"
    lines = [f"t: {args.t}", f"conductor: {chi.conductor}"]
    for c in out["components"]:
        lines.append(f"component: p={c['p']} generator={c['generator']} exponent={c['exponent']}")
    lines.append("note: the conjugate character is equally valid")
    lines.append("exponents k with chi(p) = omega^k (- if chi(p) = 0):")
    lines.append(" ".join(f"{p}:{'-' if k is None else k}" for p, k in out["values"].items()))
    return "\n".join(lines) + "\n"


def cmd_census(args) -> str:
    rows, summary = run_census(args.t_max, args.A, args.backend, args.threads)
    recs = [census_record(r) for r in rows]
    srec = summary_record(summary)
    return census_json(recs, srec) if args.format == "json" else census_csv(recs, srec)


def cmd_tuples(args) -> str:
    z = args.z if args.z is not None else "desk"
    rep = run_tuples(args.k, args.x, args.epsilon, args.A, args.backend, z, args.max_tuples, args.threads)
    recs = tuple_records(rep)
    if args.format == "json":
        return "".join(json.dumps(r) + "\n" for r in recs)
    return tuples_csv(recs)


def cmd_sieve_count(args) -> str:
    offsets = tuple(int(s) for s in args.offsets.split(","))
    spec = SieveSpec(args.x, args.alpha, args.a, args.q, offsets, args.floor, args.z)
    res = brute_force_survivors(spec) if args.brute_force else sieve_survivors(spec)
    out = {"N_alpha": res.N_alpha, "z": spec.z, "z_overridden": spec.z_overridden}
    out.update(res.counts)
    out["method"] = "brute_force" if args.brute_force else "sieve"
    if args.format == "json":
        return json.dumps(out) + "\n"
    return "".join(f"{k}={fmt(v)}\n" for k, v in out.items())


# ---------------------------------------------------------------------------


def _positive_int(s):
    # accepts 10000000000000000 as well as 1e16
    try:
        v = Decimal(s)
    except InvalidOperation:
        v = None
    if v is None or not v.is_finite() or v != v.to_integral_value() or v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {s!r}")
    return int(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--threads", type=int, default=None, help=f"worker processes (default ${THREADS_ENV} or 1)")
    common.add_argument("--precision", type=int, default=96, help="root-finding precision in bits")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="cubicfields", description="Simplest cubic fields: class numbers, characters, sieve.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("field", parents=[common], help="report on one field K_t")
    f.add_argument("--t", type=_positive_int, required=True)
    f.add_argument("--A", type=float, default=4.0)
    f.add_argument("--Q", type=float, default=None)
    f.set_defaults(func=cmd_field)

    c = sub.add_parser("char", parents=[common], help="the cubic character of K_t")
    c.add_argument("--t", type=_positive_int, required=True)
    c.add_argument("--test-prime-bound", type=int, default=None)
    c.add_argument("--upto", type=int, default=50)
    c.set_defaults(func=cmd_char)

    ce = sub.add_parser("census", parents=[common], help="class-number census over t <= t-max")
    ce.add_argument("--t-max", type=_positive_int, required=True)
    ce.add_argument("--A", type=float, default=4.0)
    ce.add_argument("--backend", choices=("exact", "euler"), default="exact")
    ce.set_defaults(func=cmd_census)

    tu = sub.add_parser("tuples", parents=[common], help="k-tuples of close fields")
    tu.add_argument("--k", type=int, required=True)
    tu.add_argument("--x", type=_positive_int, required=True)
    tu.add_argument("--epsilon", type=float, required=True)
    tu.add_argument("--A", type=float, default=4.0)
    tu.add_argument("--backend", choices=("exact", "euler"), default="euler")
    tu.add_argument("--z", type=_positive_int, default=None, help="sieve cut (default: desk mode)")
    tu.add_argument("--max-tuples", type=int, default=None)
    tu.set_defaults(func=cmd_tuples)

    s = sub.add_parser("sieve-count", parents=[common], help="count sieve survivors")
    s.add_argument("--x", type=_positive_int, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--q", type=_positive_int, required=True)
    s.add_argument("--offsets", default="0")
    s.add_argument("--floor", type=float, required=True, help="small-prime floor (epsilon log x)")
    s.add_argument("--z", type=_positive_int, default=None)
    s.add_argument("--brute-force", action="store_true")
    s.set_defaults(func=cmd_sieve_count)
    return p


def _validate(args):
    if args.threads is not None and args.threads < 1:
        raise UsageError("--threads must be at least 1")
    if args.precision < 53:
        raise UsageError("--precision must be at least 53 bits")
    if getattr(args, "A", 1) < 1:
        raise UsageError("--A must be at least 1")
    if args.command == "tuples":
        if args.k < 1:
            raise UsageError("--k must be at least 1")
        if args.epsilon <= 0:
            raise UsageError("--epsilon must be positive")
        if args.x < 3:
            raise UsageError("--x must be at least 3")
        if args.epsilon * math.log(args.x) < 3 * args.k + 2:
            raise UsageError("epsilon*log x must be at least 3k+2")
    if args.command == "census" and args.backend == "exact" and args.t_max**2 + 3 * args.t_max + 9 > EXACT_COST_LIMIT:
        raise UsageError(f"exact backend limited to conductors <= {EXACT_COST_LIMIT}")
    if args.command == "sieve-count":
        try:
            tuple(int(s) for s in args.offsets.split(","))
        except ValueError:
            raise UsageError("--offsets must be comma-separated integers")
    if args.threads is None:
        args.threads = default_threads()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        _validate(args)
        text = args.func(args)
    except UsageError as e:
        print(f"cubicfields: error: {e}", file=sys.stderr)
        return 1
    except (InternalConsistencyError, IntegralityError) as e:
        print(f"cubicfields: internal consistency error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"cubicfields: error: {e}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
