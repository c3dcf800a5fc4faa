"""Command-line front door: sequence expressions, experiments, exports.

Sequence expressions are prefix-nested with ':' separators and no whitespace,
e.g. `shift:1:two-three` or `compress:2:1:0:run-parity`.  `periodic:` and
`file:` consume the rest of the expression (they are always leaves).

Exit codes: 0 success, 1 verdict/acceptance failure, 2 usage or parse error,
3 range/overflow error.  Data outputs are byte-identical across reruns with
identical flags; run metadata sits on '#'-prefixed header lines, never in the
data itself.  The only environment variable honored is ASYMAUTO_THREADS.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import density, smooth
from .cobham import cobham_report, fits_to_csv, periodic_fit, periodic_fit_sweep, shift_invariance
from .density import Checkpoints, VerdictPolicy, discrepancy_profile, verdict
from .errors import ExprError, RangeError
from .kernel import check_labeling_consistency, cluster_kernel, quotient_to_json
from .seqlib import (
    Sequence,
    compress,
    periodic,
    seq_leading_prime,
    seq_run_parity,
    seq_sqrt_parity,
    seq_two_three,
    sequence_from_file,
    shift,
)

DEFAULT_SMOOTH_LIMIT = 1 << 40
DEFAULT_NMAX = 1 << 20
DEFAULT_CP_FIRST = 1 << 10
DEFAULT_TAU = 1e-3
DEFAULT_RHO = 1.2
DEFAULT_MAX_SHIFT = 8
DEFAULT_MAX_PERIOD = 64


# ---------------------------------------------------------------------------
# sequence expression language
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LeafExpr:
    kind: str  # leading-prime | run-parity | sqrt-parity | two-three


@dataclass(frozen=True)
class PeriodicExpr:
    values: tuple


@dataclass(frozen=True)
class FileExpr:
    path: str


@dataclass(frozen=True)
class ShiftExpr:
    m: int
    inner: object


@dataclass(frozen=True)
class CompressExpr:
    k: int
    alpha: int
    r: int
    inner: object


_LEAVES = ("leading-prime", "run-parity", "sqrt-parity", "two-three")


def _take_token(text: str, pos: int):
    end = text.find(":", pos)
    if end == -1:
        end = len(text)
    return text[pos:end], end


def _expect_colon(text: str, pos: int) -> int:
    if pos >= len(text) or text[pos] != ":":
        raise ExprError("expected ':' and another argument", pos)
    return pos + 1


def _take_int(text: str, pos: int, what: str):
    token, end = _take_token(text, pos)
    if not token or not (token.isascii() and token.isdigit()):
        raise ExprError(f"expected nonnegative integer for {what}, got {token!r}", pos)
    return int(token), end


def _parse(text: str, pos: int):
    token, end = _take_token(text, pos)
    if token in _LEAVES:
        return LeafExpr(token), end
    if token == "periodic":
        end = _expect_colon(text, end)
        rest = text[end:]
        if not rest:
            raise ExprError("periodic needs a comma-separated value list", end)
        values = []
        at = end
        for part in rest.split(","):
            if not (part.isascii() and part.isdigit()):
                raise ExprError(f"bad periodic value {part!r}", at)
            values.append(int(part))
            at += len(part) + 1
        return PeriodicExpr(tuple(values)), len(text)
    if token == "shift":
        end = _expect_colon(text, end)
        m, end = _take_int(text, end, "shift amount")
        end = _expect_colon(text, end)
        inner, end = _parse(text, end)
        return ShiftExpr(m, inner), end
    if token == "compress":
        end = _expect_colon(text, end)
        k_at = end
        k, end = _take_int(text, end, "base")
        if k < 2:
            raise ExprError(f"base must be >= 2, got {k}", k_at)
        end = _expect_colon(text, end)
        alpha, end = _take_int(text, end, "depth")
        end = _expect_colon(text, end)
        r_at = end
        r, end = _take_int(text, end, "residue")
        if r >= k**alpha:
            raise ExprError(f"residue {r} >= {k}**{alpha}", r_at)
        end = _expect_colon(text, end)
        inner, end = _parse(text, end)
        return CompressExpr(k, alpha, r, inner), end
    if token == "file":
        end = _expect_colon(text, end)
        path = text[end:]
        if not path:
            raise ExprError("file needs a path", end)
        return FileExpr(path), len(text)
    raise ExprError(f"unknown constructor {token!r}", pos)


def parse_expr(text: str):
    """Parse a sequence expression; errors carry the byte offset."""
    for i, ch in enumerate(text):
        if ch.isspace():
            raise ExprError("whitespace is not allowed in expressions", i)
    if not text:
        raise ExprError("empty expression", 0)
    expr, end = _parse(text, 0)
    if end != len(text):
        raise ExprError("trailing characters after expression", end)
    return expr


class SequenceBuilder:
    """Turns expression trees into sequences, sharing one smooth table."""

    def __init__(self, smooth_limit: int = DEFAULT_SMOOTH_LIMIT):
        self.smooth_limit = smooth_limit
        self._table = None

    def table(self):
        if self._table is None:
            self._table = smooth.enumerate_smooth(self.smooth_limit)
        return self._table

    def build(self, expr) -> Sequence:
        if isinstance(expr, LeafExpr):
            if expr.kind == "leading-prime":
                return seq_leading_prime()
            if expr.kind == "run-parity":
                return seq_run_parity()
            if expr.kind == "sqrt-parity":
                return seq_sqrt_parity()
            return seq_two_three(self.table())
        if isinstance(expr, PeriodicExpr):
            return periodic(expr.values)
        if isinstance(expr, FileExpr):
            return sequence_from_file(expr.path)
        if isinstance(expr, ShiftExpr):
            return shift(self.build(expr.inner), expr.m)
        if isinstance(expr, CompressExpr):
            return compress(self.build(expr.inner), expr.k, expr.alpha, expr.r)
        raise TypeError(f"unknown expression node {expr!r}")


def build_sequence(text: str, smooth_limit: int = DEFAULT_SMOOTH_LIMIT) -> Sequence:
    return SequenceBuilder(smooth_limit).build(parse_expr(text))


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------


def _emit(text: str, dest: str | None, meta: str) -> None:
    """Write to stdout for '-', else to the path; metadata goes on a '#' line."""
    payload = f"# {meta}\n{text}"
    if dest is None or dest == "-":
        sys.stdout.write(payload)
    else:
        Path(dest).write_text(payload, encoding="utf-8", newline="\n")


def _meta(args, command: str, keys) -> str:
    parts = [f"asymauto {command}"]
    parts += [f"{k}={getattr(args, k.replace('-', '_'))}" for k in keys]
    return " ".join(parts)


def _checkpoints(args) -> Checkpoints:
    return Checkpoints.geometric(args.cp_first, args.nmax)


def _policy(args) -> VerdictPolicy:
    return VerdictPolicy(tau=args.tau, rho=args.rho)


def _parse_range(text: str):
    lo, sep, hi = text.partition(":")
    ok = sep and lo.isascii() and lo.isdigit() and hi.isascii() and hi.isdigit()
    if not ok:
        raise ExprError(f"expected A:B range, got {text!r}", 0)
    a, b = int(lo), int(hi)
    if b < a:
        raise ExprError(f"empty range {text!r}", 0)
    return a, b


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def _cmd_eval(args) -> int:
    f = build_sequence(args.seq, args.smooth_limit)
    a, b = _parse_range(args.range)
    labels = [f.label(n) for n in range(a, b)]
    print(",".join(labels))
    if args.csv is not None:
        rows = ["n,value"] + [f"{n},{lab}" for n, lab in zip(range(a, b), labels)]
        _emit("\n".join(rows) + "\n", args.csv, _meta(args, "eval", ["seq", "range"]))
    return 0


def _cmd_smooth(args) -> int:
    if args.first is not None:
        table = smooth.SmoothTable.first(args.first)
    else:
        table = smooth.enumerate_smooth(args.limit)
    print(f"entries: {len(table)}  last: {table[len(table) - 1].value}")
    if args.csv is not None:
        _emit(
            smooth.table_to_csv(table),
            args.csv,
            _meta(args, "smooth", ["limit", "first"]),
        )
    if args.ratio_range:
        lo, hi = _parse_range(args.ratio_range)
        prof = smooth.ratio_profile(table, lo, hi)
        print(
            f"max ratio over [{lo},{hi}): {prof.numerator}/{prof.denominator}"
            f" = {prof.decimal!r} at i={prof.argmax}"
        )
    if args.kronecker is not None:
        gaps = smooth.kronecker_gap(Fraction(args.kronecker))
        g = gaps.smallest_gamma
        d = gaps.smallest_delta
        print(
            f"smallest-gamma pair: (gamma={g.gamma}, delta={g.delta}) "
            f"ratio {g.numerator}/{g.denominator}"
        )
        print(
            f"smallest-delta pair: (gamma={d.gamma}, delta={d.delta}) "
            f"ratio {d.numerator}/{d.denominator}"
        )
        if args.json is not None:
            obj = {
                "tolerance": str(gaps.tolerance),
                "cap": gaps.cap,
                "two_side": [
                    {"gamma": p.gamma, "delta": p.delta, "num": p.numerator, "den": p.denominator}
                    for p in gaps.two_side
                ],
                "three_side": [
                    {"gamma": p.gamma, "delta": p.delta, "num": p.numerator, "den": p.denominator}
                    for p in gaps.three_side
                ],
            }
            _emit(
                json.dumps(obj, sort_keys=True, indent=2) + "\n",
                args.json,
                _meta(args, "smooth", ["kronecker"]),
            )
    return 0


def _profile_output(args, profile, v) -> None:
    for n, c, fr in zip(profile.checkpoints, profile.counts, profile.fractions):
        print(f"N={n}: count={c} fraction={fr:.6g}")
    print(f"verdict: {v.value}")
    if args.csv is not None:
        _emit(profile.to_csv(), args.csv, _meta(args, args.command, []))
    if args.json is not None:
        _emit(profile.to_json(), args.json, _meta(args, args.command, []))


def _expect_exit(args, v) -> int:
    if args.expect is not None and v.value.lower() != args.expect:
        print(f"expected verdict {args.expect}, got {v.value}", file=sys.stderr)
        return 1
    return 0


def _cmd_discrepancy(args) -> int:
    builder = SequenceBuilder(args.smooth_limit)
    f = builder.build(parse_expr(args.f))
    g = builder.build(parse_expr(args.g))
    profile = discrepancy_profile(f, g, _checkpoints(args))
    v = verdict(profile, _policy(args))
    _profile_output(args, profile, v)
    return _expect_exit(args, v)


def _cmd_shift(args) -> int:
    f = build_sequence(args.seq, args.smooth_limit)
    result = shift_invariance(f, args.m, _checkpoints(args), _policy(args))
    _profile_output(args, result.profile, result.verdict)
    return _expect_exit(args, result.verdict)


def _cmd_kernel(args) -> int:
    f = build_sequence(args.seq, args.smooth_limit)
    depth = args.depth if args.depth is not None else (4 if args.base == 2 else 3)
    q = cluster_kernel(f, args.base, depth, _checkpoints(args), args.tau)
    violations = check_labeling_consistency(q)
    print(
        f"classes: {q.class_count}  by depth: {list(q.classes_by_depth)}  "
        f"finiteness: {q.finiteness}  violations: {len(violations)}"
    )
    for cid, c in enumerate(q.classes):
        print(f"  class {cid}: rep (alpha={c.rep[0]}, r={c.rep[1]}), members {len(c.members)}")
    if args.json is not None:
        _emit(
            quotient_to_json(q, violations),
            args.json,
            _meta(args, "kernel", ["seq", "base"]),
        )
    return 0


def _cmd_periodic_fit(args) -> int:
    f = build_sequence(args.seq, args.smooth_limit)
    cps = Checkpoints.geometric(min(args.cp_first, args.n), args.n)
    if args.q is not None:
        fits = [periodic_fit(f, args.q, args.n, cps, _policy(args))]
    else:
        fits = periodic_fit_sweep(f, args.qmax, args.n, cps, _policy(args))
    for p in fits:
        print(
            f"q={p.period}: fit fraction={p.fit_fraction:.6g} "
            f"min margin={p.min_margin:.6g} verdict={p.verdict.value}"
        )
    best = min(fits, key=lambda p: p.fit_fraction)
    print(f"best: q={best.period} fraction={best.fit_fraction:.6g}")
    if args.csv is not None:
        _emit(fits_to_csv(fits), args.csv, _meta(args, "periodic-fit", ["seq", "n"]))
    return 0


def _cmd_union_density(args) -> int:
    res = density.union_density_experiment(args.k, args.m, args.delta, args.gamma, args.nu)
    print(f"covered: {res.covered}/{res.total} = {res.fraction:.6f}")
    print(f"analytic floor: {float(res.bound):.6f} (p = {res.success_p})")
    print(f"exact fraction >= floor: {res.meets_bound}")
    if args.json is not None:
        _emit(res.to_json(), args.json, _meta(args, "union-density", ["k", "m", "gamma", "nu"]))
    return 0


def _cmd_report(args) -> int:
    f = build_sequence(args.seq, args.smooth_limit)
    report = cobham_report(
        f,
        args.k,
        args.l,
        depth_k=args.depth_k,
        depth_l=args.depth_l,
        cps=_checkpoints(args),
        tau=args.tau,
        policy=_policy(args),
        max_shift=args.max_shift,
        max_period=args.max_period,
    )
    print(report.to_text(), end="")
    if args.json is not None:
        _emit(report.to_json(), args.json, _meta(args, "report", ["seq", "k", "l"]))
    return 0


def _cmd_verify(args) -> int:
    from . import acceptance

    ids = None
    if args.criteria:
        ids = [c.strip() for c in args.criteria.split(",") if c.strip()]
    return acceptance.run_verify(Path(args.out), ids=ids)


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def _add_common(p, nmax=DEFAULT_NMAX) -> None:
    p.add_argument("--nmax", type=int, default=nmax, help="final checkpoint")
    p.add_argument("--cp-first", type=int, default=DEFAULT_CP_FIRST, help="first checkpoint")
    p.add_argument("--tau", type=float, default=DEFAULT_TAU, help="verdict/cluster threshold")
    p.add_argument("--rho", type=float, default=DEFAULT_RHO, help="verdict decay factor")


def _add_smooth_limit(p) -> None:
    p.add_argument(
        "--smooth-limit",
        type=int,
        default=DEFAULT_SMOOTH_LIMIT,
        help="coverage of the 3-smooth table backing two-three",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="asymauto",
        description="desk-scale experiments on digit statistics, k-kernels, "
        "3-smooth orderings, and prefix densities",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a sequence on a range",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--seq", required=True, help="sequence expression")
    p.add_argument("--range", required=True, help="half-open range A:B")
    p.add_argument("--csv", nargs="?", const="-", default=None, help="CSV out (path or stdout)")
    _add_smooth_limit(p)
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("smooth", help="enumerate 3-smooth numbers and gap data",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--limit", type=int, default=DEFAULT_SMOOTH_LIMIT, help="value coverage")
    p.add_argument("--first", type=int, default=None, help="enumerate first N entries instead")
    p.add_argument("--csv", nargs="?", const="-", default=None, help="CSV out (path or stdout)")
    p.add_argument("--ratio-range", default=None, help="index window I:J for max gap ratio")
    p.add_argument("--kronecker", default=None, help="tolerance t for the exponent gap search")
    p.add_argument("--json", nargs="?", const="-", default=None, help="JSON out (path or stdout)")
    p.set_defaults(handler=_cmd_smooth)

    p = sub.add_parser("discrepancy", help="profile where two sequences disagree",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--f", required=True, help="left sequence expression")
    p.add_argument("--g", required=True, help="right sequence expression")
    p.add_argument("--csv", nargs="?", const="-", default=None)
    p.add_argument("--json", nargs="?", const="-", default=None)
    p.add_argument("--expect", choices=["equal", "distinct", "inconclusive"], default=None,
                   help="exit 1 unless the verdict matches")
    _add_common(p)
    _add_smooth_limit(p)
    p.set_defaults(handler=_cmd_discrepancy)

    p = sub.add_parser("shift", help="profile a sequence against its shift",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--seq", required=True)
    p.add_argument("--m", type=int, required=True, help="shift amount (>= 1)")
    p.add_argument("--csv", nargs="?", const="-", default=None)
    p.add_argument("--json", nargs="?", const="-", default=None)
    p.add_argument("--expect", choices=["equal", "distinct", "inconclusive"], default=None)
    _add_common(p)
    _add_smooth_limit(p)
    p.set_defaults(handler=_cmd_shift)

    p = sub.add_parser("kernel", help="cluster the bounded-depth kernel of a sequence",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--seq", required=True)
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--depth", type=int, default=None, help="defaults to 4 (base 2) or 3")
    p.add_argument("--json", nargs="?", const="-", default=None)
    _add_common(p)
    _add_smooth_limit(p)
    p.set_defaults(handler=_cmd_kernel)

    p = sub.add_parser("periodic-fit", help="fit periodic approximants by majority vote",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--seq", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--q", type=int, default=None, help="single period to fit")
    group.add_argument("--qmax", type=int, default=DEFAULT_MAX_PERIOD, help="sweep periods 1..Q")
    p.add_argument("--n", type=int, default=DEFAULT_NMAX, help="fitting prefix length")
    p.add_argument("--cp-first", type=int, default=DEFAULT_CP_FIRST)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--rho", type=float, default=DEFAULT_RHO)
    p.add_argument("--csv", nargs="?", const="-", default=None)
    _add_smooth_limit(p)
    p.set_defaults(handler=_cmd_periodic_fit)

    p = sub.add_parser("union-density", help="exact residue-class union coverage",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=int, default=1)
    p.add_argument("--gamma", type=int, required=True)
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--json", nargs="?", const="-", default=None)
    p.set_defaults(handler=_cmd_union_density)

    p = sub.add_parser("report", help="two-base kernel/shift/periodicity report",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--seq", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--depth-k", type=int, default=None)
    p.add_argument("--depth-l", type=int, default=None)
    p.add_argument("--max-shift", type=int, default=DEFAULT_MAX_SHIFT)
    p.add_argument("--max-period", type=int, default=DEFAULT_MAX_PERIOD)
    p.add_argument("--json", nargs="?", const="-", default=None)
    _add_common(p)
    _add_smooth_limit(p)
    p.set_defaults(handler=_cmd_report)

    p = sub.add_parser("verify", help="run the acceptance suite",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--out", default="verify-out", help="directory for data outputs")
    p.add_argument("--criteria", default=None, help="comma-separated criterion ids to run")
    p.set_defaults(handler=_cmd_verify)

    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.handler(args)
    except ExprError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RangeError as exc:
        print(f"range error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
