"""Command-line interface: bound reports, exact sampling simulation,
verification suites, and character-table export.

All reports are deterministic: floats print at 12 significant digits,
reductions are pairwise-summed in fixed order, and the timestamp honors
HSPSIM_TIMESTAMP / SOURCE_DATE_EPOCH, so identical commands give identical
bytes at any thread count.

Exit codes: 0 success; 1 a verify check failed; 2 a family corollary does
not apply to the given parameters; 64 usage or parse error; 69 resource
cap exceeded.
"""
from __future__ import annotations

import argparse
import collections
import csv
import io
import os
import sys

import numpy as np

from . import __version__, bounds, simulate
from . import irreps as irrmod
from .chartable import best_character_table
from .groups import make_group, order_two_subgroup, parse_cycles, spec_of
from .util import (THREADS_ENV, dumps_report, fmt_float, pairwise_sum,
                   timestamp)

EX_OK = 0
EX_VERIFY_FAIL = 1
EX_INAPPLICABLE = 2
EX_USAGE = 64
EX_RESOURCE = 69

_FakeIrrep = collections.namedtuple("_FakeIrrep", ["label", "degree"])


class UsageError(ValueError):
    """Bad group spec, element spec, or flag combination."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    top = _Parser(
        prog="hspsim",
        description=(
            "Quantum Fourier sampling over finite groups: closed-form "
            "entanglement lower bounds, exact distribution simulation, "
            "verification suites, and character tables."),
        epilog=(
            "Group spec grammar: symmetric:N (or sN), cyclic:N (or zN), "
            "dihedral:N, wreath:N (S_N wr S_2), psl2:Q, sl2:Q, and "
            "power:<base>^<n> for direct powers."))
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--format", choices=["json", "csv", "text"],
                       default=fmt_default)
        p.add_argument("--out", default=None, help="output path (default stdout)")

    b = sub.add_parser("bound", parents=[], help="closed-form bound report")
    b.add_argument("--family", required=True,
                   choices=["wreath", "psl2", "power", "gl", "group"])
    b.add_argument("--n", type=int, default=None,
                   help="family size (wreath/power/gl)")
    b.add_argument("--q", type=int, default=None, help="field size (psl2)")
    b.add_argument("--p", type=int, default=None, help="characteristic (gl)")
    b.add_argument("--m", type=int, default=1, help="field extension (gl)")
    b.add_argument("--c", type=int, default=None,
                   help="tail split parameter (power; default: search 2..16)")
    b.add_argument("--group", default=None,
                   help="group spec (power base / group family)")
    b.add_argument("--h", default=None, help="involution (cycle notation, "
                   "'id:<n>', or family default)")
    b.add_argument("--epsilon", type=float, default=None,
                   help="cutoff (default: canonical per family, else 0.2)")
    b.add_argument("--k-max", dest="k_max", type=int, default=8)
    b.add_argument("--t", type=int, default=1, help="number of states")
    b.add_argument("--threshold", type=float, default=1 / 3)
    common(b)

    s = sub.add_parser("simulate", help="exact sampling distributions")
    s.add_argument("--group", required=True)
    s.add_argument("--h", default=None)
    s.add_argument("--k", type=int, default=1, help="entangled registers")
    s.add_argument("--frames", type=int, default=1,
                   help="independent random frame draws")
    s.add_argument("--frame-kind", dest="frame_kind",
                   choices=["basis", "fused"], default="basis")
    s.add_argument("--t", type=int, default=None,
                   help="also report the t-copy averaged trace distance")
    s.add_argument("--epsilon", type=float, default=0.2)
    s.add_argument("--threshold", type=float, default=1 / 3)
    common(s)

    v = sub.add_parser("verify", help="named check suites")
    v.add_argument("--suite", required=True,
                   choices=["facts", "lemmas", "tables"])
    v.add_argument("--group", required=True)
    v.add_argument("--h", default=None)
    v.add_argument("--k", type=int, default=1)
    v.add_argument("--frame-kind", dest="frame_kind",
                   choices=["basis", "fused"], default="basis")
    v.add_argument("--epsilon", type=float, default=0.2)
    common(v)

    c = sub.add_parser("chartable", help="character table export")
    c.add_argument("--group", required=True)
    common(c, fmt_default="csv")
    return top


# ---------------------------------------------------------------------------
# element parsing

def parse_element(group, text):
    text = text.strip()
    if text.startswith("id:"):
        try:
            x = int(text[3:])
        except ValueError:
            raise UsageError(f"bad element id in {text!r}") from None
        if not 0 <= x < group.order:
            raise UsageError(f"element id {x} outside 0..{group.order - 1}")
        return x
    if group.kind == "symmetric":
        try:
            return group.from_perm(parse_cycles(text, group.params[0]))
        except ValueError as e:
            raise UsageError(str(e)) from None
    if group.kind == "wreath" and text == "swap":
        return group.swap_element()
    raise UsageError(
        f"element {text!r} not understood for {spec_of(group)}; use 'id:<n>'"
        + (" or cycle notation" if group.kind == "symmetric" else ""))


def default_involution(group):
    if group.kind == "wreath":
        return group.swap_element()
    if group.kind == "dihedral":
        return group.params[0]  # the reflection s
    invs = group.involutions()
    if not invs:
        raise UsageError(
            f"{spec_of(group)} has no involution; pass --h explicitly")
    return min(invs)


def resolve_h(group, text):
    if text is None:
        return default_involution(group)
    x = parse_element(group, text)
    if x == group.identity or group.compose(x, x) != group.identity:
        raise UsageError(f"element {text!r} is not an involution")
    return x


def resolve_threads(flag):
    if flag:
        return max(1, int(flag))
    env = os.environ.get(THREADS_ENV, "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def make_header(seed, group_spec):
    return {
        "tool_version": __version__,
        "seed": seed,
        "group_spec": group_spec,
        "timestamp": timestamp(),
    }


# ---------------------------------------------------------------------------
# output rendering

def _flatten(obj, prefix, rows):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(v, f"{prefix}.{k}" if prefix else str(k), rows)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flatten(v, f"{prefix}[{i}]", rows)
    else:
        if isinstance(obj, bool):
            val = "true" if obj else "false"
        elif obj is None:
            val = ""
        elif isinstance(obj, (float, np.floating)):
            val = fmt_float(obj)
        else:
            val = str(obj)
        rows.append((prefix, val))


def render_report(report, fmt):
    if fmt == "json":
        return dumps_report(report)
    rows = []
    _flatten(report, "", rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    return "".join(f"{k} = {v}\n" for k, v in rows)


def write_output(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# bound

def cmd_bound(args):
    t = args.t
    if args.family == "wreath":
        if args.n is None:
            raise UsageError("--family wreath requires --n")
        rep = bounds.wreath_bound(args.n, eps=args.epsilon, t=t,
                                  threshold=args.threshold, k_max=args.k_max)
        spec = f"wreath:{args.n}"
    elif args.family == "psl2":
        if args.q is None:
            raise UsageError("--family psl2 requires --q")
        rep = bounds.psl_bound(args.q, eps=args.epsilon, t=t,
                               threshold=args.threshold, k_max=args.k_max)
        spec = f"psl2:{args.q}"
    elif args.family == "power":
        if args.group is None or args.n is None:
            raise UsageError("--family power requires --group and --n")
        base = make_group(args.group)
        h = resolve_h(base, args.h)
        rep = bounds.direct_power_bound(base, h, args.n, c=args.c, t_states=t,
                                        threshold=args.threshold,
                                        k_max=args.k_max)
        spec = f"power:{spec_of(base)}^{args.n}"
    elif args.family == "gl":
        if args.n is None or args.p is None:
            raise UsageError("--family gl requires --n and --p")
        obj = bounds.gl_bound(args.n, args.p, args.m)
        spec = f"gl({args.n},{args.p}^{args.m})"
        report = {"header": make_header(args.seed, spec), **obj}
        write_output(render_report(report, args.format), args.out)
        return EX_OK
    else:  # generic group family
        if args.group is None:
            raise UsageError("--family group requires --group")
        G = make_group(args.group)
        h = resolve_h(G, args.h)
        irr = irrmod.irreps_for(G, seed=args.seed)
        eps = args.epsilon if args.epsilon is not None else 0.2
        rep = bounds.group_report(G, irr, h, eps, t=t,
                                  threshold=args.threshold, k_max=args.k_max)
        spec = spec_of(G)
    report = {"header": make_header(args.seed, spec), **rep.to_json_obj()}
    write_output(render_report(report, args.format), args.out)
    return EX_OK


# ---------------------------------------------------------------------------
# simulate

def cmd_simulate(args):
    G = make_group(args.group)
    h = resolve_h(G, args.h)
    threads = resolve_threads(args.threads)
    table = best_character_table(G, seed=args.seed)
    # budget gate from degrees alone, before any irrep matrices are built
    fake = [_FakeIrrep(lab, d) for lab, d in zip(table.labels, table.degrees)]
    simulate.register_budget(G, fake, args.k)
    irr = irrmod.irreps_for(G, seed=args.seed)
    if args.frames < 1:
        raise UsageError("--frames must be at least 1")

    children = np.random.SeedSequence(args.seed).generate_state(args.frames)
    per_seed = []
    for i in range(args.frames):
        space = simulate.RegisterSpace(G, irr, args.k, seed=int(children[i]),
                                       kind=args.frame_kind)
        res = simulate.avg_tv_over_conjugates(space, h, threads=threads)
        per_seed.append({
            "frame_index": i,
            "avg_l1": res["avg_l1"],
            "avg_tv": res["avg_tv"],
            "max_tv": res["max_tv"],
        })
    mean_avg_l1 = pairwise_sum([r["avg_l1"] for r in per_seed]) / args.frames
    mean_avg_tv = pairwise_sum([r["avg_tv"] for r in per_seed]) / args.frames
    max_tv = max(r["max_tv"] for r in per_seed)

    bp = bounds.params_from_irreps(G, irr, h, args.epsilon)
    d2 = bounds.delta2(bp, args.k)
    report = {
        "header": make_header(args.seed, spec_of(G)),
        "h": G.pretty(h),
        "k": args.k,
        "frame_kind": args.frame_kind,
        "frames": args.frames,
        "conjugates": len(G.class_of(h)),
        "per_seed": per_seed,
        "mean_avg_l1": mean_avg_l1,
        "mean_avg_tv": mean_avg_tv,
        "max_tv": max_tv,
        "epsilon": args.epsilon,
        "delta1": bp.delta1,
        "delta2": d2,
        "hypothesis_ok": bounds.hypothesis_ok(bp, args.k),
        "avg_l1_below_delta2": bool(mean_avg_l1 <= d2),
    }
    if args.t is not None:
        chi = [abs(r.character()[h]) for r in irr]
        eta = bounds.char_eta(G.order, [r.degree for r in irr], chi)
        mixed = simulate.mixed_conjugate_trace_distance(G, irr, h, args.t)
        report["mixed_copies"] = {
            "t": args.t,
            "trace_distance": mixed,
            "bound": bounds.trace_norm_bound(eta, args.t),
            "below_bound": bool(mixed <= bounds.trace_norm_bound(eta, args.t)),
        }
    write_output(render_report(report, args.format), args.out)
    return EX_OK


# ---------------------------------------------------------------------------
# verify

def _check(name, ok, lhs=None, rhs=None, detail=None, warn=False):
    status = "PASS" if ok else ("WARN" if warn else "FAIL")
    entry = {"check": name, "status": status}
    if lhs is not None:
        entry["lhs"] = lhs
    if rhs is not None:
        entry["rhs"] = rhs
    if detail:
        entry["detail"] = detail
    return entry


def _suite_facts(G, args):
    from . import fourier
    irr = irrmod.irreps_for(G, seed=args.seed)
    checks = []
    err = max(irrmod.hom_unitarity_error(r) for r in irr)
    checks.append(_check("unitary homomorphism", err < 1e-8, lhs=err, rhs=1e-8))
    err = irrmod.schur_orthogonality_error(G, irr)
    checks.append(_check("matrix-entry orthogonality", err < 1e-8,
                         lhs=err, rhs=1e-8))
    err = max(r.degree * abs(sum(r.character()[g] for g in range(G.order))
                             / G.order) for r in irr[1:]) if len(irr) > 1 else 0.0
    checks.append(_check("nontrivial character mean zero", err < 1e-8,
                         lhs=err, rhs=1e-8))
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for r in irr:
        vecs = rng.standard_normal((3, r.degree)) \
            + 1j * rng.standard_normal((3, r.degree))
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        worst = max(worst, fourier.check_likemub(r, vecs))
    checks.append(_check("mean squared overlap is 1/d", worst < 1e-8,
                         lhs=worst, rhs=1e-8))
    worst = max(fourier.check_projection_length(d, s, seed=args.seed)
                for d, s in ((4, 1), (6, 3), (9, 5)))
    checks.append(_check("projected length averages to rank/dim",
                         worst < 1e-8, lhs=worst, rhs=1e-8))
    ns = (1, 2) if G.order <= 40 else (1,)
    worst = max(fourier.check_expected_multiplicity(G, irr, n, tau)
                for n in ns for tau in irr)
    checks.append(_check("expected tuple multiplicity", worst < 1e-8,
                         lhs=worst, rhs=1e-8))
    return checks


def _suite_lemmas(G, args):
    h = resolve_h(G, args.h)
    threads = resolve_threads(args.threads)
    irr = irrmod.irreps_for(G, seed=args.seed)
    checks = []
    if G.order <= simulate.ROUNDTRIP_ORDER_LIMIT:
        H = order_two_subgroup(G, h)
        err = simulate.fourier_roundtrip_error(G, H, irr)
        checks.append(_check("transform diagonalizes the hidden-subgroup state",
                             err < 1e-9, lhs=err, rhs=1e-9))
    suite = simulate.lemma_suite(G, irr, h, args.k, args.epsilon,
                                 seed=args.seed, kind=args.frame_kind,
                                 threads=threads)
    for entry in suite:
        if entry["pass"] is None:
            checks.append(_check(entry["check"], True, lhs=entry["lhs"],
                                 rhs=entry["rhs"], detail=entry["detail"],
                                 warn=False))
            checks[-1]["status"] = "WARN"
        else:
            checks.append(_check(entry["check"], entry["pass"],
                                 lhs=entry["lhs"], rhs=entry["rhs"],
                                 detail=entry.get("detail")))
    return checks


def _suite_tables(G, args):
    table = best_character_table(G, seed=args.seed)
    checks = []
    ssq = table.sum_of_squared_degrees()
    checks.append(_check("squared degrees sum to group order",
                         ssq == G.order, lhs=ssq, rhs=G.order))
    nclasses = len(table.classes)
    checks.append(_check("one irrep per conjugacy class",
                         len(table.labels) == nclasses,
                         lhs=len(table.labels), rhs=nclasses))
    err = table.row_orthogonality_error()
    checks.append(_check("row orthogonality", err < 1e-8, lhs=err, rhs=1e-8))
    err = table.column_orthogonality_error()
    checks.append(_check("column orthogonality", err < 1e-8, lhs=err, rhs=1e-8))
    if G.kind == "psl2":
        q = G.params[0]
        want = sorted(d for _, d, count, _ in bounds.psl_rows(q)
                      for _ in range(count))
        got = sorted(table.degrees)
        checks.append(_check("degree pattern matches the closed form",
                             got == want, lhs=str(got), rhs=str(want)))
        actual, formula, note = bounds.involution_count_note(q)
        if actual is not None and actual != formula:
            checks.append(_check("involution count", False, lhs=actual,
                                 rhs=formula, detail=note, warn=True))
        else:
            entry = _check("involution count", True, lhs=actual, rhs=formula)
            if note:
                entry["status"] = "WARN"
                entry["detail"] = note
            checks.append(entry)
    else:
        n_inv = len(G.involutions())
        checks.append(_check("involution count recorded", True, lhs=n_inv))
    return checks


def cmd_verify(args):
    G = make_group(args.group)
    if args.suite == "facts":
        checks = _suite_facts(G, args)
    elif args.suite == "lemmas":
        checks = _suite_lemmas(G, args)
    else:
        checks = _suite_tables(G, args)
    n_fail = sum(1 for c in checks if c["status"] == "FAIL")
    report = {
        "header": make_header(args.seed, spec_of(G)),
        "suite": args.suite,
        "checks": checks,
        "n_pass": sum(1 for c in checks if c["status"] == "PASS"),
        "n_warn": sum(1 for c in checks if c["status"] == "WARN"),
        "n_fail": n_fail,
    }
    write_output(render_report(report, args.format), args.out)
    return EX_VERIFY_FAIL if n_fail else EX_OK


# ---------------------------------------------------------------------------
# chartable

def cmd_chartable(args):
    G = make_group(args.group)
    table = best_character_table(G, seed=args.seed)
    if args.format == "json":
        report = {"header": make_header(args.seed, spec_of(G)),
                  "table": table.to_json_obj()}
        write_output(dumps_report(report), args.out)
    else:  # csv and text share the bit-exact export
        write_output(table.to_csv(), args.out)
    return EX_OK


# ---------------------------------------------------------------------------
# entry point

def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "bound": cmd_bound,
        "simulate": cmd_simulate,
        "verify": cmd_verify,
        "chartable": cmd_chartable,
    }
    try:
        return handlers[args.command](args)
    except UsageError as e:
        sys.stderr.write(f"hspsim {args.command}: error: {e}\n")
        return EX_USAGE
    except bounds.CorollaryInapplicable as e:
        sys.stderr.write(f"hspsim {args.command}: corollary inapplicable: {e}\n")
        return EX_INAPPLICABLE
    except ValueError as e:
        msg = str(e)
        code = EX_RESOURCE if ("cap" in msg or "limit" in msg
                               or "exceeds" in msg) else EX_USAGE
        kind = "resource cap" if code == EX_RESOURCE else "error"
        if msg.startswith(kind + ": "):
            msg = msg[len(kind) + 2:]
        sys.stderr.write(f"hspsim {args.command}: {kind}: {msg}\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
