"""Command-line front end: ``rankspan construct | analyze | verify``."""

from __future__ import annotations

import argparse
import json
import sys
import numpy as np

from . import __version__, affine, nilspec, strata, subspace, verify
from .affine import AffineMatSubspace
from .subspace import MatSubspace
from .verdict import BUDGET_ENV, BudgetExceeded, Status, default_budget

CONSTRUCT_NAMES = (
    "sl2_f2",
    "t_upper",
    "t_strict_upper",
    "t_lower",
    "jk",
    "extremal_affine",
    "unspanned",
    "random",
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} {getattr(args, 'name', None) or getattr(args, 'suite', '')} needs {', '.join(missing)}")


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def load_object(path: str):
    """Read a subspace or affine JSON file."""
    with open(path) as fh:
        raw = fh.read()
    try:
        d = json.loads(raw)
    except json.JSONDecodeError as exc:
        line = raw.splitlines()[exc.lineno - 1] if raw.splitlines() else ""
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}") from None
    try:
        return AffineMatSubspace.from_dict(d) if "point" in d else MatSubspace.from_dict(d)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: not a valid subspace file: {exc}") from None


# construct


def cmd_construct(args) -> int:
    name = args.name
    q = args.q if args.q is not None else 2
    if name == "sl2_f2":
        if q != 2:
            raise UsageError("sl2_f2 only exists over F_2")
        obj = subspace.sl2_f2()
    elif name in ("t_upper", "t_strict_upper", "t_lower"):
        _need(args, "n")
        obj = subspace.named_space(name, args.n, field=q)
    elif name == "jk":
        _need(args, "n", "k")
        obj = subspace.named_space("jk", args.n, args.p, args.k, field=q)
    elif name == "extremal_affine":
        _need(args, "n", "p", "k")
        obj = affine.extremal_affine(args.n, args.p, args.k, q, args.budget)
    elif name == "unspanned":
        _need(args, "n", "p", "r")
        obj = affine.unspanned_subspace(args.n, args.p, args.r, q, args.budget)
    elif name == "random":
        _need(args, "n", "codim")
        p = args.p if args.p is not None else args.n
        obj = subspace.random_subspace(args.n, p, q, args.codim, np.random.default_rng(args.seed))
    else:
        raise UsageError(f"unknown object {name!r}; choose from {', '.join(CONSTRUCT_NAMES)}")
    text = json.dumps(obj.to_dict())
    summary = f"rankspan {__version__}  {name}: Mat_{{{obj.n},{obj.p}}}(F{obj.q})  dim {obj.dim}  codim {obj.codim}"
    if isinstance(obj, AffineMatSubspace):
        summary += f"  linear {obj.is_linear()}"
    if args.out:
        _write(text, args.out)
        print(summary)
    else:
        print(text)
        print(summary, file=sys.stderr)
    return EXIT_OK


# analyze


def analyze(obj, spans=(), profile: bool = False, zero_spectrum: bool = False, budget=None) -> dict:
    report = {"version": __version__, "q": obj.q, "rows": obj.n, "cols": obj.p, "dim": obj.dim, "codim": obj.codim}
    if isinstance(obj, AffineMatSubspace):
        report["kind"] = "affine"
        report["linear"] = obj.is_linear()
        report["min_rank"] = affine.min_rank(obj, budget)
        if profile:
            counts: dict[int, int] = {}
            for blk in obj.element_blocks(budget):
                for r, c in zip(*np.unique(strata.ffmat.ranks_of(blk, obj.q), return_counts=True)):
                    counts[int(r)] = counts.get(int(r), 0) + int(c)
            report["profile"] = {str(k): v for k, v in sorted(counts.items())}
        return report
    report["kind"] = "linear"
    if profile:
        report["profile"] = strata.rank_profile(obj, budget).to_dict()
    for r in spans:
        S = strata.span_of_rank(obj, r, budget)
        report.setdefault("span_of_rank", {})[str(r)] = {"dim": S.dim, "equals_V": S == obj}
    if obj.n == obj.p and zero_spectrum:
        report["zero_spectrum"] = nilspec.has_zero_spectrum_property(obj, budget).status.value
    if (obj.q, obj.n, obj.p, obj.dim) == (2, 2, 2, 3):
        report["hyperplane_class"] = subspace.classify_hyperplane_2x2_F2(obj).value
    return report


def _human_report(rep: dict) -> str:
    lines = [f"rankspan {rep['version']}"]
    lines.append(f"{'ambient':<18}Mat_{{{rep['rows']},{rep['cols']}}}(F{rep['q']})")
    for key in ("kind", "dim", "codim", "linear", "min_rank", "zero_spectrum", "hyperplane_class"):
        if key in rep:
            lines.append(f"{key:<18}{rep[key]}")
    if "profile" in rep:
        lines.append(f"{'profile':<18}" + "  ".join(f"{k}:{v}" for k, v in rep["profile"].items()))
    for r, s in rep.get("span_of_rank", {}).items():
        rel = "= V" if s["equals_V"] else f"dim {s['dim']} < dim V"
        lines.append(f"{'span_of_rank(' + r + ')':<18}{rel}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    obj = load_object(args.path)
    rep = analyze(obj, args.span or (), args.profile, args.zero_spectrum, args.budget)
    fmt = args.format or "human"
    _write(json.dumps(rep, sort_keys=True, indent=2) if fmt == "json" else _human_report(rep), args.out)
    return EXIT_OK


# verify


def run_suite(args):
    s = args.suite
    q = args.q if args.q is not None else 2
    common = {"inject_failure": args.inject_failure}
    trial_kw = {"trials": args.trials or verify.DEFAULT_TRIALS, "seed": args.seed, "workers": args.workers}
    if s == "oddcase":
        return verify.suite_oddcase(**common)
    if s == "gerstenhaber":
        _need(args, "n")
        if args.exhaustive:
            return verify.suite_gerstenhaber_exhaustive(args.n, q, args.d, args.budget, **common)
        return verify.suite_strict_upper([args.n], [q], args.budget, **common)
    if s in ("lcinf", "exist", "condsuff", "genrangmax"):
        _need(args, "n", "p")
        fn = getattr(verify, f"suite_{s}")
        return fn(args.n, args.p, q, budget=args.budget, r=args.r, **trial_kw, **common)
    if s == "corhyper":
        _need(args, "n")
        return verify.suite_corhyper(args.n, q, args.budget, **common)
    if s == "flanders":
        _need(args, "n", "p")
        return verify.suite_flanders(args.n, args.p, q, args.budget, **common)
    if s == "hbound":
        mode = "EXHAUSTIVE" if args.exhaustive else (args.mode or "CONSTRUCT").upper()
        if mode not in ("CONSTRUCT", "EXHAUSTIVE"):
            raise UsageError(f"hbound mode must be CONSTRUCT or EXHAUSTIVE, got {mode}")
        given = [x is not None for x in (args.n, args.p, args.k)]
        if any(given) and not all(given):
            raise UsageError("hbound needs all of --n, --p, --k, or none of them for the full sweep")
        if all(given) and not args.n >= args.p >= args.k >= 1:
            raise UsageError("hbound needs n >= p >= k >= 1")
        points = [(args.n, args.p, args.k)] if all(given) else None
        return verify.suite_hbound(points, [q], mode, budget=args.budget, **common)
    if s == "tightness":
        _need(args, "n", "p", "r")
        if not (args.r >= 1 and args.n >= args.p >= args.r + 1):
            raise UsageError("tightness needs n >= p >= r + 1 >= 2")
        return verify.suite_tightness(args.n, args.p, args.r, q, args.budget, **common)
    if s in ("combin", "triangularize"):
        fn = verify.suite_combin if s == "combin" else verify.suite_triangularize
        trial_kw["trials"] = args.trials or 1000
        if s == "triangularize" and args.mode:
            if args.mode not in ("RECURSIVE", "EXHAUSTIVE"):
                raise UsageError("triangularize mode must be RECURSIVE or EXHAUSTIVE")
            return fn(max_n=args.n or 5, modes=(args.mode,), **trial_kw, **common)
        return fn(max_n=args.n or 5, **trial_kw, **common)
    raise UsageError(f"unknown suite {s!r}; choose from {', '.join(verify.SUITES)}")


def _human_verdict(v) -> str:
    lines = [f"rankspan {__version__}", f"{'suite':<14}{v.suite}", f"{'status':<14}{v.status.value}"]
    for k, val in v.params.items():
        lines.append(f"{'param ' + k:<14}{val}")
    if v.seed is not None:
        lines.append(f"{'seed':<14}{v.seed}")
    for k, val in v.counts.items():
        lines.append(f"{k:<14}{val}")
    lines.append(f"{'elapsed_ms':<14}{v.elapsed_ms}")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    v = run_suite(args)
    fmt = args.format or "json"
    text = v.to_json(timing=not args.no_timing) if fmt == "json" else _human_verdict(v)
    _write(text, args.out)
    if v.status is Status.FAIL:
        return EXIT_FAIL
    if v.status in (Status.BUDGET_EXCEEDED, Status.HYPOTHESIS_NOT_MET):
        return EXIT_USAGE
    return EXIT_OK


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _field(text: str) -> int:
    value = int(text)
    if value not in (2, 3, 5, 7):
        raise argparse.ArgumentTypeError("field size must be one of 2, 3, 5, 7")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rankspan", description="Rank-stratified matrix subspaces over small prime fields")
    parser.add_argument("--version", action="version", version=f"rankspan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--q", type=_field)
    for flag in ("n", "p", "k"):
        shared.add_argument(f"--{flag}", type=_positive)
    shared.add_argument("--r", type=_positive)
    shared.add_argument("--s", type=_nonneg)
    shared.add_argument("--seed", type=_nonneg, default=verify.DEFAULT_SEED)
    shared.add_argument("--budget", type=_positive, help=f"enumeration budget (default ${BUDGET_ENV} or 2^24)")
    shared.add_argument("--out")
    shared.add_argument("--format", choices=("human", "json"))

    c = sub.add_parser("construct", parents=[shared], help="write a named subspace to JSON")
    c.add_argument("name", choices=CONSTRUCT_NAMES)
    c.add_argument("--codim", type=_nonneg)

    a = sub.add_parser("analyze", parents=[shared], help="report on a subspace or affine JSON file")
    a.add_argument("path")
    a.add_argument("--profile", action="store_true", help="rank profile over all elements")
    a.add_argument("--span", type=_nonneg, action="append", metavar="R", help="dimension of span of rank-R elements")
    a.add_argument("--zero-spectrum", action="store_true")

    v = sub.add_parser("verify", parents=[shared], help="run a verification suite")
    v.add_argument("suite", choices=verify.SUITES)
    v.add_argument("--trials", type=_positive)
    v.add_argument("--workers", type=_positive, default=1)
    v.add_argument("--exhaustive", action="store_true")
    v.add_argument("--mode", type=str.upper, choices=("CONSTRUCT", "EXHAUSTIVE", "RECURSIVE"))
    v.add_argument("--d", type=_nonneg, help="subspace dimension for the exhaustive gerstenhaber scan")
    v.add_argument("--no-timing", action="store_true", help="write elapsed_ms as 0 for byte-stable output")
    v.add_argument("--inject-failure", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.budget is None:
            args.budget = default_budget()
        return {"construct": cmd_construct, "analyze": cmd_analyze, "verify": cmd_verify}[args.command](args)
    except UsageError as exc:
        print(f"rankspan: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"rankspan: budget exceeded: needs {exc.required}, budget {exc.budget} (raise --budget or ${BUDGET_ENV})", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"rankspan: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
