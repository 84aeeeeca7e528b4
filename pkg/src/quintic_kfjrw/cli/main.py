"""Command line: ``kfjrw verify|apply|expand-at|run|parse``.

Exit codes: 0 when every verification passes, 1 on a verification
failure, 2 on a usage or syntax error.  Settings come from an optional
``--config`` file of ``key=value`` lines; flags given on the command line
win.  Environment variables are not read.
"""

import argparse
import json
import sys
from pathlib import Path

from ..errors import DSLSyntaxError, KFJRWError
from .checks import CHECKS, Config, run_checks, summarize
from .evaluate import EvaluationError, Evaluator
from .parser import parse, parse_expr
from .printer import to_text

__all__ = ["main", "build_parser", "load_config"]

_CONFIG_KEYS = {
    "r": int, "order": int, "s_order": int, "a": int, "xi": int,
    "convention": str, "precision_bits": int, "e_part": int, "jobs": int,
}


class UsageError(Exception):
    pass


def load_config(path):
    """Parse a key=value file; blank lines and '#' comments are skipped."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        try:
            out[key] = _CONFIG_KEYS[key](val)
        except ValueError as exc:
            raise UsageError(f"{path}:{n}: bad value for {key}: {val!r}") from exc
    return out


def _common_flags(p):
    p.add_argument("--config", help="key=value settings file (flags override it)")
    p.add_argument("--r", type=int)
    p.add_argument("--order", type=int, help="x-order N")
    p.add_argument("--s-order", type=int, dest="s_order", help="s-truncation S")
    p.add_argument("--convention", choices=("r-factor", "no-r-factor"))
    p.add_argument("--precision-bits", type=int, dest="precision_bits")
    p.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    p.add_argument("--no-timings", action="store_true", help="drop timings for byte-stable output")


def build_parser():
    ap = argparse.ArgumentParser(prog="kfjrw", description="Exact checks of the quintic FJRW I-function identities.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run named verification checks")
    v.add_argument("check", choices=CHECKS)
    v.add_argument("--a", type=int)
    v.add_argument("--xi", type=int)
    v.add_argument("--jobs", type=int, help="worker processes for independent checks")
    _common_flags(v)

    e = sub.add_parser("expand-at", help="Laurent data of an expression at a point in q")
    e.add_argument("target")
    e.add_argument("--point", required=True, help="q=VALUE with VALUE 0, inf or an expression such as -1 or zeta(5)^2")
    _common_flags(e)

    a = sub.add_parser("apply", help="apply an operator to a series")
    a.add_argument("operator")
    a.add_argument("--to", required=True, dest="target")
    a.add_argument("--twist", help="character mu: S is replaced by mu*S")
    _common_flags(a)

    r = sub.add_parser("run", help="evaluate a program in the expression language")
    r.add_argument("program", nargs="?", help="program text (or use --file)")
    r.add_argument("--file", "-f")
    _common_flags(r)

    pp = sub.add_parser("parse", help="print the canonical form of a program")
    pp.add_argument("program")
    return ap


def _config(args):
    base = load_config(args.config) if getattr(args, "config", None) else {}
    for key in _CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            base[key] = val
    cfg = Config(**base)
    if cfg.r < 2:
        raise UsageError("--r must be at least 2")
    if cfg.order < 0:
        raise UsageError("--order must be nonnegative")
    if cfg.convention not in ("r-factor", "no-r-factor"):
        raise UsageError(f"unknown convention {cfg.convention!r}")
    return cfg


def _strip_timings(obj):
    if isinstance(obj, dict):
        return {k: _strip_timings(v) for k, v in obj.items() if k != "timings_ms"}
    if isinstance(obj, list):
        return [_strip_timings(v) for v in obj]
    return obj


def _emit(doc, args, out):
    if getattr(args, "no_timings", False):
        doc = _strip_timings(doc)
    text = json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
    path = getattr(args, "json", None)
    if path and path != "-":
        Path(path).write_text(text)
    if path == "-":
        out.write(text)
    return doc


def _print_summary(reports, out):
    for rep in reports:
        params = rep.get("params", {})
        ps = " ".join(f"{k}={v}" for k, v in sorted(params.items()) if not isinstance(v, (list, dict)))
        out.write(f"{rep['status']:7s} {rep['check']} {ps}\n".rstrip() + "\n")


def _cmd_verify(args, cfg, out):
    reports = run_checks(args.check, cfg)
    summary = summarize(reports)
    doc = {"command": "verify", "check": args.check, "config": _cfg_dict(cfg), "summary": summary, "reports": reports}
    _emit(doc, args, out)
    if args.json != "-":
        _print_summary(reports, out)
        c = summary["counts"]
        out.write(f"summary: {summary['status']} ({c['pass']} pass, {c['fail']} fail, "
                  f"{c['error']} error, {c['skipped']} skipped)\n")
    return 0 if summary["status"] == "pass" else 1


def _cfg_dict(cfg):
    return {k: getattr(cfg, k) for k in _CONFIG_KEYS if k != "jobs"}


def _point_text(text):
    text = text.strip()
    if text.startswith("q="):
        text = text[2:]
    elif text.startswith("q ="):
        text = text[3:]
    return text.strip()


def _run_statements(text, cfg, args, out):
    program = parse(text)
    results = Evaluator(cfg).run(program)
    status = "pass"
    for res in results:
        summ = res.get("summary")
        if summ and summ["status"] != "pass":
            status = "fail"
    doc = {"command": "run", "config": _cfg_dict(cfg), "results": results, "summary": {"status": status}}
    _emit(doc, args, out)
    if args.json != "-":
        for res in results:
            out.write(f"> {res['input']}\n")
            if "result" in res:
                out.write(res["result"] + "\n")
            if "expansions" in res:
                for ex in res["expansions"]:
                    out.write(f"{ex['at']}: order_low={ex['order_low']} in {ex['variable']}: "
                              f"[{', '.join(ex['coeffs'])}]\n")
            if "summary" in res:
                out.write(f"summary: {res['summary']['status']}\n")
    return 0 if status == "pass" else 1


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "parse":
            out.write(to_text(parse(args.program)) + "\n")
            return 0
        cfg = _config(args)
        if args.command == "verify":
            return _cmd_verify(args, cfg, out)
        if args.command == "expand-at":
            order = cfg.order if args.order is not None else 2
            target = to_text(parse_expr(args.target))
            point = to_text(parse_expr(_point_text(args.point)))
            text = f"expand-at {target} point {point} order {order}"
            return _run_statements(text, cfg, args, out)
        if args.command == "apply":
            text = f"apply {to_text(parse_expr(args.operator))} to {to_text(parse_expr(args.target))} order {cfg.order}"
            if args.twist:
                text += f" twist {to_text(parse_expr(args.twist))}"
            return _run_statements(text, cfg, args, out)
        if args.command == "run":
            if args.file:
                text = Path(args.file).read_text()
            elif args.program is not None:
                text = args.program
            else:
                raise UsageError("run needs program text or --file")
            return _run_statements(text, cfg, args, out)
    except (DSLSyntaxError, EvaluationError, UsageError) as exc:
        sys.stderr.write(f"kfjrw: error: {exc}\n")
        _emit({"status": "usage_error", "error": type(exc).__name__, "message": str(exc)}, args, out) \
            if getattr(args, "json", None) else None
        return 2
    except KFJRWError as exc:
        sys.stderr.write(f"kfjrw: {type(exc).__name__}: {exc}\n")
        if getattr(args, "json", None):
            _emit({"status": "error", "error": type(exc).__name__, "message": str(exc)}, args, out)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
