"""Command-line front end.

    genbessel (eval|verify|sweep|lemma|selftest) <id> [--param value]... [--tol T]
        [--terms N] [--tail-bound] [--output json|csv|text] [--out PATH] [--jobs K]
        [--config PATH] [--no-timestamp]

Exit codes: 0 when every requested verification passes, 1 when one fails,
2 on usage or domain errors.
"""

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from . import acceptance, besselk
from .complexfn import digamma, gamma, ln_gamma, rgamma
from .errors import BranchCut, DomainError, GenBesselError, ParameterPole, PoleError
from .identities import (
    DEFAULT_TOL, LemmaKind, Side, TailMode, TheoremId, TheoremParams, TruncationPolicy, VerificationReport, a_factor,
    eval_side, lemma_check, verify,
)
from .zetafn import zeta

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^(?P<re>[+-]?{_NUM})(?:(?P<im>[+-]{_NUM})i)?$|^(?P<pure>[+-]?{_NUM})i$")

COMPLEX_PARAMS = ("z", "w", "mu", "lam", "x", "alpha", "beta", "s")
PARAM_ORDER = ("z", "w", "mu", "lam", "x", "alpha", "beta", "a", "M", "n_for_lemma")
FUNCTIONS = ("k", "k_zw", "mu_k", "gamma", "rgamma", "ln_gamma", "digamma", "zeta", "a_factor")
_DOMAIN_ERRORS = (DomainError, PoleError, ParameterPole, BranchCut)


class UsageError(Exception):
    pass


def parse_complex(text):
    """Parse R, Ri, R+Si or R-Si (decimal literals, no whitespace) into a complex."""
    m = _COMPLEX_RE.match(str(text))
    if not m:
        raise ValueError(f"not a complex literal: {text!r} (expected R, Ri, R+Si or R-Si)")
    if m.group("pure") is not None:
        return complex(0.0, float(m.group("pure")))
    return complex(float(m.group("re")), float(m.group("im") or 0.0))


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _range_arg(text):
    parts = str(text).split(":")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--z-range needs start:stop:step, got {text!r}") from None
    if len(parts) != 3 or not step > 0 or stop < start or not all(map(math.isfinite, (start, stop, step))):
        raise argparse.ArgumentTypeError("--z-range needs finite start <= stop and step > 0")
    return start, stop, step


def _pos_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _pos_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _real(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a real number, got {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("expected a finite number")
    return v


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="genbessel", allow_abbrev=False,
                description="Generalized Bessel functions and their summation identities.")
    p.add_argument("command", choices=("eval", "verify", "sweep", "lemma", "selftest"))
    p.add_argument("id", nargs="?", default=None, help="function, theorem or lemma id")
    for name in COMPLEX_PARAMS:
        flags = [f"--{name}"] + (["--lambda"] if name == "lam" else [])
        p.add_argument(*flags, dest=name, type=_complex_arg, default=None)
    p.add_argument("--a", type=_real, default=None, help="lemma frequency")
    p.add_argument("--M", "--m", dest="M", type=_pos_int, default=None, help="continuation order")
    p.add_argument("--n", "--n-for-lemma", dest="n_for_lemma", type=_pos_int, default=None)
    p.add_argument("--tol", type=_pos_float, default=None)
    p.add_argument("--terms", type=_pos_int, default=20)
    p.add_argument("--tail-bound", action="store_true", default=False)
    p.add_argument("--tail-tol", type=_pos_float, default=1e-13)
    p.add_argument("--output", choices=("json", "csv", "text"), default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=_pos_int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--no-timestamp", action="store_true", default=False)
    p.add_argument("--z-range", type=_range_arg, default=None)
    p.add_argument("--z-imag", type=_real, default=0.0)
    p.add_argument("--only", default=None, help="selftest: comma-separated groups or criterion numbers")
    p.add_argument("--json", action="store_true", default=False, help="selftest: JSON output")
    return p


def read_config(path, parser):
    """key = value lines ('#' comments) mapped onto flag defaults."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from None
    actions = {a.dest: a for a in parser._actions}
    values = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        dest = key.lstrip("-").replace("-", "_")
        dest = {"lambda": "lam", "m": "M", "n": "n_for_lemma"}.get(dest, dest)
        if dest not in actions or dest in ("command", "id", "config", "help"):
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        act = actions[dest]
        try:
            if act.nargs == 0:
                values[dest] = _bool(val)
            elif act.type is not None:
                values[dest] = act.type(val)
            else:
                values[dest] = val
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
        if act.choices is not None and values[dest] not in act.choices:
            raise UsageError(f"{path}:{lineno}: {key} must be one of {', '.join(act.choices)}")
    return values


_NEG_VALUE = re.compile(r"^-[\d.]")


def _attach_negative_values(argv, parser):
    # argparse reads "-0.6+0.1i" as an option; bind such values to their flag
    takes_value = {s for a in parser._actions if a.option_strings and a.nargs != 0 for s in a.option_strings}
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in takes_value and i + 1 < len(argv) and _NEG_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def parse_args(argv):
    parser = build_parser()
    argv = _attach_negative_values(list(argv), parser)
    args = parser.parse_args(argv)
    if args.config:
        # file values become defaults, so flags given on the command line win
        parser.set_defaults(**read_config(args.config, parser))
        args = parser.parse_args(argv)
    for act in parser._actions:
        # argparse hands back a bare "--" value as [] without type conversion
        if act.option_strings and isinstance(getattr(args, act.dest, None), list):
            raise UsageError(f"{act.option_strings[0]} needs a value")
    return args


def _policy(args):
    mode = TailMode.TAIL_BOUND if args.tail_bound else TailMode.FIXED_N
    return TruncationPolicy(series_terms_N=args.terms, tail_mode=mode, tail_tol=args.tail_tol)


def _params(args):
    kw = {name: getattr(args, name) for name in PARAM_ORDER if getattr(args, name) is not None}
    return TheoremParams(**kw)


# ------------------------------------------------------------ output

def _finite(v):
    return v if not isinstance(v, float) or math.isfinite(v) else None


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    return _finite(obj)


def _cx(v):
    v = complex(v)
    return {"re": v.real, "im": v.imag}


def _fmt_c(v):
    if v is None:
        return "-"
    v = complex(v)
    return f"{v.real:.16g}{v.imag:+.16g}i"


def reports_json(reports, timestamps):
    return json.dumps([_clean(r.to_dict(timestamps)) for r in reports], indent=2, sort_keys=False) + "\n"


def reports_csv(reports, timestamps):
    names = [n for n in PARAM_ORDER if any(getattr(r.params, n) is not None for r in reports)]
    header = ["theorem"]
    for n in names:
        header += [f"{n}_re", f"{n}_im"] if n not in ("a", "M", "n_for_lemma") else [n]
    header += ["lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_residual", "rel_residual", "passed", "tol",
               "series", "flags", "error"]
    if timestamps:
        header.append("wall_time_ms")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in reports:
        row = [r.theorem.value]
        for n in names:
            v = getattr(r.params, n)
            if n in ("a", "M", "n_for_lemma"):
                row.append("" if v is None else repr(v))
            else:
                row += ["", ""] if v is None else [repr(v.real), repr(v.imag)]
        for v in (r.lhs, r.rhs):
            row += ["", ""] if v is None else [repr(v.real), repr(v.imag)]
        row += [repr(r.abs_residual), repr(r.rel_residual), str(r.passed).lower(), repr(r.tol),
                ";".join(f"{s.label}:{s.terms}:{s.tail!r}" for s in r.per_series_terms),
                ";".join(r.flags), r.error or ""]
        if timestamps:
            row.append(repr(r.wall_time_ms))
        w.writerow(row)
    return buf.getvalue()


def reports_text(reports, timestamps):
    lines = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        params = " ".join(f"{k}={_fmt_c(v) if isinstance(v, complex) else v}" for k, v in
                          ((n, getattr(r.params, n)) for n in PARAM_ORDER) if v is not None)
        lines.append(f"[{status}] {r.theorem.value} {params}")
        lines.append(f"  lhs = {_fmt_c(r.lhs)}")
        lines.append(f"  rhs = {_fmt_c(r.rhs)}")
        lines.append(f"  abs_residual = {r.abs_residual:.3e}  rel_residual = {r.rel_residual:.3e}  tol = {r.tol:g}")
        for s in r.per_series_terms:
            lines.append(f"  series {s.label}: {s.terms} terms, tail {s.tail:.2e}")
        for f in r.flags:
            lines.append(f"  flag {f}")
        if r.error:
            lines.append(f"  error {r.error}")
        if timestamps:
            lines.append(f"  wall_time_ms = {r.wall_time_ms:.1f}")
    return "\n".join(lines) + "\n"


def _emit(text, args):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_reports(reports, args):
    fmt = args.output or "json"
    ts = not args.no_timestamp
    text = {"json": reports_json, "csv": reports_csv, "text": reports_text}[fmt](reports, ts)
    _emit(text, args)
    return EXIT_PASS if reports and all(r.passed for r in reports) else EXIT_FAIL


# ---------------------------------------------------------- commands

def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing parameter(s): " + ", ".join("--" + n for n in missing))
    return tuple(getattr(args, n) for n in names)


def _eval_values(args):
    fid = args.id
    if fid == "k":
        z, x = _need(args, "z", "x")
        cosh = besselk.k_classical(z, x)
        mb = besselk.k_zw_mellin_barnes(besselk.BesselParamsKZW(z, 0, x))
        return {"cosh_integral": cosh, "mellin_barnes": mb}, abs(cosh - mb)
    if fid == "k_zw":
        z, w, x = _need(args, "z", "w", "x")
        p = besselk.BesselParamsKZW(z, w, x)
        a, b = besselk.k_zw_integral(p), besselk.k_zw_mellin_barnes(p)
        return {"integral": a, "mellin_barnes": b}, abs(a - b)
    if fid == "mu_k":
        mu, z, lam, x = _need(args, "mu", "z", "lam", "x")
        return {"value": besselk.mu_k(besselk.BesselParamsMuK(mu, z, lam, x))}, None
    if fid in ("gamma", "rgamma", "ln_gamma", "digamma", "zeta"):
        (s,) = _need(args, "s")
        fn = {"gamma": gamma, "rgamma": rgamma, "ln_gamma": ln_gamma, "digamma": digamma, "zeta": zeta}[fid]
        return {"value": complex(fn(s))}, None
    if fid == "a_factor":
        n, z, w, x = _need(args, "n_for_lemma", "z", "w", "x")
        return {"value": a_factor(n, z, w, x)}, None
    theorem = _theorem(fid)
    params, policy = _params(args), _policy(args)
    lhs, _ = eval_side(theorem, Side.LHS, params, policy)
    rhs, _ = eval_side(theorem, Side.RHS, params, policy)
    return {"lhs": lhs, "rhs": rhs}, abs(lhs - rhs)


def cmd_eval(args):
    values, diff = _eval_values(args)
    fmt = args.output or "text"
    if fmt == "json":
        out = {"id": args.id, "params": _params(args).to_dict(), "values": {k: _cx(v) for k, v in values.items()},
               "difference": diff}
        if args.s is not None:
            out["params"]["s"] = _cx(args.s)
        text = json.dumps(_clean(out), indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "name", "re", "im"])
        for k, v in values.items():
            w.writerow([args.id, k, repr(v.real), repr(v.imag)])
        if diff is not None:
            w.writerow([args.id, "difference", repr(diff), "0.0"])
        text = buf.getvalue()
    else:
        lines = [f"{args.id}"] + [f"  {k:<14s} {_fmt_c(v)}" for k, v in values.items()]
        if diff is not None:
            lines.append(f"  {'difference':<14s} {diff:.3e}")
        text = "\n".join(lines) + "\n"
    _emit(text, args)
    return EXIT_PASS


def _theorem(fid):
    if fid is None:
        raise UsageError("a theorem id is required")
    try:
        t = TheoremId.parse(fid)
    except KeyError:
        raise UsageError(f"unknown id {fid!r}; theorems: {', '.join(m.value for m in TheoremId)}"
                         f"; functions: {', '.join(FUNCTIONS)}") from None
    return t


def cmd_verify(args):
    theorem = _theorem(args.id)
    report = verify(theorem, _params(args), _policy(args), args.tol or DEFAULT_TOL)
    return _write_reports([report], args)


def cmd_lemma(args):
    key = (args.id or "").lower().replace("lemma_", "")
    try:
        kind = LemmaKind(key)
    except ValueError:
        raise UsageError(f"unknown lemma {args.id!r}; expected kzw or muk") from None
    report = lemma_check(kind, _params(args), args.tol or 1e-6)
    return _write_reports([report], args)


def _sweep_one(task):
    theorem, params, policy, tol = task
    try:
        return verify(theorem, params, policy, tol)
    except GenBesselError as exc:
        return VerificationReport(theorem, params, None, None, math.inf, math.inf, tol=tol,
                                  error=f"{type(exc).__name__}: {exc}")


def sweep_points(z_range, z_imag):
    start, stop, step = z_range
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [complex(round(start + k * step, 12), z_imag) for k in range(count)]


def cmd_sweep(args):
    theorem = _theorem(args.id)
    if args.z_range is None:
        raise UsageError("sweep needs --z-range start:stop:step")
    base, policy, tol = _params(args), _policy(args), args.tol or DEFAULT_TOL
    tasks = [(theorem, base.replace(z=z), policy, tol) for z in sweep_points(args.z_range, args.z_imag)]
    jobs = args.jobs or os.cpu_count() or 1
    if jobs == 1 or len(tasks) == 1:
        reports = [_sweep_one(t) for t in tasks]
    else:
        # map keeps the input order whatever the completion order
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            reports = list(pool.map(_sweep_one, tasks))
    return _write_reports(reports, args)


def cmd_selftest(args):
    only = None
    if args.only:
        only = {s.strip() for s in args.only.split(",") if s.strip()}
        valid = set(acceptance.GROUPS) | {str(c[0]) for c in acceptance.CRITERIA}
        bad = only - valid
        if bad:
            raise UsageError(f"unknown selftest group(s) {', '.join(sorted(bad))}; "
                             f"groups: {', '.join(acceptance.GROUPS)}")
    results = acceptance.run_suite(only)
    if args.json or args.output == "json":
        text = json.dumps([_clean(r.to_dict()) for r in results], indent=2) + "\n"
    else:
        text = "\n".join(acceptance.format_line(r) for r in results) + "\n"
        n_ok = sum(r.passed for r in results)
        text += f"{n_ok}/{len(results)} criteria passed\n"
    _emit(text, args)
    return EXIT_PASS if all(r.passed for r in results) else EXIT_FAIL


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "sweep": cmd_sweep, "lemma": cmd_lemma,
            "selftest": cmd_selftest}


def run(argv):
    """Run the CLI on ``argv`` and return the exit code."""
    try:
        args = parse_args(list(argv))
        if args.command != "selftest" and args.id is None:
            raise UsageError(f"{args.command} needs an id")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(build_parser().format_usage())
        sys.stderr.write(f"genbessel: error: {exc}\n")
        return EXIT_USAGE
    except _DOMAIN_ERRORS as exc:
        sys.stderr.write(f"genbessel: domain error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    except GenBesselError as exc:
        sys.stderr.write(f"genbessel: numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    except OSError as exc:
        sys.stderr.write(f"genbessel: error: {exc}\n")
        return EXIT_USAGE


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
