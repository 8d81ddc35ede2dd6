"""Command-line front end.

    cothdelta verify    [--phi SPEC ...] [--route-tol T]
    cothdelta figure    [--which 1|2] [--eps E] [--grid START:STOP:COUNT]
    cothdelta delta     --family NAME [--x-far X]
    cothdelta pair      --family NAME --phi SPEC
    cothdelta diffcheck [--phi SPEC ...] [--route-tol T]

Common flags: --eps0 --ratio --count (eps schedule), --tol (extrapolation
tolerance), --abs-tol --rel-tol (quadrature), --format csv|json, --out PATH,
--config FILE.  The config file holds ``key = value`` lines with the flag
names as keys; flags given on the command line win.

Exit codes: 0 success, 1 a verdict is false, 2 bad arguments, 3 numerical
non-convergence.
"""

import argparse
import csv
import io
import json
import math
import sys

from . import analysis
from .errors import CothDeltaError, DivergentPairing, MaxIntervalsExceeded, NoisyConvergence
from .families import FamilyId, LimitFnId, check_eps, eval_family, eval_limit, family_id
from .limits import EpsSchedule
from .quadrature import QuadConfig
from .testfn import bump, gaussian, hermite_gaussian, parse

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_NONCONVERGED = 3

DEFAULT_PHIS = (
    gaussian(0.0, 1.0),
    gaussian(3.0, 0.5),
    bump(0.0, 3.0),
    hermite_gaussian(0.0, 1.0, 2),
)

DEFAULTS = {
    "eps0": 0.1,
    "ratio": 0.5,
    "count": 13,
    "tol": analysis.DEFAULT_EXTRAP_TOL,
    "abs_tol": 1e-11,
    "rel_tol": 1e-10,
    "format": None,  # csv for figure, json otherwise
    "out": None,
    "phi": None,
    "route_tol": analysis.DEFAULT_ROUTE_TOL,
    "family": None,
    "which": 1,
    "eps": 0.05,
    "grid": "-3:3:601",
    "x_far": analysis.DEFAULT_X_FAR,
}

# keys each command accepts, beyond the common ones
COMMON = ("eps0", "ratio", "count", "tol", "abs_tol", "rel_tol", "format", "out")
PER_COMMAND = {
    "verify": ("phi", "route_tol"),
    "figure": ("which", "eps", "grid"),
    "delta": ("family", "x_far"),
    "pair": ("family", "phi"),
    "diffcheck": ("phi", "route_tol"),
}

FIGURE_COLUMNS = {
    1: ("x", "coth_classical", "coth_eps"),
    2: ("x", "neg_csch2", "dcoth_eps"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p):
    g = p.add_argument_group("common")
    g.add_argument("--eps0", type=float, help="first eps of the schedule (default 0.1)")
    g.add_argument("--ratio", type=float, help="schedule ratio in (0, 1) (default 0.5)")
    g.add_argument("--count", type=int, help="number of eps values, >= 4 (default 13)")
    g.add_argument("--tol", type=float, help="extrapolation tolerance (default 1e-8)")
    g.add_argument("--abs-tol", dest="abs_tol", type=float, help="quadrature absolute tolerance")
    g.add_argument("--rel-tol", dest="rel_tol", type=float, help="quadrature relative tolerance")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--out", metavar="PATH", help="write here instead of standard output")
    g.add_argument("--config", metavar="FILE", help="key = value file with defaults for these flags")


def build_parser():
    parser = _Parser(prog="cothdelta", description="eps-regularised coth families and the 2 delta(x) term")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("verify", help="three-route check of <coth', phi>")
    p.add_argument("--phi", action="append", help="test function, e.g. gaussian:mu=0,sigma=1 (repeatable)")
    p.add_argument("--route-tol", dest="route_tol", type=float, help="route agreement tolerance (default 1e-6)")
    _common(p)

    p = sub.add_parser("figure", help="curve data for figure 1 or 2")
    p.add_argument("--which", type=int, help="1: coth, 2: its derivative")
    p.add_argument("--eps", type=float, help="regularisation (default 0.05)")
    p.add_argument("--grid", help="START:STOP:COUNT (default -3:3:601)")
    _common(p)

    p = sub.add_parser("delta", help="delta weight at 0 from the net change")
    p.add_argument("--family", help="antiderivative family, e.g. coth_eps")
    p.add_argument("--x-far", dest="x_far", type=float, help="evaluation point (default 50)")
    _common(p)

    p = sub.add_parser("pair", help="eps trace and limit of <T_eps, phi>")
    p.add_argument("--family", help="catalog family, e.g. dg_eps")
    p.add_argument("--phi", action="append", help="test function")
    _common(p)

    p = sub.add_parser("diffcheck", help="smooth difference coth - 1/x has no delta")
    p.add_argument("--phi", action="append", help="test function (repeatable)")
    p.add_argument("--route-tol", dest="route_tol", type=float, help="agreement tolerance (default 1e-6)")
    _common(p)
    return parser


def read_config(path, command):
    """Flat ``key = value`` file; '#' starts a comment, ``phi`` may repeat."""
    allowed = set(COMMON) | set(PER_COMMAND[command])
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        value = value.strip()
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        if key not in allowed:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r} for {command}")
        if key == "phi":
            out.setdefault("phi", []).append(value)
            continue
        if key in out:
            raise UsageError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = _convert(key, value, f"{path}:{lineno}")
    return out


_TYPES = {"count": int, "which": int}
_STRINGS = ("format", "out", "family", "grid")


def _convert(key, value, where):
    if key in _STRINGS:
        if key == "format" and value not in ("csv", "json"):
            raise UsageError(f"{where}: format must be csv or json")
        return value
    try:
        return _TYPES.get(key, float)(value)
    except ValueError:
        raise UsageError(f"{where}: bad value {value!r} for {key}") from None


def resolve(ns):
    """Defaults < config file < command line."""
    keys = set(COMMON) | set(PER_COMMAND[ns.command])
    opts = {k: DEFAULTS[k] for k in keys}
    if ns.config:
        opts.update(read_config(ns.config, ns.command))
    for k in keys:
        v = getattr(ns, k, None)
        if v is not None:
            opts[k] = v
    opts["command"] = ns.command
    return opts


def parse_grid(text):
    parts = str(text).split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be START:STOP:COUNT, got {text!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"grid must be START:STOP:COUNT, got {text!r}") from None
    if not (math.isfinite(start) and math.isfinite(stop) and start < stop):
        raise UsageError(f"grid needs finite START < STOP, got {text!r}")
    if count < 2:
        raise UsageError(f"grid COUNT must be >= 2, got {count}")
    n = count - 1
    # endpoint-exact; a symmetric grid with odd COUNT hits 0 exactly
    return [(start * (n - i) + stop * i) / n for i in range(count)]


def validate(opts):
    """Build every numeric object up front so bad input never starts a run."""
    cmd = opts["command"]
    try:
        opts["schedule"] = EpsSchedule(opts["eps0"], opts["ratio"], opts["count"])
        opts["cfg"] = QuadConfig(opts["abs_tol"], opts["rel_tol"])
        if not (opts["tol"] > 0 and math.isfinite(opts["tol"])):
            raise ValueError(f"tol must be positive, got {opts['tol']!r}")
        if "route_tol" in opts and not (opts["route_tol"] > 0 and math.isfinite(opts["route_tol"])):
            raise ValueError(f"route-tol must be positive, got {opts['route_tol']!r}")
        if "phi" in opts:
            specs = opts["phi"]
            if specs is None:
                if cmd == "pair":
                    raise ValueError("pair needs --phi")
                opts["phis"] = list(DEFAULT_PHIS)
            else:
                opts["phis"] = [parse(s) for s in specs]
            if cmd == "pair" and len(opts["phis"]) != 1:
                raise ValueError("pair takes exactly one --phi")
        if "family" in opts:
            if opts["family"] is None:
                raise ValueError(f"{cmd} needs --family")
            opts["family"] = family_id(opts["family"])
            if cmd == "delta" and opts["family"] not in analysis.ANTIDERIVATIVES:
                raise ValueError(
                    "delta needs an antiderivative family: "
                    + ", ".join(f.value for f in analysis.ANTIDERIVATIVES)
                )
        if cmd == "delta":
            if not (opts["x_far"] >= 30.0 and math.isfinite(opts["x_far"])):
                raise ValueError(f"x-far must be >= 30, got {opts['x_far']!r}")
            for e in opts["schedule"].eps():
                check_eps(e)
        if cmd == "figure":
            if opts["which"] not in FIGURE_COLUMNS:
                raise ValueError(f"which must be 1 or 2, got {opts['which']!r}")
            opts["eps"] = check_eps(opts["eps"])
            opts["xs"] = parse_grid(opts["grid"])
    except (ValueError, CothDeltaError) as exc:
        raise UsageError(str(exc)) from None
    if opts["format"] is None:
        opts["format"] = "csv" if cmd == "figure" else "json"
    return opts


# ---------------------------------------------------------------- output


def fmt(v):
    """17 significant digits; None becomes an empty field."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _flatten(record, prefix=""):
    out = {}
    for k, v in record.items():
        name = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, name + "."))
        elif isinstance(v, (list, tuple)):
            out[name] = ";".join(fmt(x) if not isinstance(x, (list, tuple)) else "|".join(map(fmt, x)) for x in v)
        else:
            out[name] = v
    return out


def to_csv(header, rows):
    buf = io.StringIO()
    # minimal quoting: only fields holding ',' (test-function specs) get quotes
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def records_csv(records):
    flat = [_flatten(r) for r in records]
    header = list(flat[0]) if flat else []
    return to_csv(header, [[f.get(h) for h in header] for f in flat])


def records_json(records):
    return json.dumps(records, indent=2, allow_nan=False) + "\n"


def emit(opts, text):
    if opts["out"]:
        with open(opts["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _emit_records(opts, records):
    emit(opts, records_csv(records) if opts["format"] == "csv" else records_json(records))


# --------------------------------------------------------------- commands


def figure_rows(which, eps, xs):
    lim, fam = (
        (LimitFnId.COTH_CLASSICAL, FamilyId.COTH_EPS)
        if which == 1
        else (LimitFnId.NEG_CSCH2, FamilyId.DCOTH_EPS)
    )
    rows = []
    for x in xs:
        classical = None if x == 0.0 else eval_limit(lim, x)
        rows.append((x, classical, eval_family(fam, x, eps)))
    return rows


def cmd_figure(opts):
    which = opts["which"]
    rows = figure_rows(which, opts["eps"], opts["xs"])
    cols = FIGURE_COLUMNS[which]
    if opts["format"] == "csv":
        emit(opts, to_csv(cols, rows))
    else:
        _emit_records(opts, [dict(zip(cols, r)) for r in rows])
    return EXIT_OK


def _report_exit(reports):
    if not all(r.converged for r in reports):
        return EXIT_NONCONVERGED
    return EXIT_OK if all(r.verdict for r in reports) else EXIT_VERDICT


def cmd_verify(opts):
    reports = [
        analysis.verify_identity(phi, opts["schedule"], opts["cfg"], opts["route_tol"], opts["tol"])
        for phi in opts["phis"]
    ]
    _emit_records(opts, [r.to_dict() for r in reports])
    return _report_exit(reports)


def cmd_diffcheck(opts):
    reports = [
        analysis.difference_check(phi, opts["schedule"], opts["cfg"], opts["route_tol"], opts["tol"])
        for phi in opts["phis"]
    ]
    _emit_records(opts, [r.to_dict() for r in reports])
    return _report_exit(reports)


def cmd_delta(opts):
    rep = analysis.delta_weight(opts["family"], opts["x_far"], opts["schedule"], opts["tol"])
    _emit_records(opts, [rep.to_dict()])
    return EXIT_OK if rep.converged else EXIT_NONCONVERGED


def cmd_pair(opts):
    phi = opts["phis"][0]
    trace = analysis.pair(opts["family"], phi, opts["schedule"], opts["cfg"], opts["tol"])
    rec = {"family": opts["family"].value, "phi": phi.to_dict()}
    rec.update(trace.to_dict())
    _emit_records(opts, [rec])
    return EXIT_OK if trace.converged else EXIT_NONCONVERGED


COMMANDS = {
    "verify": cmd_verify,
    "figure": cmd_figure,
    "delta": cmd_delta,
    "pair": cmd_pair,
    "diffcheck": cmd_diffcheck,
}


def _glue_grid(argv):
    # argparse takes "-3:3:601" for an option; bind it to --grid explicitly
    out = []
    it = iter(argv)
    for a in it:
        if a == "--grid":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--grid={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None):
    parser = build_parser()
    argv = _glue_grid(sys.argv[1:] if argv is None else list(argv))
    try:
        ns = parser.parse_args(argv)
        opts = validate(resolve(ns))
    except UsageError as exc:
        print(f"cothdelta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return COMMANDS[opts["command"]](opts)
    except (MaxIntervalsExceeded, NoisyConvergence, DivergentPairing) as exc:
        print(f"cothdelta: no convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except OSError as exc:
        print(f"cothdelta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
