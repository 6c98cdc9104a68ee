"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 domain error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import io
import math
import os
import re
import sys
import tempfile

import numpy as np

from .errors import DomainError, LemmaViolation

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3


# ------------------------------------------------------------------ output


def fmt(x) -> str:
    """17 significant digits, so every printed float parses back exactly."""
    return "%.17g" % x


def to_json(obj) -> str:
    """Compact JSON with 17-digit floats; non-finite floats become ``null``."""
    if isinstance(obj, bool) or obj is None:
        return "true" if obj is True else "false" if obj is False else "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        import json
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{to_json(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


class OutputError(Exception):
    pass


def emit(text: str, out: str | None) -> None:
    """Write ``text`` to stdout, or atomically to ``out`` (temp file + rename)."""
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".jnb-", suffix=".tmp")
    except OSError as exc:
        raise OutputError(f"cannot write to {out}: {exc}") from exc
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise OutputError(f"cannot write to {out}: {exc}") from exc


def _table(rows, columns, fmt_kind):
    buf = io.StringIO()
    if fmt_kind == "csv":
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    else:
        for row in rows:
            buf.write(to_json(dict(zip(columns, row))) + "\n")
    return buf.getvalue()


# ------------------------------------------------------------------ argument types


_C0_RE = re.compile(r"^\s*([0-9.eE+-]+)\s*\*?\s*C0\s*$")


def parse_c(text: str):
    """A float, or a multiple of the threshold written ``2C0`` / ``2*C0``."""
    m = _C0_RE.match(text)
    if m:
        return ("C0", float(m.group(1)))
    try:
        return ("abs", float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number or multiple of C0: {text!r}")


def resolve_c(p: float, spec) -> float:
    kind, val = spec
    if kind == "abs":
        return val
    from .transition import thresholds
    return val * thresholds(p)[1]


def _setup(args):
    from .transition import construct
    return construct(args.p, resolve_c(args.p, args.C))


# ------------------------------------------------------------------ commands


def cmd_eps0(args):
    from .special import omega
    return to_json({"p": args.p, "eps0": omega(args.p)}) + "\n"


def cmd_eval(args):
    from .candidate import bellman, bellman_x2
    params, tc = _setup(args)
    x = (args.x1, args.x2)
    bv = bellman(params, tc, x)
    try:
        bx2 = bellman_x2(params, tc, x)
    except (DomainError, LemmaViolation):
        bx2 = math.nan
    return to_json({"p": params.p, "C": params.C, "x1": args.x1, "x2": args.x2,
                    "label": bv.label.name, "b": bv.value, "b_x2": bx2,
                    "foliation": bv.foliation}) + "\n"


def cmd_grid(args):
    from .candidate import bellman_many
    params, tc = _setup(args)
    r_max = params.C if args.R_max is None else args.R_max
    if not 1 <= args.R_min <= r_max <= params.C:
        raise DomainError(f"need 1 <= R-min <= R-max <= C = {params.C!r}")
    if args.n1 < 1 or args.n2 < 1:
        raise DomainError("grid sizes must be positive")
    x1 = np.linspace(args.x1_min, args.x1_max, args.n1)
    rr = np.linspace(args.R_min, r_max, args.n2)
    X1, RR = np.meshgrid(x1, rr, indexing="ij")
    X1, X2 = X1.ravel(), (RR * np.exp(X1)).ravel()
    vals, labels = bellman_many(params, tc, X1, X2)
    rows = [(float(a), float(b), f"R{int(lab)}", float(v))
            for a, b, lab, v in zip(X1, X2, labels, vals)]
    return _table(rows, ["x1", "x2", "label", "b"], args.format)


def cmd_optimizer(args):
    from .optimizer import a_infty_characteristic, build_optimizer, moments
    params, tc = _setup(args)
    phi = build_optimizer(params, tc, (args.x1, args.x2))
    if args.samples < 1:
        raise DomainError("samples must be positive")
    t = (np.arange(args.samples) + 0.5) / args.samples
    rows = [(float(a), float(b)) for a, b in zip(t, phi(t))]
    mo = moments(phi, params.p)
    footer = {"mean": mo.mean, "exp_mean": mo.exp_mean, "p_mean": mo.p_mean,
              "a_infty": a_infty_characteristic(phi)}
    body = _table(rows, ["t", "phi"], args.format)
    if args.format == "csv":
        return body + "# " + to_json(footer) + "\n"
    return body + to_json(footer) + "\n"


def cmd_verify(args):
    from .verification import run_suite
    rep = run_suite(args.p, resolve_c(args.p, args.C), args.seed)
    d = rep.to_dict()
    args._status = EXIT_OK if rep.passed else EXIT_FAIL
    return to_json(d) + "\n"


def cmd_limit_scan(args):
    from .special import omega
    from .verification import limit_scan
    cs = [resolve_c(args.p, c) for c in args.C]
    target = omega(args.p) ** args.p
    rows = [(C, b, gap, gap / target) for C, b, gap in limit_scan(args.p, cs)]
    return _table(rows, ["C", "b0C", "gap", "rel_gap"], args.format)


def cmd_constants(args):
    params, tc = _setup(args)
    return to_json({"p": params.p, "C": params.C, "xi": params.xi, "xi0": tc.xi0,
                    "C0": tc.c0, "c1": tc.c1, "c2": tc.c2, "w_star": tc.w_star,
                    "w_bar": tc.w_bar, "v_bar": tc.v_bar, "D_w_bar": tc.d_bar}) + "\n"


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jnbellman",
                                 description="Bellman-function computations for BMO^p.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, *, c=True, point=False, out=True, fmt_opt=False):
        sp.add_argument("--p", type=float, required=True)
        if c:
            sp.add_argument("--C", type=parse_c, required=True,
                            help="a number, or a multiple of the threshold such as 2C0")
        if point:
            sp.add_argument("--x1", type=float, required=True)
            sp.add_argument("--x2", type=float, required=True)
        if out:
            sp.add_argument("--out", default=None, help="output file (default: stdout)")
        if fmt_opt:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("eps0", help="the constant eps_0(p)")
    common(sp, c=False)
    sp.set_defaults(func=cmd_eps0)

    sp = sub.add_parser("eval", help="b and b_x2 at one point")
    common(sp, point=True)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("grid", help="b on a grid x2 = R e^x1")
    common(sp, fmt_opt=True)
    sp.add_argument("--x1-min", type=float, default=-3.0)
    sp.add_argument("--x1-max", type=float, default=3.0)
    sp.add_argument("--n1", type=int, default=61)
    sp.add_argument("--R-min", type=float, default=1.0)
    sp.add_argument("--R-max", type=float, default=None, help="default: C")
    sp.add_argument("--n2", type=int, default=21)
    sp.set_defaults(func=cmd_grid)

    sp = sub.add_parser("optimizer", help="sampled optimizer profile and its moments")
    common(sp, point=True, fmt_opt=True)
    sp.add_argument("--samples", type=int, default=1000)
    sp.set_defaults(func=cmd_optimizer)

    sp = sub.add_parser("verify", help="run the verification suite")
    common(sp)
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("limit-scan", help="b(0, C) against omega(p)^p")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--C", type=parse_c, nargs="+", required=True)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_limit_scan)

    sp = sub.add_parser("constants", help="xi and the transition constants")
    common(sp)
    sp.set_defaults(func=cmd_constants)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args._status = EXIT_OK
    try:
        text = args.func(args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except LemmaViolation as exc:
        print(f"lemma hypothesis violated: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        emit(text, getattr(args, "out", None))
    except OutputError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return args._status


if __name__ == "__main__":
    sys.exit(main())
