"""``hartogs-lab`` command line.

Exit codes: 0 success, 1 a consistency check ran and failed, 2 parse or usage
error, 3 precondition violated, 4 precision exhausted or certification failed.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from ..algebraic import (
    GaussQ,
    format_lift,
    hensel_lift_exact,
    hensel_lift_numeric,
    root_seeds,
    theorem1_consistency,
)
from ..algebraic.consistency import INFINITE, check_point
from ..diophantine import factoradic_states, witness_search
from ..errors import (
    CertificationFailed,
    HartogsError,
    ParseError,
    PrecisionExhausted,
    PreconditionError,
)
from ..hartogs import (
    ExactPoint,
    counterexample_series,
    divergence_certificate,
    rational_termination,
    scan_grid,
    write_scan_csv,
)
from ..numeric import MIN_BITS, PrecisionBudget, fmt_ball, working_precision
from ..theta import ThetaContext, c_constant, log_abs_theta, theta11_direct
from .parser import parse_bivar, parse_complex, parse_poly, parse_real

EXIT_OK, EXIT_CHECK_FAILED, EXIT_PARSE, EXIT_PRECONDITION, EXIT_PRECISION = 0, 1, 2, 3, 4


@dataclass
class CommandResult:
    exit_code: int
    payload: str = ""
    diagnostics: list = field(default_factory=list)


def _csv(header, rows):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


def _bits(text):
    v = int(text)
    if v < MIN_BITS:
        raise argparse.ArgumentTypeError(f"precision must be at least {MIN_BITS} bits")
    return v


def _ctx(args):
    tau = parse_complex(args.tau0)
    return ThetaContext(tau.re, tau.im)


def _budget(args):
    return PrecisionBudget(bits=args.prec)


def _point(args):
    return ExactPoint(parse_real(args.x), parse_real(args.y))


def _cplx(v):
    re, im = fmt_ball(v.real), fmt_ball(v.imag)
    return re, im


# ---------------------------------------------------------------------------
# theta


def cmd_theta_eval(args):
    ctx = _ctx(args)
    z = parse_complex(args.at)
    with working_precision(args.prec):
        val = theta11_direct(z.to_acb(), ctx.tau, args.prec)
        lg = log_abs_theta(z.to_acb(), ctx, args.prec)
    log_s = "-inf" if lg.is_neg_inf else fmt_ball(lg.value)
    rows = [[str(z), *_cplx(val), fmt_ball(val.rad()) if hasattr(val, "rad") else "", log_s]]
    return _csv(["z", "theta_re", "theta_im", "radius", "log_abs_theta"], rows)


def cmd_theta_constant(args):
    ctx = _ctx(args)
    cb = c_constant(ctx, args.level)
    rows = [[fmt_ball(cb.c), fmt_ball(cb.upper), fmt_ball(cb.argmin[0]), fmt_ball(cb.argmin[1]),
             str(cb.on_boundary).lower(), str(cb.level)]]
    return _csv(["c_lower", "c_upper", "argmin_x", "argmin_y", "on_boundary", "level"], rows)


# ---------------------------------------------------------------------------
# diophantine


def cmd_dioph_factoradic(args):
    x = parse_real(args.x)
    states = factoradic_states(x, args.terms, _budget(args))
    rows = [[s.k, s.a, fmt_ball(s.b), s.E] for s in states]
    return _csv(["k", "a_k", "b_k", "E_k"], rows)


def cmd_dioph_witnesses(args):
    x = parse_real(args.x)
    ws = witness_search(x, args.max_n, _budget(args))
    # gap to the previous witness is reported only; no bound on it is claimed
    prev = [0] + [w.n for w in ws]
    rows = [[w.n, fmt_ball(w.d_bound), str(w.threshold), w.n - p] for w, p in zip(ws, prev)]
    return _csv(["n", "abs_d_nfact_x", "threshold", "gap"], rows)


# ---------------------------------------------------------------------------
# counterexample


def _grid(spec):
    parts = spec.split(":")
    if len(parts) != 5:
        raise ParseError("grid must be x0:x1:y0:y1:res", 0, spec)
    offs, pos = [], 0
    for p in parts:
        offs.append(pos)
        pos += len(p.encode()) + 1
    vals = []
    for p, off in zip(parts[:4], offs):
        try:
            vals.append(parse_real(p))
        except ParseError as exc:
            raise ParseError(str(exc).split(" (at byte")[0], off + exc.offset, spec) from None
    if not parts[4].strip().isdigit():
        raise ParseError("resolution must be an integer", offs[4], spec)
    return tuple(vals), int(parts[4])


def cmd_cex_scan(args):
    ctx = _ctx(args)
    region, res = _grid(args.grid)
    rows = scan_grid(counterexample_series(ctx), region, res, args.terms, args.window,
                     _budget(args), workers=args.workers)
    buf = io.StringIO()
    write_scan_csv(rows, buf)
    return buf.getvalue()


def cmd_cex_certify(args):
    ctx = _ctx(args)
    alpha = _point(args)
    certs = divergence_certificate(counterexample_series(ctx), alpha, args.max_n,
                                   PrecisionBudget(bits=args.prec, max_restarts=args.restarts),
                                   c_level=args.c_level)
    rows = [
        [c.n, c.coord, fmt_ball(c.d_coord), str(c.threshold), fmt_ball(c.lower_bound),
         fmt_ball(c.log_abs_fn), ";".join(k for k, v in c.links.items() if v), str(c.dominated).lower()]
        for c in certs
    ]
    header = ["n", "coord", "abs_d", "threshold", "log_lower_bound", "log_abs_fn", "links_passed", "dominated"]
    return _csv(header, rows)


def cmd_cex_terminate(args):
    ctx = _ctx(args)
    alpha = _point(args)
    n0 = rational_termination(counterexample_series(ctx), alpha)
    return _csv(["x", "y", "n0"], [[str(alpha.x), str(alpha.y), n0]])


# ---------------------------------------------------------------------------
# algebraic


def cmd_alg_lift(args):
    phi = parse_poly(args.phi)
    if args.at is None:
        seed = parse_bivar(args.seed) if args.seed else None
        if seed is None:
            raise PreconditionError("exact lifting needs --seed (a root of Phi(z, 0, X) in z)")
        lift = hensel_lift_exact(phi, seed, args.terms)
        return format_lift(lift, [f"relation: {phi}", f"seed: {seed}"])
    z0 = parse_complex(args.at)
    if args.seed:
        x0 = parse_complex(args.seed).to_acb()
    else:
        seeds = root_seeds(phi, z0)
        if not seeds:
            raise PreconditionError("no certified simple root at w = 0")
        x0 = max(seeds, key=lambda b: (float(b.real.mid()), float(b.imag.mid())))
    lift = hensel_lift_numeric(phi, z0, x0, args.terms, _budget(args))
    rows = [[n, *_cplx(c), fmt_ball(c.rad())] for n, c in enumerate(lift.coeffs)]
    return _csv(["n", "re", "im", "radius"], rows)


def _radius_str(r):
    if r is None:
        return ""
    return "inf" if r is INFINITE else fmt_ball(r)


def cmd_alg_radius(args):
    phi = parse_poly(args.phi)
    z0 = parse_complex(args.at[0] if isinstance(args.at, list) else args.at)
    row = check_point(phi, z0, args.terms, args.window, _budget(args))
    out = [[str(z0), _radius_str(row.disc_radius), _radius_str(row.series_radius), row.verdict.kind,
            "" if row.ratio is None else format(row.ratio, ".17g")]]
    return _csv(["z0", "disc_radius", "series_radius", "verdict", "ratio"], out)


def cmd_alg_check(args):
    phi = parse_poly(args.phi)
    samples = [parse_complex(a) for a in args.at]
    rep = theorem1_consistency(phi, samples, args.terms, args.window, _budget(args),
                               workers=args.workers, contrast=not args.no_contrast)
    return rep.text() + "\n", (EXIT_OK if rep.passed else EXIT_CHECK_FAILED)


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="hartogs-lab", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=_bits, default=128, help="working precision in bits")
    common.add_argument("--out", default="-", help="output path, or - for stdout")
    tau = argparse.ArgumentParser(add_help=False)
    tau.add_argument("--tau0", default="0+1i", help="lattice parameter a+bi, Im > 0")
    pt = argparse.ArgumentParser(add_help=False)
    pt.add_argument("--x", required=True, help="lattice coordinate x (exact real)")
    pt.add_argument("--y", required=True, help="lattice coordinate y (exact real)")

    groups = p.add_subparsers(dest="group", required=True)

    g = groups.add_parser("theta").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("eval", parents=[common, tau])
    s.add_argument("--at", required=True)
    s.set_defaults(fn=cmd_theta_eval)
    s = g.add_parser("constant", parents=[common, tau])
    s.add_argument("--level", type=int, default=5)
    s.set_defaults(fn=cmd_theta_constant)

    g = groups.add_parser("dioph").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("factoradic", parents=[common])
    s.add_argument("--x", required=True)
    s.add_argument("--terms", type=int, default=10)
    s.set_defaults(fn=cmd_dioph_factoradic)
    s = g.add_parser("witnesses", parents=[common])
    s.add_argument("--x", required=True)
    s.add_argument("--max-n", type=int, default=20)
    s.set_defaults(fn=cmd_dioph_witnesses)

    g = groups.add_parser("cex").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("scan", parents=[common, tau])
    s.add_argument("--grid", required=True, help="x0:x1:y0:y1:res")
    s.add_argument("--terms", type=int, default=25)
    s.add_argument("--window", type=int, default=None)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(fn=cmd_cex_scan)
    s = g.add_parser("certify", parents=[common, tau, pt])
    s.add_argument("--max-n", type=int, default=15)
    s.add_argument("--restarts", type=int, default=5)
    s.add_argument("--c-level", type=int, default=5)
    s.set_defaults(fn=cmd_cex_certify)
    s = g.add_parser("terminate", parents=[common, tau, pt])
    s.set_defaults(fn=cmd_cex_terminate)

    g = groups.add_parser("alg").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("lift", parents=[common])
    s.add_argument("--phi", required=True)
    s.add_argument("--seed", default=None, help="F0 (in z) for exact lifts; root guess with --at")
    s.add_argument("--at", default=None, help="sample point z0 for a numeric lift")
    s.add_argument("--terms", type=int, default=8)
    s.set_defaults(fn=cmd_alg_lift)
    s = g.add_parser("radius", parents=[common])
    s.add_argument("--phi", required=True)
    s.add_argument("--at", required=True)
    s.add_argument("--terms", type=int, default=512)
    s.add_argument("--window", type=int, default=None)
    s.set_defaults(fn=cmd_alg_radius)
    s = g.add_parser("check-theorem1", parents=[common])
    s.add_argument("--phi", required=True)
    s.add_argument("--at", action="append", required=True)
    s.add_argument("--terms", type=int, default=512)
    s.add_argument("--window", type=int, default=None)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--no-contrast", action="store_true")
    s.set_defaults(fn=cmd_alg_check)
    return p


def run(argv):
    """Execute one command; never raises for user-level errors."""
    diag = []
    err = io.StringIO()
    try:
        with contextlib.redirect_stderr(err):
            args = build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_PARSE
        text = err.getvalue().strip()
        return CommandResult(code, "", [text] if text else [])
    try:
        out = args.fn(args)
    except ParseError as exc:
        return CommandResult(EXIT_PARSE, "", [f"parse error: {exc}"])
    except PreconditionError as exc:
        return CommandResult(EXIT_PRECONDITION, "", [f"{type(exc).__name__}: {exc}"])
    except (PrecisionExhausted, CertificationFailed) as exc:
        return CommandResult(EXIT_PRECISION, "", [f"{type(exc).__name__}: {exc}"])
    code = EXIT_OK
    if isinstance(out, tuple):
        out, code = out
    if args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
        diag.append(f"wrote {args.out}")
    return CommandResult(code, out, diag)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    res = run(argv)
    to_stdout = "--out" not in argv or argv[argv.index("--out") + 1 : argv.index("--out") + 2] == ["-"]
    if res.payload and to_stdout:
        sys.stdout.write(res.payload)
    for line in res.diagnostics:
        print(line, file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
