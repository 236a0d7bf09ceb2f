"""Command-line front end.

Exit codes: 0 success, 1 a checked property failed, 2 usage error,
3 validation error (bad parameters, grids or files).
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from . import io
from .errors import QWLCTError
from .field import Grid2D, QField2D, l2_norm
from .lct import LCTPair, validate
from .oracle import (analytic_qwlct_gaussian_haar, gaussian, haar_window,
                     quadrature_qwlct_gaussian_haar)
from .qlct import qlct_forward, qlct_inverse
from .qwlct import qwlct_forward, qwlct_inverse
from .uncertainty import qlct_uncertainty_check, qwlct_uncertainty_check
from .verify import DEFAULT_SEED, field_battery, gaussian_field, render, synthetic_battery

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _floats(text: str, count: int, what: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != count:
        raise argparse.ArgumentTypeError(f"{what} needs {count} comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what}: not a number in {text!r}") from None


def params_arg(text: str) -> tuple[float, ...]:
    # syntax only; the matrix itself is validated later so that a singular
    # or degenerate matrix is a validation error, not a usage error
    return _floats(text, 4, "LCT parameters a,b,c,d")


def grid_arg(text: str) -> tuple[float, ...]:
    vals = _floats(text, 6, "grid o1,o2,d1,d2,n1,n2")
    if any(v != int(v) for v in vals[4:]):
        raise argparse.ArgumentTypeError(f"grid point counts must be integers, got {text!r}")
    return vals


def pair_arg(text: str) -> tuple[float, float]:
    return _floats(text, 2, "pair v1,v2")


def _grid(vals) -> Grid2D | None:
    if vals is None:
        return None
    return Grid2D(vals[:2], vals[2:4], (int(vals[4]), int(vals[5])))


def _pair(args) -> LCTPair:
    return LCTPair(validate(*args.A1), validate(*args.A2))


def load_field(path: str, grid: Grid2D | None = None) -> QField2D:
    if path.lower().endswith(".csv"):
        if grid is None:
            raise UsageError(f"reading {path} as CSV needs --grid")
        return io.import_csv(path, grid)
    return io.read_field(path)


def save_field(f: QField2D, path: str, fmt: str) -> None:
    if fmt == "csv":
        io.export_csv(f, path)
    else:
        io.write_field(f, path)


def _compare(result: QField2D, args) -> int:
    """Compare against ``--reference`` if given; returns an exit code."""
    if not args.reference:
        return EXIT_OK
    ref = load_field(args.reference, _grid(getattr(args, "grid", None)))
    if result.data.shape != ref.data.shape:
        raise UsageError(f"reference shape {ref.data.shape} differs from result {result.data.shape}")
    err = l2_norm(QField2D(result.grid, result.data - ref.data)) / max(l2_norm(ref), 1e-300)
    ok = err <= args.tol
    print(f"relative L2 difference to reference: {err:.3e} (tol {args.tol:.1e}) {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_PROPERTY


def cmd_gen(args) -> int:
    grid = _grid(args.grid) or Grid2D.centered(8, 128)
    if args.kind == "gaussian":
        c1, c2 = args.centre
        f = QField2D.from_function(grid, lambda x1, x2: gaussian(x1 - c1, x2 - c2, args.alpha))
    elif args.kind == "haar":
        f = haar_window(grid)
    else:
        rng = np.random.default_rng(args.seed)
        f = QField2D(grid, rng.standard_normal(grid.n + (4,)))
    save_field(f, args.out, args.format)
    print(f"wrote {args.kind} field on grid {grid} to {args.out}")
    return EXIT_OK


def cmd_qlct(args) -> int:
    P = _pair(args)
    f = load_field(args.input, _grid(args.grid))
    if args.direction == "forward":
        out = qlct_forward(f, P, _grid(args.wgrid))
    else:
        xgrid = _grid(args.xgrid)
        if xgrid is None and args.reference:
            xgrid = load_field(args.reference, _grid(args.grid)).grid
        if xgrid is None:
            raise UsageError("qlct inverse needs --xgrid (or --reference to borrow its grid)")
        out = qlct_inverse(f, P, xgrid)
    if args.out:
        save_field(out, args.out, args.format)
    print(f"{args.direction} transform on grid {out.grid}, norm {l2_norm(out):.12e}")
    return _compare(out, args)


def _window(args, grid: Grid2D) -> QField2D:
    if args.window:
        return load_field(args.window, _grid(args.grid))
    return gaussian_field(grid, sigma=args.sigma)


def cmd_qwlct(args) -> int:
    P = _pair(args)
    if args.action == "map":
        f = load_field(args.input, _grid(args.grid))
        G = qwlct_forward(f, _window(args, f.grid), P, _grid(args.wgrid), _grid(args.ugrid),
                          workers=args.workers)
        if args.out:
            io.write_map(G, args.out)
        print(f"map: w-grid {G.wgrid}, u-grid {G.ugrid}, max |G| {G.abs().max():.12e}")
        return EXIT_OK
    if args.action == "slice":
        G = io.read_map(args.map)
        idx = []
        for k in (1, 2):
            ax = G.ugrid.axis(k)
            i = int(np.argmin(np.abs(ax - args.u[k - 1])))
            if abs(ax[i] - args.u[k - 1]) > 1e-9 * max(1.0, G.ugrid.dx[k - 1]):
                raise UsageError(f"u = {args.u} is not on the map's u-lattice {G.ugrid}")
            idx.append(i)
        S = G.slice_at(*idx)
        if args.out:
            save_field(S, args.out, args.format)
        if args.pgm:
            lo, hi = io.export_magnitude_pgm(np.sqrt(S.abs2()), args.pgm)
            print(f"wrote |G| slice image to {args.pgm} (min {lo:.6e}, max {hi:.6e})")
        print(f"slice at u = {args.u}: norm {l2_norm(S):.12e}")
        return EXIT_OK
    G = io.read_map(args.map)
    if not args.window and not args.xgrid:
        raise UsageError("qwlct inverse needs --window or --xgrid for the output grid")
    xgrid = _grid(args.xgrid)
    phi = load_field(args.window, _grid(args.grid)) if args.window else gaussian_field(xgrid, sigma=args.sigma)
    out = qwlct_inverse(G, phi, P, xgrid or phi.grid, workers=args.workers)
    if args.out:
        save_field(out, args.out, args.format)
    print(f"inverse on grid {out.grid}, norm {l2_norm(out):.12e}")
    return _compare(out, args)


def cmd_uncertainty(args) -> int:
    P = _pair(args)
    f = load_field(args.input, _grid(args.grid))
    reports = [qlct_uncertainty_check(f, P, _grid(args.wgrid), k) for k in (1, 2)]
    if args.windowed:
        phi = _window(args, f.grid)
        G = qwlct_forward(f, phi, P, _grid(args.wgrid), _grid(args.ugrid))
        reports += [qwlct_uncertainty_check(f, phi, P, k=k, G=G) for k in (1, 2)]
    if args.json:
        print(json.dumps([r.as_record() for r in reports], indent=2))
    else:
        print("\n\n".join(r.render() for r in reports))
    return EXIT_OK if all(r.satisfied for r in reports) else EXIT_PROPERTY


def cmd_verify(args) -> int:
    if args.input:
        P = _pair(args)
        records = field_battery(load_field(args.input, _grid(args.grid)), P, args.tol)
    else:
        _pair(args)
        records = synthetic_battery(args.seed, args.tol)
    if args.json:
        print(json.dumps({"seed": args.seed, "records": [r.as_record() for r in records]}, indent=2))
    else:
        print(render(records, args.seed))
    return EXIT_OK if all(r.passed for r in records) else EXIT_PROPERTY


def cmd_oracle(args) -> int:
    P = _pair(args)
    alpha = args.alpha
    rows, worst = [], 0.0
    for t in np.linspace(-2.0, 2.0, 5):
        for v in np.linspace(-0.5, 1.0, 5):
            w, u = (t, 0.5 * t), (v, v)
            exact = analytic_qwlct_gaussian_haar(P, alpha, w, u)
            quad, change = quadrature_qwlct_gaussian_haar(P, alpha, w, u)
            err = (exact - quad).norm() / (1.0 + quad.norm())
            worst = max(worst, err)
            rows.append({"w": list(w), "u": list(u), "analytic": list(exact), "quadrature": list(quad),
                         "error": err, "self_convergence": change})
    if args.json:
        print(json.dumps({"rows": rows, "worst": worst, "tol": args.tol}, indent=2))
    else:
        print(f"{'w1':>6} {'w2':>6} {'u1':>6} {'u2':>6}  {'|analytic|':>14} {'|quadrature|':>14}  error")
        for r in rows:
            a = math.sqrt(sum(c * c for c in r["analytic"]))
            q = math.sqrt(sum(c * c for c in r["quadrature"]))
            print(f"{r['w'][0]:6.2f} {r['w'][1]:6.2f} {r['u'][0]:6.2f} {r['u'][1]:6.2f}  "
                  f"{a:14.8e} {q:14.8e}  {r['error']:.2e}")
        print(f"worst error {worst:.3e} (tol {args.tol:.1e})")
    return EXIT_OK if worst <= args.tol else EXIT_PROPERTY


def _common(p: argparse.ArgumentParser, params: bool = True) -> None:
    if params:
        p.add_argument("--A1", type=params_arg, default=(0.0, 1.0, -1.0, 0.0), metavar="a,b,c,d")
        p.add_argument("--A2", type=params_arg, default=(0.0, 1.0, -1.0, 0.0), metavar="a,b,c,d")
    p.add_argument("--grid", type=grid_arg, metavar="o1,o2,d1,d2,n1,n2",
                   help="signal grid (needed to read CSV fields)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwlct", description="Quaternion windowed linear canonical transforms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="synthesize a field")
    _common(p, params=False)
    p.add_argument("--kind", choices=("gaussian", "haar", "noise"), default="gaussian")
    p.add_argument("--alpha", type=pair_arg, default=(1.0, 1.0), metavar="a1,a2")
    p.add_argument("--centre", type=pair_arg, default=(0.0, 0.0), metavar="c1,c2")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("bin", "csv"), default="bin")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("qlct", help="forward or inverse QLCT of a field file")
    _common(p)
    p.add_argument("direction", choices=("forward", "inverse"))
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--wgrid", type=grid_arg, metavar="o1,o2,d1,d2,n1,n2")
    p.add_argument("--xgrid", type=grid_arg, metavar="o1,o2,d1,d2,n1,n2")
    p.add_argument("--out")
    p.add_argument("--format", choices=("bin", "csv"), default="bin")
    p.add_argument("--reference")
    p.add_argument("--tol", type=float, default=1e-5)
    p.set_defaults(func=cmd_qlct)

    p = sub.add_parser("qwlct", help="windowed transform: full map, one slice, or inversion")
    _common(p)
    p.add_argument("action", choices=("map", "slice", "inverse"))
    p.add_argument("--in", dest="input")
    p.add_argument("--map")
    p.add_argument("--window")
    p.add_argument("--sigma", type=float, default=1.0, help="width of the default Gaussian window")
    p.add_argument("--wgrid", type=grid_arg, metavar="o1,o2,d1,d2,n1,n2")
    p.add_argument("--ugrid", type=grid_arg, metavar="o1,o2,d1,d2,n1,n2")
    p.add_argument("--xgrid", type=grid_arg, metavar="o1,o2,d1,d2,n1,n2")
    p.add_argument("--u", type=pair_arg, default=(0.0, 0.0), metavar="u1,u2")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--pgm")
    p.add_argument("--format", choices=("bin", "csv"), default="bin")
    p.add_argument("--reference")
    p.add_argument("--tol", type=float, default=1e-4)
    p.set_defaults(func=cmd_qwlct)

    p = sub.add_parser("uncertainty", help="spread reports for a field")
    _common(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--windowed", action="store_true", help="also check the windowed inequality")
    p.add_argument("--window")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--wgrid", type=grid_arg, metavar="o1,o2,d1,d2,n1,n2")
    p.add_argument("--ugrid", type=grid_arg, metavar="o1,o2,d1,d2,n1,n2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_uncertainty)

    p = sub.add_parser("verify", help="run the theorem checks")
    _common(p)
    p.add_argument("--in", dest="input", help="check this field instead of the synthetic battery")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=None, help="override equality tolerances")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle-compare", help="closed form vs quadrature on a (w, u) lattice")
    _common(p)
    p.add_argument("--alpha", type=pair_arg, default=(1.0, 1.0), metavar="a1,a2")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)
    return parser


_NEGATIVE_LIST = re.compile(r"^-[0-9.]")


def _join_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--opt -1,2`` as ``--opt=-1,2``; argparse would otherwise
    read a leading minus as an option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEGATIVE_LIST.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "qwlct" and args.action == "map" and not args.input:
            raise UsageError("qwlct map needs --in")
        if args.command == "qwlct" and args.action in ("slice", "inverse") and not args.map:
            raise UsageError(f"qwlct {args.action} needs --map")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QWLCTError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
