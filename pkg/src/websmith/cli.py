"""Command-line front end: ``websmith {rank,classify,verify,catalog,leaves}``.

Exit codes: 0 ok, 1 bad input, 2 unstable rank, 3 indeterminate
classification, 4 identity verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np
from scipy.integrate import solve_ivp

from . import catalog
from .criterion import classify, criterion_samples
from .exceptions import WebsmithError
from .rank import DEFAULT_DEGREES, GAP_RATIO, SVD_GAP, rank_estimate
from .webs import admissible_base, slope_function, univariate_provider, web_from_dict

log = logging.getLogger("websmith")

EXIT_OK, EXIT_BAD_SPEC, EXIT_UNSTABLE, EXIT_INDETERMINATE, EXIT_VERIFY = 0, 1, 2, 3, 4


class BadSpec(Exception):
    pass


def _pair(text):
    try:
        a, b = (complex(t.strip().replace(" ", "")) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None
    return a, b


def _degrees(text):
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None
    if not vals or any(v < 1 for v in vals) or vals != sorted(vals):
        raise argparse.ArgumentTypeError("degrees must be positive and ascending")
    return vals


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _jsonable(obj):
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return [z.real, z.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    return obj


def _dumps(doc):
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def _emit(args, text):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_web(args):
    spec = args.web
    if spec is None:
        raise BadSpec("--web is required")
    if spec.endswith(".json") or os.path.isfile(spec):
        try:
            with open(spec) as fh:
                web = web_from_dict(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise BadSpec(f"cannot read web spec {spec!r}: {exc}") from None
    else:
        try:
            web = catalog.make_named_web(spec, k=args.k, tau=args.tau).web
        except (WebsmithError, ValueError) as exc:
            raise BadSpec(str(exc)) from None
    if args.base is not None:
        web = web.with_base(args.base)
    return admissible_base(web)


def _table(rows, header):
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() for row in [header] + rows]
    return "\n".join(lines) + "\n"


def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def cmd_rank(args):
    web = _resolve_web(args)
    degrees = args.degrees or list(DEFAULT_DEGREES)
    report = rank_estimate(web, degrees, svd_gap=args.svd_gap, gap_ratio=GAP_RATIO)
    doc = {"web": web.name, **report.to_dict()}
    if args.format == "json":
        _emit(args, _dumps(doc))
    else:
        rows = [[n, dim, f"{g:.3e}"] for n, dim, g in zip(report.degrees_tested, report.kernel_dims,
                                                          report.gap_ratios)]
        body = (_csv if args.format == "csv" else _table)(rows, ["degree", "kernel_dim", "gap_ratio"])
        if args.format == "table":
            tail = " ".join(f"{s:.2e}" for s in doc["singular_value_tail"])
            body = f"{report.summary()}\nsingular value tail: {tail}\n" + body
        _emit(args, body)
        if args.out and args.format == "table":
            print(report.summary())
    return EXIT_OK if report.stabilized else EXIT_UNSTABLE


def cmd_classify(args):
    if not args.vx or not args.wx:
        raise BadSpec("classify needs --vx and --wx")
    try:
        v = univariate_provider(slope_function(args.vx))
        w = univariate_provider(slope_function(args.wx))
    except (WebsmithError, ValueError) as exc:
        raise BadSpec(str(exc)) from None
    center = args.base or catalog.GENERIC_BASE
    result = classify(v, w, criterion_samples(center))
    doc = result.to_dict()
    if args.format == "json":
        _emit(args, _dumps(doc))
    else:
        mod = "" if result.modulus is None else f"{complex(result.modulus).real:.12g}" + (
            f"{complex(result.modulus).imag:+.3g}j" if abs(complex(result.modulus).imag) > 1e-12 else "")
        rows = [[result.label, result.case_id, mod]]
        _emit(args, (_csv if args.format == "csv" else _table)(rows, ["label", "case", "modulus"]))
    return EXIT_INDETERMINATE if result.label == "Indeterminate" else EXIT_OK


def cmd_verify(args):
    ks = [args.k.real] if args.k is not None else [0.3, 0.5, 0.8]
    only = args.only
    rows = []
    if only is None or only in catalog.IDENTITY_NAMES:
        for name, k, res, tol in catalog.identity_suite(ks=ks, perturb=args.perturb, only=only):
            rows.append([name, f"k={k:g}", res, tol])
    if only is None or only == "relations":
        for cid in catalog.CATALOG_IDS:
            params = {"k": 0.5} if cid in ("Family", "QuarticModel") else {}
            nw = catalog.make_named_web(cid, **params)
            tol = {r.name: r.tol for r in nw.known_relations}
            for name, res in catalog.verify_relations(nw).items():
                rows.append([f"{cid}: {name}", "", res, tol[name]])
    if only is not None and not rows:
        raise BadSpec(f"unknown identity {only!r}; choose from {', '.join(catalog.IDENTITY_NAMES)}, relations")
    ok = all(r[2] < r[3] for r in rows)
    if args.format == "json":
        doc = {"passed": ok, "checks": [{"name": n, "param": p, "residual": r, "tol": t, "passed": r < t}
                                        for n, p, r, t in rows]}
        _emit(args, _dumps(doc))
    else:
        out = [[n, p, f"{r:.2e}", f"{t:.0e}", "pass" if r < t else "FAIL"] for n, p, r, t in rows]
        _emit(args, (_csv if args.format == "csv" else _table)(out, ["identity", "param", "residual", "tol", "status"]))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_catalog(args):
    if args.web:
        nw = catalog.make_named_web(args.web, k=args.k, tau=args.tau)
        if args.base is not None:
            nw.web = nw.web.with_base(args.base)
        _emit(args, _dumps(nw.to_dict()))
        return EXIT_OK
    rows = []
    for cid in catalog.CATALOG_IDS:
        params = {"k": 0.5} if cid in ("Family", "QuarticModel") else {}
        nw = catalog.make_named_web(cid, **params)
        rows.append([cid, nw.web.d, "" if nw.expected_rank is None else nw.expected_rank,
                     len(nw.known_relations), ", ".join(f.name for f in nw.web.foliations)])
    header = ["id", "d", "rank", "relations", "foliations"]
    if args.format == "json":
        _emit(args, _dumps([dict(zip(header, r)) for r in rows]))
    else:
        _emit(args, (_csv if args.format == "csv" else _table)(rows, header))
    return EXIT_OK


def trace_leaf(foliation, level, start, box, max_step=0.05, tol=1e-11):
    """Real leaf ``u = level`` through a point near ``start``, clipped to ``box``.

    Returns ``(points, truncated)``; ``truncated`` is set when integration
    stopped at a singularity rather than at the box boundary.
    """
    xmin, xmax, ymin, ymax = box

    def grad(p):
        return np.real(np.asarray(foliation.gradient(p[0], p[1]), dtype=complex))

    def value(p):
        return foliation.value(p[0], p[1]).real

    # Newton along the gradient to land on the level set
    p = np.asarray(start, dtype=float)
    for _ in range(50):
        g = grad(p)
        r = value(p) - level
        if abs(r) < 1e-14 * max(1.0, abs(level)):
            break
        p = p - r * g / (g @ g)
    if abs(value(p) - level) > 1e-10 * max(1.0, abs(level)):
        return np.zeros((0, 2)), True

    def rhs(_, q):
        g = grad(q)
        n = np.hypot(*g)
        if n < 1e-300:
            raise FloatingPointError("singular point")
        return [g[1] / n, -g[0] / n]

    def leave(_, q):
        return min(q[0] - xmin, xmax - q[0], q[1] - ymin, ymax - q[1])

    leave.terminal = True
    span = 2 * ((xmax - xmin) + (ymax - ymin))
    truncated = False
    halves = []
    for direction in (1, -1):
        try:
            sol = solve_ivp(lambda s, q: direction * np.asarray(rhs(s, q)), (0, span), p, method="DOP853",
                            rtol=tol, atol=tol, max_step=max_step, events=leave)
            pts = sol.y.T
            if sol.status == -1:
                truncated = True
        except (FloatingPointError, ZeroDivisionError, WebsmithError):
            pts, truncated = p[None, :], True
        halves.append(pts)
    pts = np.vstack([halves[1][::-1], halves[0][1:]])
    return pts, truncated


def cmd_leaves(args):
    web = _resolve_web(args)
    bx = [float(np.real(c)) for c in web.base]
    box = args.box or [bx[0] - 0.25, bx[0] + 0.25, bx[1] - 0.25, bx[1] + 0.25]
    rows = []
    for fol in web.foliations:
        u0 = fol.value(*web.base).real
        levels = args.levels or [u0 + d for d in (-0.05, 0.0, 0.05)]
        for c in levels:
            pts, trunc = trace_leaf(fol, c, bx, box, max_step=args.step)
            for x, y in pts:
                rows.append([fol.name, repr(float(c)), repr(float(x)), repr(float(y)), int(trunc)])
    _emit(args, _csv(rows, ["foliation", "level", "x", "y", "truncated"]))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--web", help="catalog id (see 'catalog') or path to a web JSON file")
    common.add_argument("--k", type=complex, default=None, help="elliptic modulus for Family/QuarticModel")
    common.add_argument("--tau", type=complex, default=None, help="period ratio for Family")
    common.add_argument("--base", type=_pair, default=None, help="base point 'x,y'")
    common.add_argument("--degrees", type=_degrees, default=None, help="ascending degree list, e.g. 6,10,14")
    common.add_argument("--svd-gap", type=_positive, default=SVD_GAP, help="relative singular value cutoff")
    common.add_argument("--out", default=None, help="write output to this file")
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="websmith", description="Numerical tools for planar webs.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rank", parents=[common], help="estimate the rank of a web")
    p = sub.add_parser("classify", parents=[common], help="classify T(x,y,x+y,x-y,v(x)+w(y))")
    p.add_argument("--vx", help="slope v' (e.g. 'sn:0.6', 'exp', 'poly:3x^2', 'const')")
    p.add_argument("--wx", help="slope w'")
    p = sub.add_parser("verify", parents=[common], help="run the identity suite")
    p.add_argument("--only", default=None, help="run one identity (or 'relations')")
    p.add_argument("--perturb", type=float, default=0.0, help="relative error injected into theta_3")
    sub.add_parser("catalog", parents=[common], help="list named webs or export one as JSON")
    p = sub.add_parser("leaves", parents=[common], help="trace leaves to CSV")
    p.add_argument("--levels", type=_floats, default=None, help="comma separated level values")
    p.add_argument("--box", type=_floats, default=None, help="xmin,xmax,ymin,ymax")
    p.add_argument("--step", type=_positive, default=0.05, help="maximal integration step")
    return parser


COMMANDS = {"rank": cmd_rank, "classify": cmd_classify, "verify": cmd_verify,
            "catalog": cmd_catalog, "leaves": cmd_leaves}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (BadSpec, WebsmithError, ValueError) as exc:
        print(f"websmith: error: {exc}", file=sys.stderr)
        return EXIT_BAD_SPEC


if __name__ == "__main__":
    sys.exit(main())
