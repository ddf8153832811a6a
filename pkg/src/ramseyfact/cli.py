"""Command-line frontend: build instances, verify colorings, compute
decompositions, metrics, nets, amalgams and bound arithmetic.

Every invocation emits a single report (JSON by default, human text with
--format pretty) of the shape
    {"command", "params", "outcome", "stats", "version"}
and exits 0 on success / no-bad-coloring, 1 when a bad coloring was found,
2 on exhausted budgets, 64 on usage errors.  Reports are deterministic for
fixed parameters and seed, up to the timing fields.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import __version__
from ._util import format_rational, parse_rational
from .errors import BudgetError, DomainError
from . import boolmat, colorsearch, ffmat, metricfree, normgeo, orders

USAGE_ERROR = 64


def _load_payload(text: str):
    """Inline JSON, @file, or '-' for stdin."""
    if text == "-":
        text = sys.stdin.read()
    elif text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def _space_arg(text: str) -> normgeo.PolyhedralSpace:
    """Accept linf:K, l1:K, or a space JSON payload."""
    if text.startswith("linf:"):
        return normgeo.PolyhedralSpace.linf(int(text.split(":", 1)[1]))
    if text.startswith("l1:"):
        return normgeo.PolyhedralSpace.l1(int(text.split(":", 1)[1]))
    return normgeo.PolyhedralSpace.from_json(_load_payload(text))


def _metric_arg(text: str) -> metricfree.FiniteMetricSpace:
    """Metric space JSON, or a CSV distance matrix (rows split on ; or newlines)."""
    raw = text
    if raw == "-":
        raw = sys.stdin.read()
    elif raw.startswith("@"):
        with open(raw[1:], "r", encoding="utf-8") as fh:
            raw = fh.read()
    stripped = raw.strip()
    if stripped.startswith("{"):
        return metricfree.FiniteMetricSpace.from_json(json.loads(stripped))
    rows = [
        [parse_rational(x) for x in chunk.split(",") if x.strip() != ""]
        for chunk in stripped.replace("\n", ";").split(";")
        if chunk.strip()
    ]
    return metricfree.FiniteMetricSpace(rows)


def _rational_rows(text: str):
    rows = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            rows.append([parse_rational(x) for x in chunk.split(",")])
    return rows


def _rational_vec(text: str):
    return [parse_rational(x) for x in text.split(",")]


def _int_list(text: str):
    return [int(x) for x in text.split(",") if x.strip() != ""]


def _report(command: str, params: dict, outcome: dict, started: float) -> dict:
    stats = {"seconds": round(time.monotonic() - started, 6)}
    try:
        import resource

        stats["max_rss_kb"] = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    except ImportError:  # non-POSIX platforms
        pass
    return {
        "command": command,
        "params": params,
        "outcome": outcome,
        "stats": stats,
        "version": __version__,
    }


def _emit(report: dict, fmt: str) -> None:
    if fmt == "pretty":
        print(f"# {report['command']}")
        print(json.dumps(report["outcome"], indent=2, sort_keys=True, default=str))
        print(f"(v{report['version']}, {report['stats']['seconds']}s)")
    else:
        print(json.dumps(report, sort_keys=True, default=str))


# ---------------------------------------------------------------------------
# subcommand handlers; each returns (outcome dict, exit code)


def _field_matrix(args) -> "ffmat.PrimeFieldMatrix":
    if getattr(args, "json", None):
        return ffmat.PrimeFieldMatrix.from_json(_load_payload(args.json))
    if args.matrix is None:
        raise DomainError("provide --matrix digit rows or --json payload")
    return ffmat.PrimeFieldMatrix.from_text(args.p, args.matrix)


def _cmd_decompose(args):
    mat = _field_matrix(args)
    red, tau = ffmat.rcef_decompose(mat)
    return {
        "reduced": red.to_json(),
        "transform": tau.matrix.to_json(),
        "transform_inverse": tau.inverse.to_json(),
    }, 0


def _cmd_tau2(args):
    mat = _field_matrix(args)
    dec = ffmat.two_sided_decompose(mat)
    return {
        "middle": dec.middle.matrix.to_json(),
        "left": dec.left.to_json(),
        "right": dec.right.to_json(),
    }, 0


def _cmd_pi(args):
    if args.json:
        b = boolmat.BooleanMatrix.from_json(_load_payload(args.json))
    else:
        rows = [[int(ch) for ch in row] for row in args.entries.split(",")]
        b = boolmat.BooleanMatrix.from_entries(rows)
    sigma = boolmat.sorting_permutation(b)
    return {
        "permutation": list(sigma.perm),
        "ordered": b.permute_columns(sigma).to_json(),
        "already_ordered": boolmat.is_oba(b),
    }, 0


def _cmd_phi(args):
    codomain = orders.antilex_order(args.p, args.k)
    f = orders.RigidSurjection(len(_int_list(args.map)), codomain, _int_list(args.map))
    mat = ffmat.surjection_matrix(f, args.p)
    return {"matrix": mat.to_json(), "transpose_is_rref": mat.transpose().is_rref}, 0


def _family_params(args) -> dict:
    params = {}
    for key in ("p", "k", "m", "k_small", "k_large"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    return params


def _cmd_verify(args):
    if args.jobs < 1:
        raise DomainError("--jobs must be at least 1")
    params = _family_params(args)
    problem = colorsearch.build_instance(
        args.family, params, args.n, args.r, max_ground=args.max_ground
    )
    outcome = colorsearch.exists_bad_coloring(
        problem, max_nodes=args.max_nodes, max_seconds=args.max_seconds
    )
    payload = outcome.to_json()
    payload["instance"] = problem.describe()
    code = {colorsearch.NO_BAD: 0, colorsearch.BAD_FOUND: 1, colorsearch.BUDGET: 2}
    return payload, code[outcome.status]


def _cmd_min_n(args):
    if args.jobs < 1:
        raise DomainError("--jobs must be at least 1")
    params = _family_params(args)
    result = colorsearch.min_n(
        args.family, params, args.n_max, args.r,
        max_nodes=args.max_nodes, max_seconds=args.max_seconds,
        max_ground=args.max_ground,
    )
    payload = {"min_n": result.found_n, "status": result.status, "scan": result.scan}
    return payload, 0 if result.status != colorsearch.BUDGET else 2


def _cmd_geo(args):
    sub = args.geo_command
    if sub == "norm":
        space = _space_arg(args.space)
        return {"norm": format_rational(space.norm(_rational_vec(args.point)))}, 0
    if sub == "opnorm":
        dom = _space_arg(args.domain)
        cod = _space_arg(args.codomain)
        t = normgeo.NormedMap(_rational_rows(args.matrix), dom, cod)
        inv = t.inv_norm()
        return {
            "op_norm": format_rational(t.op_norm()),
            "inv_norm": "inf" if inv == math.inf else format_rational(inv),
        }, 0
    if sub == "omega":
        val = normgeo.omega(_space_arg(args.space), _space_arg(args.space2))
        return {"omega": val.to_json()}, 0
    if sub == "alpha":
        base = _space_arg(args.base) if args.base else None
        val = normgeo.alpha(_space_arg(args.space), _space_arg(args.space2), base)
        return {"alpha": format_rational(val)}, 0
    if sub == "bm":
        val = normgeo.bm_upper(
            _space_arg(args.space), _space_arg(args.space2),
            effort=args.effort, seed=args.seed,
        )
        return {"bm_upper": val.to_json()}, 0
    if sub == "gap":
        ambient = _space_arg(args.ambient)
        val = normgeo.gap_metric(
            _rational_rows(args.v), _rational_rows(args.w), ambient
        )
        return {"gap": format_rational(val)}, 0
    if sub == "net":
        space = _space_arg(args.space)
        net = normgeo.eps_net(
            space, parse_rational(args.eps), args.mode,
            radius=parse_rational(args.radius),
        )
        return {"net": net.to_json()}, 0
    if sub == "amalgam":
        x = _space_arg(args.x)
        y = _space_arg(args.y)
        res = normgeo.amalgam(x, y, _rational_rows(args.matrix))
        return {"amalgam": res.to_json()}, 0
    if sub == "envelope":
        space = _space_arg(args.space)
        d, psi = normgeo.injective_envelope(space)
        return {"envelope_dim": d, "embedding": psi.to_json()}, 0
    if sub == "approx":
        eps = parse_rational(args.eps)
        if args.l2_dim:
            oracle = normgeo.pushforward_norm(
                [[1 if i == j else 0 for j in range(args.l2_dim)]
                 for i in range(args.l2_dim)], 2)
            out = normgeo.polyhedral_approx(oracle, eps)
        else:
            out = normgeo.polyhedral_approx(_space_arg(args.space), eps)
        return {"space": out.to_json(), "functionals": len(out.functionals)}, 0
    raise DomainError(f"unknown geo subcommand {sub!r}")


def _cmd_bound(args):
    if args.bound_command == "n-infty":
        b = normgeo.bound_n_infty(args.d, args.m, args.r, parse_rational(args.eps))
        return {
            "n_infty_bound": b.to_json(),
            "display": str(b),
            "n_pol_bound": str(b),
            "note": "the polyhedral and sup-norm Ramsey bounds coincide",
        }, 0
    if args.bound_command == "dim-h":
        val = normgeo.bound_dim_h(
            args.dim_f, args.dim_g, parse_rational(args.eps), args.n
        )
        if isinstance(val, normgeo.TowerBound):
            return {"dim_h_bound": val.to_json(), "exact_integer": False}, 0
        return {"dim_h_bound": str(val), "exact_integer": True}, 0
    raise DomainError(f"unknown bound subcommand {args.bound_command!r}")


def _cmd_free(args):
    metric = _metric_arg(args.metric)
    if args.free_command == "norm":
        val = metricfree.free_norm(_rational_vec(args.vector), metric)
        return {"free_norm": format_rational(val)}, 0
    if args.free_command == "space":
        return {"space": metricfree.free_space(metric).to_json()}, 0
    raise DomainError(f"unknown free subcommand {args.free_command!r}")


def _cmd_emb(args):
    inner = _metric_arg(args.inner)
    if args.emb_command == "list":
        outer = _metric_arg(args.outer)
        embs = metricfree.enumerate_emb(inner, outer, cap=args.cap)
        return {"count": len(embs), "embeddings": [list(e) for e in embs]}, 0
    if args.emb_command == "probe":
        # discretized experiment: counts placements into a finite grid ball
        # and reports the grid step; says nothing beyond that resolution
        target = metricfree.grid_ball_space(
            parse_rational(args.radius), args.dim, parse_rational(args.step),
            cap=args.cap,
        )
        embs = metricfree.enumerate_emb(inner, target, cap=target.n)
        return {
            "grid_step": format_rational(parse_rational(args.step)),
            "radius": format_rational(parse_rational(args.radius)),
            "ambient_dim": args.dim,
            "grid_points": target.n,
            "embedding_count": len(embs),
            "sample": [list(e) for e in embs[:10]],
            "note": "discretized probe at the stated grid step only",
        }, 0
    raise DomainError(f"unknown emb subcommand {args.emb_command!r}")


# ---------------------------------------------------------------------------


def _add_family_arguments(sp):
    sp.add_argument("family", choices=sorted(colorsearch.FAMILIES))
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--k-small", dest="k_small", type=int, default=None)
    sp.add_argument("--k-large", dest="k_large", type=int, default=None)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--max-nodes", type=int, default=colorsearch.DEFAULT_MAX_NODES)
    sp.add_argument("--max-seconds", type=float, default=colorsearch.DEFAULT_MAX_SECONDS)
    sp.add_argument("--max-ground", type=int, default=50000)
    sp.add_argument("--jobs", type=int, default=1,
                    help="worker fan-out; results are identical for any value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramseyfact",
        description="Echelon factorizations, coloring verification, and "
                    "rational polyhedral geometry",
    )
    parser.add_argument("--format", choices=("json", "pretty"), default="json")
    parser.add_argument("--pretty", action="store_true", help="alias for --format pretty")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("decompose", help="reduced column echelon factorization")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--matrix", help="digit rows, e.g. 11,01,10")
    sp.add_argument("--json", help="matrix JSON payload")

    sp = sub.add_parser("tau2", help="two-sided echelon factorization")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--matrix", help="digit rows, e.g. 11,01,10")
    sp.add_argument("--json", help="matrix JSON payload")

    sp = sub.add_parser("pi", help="column-sorting permutation of a partition matrix")
    sp.add_argument("--entries", help="bit rows, e.g. 10,01,10")
    sp.add_argument("--json", help="matrix JSON payload")

    sp = sub.add_parser("phi", help="matrix of a rigid surjection onto F_p^k")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--map", required=True, help="comma separated codomain indices")

    sp = sub.add_parser("verify", help="search for a bad coloring at a given size")
    _add_family_arguments(sp)
    sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("min-n", help="least size admitting no bad coloring")
    _add_family_arguments(sp)
    sp.add_argument("--n-max", dest="n_max", type=int, required=True)

    sp = sub.add_parser("geo", help="polyhedral normed-space computations")
    geo = sp.add_subparsers(dest="geo_command", required=True)
    g = geo.add_parser("norm"); g.add_argument("--space", required=True); g.add_argument("--point", required=True)
    g = geo.add_parser("opnorm")
    g.add_argument("--matrix", required=True); g.add_argument("--domain", required=True)
    g.add_argument("--codomain", required=True)
    g = geo.add_parser("omega"); g.add_argument("--space", required=True); g.add_argument("--space2", required=True)
    g = geo.add_parser("alpha")
    g.add_argument("--space", required=True); g.add_argument("--space2", required=True)
    g.add_argument("--base", default=None)
    g = geo.add_parser("bm")
    g.add_argument("--space", required=True); g.add_argument("--space2", required=True)
    g.add_argument("--effort", type=int, default=2)
    g = geo.add_parser("gap")
    g.add_argument("--ambient", required=True); g.add_argument("--v", required=True)
    g.add_argument("--w", required=True)
    g = geo.add_parser("net")
    g.add_argument("--space", required=True); g.add_argument("--eps", required=True)
    g.add_argument("--mode", choices=("ball-greedy", "shell"), default="ball-greedy")
    g.add_argument("--radius", default="1")
    g = geo.add_parser("amalgam")
    g.add_argument("--x", required=True); g.add_argument("--y", required=True)
    g.add_argument("--matrix", required=True)
    g = geo.add_parser("envelope"); g.add_argument("--space", required=True)
    g = geo.add_parser("approx")
    g.add_argument("--space"); g.add_argument("--l2-dim", dest="l2_dim", type=int)
    g.add_argument("--eps", required=True)

    sp = sub.add_parser("bound", help="exact Ramsey-bound arithmetic")
    bound = sp.add_subparsers(dest="bound_command", required=True)
    g = bound.add_parser("n-infty")
    g.add_argument("--d", type=int, required=True); g.add_argument("--m", type=int, required=True)
    g.add_argument("--r", type=int, required=True); g.add_argument("--eps", required=True)
    g = bound.add_parser("dim-h")
    g.add_argument("--dim-f", dest="dim_f", type=int, required=True)
    g.add_argument("--dim-g", dest="dim_g", type=int, required=True)
    g.add_argument("--eps", required=True); g.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("free", help="transportation norms over finite metric spaces")
    free = sp.add_subparsers(dest="free_command", required=True)
    g = free.add_parser("norm")
    g.add_argument("--metric", required=True); g.add_argument("--vector", required=True)
    g = free.add_parser("space"); g.add_argument("--metric", required=True)

    sp = sub.add_parser("emb", help="isometric embeddings of finite metric spaces")
    emb = sp.add_subparsers(dest="emb_command", required=True)
    g = emb.add_parser("list")
    g.add_argument("--inner", required=True); g.add_argument("--outer", required=True)
    g.add_argument("--cap", type=int, default=10)
    g = emb.add_parser("probe")
    g.add_argument("--inner", required=True); g.add_argument("--radius", required=True)
    g.add_argument("--dim", type=int, required=True); g.add_argument("--step", required=True)
    g.add_argument("--cap", type=int, default=400)

    return parser


_HANDLERS = {
    "decompose": _cmd_decompose,
    "tau2": _cmd_tau2,
    "pi": _cmd_pi,
    "phi": _cmd_phi,
    "verify": _cmd_verify,
    "min-n": _cmd_min_n,
    "geo": _cmd_geo,
    "bound": _cmd_bound,
    "free": _cmd_free,
    "emb": _cmd_emb,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0,) else 0
    started = time.monotonic()
    fmt = "pretty" if args.pretty else args.format
    params = {
        k: v for k, v in vars(args).items()
        if k not in ("format", "pretty") and v is not None
    }
    try:
        outcome, code = _HANDLERS[args.command](args)
    except BudgetError as exc:
        _emit(_report(args.command, params, {"error": "budget", "detail": str(exc)},
                      started), fmt)
        return 2
    except (DomainError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        _emit(_report(args.command, params,
                      {"error": "usage", "detail": f"{type(exc).__name__}: {exc}"},
                      started), fmt)
        return USAGE_ERROR
    _emit(_report(args.command, params, outcome, started), fmt)
    return code


if __name__ == "__main__":
    sys.exit(main())
