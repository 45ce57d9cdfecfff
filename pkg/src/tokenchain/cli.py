"""Command-line front end.

Every command prints one JSON document. Exit status is 0 on success, 1 on
parse/validation errors or violated hypotheses, 2 when a size cap is hit,
and 1 from ``verify`` when any check fails.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .analysis import mixing_bounds
from .errors import HypothesisError, ParseError, SizeError, ValidationError
from .graph_core import parse_edge_list, regular_degree, regularity_and_connectivity
from .sampler import DEFAULT_SAMPLES, Dynamics, sample_densest
from .token_graph import (
    DENSE_CAP,
    TOKEN_VERTEX_CAP,
    build_token_graph,
    export_edge_list,
    export_vertex_table,
    laziness_and_regime,
    stationary_distribution,
    structural_constants,
    transition_matrix,
)

SCHEMA = "tokenchain.report/1"


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tokenchain", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, k_required=True):
        sp.add_argument("--input", type=Path, required=True, help="edge-list file")
        sp.add_argument("--k", type=int, required=k_required, help="subset size")
        sp.add_argument("--output", type=Path, help="write the report here instead of stdout")
        sp.add_argument("--cap", type=int, default=TOKEN_VERTEX_CAP,
                        help="maximum number of explicit k-subsets")

    sp = sub.add_parser("sample", help="sample densest k-subgraphs")
    common(sp)
    sp.add_argument("--burn-in", type=int, help="default: non-lazy mixing threshold")
    sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--dynamics", choices=[d.value for d in Dynamics], default="loop")
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("--lazy-constant", type=float, default=1.0)
    sp.add_argument("--top", type=int, default=50, help="ranked subsets to report (0 = all)")

    sp = sub.add_parser("exact", help="stationary law and transition matrix of a small chain")
    common(sp)
    sp.add_argument("--dense-cap", type=int, default=DENSE_CAP)

    sp = sub.add_parser("bounds", help="mixing-time thresholds")
    sp.add_argument("--input", type=Path, help="take n and d from a regular graph")
    sp.add_argument("--n", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("--lazy-constant", type=float, default=1.0)
    sp.add_argument("--output", type=Path)
    sp.add_argument("--cap", type=int, default=TOKEN_VERTEX_CAP)

    sp = sub.add_parser("verify", help="run invariant checks on a graph")
    common(sp, k_required=False)

    sp = sub.add_parser("tokengraph", help="export the explicit k-token graph")
    common(sp)
    return p


def _read_graph(path: Path):
    data = path.read_bytes()
    return parse_edge_list(data.decode()), hashlib.sha256(data).hexdigest()


def _config(args) -> dict:
    cfg = {}
    for key, val in sorted(vars(args).items()):
        cfg[key] = str(val) if isinstance(val, Path) else val
    return cfg


def _envelope(args, digest=None) -> dict:
    return {
        "schema": SCHEMA,
        "command": args.command,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "provenance": {
            "input_sha256": digest,
            "config": _config(args),
            "version": __version__,
        },
    }


def _cmd_sample(args) -> dict:
    g, digest = _read_graph(args.input)
    report = sample_densest(
        g, args.k, burn_in=args.burn_in, m=args.samples, seed=args.seed,
        epsilon=args.epsilon, lazy_constant=args.lazy_constant, cap=args.cap,
        dynamics=args.dynamics,
    )
    out = _envelope(args, digest)
    ranking = report.ranking if args.top == 0 else report.ranking[: args.top]
    out["metadata"] = {
        "n": g.n,
        "edges": g.m,
        "degree": regular_degree(g),
        "k": args.k,
        "burn_in": report.burn_in,
        "burn_in_source": report.burn_in_source,
        "samples": args.samples,
        "seed": args.seed,
        "dynamics": args.dynamics,
        "chain_host": "complement",
        "distinct_states": len(report.ranking),
    }
    out["top_tier"] = [[g.label(v) for v in s] for s in report.top_tier()]
    out["ranking"] = [r.as_dict(g) for r in ranking]
    out["analysis"] = {
        "regime": report.regime.as_dict(),
        "bounds": report.bounds.as_dict(),
    }
    return out


def _cmd_exact(args) -> dict:
    g, digest = _read_graph(args.input)
    tg = build_token_graph(g, args.k, cap=args.cap)
    if tg.size > args.dense_cap:
        raise SizeError(f"{tg.size} states exceeds dense cap {args.dense_cap}")
    tm = transition_matrix(tg)
    pi = stationary_distribution(tg)
    out = _envelope(args, digest)
    out["states"] = [
        {
            "index": i,
            "members": [g.label(v) for v in s],
            "deg_k": len(tg.adjacency[i]),
            "pi": str(pi.exact[i]),
            "pi_float": float(pi.exact[i]),
        }
        for i, s in enumerate(tg.vertices)
    ]
    out["transition"] = [
        {"row": i, "entries": [[j, str(p)] for j, p in sorted(tm.row(i).items())]}
        for i in range(tg.size)
    ]
    out["normalizer"] = pi.normalizer
    out["constants"] = structural_constants(g, args.k, cap=args.cap).as_dict()
    if regular_degree(g) is not None:
        out["laziness"] = laziness_and_regime(g, args.k, cap=args.cap).as_dict()
    return out


def _cmd_bounds(args) -> dict:
    digest = None
    n, d = args.n, args.d
    lazy = None
    if args.input is not None:
        g, digest = _read_graph(args.input)
        d = regular_degree(g)
        if d is None:
            raise HypothesisError("regularity", "bounds need a regular graph")
        n = g.n
        lazy = laziness_and_regime(g, args.k, cap=args.cap)
    if n is None or d is None:
        raise ValidationError("bounds needs --input or both --n and --d")
    gamma = float(lazy.gamma) if lazy is not None and lazy.gamma is not None else None
    b = mixing_bounds(n, d, args.k, args.epsilon, args.lazy_constant, gamma)
    out = _envelope(args, digest)
    out["bounds"] = b.as_dict()
    if lazy is not None:
        out["laziness"] = lazy.as_dict()
    return out


def _cmd_verify(args) -> tuple[dict, int]:
    from .verify import run_all

    g, digest = _read_graph(args.input)
    checks = run_all(g, None if args.k is None else [args.k])
    out = _envelope(args, digest)
    out["graph"] = regularity_and_connectivity(g).as_dict()
    out["checks"] = [c.as_dict() for c in checks]
    failed = [c for c in checks if not c.passed]
    out["passed"] = not failed
    return out, 0 if not failed else 1


def _cmd_tokengraph(args) -> dict:
    g, digest = _read_graph(args.input)
    tg = build_token_graph(g, args.k, cap=args.cap)
    out = _envelope(args, digest)
    out["vertices"] = tg.size
    out["edges"] = tg.edge_count
    edges_txt = export_edge_list(tg)
    table_txt = export_vertex_table(tg)
    if args.output is not None:
        edge_path = args.output.with_suffix(".edges")
        table_path = args.output.with_suffix(".vertices.tsv")
        edge_path.write_text(edges_txt)
        table_path.write_text(table_txt)
        out["files"] = {"edges": str(edge_path), "vertices": str(table_path)}
    else:
        out["edge_list"] = edges_txt
        out["vertex_table"] = table_txt
    return out


def _error(args, kind: str, exc: Exception, **extra) -> dict:
    out = {
        "schema": SCHEMA,
        "command": getattr(args, "command", None),
        "error": {"type": kind, "message": str(exc), **extra},
    }
    return out


def _emit(doc: dict, path) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def run_cli(argv=None) -> int:
    args = _parser().parse_args(argv)
    # tokengraph --output names the export files, the report itself goes to stdout
    out_path = None if args.command == "tokengraph" else getattr(args, "output", None)
    status = 0
    try:
        if args.command == "sample":
            doc = _cmd_sample(args)
        elif args.command == "exact":
            doc = _cmd_exact(args)
        elif args.command == "bounds":
            doc = _cmd_bounds(args)
        elif args.command == "verify":
            doc, status = _cmd_verify(args)
        else:
            doc = _cmd_tokengraph(args)
    except HypothesisError as exc:
        doc, status = _error(args, "hypothesis", exc, hypothesis=exc.hypothesis), 1
    except ParseError as exc:
        doc, status = _error(args, "parse", exc, line=exc.line), 1
    except (ValidationError, ValueError) as exc:
        doc, status = _error(args, "validation", exc), 1
    except SizeError as exc:
        doc, status = _error(args, "size", exc), 2
    except OSError as exc:
        doc, status = _error(args, "io", exc), 1
    _emit(doc, None if "error" in doc else out_path)
    return status


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
