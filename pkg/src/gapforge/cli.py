"""Command-line interface: ``gapforge <command> ...``.

Every command exits 0 on success and 1 on a computation or input error
(argparse usage errors exit 2).  Files written with ``-o`` get a
``<file>.manifest.json`` companion recording the parameters, input digests,
version, seed and time.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from . import __version__, io
from .asymptotics import (HypothesisViolation, classify_alpha_beta, classify_gamma,
                          divergence_certificate, regime_diagram)
from .constructions import ALIASES, KINDS, DecorationSpec, decorate, generate, search_signings, two_lift
from .eig import EigenError, spectrum_of
from .graph import Graph, GraphError, adjacency_matrix, laplacian0, laplacian1
from .manifold import (BlockDataError, ManifoldModel, cohomology_dims, mcgowan_bound,
                       surface_genus, volume)
from .metric import (certified_ramanujan_gap, find_gaps, metric_spectrum,
                     ramanujan_metric_gap)
from .pipeline import ConfigError, run_pipeline
from .spectra import ramanujan_check, unit_laplacian_spectrum

RANDOM_KINDS = {"tree_random", "regular_random"}


def _emit(args, text: str, inputs=(), seeds=()) -> None:
    out = getattr(args, "output", None)
    io.write_text(out, text)
    if out and out != "-":
        params = {k: v for k, v in vars(args).items() if k != "func"}
        io.write_text(io.manifest_path(out),
                      io.dumps_json(io.make_manifest(args.command, params, inputs, seeds)))


def _common_length(g: Graph, override: float | None) -> float:
    if override is not None:
        return override
    if len(set(g.lengths)) > 1:
        raise GraphError("graph is not equilateral; pass --length")
    return g.lengths[0] if g.lengths else 1.0


# ---------------------------------------------------------------- commands

def cmd_spectrum(args) -> int:
    g = io.load_graph(args.graph)
    op = {"lap0": laplacian0, "lap1": laplacian1, "adjacency": adjacency_matrix}[args.operator]
    spec = spectrum_of(op(g), tol=args.tol)
    if args.format == "json":
        text = io.dumps_json({"operator": args.operator, "tolerance": args.tol,
                              "spectrum": [{"value": v, "multiplicity": m}
                                           for v, m in spec.items()]})
    else:
        text = io.dumps_csv(["value", "multiplicity"], spec.items())
    _emit(args, text, [args.graph])
    return 0


def cmd_ramanujan(args) -> int:
    g = io.load_graph(args.graph)
    _emit(args, io.dumps_json(ramanujan_check(g).to_dict()), [args.graph])
    return 0


def cmd_metric_spectrum(args) -> int:
    g = io.load_graph(args.graph)
    length = _common_length(g, args.length)
    rep = metric_spectrum(unit_laplacian_spectrum(g), length, args.window)
    if args.format == "json":
        text = io.dumps_json({
            "edge_length": length, "window": args.window,
            "eigenvalues": [e.__dict__ for e in rep.eigenvalues],
            "exceptional": list(rep.exceptional_points),
        })
    else:
        text = io.dumps_csv(["lambda", "mu", "branch", "multiplicity"],
                            [(e.value, e.mu, e.branch, e.multiplicity) for e in rep.eigenvalues],
                            [f"exceptional: {io.fmt(x)}" for x in rep.exceptional_points])
    _emit(args, text, [args.graph])
    return 0


def cmd_gap(args) -> int:
    g = io.load_graph(args.graph)
    length = _common_length(g, args.length)
    rep = metric_spectrum(unit_laplacian_spectrum(g), length, args.window)
    gaps = find_gaps(rep, args.min_width)
    out = {"edge_length": length, "window": args.window,
           "gaps": [list(x.as_tuple()) for x in gaps]}
    k = g.regular_degree()
    if g.is_simple() and k is not None and k >= 3:
        h = ramanujan_metric_gap(k, length)
        c = certified_ramanujan_gap(k, length)
        values = rep.values(with_multiplicity=False)
        out["ramanujan_gap"] = list(h.as_tuple())
        out["ramanujan_gap_free"] = not any(h.contains(x) for x in values)
        out["certified_gap"] = list(c.as_tuple())
        out["certified_gap_free"] = not any(c.contains(x) for x in values)
    _emit(args, io.dumps_json(out), [args.graph])
    return 0


def _model(args) -> tuple[ManifoldModel, list[str]]:
    cfg = io.load_structured(args.config)
    inputs = [args.config]
    if args.graph:
        g = io.load_graph(args.graph)
        inputs.append(args.graph)
    elif "graph" in cfg:
        ref = cfg["graph"]
        if isinstance(ref, str):
            path = Path(args.config).parent / ref
            g = io.load_graph(path)
            inputs.append(str(path))
        else:
            g = Graph.from_dict(ref)
    else:
        raise io.InputError("no graph: pass --graph or put 'graph' in the block config")
    blocks = io.blocks_from_dict(cfg, g)
    eps = args.epsilon if args.epsilon is not None else cfg.get("epsilon")
    if eps is None:
        raise io.InputError("no epsilon: pass --epsilon or set 'epsilon' in the config")
    return ManifoldModel(g, blocks, float(eps)), inputs


def cmd_mcgowan(args) -> int:
    m, inputs = _model(args)
    res = mcgowan_bound(m, args.p, variant=args.variant,
                        metric_comparison=tuple(args.compare) if args.compare else None)
    _emit(args, io.dumps_json(res.to_dict()), inputs)
    return 0


def cmd_volume(args) -> int:
    m, inputs = _model(args)
    out = {"volume": volume(m), "epsilon": m.epsilon, "dimension": m.dimension,
           "epsilon_over_length": m.epsilon_over_length()}
    if m.dimension == 2:
        out["genus"] = surface_genus(m.graph)
    _emit(args, io.dumps_json(out), inputs)
    return 0


def cmd_cohomology(args) -> int:
    if args.epsilon is None:
        args.epsilon = 1.0   # topology does not depend on the radius
    m, inputs = _model(args)
    dims = cohomology_dims(m)
    out = {"dims": dims, "euler_characteristic": sum((-1) ** k * d for k, d in enumerate(dims))}
    _emit(args, io.dumps_json(out), inputs)
    return 0


def cmd_regimes(args) -> int:
    if args.certificate:
        if args.alpha is None or args.beta is None:
            raise io.InputError("--certificate needs --alpha and --beta")
        cert = divergence_certificate(args.certificate, args.alpha, args.beta, n=args.n, k=args.k)
        out = {"certificate": cert.to_dict()}
    elif args.gamma is not None:
        out = {"gamma_regime": classify_gamma(args.gamma, args.n).to_dict()}
    elif args.alpha is not None and args.beta is not None:
        out = {"alpha_beta_regime": classify_alpha_beta(args.alpha, args.beta, args.n).to_dict()}
    else:
        out = {}
    if args.svg:
        from .svg import render_regimes
        d = regime_diagram(args.n, args.resolution)
        point = (args.alpha, args.beta) if args.alpha is not None and args.beta is not None else None
        io.write_text(args.svg, render_regimes(d, point))
        out["svg"] = args.svg
        out["boundary_lines"] = [{"name": ln.name, "coefficients": list(ln.coefficients),
                                  "points": [list(p) for p in ln.points]} for ln in d.lines]
    if not out:
        raise io.InputError("nothing to do: give --gamma, --alpha/--beta or --svg")
    _emit(args, io.dumps_json(out))
    return 0


def cmd_generate(args) -> int:
    kind = ALIASES.get(args.kind, args.kind)
    params = {k: getattr(args, k) for k in ("n", "k", "a", "b") if getattr(args, k) is not None}
    seed = args.seed if args.seed is not None else io.default_seed()
    if kind in RANDOM_KINDS and seed is None:
        seed = 0
    g = generate(kind, params, seed)
    _emit(args, io.dumps_graph(g), seeds=[seed] if seed is not None else [])
    return 0


def cmd_decorate(args) -> int:
    base, dec = io.load_graph(args.base), io.load_graph(args.dec)
    g = decorate(DecorationSpec(base, dec, args.attach))
    _emit(args, io.dumps_graph(g), [args.base, args.dec])
    return 0


def _parse_signs(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
    except ValueError:
        raise io.InputError(f"--signs must be a comma-separated list of +1/-1, got {text!r}") from None


def cmd_lift(args) -> int:
    g = io.load_graph(args.graph)
    if args.search:
        r = search_signings(g, args.limit)
        out = {"examined": r.examined, "connected": r.connected, "ramanujan": r.ramanujan,
               "first_ramanujan": list(r.first_ramanujan.signs) if r.first_ramanujan else None,
               "best_deviation": r.best_deviation,
               "best_signing": list(r.best_signing.signs) if r.best_signing else None}
        _emit(args, io.dumps_json(out), [args.graph])
        return 0
    if args.signs is None:
        raise io.InputError("give --signs or --search")
    lift = two_lift(g, _parse_signs(args.signs))
    if not lift.connected:
        print("warning: lift is disconnected", file=sys.stderr)
    rec = lift.graph.to_dict()
    rec["connected"] = lift.connected
    _emit(args, io.dumps_json(rec), [args.graph])
    return 0


def cmd_pipeline(args) -> int:
    cfg = io.load_structured(args.config)
    res = run_pipeline(cfg, args.out, jobs=args.jobs, base_dir=Path(args.config).parent,
                       default_seed=io.default_seed())
    params = {k: v for k, v in vars(args).items() if k != "func"}
    io.write_text(Path(args.out) / "manifest.json", io.dumps_json(
        io.make_manifest("pipeline", params, [args.config])))
    for row in res.rows:
        if row["status"] != "ok":
            print(f"member {row['member']}: {row['error']}", file=sys.stderr)
    print(f"{len(res.rows)} members, {res.failed} failed; summary in "
          f"{Path(args.out) / 'summary.csv'}", file=sys.stderr)
    return 0 if res.failed == 0 else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gapforge",
                                description="Spectra of graphs, metric graphs and graph-like manifolds.")
    p.add_argument("--version", action="version", version=f"gapforge {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, graph=False):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        if graph:
            sp.add_argument("graph", help="graph JSON file")
        sp.add_argument("-o", "--output", help="output file (default: stdout)")
        sp.set_defaults(func=func)
        return sp

    sp = add("spectrum", cmd_spectrum, "grouped spectrum of a graph operator", graph=True)
    sp.add_argument("--operator", choices=["lap0", "lap1", "adjacency"], default="lap0")
    sp.add_argument("--tol", type=float, default=1e-9, help="grouping tolerance")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")

    add("ramanujan", cmd_ramanujan, "Ramanujan test for a regular simple graph", graph=True)

    sp = add("metric-spectrum", cmd_metric_spectrum, "equilateral metric graph spectrum", graph=True)
    sp.add_argument("--length", type=float, help="common edge length (default: from the graph)")
    sp.add_argument("--window", type=float, required=True, help="upper end of [0, window]")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")

    sp = add("gap", cmd_gap, "spectral gaps of an equilateral metric graph", graph=True)
    sp.add_argument("--length", type=float)
    sp.add_argument("--window", type=float, required=True)
    sp.add_argument("--min-width", type=float, default=0.0)

    for name, func, text in (("mcgowan", cmd_mcgowan, "lower bound on exact form eigenvalues"),
                             ("volume", cmd_volume, "volume of a graph-like manifold model"),
                             ("cohomology", cmd_cohomology, "Betti numbers of a graph-like manifold")):
        sp = add(name, func, text)
        sp.add_argument("--config", required=True, help="block data (TOML or JSON)")
        sp.add_argument("--graph", help="graph JSON (overrides 'graph' in the config)")
        sp.add_argument("--epsilon", type=float)
        if name == "mcgowan":
            sp.add_argument("--p", type=int, required=True)
            sp.add_argument("--variant", choices=["gentile-pagliara", "mcgowan"])
            sp.add_argument("--compare", type=float, nargs=2, metavar=("C_MINUS", "C_PLUS"),
                            help="metric comparison constants")

    sp = add("regimes", cmd_regimes, "asymptotic regime classification")
    sp.add_argument("--n", type=int, required=True, help="manifold dimension")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--certificate",
                    choices=["prop-ramanujan-gap", "cor-function-divergence", "prp-form-divergence"])
    sp.add_argument("--k", type=int, help="degree, for prop-ramanujan-gap")
    sp.add_argument("--svg", help="write the region diagram here")
    sp.add_argument("--resolution", type=int, default=200)

    sp = add("generate", cmd_generate, "generate a graph")
    sp.add_argument("--kind", required=True, choices=sorted(set(KINDS) | set(ALIASES)))
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int)
    sp.add_argument("--seed", type=int, help="default: $GAPFORGE_SEED, else 0")

    sp = add("decorate", cmd_decorate, "weld a decoration graph at every vertex")
    sp.add_argument("--base", required=True)
    sp.add_argument("--dec", required=True)
    sp.add_argument("--attach", type=int, default=0)

    sp = add("lift", cmd_lift, "2-lift by a signing, or search all signings", graph=True)
    sp.add_argument("--signs", help="comma-separated +1/-1, one per edge")
    sp.add_argument("--search", action="store_true")
    sp.add_argument("--limit", type=int)

    sp = sub.add_parser("pipeline", help="run a family pipeline")
    sp.add_argument("config", help="pipeline config (TOML or JSON)")
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--jobs", type=int, default=None, help="worker processes (default: CPU count)")
    sp.set_defaults(func=cmd_pipeline)
    return p


ERRORS = (io.InputError, GraphError, BlockDataError, EigenError, HypothesisViolation,
          ConfigError, ValueError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ERRORS as exc:
        print(f"gapforge {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
