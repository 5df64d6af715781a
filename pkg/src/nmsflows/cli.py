"""Command-line front end.

Flow specs and seed lists may be given as a file path, ``-`` for stdin, or
inline JSON. All output is JSON on stdout except the SVG written by
``portrait --svg``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import classifier, oracle, simulator
from .gluing import GluingError
from .manifolds import ManifoldError, parse_manifold
from .portrait import render_svg
from .serialize import (
    SCHEMA_VERSION,
    SpecError,
    certificate_to_json,
    chart_point_from_json,
    dumps,
    flow_from_spec,
    flow_to_spec,
    trajectory_to_json,
)

EXIT_USAGE = 2


class CliError(Exception):
    pass


def _load_json(arg: str) -> Any:
    text = arg
    stripped = arg.lstrip()
    if arg == "-":
        text = sys.stdin.read()
    elif not stripped.startswith(("{", "[")):
        try:
            text = Path(arg).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read {arg}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {arg if arg != text else 'argument'}: {exc}") from None


def _load_flow(arg: str):
    return flow_from_spec(_load_json(arg))


def _bound(args) -> int:
    if args.bound is not None:
        return args.bound
    return oracle.default_bound()


def cmd_classify(args) -> dict:
    f = _load_flow(args.spec)
    return {
        "version": SCHEMA_VERSION,
        "flow": flow_to_spec(f),
        "manifold": str(classifier.manifold_of(f)),
        "twisted": list(classifier.orbit_twisted(f)),
        "invariant": list(classifier.class_invariant(f)),
    }


def cmd_equivalent(args) -> dict:
    f, g = _load_flow(args.spec_a), _load_flow(args.spec_b)
    out: dict = {"version": SCHEMA_VERSION}
    if f.dim != g.dim or f.handle is not g.handle:
        out.update(equivalent=False, reason="dimension or handle kind differ")
        return out
    cert = classifier.flows_equivalent(f, g)
    bound = _bound(args)
    found = oracle.search_certificate(f, g, bound) is not None
    out.update(
        equivalent=cert is not None,
        manifolds=[str(classifier.manifold_of(f)), str(classifier.manifold_of(g))],
        oracle={"bound": bound, "equivalent": found},
    )
    if cert is not None:
        out["certificate"] = certificate_to_json(cert)
    else:
        out["reason"] = "no admissible boundary map fixes the core class on both sides"
    return out


def cmd_count(args) -> dict:
    m = parse_manifold(args.manifold)
    return {"version": SCHEMA_VERSION, "manifold": str(m), "classes": classifier.count_classes(m)}


def cmd_representatives(args) -> dict:
    m = parse_manifold(args.manifold)
    return {
        "version": SCHEMA_VERSION,
        "manifold": str(m),
        "flows": [flow_to_spec(f) for f in classifier.representatives(m)],
    }


def _simulate(args):
    f = _load_flow(args.spec)
    if args.seeds is None:
        seeds = simulator.default_seeds(f)
    else:
        raw = _load_json(args.seeds)
        if not isinstance(raw, list):
            raise CliError("seeds must be a JSON list of [chart, [y...], h]")
        try:
            seeds = [chart_point_from_json(item) for item in raw]
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"bad seed: {exc}") from None
    for seed in seeds:
        if not seed.is_reduced():
            raise CliError(f"seed {seed} is not in the fundamental domain (0 <= h < 1, |y| <= 2^-h)")
    trajectories = simulator.sample_portrait(f, seeds, args.horizon, args.dt)
    payload = {
        "version": SCHEMA_VERSION,
        "flow": flow_to_spec(f),
        "horizon": args.horizon,
        "dt": args.dt,
        "trajectories": [trajectory_to_json(f, t) for t in trajectories],
    }
    return f, trajectories, payload


def cmd_simulate(args) -> dict:
    _, _, payload = _simulate(args)
    return payload


def cmd_portrait(args) -> dict:
    f, trajectories, payload = _simulate(args)
    if args.svg:
        if f.dim != 2:
            raise CliError("SVG portraits are only available for surface flows (dim = 2)")
        Path(args.svg).write_text(render_svg(f, trajectories), encoding="utf-8")
        payload["svg"] = str(args.svg)
    return payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmsflows",
        description="Classify and simulate NMS flows with one attracting and one repelling orbit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="ambient manifold, twist flags and class invariant")
    p.add_argument("spec")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("equivalent", help="decide equivalence of two flows")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.add_argument("--bound", type=int, default=None,
                   help=f"oracle search bound (default ${oracle.BOUND_ENV} or {oracle.DEFAULT_BOUND})")
    p.set_defaults(func=cmd_equivalent)

    p = sub.add_parser("count", help="number of equivalence classes on a manifold")
    p.add_argument("manifold", help='"T2", "K2", "L(p,q)", "SxS1(n)" or "StxS1(n)"')
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("representatives", help="one flow per equivalence class")
    p.add_argument("manifold")
    p.set_defaults(func=cmd_representatives)

    for name, func, text in (
        ("simulate", cmd_simulate, "sample trajectories"),
        ("portrait", cmd_portrait, "sample trajectories and draw an SVG portrait (dim 2)"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("spec")
        p.add_argument("--seeds", default=None, help="JSON list of [chart, [y...], h] (file, '-' or inline)")
        p.add_argument("--horizon", type=float, default=12.0)
        p.add_argument("--dt", type=float, default=0.05)
        p.add_argument("--svg", default=None, help="write the SVG portrait here")
        p.add_argument("-o", "--output", default=None, help="write JSON here instead of stdout")
        p.set_defaults(func=func)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "horizon", 1.0) <= 0 or getattr(args, "dt", 1.0) <= 0:
        parser.error("--horizon and --dt must be positive")
    try:
        result = args.func(args)
    except (CliError, SpecError, GluingError, ManifoldError, ValueError) as exc:
        print(f"nmsflows: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(result)
    output = getattr(args, "output", None)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
