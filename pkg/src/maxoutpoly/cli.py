"""Command-line front end.

Exit codes: 0 success or verified, 1 check failed / inconclusive,
2 hypothesis unmet (including insufficient depth), 64 malformed input.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import io
from .experiments import ExperimentConfig, run_sweep
from .expressivity import (
    NOT_IN_MAX,
    HyperplaneCertificate,
    WidthCertificate,
    certify_width_cannot_compensate,
    hierarchy_report,
)
from .network import (
    ArchitectureSpec,
    ConstructionWitness,
    HypothesisError,
    InsufficientDepth,
    InvalidNetwork,
    NetworkError,
    NeuronTrace,
    attainment_construct,
    dim_bound_vectors,
    expr_to_network,
    net_eval,
    newton_extract,
)
from .polytope import PolytopeError
from .rational import ZERO, fmt, parse_vec
from .virtual import VirtualPolytope, v_dim

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_HYPOTHESIS = 2
EXIT_INPUT = 64


def _int_list(text: str) -> list:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _spec(args) -> ArchitectureSpec:
    try:
        return ArchitectureSpec.from_vectors(args.n, args.depth, args.d, args.r)
    except NetworkError as exc:
        raise io.InputError("arguments", str(exc)) from None


class _Output:
    def __init__(self, path: str | None):
        self.path = path

    def emit(self, payload, text: str | None = None) -> None:
        body = io.dump_json(payload)
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(body)
            if text:
                sys.stdout.write(text + "\n")
        else:
            if text:
                sys.stdout.write(text + "\n")
            sys.stdout.write(body)


def cmd_eval(args, out: _Output) -> int:
    net = io.parse_network(io.load_json(args.network))
    x = io.parse_point(io.load_json(args.point), net.spec.n)
    sys.stdout.write(fmt(net_eval(net, x)) + "\n")
    return EXIT_OK


def cmd_newton(args, out: _Output) -> int:
    net = io.parse_network(io.load_json(args.network))
    V, witness = newton_extract(net)
    out.emit({"virtual_polytope": V.to_json(), "witness": witness.to_json()})
    return EXIT_OK


def cmd_dim(args, out: _Output) -> int:
    V = io.parse_virtual(io.load_json(args.vpolytope))
    sys.stdout.write(f"{v_dim(V)}\n")
    return EXIT_OK


def cmd_bound_sweep(args, out: _Output) -> int:
    data = io.load_json(args.config)
    if not isinstance(data, dict):
        raise io.InputError("$", "config must be an object")
    if args.seed is not None:
        data = dict(data, seed=args.seed)
    try:
        cfg = ExperimentConfig.from_json(data)
    except (TypeError, ValueError) as exc:
        raise io.InputError(args.config, str(exc)) from None
    results = run_sweep(cfg, jobs=args.jobs)
    ok = all(r["report"]["holds"] and r["witness_ok"] and r["duality_agree"] == r["duality_checks"] for r in results)
    target = _Output(args.out or cfg.out)
    held = sum(1 for r in results if r["report"]["holds"])
    target.emit({"config": {"seed": cfg.seed, "networks": cfg.networks}, "all_hold": ok, "results": results},
                f"{held}/{len(results)} dimension bounds hold")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_attain(args, out: _Output) -> int:
    spec = _spec(args)
    m = dim_bound_vectors(spec.d, spec.r)
    index = [i - 1 for i in args.I] if args.I is not None else list(range(m))
    v = io.parse_vector(args.v.split(","), "--v", spec.n) if args.v else (ZERO,) * spec.n
    P, node = attainment_construct(spec, v, index)
    out.emit({"polytope": P.to_json(), "dim": m, "witness": node.to_json()})
    return EXIT_OK


def cmd_certify_width(args, out: _Output) -> int:
    spec = _spec(args)
    cert = certify_width_cannot_compensate(args.n, spec)
    ok = cert.issued and cert.verify()
    out.emit(cert.to_json(), f"verdict: {cert.hyperplane.verdict}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_hierarchy(args, out: _Output) -> int:
    d = args.d if len(args.d) > 1 else args.d[0]
    r = args.r if len(args.r) > 1 else args.r[0]
    try:
        report = hierarchy_report(args.n, d, r)
    except NetworkError as exc:
        if isinstance(exc, HypothesisError):
            raise
        raise io.InputError("arguments", str(exc)) from None
    out.emit(report.to_json(), report.table())
    return EXIT_OK if report.all_strict else EXIT_FAILED


def cmd_max_to_net(args, out: _Output) -> int:
    e = io.parse_expression(io.load_json(args.expression))
    args.n = e.n
    net = expr_to_network(e, _spec(args))
    out.emit(net.to_json())
    return EXIT_OK


def cmd_replay(args, out: _Output) -> int:
    data = io.load_json(args.certificate)
    try:
        if isinstance(data, dict) and "hyperplane" in data:
            cert = WidthCertificate.from_json(data)
            ok = cert.verify()
        elif isinstance(data, dict) and "line_checks" in data:
            cert = HyperplaneCertificate.from_json(data)
            ok = cert.verify() and cert.verdict == NOT_IN_MAX
        elif isinstance(data, dict) and "witness" in data and "virtual_polytope" in data:
            ok = _replay_newton(data)
        else:
            raise io.InputError("$", "not a recognized certificate")
    except (KeyError, TypeError, IndexError) as exc:
        raise io.InputError("$", f"malformed certificate: {exc!r}") from None
    sys.stdout.write(("verified" if ok else "REJECTED") + "\n")
    return EXIT_OK if ok else EXIT_FAILED


def _replay_newton(data: dict) -> bool:
    w = data["witness"]
    s = w["spec"]
    spec = ArchitectureSpec(int(s["n"]), int(s["depth"]), tuple(s["d"]), tuple(s["r"]))
    levels = [[VirtualPolytope.from_json(V) for V in level] for level in w["levels"]]
    traces = [
        [
            NeuronTrace(t["layer"], t["neuron"], tuple(t["reads"]), tuple(parse_vec(row) for row in t["coefficients"]), levels[k + 1][i])
            for i, t in enumerate(layer)
        ]
        for k, layer in enumerate(w["traces"])
    ]
    root = VirtualPolytope.from_json(w["root"])
    witness = ConstructionWitness(spec, levels, traces, parse_vec(w["output"]), root)
    return witness.verify() and VirtualPolytope.from_json(data["virtual_polytope"]) == root


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for randomized commands")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--out", default=None, help="write JSON output to this file")

    parser = argparse.ArgumentParser(prog="maxoutpoly", description="Sparse maxout networks and virtual polytopes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a network at a point")
    p.add_argument("network")
    p.add_argument("point")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("newton", parents=[common], help="Newton virtual polytope of a network")
    p.add_argument("network")
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("dim", parents=[common], help="dimension of a virtual polytope")
    p.add_argument("vpolytope")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("bound-sweep", parents=[common], help="dimension bound over random networks")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_bound_sweep)

    def arch(p, n_required=True):
        if n_required:
            p.add_argument("--n", type=int, required=True)
        p.add_argument("--depth", type=int, required=True)
        p.add_argument("--d", type=_int_list, required=True, help="indegree: one value or a comma list")
        p.add_argument("--r", type=_int_list, required=True, help="rank: one value or a comma list")

    p = sub.add_parser("attain", parents=[common], help="polytope attaining the dimension bound")
    arch(p)
    p.add_argument("--I", type=_int_list, default=None, help="1-based coordinates spanning the affine hull")
    p.add_argument("--v", default=None, help="anchor point, comma separated rationals")
    p.set_defaults(func=cmd_attain)

    p = sub.add_parser("certify-width", parents=[common], help="certify that width cannot replace indegree")
    arch(p)
    p.set_defaults(func=cmd_certify_width)

    p = sub.add_parser("hierarchy", parents=[common], help="strict depth hierarchy table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=_int_list, required=True)
    p.add_argument("--r", type=_int_list, required=True)
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("max-to-net", parents=[common], help="realize a MAX expression as a network")
    p.add_argument("expression")
    arch(p, n_required=False)
    p.set_defaults(func=cmd_max_to_net)

    p = sub.add_parser("replay", parents=[common], help="re-verify a certificate from its transcript")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Output(args.out)
    try:
        return args.func(args, out)
    except io.InputError as exc:
        sys.stderr.write(f"input error at {exc}\n")
        return EXIT_INPUT
    except (HypothesisError, InsufficientDepth) as exc:
        sys.stderr.write(f"hypothesis not met: {exc}\n")
        return EXIT_HYPOTHESIS
    except InvalidNetwork as exc:
        sys.stderr.write(f"invalid network: {exc}\n")
        return EXIT_INPUT
    except (NetworkError, PolytopeError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
