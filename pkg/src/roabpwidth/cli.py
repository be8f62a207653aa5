"""Command-line entry point: ``roabp <subcommand> ...``.

Exit status is 0 on success, 1 when a verification or self-check fails and
2 on usage, parse or cap errors (reported as JSON on standard error).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field as dc_field
from typing import Any, Sequence

from .errors import ParseError, RoabpError
from .exactfield import GF, Field
from .gadgets import DEFAULT_EXPANSION_CAP, KIND_TAGS, GadgetKind, build_gadget
from .graphlayout import cutwidth_exact, linear_rank_width_exact, load_graph
from .harness import SUITES, orbit_experiment, run_suite
from .nisan import check_order, min_width, synthesize_roabp, verify_roabp, width_profile
from .sparsepoly import AffineMap, SparsePoly, loads_poly, poly_to_json, tensor_power
from .subsetdp import n_cap

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    inputs: list = dc_field(default_factory=list)
    field: Field | None = None
    ncap: int = 20
    expansion_cap: int = DEFAULT_EXPANSION_CAP
    seed: int = 0
    jobs: int = 1
    output: str | None = None
    fmt: str = "json"
    options: dict = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.ncap < 1 or self.expansion_cap < 1:
            raise ParseError("caps must be positive")
        if self.jobs < 1:
            raise ParseError("--jobs must be positive")


def load_poly(path: str) -> SparsePoly:
    with open(path, encoding="utf-8") as fh:
        return loads_poly(fh.read())


def parse_order(text: str | None, n: int) -> tuple[int, ...] | None:
    """``'3,1,2'`` (1-based) to a 0-based order."""
    if text is None:
        return None
    try:
        order = [int(t) - 1 for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise ParseError(f"bad order {text!r}; expected comma-separated vertex numbers") from None
    return check_order(order, n)


def _dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True)


def _kind(tag: str, p: int | None, field: Field | None) -> GadgetKind:
    if tag == "orbit0":
        if p is not None or (field is not None and field.p is not None):
            raise ParseError("orbit0 is defined over the rationals only")
        return GadgetKind(tag)
    if p is None and field is not None:
        p = field.p
    if tag == "orbitp" and p is None:
        raise ParseError("orbitp needs -p PRIME")
    return GadgetKind(tag, p)


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one subcommand; returns ``(exit status, text for the output stream)``."""
    cmd = config.subcommand
    opts = config.options
    seed = config.seed

    if cmd == "width":
        f = load_poly(config.inputs[0])
        report = width_profile(f, parse_order(opts.get("order"), f.n))
        return EXIT_OK, _dump({**report.to_json(), "seed": seed})

    if cmd == "minwidth":
        f = load_poly(config.inputs[0])
        width, order = min_width(f, cap=config.ncap)
        return EXIT_OK, _dump({"width": width, "order": [v + 1 for v in order], "seed": seed})

    if cmd == "synth":
        f = load_poly(config.inputs[0])
        R = synthesize_roabp(f, parse_order(opts.get("order"), f.n))
        ok = verify_roabp(R, f)
        return (EXIT_OK if ok else EXIT_FAIL), _dump({**R.to_json(), "verified": ok, "seed": seed})

    if cmd == "cutwidth":
        G = load_graph(config.inputs[0])
        w, order = cutwidth_exact(G, cap=config.ncap)
        return EXIT_OK, _dump({"cutwidth": w, "arrangement": [v + 1 for v in order], "seed": seed})

    if cmd == "lrw":
        G = load_graph(config.inputs[0])
        field = config.field or GF(2)
        w, order = linear_rank_width_exact(G, field, cap=config.ncap)
        return EXIT_OK, _dump(
            {"linear_rank_width": w, "field": field.to_json(), "arrangement": [v + 1 for v in order], "seed": seed}
        )

    if cmd == "gadget":
        G = load_graph(config.inputs[1])
        kind = _kind(config.inputs[0], opts.get("p"), config.field)
        gadget = build_gadget(kind, G, expansion_cap=config.expansion_cap)
        meta = {**gadget.metadata(), "seed": seed}
        return EXIT_OK, _dump(poly_to_json(gadget.poly, meta))

    if cmd == "tensor":
        f = load_poly(config.inputs[0])
        l = opts["l"]
        if len(f) ** l > opts.get("tensor_cap", 100_000):
            raise ParseError(f"tensor power would have {len(f) ** l} terms; raise --tensor-cap to allow it")
        g = tensor_power(f, l)
        return EXIT_OK, _dump(poly_to_json(g, {"tensor_power": l, "seed": seed}))

    if cmd == "orbit":
        G = load_graph(config.inputs[1])
        kind = _kind(config.inputs[0], opts.get("p"), config.field)
        if kind.tag not in ("orbit0", "orbitp"):
            raise ParseError("orbit experiments take orbit0 or orbitp")
        with open(opts["map"], encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(f"malformed map JSON: {exc}") from None
        amap = AffineMap.from_json(data, kind.field)
        width, cls = orbit_experiment(G, kind, amap)
        body = {
            "width": width,
            "classification": cls,
            "cutwidth": cutwidth_exact(G, cap=config.ncap)[0],
            "edges": G.m,
            "kind": str(kind),
            "seed": seed,
        }
        return EXIT_OK, _dump(body)

    if cmd == "verify":
        suite = opts.get("suite", "all")
        nmax = opts.get("nmax", 5)
        reports = run_suite(suite, nmax, seed, config.jobs)
        for r in reports:
            r.seed = seed if r.seed is None else r.seed
        status = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
        if config.fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["check", "instances", "failures", "wall_time"])
            for r in reports:
                writer.writerow([r.check, r.instances, len(r.failures), f"{r.wall_time:.3f}"])
            return status, buf.getvalue().rstrip("\n")
        return status, "\n".join(_dump(r.to_json()) for r in reports)

    raise ParseError(f"unknown subcommand {cmd!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="'rational' or a prime such as '2' (default depends on command)")
    common.add_argument("--ncap", type=int, default=None, help="largest n for exact subset searches")
    common.add_argument("--expansion-cap", type=int, default=DEFAULT_EXPANSION_CAP,
                        help="largest edge count for expanding the product gadget")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for verification")
    common.add_argument("-o", "--output", help="write to this file instead of standard output")
    common.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")

    parser = argparse.ArgumentParser(prog="roabp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("width", parents=[common], help="prefix ranks and width in one order")
    p.add_argument("poly")
    p.add_argument("--order", help="comma-separated variable order, 1-based (default 1..n)")

    p = sub.add_parser("minwidth", parents=[common], help="minimum width over all orders")
    p.add_argument("poly")

    p = sub.add_parser("synth", parents=[common], help="build a minimum-width program in an order")
    p.add_argument("poly")
    p.add_argument("--order")

    p = sub.add_parser("cutwidth", parents=[common], help="exact cutwidth")
    p.add_argument("graph")

    p = sub.add_parser("lrw", parents=[common], help="exact linear rank-width (default over GF(2))")
    p.add_argument("graph")

    p = sub.add_parser("gadget", parents=[common], help="generate a reduction polynomial")
    p.add_argument("kind", choices=KIND_TAGS)
    p.add_argument("graph")
    p.add_argument("-p", type=int, dest="p")

    p = sub.add_parser("tensor", parents=[common], help="tensor power of a polynomial")
    p.add_argument("poly")
    p.add_argument("-l", type=int, required=True, dest="l")
    p.add_argument("--tensor-cap", type=int, default=100_000, dest="tensor_cap")

    p = sub.add_parser("orbit", parents=[common], help="width of a gadget after an affine map")
    p.add_argument("kind", choices=("orbit0", "orbitp"))
    p.add_argument("graph")
    p.add_argument("--map", required=True, help="JSON file with 'A' and optional 'b'")
    p.add_argument("-p", type=int, dest="p")

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--nmax", type=int, default=5)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    inputs = [getattr(args, k) for k in ("kind", "poly", "graph") if getattr(args, k, None) is not None]
    options = {
        k: getattr(args, k)
        for k in ("order", "p", "l", "map", "suite", "nmax", "tensor_cap")
        if getattr(args, k, None) is not None
    }
    if args.subcommand == "tensor" and args.l < 1:
        raise ParseError("-l must be at least 1")
    return RunConfig(
        subcommand=args.subcommand,
        inputs=inputs,
        field=Field.from_name(args.field) if args.field else None,
        ncap=args.ncap if args.ncap is not None else n_cap(),
        expansion_cap=args.expansion_cap,
        seed=args.seed,
        jobs=args.jobs,
        output=args.output,
        fmt=args.fmt,
        options=options,
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        status, text = run(config)
    except RoabpError as exc:
        print(_dump({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(_dump({"error": "io_error", "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
