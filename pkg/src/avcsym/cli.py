"""Command-line entry point.

Subcommands: check, fvalue, random-scan, bosonic-scan, discretize-scan.
Ranges are start:stop:step triples (stop inclusive); the discretize-scan step
may be the word "halving".  Scans write CSV to --out plus a .config.json
sidecar echoing every flag; check/fvalue print JSON to stdout.  Exit codes:
0 success (for check: not epsilon-symmetrizable), 2 epsilon-symmetrizable,
1 any error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .avc import load_avc
from .bosonic import BosonicParams, eta_scan, write_eta_csv
from .errors import AvcsymError
from .jammergrid import convergence_scan, write_convergence_csv
from .randomscan import ScanConfig, psym_surface, write_psym_csv
from .symmetrize import DEFAULT_EPSILON, f_value, is_epsilon_symmetrizable

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SYMMETRIZABLE = 2


def parse_range(text: str, *, integer: bool = False, allow_halving: bool = False) -> list:
    """start:stop:step with inclusive stop; step may be 'halving' if allowed."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must be start:stop:step, got {text!r}")
    start, stop = float(parts[0]), float(parts[1])
    if allow_halving and parts[2] == "halving":
        if start < stop or stop <= 0.0:
            raise ValueError(f"halving range needs start >= stop > 0, got {text!r}")
        values = []
        v = start
        while v >= stop * (1.0 - 1e-9):
            values.append(v)
            v /= 2.0
        return values
    step = float(parts[2])
    if step == 0.0:
        raise ValueError(f"range step must be nonzero, got {text!r}")
    count = math.floor((stop - start) / step + 1e-9) + 1
    if count < 1:
        raise ValueError(f"range {text!r} is empty")
    values = [start + k * step for k in range(count)]
    if integer:
        out = []
        for v in values:
            if abs(v - round(v)) > 1e-9:
                raise ValueError(f"range {text!r} must contain integers")
            out.append(int(round(v)))
        return out
    return values


def resolve_seed(value) -> int:
    """--seed flag, else AVCSYM_SEED from the environment, else 0."""
    if value is not None:
        return value
    env = os.environ.get("AVCSYM_SEED")
    return int(env) if env else 0


def _write_sidecar(out_path: str, config: dict) -> None:
    with open(out_path + ".config.json", "w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_check(args) -> int:
    avc = load_avc(args.input)
    res = is_epsilon_symmetrizable(avc, args.epsilon)
    print(json.dumps(res.to_json_dict(), indent=2))
    return EXIT_SYMMETRIZABLE if res.is_eps_symmetrizable else EXIT_OK


def cmd_fvalue(args) -> int:
    res = f_value(load_avc(args.input))
    print(json.dumps(res.to_json_dict(), indent=2))
    return EXIT_OK


def cmd_random_scan(args) -> int:
    seed = resolve_seed(args.seed)
    s_values = parse_range(args.s, integer=True)
    exponents = parse_range(args.eps_exponents, integer=True)
    eps_values = [2.0**k for k in exponents]
    config = ScanConfig(
        x_size=args.x,
        y_size=args.y,
        s_values=tuple(s_values),
        eps_values=tuple(eps_values),
        samples_per_cell=args.samples,
        seed=seed,
    )
    _write_sidecar(
        args.out,
        {
            "command": "random-scan",
            "x": args.x,
            "y": args.y,
            "s_values": s_values,
            "eps_values": eps_values,
            "samples_per_cell": args.samples,
            "seed": seed,
            "workers": args.workers,
            "distribution": "flat-dirichlet",
        },
    )
    cells = psym_surface(config, workers=args.workers)
    write_psym_csv(cells, args.out)
    return EXIT_OK


def cmd_bosonic_scan(args) -> int:
    etas = parse_range(args.eta)
    params = BosonicParams(
        m=args.m,
        energy=args.energy,
        noise_sender=args.na,
        noise_jammer=args.ns,
        eta=0.0,
        quad_tol=args.quad_tol,
    )
    _write_sidecar(
        args.out,
        {
            "command": "bosonic-scan",
            "m": args.m,
            "energy": args.energy,
            "noise_sender": args.na,
            "noise_jammer": args.ns,
            "eta_values": etas,
            "quad_tol": args.quad_tol,
            "workers": args.workers,
        },
    )
    rows = eta_scan(params, etas, workers=args.workers)
    write_eta_csv(rows, args.out)
    return EXIT_OK


def cmd_discretize_scan(args) -> int:
    deltas = parse_range(args.delta, allow_halving=True)
    params = BosonicParams(
        m=args.m,
        energy=args.energy,
        noise_sender=args.na,
        noise_jammer=args.ns,
        eta=args.eta,
        quad_tol=args.quad_tol,
    )
    _write_sidecar(
        args.out,
        {
            "command": "discretize-scan",
            "m": args.m,
            "energy": args.energy,
            "energy_limit": args.es,
            "noise_sender": args.na,
            "noise_jammer": args.ns,
            "eta": args.eta,
            "delta_values": deltas,
            "quad_tol": args.quad_tol,
            "workers": args.workers,
        },
    )
    rows = convergence_scan(params, args.es, deltas, workers=args.workers)
    write_convergence_csv(rows, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="avcsym",
        description="Symmetrizability analysis for arbitrarily varying channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide epsilon-symmetrizability of an AVC file")
    p.add_argument("input", help="AVC JSON file")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fvalue", help="compute the exact symmetrization defect")
    p.add_argument("input", help="AVC JSON file")
    p.set_defaults(func=cmd_fvalue)

    p = sub.add_parser("random-scan", help="Monte-Carlo p_sym surface over (S, epsilon)")
    p.add_argument("--x", type=int, default=4)
    p.add_argument("--y", type=int, default=4)
    p.add_argument("--s", default="2:14:1", help="jammer sizes, start:stop:step")
    p.add_argument(
        "--eps-exponents", default="-15:-3:1", help="epsilon = 2^k, k from start:stop:step"
    )
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_random_scan)

    p = sub.add_parser("bosonic-scan", help="defect of the M-PSK channel across eta")
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--energy", type=float, default=16.0)
    p.add_argument("--na", type=float, default=1.0)
    p.add_argument("--ns", type=float, default=1.0)
    p.add_argument("--eta", default="0:1:0.02", help="transmittivities, start:stop:step")
    p.add_argument("--quad-tol", type=float, default=1e-9)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bosonic_scan)

    p = sub.add_parser(
        "discretize-scan", help="defect of grid-discretized continuous jammers"
    )
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--energy", type=float, default=16.0)
    p.add_argument("--es", type=float, default=16.0, help="jammer energy limit")
    p.add_argument("--na", type=float, default=1.0)
    p.add_argument("--ns", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=0.7)
    p.add_argument(
        "--delta", default="2:0.25:halving", help="grid pitches, step may be 'halving'"
    )
    p.add_argument("--quad-tol", type=float, default=1e-9)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_discretize_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AvcsymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
