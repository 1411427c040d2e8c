"""Command-line interface: ``elliptica {invariants,eval,verify,render,families}``.

Exit status: 0 on success, 1 when verification fails or evaluation breaks
down, 2 for bad input (configuration, lattice, parameters).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from ._serial import c2j
from .config import load_config, parse_viewport
from .errors import (ConfigError, ConstraintViolation, DegenerateLattice, EllipticaError,
                     IncompatibleLattice, MissingParameter)
from .groups import catalog, lookup
from .lattice import Lattice, classify_lattice
from .render import render, write_ppm
from .verifier import DEFAULT_SAMPLES, DEFAULT_TOL, default_seed, verify_invariance
from .weierstrass import evaluate, make_context

INPUT_ERRORS = (ConfigError, ConstraintViolation, DegenerateLattice, IncompatibleLattice,
                MissingParameter)


def _complex_arg(text: str) -> complex:
    try:
        re_, im_ = (float(t) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"expected 're,im', got {text!r}") from None
    return complex(re_, im_)


def _lattice_arg(text: str) -> Lattice:
    parts = text.split(";")
    if len(parts) != 2:
        raise ConfigError(f"lattice must be 're,im;re,im', got {text!r}")
    try:
        return Lattice(_complex_arg(parts[0]), _complex_arg(parts[1]))
    except DegenerateLattice as exc:
        raise ConfigError(str(exc)) from exc


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_invariants(args) -> int:
    lat = _lattice_arg(args.lattice)
    ctx = make_context(lat)
    out = ctx.invariants.to_json()
    out["class"] = classify_lattice(lat).value
    _emit(out)
    return 0


def cmd_eval(args) -> int:
    ctx = make_context(_lattice_arg(args.lattice))
    _emit(evaluate(_complex_arg(args.z), ctx).to_json())
    return 0


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    f = cfg.build()
    seed = default_seed() if args.seed is None else args.seed
    report = verify_invariance(f, n=args.samples, tol=args.tol, seed=seed)
    _emit(report.to_json())
    return 0 if report.passed else 1


def cmd_render(args) -> int:
    cfg = load_config(args.config)
    cfg = cfg.with_overrides(width=args.width, height=args.height, supersample=args.supersample,
                             viewport=None if args.viewport is None else parse_viewport(args.viewport))
    img = render(cfg)
    write_ppm(args.out, img)
    print(f"wrote {img.width}x{img.height} image to {args.out}", file=sys.stderr)
    return 0


def cmd_families(args) -> int:
    if args.group is None:
        _emit([g.describe() for g in catalog()])
        return 0
    try:
        spec = lookup(args.group)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    _emit(spec.describe())
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="elliptica",
                                 description="Wallpaper-group invariant elliptic functions.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="g2, g3, half-period values and lattice class")
    p.add_argument("--lattice", required=True, help="periods as 're,im;re,im'")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("eval", help="wp and wp' at one point")
    p.add_argument("--lattice", required=True, help="periods as 're,im;re,im'")
    p.add_argument("--z", required=True, help="point as 're,im'")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="check invariance of a configured function")
    p.add_argument("--config", required=True)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=None,
                   help="sampling seed (default: $ELLIPTICA_SEED or 0)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="domain-coloured PPM image of a configured function")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--viewport", help="'x0,y0,x1,y1' (lower-left, upper-right)")
    p.add_argument("--supersample", type=int)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("families", help="invariant-function family of a group")
    p.add_argument("--group", help="group name; all groups if omitted")
    p.set_defaults(func=cmd_families)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"elliptica: error: {exc}", file=sys.stderr)
        return 2
    except EllipticaError as exc:
        print(f"elliptica: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
