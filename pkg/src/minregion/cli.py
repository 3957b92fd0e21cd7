"""Command-line front end.

Every subcommand reads a JSON config::

    {"x1_star": [-6, 0], "x2_star": [6, 0], "sigma1": 1.5, "sigma2": 1, "L": 10}

with optional ``tol``, ``seed``, ``trials`` and ``samples`` defaults, and
writes JSON to stdout.  Exit status is 2 for bad input, 1 when a
verification run finds violations, 0 otherwise.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

from .errors import MinRegionError
from .federated import fed_point
from .geometry import ProblemInstance
from .oracle import mc_completeness, mc_soundness
from .quadwit import witness_family, witness_pair
from .region import DEFAULT_TOL, classify, regime
from .trace import trace_boundary, write_csv, write_svg


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    x1_star: list
    x2_star: list
    sigma1: float
    sigma2: float
    L: float
    tol: float = DEFAULT_TOL
    seed: int = 0
    trials: int = 1000
    samples: int = 256

    def instance(self):
        return ProblemInstance(self.x1_star, self.x2_star, self.sigma1, self.sigma2, self.L)


def _number(data, key, kind=float, default=None):
    if key not in data:
        if default is None:
            raise ConfigError(f"{key}: missing")
        return default
    val = data[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {val!r}")
    if kind is int and val != int(val):
        raise ConfigError(f"{key}: expected an integer, got {val!r}")
    if not math.isfinite(val):
        raise ConfigError(f"{key}: must be finite")
    return kind(val)


def _vector(data, key):
    if key not in data:
        raise ConfigError(f"{key}: missing")
    val = data[key]
    if not isinstance(val, list):
        raise ConfigError(f"{key}: expected an array of numbers")
    for i, v in enumerate(val):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError(f"{key}[{i}]: expected a finite number, got {v!r}")
    return [float(v) for v in val]


def parse_config(data):
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    x1 = _vector(data, "x1_star")
    x2 = _vector(data, "x2_star")
    if len(x1) != len(x2):
        raise ConfigError(f"x2_star: length {len(x2)} differs from x1_star length {len(x1)}")
    if len(x1) < 2:
        raise ConfigError("x1_star: dimension must be at least 2")
    cfg = Config(
        x1, x2,
        _number(data, "sigma1"), _number(data, "sigma2"), _number(data, "L"),
        tol=_number(data, "tol", default=DEFAULT_TOL),
        seed=_number(data, "seed", int, default=0),
        trials=_number(data, "trials", int, default=1000),
        samples=_number(data, "samples", int, default=256),
    )
    for key in ("sigma1", "sigma2", "L", "tol"):
        if getattr(cfg, key) <= 0:
            raise ConfigError(f"{key}: must be positive")
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_config(data)


def parse_point(text, n: Optional[int] = None):
    try:
        pt = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"point: cannot parse {text!r}") from exc
    if not all(math.isfinite(v) for v in pt):
        raise ConfigError("point: entries must be finite")
    if n is not None and len(pt) != n:
        raise ConfigError(f"point: expected {n} coordinates, got {len(pt)}")
    return pt


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_regime(cfg, args):
    _emit(regime(cfg.instance()).to_dict())
    return 0


def cmd_classify(cfg, args):
    inst = cfg.instance()
    x = parse_point(args.point, inst.n)
    tol = args.tol if args.tol is not None else cfg.tol
    out = classify(inst, x, tol).to_dict()
    out["point"] = x
    _emit(out)
    return 0


def cmd_trace(cfg, args):
    samples = args.samples if args.samples is not None else cfg.samples
    tr = trace_boundary(cfg.instance(), samples)
    write_csv(tr, args.output)
    if args.svg:
        write_svg(tr, args.svg)
    curves, points = tr.piece_counts()
    _emit({"segments": len(tr.segments), "curve_kinds": curves, "isolated_points": points,
           "csv": args.output, "svg": args.svg})
    return 0


def cmd_witness(cfg, args):
    inst = cfg.instance()
    x = parse_point(args.point, inst.n)
    if args.k == 1:
        _emit(witness_pair(inst, x).to_dict())
    else:
        _emit([w.to_dict() for w in witness_family(inst, x, args.k)])
    return 0


def cmd_fedpoint(cfg, args):
    _emit(fed_point(cfg.instance(), cfg.tol).to_dict())
    return 0


def cmd_verify(cfg, args):
    inst = cfg.instance()
    trials = args.trials if args.trials is not None else cfg.trials
    seed = args.seed if args.seed is not None else cfg.seed
    if trials < 1:
        raise ConfigError("trials: must be at least 1")
    if args.mode == "sound":
        rep = mc_soundness(inst, trials, spread=args.spread, seed=seed, tol=cfg.tol)
    else:
        rep = mc_completeness(inst, trials, seed=seed)
    print(rep.to_json())
    return 0 if rep.ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="minregion", description="Region of possible minimizers of a sum of two strongly convex functions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("-c", "--config", required=True, help="JSON config file")
        sp.set_defaults(func=func)
        return sp

    add("regime", cmd_regime, "regime and boundary constants")
    sp = add("classify", cmd_classify, "Interior / Boundary / Exterior of a point")
    sp.add_argument("-p", "--point", required=True, help="comma-separated coordinates")
    sp.add_argument("--tol", type=float)
    sp = add("trace", cmd_trace, "trace the boundary (n = 2)")
    sp.add_argument("-o", "--output", required=True, help="CSV output path")
    sp.add_argument("--svg", help="optional SVG output path")
    sp.add_argument("--samples", type=int)
    sp = add("witness", cmd_witness, "quadratic witness pair(s) for a point")
    sp.add_argument("-p", "--point", required=True)
    sp.add_argument("-k", type=int, default=1)
    add("fedpoint", cmd_fedpoint, "sigma-weighted aggregate and minimal L")
    sp = add("verify", cmd_verify, "Monte-Carlo verification")
    sp.add_argument("--mode", choices=("sound", "complete"), required=True)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--spread", type=float, default=1.0)
    return p


def _join_point_args(argv):
    # "-p -2,0" would otherwise be read as an option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("-p", "--point"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--point={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_point_args(argv))
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = load_config(args.config)
        return args.func(cfg, args)
    except (ConfigError, MinRegionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
