"""Command-line entry point.

    rieszmart generate   [--seed S --omega-size N --depth D --nonneg] [--out FILE]
    rieszmart decompose  --lambda L [...]
    rieszmart verify     [--trials T --lambda L ...]
    rieszmart weaktype   --op {maximal,square,transform} [...]
    rieszmart holder     [--trials T]

Exit status: 0 on success, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from .. import gundy, riemann, weaktype
from ..errors import ConfigInvalid, RieszError
from ..serialize import martingale_to_json
from . import generate as gen
from .config import HarnessConfig
from .suite import make_trial, run_suite


def _common(p: argparse.ArgumentParser, trials_default: int = 200):
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--omega-size", type=int, default=8)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--trials", type=int, default=trials_default)
    p.add_argument("--lambda", dest="lambdas", type=float, action="append", metavar="L")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--nonneg", action="store_true", help="positive martingales only")
    p.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rieszmart")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("generate", help="emit a random martingale as JSON"))
    _common(sub.add_parser("decompose", help="three-martingale decomposition of a random martingale"))
    v = sub.add_parser("verify", help="run the verification suite")
    _common(v)
    v.add_argument("--signed", action="store_true", help="also draw signed martingales")
    w = sub.add_parser("weaktype", help="(lambda, ratio) grid as CSV")
    _common(w, trials_default=20)
    w.add_argument("--op", choices=("maximal", "square", "transform"), required=True)
    _common(sub.add_parser("holder", help="Riemann integral and Hölder checks"), trials_default=100)
    return parser


def _config(args, **overrides) -> HarnessConfig:
    kw = dict(
        seed=args.seed,
        omega_size=args.omega_size,
        depth=args.depth,
        trials=args.trials,
        tol=args.tol,
        nonneg_only=args.nonneg,
        out_path=args.out,
    )
    if args.lambdas:
        kw["lambda_grid"] = tuple(args.lambdas)
    kw.update(overrides)
    return HarnessConfig(**kw)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(type(x))


def cmd_generate(args) -> int:
    cfg = _config(args)
    _emit(_dump(martingale_to_json(gen.generate_random_martingale(cfg))), args.out)
    return 0


def cmd_decompose(args) -> int:
    cfg = _config(args)
    lam = args.lambdas[0] if args.lambdas else 0.5
    f = gen.generate_random_martingale(cfg)
    d = gundy.gundy_decompose(f, lam)
    out = gundy.to_json(d, gundy.decomposition_report(d, f))
    out["martingale"] = martingale_to_json(f)
    _emit(_dump(out), args.out)
    return 0 if out["reconstruction"] else 1


def cmd_verify(args) -> int:
    cfg = _config(args, nonneg_only=not args.signed)
    report = run_suite(cfg)
    if not args.out:
        sys.stdout.write(report.dumps())
    return 0 if report.passed else 1


def cmd_weaktype(args) -> int:
    cfg = _config(args)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["lambda", "ratio", "component", "trial"])
    for i in range(cfg.trials):
        t = make_trial(cfg, i)
        if args.op == "maximal":
            L = weaktype.MAXIMAL
        elif args.op == "square":
            L = weaktype.SQUARE
        else:
            L = weaktype.transform_maximal(gen.random_predictable(t.rng, t.filtration))
        for lam in cfg.lambda_grid:
            lhs, rhs = weaktype.weak_type_ratio(L, t.f, lam)
            for j, (a, b) in enumerate(zip(lhs.values, rhs.values)):
                ratio = a / b if b > 0 else 0.0
                writer.writerow([repr(lam), repr(float(ratio)), j, i])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_holder(args) -> int:
    cfg = _config(args)
    rng = gen.rng_for(cfg.seed)
    space = gen.random_space(rng, cfg.omega_size)
    e = space.unit
    results = {}

    half = riemann.StepFunction.from_elements([0, Fraction(1, 2), 1], [e, space.zero])
    lhs, rhs = riemann.holder_check(half, riemann.StepFunction.constant(0, 1, e), 2, 2)
    results["half_indicator"] = bool(
        np.allclose(lhs.values, 0.5) and np.allclose(rhs.values, 2**-0.5)
    )
    r1 = riemann.rademacher(1, space)
    results["rademacher_mean_zero"] = bool(np.all(riemann.integrate(r1).values == 0))
    results["rademacher_unit_square"] = bool(
        np.all(riemann.integrable_product(r1, r1).values == 1)
    )
    worst = 0.0
    ok = True
    for _ in range(cfg.trials):
        f = gen.random_step_function(rng, space)
        g = gen.random_step_function(rng, space)
        for p in cfg.holder_exponents:
            lhs, rhs = riemann.holder_check(f, g, p, p / (p - 1))
            ok &= bool(np.all(lhs.values <= rhs.values + cfg.tol * (1 + rhs.values)))
            worst = max(worst, gundy.ratio_of(lhs, rhs))
    results["holder_random"] = ok
    summary = {"checks": results, "holder_max_ratio": worst, "pass": all(results.values())}
    _emit(_dump(summary), args.out)
    return 0 if summary["pass"] else 1


COMMANDS = {
    "generate": cmd_generate,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "weaktype": cmd_weaktype,
    "holder": cmd_holder,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigInvalid as exc:
        print(f"rieszmart: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except RieszError as exc:
        print(f"rieszmart: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"rieszmart: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
