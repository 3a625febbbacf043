"""Command-line front end.

Subcommands: analyze (universality measurement), bounds (closed-form bound
evaluation), simulate (exact/Monte-Carlo channel simulation), verify (the
acceptance criteria), sweep (CSV over a parameter grid).  Single results are
JSON, sweeps default to CSV.  Exact rationals are printed as fractions,
floats at 12 significant digits.  Identical seed and flags give
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import acceptance
from .bounds import (
    approach_ratio,
    gallager_family_bound,
    qkd_bounds,
    reliability_e,
)
from .gf2 import parse_code
from .hashfam import HashFamilySpec, make_family
from .simulator import (
    counterexample_leakage,
    distill_keys,
    exact_error_prob,
    family_average_error,
    parse_channel,
    wiretap_eval,
)
from .universality import (
    CodeFamily,
    counterexample_family,
    epsilon_dual_universal,
    epsilon_universal,
    tight_family,
)

__all__ = ["main"]

HASH_KINDS = {"toeplitz", "modified-toeplitz", "random-linear"}


def _format_value(v):
    """Exact fractions stay exact; floats are cut to 12 significant digits."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, float):
        if math.isinf(v) or math.isnan(v):
            return str(v)
        return float(f"{v:.12g}")
    if isinstance(v, dict):
        return {k: _format_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_format_value(x) for x in v]
    if isinstance(v, (int, str)):
        return v
    return str(v)


def _emit(args, payload, records=None):
    """JSON for single payloads; CSV (or JSON) for record lists."""
    fmt = getattr(args, "format", "json") or "json"
    if records is not None and fmt == "csv":
        keys = []
        rows = [_format_value(r) for r in records]
        for r in rows:
            for k in r:
                if k not in keys:
                    keys.append(k)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=keys)
        writer.writeheader()
        for r in rows:
            writer.writerow(r)
        text = buf.getvalue()
    else:
        body = records if records is not None else payload
        text = json.dumps(_format_value(body), sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _parse_grid(text: str) -> list[float]:
    """Either a comma list "1,2,3" or an inclusive range "a:b:step"."""
    if ":" in text:
        a, b, step = (float(x) for x in text.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        vals = []
        i = 0
        while True:
            v = a + i * step
            if v > b + 1e-12:
                break
            vals.append(v)
            i += 1
        return vals
    return [float(x) for x in text.split(",")]


def _build_family(args) -> CodeFamily:
    kind = args.kind
    if kind in HASH_KINDS:
        if args.m is None:
            raise ValueError(f"{kind} needs -m")
        spec = HashFamilySpec(kind.replace("-", "_"), args.n, args.m)
        return CodeFamily.from_hash_family(make_family(spec))
    if kind == "counterexample":
        return counterexample_family(args.n, seed=args.seed)
    if kind == "tight":
        if args.t is None or args.epsilon is None:
            raise ValueError("tight needs -t and --epsilon")
        return tight_family(args.n, args.t, _parse_fraction(args.epsilon), args.x)
    raise ValueError(f"unknown kind: {kind}")


def _cmd_analyze(args) -> int:
    if args.mc:
        raise ValueError("analyze measures by exact enumeration; --mc is not supported")
    fam = _build_family(args)
    rep = epsilon_universal(fam, args.convention)
    drep = epsilon_dual_universal(fam, args.convention)
    _emit(
        args,
        {
            "kind": args.kind,
            "n": args.n,
            "members": len(fam),
            "convention": args.convention,
            "epsilon": rep.epsilon,
            "dual_epsilon": drep.epsilon,
            "report": rep.to_record(),
            "dual_report": drep.to_record(),
            "seed": args.seed,
        },
    )
    return 0


def _cmd_bounds(args) -> int:
    if args.topic == "reliability":
        e_val, s_star, residual = reliability_e(args.R, args.p)
        _emit(
            args,
            {"E": e_val, "s_star": s_star, "identity_residual": residual,
             "R": args.R, "p": args.p},
        )
        return 0
    if args.topic == "gallager":
        rep = gallager_family_bound(args.n, args.R, args.p, args.epsilon)
        _emit(args, rep.to_record())
        return 0
    if args.topic == "qkd":
        rep = qkd_bounds(
            args.n, args.approach, S=args.S, l=args.l, p_ph=args.p_ph,
            epsilon=args.epsilon,
        )
        _emit(args, rep.to_record())
        return 0
    if args.topic == "ratio":
        _emit(
            args,
            {"n": args.n, "epsilon": args.epsilon,
             "ratio": approach_ratio(args.n, args.epsilon)},
        )
        return 0
    raise ValueError(f"unknown bounds topic: {args.topic}")


def _cmd_simulate(args) -> int:
    if args.what == "error-prob":
        code = parse_code(Path(args.code).read_text())
        target = code
        if args.base:
            target = (code, parse_code(Path(args.base).read_text()))
        value = exact_error_prob(target, _parse_fraction(args.p))
        _emit(args, {"error_prob": value, "n": code.n, "p": args.p})
        return 0
    if args.what == "family-average":
        spec = HashFamilySpec(args.kind.replace("-", "_"), args.n, args.m)
        res = family_average_error(
            make_family(spec),
            _parse_fraction(args.p),
            args.R,
            epsilon=args.epsilon,
            mode="monte_carlo" if args.mc else "exact",
            sample_count=args.samples,
            seed=args.seed,
        )
        rec = res.to_record()
        rec["seed"] = args.seed
        _emit(args, rec)
        return 0
    if args.what == "wiretap":
        pxz = parse_channel(Path(args.channel).read_text())
        c1 = parse_code(Path(args.c1).read_text())
        c2 = parse_code(Path(args.c2).read_text())
        res = wiretap_eval(
            len(pxz), pxz, c1, c2, mode="phase_only" if args.phase_only else "exact"
        )
        _emit(args, res.to_record())
        return 0
    if args.what == "counterexample":
        res = counterexample_leakage(args.n, float(Fraction(args.p)), seed=args.seed)
        rec = res.to_record()
        rec["seed"] = args.seed
        _emit(args, rec)
        return 0
    if args.what == "distill":
        c1 = parse_code(Path(args.c1).read_text())
        c2 = parse_code(Path(args.c2).read_text())
        from .gf2 import BitVector

        k_a = BitVector.from_string(args.key_a)
        k_b = BitVector.from_string(args.key_b)
        s_a, s_b, agree = distill_keys(k_a, k_b, c1, c2, args.seed)
        _emit(
            args,
            {"key_a": str(s_a), "key_b": str(s_b), "agree": agree,
             "seed": args.seed},
        )
        return 0
    raise ValueError(f"unknown simulate target: {args.what}")


def _cmd_verify(args) -> int:
    if args.criteria == ["all"]:
        numbers = sorted(acceptance.CRITERIA)
    else:
        try:
            numbers = sorted({int(c) for c in args.criteria})
        except ValueError:
            raise ValueError("criteria must be 'all' or criterion numbers")
        unknown = [n for n in numbers if n not in acceptance.CRITERIA]
        if unknown:
            raise ValueError(f"unknown criteria: {unknown}")
    results = acceptance.run_criteria(numbers, seed=args.seed)
    text = acceptance.format_results(results) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else 1


def _cmd_sweep(args) -> int:
    if args.topic == "reliability":
        records = []
        for rate in _parse_grid(args.r_grid):
            e_val, s_star, residual = reliability_e(rate, args.p)
            records.append(
                {"R": rate, "p": args.p, "E": e_val, "s_star": s_star,
                 "identity_residual": residual}
            )
        _emit(args, None, records=records)
        return 0
    if args.topic == "qkd":
        records = []
        for n in _parse_grid(args.n_grid):
            rep = qkd_bounds(
                int(n), args.approach, S=args.S, l=args.l, p_ph=args.p_ph,
                epsilon=args.epsilon,
            )
            records.append(rep.to_record())
        _emit(args, None, records=records)
        return 0
    if args.topic == "ratio":
        records = [
            {"n": int(n), "epsilon": args.epsilon,
             "ratio": approach_ratio(int(n), args.epsilon)}
            for n in _parse_grid(args.n_grid)
        ]
        _emit(args, None, records=records)
        return 0
    raise ValueError(f"unknown sweep topic: {args.topic}")


def _add_output_flags(p, default_format="json"):
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument(
        "--format", choices=("json", "csv"), default=default_format,
        help="output format",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualhash",
        description="Measure, bound, and simulate dual universal hash families.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("analyze", help="measure universality parameters exactly")
    p.add_argument(
        "--kind", required=True,
        choices=sorted(HASH_KINDS | {"counterexample", "tight"}),
    )
    p.add_argument("-n", type=int, required=True, help="input length")
    p.add_argument("-m", type=int, help="output length (hash kinds)")
    p.add_argument("-t", type=int, help="member dimension (tight)")
    p.add_argument("--epsilon", help="target epsilon as a fraction (tight)")
    p.add_argument("-x", type=int, default=1, help="equality point (tight)")
    p.add_argument("--convention", choices=("min_dim", "max_dim"), default="min_dim")
    p.add_argument("--exact", action="store_true", help="exact enumeration (default)")
    p.add_argument("--mc", action="store_true", help="rejected: analyze is exact only")
    p.add_argument("--seed", type=int, help="seed for sampled constructions")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("bounds", help="evaluate closed-form bounds")
    p.add_argument("topic", choices=("reliability", "gallager", "qkd", "ratio"))
    p.add_argument("-n", type=int, help="block length")
    p.add_argument("-R", type=float, help="rate")
    p.add_argument("-p", type=float, help="crossover probability")
    p.add_argument("-S", type=float, help="sacrificed-bit rate")
    p.add_argument("-l", type=int, help="key length")
    p.add_argument("--p-ph", type=float, help="phase error probability")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument(
        "--approach",
        choices=(
            "phase_sum", "phase_iid", "phase_deterministic",
            "delta_biased_d1", "delta_biased_chi_b", "delta_biased_chi_c",
        ),
    )
    _add_output_flags(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("simulate", help="exact or Monte-Carlo simulation")
    p.add_argument(
        "--what", required=True,
        choices=("error-prob", "family-average", "wiretap", "counterexample",
                 "distill"),
    )
    p.add_argument("--code", help="code file (n k header, then basis rows)")
    p.add_argument("--base", help="subcode file for coset decoding")
    p.add_argument("--c1", help="outer code file")
    p.add_argument("--c2", help="inner code file")
    p.add_argument("--channel", help="per-qubit channel table file")
    p.add_argument("--kind", default="random-linear", choices=sorted(HASH_KINDS))
    p.add_argument("-n", type=int, help="input length")
    p.add_argument("-m", type=int, help="output length")
    p.add_argument("-p", help="error probability (fraction or decimal)")
    p.add_argument("-R", type=float, help="nominal rate for attached bounds")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, help="mandatory for sampled computations")
    p.add_argument("--exact", action="store_true", help="exact per member (default)")
    p.add_argument("--mc", action="store_true", help="Monte-Carlo per member")
    p.add_argument("--phase-only", action="store_true")
    p.add_argument("--key-a", help="Alice's raw key bits (distill)")
    p.add_argument("--key-b", help="Bob's raw key bits (distill)")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("criteria", nargs="+", help="'all' or criterion numbers")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="also write the report to this path")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sweep", help="tabulate bounds over a parameter grid")
    p.add_argument("topic", choices=("reliability", "qkd", "ratio"))
    p.add_argument("-p", type=float, help="crossover probability")
    p.add_argument("-S", type=float, help="sacrificed-bit rate")
    p.add_argument("-l", type=int, help="key length")
    p.add_argument("--p-ph", type=float)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--approach", default="phase_sum",
                   choices=("phase_sum", "phase_iid", "phase_deterministic",
                            "delta_biased_d1", "delta_biased_chi_b",
                            "delta_biased_chi_c"))
    p.add_argument("--r-grid", help="rate grid: comma list or a:b:step")
    p.add_argument("--n-grid", help="block length grid: comma list or a:b:step")
    _add_output_flags(p, default_format="csv")
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "what", None) == "family-average" and args.seed is None:
        parser.error("family-average sampling needs --seed")
    if getattr(args, "what", None) == "distill" and args.seed is None:
        parser.error("distill needs --seed")
    if getattr(args, "what", None) == "mc" or getattr(args, "mc", False):
        if getattr(args, "seed", None) is None and args.verb == "simulate":
            parser.error("--mc needs --seed")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
