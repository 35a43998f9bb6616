"""Command-line front end: one subcommand per experiment family."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .coupling import (
    CoupledSample,
    couple_prop_i,
    couple_prop_ii,
    couple_prop_iii,
    couple_reduce,
    reduce_once,
    reduce_to_prefix,
    samples_to_csv,
)
from .errors import FrostreeError
from .exact import (
    HeightDistribution,
    exact_height_distribution_forward,
    exact_height_distribution_reverse,
    min_floor_search,
    stochastic_dominates,
)
from .forward import build_forward
from .montecarlo import (
    BennettQuery,
    bennett_bound,
    check_theorem_main,
    empirical_dominance,
    height_threshold,
    run_mc,
)
from .rng import RngStream, exhaust
from .sequences import parse_sequence


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    seq: str | None
    seq2: str | None
    n: int | None
    replicas: int
    seed: int
    threads: int
    format: str
    out: str | None
    mode: str


def _default_seed() -> int:
    return int(os.environ.get("FROSTREE_SEED", "0"))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frostree",
        description="Build, enumerate and compare uniform attachment trees with freezing.",
        epilog=(
            "Sequence grammar: seq := term+ ; term := atom ['^' count] ; "
            "atom := '+' | '-' | '(' seq ')'.  Example: \"+^3(-+)^2\".  "
            "Spell sequences that start with '-' as --seq=TEXT."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser, seq: bool = True) -> None:
        if seq:
            p.add_argument("--seq", required=True, help="choice sequence text")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("simulate", help="Monte Carlo height histogram")
    common(p)
    p.add_argument("--replicas", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument(
        "--dump-tree",
        action="store_true",
        help="dump the replica-0 tree (one vertex per line) instead of the report",
    )

    p = sub.add_parser("exact", help="exact height distribution")
    common(p)
    p.add_argument(
        "--construction",
        choices=["forward", "reverse", "both"],
        default="forward",
    )

    p = sub.add_parser("couple", help="coupled height samples")
    common(p, seq=False)
    p.add_argument(
        "--which",
        choices=["reduce", "prop_i", "prop_ii", "prop_iii"],
        required=True,
    )
    p.add_argument("--seq", default=None, help="sequence (reduce coupling only)")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--mode", choices=["mc", "enumerate"], default="mc")
    p.add_argument("--replicas", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("compare", help="stochastic dominance of two sequences")
    common(p, seq=False)
    p.add_argument("--seq", default=None)
    p.add_argument("--seq2", default=None)
    p.add_argument("--mode", choices=["enumerate", "mc"], default="enumerate")
    p.add_argument("--replicas", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--slack", type=float, default=0.01)
    p.add_argument("--n", type=int, default=None, help="floor search: reference size")
    p.add_argument(
        "--family",
        default=None,
        help="floor search: file of newline-delimited sequences",
    )

    p = sub.add_parser("reduce", help="drop leading attach/freeze pairs")
    common(p)
    p.add_argument("--to-prefix", type=int, default=None, metavar="R")

    p = sub.add_parser("bound", help="Bernoulli-sum tail bound")
    p.add_argument("--mean-sum", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None)

    p = sub.add_parser("theorem", help="height floor check at e ln n - 5 ln ln n")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--replicas", type=int, default=1_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)

    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _json(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _kv_csv(obj: dict) -> str:
    """Flat key,value rendering for scalar results."""
    lines = ["key,value"]
    for key in sorted(obj):
        value = obj[key]
        if isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key},{value}")
    return "\n".join(lines) + "\n"


def _flat(cfg: CliConfig, obj: dict) -> str:
    return _kv_csv(obj) if cfg.format == "csv" else _json(obj)


def _frac_obj(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator}


def _law_from_masses(masses: dict[int, Fraction]) -> dict:
    return HeightDistribution.from_exact(masses).to_json_obj()


def _cmd_simulate(cfg: CliConfig, args: argparse.Namespace) -> str:
    seq = parse_sequence(cfg.seq or "")
    if args.dump_tree:
        arena = build_forward(seq, RngStream(cfg.seed, 0))
        return arena.dump() + "\n"
    report = run_mc(seq, cfg.replicas, cfg.seed, parallelism=cfg.threads)
    return report.to_json() if cfg.format == "json" else report.to_csv()


def _cmd_exact(cfg: CliConfig, args: argparse.Namespace) -> str:
    seq = parse_sequence(cfg.seq or "")
    construction = args.construction
    if construction == "forward":
        dist = exact_height_distribution_forward(seq)
        equal = None
    elif construction == "reverse":
        dist = exact_height_distribution_reverse(seq)
        equal = None
    else:
        dist = exact_height_distribution_forward(seq)
        equal = dist == exact_height_distribution_reverse(seq)
    if cfg.format == "csv":
        text = dist.to_csv()
        if equal is not None:
            text += f"# laws equal: {str(equal).lower()}\n"
        return text
    obj: dict = {"sequence": seq.text, "construction": construction}
    obj["distribution"] = dist.to_json_obj()
    if equal is not None:
        obj["laws_equal"] = equal
    return _json(obj)


def _couple_sampler(which: str, args: argparse.Namespace):
    if which == "reduce":
        if args.seq is None:
            raise FrostreeError("--seq is required for the reduce coupling")
        seq = parse_sequence(args.seq)
        return lambda src: couple_reduce(seq, src)
    if which == "prop_i" or which == "prop_ii":
        if args.m is None or args.n is None:
            raise FrostreeError(f"--m and --n are required for {which}")
        fn = couple_prop_i if which == "prop_i" else couple_prop_ii
        return lambda src: fn(args.m, args.n, src)
    if args.n is None:
        raise FrostreeError("--n is required for prop_iii")
    return lambda src: couple_prop_iii(args.n, src)


def _cmd_couple(cfg: CliConfig, args: argparse.Namespace) -> str:
    sampler = _couple_sampler(args.which, args)
    if cfg.mode == "enumerate":
        law_x: dict[int, Fraction] = {}
        law_xhat: dict[int, Fraction] = {}
        law_rrt: dict[int, Fraction] = {}
        violations = Fraction(0)
        for sample, weight in exhaust(sampler):
            if args.which == "prop_iii":
                hx, hxh, hrrt = sample
                law_rrt[hrrt] = law_rrt.get(hrrt, Fraction(0)) + weight
            else:
                hx, hxh = sample.height_x, sample.height_xhat
            law_x[hx] = law_x.get(hx, Fraction(0)) + weight
            law_xhat[hxh] = law_xhat.get(hxh, Fraction(0)) + weight
            if args.which == "reduce" and hxh > hx:
                violations += weight
        obj = {
            "which": args.which,
            "mode": "enumerate",
            "height_x_law": _law_from_masses(law_x),
            "height_xhat_law": _law_from_masses(law_xhat),
        }
        if args.which == "prop_iii":
            obj["height_rrt_law"] = _law_from_masses(law_rrt)
            mean_xhat = sum((h * p for h, p in law_xhat.items()), Fraction(0))
            mean_rrt = sum((h * p for h, p in law_rrt.items()), Fraction(0))
            obj["mean_height_xhat"] = _frac_obj(mean_xhat)
            obj["mean_height_rrt"] = _frac_obj(mean_rrt)
        if args.which == "reduce":
            obj["pathwise_violation_mass"] = _frac_obj(violations)
        if cfg.format == "csv":
            lines = ["law,height,mass_num,mass_den"]
            named = [("height_x", law_x), ("height_xhat", law_xhat)]
            if args.which == "prop_iii":
                named.append(("height_rrt", law_rrt))
            for name, law in named:
                for h in sorted(law):
                    lines.append(
                        f"{name},{h},{law[h].numerator},{law[h].denominator}"
                    )
            return "\n".join(lines) + "\n"
        return _json(obj)

    samples = []
    for i in range(cfg.replicas):
        result = sampler(RngStream(cfg.seed, i))
        if args.which == "prop_iii":
            hx, hxh, _ = result
            result = CoupledSample(height_x=hx, height_xhat=hxh)
        samples.append(result)
    if cfg.format == "csv":
        return samples_to_csv(samples)
    rows = [
        {
            "replica": i,
            "height_x": s.height_x,
            "height_xhat": s.height_xhat,
            "case": s.case_tag.value if s.case_tag else None,
        }
        for i, s in enumerate(samples)
    ]
    return _json({"which": args.which, "mode": "mc", "samples": rows})


def _cmd_compare(cfg: CliConfig, args: argparse.Namespace) -> str:
    if args.family is not None:
        if cfg.n is None:
            raise FrostreeError("--family requires --n")
        lines = Path(args.family).read_text(encoding="utf-8").splitlines()
        family = [parse_sequence(line) for line in lines if line.strip()]
        floor = min_floor_search(cfg.n, family)
        return _flat(cfg, {"n": cfg.n, "family_size": len(family), "min_floor": floor})

    if args.seq is None or args.seq2 is None:
        raise FrostreeError("compare needs --seq and --seq2 (or --family)")
    seq1 = parse_sequence(args.seq)
    seq2 = parse_sequence(args.seq2)
    if cfg.mode == "enumerate":
        d1 = exact_height_distribution_forward(seq1)
        d2 = exact_height_distribution_forward(seq2)
        fwd = stochastic_dominates(d1, d2)
        bwd = stochastic_dominates(d2, d1)
        verdict = (
            "equal"
            if fwd and bwd
            else "dominates"
            if fwd
            else "dominated"
            if bwd
            else "incomparable"
        )
        return _flat(
            cfg,
            {
                "seq": seq1.text,
                "seq2": seq2.text,
                "seq_dominates_seq2": fwd,
                "seq2_dominates_seq": bwd,
                "verdict": verdict,
            },
        )
    # distinct master seeds keep the two runs independent
    r1 = run_mc(seq1, cfg.replicas, cfg.seed)
    r2 = run_mc(seq2, cfg.replicas, cfg.seed + 1)
    verdict = empirical_dominance(r1, r2, args.slack)
    return _flat(
        cfg,
        {
            "seq": seq1.text,
            "seq2": seq2.text,
            "replicas": cfg.replicas,
            "slack": args.slack,
            "verdict": verdict.value,
        },
    )


def _cmd_reduce(cfg: CliConfig, args: argparse.Namespace) -> str:
    seq = parse_sequence(cfg.seq or "")
    if args.to_prefix is not None:
        result = reduce_to_prefix(seq, args.to_prefix)
        return _flat(
            cfg,
            {
                "original": seq.text,
                "target_run": args.to_prefix,
                "result": result.text,
            },
        )
    red = reduce_once(seq)
    return _flat(
        cfg,
        {
            "original": red.original.text,
            "reduced": red.reduced.text,
            "removed_at": red.removed_at,
        },
    )


def _cmd_theorem(cfg: CliConfig, args: argparse.Namespace) -> str:
    seq = parse_sequence(cfg.seq or "")
    fraction = check_theorem_main(
        seq, args.n, cfg.replicas, cfg.seed, parallelism=cfg.threads
    )
    return _flat(
        cfg,
        {
            "sequence": seq.text,
            "n": args.n,
            "replicas": cfg.replicas,
            "seed": cfg.seed,
            "threshold": height_threshold(args.n),
            "fraction": fraction,
        },
    )


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = CliConfig(
        subcommand=args.subcommand,
        seq=getattr(args, "seq", None),
        seq2=getattr(args, "seq2", None),
        n=getattr(args, "n", None),
        replicas=getattr(args, "replicas", 1),
        seed=(
            getattr(args, "seed", None)
            if getattr(args, "seed", None) is not None
            else _default_seed()
        ),
        threads=getattr(args, "threads", 1),
        format=getattr(args, "format", "json"),
        out=getattr(args, "out", None),
        mode=getattr(args, "mode", "mc"),
    )
    try:
        if cfg.subcommand == "simulate":
            text = _cmd_simulate(cfg, args)
        elif cfg.subcommand == "exact":
            text = _cmd_exact(cfg, args)
        elif cfg.subcommand == "couple":
            text = _cmd_couple(cfg, args)
        elif cfg.subcommand == "compare":
            text = _cmd_compare(cfg, args)
        elif cfg.subcommand == "reduce":
            text = _cmd_reduce(cfg, args)
        elif cfg.subcommand == "bound":
            text = _flat(
                cfg,
                {
                    "mean_sum": args.mean_sum,
                    "t": args.t,
                    "bound": bennett_bound(BennettQuery(args.mean_sum, args.t)),
                },
            )
        else:
            text = _cmd_theorem(cfg, args)
        _emit(text, cfg.out)
    except (FrostreeError, ValueError, OSError) as exc:
        print(f"frostree: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
