"""Batch front end: subcommand dispatch, config validation, report emission.

Every subcommand funnels through ``run(config)`` so that a flag invocation
and a JSON config produce identical artifacts; identical config + seed give
byte-identical JSON.  Exit codes: 0 ok, 2 config rejected by the schema,
3 numerical budget exceeded, 4 internal invariant breach (repro bundle
written next to the reports).
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import sys
import traceback
from fractions import Fraction
from pathlib import Path

import jsonschema

from .errors import BudgetExceeded, DecoupError, InternalInvariantError, QuadratureBudgetExceeded
from .estimator import TrialSpec, decoupling_ratios
from .fields import default_grid
from .intervals import UNIT, Interval
from .neighborhoods import DualRect, cap_parallelogram, minkowski_contained, truncation_overlap
from .partitions import (
    Partition,
    canonical_partition,
    dyadic_blocks,
    greedy_partition,
    is_sub_admissible,
    is_super_admissible,
    trivial_partition,
)
from .phases import PolyPhase, SublevelParams, bad_set, check_class_membership
from .polynomials import as_fraction
from .recursion import geometric_exponent_sum, iterate_nonzero, unroll_main
from .reporting import dump_json, loglog_svg, neighborhood_svg, partition_csv, partition_strip_svg, write_csv

_SCHEMA = json.loads(
    importlib.resources.files("decoup").joinpath("schema/experiment.schema.json").read_text()
)


def _parse_phase(text: str) -> PolyPhase:
    return PolyPhase.from_string(text)


def _build_partition(config: dict, phase: PolyPhase, delta: Fraction) -> Partition:
    kind = config.get("partition", "greedy")
    mode = config.get("mode", "exact")
    if kind == "canonical":
        return canonical_partition(delta)
    if kind == "trivial":
        return trivial_partition(UNIT, delta)
    if kind == "file":
        payload = json.loads(Path(config["partition_file"]).read_text())
        return Partition(
            Interval(as_fraction(payload["base"]["lo"]), as_fraction(payload["base"]["hi"])),
            tuple(as_fraction(c) for c in payload["cuts"]),
            as_fraction(payload["scale_r"]),
            label=payload.get("label", "file"),
        )
    return greedy_partition(phase, UNIT, delta, mode)


def _partition_payload(part: Partition, phase: PolyPhase, mode: str) -> dict:
    sup = part.super_admissible
    sub = part.sub_admissible
    if sup is None:
        sup = is_super_admissible(phase, part, mode=mode)
    if sub is None:
        sub = is_sub_admissible(phase, part, mode=mode)
    return {
        "base": part.base,
        "cuts": [float(c) for c in part.cuts],
        "cuts_exact": list(part.cuts),
        "scale_r": part.scale_r,
        "flags": {"super_admissible": sup, "sub_admissible": sub},
        "label": part.label,
        "n_cells": part.n_cells,
    }


def run(config: dict) -> int:
    """Validate the config, execute the subcommand, write artifacts."""
    try:
        jsonschema.validate(config, _SCHEMA)
    except jsonschema.ValidationError as exc:
        print(f"config rejected: {exc.message}", file=sys.stderr)
        return 2

    out_dir = Path(config.get("out_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        return _dispatch(config, out_dir)
    except (BudgetExceeded, QuadratureBudgetExceeded) as exc:
        print(f"numerical budget exceeded: {exc}", file=sys.stderr)
        return 3
    except InternalInvariantError as exc:
        bundle = {"config": config, "error": str(exc), "traceback": traceback.format_exc()}
        dump_json(bundle, out_dir / "repro_bundle.json")
        print(f"internal invariant breach: {exc} (repro bundle written)", file=sys.stderr)
        return 4


def _dispatch(config: dict, out_dir: Path) -> int:
    cmd = config["command"]
    mode = config.get("mode", "exact")
    svg = bool(config.get("svg", False))

    if cmd == "bootstrap":
        deltas = [as_fraction(x) for x in config.get("deltas", ["1/65536"])]
        traces = []
        for d in deltas:
            main = unroll_main(
                as_fraction(config.get("K", 2)),
                as_fraction(config.get("eps", "1/2")),
                as_fraction(config.get("C", 1)),
                d,
            )
            inter = iterate_nonzero(d) if d < Fraction(1, 4) else None
            traces.append({"delta": d, "main": main, "intermediate": inter})
            print(f"delta={float(d):g}: n={main.params['n']} "
                  f"closed={main.closed_form} verified={main.verified}")
            if inter is not None:
                chain = " -> ".join(f"{s.scale:g}" for s in inter.steps)
                print(f"  scale chain: {chain} (verified={inter.verified})")
        dump_json({"traces": traces,
                   "geometric_exponent_sums": {n: geometric_exponent_sum(n) for n in range(9)}},
                  out_dir / "bootstrap.json")
        return 0

    phase = _parse_phase(config.get("phase", "s^2"))

    if cmd == "partition":
        deltas = [as_fraction(x) for x in config.get("deltas", ["1/256"])]
        payloads = []
        for d in deltas:
            part = _build_partition(config, phase, d)
            payloads.append(_partition_payload(part, phase, mode))
            print(f"delta={float(d):g}: {part.n_cells} cells "
                  f"({part.label})")
        dump_json(payloads if len(payloads) > 1 else payloads[0], out_dir / "partition.json")
        (out_dir / "partition.csv").write_text(
            "".join(partition_csv(p["cuts"]) for p in payloads)
        )
        if svg:
            partition_strip_svg(payloads[-1]["cuts"], out_dir / "partition.svg")
        return 0

    if cmd == "badset":
        d_class = config.get("d", 1)
        const = config.get("const", 10.0)
        sigma = as_fraction(config.get("sigma", "1/100"))
        lo, hi = config.get("interval", [0, 1])
        j = Interval(as_fraction(lo), as_fraction(hi))
        params = SublevelParams(d_class, const, sigma)
        b = bad_set(phase, j, params)
        report = check_class_membership(phase, params, [sigma], [j])
        payload = {
            "phase": str(phase),
            "interval": j,
            "sigma": sigma,
            "threshold": b.threshold,
            "components": list(b.components),
            "measure": b.measure,
            "count": b.count,
            "membership": report,
        }
        dump_json(payload, out_dir / "badset.json")
        print(f"bad set: {b.count} components, measure {float(b.measure):g}, "
              f"membership pass={report.passed}")
        return 0

    if cmd == "neighborhood":
        deltas = [as_fraction(x) for x in config.get("deltas", ["1/256"])]
        d_exp = config.get("d", 3)
        const = config.get("block_const", d_exp * 2**d_exp)
        payloads = []
        for dlt in deltas:
            part = _build_partition(config, phase, dlt)
            cap = cap_parallelogram(phase, part.cell(0), dlt, mode)
            blocks = dyadic_blocks(dlt, d_exp)
            mink = [minkowski_contained(d_exp, dlt, b.n, const) for b in blocks]
            root = blocks[0].cells.cuts[1]
            overlap = truncation_overlap(blocks[-1].cells, DualRect(dlt, root**d_exp))
            payloads.append({
                "delta": dlt,
                "cap": cap,
                "minkowski": mink,
                "overlap_neighbors": overlap.neighbors,
            })
            print(f"delta={float(dlt):g}: minkowski contained="
                  f"{all(m.contained for m in mink)} "
                  f"max_ratio={max(m.max_ratio for m in mink):.3g}")
            if svg:
                import numpy as np
                a, b_ = part.cell(0).as_floats()
                pts = [(x, phase(x)) for x in np.linspace(a, b_, 64)]
                neighborhood_svg(pts, float(dlt),
                                 (a, b_, float(cap.slope), float(cap.intercept)),
                                 out_dir / f"neighborhood_{float(dlt):g}.svg")
        dump_json(payloads, out_dir / "neighborhood.json")
        return 0

    if cmd == "estimate":
        deltas = [as_fraction(x) for x in config.get("deltas", ["1/256"])]
        ps = [float(p) for p in config.get("ps", [2, 4, 6])]
        trials = config.get("trials", 16)
        seed = config["seed"]
        spec = TrialSpec(
            model=config.get("model", "unimodular"),
            box_mult=float(as_fraction(config.get("box_mult", 1))),
        )
        check = config.get("check_subadmissible", True)
        reports = []
        rows = []
        series: dict[str, list[float]] = {f"p={p:g}": [] for p in ps}
        for dlt in deltas:
            part = _build_partition(config, phase, dlt)
            grid = default_grid(phase, dlt, as_fraction(config.get("box_mult", 1)))
            reps = decoupling_ratios(phase, part, ps, dlt, trials, spec, seed,
                                     grid, check, mode)
            for p in ps:
                r = reps[p]
                reports.append(r)
                rows.append((float(dlt), p, r.max_ratio, r.mean_ratio))
                series[f"p={p:g}"].append(r.max_ratio)
                print(f"delta={float(dlt):g} p={p:g}: max_ratio={r.max_ratio:.6f} "
                      f"mean={r.mean_ratio:.6f} trials={trials}")
        dump_json(reports, out_dir / "estimate.json")
        write_csv(out_dir / "estimate.csv", ("delta", "p", "max_ratio", "mean_ratio"), rows)
        if svg and len(deltas) > 1:
            loglog_svg([1 / float(d) for d in deltas], series, out_dir / "estimate.svg")
        return 0

    if cmd == "appendix-check":
        deltas = [as_fraction(x) for x in config.get("deltas", ["1/256"])]
        d_exp = config.get("d", 3)
        const = config.get("block_const", d_exp * 2**d_exp)
        payloads = []
        for dlt in deltas:
            blocks = dyadic_blocks(dlt, d_exp)
            root = blocks[0].cells.cuts[1]
            block_payload = []
            for b in blocks:
                mink = minkowski_contained(d_exp, dlt, b.n, const)
                entry = {
                    "n": b.n,
                    "block": b.block,
                    "scale": b.scale,
                    "sub_admissible_exact": b.sub_admissible_exact,
                    "sub_admissible_taylor": b.sub_admissible_taylor,
                    "minkowski": mink,
                }
                if b.cells.n_cells > 1:
                    entry["overlap_neighbors"] = truncation_overlap(
                        b.cells, DualRect(dlt, root**d_exp)).neighbors
                block_payload.append(entry)
                print(f"delta={float(dlt):g} block n={b.n}: "
                      f"sub-admissible exact={b.sub_admissible_exact} "
                      f"taylor={b.sub_admissible_taylor} "
                      f"minkowski contained={mink.contained} ratio={mink.max_ratio:.3g}")
            payloads.append({"delta": dlt, "d": d_exp, "blocks": block_payload})
        dump_json(payloads, out_dir / "appendix.json")
        return 0

    raise DecoupError(f"unknown command {cmd!r}")


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--phase", default="s^2", help="phase literal, e.g. '1/6*s^3 - s'")
    sp.add_argument("--delta", action="append", dest="deltas", metavar="DELTA",
                    help="scale (rational like 1/256); repeatable")
    sp.add_argument("--partition", choices=["greedy", "canonical", "trivial", "file"],
                    default="greedy")
    sp.add_argument("--partition-file", dest="partition_file")
    sp.add_argument("--mode", choices=["exact", "taylor"], default="exact")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out-dir", dest="out_dir", default=".")
    sp.add_argument("--svg", action="store_true")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="decoup",
        description="Admissible partitions and decoupling experiments for "
                    "polynomial phases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a JSON experiment config")
    run_p.add_argument("config", help="path to the config (validated against the schema)")

    for name in ("partition", "badset", "neighborhood", "estimate", "appendix-check"):
        sp = sub.add_parser(name)
        _add_common(sp)
        if name == "badset":
            sp.add_argument("--sigma", default="1/100")
            sp.add_argument("--d", type=int, default=1)
            sp.add_argument("--const", type=float, default=10.0)
            sp.add_argument("--interval", nargs=2, default=["0", "1"])
        if name in ("neighborhood", "appendix-check"):
            sp.add_argument("--d", type=int, default=3)
            sp.add_argument("--block-const", dest="block_const", type=float)
        if name == "estimate":
            sp.add_argument("--p", action="append", dest="ps", type=float)
            sp.add_argument("--trials", type=int, default=16)
            sp.add_argument("--model", choices=["unimodular", "gaussian", "ones"],
                            default="unimodular")
            sp.add_argument("--box-mult", dest="box_mult", default="1")
            sp.add_argument("--no-check", dest="check_subadmissible",
                            action="store_false",
                            help="bypass the sub-admissibility precondition "
                                 "(negative controls)")

    boot = sub.add_parser("bootstrap")
    boot.add_argument("--delta", action="append", dest="deltas")
    boot.add_argument("--K", default="2")
    boot.add_argument("--eps", default="1/2")
    boot.add_argument("--C", default="1")
    boot.add_argument("--seed", type=int, default=0)
    boot.add_argument("--out-dir", dest="out_dir", default=".")

    args = parser.parse_args(argv)
    if args.command == "run":
        config = json.loads(Path(args.config).read_text())
        return run(config)

    config = {k: v for k, v in vars(args).items() if v is not None and k != "func"}
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
