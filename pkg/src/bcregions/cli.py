"""Command-line front end.

Commands: region, verify-theorem, simulate, demo-vector-bc.  Exit
codes: 0 success, 1 verification failure, 2 input error, 3 internal
invariant violation.  All commands are deterministic given their
arguments and config file; outputs carry no timestamps.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .channels import BroadcastChannel, ChannelError, load_channel, make_vector_bc, make_bsc_bc, save_channel
from .geometry import Region2D, RegionError, convex_hull, max_weighted_sum, save_region, union
from .probability import DistributionError, JointPmf
from .regions import UVDist, UXDist, load_dist, region_uv, region_ux, region_vx, save_dist
from .render import region_svg
from .search import SweepConfig, sweep_uv, sweep_ux, sweep_vx
from .simulate import SimulationError, estimate_error
from .theorem import strictness_demo, verify_inclusion

__all__ = ["main"]

_INPUT_ERRORS = (ChannelError, DistributionError, SimulationError, OSError, json.JSONDecodeError)


class ConfigError(ValueError):
    pass


def _load_sweep_config(path: str | None, seed: int | None = None) -> SweepConfig:
    """Sweep settings from the optional JSON config file.

    The file holds named blocks; only known blocks and known keys are
    accepted.  A seed given on the command line wins over the file.
    """
    blocks = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            blocks = json.load(fh)
        if not isinstance(blocks, dict):
            raise ConfigError("config root must be an object")
        known_blocks = {"sweep"}
        unknown = set(blocks) - known_blocks
        if unknown:
            raise ConfigError(f"unknown config blocks: {sorted(unknown)}")
    sweep_kwargs = blocks.get("sweep", {})
    if not isinstance(sweep_kwargs, dict):
        raise ConfigError("'sweep' block must be an object")
    fields = {f.name for f in dataclasses.fields(SweepConfig)}
    unknown = set(sweep_kwargs) - fields
    if unknown:
        raise ConfigError(f"unknown sweep keys: {sorted(unknown)}")
    cfg = SweepConfig(**sweep_kwargs)
    if seed is not None:
        cfg = dataclasses.replace(cfg, rng_seed=seed)
    return cfg


def _single_region(channel: BroadcastChannel, scheme: str, dist) -> Region2D:
    if scheme == "uv":
        if not isinstance(dist, UVDist):
            raise ConfigError("scheme uv needs a two-layer dist file")
        return region_uv(channel, dist)
    if not isinstance(dist, UXDist):
        raise ConfigError(f"scheme {scheme} needs a joint (u, x) dist file")
    return region_ux(channel, dist) if scheme == "ux" else region_vx(channel, dist)


def cmd_region(args) -> int:
    channel = load_channel(args.channel)
    schemes = [s.strip() for s in args.scheme.split(",") if s.strip()]
    single = {"uv", "ux", "vx"}
    swept = {"sweep-uv": sweep_uv, "sweep-ux": sweep_ux, "sweep-vx": sweep_vx}
    entries: list[tuple[str, Region2D]] = []
    notes: list[str] = []
    dist = load_dist(args.dist) if args.dist is not None else None
    cfg = _load_sweep_config(args.config, args.seed)
    for scheme in schemes:
        if scheme in single:
            if dist is None:
                raise ConfigError(f"scheme {scheme} requires --dist")
            entries.append((scheme, _single_region(channel, scheme, dist)))
        elif scheme in swept:
            outcome = swept[scheme](channel, cfg)
            entries.append((scheme, outcome.region))
            notes.extend(f"{scheme}: {note}" for note in outcome.notes)
        elif scheme == "het-hull":
            a = sweep_ux(channel, cfg)
            b = sweep_vx(channel, cfg)
            entries.append((scheme, convex_hull([a.region, b.region])))
            notes.extend(f"het-hull: {note}" for note in a.notes + b.notes)
        else:
            raise ConfigError(f"unknown scheme '{scheme}'")

    combined = Region2D([])
    for _, region in entries:
        combined = union(combined, region)
    save_region(combined, args.out)
    if args.svg is not None:
        Path(args.svg).write_text(region_svg(entries), encoding="utf-8")
    for note in notes:
        print(f"note: {note}")
    print(f"wrote {args.out} ({len(combined.parts)} parts, area {combined.area():.6f})")
    return 0


def _theorem_corpus(args):
    yield "vector-bc", make_vector_bc()
    yield "bsc-bc-0.1-0.2", make_bsc_bc(0.1, 0.2)
    yield "bsc-bc-0.1-0.3", make_bsc_bc(0.1, 0.3)
    rng = np.random.default_rng(args.seed)
    for i in range(args.channels):
        nx = int(rng.integers(2, 4))
        ny1 = int(rng.integers(2, 4))
        ny2 = int(rng.integers(2, 4))
        table = np.stack([rng.dirichlet(np.ones(ny1 * ny2)).reshape(ny1, ny2) for _ in range(nx)])
        yield f"random-{i}", BroadcastChannel(table)


def cmd_verify_theorem(args) -> int:
    rng = np.random.default_rng([args.seed, 1])
    lines = []
    all_ok = True
    offender = None
    for tag, channel in _theorem_corpus(args):
        for j in range(args.dists):
            nu = int(rng.integers(1, 4))
            pux = rng.dirichlet(np.ones(nu * channel.x_size)).reshape(nu, channel.x_size)
            dist = UXDist(pux=JointPmf(pux))
            cert = verify_inclusion(channel, dist)
            lines.append(
                f"{tag} dist={j} case={cert.primary_case} applicable={','.join(cert.applicable_cases)} "
                f"margin={cert.margin!r} verdict={'ok' if cert.verdict else 'FAIL'}"
            )
            if not cert.verdict and offender is None:
                all_ok = False
                offender = (tag, channel, j, dist)

    demo_line = ""
    if not args.skip_demo:
        cfg = _load_sweep_config(args.config, args.seed) if args.config else None
        report = strictness_demo(cfg, seed=args.seed)
        demo_ok = report.corner_achieved and report.het_max_sum <= 1.0 + 1e-6 and report.gap_area >= 0.4
        all_ok = all_ok and demo_ok
        demo_line = (
            f"strictness-demo corner={report.corner_achieved} het_max_sum={report.het_max_sum!r} "
            f"gap_area={report.gap_area!r} verdict={'ok' if demo_ok else 'FAIL'}"
        )

    out = Path(args.report)
    body = "theorem verification report\n" + "\n".join(lines)
    if demo_line:
        body += "\n" + demo_line
    body += f"\nverdicts: {'all ok' if all_ok else 'FAILURES PRESENT'}\n"
    out.write_text(body, encoding="utf-8")
    print(f"wrote {out}")
    if offender is not None:
        tag, channel, j, dist = offender
        base = out.parent / f"offending-{tag}-dist{j}"
        save_channel(channel, str(base) + "-channel.txt")
        save_dist(dist, str(base) + "-dist.txt")
        print(f"offending instance serialized to {base}-channel.txt / {base}-dist.txt", file=sys.stderr)
    return 0 if all_ok else 1


def cmd_simulate(args) -> int:
    channel = load_channel(args.channel)
    dist = load_dist(args.dist)
    receivers = (1, 2) if args.receivers == "both" else ((1,) if args.receivers == "1" else (2,))
    result = estimate_error(
        channel,
        dist,
        n=args.n,
        r1=args.r1,
        r2=args.r2,
        trials=args.trials,
        decoder=args.decoder,
        eps=args.eps,
        seed=args.seed,
        receivers=receivers,
        workers=args.workers,
    )
    header = (
        "scheme,n,r1,r2,m1,m2,realized_r1,realized_r2,decoder,eps,seed,trials,"
        "rx1_errors,rx2_errors,joint_errors,rx1_ties,rx2_ties"
    )
    rows = [header]
    if result.trials > 0:
        scheme = "uv" if isinstance(dist, UVDist) else "ux"

        def opt(v) -> str:
            return "" if v is None else str(v)

        rows.append(
            f"{scheme},{result.n},{args.r1!r},{args.r2!r},{result.m1},{result.m2},"
            f"{result.rate1!r},{result.rate2!r},{result.decoder},{args.eps!r},{args.seed},{result.trials},"
            f"{opt(result.rx1_errors)},{opt(result.rx2_errors)},{opt(result.joint_errors)},"
            f"{result.rx1_ties},{result.rx2_ties}"
        )
    Path(args.out).write_text("\n".join(rows) + "\n", encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def cmd_demo_vector_bc(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = _load_sweep_config(args.config, args.seed) if args.config else None
    report = strictness_demo(cfg, seed=args.seed)
    channel = make_vector_bc()
    save_channel(channel, str(outdir / "channel.txt"))
    save_dist(report.witness, str(outdir / "witness-dist.txt"))
    save_region(report.homogeneous, str(outdir / "two-layer-hull.txt"))
    save_region(report.heterogeneous, str(outdir / "split-hull.txt"))
    svg = region_svg(
        [("two-layer hull", report.homogeneous), ("split hull", report.heterogeneous)],
        title="two independent pipes: layering vs splitting",
    )
    (outdir / "demo.svg").write_text(svg, encoding="utf-8")
    ok = report.corner_achieved and report.het_max_sum <= 1.0 + 1e-6 and report.gap_area >= 0.4
    body = (
        "vector broadcast channel demo\n"
        f"corner (1,1) achieved by witness: {report.corner_achieved}\n"
        f"split-scheme hull max sum rate: {report.het_max_sum!r}\n"
        f"area gap (two-layer minus split): {report.gap_area!r}\n"
        f"separation certified: {ok}\n"
    )
    (outdir / "report.txt").write_text(body, encoding="utf-8")
    print(body, end="")
    print(f"artifacts in {outdir}")
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bcregions", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("region", help="compute rate regions and write document/SVG")
    p.add_argument("--channel", required=True, help="channel document path")
    p.add_argument("--scheme", required=True, help="comma list of uv,ux,vx,sweep-uv,sweep-ux,sweep-vx,het-hull")
    p.add_argument("--dist", help="dist document (required for uv/ux/vx)")
    p.add_argument("--config", help="JSON config with a 'sweep' block")
    p.add_argument("--seed", type=int, help="override sweep seed")
    p.add_argument("--out", required=True, help="output region document")
    p.add_argument("--svg", help="optional SVG plot path")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("verify-theorem", help="run inclusion certificates over a corpus")
    p.add_argument("--channels", type=int, default=20, help="random channels in the corpus")
    p.add_argument("--dists", type=int, default=5, help="random dists per channel")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="JSON config with a 'sweep' block for the demo")
    p.add_argument("--skip-demo", action="store_true", help="skip the vector-channel strictness demo")
    p.add_argument("--report", required=True, help="output report path")
    p.set_defaults(func=cmd_verify_theorem)

    p = sub.add_parser("simulate", help="Monte Carlo codebook simulation")
    p.add_argument("--channel", required=True)
    p.add_argument("--dist", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--r2", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--decoder", choices=("ml", "typicality"), default="ml")
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--receivers", choices=("1", "2", "both"), default="both")
    p.add_argument("--workers", type=int, help="parallel trial workers (default BCREGIONS_WORKERS or 1)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("demo-vector-bc", help="strict-separation demo artifacts")
    p.add_argument("--outdir", required=True)
    p.add_argument("--config", help="JSON config with a 'sweep' block")
    p.add_argument("--seed", type=int, help="override sweep seed")
    p.set_defaults(func=cmd_demo_vector_bc)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RegionError as exc:
        # geometry failures mid-computation are bugs, not bad input
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, *_INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
