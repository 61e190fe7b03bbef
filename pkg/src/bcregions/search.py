"""Hull sweeps over scheme inputs, plus the coded-time-sharing probe.

A sweep walks a family of input distributions (simplex grid + seeded
Dirichlet draws + a support-direction hill climb), evaluates the
single-input region at each, and returns the convex hull of everything
found.  Hulls are inner approximations of the true scheme regions; all
tolerances on comparisons account for that.

Determinism: every random draw comes from a generator derived from the
config seed, and the hill climb starts only from grid/seeded candidates,
so raising `random_samples` can only add vertices (the hull is monotone
in the sample budget under a fixed seed).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np
from numpy.typing import NDArray

from .channels import BroadcastChannel
from .geometry import Region2D, convex_hull, max_weighted_sum
from .probability import JointPmf, Pmf
from .regions import (
    UVDist,
    UXDist,
    UxMiTerms,
    mi_terms_ux,
    region_uv,
    region_ux,
    region_ux_from_terms,
)

__all__ = [
    "SweepConfig",
    "SweepOutcome",
    "TimeSharingReport",
    "sweep_uv",
    "sweep_ux",
    "sweep_vx",
    "coded_time_sharing_check",
    "capacity_input",
]


@dataclass(frozen=True)
class SweepConfig:
    """Budget and sizing knobs for the distribution sweeps."""

    u_size: int = 2
    v_size: int = 2
    grid_steps: int = 4
    random_samples: int = 200
    rng_seed: int = 0
    refine_iters: int = 50
    refine_directions: int = 16
    # Cloud/satellite alphabets larger than the input alphabet add
    # nothing for deterministic maps; the cap can be lifted per run.
    cap_to_input: bool = True
    map_sample_cap: int = 4096
    stage_keep: int = 24
    grid_pair_cap: int = 600

    def __post_init__(self) -> None:
        if self.u_size < 1 or self.v_size < 1:
            raise ValueError("alphabet sizes must be at least 1")
        if self.grid_steps < 2:
            raise ValueError("grid_steps must be at least 2")
        if self.random_samples < 0:
            raise ValueError("random_samples cannot be negative")
        if self.refine_iters < 0 or self.refine_directions < 1:
            raise ValueError("refinement budget must be nonnegative with at least one direction")


@dataclass(frozen=True)
class SweepOutcome:
    """Hull found by a sweep plus bookkeeping for reports."""

    region: Region2D
    evaluations: int
    notes: tuple[str, ...] = ()


def capacity_input(leg: NDArray[np.float64], iters: int = 500, tol: float = 1e-12) -> tuple[NDArray[np.float64], float]:
    """Capacity-achieving input of a single discrete memoryless leg.

    Alternating-maximization iteration on p(x); returns (pmf, capacity
    in bits).  Used to seed sweeps with the extreme one-message points.
    """
    w = np.asarray(leg, dtype=np.float64)
    nx = w.shape[0]
    p = np.full(nx, 1.0 / nx)
    log_w = np.where(w > 0.0, np.log(np.maximum(w, 1e-300)), 0.0)
    for _ in range(iters):
        q = p @ w
        with np.errstate(divide="ignore"):
            log_q = np.where(q > 0.0, np.log(np.maximum(q, 1e-300)), 0.0)
        # exponent of the relative entropy of each row against the output law
        d = (w * (log_w - log_q[None, :])).sum(axis=1)
        top = float(np.max(d))
        avg = float(np.log((p * np.exp(d - top)).sum()) + top)
        if top - avg < tol:
            break
        p = p * np.exp(d - avg)
        p /= p.sum()
    capacity = avg / np.log(2.0)
    return p, max(capacity, 0.0)


def _simplex_grid(size: int, steps: int) -> list[NDArray[np.float64]]:
    if size == 1:
        return [np.array([1.0])]
    out = []
    for cuts in combinations(range(steps + size - 1), size - 1):
        prev = -1
        counts = []
        for c in cuts:
            counts.append(c - prev - 1)
            prev = c
        counts.append(steps + size - 2 - prev)
        out.append(np.array(counts, dtype=np.float64) / steps)
    return out


def _grid_count(size: int, steps: int) -> int:
    from math import comb

    return comb(steps + size - 1, size - 1)


def _refine_directions(count: int) -> list[tuple[float, float]]:
    angles = np.linspace(0.0, np.pi / 2, count)
    return [(float(np.cos(a)), float(np.sin(a))) for a in angles]


def _hill_climb(vectors: list[NDArray[np.float64]], value_fn, iters: int) -> float:
    """Greedy simplex ascent: mix each block toward its corners in turn."""
    best = [v.copy() for v in vectors]
    best_val = value_fn(best)
    step = 0.5
    for _ in range(iters):
        improved = False
        for b, vec in enumerate(best):
            for i in range(len(vec)):
                corner = np.zeros_like(vec)
                corner[i] = 1.0
                cand = [x.copy() for x in best]
                cand[b] = (1.0 - step) * vec + step * corner
                val = value_fn(cand)
                if val > best_val + 1e-12:
                    best, best_val = cand, val
                    improved = True
        if not improved:
            step *= 0.5
            if step < 1e-4:
                break
    return best_val


def sweep_uv(channel: BroadcastChannel, cfg: SweepConfig) -> SweepOutcome:
    """Hull of homogeneous-scheme regions over layer pmfs and symbol maps."""
    notes: list[str] = []
    u_size, v_size = cfg.u_size, cfg.v_size
    if cfg.cap_to_input:
        if u_size > channel.x_size or v_size > channel.x_size:
            notes.append(f"layer alphabets capped to input size {channel.x_size}")
        u_size = min(u_size, channel.x_size)
        v_size = min(v_size, channel.x_size)

    nx = channel.x_size
    n_maps = nx ** (u_size * v_size)
    rng_maps = np.random.default_rng([cfg.rng_seed, 1])
    if n_maps <= cfg.map_sample_cap:
        maps = [np.array(m, dtype=np.int64).reshape(u_size, v_size) for m in product(range(nx), repeat=u_size * v_size)]
    else:
        maps = [rng_maps.integers(0, nx, size=(u_size, v_size)) for _ in range(cfg.map_sample_cap)]
        notes.append(f"sampled {cfg.map_sample_cap} of {n_maps} symbol maps")

    evaluations = 0
    regions: list[Region2D] = []

    def evaluate(pu: NDArray[np.float64], pv: NDArray[np.float64], xmap: NDArray[np.int64]) -> Region2D:
        nonlocal evaluations
        evaluations += 1
        region = region_uv(channel, UVDist(pu=Pmf(pu), pv=Pmf(pv), xmap=xmap))
        regions.append(region)
        return region

    # One-message extremes: everything on one layer, capacity input.
    for leg_first in (True, False):
        leg = channel.marginal_rx1 if leg_first else channel.marginal_rx2
        p_star, _ = capacity_input(leg)
        identity = np.arange(nx, dtype=np.int64)
        if leg_first:
            evaluate(p_star, np.array([1.0]), identity.reshape(nx, 1))
        else:
            evaluate(np.array([1.0]), p_star, identity.reshape(1, nx))

    # Stage A: every map at a few cheap inputs, to rank maps.
    rng_stage = np.random.default_rng([cfg.rng_seed, 2])
    stage_inputs = [(np.full(u_size, 1.0 / u_size), np.full(v_size, 1.0 / v_size))]
    for _ in range(8):
        stage_inputs.append((rng_stage.dirichlet(np.ones(u_size)), rng_stage.dirichlet(np.ones(v_size))))
    directions = _refine_directions(cfg.refine_directions)
    map_scores = []
    map_best: list[tuple[NDArray[np.float64], NDArray[np.float64]]] = []
    for xmap in maps:
        best_support = np.full(len(directions), -np.inf)
        best_input = stage_inputs[0]
        best_total = -np.inf
        for pu, pv in stage_inputs:
            region = evaluate(pu, pv, xmap)
            supports = np.array([max_weighted_sum(region, w1, w2) for w1, w2 in directions])
            best_support = np.maximum(best_support, supports)
            total = float(supports.sum())
            if total > best_total:
                best_total, best_input = total, (pu, pv)
        map_scores.append(best_support)
        map_best.append(best_input)

    scores = np.array(map_scores)
    keep: set[int] = set()
    for j in range(len(directions)):
        order = np.argsort(-scores[:, j])
        keep.update(int(k) for k in order[: max(1, cfg.stage_keep // len(directions) + 1)])
    while len(keep) < min(cfg.stage_keep, len(maps)):
        totals = scores.sum(axis=1)
        for k in np.argsort(-totals):
            keep.add(int(k))
            if len(keep) >= min(cfg.stage_keep, len(maps)):
                break
    kept = sorted(keep)

    # Stage B: dense grid and the random budget on the kept maps.
    grid_u = _simplex_grid(u_size, cfg.grid_steps)
    grid_v = _simplex_grid(v_size, cfg.grid_steps)
    pairs = [(pu, pv) for pu in grid_u for pv in grid_v]
    rng_grid = np.random.default_rng([cfg.rng_seed, 3])
    if len(pairs) > cfg.grid_pair_cap:
        idx = rng_grid.choice(len(pairs), size=cfg.grid_pair_cap, replace=False)
        pairs = [pairs[int(i)] for i in sorted(idx)]
        notes.append(f"grid pairs subsampled to {cfg.grid_pair_cap}")
    for m in kept:
        for pu, pv in pairs:
            evaluate(pu, pv, maps[m])

    rng_random = np.random.default_rng([cfg.rng_seed, 4])
    for i in range(cfg.random_samples):
        m = kept[i % len(kept)]
        evaluate(rng_random.dirichlet(np.ones(u_size)), rng_random.dirichlet(np.ones(v_size)), maps[m])

    # Support-direction polish, started from sample-count-independent
    # candidates so bigger random budgets can only grow the hull.
    for j, (w1, w2) in enumerate(directions):
        best_m = int(np.argmax(scores[:, j]))
        pu0, pv0 = map_best[best_m]

        def support_of(vecs):
            region = evaluate(np.asarray(vecs[0]), np.asarray(vecs[1]), maps[best_m])
            return max_weighted_sum(region, w1, w2)

        _hill_climb([pu0.copy(), pv0.copy()], support_of, cfg.refine_iters)

    return SweepOutcome(region=convex_hull(regions), evaluations=evaluations, notes=tuple(notes))


def _sweep_joint(channel: BroadcastChannel, cfg: SweepConfig, build_region) -> SweepOutcome:
    notes: list[str] = []
    u_size = cfg.u_size
    if cfg.cap_to_input and u_size > channel.x_size:
        notes.append(f"cloud alphabet capped to input size {channel.x_size}")
        u_size = min(u_size, channel.x_size)
    nx = channel.x_size
    cells = u_size * nx

    evaluations = 0
    regions: list[Region2D] = []

    def evaluate(flat: NDArray[np.float64]) -> Region2D:
        nonlocal evaluations
        evaluations += 1
        region = build_region(UXDist(pux=JointPmf(flat.reshape(u_size, nx))))
        regions.append(region)
        return region

    # Seeds: uniform joint, independent layers, and the diagonal
    # embedding u = x at the capacity inputs of both legs.
    seeds = [np.full(cells, 1.0 / cells)]
    for leg in (channel.marginal_rx1, channel.marginal_rx2):
        p_star, _ = capacity_input(leg)
        diag = np.zeros((u_size, nx))
        for x in range(nx):
            diag[min(x, u_size - 1), x] = p_star[x]
        seeds.append(diag.ravel())
        flat_row = np.zeros((u_size, nx))
        flat_row[0] = p_star
        seeds.append(flat_row.ravel())
    for s in seeds:
        evaluate(s)

    grid = _simplex_grid(cells, cfg.grid_steps) if _grid_count(cells, cfg.grid_steps) <= 20000 else None
    rng_grid = np.random.default_rng([cfg.rng_seed, 3])
    if grid is None:
        grid = [rng_grid.multinomial(cfg.grid_steps, np.full(cells, 1.0 / cells)) / cfg.grid_steps for _ in range(cfg.grid_pair_cap)]
        notes.append(f"joint grid too large, sampled {cfg.grid_pair_cap} grid points")
    elif len(grid) > cfg.grid_pair_cap:
        idx = rng_grid.choice(len(grid), size=cfg.grid_pair_cap, replace=False)
        grid = [grid[int(i)] for i in sorted(idx)]
        notes.append(f"grid subsampled to {cfg.grid_pair_cap}")
    for g in grid:
        evaluate(np.asarray(g, dtype=np.float64))

    rng_random = np.random.default_rng([cfg.rng_seed, 4])
    random_start = len(regions)
    for _ in range(cfg.random_samples):
        evaluate(rng_random.dirichlet(np.ones(cells)))

    directions = _refine_directions(cfg.refine_directions)
    fixed = regions[:random_start]
    for w1, w2 in directions:
        supports = [max_weighted_sum(r, w1, w2) for r in fixed]
        start = int(np.argmax(supports))
        start_flat = seeds[start].copy() if start < len(seeds) else np.asarray(grid[start - len(seeds)], dtype=np.float64).copy()
        start_flat = np.maximum(start_flat, 1e-12)
        start_flat /= start_flat.sum()

        def support_of(vecs):
            return max_weighted_sum(evaluate(np.asarray(vecs[0])), w1, w2)

        _hill_climb([start_flat], support_of, cfg.refine_iters)

    return SweepOutcome(region=convex_hull(regions), evaluations=evaluations, notes=tuple(notes))


def sweep_ux(channel: BroadcastChannel, cfg: SweepConfig) -> SweepOutcome:
    """Hull of heterogeneous-scheme regions over joint (U, X) inputs."""
    return _sweep_joint(channel, cfg, lambda d: region_ux(channel, d))


def sweep_vx(channel: BroadcastChannel, cfg: SweepConfig) -> SweepOutcome:
    """Hull of mirror-scheme regions; clouds face receiver 2."""
    swapped = channel.swap_receivers()
    outcome = _sweep_joint(swapped, cfg, lambda d: region_ux(swapped, d))
    return SweepOutcome(
        region=outcome.region.transpose(),
        evaluations=outcome.evaluations,
        notes=outcome.notes,
    )


@dataclass(frozen=True)
class TimeSharingReport:
    """Findings from the coded-time-sharing enlargement probe."""

    samples: int
    directions: int
    max_excess: float
    violations: int
    tolerance: float


def coded_time_sharing_check(
    channel: BroadcastChannel,
    cfg: SweepConfig,
    q_size: int = 2,
    samples: int = 40,
    tolerance: float = 1e-3,
) -> TimeSharingReport:
    """Probe whether a shared mixture coordinate enlarges the UX hull.

    Each sample draws a mixture pmf and per-component joints, averages
    the mutual-information terms with the mixture weights, and compares
    the resulting region against the plain UX hull in a fan of support
    directions.  The comparison hull is seeded with the sample's own
    components and its flattened (cloud x mixture) embedding, so a finite
    sweep budget is not mistaken for an enlargement.  Violations are
    findings to report, not errors.
    """
    base = sweep_ux(channel, cfg)
    hull_parts = [base.region]
    rng = np.random.default_rng([cfg.rng_seed, 5])
    u_size = min(cfg.u_size, channel.x_size) if cfg.cap_to_input else cfg.u_size
    nx = channel.x_size

    mixtures = []
    for _ in range(samples):
        weights = rng.dirichlet(np.ones(q_size))
        components = [rng.dirichlet(np.ones(u_size * nx)).reshape(u_size, nx) for _ in range(q_size)]
        mixtures.append((weights, components))
        for comp in components:
            hull_parts.append(region_ux(channel, UXDist(pux=JointPmf(comp))))
        embedded = np.concatenate([w * c for w, c in zip(weights, components)], axis=0)
        hull_parts.append(region_ux(channel, UXDist(pux=JointPmf(embedded))))
    reference = convex_hull(hull_parts)

    directions = _refine_directions(64)
    max_excess = 0.0
    violations = 0
    for weights, components in mixtures:
        term_sets = [mi_terms_ux(channel, UXDist(pux=JointPmf(c))) for c in components]
        averaged = UxMiTerms(
            *(float(sum(w * getattr(t, f) for w, t in zip(weights, term_sets))) for f in UxMiTerms.__dataclass_fields__)
        )
        mixed_region = region_ux_from_terms(averaged)
        excess = max(
            max_weighted_sum(mixed_region, w1, w2) - max_weighted_sum(reference, w1, w2)
            for w1, w2 in directions
        )
        max_excess = max(max_excess, excess)
        if excess > tolerance:
            violations += 1
    return TimeSharingReport(
        samples=samples,
        directions=64,
        max_excess=max_excess,
        violations=violations,
        tolerance=tolerance,
    )
