"""Case-by-case inclusion certificates for heterogeneous regions.

Every heterogeneous rate region sits inside the convex hull of
homogeneous regions over matched input distributions.  The argument
splits on how the two receiver channels compare at the given input:

* case 1 (receiver 1 at least as strong, I(X;Y1) >= I(X;Y2)) and
* case 2 (receiver 1 weaker overall but stronger within the cloud,
  I(X;Y1|U) >= I(X;Y2|U)): the heterogeneous region collapses into the
  sum-rate triangle, which two single-layer homogeneous points span.
* case 3 (receiver 1 weaker both ways): the heterogeneous region is
  covered by the hull of the functional-representation homogeneous
  region and the single-layer segment on the rate-1 axis.

`verify_inclusion` runs the checks mechanically on polyhedra and
reports a certificate with a numeric inclusion margin.  Comparisons
that land on a case boundary (within `TIE_TOL`) run every neighboring
case path and require all of them to pass.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import BroadcastChannel, make_vector_bc
from .geometry import (
    HalfPlane,
    Region2D,
    convex_hull,
    from_halfplanes,
    includes,
    max_weighted_sum,
    union,
)
from .probability import Pmf
from .regions import (
    MiBundle,
    UVDist,
    UXDist,
    UxMiTerms,
    functional_representation,
    mi_bundle_uv,
    mi_terms_ux,
    region_uv,
    region_ux,
)

__all__ = [
    "TIE_TOL",
    "CaseCheck",
    "InclusionCertificate",
    "Case3Breakdown",
    "StrictnessReport",
    "u_only_dist",
    "v_only_dist",
    "sum_rate_triangle",
    "classify_case",
    "case3_breakdown",
    "inclusion_margin",
    "verify_inclusion",
    "strictness_demo",
]

# Comparisons closer than this run both neighboring case paths.
TIE_TOL = 1e-12


def u_only_dist(channel: BroadcastChannel, dist: UXDist) -> UVDist:
    """Homogeneous input carrying the x-marginal entirely on the first layer.

    Its region is the segment [0, I(X;Y1)] on the rate-1 axis.
    """
    px = dist.pux.marginalize((1,)).probs
    xmap = np.arange(channel.x_size, dtype=np.int64).reshape(channel.x_size, 1)
    return UVDist(pu=Pmf(px), pv=Pmf(np.array([1.0])), xmap=xmap)


def v_only_dist(channel: BroadcastChannel, dist: UXDist) -> UVDist:
    """Mirror of `u_only_dist`: the segment [0, I(X;Y2)] on the rate-2 axis."""
    px = dist.pux.marginalize((1,)).probs
    xmap = np.arange(channel.x_size, dtype=np.int64).reshape(1, channel.x_size)
    return UVDist(pu=Pmf(np.array([1.0])), pv=Pmf(px), xmap=xmap)


def sum_rate_triangle(channel: BroadcastChannel, dist: UXDist) -> Region2D:
    """Triangle r1 + r2 <= min(I(X;Y1), I(X;Y2)) at the dist's x-marginal."""
    t = mi_terms_ux(channel, dist)
    return from_halfplanes([HalfPlane(1, 1, min(t.i_x_y1, t.i_x_y2))])


def classify_case(terms: UxMiTerms, tie_tol: float = TIE_TOL) -> tuple[str, tuple[str, ...]]:
    """Primary case tag plus every case applicable within the tie tolerance."""
    d_c = terms.i_x_y1 - terms.i_x_y2
    d_t = terms.i_x_y1_given_u - terms.i_x_y2_given_u
    applicable: list[str] = []
    if d_c >= -tie_tol:
        applicable.append("case1")
    if d_c <= tie_tol:
        if d_t >= -tie_tol:
            applicable.append("case2")
        if d_t <= tie_tol:
            applicable.append("case3")
    primary = applicable[0]
    return primary, tuple(applicable)


@dataclass(frozen=True)
class Case3Breakdown:
    """Intermediate regions of the case-3 argument, for inspection.

    `reduced` drops the receiver-2 sum constraint from the heterogeneous
    region; it equals that region exactly when the cloud is at least as
    visible to receiver 2 as to receiver 1 (cloud_rate_rx1 <=
    cloud_rate_rx2), and otherwise exceeds it by a corner triangle of
    area (cloud_rate_rx1 - cloud_rate_rx2)^2 / 2.  `restricted` adds the
    matched input's first-layer rate cap on top of `reduced`; the full
    homogeneous region of the matched input is `restricted` further
    intersected with the receiver-2 pair constraint (exact identity,
    checked in tests).
    """

    reduced: Region2D
    restricted: Region2D
    matched_dist: UVDist
    matched_region: Region2D
    matched_bundle: MiBundle
    cloud_rate_rx1: float
    cloud_rate_rx2: float


def case3_breakdown(channel: BroadcastChannel, dist: UXDist) -> Case3Breakdown:
    """Regions entering the case-3 covering argument.

    Raises when no case-3 path is applicable to the instance.
    """
    t = mi_terms_ux(channel, dist)
    _, applicable = classify_case(t)
    if "case3" not in applicable:
        raise ValueError("instance is not in case 3: receiver 1 is not weaker on both comparisons")
    low = [HalfPlane(0, 1, t.i_x_y1_given_u), HalfPlane(1, 1, t.i_x_y1), HalfPlane(0, 1, t.i_x_y2_given_u)]
    high = [
        HalfPlane(0, -1, -t.i_x_y1_given_u),
        HalfPlane(1, 0, t.i_x_y1 - t.i_x_y1_given_u),
        HalfPlane(0, 1, t.i_x_y2_given_u),
    ]
    reduced = union(from_halfplanes(low), from_halfplanes(high))
    matched = functional_representation(dist)
    bundle = mi_bundle_uv(channel, matched)
    cap = HalfPlane(1, 0, bundle.i_x_y1_given_v)
    restricted = union(from_halfplanes(low + [cap]), from_halfplanes(high + [cap]))
    return Case3Breakdown(
        reduced=reduced,
        restricted=restricted,
        matched_dist=matched,
        matched_region=region_uv(channel, matched),
        matched_bundle=bundle,
        cloud_rate_rx1=t.i_u_y1,
        cloud_rate_rx2=t.i_u_y2,
    )


@dataclass(frozen=True)
class CaseCheck:
    """One polyhedral inclusion run for a certificate."""

    tag: str
    description: str
    passed: bool
    margin: float


@dataclass(frozen=True)
class InclusionCertificate:
    """Mechanical evidence that one heterogeneous region is covered."""

    primary_case: str
    applicable_cases: tuple[str, ...]
    checks: tuple[CaseCheck, ...]
    verdict: bool
    margin: float
    terms: UxMiTerms
    u_only: UVDist
    v_only: UVDist
    matched: UVDist | None


def inclusion_margin(
    outer: Region2D,
    inner: Region2D,
    span: float = 0.5,
    iters: int = 34,
    shrink: float = 1e-6,
) -> float:
    """Largest diagonal shift of `inner` that stays inside `outer`.

    Positive margins mean slack, negative margins mean the inclusion
    only holds after eroding the inner region.  Resolved by bisection
    to span / 2^iters.
    """

    def holds(m: float) -> bool:
        return includes(outer, inner.translate(m, m), shrink=shrink)

    if holds(span):
        return span
    if not holds(-span):
        return -span
    lo, hi = -span, span
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return lo


def verify_inclusion(channel: BroadcastChannel, dist: UXDist, shrink: float = 1e-6) -> InclusionCertificate:
    """Certify that the heterogeneous region sits in a homogeneous hull.

    Cases 1 and 2 check the chain region <= sum triangle <= hull of the
    two single-layer homogeneous segments.  Case 3 checks the region
    against the hull of the functional-representation homogeneous
    region and the rate-1-axis segment.  The certificate's margin is
    the worst margin across every check that ran.
    """
    terms = mi_terms_ux(channel, dist)
    primary, applicable = classify_case(terms)
    target_ux = region_ux(channel, dist)
    u_only = u_only_dist(channel, dist)
    v_only = v_only_dist(channel, dist)
    matched: UVDist | None = None

    checks: list[CaseCheck] = []
    for tag in applicable:
        if tag in ("case1", "case2"):
            triangle = sum_rate_triangle(channel, dist)
            segments_hull = convex_hull([region_uv(channel, u_only), region_uv(channel, v_only)])
            m1 = inclusion_margin(triangle, target_ux, shrink=shrink)
            checks.append(CaseCheck(tag, "region inside sum triangle", m1 >= 0.0, m1))
            m2 = inclusion_margin(segments_hull, triangle, shrink=shrink)
            checks.append(CaseCheck(tag, "sum triangle inside single-layer hull", m2 >= 0.0, m2))
        else:
            breakdown = case3_breakdown(channel, dist)
            matched = breakdown.matched_dist
            hull = convex_hull([breakdown.matched_region, region_uv(channel, u_only)])
            m = inclusion_margin(hull, target_ux, shrink=shrink)
            checks.append(CaseCheck(tag, "region inside matched hull", m >= 0.0, m))

    verdict = all(c.passed for c in checks)
    margin = min(c.margin for c in checks)
    return InclusionCertificate(
        primary_case=primary,
        applicable_cases=applicable,
        checks=tuple(checks),
        verdict=verdict,
        margin=margin,
        terms=terms,
        u_only=u_only,
        v_only=v_only,
        matched=matched,
    )


@dataclass(frozen=True)
class StrictnessReport:
    """Separation of homogeneous over heterogeneous hulls on one channel."""

    witness: UVDist
    witness_region: Region2D
    homogeneous: Region2D
    heterogeneous: Region2D
    corner: tuple[float, float]
    corner_achieved: bool
    het_max_sum: float
    gap_area: float


def strictness_demo(cfg=None, uv_cfg=None, seed: int | None = None) -> StrictnessReport:
    """Two independent binary pipes: layering wins, splitting loses.

    The witness assigns one pipe to each layer, reaching the corner
    (1, 1); every split of the input between a cloud and a satellite is
    capped at sum rate 1, so the heterogeneous hull is the unit
    triangle and the gap is a full half square.  `cfg` budgets the
    heterogeneous sweeps (cloud alphabet up to the input size, a dense
    grid, and a few thousand random draws by default); `uv_cfg` budgets
    the homogeneous sweep, which only decorates the witness.
    """
    from .search import SweepConfig, sweep_ux, sweep_uv, sweep_vx

    if cfg is None:
        cfg = SweepConfig(
            u_size=4,
            v_size=4,
            grid_steps=5,
            random_samples=2000,
            refine_iters=15,
            refine_directions=16,
        )
    if uv_cfg is None:
        uv_cfg = SweepConfig(
            u_size=2,
            v_size=2,
            grid_steps=4,
            random_samples=100,
            refine_iters=10,
            refine_directions=8,
            stage_keep=12,
        )
    if seed is not None:
        import dataclasses

        cfg = dataclasses.replace(cfg, rng_seed=seed)
        uv_cfg = dataclasses.replace(uv_cfg, rng_seed=seed)
    channel = make_vector_bc()
    witness = UVDist(
        pu=Pmf.uniform(2),
        pv=Pmf.uniform(2),
        xmap=np.array([[0, 1], [2, 3]], dtype=np.int64),
    )
    witness_region = region_uv(channel, witness)
    corner = (1.0, 1.0)
    homogeneous = convex_hull([sweep_uv(channel, uv_cfg).region, witness_region])
    heterogeneous = convex_hull([sweep_ux(channel, cfg).region, sweep_vx(channel, cfg).region])
    return StrictnessReport(
        witness=witness,
        witness_region=witness_region,
        homogeneous=homogeneous,
        heterogeneous=heterogeneous,
        corner=corner,
        corner_achieved=witness_region.member(corner),
        het_max_sum=max_weighted_sum(heterogeneous, 1.0, 1.0),
        gap_area=homogeneous.area() - heterogeneous.area(),
    )
