"""Achievable-rate regions for the two superposition coding variants.

Homogeneous layering (the UV scheme): independent cloud and satellite
codebooks U and V plus a deterministic symbol map x(u, v).  Receiver 1
recovers its message either directly from the U layer or by decoding
both layers; receiver 2 symmetrically.  Heterogeneous layering (the UX
scheme): cloud codebook U carries message 1 and the satellite codewords
x are drawn conditionally given the cloud, so the pair (U, X) is an
arbitrary joint distribution.  The VX scheme is the mirror image with
the message roles of the receivers swapped.

Every region builder returns the closure of the achievable set as a
`Region2D`: strict decoding inequalities are realized as closed
half-planes, which changes nothing at positive area scale.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from numpy.typing import NDArray

from .channels import BroadcastChannel, ChannelError
from .geometry import HalfPlane, Region2D, from_halfplanes, union
from .probability import (
    DistributionError,
    JointPmf,
    Pmf,
    conditional_mutual_information,
    mutual_information,
)

__all__ = [
    "UVDist",
    "UXDist",
    "MiBundle",
    "UxMiTerms",
    "mi_bundle_uv",
    "mi_terms_ux",
    "region_uv",
    "region_uv_minform",
    "region_ux",
    "region_ux_from_terms",
    "region_ux_minform",
    "region_vx",
    "region_vx_minform",
    "functional_representation",
    "save_dist",
    "load_dist",
]

# Largest satellite alphabet functional_representation will enumerate.
FUNREP_CAP = 4096
# Induced-marginal mismatch allowed for the functional representation.
FUNREP_TV_TOL = 1e-12


@dataclass(frozen=True)
class UVDist:
    """Homogeneous-scheme input: p(u) p(v) and a symbol map x(u, v)."""

    pu: Pmf
    pv: Pmf
    xmap: NDArray[np.int64]

    def __post_init__(self) -> None:
        arr = np.array(self.xmap, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "xmap", arr)
        if arr.shape != (self.pu.size, self.pv.size):
            raise DistributionError(f"xmap shape {arr.shape} does not match ({self.pu.size}, {self.pv.size})")
        if np.any(arr < 0):
            raise DistributionError("xmap entries must be input symbols")

    @property
    def u_size(self) -> int:
        return self.pu.size

    @property
    def v_size(self) -> int:
        return self.pv.size


@dataclass(frozen=True)
class UXDist:
    """Heterogeneous-scheme input: a joint pmf on (U, X)."""

    pux: JointPmf

    def __post_init__(self) -> None:
        if self.pux.probs.ndim != 2:
            raise DistributionError("UX distribution must be a two-axis joint pmf")

    @property
    def u_size(self) -> int:
        return self.pux.axis_sizes[0]

    @property
    def x_size(self) -> int:
        return self.pux.axis_sizes[1]


@dataclass(frozen=True)
class MiBundle:
    """The eight mutual-information terms behind the homogeneous region."""

    i_u_y1: float
    i_v_y2: float
    i_x_y1: float
    i_x_y2: float
    i_x_y1_given_u: float
    i_x_y1_given_v: float
    i_x_y2_given_u: float
    i_x_y2_given_v: float


@dataclass(frozen=True)
class UxMiTerms:
    """The five terms behind the heterogeneous region."""

    i_u_y1: float
    i_u_y2: float
    i_x_y1: float
    i_x_y2: float
    i_x_y1_given_u: float
    i_x_y2_given_u: float


def _uv_joint(channel: BroadcastChannel, dist: UVDist) -> NDArray[np.float64]:
    """Dense p(u, v, x, y1, y2); small alphabets keep this a toy tensor."""
    if np.any(dist.xmap >= channel.x_size):
        raise ChannelError(f"xmap uses symbols outside an input alphabet of size {channel.x_size}")
    onehot = np.zeros((dist.u_size, dist.v_size, channel.x_size))
    uu, vv = np.meshgrid(np.arange(dist.u_size), np.arange(dist.v_size), indexing="ij")
    onehot[uu, vv, dist.xmap] = 1.0
    puv = np.einsum("u,v->uv", dist.pu.probs, dist.pv.probs)
    return np.einsum("uv,uvx,xjk->uvxjk", puv, onehot, channel.transitions)


def mi_bundle_uv(channel: BroadcastChannel, dist: UVDist) -> MiBundle:
    """All mutual-information terms of the homogeneous scheme at one input."""
    joint = _uv_joint(channel, dist)
    # Axes: u, v, x, y1, y2.
    p_uxy1 = joint.sum(axis=(1, 4))
    p_vxy1 = joint.sum(axis=(0, 4))
    p_uxy2 = joint.sum(axis=(1, 3))
    p_vxy2 = joint.sum(axis=(0, 3))

    def mi(table: NDArray[np.float64]) -> float:
        return mutual_information(JointPmf(table))

    def cmi_given_last(table: NDArray[np.float64]) -> float:
        # table axes are (cond, a, b); reorder to (a, b, cond).
        return conditional_mutual_information(JointPmf(table.transpose(1, 2, 0)))

    return MiBundle(
        i_u_y1=mi(p_uxy1.sum(axis=1)),
        i_v_y2=mi(p_vxy2.sum(axis=1)),
        i_x_y1=mi(p_uxy1.sum(axis=0)),
        i_x_y2=mi(p_uxy2.sum(axis=0)),
        i_x_y1_given_u=cmi_given_last(p_uxy1),
        i_x_y1_given_v=cmi_given_last(p_vxy1),
        i_x_y2_given_u=cmi_given_last(p_uxy2),
        i_x_y2_given_v=cmi_given_last(p_vxy2),
    )


def mi_terms_ux(channel: BroadcastChannel, dist: UXDist) -> UxMiTerms:
    """Mutual-information terms of the heterogeneous scheme at one input."""
    if dist.x_size != channel.x_size:
        raise ChannelError(f"distribution is over {dist.x_size} input symbols, channel has {channel.x_size}")
    p_uxy1 = np.einsum("ux,xy->uxy", dist.pux.probs, channel.marginal_rx1)
    p_uxy2 = np.einsum("ux,xy->uxy", dist.pux.probs, channel.marginal_rx2)

    def mi(table):
        return mutual_information(JointPmf(table))

    def cmi_given_first(table):
        return conditional_mutual_information(JointPmf(table.transpose(1, 2, 0)))

    return UxMiTerms(
        i_u_y1=mi(p_uxy1.sum(axis=1)),
        i_u_y2=mi(p_uxy2.sum(axis=1)),
        i_x_y1=mi(p_uxy1.sum(axis=0)),
        i_x_y2=mi(p_uxy2.sum(axis=0)),
        i_x_y1_given_u=cmi_given_first(p_uxy1),
        i_x_y2_given_u=cmi_given_first(p_uxy2),
    )


def _box_pieces(*piece_constraints: list[HalfPlane]) -> Region2D:
    region = Region2D([])
    for constraints in piece_constraints:
        region = union(region, from_halfplanes(constraints))
    return region


def region_uv(channel: BroadcastChannel, dist: UVDist) -> Region2D:
    """Homogeneous region in either-or form.

    Receiver 1 succeeds if r1 fits in the cloud layer alone, or if the
    rate pair fits when it decodes both layers; receiver 2 mirrors this.
    The region is the intersection of the two receiver conditions,
    expanded here into four bounded conjunctive pieces.
    """
    b = mi_bundle_uv(channel, dist)
    rx1_direct = [HalfPlane(1, 0, b.i_u_y1)]
    rx1_joint = [HalfPlane(1, 1, b.i_x_y1), HalfPlane(1, 0, b.i_x_y1_given_v)]
    rx2_direct = [HalfPlane(0, 1, b.i_v_y2)]
    rx2_joint = [HalfPlane(1, 1, b.i_x_y2), HalfPlane(0, 1, b.i_x_y2_given_u)]
    return _box_pieces(
        rx1_direct + rx2_direct,
        rx1_direct + rx2_joint,
        rx1_joint + rx2_direct,
        rx1_joint + rx2_joint,
    )


def region_uv_minform(channel: BroadcastChannel, dist: UVDist) -> Region2D:
    """Homogeneous region in min-comparison form.

    Receiver 1: r1 <= I(X;Y1|V) and r1 + min(r2, I(X;Y1|U)) <= I(X;Y1);
    receiver 2 symmetrically.  Each min splits into two half-plane
    pieces, one of which carries a lower cut on the other rate; the
    union of downward closures restores the exact region.
    """
    b = mi_bundle_uv(channel, dist)
    rx1_low = [HalfPlane(0, 1, b.i_x_y1_given_u), HalfPlane(1, 1, b.i_x_y1), HalfPlane(1, 0, b.i_x_y1_given_v)]
    rx1_high = [
        HalfPlane(0, -1, -b.i_x_y1_given_u),
        HalfPlane(1, 0, b.i_x_y1 - b.i_x_y1_given_u),
        HalfPlane(1, 0, b.i_x_y1_given_v),
    ]
    rx2_low = [HalfPlane(1, 0, b.i_x_y2_given_v), HalfPlane(1, 1, b.i_x_y2), HalfPlane(0, 1, b.i_x_y2_given_u)]
    rx2_high = [
        HalfPlane(-1, 0, -b.i_x_y2_given_v),
        HalfPlane(0, 1, b.i_x_y2 - b.i_x_y2_given_v),
        HalfPlane(0, 1, b.i_x_y2_given_u),
    ]
    return _box_pieces(
        rx1_low + rx2_low,
        rx1_low + rx2_high,
        rx1_high + rx2_low,
        rx1_high + rx2_high,
    )


def region_ux_from_terms(t: UxMiTerms) -> Region2D:
    """Heterogeneous region shape for a given set of information terms.

    Factored out so that averaged terms (mixtures over a shared
    coordinate) can reuse the same construction.
    """
    rx2 = [HalfPlane(0, 1, t.i_x_y2_given_u), HalfPlane(1, 1, t.i_x_y2)]
    return _box_pieces(
        [HalfPlane(1, 0, t.i_u_y1)] + rx2,
        [HalfPlane(1, 1, t.i_x_y1)] + rx2,
    )


def region_ux(channel: BroadcastChannel, dist: UXDist) -> Region2D:
    """Heterogeneous region in either-or form.

    Receiver 1 needs r1 in the cloud alone or the pair to fit its
    channel; receiver 2 always resolves the satellite within the cloud,
    so its condition is conjunctive: r2 <= I(X;Y2|U) and r1 + r2 <= I(X;Y2).
    """
    return region_ux_from_terms(mi_terms_ux(channel, dist))


def region_ux_minform(channel: BroadcastChannel, dist: UXDist) -> Region2D:
    """Heterogeneous region via r1 + min(r2, I(X;Y1|U)) <= I(X;Y1)."""
    t = mi_terms_ux(channel, dist)
    rx2 = [HalfPlane(0, 1, t.i_x_y2_given_u), HalfPlane(1, 1, t.i_x_y2)]
    rx1_low = [HalfPlane(0, 1, t.i_x_y1_given_u), HalfPlane(1, 1, t.i_x_y1)]
    rx1_high = [HalfPlane(0, -1, -t.i_x_y1_given_u), HalfPlane(1, 0, t.i_x_y1 - t.i_x_y1_given_u)]
    return _box_pieces(rx1_low + rx2, rx1_high + rx2)


def region_vx(channel: BroadcastChannel, dist: UXDist) -> Region2D:
    """Mirror scheme: the cloud carries message 2 and faces receiver 2.

    Computed by swapping the receiver legs, building the heterogeneous
    region there, and mirroring the rate axes back.
    """
    return region_ux(channel.swap_receivers(), dist).transpose()


def region_vx_minform(channel: BroadcastChannel, dist: UXDist) -> Region2D:
    return region_ux_minform(channel.swap_receivers(), dist).transpose()


def functional_representation(dist: UXDist) -> UVDist:
    """Rewrite a joint (U, X) as independent layers plus a symbol map.

    The satellite alphabet enumerates all functions from the support of
    U to the input alphabet; picking a function v with probability
    prod_u p(x = v(u) | u) and mapping x(u, v) = v(u) reproduces the
    joint exactly.  Rows of U with zero mass get an arbitrary fixed
    symbol.  The induced marginal is checked against the original to
    total variation 1e-12.
    """
    pux = np.asarray(dist.pux.probs)
    pu = pux.sum(axis=1)
    support = np.nonzero(pu > 0.0)[0]
    x_size = dist.x_size
    v_size = x_size ** len(support)
    if v_size > FUNREP_CAP:
        raise DistributionError(
            f"functional representation needs {v_size} satellite symbols, cap is {FUNREP_CAP}"
        )
    cond = pux[support] / pu[support, None]

    qv = np.ones(v_size)
    xmap = np.zeros((dist.u_size, v_size), dtype=np.int64)
    for v_index, assignment in enumerate(product(range(x_size), repeat=len(support))):
        weight = 1.0
        for row, x in enumerate(assignment):
            weight *= cond[row, x]
            xmap[support[row], v_index] = x
        qv[v_index] = weight

    # Induced joint: p(u) * sum_{v with v(u)=x} q(v).
    induced = np.zeros_like(pux)
    for u in range(dist.u_size):
        for v_index in range(v_size):
            induced[u, xmap[u, v_index]] += pu[u] * qv[v_index]
    tv = 0.5 * float(np.abs(induced - pux).sum())
    if tv > FUNREP_TV_TOL:
        raise DistributionError(f"functional representation off by total variation {tv!r}")
    return UVDist(pu=Pmf(pu), pv=Pmf(qv), xmap=xmap)


DIST_HEADER = "bcregions-dist v1"


def save_dist(dist: UVDist | UXDist, path: str) -> None:
    lines = [DIST_HEADER]
    if isinstance(dist, UVDist):
        lines += [
            "scheme uv",
            f"u_size {dist.u_size}",
            f"v_size {dist.v_size}",
            "pu " + " ".join(repr(float(p)) for p in dist.pu.probs),
            "pv " + " ".join(repr(float(p)) for p in dist.pv.probs),
            "xmap",
        ]
        for row in dist.xmap:
            lines.append(" ".join(str(int(s)) for s in row))
    else:
        lines += ["scheme ux", f"u_size {dist.u_size}", f"x_size {dist.x_size}", "table"]
        for row in dist.pux.probs:
            lines.append(" ".join(repr(float(p)) for p in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_dist(path: str) -> UVDist | UXDist:
    with open(path, encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != DIST_HEADER:
        raise DistributionError(f"{path}: missing header {DIST_HEADER!r}")
    if len(lines) < 2 or lines[1] not in ("scheme uv", "scheme ux"):
        raise DistributionError(f"{path}: missing scheme line")
    try:
        if lines[1] == "scheme uv":
            u_size = int(lines[2].split()[1])
            v_size = int(lines[3].split()[1])
            pu = Pmf([float(f) for f in lines[4].split()[1:]])
            pv = Pmf([float(f) for f in lines[5].split()[1:]])
            if lines[6] != "xmap" or len(lines) != 7 + u_size:
                raise DistributionError(f"{path}: malformed xmap block")
            xmap = np.array([[int(s) for s in lines[7 + u].split()] for u in range(u_size)])
            if pu.size != u_size or pv.size != v_size:
                raise DistributionError(f"{path}: sizes disagree with vectors")
            return UVDist(pu=pu, pv=pv, xmap=xmap)
        u_size = int(lines[2].split()[1])
        x_size = int(lines[3].split()[1])
        if lines[4] != "table" or len(lines) != 5 + u_size:
            raise DistributionError(f"{path}: malformed table block")
        table = np.array([[float(f) for f in lines[5 + u].split()] for u in range(u_size)])
        if table.shape != (u_size, x_size):
            raise DistributionError(f"{path}: table shape {table.shape} disagrees with sizes")
        return UXDist(pux=JointPmf(table))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, DistributionError):
            raise
        raise DistributionError(f"{path}: malformed distribution file: {exc}") from exc
