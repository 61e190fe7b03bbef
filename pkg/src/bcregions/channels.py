"""Two-receiver discrete memoryless broadcast channels.

A channel is the conditional law p(y1, y2 | x) on finite alphabets.  All
rate-region computations depend on the two marginal legs p(y1|x) and
p(y2|x) only; the joint matters just for sampling both outputs at once.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import linprog

__all__ = [
    "ChannelError",
    "BroadcastChannel",
    "DegradednessResult",
    "make_vector_bc",
    "make_bsc_bc",
    "save_channel",
    "load_channel",
    "is_stochastically_degraded",
]

ROW_SUM_TOL = 1e-12
DEGRADED_TOL = 1e-9


class ChannelError(ValueError):
    """Raised for transition tables that are not channels."""


@dataclass(frozen=True)
class BroadcastChannel:
    """p(y1, y2 | x) as a dense (x_size, y1_size, y2_size) array."""

    transitions: NDArray[np.float64]

    def __post_init__(self) -> None:
        arr = np.array(self.transitions, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "transitions", arr)
        if arr.ndim != 3 or 0 in arr.shape:
            raise ChannelError("transitions must be a nonempty (x, y1, y2) array")
        if np.any(arr < 0.0):
            raise ChannelError("transition probabilities must be nonnegative")
        sums = arr.sum(axis=(1, 2))
        bad = np.nonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)[0]
        if bad.size:
            raise ChannelError(f"row for x={bad[0]} sums to {sums[bad[0]]!r}, not 1")

    @property
    def x_size(self) -> int:
        return self.transitions.shape[0]

    @property
    def y1_size(self) -> int:
        return self.transitions.shape[1]

    @property
    def y2_size(self) -> int:
        return self.transitions.shape[2]

    @cached_property
    def marginal_rx1(self) -> NDArray[np.float64]:
        m = self.transitions.sum(axis=2)
        m.setflags(write=False)
        return m

    @cached_property
    def marginal_rx2(self) -> NDArray[np.float64]:
        m = self.transitions.sum(axis=1)
        m.setflags(write=False)
        return m

    def swap_receivers(self) -> "BroadcastChannel":
        return BroadcastChannel(self.transitions.transpose(0, 2, 1))


def make_vector_bc() -> BroadcastChannel:
    """The two-bit pipe: x encodes (x1, x2) as 2*x1 + x2, y1 = x1, y2 = x2.

    Each receiver sees its own input bit noiselessly.
    """
    t = np.zeros((4, 2, 2))
    for x in range(4):
        t[x, x >> 1, x & 1] = 1.0
    return BroadcastChannel(t)


def make_bsc_bc(eps1: float, eps2: float) -> BroadcastChannel:
    """Two binary symmetric legs with crossover eps1 (rx1) and eps2 (rx2).

    Requires 0 <= eps1 <= eps2 <= 1/2, so receiver 1 is the cleaner one.
    The legs are coupled conditionally independently given x; any other
    coupling with the same marginals yields the same rate regions.
    """
    if not 0.0 <= eps1 <= eps2 <= 0.5:
        raise ChannelError(f"need 0 <= eps1 <= eps2 <= 1/2, got {(eps1, eps2)}")
    legs = []
    for eps in (eps1, eps2):
        legs.append(np.array([[1.0 - eps, eps], [eps, 1.0 - eps]]))
    t = np.einsum("xi,xj->xij", legs[0], legs[1])
    return BroadcastChannel(t)


CHANNEL_HEADER = "bcregions-channel v1"


def save_channel(channel: BroadcastChannel, path: str) -> None:
    lines = [
        CHANNEL_HEADER,
        f"x_size {channel.x_size}",
        f"y1_size {channel.y1_size}",
        f"y2_size {channel.y2_size}",
        "table",
    ]
    for x in range(channel.x_size):
        row = channel.transitions[x].ravel()  # y1-major
        lines.append(" ".join(repr(float(p)) for p in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_channel(path: str) -> BroadcastChannel:
    with open(path, encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != CHANNEL_HEADER:
        raise ChannelError(f"{path}: missing header {CHANNEL_HEADER!r}")
    sizes = {}
    for i, key in enumerate(("x_size", "y1_size", "y2_size")):
        fields = lines[1 + i].split() if len(lines) > 1 + i else []
        if len(fields) != 2 or fields[0] != key:
            raise ChannelError(f"{path}: expected '{key} <n>' on line {i + 2}")
        sizes[key] = int(fields[1])
    if len(lines) <= 4 or lines[4] != "table":
        raise ChannelError(f"{path}: missing 'table' marker")
    rows = lines[5:]
    if len(rows) != sizes["x_size"]:
        raise ChannelError(f"{path}: expected {sizes['x_size']} table rows, found {len(rows)}")
    width = sizes["y1_size"] * sizes["y2_size"]
    table = np.zeros((sizes["x_size"], sizes["y1_size"], sizes["y2_size"]))
    for x, row in enumerate(rows):
        fields = row.split()
        if len(fields) != width:
            raise ChannelError(f"{path}: row for x={x} has {len(fields)} entries, expected {width}")
        try:
            values = [float(f) for f in fields]
        except ValueError as exc:
            raise ChannelError(f"{path}: row for x={x} has a non-numeric entry") from exc
        table[x] = np.asarray(values).reshape(sizes["y1_size"], sizes["y2_size"])
    try:
        return BroadcastChannel(table)
    except ChannelError as exc:
        raise ChannelError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class DegradednessResult:
    """Outcome of the stochastic-degradedness feasibility test."""

    degraded: bool
    kernel: NDArray[np.float64] | None
    max_deviation: float


def is_stochastically_degraded(channel: BroadcastChannel, tol: float = DEGRADED_TOL) -> DegradednessResult:
    """Test whether receiver 2 is a garbled version of receiver 1.

    Searches for a stochastic kernel q(y2|y1) with
    p(y2|x) = sum_y1 q(y2|y1) p(y1|x) for every x, by minimizing the
    largest absolute mismatch over a linear program.  Degraded means the
    optimum is within `tol`; the witness kernel is returned when it is.
    """
    w1, w2 = channel.marginal_rx1, channel.marginal_rx2
    ny1, ny2 = channel.y1_size, channel.y2_size
    nvar = ny1 * ny2 + 1  # q entries plus the sup-deviation slack
    cost = np.zeros(nvar)
    cost[-1] = 1.0

    rows_ub, rhs_ub = [], []
    for x in range(channel.x_size):
        for y2 in range(ny2):
            coeff = np.zeros(nvar)
            for y1 in range(ny1):
                coeff[y1 * ny2 + y2] = w1[x, y1]
            coeff[-1] = -1.0
            rows_ub.append(coeff.copy())
            rhs_ub.append(w2[x, y2])
            rows_ub.append(-coeff)
            rows_ub[-1][-1] = -1.0
            rhs_ub.append(-w2[x, y2])

    rows_eq, rhs_eq = [], []
    for y1 in range(ny1):
        coeff = np.zeros(nvar)
        coeff[y1 * ny2 : (y1 + 1) * ny2] = 1.0
        rows_eq.append(coeff)
        rhs_eq.append(1.0)

    result = linprog(
        cost,
        A_ub=np.array(rows_ub),
        b_ub=np.array(rhs_ub),
        A_eq=np.array(rows_eq),
        b_eq=np.array(rhs_eq),
        bounds=[(0.0, None)] * (nvar - 1) + [(0.0, None)],
        method="highs",
    )
    if not result.success:  # pragma: no cover - feasible by construction
        raise ChannelError(f"degradedness LP failed: {result.message}")
    deviation = float(result.x[-1])
    if deviation > tol:
        return DegradednessResult(False, None, deviation)
    kernel = result.x[:-1].reshape(ny1, ny2)
    return DegradednessResult(True, kernel, deviation)
