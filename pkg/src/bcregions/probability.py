"""Dense finite-alphabet probability vectors and information measures.

Everything is computed in bits (base-2 logarithms).  Alphabets are small
(desk scale, a handful of symbols per axis), so all joint distributions
are stored as dense numpy arrays and every quantity is an exact sum.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "DistributionError",
    "Pmf",
    "JointPmf",
    "entropy",
    "mutual_information",
    "conditional_mutual_information",
]

# Mass functions must sum to one within this before we accept them.
SUM_TOL = 1e-12
# Information quantities may dip this far below zero from rounding.
NEG_TOL = 1e-9


class DistributionError(ValueError):
    """Raised for vectors that are not probability mass functions."""


def _check_mass(probs: NDArray[np.float64], what: str) -> None:
    if np.any(probs < 0.0):
        raise DistributionError(f"{what} has negative entries")
    total = float(probs.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise DistributionError(f"{what} sums to {total!r}, not 1")


def _frozen(values) -> NDArray[np.float64]:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Pmf:
    """A probability mass function on {0, ..., size-1}."""

    probs: NDArray[np.float64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", _frozen(self.probs))
        if self.probs.ndim != 1 or self.probs.size == 0:
            raise DistributionError("pmf must be a nonempty 1-D vector")
        _check_mass(self.probs, "pmf")

    @property
    def size(self) -> int:
        return self.probs.shape[0]

    @staticmethod
    def uniform(size: int) -> "Pmf":
        return Pmf(np.full(size, 1.0 / size))

    @staticmethod
    def point_mass(size: int, symbol: int) -> "Pmf":
        p = np.zeros(size)
        p[symbol] = 1.0
        return Pmf(p)

    @staticmethod
    def normalized(values) -> "Pmf":
        """Build from raw nonnegative weights, rescaled to unit mass.

        The constructor never repairs a drifted sum; this is the one
        explicit way in.
        """
        arr = np.array(values, dtype=np.float64)
        total = arr.sum()
        if not total > 0.0:
            raise DistributionError("cannot normalize nonpositive total mass")
        return Pmf(arr / total)


@dataclass(frozen=True)
class JointPmf:
    """A joint pmf on a product of finite alphabets, stored dense."""

    probs: NDArray[np.float64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", _frozen(self.probs))
        if self.probs.ndim == 0 or 0 in self.probs.shape:
            raise DistributionError("joint pmf must have at least one nonempty axis")
        _check_mass(self.probs, "joint pmf")

    @property
    def axis_sizes(self) -> tuple[int, ...]:
        return self.probs.shape

    def marginalize(self, keep: tuple[int, ...]) -> "JointPmf":
        """Sum out every axis not listed in `keep` (original order kept)."""
        ndim = self.probs.ndim
        keep = tuple(keep)
        if len(set(keep)) != len(keep) or any(a < 0 or a >= ndim for a in keep):
            raise DistributionError(f"bad axes {keep} for a {ndim}-axis joint")
        if sorted(keep) != list(keep):
            raise DistributionError(f"axes to keep must be increasing, got {keep}")
        drop = tuple(a for a in range(ndim) if a not in keep)
        return JointPmf(self.probs.sum(axis=drop)) if drop else self

    def transpose(self, order: tuple[int, ...]) -> "JointPmf":
        return JointPmf(self.probs.transpose(order))

    @staticmethod
    def normalized(values) -> "JointPmf":
        """Build from raw nonnegative weights, rescaled to unit mass."""
        arr = np.array(values, dtype=np.float64)
        total = arr.sum()
        if not total > 0.0:
            raise DistributionError("cannot normalize nonpositive total mass")
        return JointPmf(arr / total)


def _plogp_sum(p: NDArray[np.float64]) -> float:
    # Sum of p*log2(p) with the 0*log(0)=0 convention.
    mask = p > 0.0
    return float(np.sum(p[mask] * np.log2(p[mask])))


def entropy(dist: Pmf | JointPmf | NDArray[np.float64]) -> float:
    """Shannon entropy in bits."""
    p = dist.probs if isinstance(dist, (Pmf, JointPmf)) else np.asarray(dist, dtype=np.float64)
    value = -_plogp_sum(p.ravel())
    return max(value, 0.0)


def mutual_information(joint: JointPmf) -> float:
    """I(A;B) for a two-axis joint pmf, in bits."""
    if joint.probs.ndim != 2:
        raise DistributionError("mutual_information expects exactly two axes")
    p = joint.probs
    value = entropy(p.sum(axis=1)) + entropy(p.sum(axis=0)) + _plogp_sum(p.ravel())
    if value < -NEG_TOL:
        raise DistributionError(f"mutual information {value!r} below zero beyond tolerance")
    return max(value, 0.0)


def conditional_mutual_information(joint: JointPmf) -> float:
    """I(A;B|C) for a three-axis joint pmf over (A, B, C), in bits.

    Conditioners with zero probability contribute nothing.
    """
    if joint.probs.ndim != 3:
        raise DistributionError("conditional_mutual_information expects three axes")
    p = joint.probs
    value = 0.0
    for c in range(p.shape[2]):
        pc = float(p[:, :, c].sum())
        if pc <= 0.0:
            continue
        value += pc * mutual_information(JointPmf(p[:, :, c] / pc))
    return max(value, 0.0)
