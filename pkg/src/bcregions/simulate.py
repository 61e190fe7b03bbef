"""Small-blocklength codebook simulation for both layering schemes.

Random codebooks are drawn per trial from the scheme's input
distribution, a uniformly chosen message pair is sent through the
channel, and each receiver decodes with either exact maximum-likelihood
scoring or a per-letter typicality test.  Everything is vectorized
over the full message grid, so the product m1 * m2 is capped.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .channels import BroadcastChannel
from .probability import JointPmf
from .regions import UVDist, UXDist

__all__ = [
    "MAX_MESSAGE_PAIRS",
    "SimulationError",
    "Codebook",
    "DecodeOutcome",
    "TrialRecord",
    "TrialResult",
    "is_typical",
    "generate_codebook",
    "decode_ml",
    "decode_ml_pair",
    "decode_typicality",
    "estimate_error",
]

# Decoding scores the full message grid at once; refuse anything bigger.
MAX_MESSAGE_PAIRS = 2**24


class SimulationError(ValueError):
    pass


def _as_rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _draw_rows(pmf: NDArray[np.float64], shape: tuple[int, ...], rng: np.random.Generator) -> NDArray[np.int8]:
    cdf = np.cumsum(pmf)
    idx = np.searchsorted(cdf, rng.random(shape), side="right")
    # rounding can leave the last cumulative sum a hair under 1.0
    return np.minimum(idx, len(cdf) - 1).astype(np.int8)


@dataclass(frozen=True)
class Codebook:
    """One realization of the random code for a scheme input.

    For the homogeneous scheme the transmitted word is a symbol-by-symbol
    function of the two layer rows; x_rows is materialized on demand.
    For the heterogeneous scheme every message pair owns a satellite row
    drawn around the cloud row, stored directly.
    """

    dist: UVDist | UXDist
    n: int
    m1: int
    m2: int
    u_rows: NDArray[np.int8]
    v_rows: NDArray[np.int8] | None
    x_rows: NDArray[np.int8] | None

    @property
    def scheme(self) -> str:
        return "uv" if isinstance(self.dist, UVDist) else "ux"

    def x_block(self) -> NDArray[np.int8]:
        """Transmitted words for every message pair, shape (m1, m2, n)."""
        if self.x_rows is not None:
            return self.x_rows
        assert isinstance(self.dist, UVDist)
        return self.dist.xmap.astype(np.int8)[self.u_rows[:, None, :], self.v_rows[None, :, :]]

    def x_word(self, m1: int, m2: int) -> NDArray[np.int8]:
        if self.x_rows is not None:
            return self.x_rows[m1, m2]
        assert isinstance(self.dist, UVDist)
        return self.dist.xmap.astype(np.int8)[self.u_rows[m1], self.v_rows[m2]]


def _message_counts(n: int, r1: float, r2: float) -> tuple[int, int]:
    m1 = max(1, round(2.0 ** (n * r1)))
    m2 = max(1, round(2.0 ** (n * r2)))
    if m1 * m2 > MAX_MESSAGE_PAIRS:
        raise SimulationError(
            f"message grid {m1} x {m2} exceeds the cap of {MAX_MESSAGE_PAIRS} pairs"
        )
    return m1, m2


def generate_codebook(dist: UVDist | UXDist, n: int, r1: float, r2: float, seed=0) -> Codebook:
    """Draw a fresh random codebook at rates (r1, r2) and blocklength n.

    Message counts are 2**(n*r) rounded to the nearest integer, never
    below one.
    """
    rng = _as_rng(seed)
    m1, m2 = _message_counts(n, r1, r2)
    if isinstance(dist, UVDist):
        u_rows = _draw_rows(dist.pu.probs, (m1, n), rng)
        v_rows = _draw_rows(dist.pv.probs, (m2, n), rng)
        return Codebook(dist=dist, n=n, m1=m1, m2=m2, u_rows=u_rows, v_rows=v_rows, x_rows=None)

    pux = dist.pux.probs
    u_size, x_size = pux.shape
    pu = pux.sum(axis=1)
    u_rows = _draw_rows(pu, (m1, n), rng)
    # satellite rows: inverse-cdf draws against the conditional of the
    # cloud symbol at each position, vectorized over the whole grid
    cond = np.where(pu[:, None] > 0.0, pux / np.maximum(pu[:, None], 1e-300), 1.0 / x_size)
    thresholds = np.cumsum(cond, axis=1).astype(np.float32)
    uni = rng.random((m1, m2, n), dtype=np.float32)
    row_thresholds = thresholds[u_rows]  # (m1, n, x_size)
    x_rows = np.zeros((m1, m2, n), dtype=np.int8)
    for t in range(x_size - 1):
        x_rows += (uni >= row_thresholds[:, None, :, t]).astype(np.int8)
    return Codebook(dist=dist, n=n, m1=m1, m2=m2, u_rows=u_rows, v_rows=None, x_rows=x_rows)


def is_typical(sequences, pmf: JointPmf, eps: float) -> bool:
    """Per-letter typicality: every cell's frequency within eps of its mass.

    `sequences` holds one symbol array per pmf axis, all the same
    length; a cell with zero mass must not occur at all.
    """
    seqs = [np.asarray(s) for s in sequences]
    sizes = pmf.axis_sizes
    if len(seqs) != len(sizes):
        raise ValueError(f"expected {len(sizes)} parallel sequences, got {len(seqs)}")
    n = len(seqs[0])
    counts = np.zeros(sizes)
    np.add.at(counts, tuple(seqs), 1.0)
    return bool(np.all(np.abs(counts / n - pmf.probs) <= eps * pmf.probs))


@dataclass(frozen=True)
class DecodeOutcome:
    """Result of one decoding attempt.

    status is 'unique' on a clean decision, 'tie' when maximum-likelihood
    scores tied (the smallest index was taken), 'ambiguous' when several
    messages passed the typicality test, and 'none' when none did.
    """

    decoded: int | None
    status: str
    tied: int = 1


def _score_dtype(leg: NDArray[np.float64], n: int):
    # single precision is enough unless the smallest per-letter factor
    # can underflow over a whole block
    smallest = leg[leg > 0.0].min()
    return np.float32 if smallest**n > 1e-30 else np.float64


def _pair_likelihoods(codebook: Codebook, leg: NDArray[np.float64], y: NDArray[np.int8]) -> NDArray[np.float64]:
    x_all = codebook.x_block()
    dtype = _score_dtype(leg, codebook.n)
    scores = np.ones((codebook.m1, codebook.m2), dtype=dtype)
    for k in range(codebook.n):
        scores *= leg[:, y[k]].astype(dtype)[x_all[:, :, k]]
    return scores


def decode_ml(codebook: Codebook, channel: BroadcastChannel, receiver: int, y: NDArray[np.int8]) -> DecodeOutcome:
    """Exact maximum-likelihood decoding of one receiver's message.

    The other message is marginalized with its uniform prior; ties are
    broken toward the smallest index and reported.
    """
    leg = channel.marginal_rx1 if receiver == 1 else channel.marginal_rx2
    pair = _pair_likelihoods(codebook, leg, np.asarray(y, dtype=np.int8))
    scores = pair.sum(axis=1, dtype=np.float64) if receiver == 1 else pair.sum(axis=0, dtype=np.float64)
    best = int(np.argmax(scores))
    tied = int(np.count_nonzero(scores == scores[best]))
    return DecodeOutcome(decoded=best, status="unique" if tied == 1 else "tie", tied=tied)


def decode_ml_pair(codebook: Codebook, channel: BroadcastChannel, y1: NDArray[np.int8], y2: NDArray[np.int8]) -> tuple[tuple[int, int], int]:
    """Joint maximum-likelihood decoding of the message pair.

    Scores every pair against the full two-output law; returns the
    winning pair and the tie count, smallest flat index first.
    """
    y1 = np.asarray(y1, dtype=np.int8)
    y2 = np.asarray(y2, dtype=np.int8)
    x_all = codebook.x_block()
    flat = channel.transitions.reshape(channel.x_size, channel.y1_size * channel.y2_size)
    dtype = _score_dtype(flat, codebook.n)
    scores = np.ones((codebook.m1, codebook.m2), dtype=dtype)
    for k in range(codebook.n):
        cell = int(y1[k]) * channel.y2_size + int(y2[k])
        scores *= flat[:, cell].astype(dtype)[x_all[:, :, k]]
    best = int(np.argmax(scores))
    tied = int(np.count_nonzero(scores == scores.ravel()[best]))
    return (best // codebook.m2, best % codebook.m2), tied


def _typicality_targets(codebook: Codebook, channel: BroadcastChannel, receiver: int) -> JointPmf:
    leg = channel.marginal_rx1 if receiver == 1 else channel.marginal_rx2
    dist = codebook.dist
    if isinstance(dist, UVDist):
        # joint over (u, v, y)
        w = leg[dist.xmap]  # (u_size, v_size, y_size)
        joint = dist.pu.probs[:, None, None] * dist.pv.probs[None, :, None] * w
    else:
        # joint over (u, x, y)
        joint = dist.pux.probs[:, :, None] * leg[None, :, :]
    return JointPmf(joint)


def decode_typicality(
    codebook: Codebook,
    channel: BroadcastChannel,
    receiver: int,
    y: NDArray[np.int8],
    eps: float,
) -> DecodeOutcome:
    """Typicality decoding with the other message resolved nonuniquely.

    A message is a candidate when some choice of the other message makes
    the full tuple jointly typical with the received word.
    """
    y = np.asarray(y, dtype=np.int8)
    target = _typicality_targets(codebook, channel, receiver)
    dist = codebook.dist
    candidates = []
    own_count = codebook.m1 if receiver == 1 else codebook.m2
    other_count = codebook.m2 if receiver == 1 else codebook.m1
    for own in range(own_count):
        hit = False
        for other in range(other_count):
            i, j = (own, other) if receiver == 1 else (other, own)
            if isinstance(dist, UVDist):
                seqs = (codebook.u_rows[i], codebook.v_rows[j], y)
            else:
                seqs = (codebook.u_rows[i], codebook.x_rows[i, j], y)
            if is_typical(seqs, target, eps):
                hit = True
                break
        if hit:
            candidates.append(own)
            if len(candidates) > 1:
                break
    if len(candidates) == 1:
        return DecodeOutcome(decoded=candidates[0], status="unique")
    if not candidates:
        return DecodeOutcome(decoded=None, status="none")
    return DecodeOutcome(decoded=None, status="ambiguous")


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one send-and-decode trial."""

    sent: tuple[int, int]
    rx1: DecodeOutcome | None
    rx2: DecodeOutcome | None

    @property
    def rx1_ok(self) -> bool | None:
        return None if self.rx1 is None else self.rx1.decoded == self.sent[0]

    @property
    def rx2_ok(self) -> bool | None:
        return None if self.rx2 is None else self.rx2.decoded == self.sent[1]


@dataclass(frozen=True)
class TrialResult:
    """Aggregated error counts over independent codebook trials."""

    trials: int
    n: int
    m1: int
    m2: int
    rate1: float
    rate2: float
    decoder: str
    rx1_errors: int | None
    rx2_errors: int | None
    joint_errors: int | None
    rx1_ties: int
    rx2_ties: int
    records: tuple[TrialRecord, ...]

    @property
    def rx1_error_rate(self) -> float | None:
        return None if self.rx1_errors is None else self.rx1_errors / self.trials

    @property
    def rx2_error_rate(self) -> float | None:
        return None if self.rx2_errors is None else self.rx2_errors / self.trials

    @property
    def joint_error_rate(self) -> float | None:
        return None if self.joint_errors is None else self.joint_errors / self.trials


def _send(channel: BroadcastChannel, x_word: NDArray[np.int8], rng: np.random.Generator) -> tuple[NDArray[np.int8], NDArray[np.int8]]:
    ny1, ny2 = channel.y1_size, channel.y2_size
    flat = channel.transitions.reshape(channel.x_size, ny1 * ny2)
    cdf = np.cumsum(flat, axis=1)
    uni = rng.random(len(x_word))
    cells = np.minimum((cdf[x_word] <= uni[:, None]).sum(axis=1), ny1 * ny2 - 1)
    return (cells // ny2).astype(np.int8), (cells % ny2).astype(np.int8)


def _run_trial(
    channel: BroadcastChannel,
    dist: UVDist | UXDist,
    n: int,
    r1: float,
    r2: float,
    decoder: str,
    eps: float,
    seed: int,
    receivers: tuple[int, ...],
    t: int,
) -> TrialRecord:
    rng = np.random.default_rng([seed, t])
    codebook = generate_codebook(dist, n, r1, r2, rng)
    sent = (int(rng.integers(codebook.m1)), int(rng.integers(codebook.m2)))
    y1, y2 = _send(channel, codebook.x_word(*sent), rng)
    out1 = out2 = None
    if 1 in receivers:
        out1 = (
            decode_ml(codebook, channel, 1, y1)
            if decoder == "ml"
            else decode_typicality(codebook, channel, 1, y1, eps)
        )
    if 2 in receivers:
        out2 = (
            decode_ml(codebook, channel, 2, y2)
            if decoder == "ml"
            else decode_typicality(codebook, channel, 2, y2, eps)
        )
    return TrialRecord(sent=sent, rx1=out1, rx2=out2)


def _run_trial_batch(args) -> list[TrialRecord]:
    common, indices = args
    return [_run_trial(*common, t) for t in indices]


def _worker_count(workers: int | None) -> int:
    import os

    if workers is None:
        workers = int(os.environ.get("BCREGIONS_WORKERS", "1"))
    return max(1, workers)


def estimate_error(
    channel: BroadcastChannel,
    dist: UVDist | UXDist,
    n: int,
    r1: float,
    r2: float,
    trials: int,
    decoder: str = "ml",
    eps: float = 0.2,
    seed: int = 0,
    receivers: tuple[int, ...] = (1, 2),
    workers: int | None = None,
) -> TrialResult:
    """Monte Carlo error rates with a fresh codebook every trial.

    Trial t uses the generator seeded with [seed, t], so single trials
    can be reproduced in isolation and results do not depend on the
    worker count (BCREGIONS_WORKERS, default 1).  Restricting
    `receivers` skips the other decoder entirely; joint errors are only
    counted when both ran.
    """
    if decoder not in ("ml", "typicality"):
        raise SimulationError(f"unknown decoder '{decoder}'")
    if isinstance(dist, UVDist):
        if int(dist.xmap.max()) >= channel.x_size:
            raise SimulationError(
                f"symbol map uses input {int(dist.xmap.max())}, channel alphabet has {channel.x_size}"
            )
    elif dist.x_size != channel.x_size:
        raise SimulationError(f"distribution is over {dist.x_size} input symbols, channel has {channel.x_size}")
    m1, m2 = _message_counts(n, r1, r2)
    common = (channel, dist, n, r1, r2, decoder, eps, seed, receivers)
    workers = min(_worker_count(workers), max(1, trials))
    if workers == 1:
        records = [_run_trial(*common, t) for t in range(trials)]
    else:
        from concurrent.futures import ProcessPoolExecutor

        batches = [(common, list(range(w, trials, workers))) for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            by_worker = list(pool.map(_run_trial_batch, batches))
        records = [None] * trials
        for (_, indices), outs in zip(batches, by_worker):
            for t, rec in zip(indices, outs):
                records[t] = rec

    rx1_errors = sum(1 for r in records if r.rx1 is not None and not r.rx1_ok) if 1 in receivers else None
    rx2_errors = sum(1 for r in records if r.rx2 is not None and not r.rx2_ok) if 2 in receivers else None
    joint_errors = (
        sum(1 for r in records if not r.rx1_ok or not r.rx2_ok)
        if 1 in receivers and 2 in receivers
        else None
    )
    return TrialResult(
        trials=trials,
        n=n,
        m1=m1,
        m2=m2,
        rate1=float(np.log2(m1)) / n,
        rate2=float(np.log2(m2)) / n,
        decoder=decoder,
        rx1_errors=rx1_errors,
        rx2_errors=rx2_errors,
        joint_errors=joint_errors,
        rx1_ties=sum(1 for r in records if r.rx1 is not None and r.rx1.status == "tie"),
        rx2_ties=sum(1 for r in records if r.rx2 is not None and r.rx2.status == "tie"),
        records=tuple(records),
    )
