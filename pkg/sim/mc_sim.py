"""Monte-Carlo simulator of the correlated typical-pair coding scheme.

Each relay owns an independent Gaussian codebook. The source indexes every
codeword pair whose empirical correlation is close to the design correlation
and uses that list as its message set; relay k forwards its half of the
chosen pair over the Gaussian multiple-access channel y = x1 + x2 + u, and
the destination decodes the pair.

Randomness is derived from (seed, stream, index) through numpy SeedSequence
spawn keys, so codebooks and every trial are reproducible no matter how the
trials are scheduled across threads.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.stats import binomtest

from channel.bounds import rho_circ
from channel.config import get_config
from channel.core import penalized_sum
from channel.errors import (
    AdmissibilityError,
    ArgumentError,
    EmptyPairSetError,
    PowerConstraintError,
)
from channel.schemas import Codebooks, Decoder, PairIndex, SimConfig, SimResult

logger = logging.getLogger(__name__)

# SeedSequence spawn-key prefixes
CODEBOOK_STREAM = 0
TRIAL_STREAM = 1

MAX_REDRAWS = 1000
# Largest number of correlation-matrix entries formed at once.
CORRELATION_BLOCK = 1 << 22


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


# -----------------
# Codebooks
# -----------------
def _draw_book(rng: np.random.Generator, rows: int, n: int, power: float, delta: float) -> np.ndarray:
    std = math.sqrt(max(0.0, 1.0 - delta) * power)
    book = rng.normal(0.0, std, size=(rows, n))
    attempts = np.zeros(rows, dtype=int)
    while True:
        bad = np.flatnonzero(np.mean(book * book, axis=1) > power)
        if bad.size == 0:
            break
        attempts[bad] += 1
        if attempts.max() > MAX_REDRAWS:
            raise PowerConstraintError(
                f"row {int(bad[0])} exceeded power {power} after {MAX_REDRAWS} redraws; "
                "raise delta or the blocklength"
            )
        book[bad] = rng.normal(0.0, std, size=(bad.size, n))
    logger.debug("drew %d x %d codebook, %d redraws", rows, n, int(attempts.sum()))
    return book


def generate_codebooks(config: SimConfig) -> Codebooks:
    """Draw both relay codebooks under their per-codeword power constraints."""
    book1 = _draw_book(_stream(config.seed, CODEBOOK_STREAM, 1), config.m1, config.n, config.p1, config.delta)
    book2 = _draw_book(_stream(config.seed, CODEBOOK_STREAM, 2), config.m2, config.n, config.p2, config.delta)
    return Codebooks(book1=book1, book2=book2, p1=config.p1, p2=config.p2)


# -----------------
# Message set
# -----------------
def enumerate_typical_pairs(books: Codebooks, rho: float, delta: float) -> PairIndex:
    """All (i, j) whose empirical correlation is within delta of rho, in lexicographic order."""
    n = books.n
    scale = n * math.sqrt(books.p1 * books.p2)
    m2 = books.book2.shape[0]
    block = max(1, CORRELATION_BLOCK // max(1, m2))
    idx_i: List[np.ndarray] = []
    idx_j: List[np.ndarray] = []
    corr: List[np.ndarray] = []
    for start in range(0, books.book1.shape[0], block):
        c = books.book1[start:start + block] @ books.book2.T / scale
        ii, jj = np.nonzero(np.abs(c - rho) <= delta)
        idx_i.append(ii + start)
        idx_j.append(jj)
        corr.append(c[ii, jj])
    i = np.concatenate(idx_i).astype(np.int64)
    if i.size == 0:
        raise EmptyPairSetError(f"no codeword pair has empirical correlation within {delta} of {rho}")
    index = PairIndex(i=i, j=np.concatenate(idx_j).astype(np.int64), correlation=np.concatenate(corr), n=n)
    logger.info("indexed %d typical pairs, effective rate %.4f", index.count, index.effective_rate)
    return index


def predicted_pair_exponent(r1: float, r2: float, rho: float) -> float:
    """Rate of the typical-pair message set, r1 + r2 - (1/2) log2(1 / (1 - rho^2))."""
    limit = rho_circ(r1, r2)
    if rho > limit + 1e-12:
        raise AdmissibilityError(f"rho={rho} exceeds rho°={limit:.6f}; the links cannot carry that correlation")
    return penalized_sum(r1 + r2, rho)


def wilson_interval(errors: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    if trials <= 0:
        raise ArgumentError("a confidence interval needs at least one trial")
    ci = binomtest(errors, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


# -----------------
# Trials
# -----------------
@dataclass(frozen=True)
class _Channel:
    """Everything a trial needs, precomputed once per run."""

    config: SimConfig
    books: Codebooks
    index: PairIndex
    pair_energy: np.ndarray  # |x1|^2 + |x2|^2 + 2<x1, x2> per pair
    cross: np.ndarray  # <x1, x2> per pair
    norm1: np.ndarray
    norm2: np.ndarray
    noise_scale: float


def _prepare(config: SimConfig, books: Codebooks, index: PairIndex, noise_scale: float) -> _Channel:
    norm1 = np.einsum("ij,ij->i", books.book1, books.book1)
    norm2 = np.einsum("ij,ij->i", books.book2, books.book2)
    cross = index.correlation * config.n * math.sqrt(config.p1 * config.p2)
    energy = norm1[index.i] + norm2[index.j] + 2.0 * cross
    return _Channel(config, books, index, energy, cross, norm1, norm2, noise_scale)


def _decode_typical(ch: _Channel, y: np.ndarray, a1: np.ndarray, a2: np.ndarray) -> int:
    cfg, idx = ch.config, ch.index
    n = cfg.n
    a1p, a2p = a1[idx.i], a2[idx.j]
    residual = (float(y @ y) + ch.pair_energy - 2.0 * (a1p + a2p)) / n
    r1 = (a1p - ch.norm1[idx.i] - ch.cross) / (n * math.sqrt(cfg.p1))
    r2 = (a2p - ch.norm2[idx.j] - ch.cross) / (n * math.sqrt(cfg.p2))
    ok = (
        (np.abs(residual - ch.noise_scale ** 2) <= cfg.delta)
        & (np.abs(r1) <= cfg.delta)
        & (np.abs(r2) <= cfg.delta)
    )
    hits = np.flatnonzero(ok)
    return int(hits[0]) if hits.size == 1 else -1


def _trial(ch: _Channel, t: int) -> bool:
    """Run trial `t`; True when the decoder errs."""
    cfg, idx, books = ch.config, ch.index, ch.books
    rng = _stream(cfg.seed, TRIAL_STREAM, t)
    w = int(rng.integers(idx.count))
    i, j = int(idx.i[w]), int(idx.j[w])
    x1, x2 = books.book1[i], books.book2[j]
    if ch.norm1[i] > cfg.n * cfg.p1 * (1 + 1e-12) or ch.norm2[j] > cfg.n * cfg.p2 * (1 + 1e-12):
        raise PowerConstraintError(f"pair ({i}, {j}) violates the average power constraint")
    y = x1 + x2 + ch.noise_scale * rng.standard_normal(cfg.n)
    a1 = books.book1 @ y
    a2 = books.book2 @ y
    if cfg.decoder is Decoder.MINIMUM_DISTANCE:
        # |y - x1 - x2|^2 up to the constant |y|^2
        w_hat = int(np.argmin(ch.pair_energy - 2.0 * (a1[idx.i] + a2[idx.j])))
    else:
        w_hat = _decode_typical(ch, y, a1, a2)
    return w_hat != w


def _run_chunk(ch: _Channel, trial_ids: Sequence[int]) -> int:
    return sum(_trial(ch, t) for t in trial_ids)


def run_trials(config: SimConfig, *, workers: int | None = None, noise_scale: float = 1.0) -> SimResult:
    """Estimate the message error rate of the scheme for `config`.

    `noise_scale` multiplies the channel noise; 0 gives the noiseless channel.
    """
    if config.trials == 0:
        raise ArgumentError("trials must be positive")
    books = generate_codebooks(config)
    index = enumerate_typical_pairs(books, config.rho, config.delta)
    ch = _prepare(config, books, index, noise_scale)

    workers = workers or get_config().workers
    chunks = [[int(t) for t in c] for c in np.array_split(np.arange(config.trials), max(1, workers)) if len(c)]
    if workers == 1:
        errors = sum(_run_chunk(ch, c) for c in chunks)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            errors = sum(pool.map(lambda c: _run_chunk(ch, c), chunks))

    lo, hi = wilson_interval(errors, config.trials)
    logger.info("n=%d decoder=%s errors=%d/%d", config.n, config.decoder.value, errors, config.trials)
    return SimResult(
        n=config.n,
        decoder=config.decoder,
        trials=config.trials,
        errors=errors,
        error_rate=errors / config.trials,
        wilson_95_ci=(lo, hi),
        pair_count=index.count,
        effective_rate=index.effective_rate,
        mean_pair_correlation=index.mean_pair_correlation,
    )


__all__ = [
    "CODEBOOK_STREAM",
    "TRIAL_STREAM",
    "generate_codebooks",
    "enumerate_typical_pairs",
    "predicted_pair_exponent",
    "wilson_interval",
    "run_trials",
]
