"""Seeded simulation of stopping-set strategies.

Uniforms come from a counter-based generator: the draw for trial ``t`` at
index ``k`` is a hash of ``(seed, t, k)``.  There is no generator state, so a
run split into chunks (in any order, on any number of workers) sees exactly
the same draws.  Per-chunk results are integer win counts per index, which
also makes the reduction order-independent.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import IndexOutOfRange, ProblemInstance

CHUNK_TRIALS = 1 << 17

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_INDEX_MUL = 0xD1B54A32D192ED03
_MASK = 0xFFFFFFFFFFFFFFFF
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))


def _mix64(x: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; uint64 arithmetic wraps modulo 2^64
    x = (x ^ (x >> _S30)) * _M1
    x = (x ^ (x >> _S27)) * _M2
    return x ^ (x >> _S31)


def uniforms(seed: int, trials: np.ndarray, k: int) -> np.ndarray:
    """Uniform [0, 1) draws for the given trial indices at index k."""
    key = _mix64(np.array([seed & _MASK], dtype=np.uint64))
    key = _mix64(key ^ np.uint64((k * _INDEX_MUL) & _MASK))
    h = _mix64(_mix64(key ^ (trials.astype(np.uint64) * _GOLDEN)))
    return (h >> _S11).astype(np.float64) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class SimulationResult:
    mean: float
    stderr: float
    trials: int
    seed: int


def _win_counts(
    p: list[float], members: frozenset[int], seed: int, start: int, stop: int
) -> np.ndarray:
    """Wins per stopping index (slot 0 unused) for trials ``start..stop-1``."""
    n = len(p)
    trials = np.arange(start, stop, dtype=np.uint64)
    stopped_at = np.zeros(trials.size, dtype=np.int64)
    voided = np.zeros(trials.size, dtype=bool)
    for k in range(1, n + 1):
        success = uniforms(seed, trials, k) < p[k - 1]
        voided |= success & (stopped_at > 0)
        if k in members:
            stopped_at[success & (stopped_at == 0)] = k
    paid = stopped_at[(stopped_at > 0) & ~voided]
    return np.bincount(paid, minlength=n + 1)


def simulate(
    inst: ProblemInstance,
    members: Iterable[int],
    trials: int,
    seed: int,
    workers: int = 1,
) -> SimulationResult:
    if trials < 1:
        raise ValueError("trials must be positive")
    members = frozenset(members)
    for k in members:
        if not 1 <= k <= inst.n:
            raise IndexOutOfRange(f"set member {k} outside 1..{inst.n}")
    p = [float(x) for x in inst.p]
    w = [float(x) for x in inst.w]
    chunks = [(a, min(a + CHUNK_TRIALS, trials)) for a in range(0, trials, CHUNK_TRIALS)]

    def run(chunk: tuple[int, int]) -> np.ndarray:
        return _win_counts(p, members, seed, *chunk)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    counts = np.sum(parts, axis=0)

    total = math.fsum(int(counts[k]) * w[k - 1] for k in range(1, inst.n + 1))
    total_sq = math.fsum(int(counts[k]) * w[k - 1] ** 2 for k in range(1, inst.n + 1))
    mean = total / trials
    if trials > 1:
        var = max((total_sq - total * mean) / (trials - 1), 0.0)
        stderr = math.sqrt(var / trials)
    else:
        stderr = 0.0
    return SimulationResult(mean, stderr, trials, seed)
