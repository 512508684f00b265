"""Seeded, splittable random streams and block-parallel iteration.

Every Monte Carlo loop in qstat is cut into fixed-size blocks of
iterations. Block ``b`` draws from its own substream derived from
``(master_seed, stream_index, b)``, so results are identical whatever
the thread count or scheduling order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, TypeVar

import numpy as np

from .errors import DomainError

BLOCK_SIZE = 2048
_U64 = 2**64

T = TypeVar("T")


@dataclass(frozen=True)
class RngSeed:
    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_index"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= int(v) < _U64:
                raise DomainError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    def generator(self, *path: int) -> np.random.Generator:
        """Independent generator for the substream addressed by ``path``."""
        ss = np.random.SeedSequence(int(self.master_seed), spawn_key=(int(self.stream_index), *path))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, index: int) -> "RngSeed":
        """A seed whose stream is distinct from this one's (used for sub-experiments)."""
        mixed = np.random.SeedSequence(int(self.master_seed), spawn_key=(int(self.stream_index), 0xC417D, index))
        return RngSeed(int(mixed.generate_state(1, np.uint64)[0]), index)

    def to_dict(self) -> dict:
        return {"master_seed": int(self.master_seed), "stream_index": int(self.stream_index)}


def thread_count() -> int:
    env = os.environ.get("QSTAT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def block_sizes(n_iter: int, block_size: int = BLOCK_SIZE) -> list[int]:
    full, rest = divmod(n_iter, block_size)
    return [block_size] * full + ([rest] if rest else [])


def map_blocks(
    n_iter: int,
    seed: RngSeed,
    fn: Callable[[np.random.Generator, int], T],
    block_size: int = BLOCK_SIZE,
) -> list[T]:
    """Run ``fn(rng, size)`` over iteration blocks; results in block order."""
    sizes = block_sizes(n_iter, block_size)
    jobs = [(seed.generator(b), size) for b, size in enumerate(sizes)]
    workers = thread_count()
    if workers == 1 or len(jobs) == 1:
        return [fn(rng, size) for rng, size in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))
