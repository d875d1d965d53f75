"""
Seeded, parallel generation of information-density sample batches.

Every channel point owns one Philox stream keyed from (master seed, channel
index, n_p). Sample k of the point reads a fixed window of that stream,
starting at counter k * stride, so a sample's draws depend only on its global
index. Work is split into chunks of ``chunk_size`` samples purely for
scheduling; neither the chunk size nor the worker count changes the values.
The noncoherent batch of a channel point is keyed with n_p = 0, which makes the
pilot path without pilots identical to the noncoherent one.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from ..bounds.models import SampleBatch
from ..core.config import MonteCarloConfig, QuadratureConfig
from ..core.exceptions import UsageError
from ..density.sampler import sample_info_density_batch, sample_pilot_info_density_batch
from ..model.channel import ChannelParams, PilotConfig

# Philox emits four 64-bit words per counter step; one uniform double uses one word.
_WORDS_PER_COUNTER = 4


def complex_normals(rng: np.random.Generator, shape: Tuple[int, ...]) -> NDArray[np.complex128]:
    """Circularly symmetric complex normals with unit variance.

    Polar form: |z|^2 is Exp(1) and the phase is uniform. Each value consumes
    exactly two uniforms in C order, so the stream position of any element is
    known in advance.
    """
    uniforms = rng.random(shape + (2,))
    radius = np.sqrt(-np.log1p(-uniforms[..., 0]))
    return radius * np.exp(2j * np.pi * uniforms[..., 1])


class BatchGenerator:
    """Draws information-density sums for channel points"""

    def __init__(self, monte_carlo: MonteCarloConfig, quadrature: QuadratureConfig):
        self.logger = logging.getLogger(__name__)
        self.monte_carlo = monte_carlo
        self.quadrature = quadrature
        if monte_carlo.chunk_size < 1:
            raise UsageError(f"Chunk size must be positive, got {monte_carlo.chunk_size}")
        if monte_carlo.workers < 1:
            raise UsageError(f"Worker count must be positive, got {monte_carlo.workers}")

    def stream_seed(self, master_seed: int, channel_index: int, n_p: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(entropy=master_seed, spawn_key=(channel_index, n_p))

    def chunks(self, samples: int) -> List[Tuple[int, int]]:
        """(first sample, size) pairs covering ``samples``"""
        size = self.monte_carlo.chunk_size
        return [(start, min(size, samples - start)) for start in range(0, samples, size)]

    @staticmethod
    def counter_stride(normals_per_sample: int) -> int:
        """Philox counter steps reserved for one sample"""
        return math.ceil(2 * normals_per_sample / _WORDS_PER_COUNTER)

    def sample_normals(self, seed: np.random.SeedSequence, start: int, size: int, normals_per_sample: int) -> NDArray[np.complex128]:
        """Complex normals of samples start .. start + size - 1, one row per sample"""
        stride = self.counter_stride(normals_per_sample)
        bit_generator = np.random.Philox(seed)
        bit_generator.advance(start * stride)
        padded = stride * _WORDS_PER_COUNTER // 2
        draws = complex_normals(np.random.Generator(bit_generator), (size, padded))
        return draws[:, :normals_per_sample]

    def _noncoherent_chunk(self, params: ChannelParams, seed: np.random.SeedSequence, start: int, size: int) -> NDArray[np.float64]:
        draws = self.sample_normals(seed, start, size, params.ell * params.n_c)
        noise = draws.reshape(size * params.ell, params.n_c)
        per_block = sample_info_density_batch(params, noise, panels=self.quadrature.batch_panels, order=self.quadrature.batch_order, tolerance=self.quadrature.relative_tolerance)
        return per_block.reshape(size, params.ell).sum(axis=1)

    def _pilot_chunk(self, params: ChannelParams, pilots: PilotConfig, seed: np.random.SeedSequence, start: int, size: int) -> NDArray[np.float64]:
        # per sample: ell estimates first, then ell * n_d noise symbols
        draws = self.sample_normals(seed, start, size, params.ell * (1 + pilots.n_d))
        estimates = draws[:, : params.ell]
        noise = draws[:, params.ell :]
        per_block = sample_pilot_info_density_batch(
            params,
            pilots,
            estimates.reshape(size * params.ell),
            noise.reshape(size * params.ell, pilots.n_d),
            panels=self.quadrature.batch_panels,
            order=self.quadrature.batch_order,
            tolerance=self.quadrature.relative_tolerance,
        )
        return per_block.reshape(size, params.ell).sum(axis=1)

    def _run_chunks(self, draw, master_seed: int, channel_index: int, n_p: int, samples: int) -> NDArray[np.float64]:
        seed = self.stream_seed(master_seed, channel_index, n_p)
        chunks = self.chunks(samples)
        workers = min(self.monte_carlo.workers, len(chunks))
        if workers <= 1:
            parts = [draw(seed, start, size) for start, size in chunks]
        else:
            with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="rician-fbl-chunk") as pool:
                parts = list(pool.map(lambda chunk: draw(seed, *chunk), chunks))
        return np.concatenate(parts)

    def noncoherent(self, params: ChannelParams, channel_index: int, samples: Optional[int] = None, master_seed: Optional[int] = None) -> SampleBatch:
        """Sums over ell blocks of the noncoherent information density"""
        samples = samples or self.monte_carlo.samples
        master_seed = self.monte_carlo.master_seed if master_seed is None else master_seed
        self.logger.debug(f"Drawing {samples} noncoherent sums for {params.label()} (channel #{channel_index})")
        sums = self._run_chunks(lambda seed, start, size: self._noncoherent_chunk(params, seed, start, size), master_seed, channel_index, 0, samples)
        return SampleBatch(sums=sums, params=params, master_seed=master_seed, n_p=0)

    def pilot(self, params: ChannelParams, pilots: PilotConfig, channel_index: int, samples: Optional[int] = None, master_seed: Optional[int] = None) -> SampleBatch:
        """Sums over ell blocks of the pilot-assisted information density"""
        if not pilots.coherent:
            return self.noncoherent(params, channel_index, samples, master_seed)
        samples = samples or self.monte_carlo.samples
        master_seed = self.monte_carlo.master_seed if master_seed is None else master_seed
        self.logger.debug(f"Drawing {samples} pilot sums (n_p={pilots.n_p}) for {params.label()} (channel #{channel_index})")
        sums = self._run_chunks(lambda seed, start, size: self._pilot_chunk(params, pilots, seed, start, size), master_seed, channel_index, pilots.n_p, samples)
        return SampleBatch(sums=sums, params=params, master_seed=master_seed, n_p=pilots.n_p)
