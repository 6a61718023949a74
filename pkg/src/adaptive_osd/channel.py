"""BPSK over AWGN and per-frame random streams."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gf2 import BitVec, pack_bits
from .reliability import q_function


@dataclass(frozen=True)
class NoiseModel:
    """AWGN with single-sided density ``n0``; noise variance is ``n0 / 2``."""

    n0: float

    def __post_init__(self):
        if not self.n0 > 0:
            raise ValueError(f"n0 must be positive, got {self.n0}")

    @classmethod
    def from_snr_db(cls, snr_db: float) -> NoiseModel:
        # SNR = 2 / N0
        return cls(2.0 / 10 ** (snr_db / 10))

    @property
    def snr_db(self) -> float:
        return 10 * math.log10(2.0 / self.n0)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.n0 / 2)


@dataclass(frozen=True, eq=False)
class SoftWord:
    """One received frame.

    ``n0`` travels with the frame because the reliability estimates the
    decoders compute are conditioned on the channel noise level.
    """

    r: np.ndarray
    n0: float
    alpha: np.ndarray = field(init=False)
    y: BitVec = field(init=False)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=np.float64)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "alpha", np.abs(r))
        # r == 0 decides 0
        object.__setattr__(self, "y", BitVec(r.size, pack_bits((r < 0).astype(np.uint8))))

    @property
    def n(self) -> int:
        return self.r.size


def modulate(c: BitVec | np.ndarray) -> np.ndarray:
    bits = c.to_array() if isinstance(c, BitVec) else np.asarray(c, dtype=np.uint8)
    return 1.0 - 2.0 * bits


def transmit(
    s: np.ndarray,
    noise: NoiseModel,
    rng: np.random.Generator | None,
) -> SoftWord:
    """Add white Gaussian noise of variance ``n0/2``; ``rng=None`` sends noiselessly."""
    s = np.asarray(s, dtype=np.float64)
    if rng is None:
        return SoftWord(s.copy(), noise.n0)
    return SoftWord(s + noise.sigma * rng.standard_normal(s.size), noise.n0)


def frame_rng(master_seed: int, frame_index: int) -> np.random.Generator:
    """Independent stream for one frame, keyed by ``(master_seed, frame_index)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([master_seed, frame_index])))


def bitwise_error_prob_raw(noise: NoiseModel) -> float:
    """Hard-decision bit error probability ``Q(sqrt(2/N0))``."""
    return float(q_function(math.sqrt(2.0 / noise.n0)))
