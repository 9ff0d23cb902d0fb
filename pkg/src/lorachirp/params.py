"""Core modulation parameters and signal-buffer types."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Modulation symbols are plain integers in [0, M-1].
Symbol = int


@dataclass(frozen=True)
class LoraParams:
    """Frequency-shift chirp modulation configuration.

    sf: spreading factor; the alphabet size is M = 2**sf
    b:  frequency deviation (sweep width) in Hz
    f0: carrier frequency in Hz (baseband operations ignore it)
    ps: passband signal power in watts; the complex envelope has
        amplitude gamma = sqrt(2*ps), so the default ps = 0.5 gives
        the unit-amplitude envelope used throughout the spectral code

    The derived quantities m and ts are properties so that b*ts == m
    holds exactly and cannot drift.
    """

    sf: int
    b: float
    f0: float = 0.0
    ps: float = 0.5

    def __post_init__(self):
        if not isinstance(self.sf, (int, np.integer)) or isinstance(self.sf, bool):
            raise ValueError(f"sf must be an integer, got {self.sf!r}")
        if not 1 <= self.sf <= 16:
            raise ValueError(f"sf must be in [1, 16], got {self.sf}")
        if not self.b > 0:
            raise ValueError(f"b must be positive, got {self.b}")
        if self.f0 < 0:
            raise ValueError(f"f0 must be nonnegative, got {self.f0}")
        if not self.ps > 0:
            raise ValueError(f"ps must be positive, got {self.ps}")

    @property
    def m(self) -> int:
        """Alphabet size M = 2**sf."""
        return 1 << self.sf

    @property
    def ts(self) -> float:
        """Symbol duration in seconds (M/B)."""
        return self.m / self.b

    @property
    def tc(self) -> float:
        """Chip duration 1/B; there are M chips per symbol."""
        return 1.0 / self.b

    @property
    def gamma(self) -> float:
        """Complex-envelope amplitude sqrt(2*ps)."""
        return float(np.sqrt(2.0 * self.ps))


def validate_symbol(p: LoraParams, a) -> int:
    """Return a as int after checking 0 <= a < M."""
    if not isinstance(a, (int, np.integer)) or isinstance(a, bool):
        raise ValueError(f"symbol must be an integer, got {a!r}")
    a = int(a)
    if not 0 <= a < p.m:
        raise ValueError(f"symbol {a} outside [0, {p.m - 1}] for sf={p.sf}")
    return a


@dataclass(frozen=True)
class IqBuffer:
    """Uniformly sampled complex baseband signal.

    samples: 1-D complex array, made read-only on construction
    fs:      sample rate in Hz
    t0:      start time in seconds of samples[0]
    """

    samples: np.ndarray
    fs: float
    t0: float = 0.0

    def __post_init__(self):
        if not self.fs > 0:
            raise ValueError(f"fs must be positive, got {self.fs}")
        arr = np.array(self.samples, dtype=np.complex128, copy=True)
        if arr.ndim != 1:
            raise ValueError(f"samples must be 1-D, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        """Buffer length in seconds."""
        return len(self.samples) / self.fs

    @property
    def mean_power(self) -> float:
        """Mean per-sample power |x|^2."""
        if len(self.samples) == 0:
            return 0.0
        return float(np.mean(np.abs(self.samples) ** 2))
