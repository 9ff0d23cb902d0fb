"""Chip-rate discrete-time model, dechirping and DFT demodulation.

Sampling the received symbol every Tc = 1/B seconds gives

    x[k] = gamma * exp{j*2*pi*k*(a/M - 1/2 + k/(2M))},  k = 0..M-1,

with no modulo operation needed: the frequency-wrap term contributes an
integer multiple of 2*pi at the chip instants.  Multiplying by the
conjugate reference chirp exp{-j*2*pi*k^2/(2M) + j*pi*k} turns the symbol
into the complex sinusoid exp{j*2*pi*k*a/M}, whose M-point DFT peaks at
bin a.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import IqBuffer, LoraParams, Symbol, validate_symbol


@dataclass(frozen=True)
class ChipVector:
    """One symbol of M chip-rate samples."""

    chips: np.ndarray
    params: LoraParams

    def __post_init__(self):
        arr = np.array(self.chips, dtype=np.complex128, copy=True)
        if arr.ndim != 1 or len(arr) != self.params.m:
            raise ValueError(f"expected {self.params.m} chips, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "chips", arr)


@dataclass(frozen=True)
class DechirpedVector:
    """Dechirped symbol: a complex sinusoid at the symbol frequency."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.complex128, copy=True)
        if arr.ndim != 1:
            raise ValueError(f"values must be 1-D, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)


def chip_samples(p: LoraParams, a: Symbol) -> ChipVector:
    """Chip-rate samples of the symbol waveform."""
    a = validate_symbol(p, a)
    k = np.arange(p.m)
    chips = p.gamma * np.exp(2j * np.pi * k * (a / p.m - 0.5 + k / (2.0 * p.m)))
    return ChipVector(chips, p)


def _dechirp_reference(m: int) -> np.ndarray:
    k = np.arange(m)
    return np.exp(-2j * np.pi * k * k / (2.0 * m) + 1j * np.pi * k)


def dechirp(c: ChipVector) -> DechirpedVector:
    """Multiply by the conjugate reference chirp.

    For a clean symbol a the result is gamma * exp{j*2*pi*k*a/M}.
    """
    m = c.params.m
    if len(c.chips) != m:
        raise ValueError(f"chip vector length {len(c.chips)} != M = {m}")
    return DechirpedVector(c.chips * _dechirp_reference(m))


def demodulate_symbol(c: ChipVector) -> Symbol:
    """Detect the symbol as argmax_q |DFT(dechirped)[q]|.

    Exact for noiseless chip-rate input; ties break to the lowest bin.
    """
    spectrum = np.fft.fft(dechirp(c).values)
    return int(np.argmax(np.abs(spectrum)))


def demodulate_stream(iq: IqBuffer, p: LoraParams) -> list[Symbol]:
    """Demodulate a chip-rate (or integer-oversampled) symbol stream.

    When iq.fs is an integer multiple of B, every (fs/B)-th sample is
    taken starting at index 0 with no anti-alias filtering: band-limiting
    would distort the chirps, and at chip instants the plain samples are
    already exact.  After decimation the length must be a whole number of
    symbols.
    """
    if len(iq) == 0:
        raise ValueError("cannot demodulate an empty buffer")
    ratio = iq.fs / p.b
    r = int(round(ratio))
    if r < 1 or abs(ratio - r) > 1e-9 * max(1.0, ratio):
        raise ValueError(f"fs = {iq.fs} Hz is not an integer multiple of B = {p.b} Hz")
    chips = iq.samples[::r]
    trailing = len(chips) % p.m
    if trailing:
        raise ValueError(
            f"decimated stream has {len(chips)} chips, not a multiple of "
            f"M = {p.m}: {trailing} trailing samples")
    blocks = chips.reshape(-1, p.m) * _dechirp_reference(p.m)
    return [int(q) for q in np.argmax(np.abs(np.fft.fft(blocks, axis=1)), axis=1)]


def awgn(iq: IqBuffer, snr_db: float, seed: int) -> IqBuffer:
    """Add circularly-symmetric complex Gaussian noise at the given SNR.

    The noise variance per complex sample is P/10^(snr_db/10) where P is
    the buffer's mean sample power (gamma^2 for synthesized streams),
    split equally between the quadratures.  Noise is drawn from
    numpy's PCG64 generator seeded with `seed`, so equal seeds give
    identical output.
    """
    if not np.isfinite(snr_db):
        raise ValueError(f"snr_db must be finite, got {snr_db}")
    rng = np.random.default_rng(seed)
    nvar = iq.mean_power / 10.0 ** (snr_db / 10.0)
    scale = np.sqrt(nvar / 2.0)
    n = len(iq)
    noise = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return IqBuffer(iq.samples + noise, fs=iq.fs, t0=iq.t0)
