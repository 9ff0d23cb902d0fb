"""Time-domain synthesis of frequency-shift chirp waveforms.

The instantaneous frequency starts at a*B/M, increases linearly at rate
B/Ts and wraps back by B at tau_a = Ts*(1 - a/M).  The unit step uses the
right-continuous convention u(0) = 1 so the wrap applies exactly at tau_a
and the frequency stays in [0, B).  Complex envelopes are centered at
frequency zero (the chirp sweeps [-B/2, B/2)).
"""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.special import diric

from .params import IqBuffer, LoraParams, Symbol, validate_symbol


def _as_time_array(t, t_max: float, closed: bool):
    """Validate t against [0, t_max) or [0, t_max] and return array + scalar flag."""
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    inside = (arr >= 0) & (arr <= t_max if closed else arr < t_max)
    if not np.all(inside):
        span = f"[0, {t_max}]" if closed else f"[0, {t_max})"
        raise ValueError(f"time {arr[~inside][0]} outside the symbol interval {span}")
    return arr, scalar


def instantaneous_frequency(p: LoraParams, a: Symbol, t):
    """Instantaneous frequency f(t;a) in Hz for t in [0, Ts).

    f(t;a) = a*B/M + (B/Ts)*t - B*u(t - tau_a), i.e. a linear sweep from
    the symbol-dependent start frequency, reduced modulo B.  Accepts a
    scalar or array of times.
    """
    a = validate_symbol(p, a)
    t, scalar = _as_time_array(t, p.ts, closed=False)
    tau_a = (p.m - a) / p.b
    f = a * p.b / p.m + (p.b / p.ts) * t - p.b * (t >= tau_a)
    return float(f[0]) if scalar else f


def phase(p: LoraParams, a: Symbol, t):
    """Accumulated phase in radians for t in [0, Ts], zero at t = 0.

    phase(t;a) = 2*pi*[a*B*t/M + B*t^2/(2*Ts) - B*(t - tau_a)*u(t - tau_a)].
    Continuous in t, and phase(Ts;a) is a multiple of 2*pi for every a.
    """
    a = validate_symbol(p, a)
    t, scalar = _as_time_array(t, p.ts, closed=True)
    tau_a = (p.m - a) / p.b
    wrap = (t - tau_a) * (t >= tau_a)
    ph = 2.0 * np.pi * (a * p.b * t / p.m + p.b * t * t / (2.0 * p.ts) - p.b * wrap)
    return float(ph[0]) if scalar else ph


def waveform_at(p: LoraParams, a: Symbol, t):
    """Complex envelope centered at frequency zero, for t in [0, Ts].

    x(t;a) = gamma * exp{j*2*pi*B*t*[a/M - 1/2 + B*t/(2M) - u(t - (M-a)/B)]}
    """
    a = validate_symbol(p, a)
    t, scalar = _as_time_array(t, p.ts, closed=True)
    tau_a = (p.m - a) / p.b
    u = (t >= tau_a).astype(float)
    ph = 2.0 * np.pi * p.b * t * (a / p.m - 0.5 + p.b * t / (2.0 * p.m) - u)
    x = p.gamma * np.exp(1j * ph)
    return complex(x[0]) if scalar else x


def baseband_waveform(p: LoraParams, a: Symbol, oversample: int = 1) -> IqBuffer:
    """Sample one symbol waveform on the left-closed grid t_k = k*Ts/(oversample*M).

    Returns oversample*M samples at rate oversample*B; there is no sample
    at t = Ts (it belongs to the next symbol).  With oversample = 1 the
    samples coincide with the chip-rate model of the receiver module.
    """
    if not isinstance(oversample, (int, np.integer)) or oversample < 1:
        raise ValueError(f"oversample must be an integer >= 1, got {oversample!r}")
    n = int(oversample) * p.m
    t = np.arange(n) / (oversample * p.b)
    return IqBuffer(waveform_at(p, a, t), fs=oversample * p.b)


def modulate(p: LoraParams, symbols: Sequence[Symbol], oversample: int = 1) -> IqBuffer:
    """Concatenate per-symbol waveforms into one phase-continuous stream.

    The modulation is memoryless: every symbol starts and ends at phase
    zero, so concatenation of independently synthesized waveforms is the
    exact modulator output.
    """
    symbols = list(symbols)
    if len(symbols) == 0:
        raise ValueError("symbols must be a non-empty sequence")
    parts = [baseband_waveform(p, a, oversample).samples for a in symbols]
    return IqBuffer(np.concatenate(parts), fs=oversample * p.b)


def mean_envelope_magnitude(p: LoraParams, t):
    """|E[x(t;A)]| for equiprobable symbols: (1/M)*|sin(pi*B*t)/sin(pi*B*t/M)|.

    Evaluated through the Dirichlet kernel, which supplies the analytic
    limit at points where the denominator vanishes (t = 0 gives 1).
    """
    t, scalar = _as_time_array(t, p.ts, closed=False)
    v = np.abs(diric(2.0 * np.pi * p.b * t / p.m, p.m))
    return float(v[0]) if scalar else v


def payload_to_symbols(payload: bytes, sf: int) -> list[int]:
    """Map a byte payload onto SF-bit symbols.

    The payload is read as a big-endian bit stream, chunked into SF-bit
    groups (most significant bit first) and zero-padded at the tail.
    """
    if not 1 <= sf <= 16:
        raise ValueError(f"sf must be in [1, 16], got {sf}")
    if len(payload) == 0:
        raise ValueError("payload must be non-empty")
    bits = np.unpackbits(np.frombuffer(bytes(payload), dtype=np.uint8))
    pad = (-len(bits)) % sf
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    weights = 1 << np.arange(sf - 1, -1, -1)
    return [int(v) for v in bits.reshape(-1, sf) @ weights]
