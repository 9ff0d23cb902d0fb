"""Closed-form cross-correlations between chirp waveforms.

For distinct symbols l, m the normalized correlation of the continuous
waveforms is

    C(l,m) = M * (e^{j2pi l(m-l)/M} - e^{j2pi m(m-l)/M})
             / (j2pi (M - |m-l|) |m-l|)

with C(l,l) = 1.  Its magnitude depends on the symbol distance d = |m-l|
only, |C| = M*|sin(pi d^2/M)| / (pi (M-d) d), bounded by 1/(sqrt(2M)-1),
so the waveform set is asymptotically orthogonal as M grows.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import LoraParams, Symbol, validate_symbol
from .waveform import waveform_at


def cross_correlation(p: LoraParams, l: Symbol, m: Symbol) -> complex:
    """Normalized complex cross-correlation of the baseband waveforms."""
    l = validate_symbol(p, l)
    m = validate_symbol(p, m)
    if l == m:
        return 1.0 + 0.0j
    M = p.m
    d = m - l
    num = np.exp(2j * np.pi * l * d / M) - np.exp(2j * np.pi * m * d / M)
    return complex(M * num / (2j * np.pi * (M - abs(d)) * abs(d)))


def cross_correlation_real(p: LoraParams, l: Symbol, m: Symbol) -> float:
    """Real part of the cross-correlation (relevant for passband waveforms)."""
    l = validate_symbol(p, l)
    m = validate_symbol(p, m)
    if l == m:
        return 1.0
    M = p.m
    d = m - l
    num = np.sin(2 * np.pi * l * d / M) - np.sin(2 * np.pi * m * d / M)
    return float(M * num / (2 * np.pi * (M - abs(d)) * abs(d)))


def abs_cross_correlation(p: LoraParams, d: int) -> float:
    """|C| for symbol distance d in [1, M-1]; independent of the pair offset."""
    if not 1 <= d <= p.m - 1:
        raise ValueError(f"distance d must be in [1, {p.m - 1}], got {d}")
    M = p.m
    return float(M * np.abs(np.sin(np.pi * d * d / M)) / (np.pi * (M - d) * d))


def numeric_cross_correlation_oracle(p: LoraParams, l: Symbol, m: Symbol,
                                     steps: int) -> complex:
    """Brute-force check of the closed form: trapezoidal integration of
    (1/Ts) * int_0^Ts x(t;l) x*(t;m) dt on a uniform grid of `steps` panels.

    Error is O(steps^-2); steps must be at least 64*M.
    """
    l = validate_symbol(p, l)
    m = validate_symbol(p, m)
    if steps < 64 * p.m:
        raise ValueError(f"steps must be >= 64*M = {64 * p.m}, got {steps}")
    t = np.linspace(0.0, p.ts, steps + 1)
    f = waveform_at(p, l, t) * np.conj(waveform_at(p, m, t))
    return complex(np.trapezoid(f, dx=p.ts / steps) / (p.ts * p.gamma ** 2))


def numeric_cross_correlation_matrix(p: LoraParams, steps: int,
                                     chunk: int = 1 << 14) -> np.ndarray:
    """All-pairs trapezoidal oracle, computed as a weighted Gram matrix.

    Equivalent to calling the per-pair oracle for every (l, m) but runs as
    chunked matrix products over the shared time grid.
    """
    if steps < 64 * p.m:
        raise ValueError(f"steps must be >= 64*M = {64 * p.m}, got {steps}")
    M = p.m
    t = np.linspace(0.0, p.ts, steps + 1)
    w = np.ones(steps + 1)
    w[0] = w[-1] = 0.5
    G = np.zeros((M, M), dtype=complex)
    for start in range(0, steps + 1, chunk):
        tc = t[start:start + chunk]
        X = np.empty((M, len(tc)), dtype=complex)
        for a in range(M):
            X[a] = waveform_at(p, a, tc)
        G += (X * w[start:start + chunk]) @ X.conj().T
    return G * (p.ts / steps) / (p.ts * p.gamma ** 2)


@dataclass(frozen=True)
class MaxCorrelation:
    """Maxima of |C| and |Re C| over all symbol pairs l != m."""

    max_abs: float
    max_abs_real: float
    argmax_abs: tuple[int, int]
    argmax_real: tuple[int, int]


def max_cross_correlation(p: LoraParams) -> MaxCorrelation:
    """Exhaustive scan of |C| and |Re C| maxima over l != m.

    |C| depends only on the symbol distance d, so the |C| maximum is an
    O(M) scan.  For |Re C| the distances are visited in decreasing order
    of |C|(d) and the scan stops once |C|(d) cannot beat the best |Re C|
    found; only a handful of distances are ever examined.
    """
    M = p.m
    d = np.arange(1, M)
    absvals = M * np.abs(np.sin(np.pi * d * d / M)) / (np.pi * (M - d) * d)
    i_abs = int(np.argmax(absvals))
    max_abs = float(absvals[i_abs])
    argmax_abs = (0, int(d[i_abs]))

    best_real = 0.0
    argmax_real = (0, int(d[i_abs]))
    for i in np.argsort(absvals)[::-1]:
        if absvals[i] <= best_real:
            break
        dd = int(d[i])
        ls = np.arange(M - dd)
        vals = absvals[i] * np.abs(np.cos(np.pi * dd * (2 * ls + dd) / M))
        j = int(np.argmax(vals))
        if vals[j] > best_real:
            best_real = float(vals[j])
            argmax_real = (int(ls[j]), int(ls[j] + dd))
    return MaxCorrelation(max_abs, best_real, argmax_abs, argmax_real)


def correlation_bound(p: LoraParams) -> float:
    """Upper bound 1/(sqrt(2M) - 1) on max |C| over distinct pairs."""
    return 1.0 / (np.sqrt(2.0 * p.m) - 1.0)


def snr_penalty_db(p: LoraParams) -> float:
    """Worst-case SNR penalty -10*log10(1 - max|Re C|) in dB relative to
    an orthogonal waveform set."""
    return float(-10.0 * np.log10(1.0 - max_cross_correlation(p).max_abs_real))


def orthogonality_offsets(p: LoraParams) -> list[int]:
    """Symbol distances d = 2^((q+sf)/2) < M with q >= 0 of the same parity
    as sf.  Every returned distance gives exactly orthogonal waveform pairs
    (C == 0 for all l, l+d)."""
    return [1 << ((q + p.sf) // 2) for q in range(p.sf % 2, p.sf, 2)]


def real_orthogonality_condition(p: LoraParams, l: Symbol, m: Symbol) -> bool:
    """True when Re C(l,m) = 0 for l != m.

    Zeros of the real correlation occur when (m-l)^2/M is an integer or
    when (m^2-l^2)/M - 1/2 is an integer; the second condition matters
    only for passband waveforms and depends on the pair, not just the
    distance.
    """
    l = validate_symbol(p, l)
    m = validate_symbol(p, m)
    if l == m:
        return False
    M = p.m
    d = m - l
    if (d * d) % M == 0:
        return True
    return (2 * (m * m - l * l)) % (2 * M) == M


@dataclass(frozen=True)
class CorrelationReport:
    """Summary of the waveform cross-correlation structure.

    matrix is the dense M x M correlation table (conjugate-symmetric,
    unit diagonal) and is only materialized for sf <= 8; above that only
    the maxima are retained.
    """

    max_abs: float
    max_abs_real: float
    argmax_pair: tuple[int, int]
    bound: float
    penalty_db: float
    matrix: np.ndarray | None = None


_MATRIX_SF_LIMIT = 8


def correlation_matrix(p: LoraParams) -> np.ndarray:
    """Dense M x M matrix of C(l,m); refuses sf > 8 (16M+ entries)."""
    if p.sf > _MATRIX_SF_LIMIT:
        raise ValueError(f"dense matrix limited to sf <= {_MATRIX_SF_LIMIT}, got sf={p.sf}")
    M = p.m
    l = np.arange(M)[:, None]
    m = np.arange(M)[None, :]
    d = m - l
    with np.errstate(divide="ignore", invalid="ignore"):
        num = np.exp(2j * np.pi * l * d / M) - np.exp(2j * np.pi * m * d / M)
        C = M * num / (2j * np.pi * (M - np.abs(d)) * np.abs(d))
    np.fill_diagonal(C, 1.0)
    return C


def correlation_report(p: LoraParams, include_matrix: bool | None = None) -> CorrelationReport:
    """Build a CorrelationReport; the matrix is included when sf <= 8
    unless include_matrix overrides."""
    mc = max_cross_correlation(p)
    if include_matrix is None:
        include_matrix = p.sf <= _MATRIX_SF_LIMIT
    matrix = correlation_matrix(p) if include_matrix else None
    return CorrelationReport(
        max_abs=mc.max_abs,
        max_abs_real=mc.max_abs_real,
        argmax_pair=mc.argmax_real,
        bound=correlation_bound(p),
        penalty_db=float(-10.0 * np.log10(1.0 - mc.max_abs_real)),
        matrix=matrix,
    )
