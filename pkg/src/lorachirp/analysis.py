"""Derived metrics, occupied bandwidth, emission-mask checks and Welch
estimation.

Everything spectral here rides on the spectrum module; absolute power
enters only as a dB offset applied to the unit-power envelope spectra
(transmit power Ps in dBm shifts every level by ps_dbm).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import signal as _signal

from .correlation import max_cross_correlation
from .params import IqBuffer, LoraParams
from .spectrum import SpectrumResult, psd_via_dft

_TINY = 1e-30


def bit_rate(p: LoraParams) -> float:
    """Bit rate R_b = B * SF / 2^SF in bit/s."""
    return p.b * p.sf / p.m


def chip_rate(p: LoraParams) -> float:
    """Chip rate R_c = M/Ts = B in Hz."""
    return p.b


def spectral_efficiency(sf: int) -> float:
    """Modulation spectral efficiency sf / 2^sf in bit/s/Hz."""
    if not isinstance(sf, (int, np.integer)) or sf < 1:
        raise ValueError(f"sf must be a positive integer, got {sf!r}")
    return sf / (1 << sf)


def _cumulative_trapezoid(grid: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Cumulative trapezoid integral of values over grid, starting at 0."""
    seg = 0.5 * (values[1:] + values[:-1]) * np.diff(grid)
    return np.concatenate([[0.0], np.cumsum(seg)])


def _captured_power(spec: SpectrumResult, width: float,
                    cum: np.ndarray | None = None) -> float:
    """Continuous power over [-width/2, width/2] plus lines inside."""
    if cum is None:
        cum = _cumulative_trapezoid(spec.grid, spec.continuous)
    half = width / 2.0
    cont = (np.interp(half, spec.grid, cum) - np.interp(-half, spec.grid, cum))
    lines = spec.line_powers[np.abs(spec.line_frequencies) <= half * (1 + 1e-12)].sum()
    return float(cont + lines)


def _default_dft_spectrum(p: LoraParams) -> SpectrumResult:
    # frequency step at most B/512 so bandwidth searches resolve small SF
    k = max(1, 512 // p.m)
    return psd_via_dft(p, zero_pad_factor=k, n_per_symbol=16 * p.m)


def occupied_bandwidth(p: LoraParams, fraction: float,
                       spectrum: SpectrumResult | None = None,
                       tol: float | None = None) -> float:
    """Smallest two-sided width W (Hz) capturing `fraction` of the signal
    power: continuous PSD integrated over [-W/2, W/2] plus the discrete
    lines inside.  Found by bisection; tol defaults to 1e-3 * B.

    Total signal power is 1 (unit-power envelope).  If the requested
    fraction exceeds what the computed spectrum span contains, the error
    reports the captured fraction.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    if spectrum is None:
        spectrum = _default_dft_spectrum(p)
    if tol is None:
        tol = 1e-3 * p.b
    cum = _cumulative_trapezoid(spectrum.grid, spectrum.continuous)
    span = 2.0 * float(spectrum.grid[-1])
    reachable = _captured_power(spectrum, span, cum)
    if fraction > reachable:
        raise ValueError(
            f"fraction {fraction} unreachable: computed span |f| <= "
            f"{spectrum.grid[-1]:.6g} Hz captures only {reachable:.6f}")
    lo, hi = 0.0, span
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _captured_power(spectrum, mid, cum) >= fraction:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class TableRow:
    """Per-spreading-factor metrics record.

    eff is sf/2^sf bit/s/Hz, b99_b the 99%-power bandwidth as a multiple
    of B, pd the discrete-spectrum power fraction (exactly 2^-sf) and
    delta_max_db the worst-case SNR penalty.
    """

    sf: int
    eff: float
    max_re_c: float
    b99_b: float
    pd: float
    delta_max_db: float


def reproduce_table(sf_list, fraction: float = 0.99) -> list[TableRow]:
    """Compute the summary metrics table from first principles.

    Every column is recomputed (correlation scan, DFT-path bandwidth
    search, analytic line power); nothing is tabulated.
    """
    rows = []
    for sf in sf_list:
        if not 3 <= sf <= 12:
            raise ValueError(f"sf values must lie in [3, 12], got {sf}")
        p = LoraParams(sf=int(sf), b=1.0)
        mc = max_cross_correlation(p)
        b99 = occupied_bandwidth(p, fraction)
        rows.append(TableRow(
            sf=int(sf),
            eff=spectral_efficiency(int(sf)),
            max_re_c=mc.max_abs_real,
            b99_b=b99 / p.b,
            pd=1.0 / p.m,
            delta_max_db=float(-10.0 * np.log10(1.0 - mc.max_abs_real)),
        ))
    return rows


@dataclass(frozen=True)
class BinnedSpectrum:
    """Spectrum integrated into bins of width delta_f at transmit power ps_dbm.

    Bin k covers the half-open interval [center - delta_f/2,
    center + delta_f/2); levels are dBm per resolution bandwidth delta_f.
    """

    bin_centers: np.ndarray
    bin_power_dbm: np.ndarray
    delta_f: float
    ps_dbm: float

    @property
    def bin_power_mw(self) -> np.ndarray:
        return 10.0 ** (self.bin_power_dbm / 10.0)


def binned_power(spec: SpectrumResult, delta_f: float, ps_dbm: float,
                 origin: float = 0.0) -> BinnedSpectrum:
    """Integrate continuous PSD plus lines into bins of width delta_f.

    Bin centers sit at origin + k*delta_f for every bin fully inside the
    spectrum span.  Bins are half-open, so a line falling exactly on an
    edge is counted once, in the upper bin.
    """
    if delta_f <= 0:
        raise ValueError(f"delta_f must be positive, got {delta_f}")
    grid = spec.grid
    k_lo = int(np.ceil((grid[0] + delta_f / 2 - origin) / delta_f - 1e-9))
    k_hi = int(np.floor((grid[-1] - delta_f / 2 - origin) / delta_f + 1e-9))
    if k_hi < k_lo:
        raise ValueError("spectrum span too narrow for a single bin")
    centers = origin + np.arange(k_lo, k_hi + 1) * delta_f
    cum = _cumulative_trapezoid(grid, spec.continuous)
    lo = np.interp(centers - delta_f / 2, grid, cum)
    hi = np.interp(centers + delta_f / 2, grid, cum)
    frac = hi - lo
    # assign each line to its half-open bin
    idx = np.floor((spec.line_frequencies - origin) / delta_f + 0.5).astype(int) - k_lo
    ok = (idx >= 0) & (idx < len(centers))
    np.add.at(frac, idx[ok], spec.line_powers[ok])
    level_dbm = 10.0 * np.log10(np.maximum(frac, _TINY)) + ps_dbm
    return BinnedSpectrum(bin_centers=centers, bin_power_dbm=level_dbm,
                          delta_f=delta_f, ps_dbm=ps_dbm)


@dataclass(frozen=True)
class MaskSegment:
    """One piecewise emission limit: [f_start, f_stop) at limit_dbm per rbw_hz."""

    f_start_hz: float
    f_stop_hz: float
    limit_dbm: float
    rbw_hz: float

    def __post_init__(self):
        if self.f_stop_hz <= self.f_start_hz:
            raise ValueError(f"empty mask segment [{self.f_start_hz}, {self.f_stop_hz})")
        if self.rbw_hz <= 0:
            raise ValueError(f"rbw_hz must be positive, got {self.rbw_hz}")


@dataclass(frozen=True)
class MaskSpec:
    """Piecewise regulatory emission mask over absolute frequencies."""

    label: str
    segments: tuple[MaskSegment, ...] = field(default_factory=tuple)

    def __post_init__(self):
        segs = tuple(sorted(self.segments, key=lambda s: s.f_start_hz))
        for a, b in zip(segs, segs[1:]):
            if b.f_start_hz < a.f_stop_hz:
                raise ValueError(
                    f"overlapping mask segments at {b.f_start_hz} Hz in {self.label!r}")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def from_json(cls, path) -> "MaskSpec":
        doc = json.loads(Path(path).read_text())
        segs = tuple(MaskSegment(float(s["f_start_hz"]), float(s["f_stop_hz"]),
                                 float(s["limit_dbm"]), float(s["rbw_hz"]))
                     for s in doc.get("segments", []))
        return cls(label=str(doc.get("label", "")), segments=segs)

    def to_json(self, path) -> None:
        doc = {"label": self.label,
               "segments": [{"f_start_hz": s.f_start_hz, "f_stop_hz": s.f_stop_hz,
                             "limit_dbm": s.limit_dbm, "rbw_hz": s.rbw_hz}
                            for s in self.segments]}
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")

    def tightened(self, delta_db: float) -> "MaskSpec":
        """Copy of the mask with every limit lowered by delta_db."""
        return MaskSpec(label=f"{self.label} (tightened {delta_db} dB)",
                        segments=tuple(MaskSegment(s.f_start_hz, s.f_stop_hz,
                                                   s.limit_dbm - delta_db, s.rbw_hz)
                                       for s in self.segments))


@dataclass(frozen=True)
class SegmentResult:
    """Worst margin (limit - level, dB; negative means violation) per segment."""

    segment: MaskSegment
    n_bins: int
    worst_margin_db: float | None
    worst_freq_hz: float | None


@dataclass(frozen=True)
class MaskReport:
    passed: bool
    segments: tuple[SegmentResult, ...]

    @property
    def worst_margin_db(self) -> float | None:
        margins = [s.worst_margin_db for s in self.segments if s.worst_margin_db is not None]
        return min(margins) if margins else None


def mask_check(binned: BinnedSpectrum, mask: MaskSpec, f0: float) -> MaskReport:
    """Compare a binned spectrum, shifted to carrier f0, against a mask.

    Every bin whose center falls inside a segment is compared with that
    segment's limit.  The binned resolution bandwidth must equal the mask
    rbw (no implicit resampling).  Segments not covered by any bin are
    reported with n_bins = 0 and do not affect the verdict; an empty mask
    passes.
    """
    f_abs = binned.bin_centers + f0
    results = []
    passed = True
    for seg in mask.segments:
        if abs(seg.rbw_hz - binned.delta_f) > 1e-6 * seg.rbw_hz:
            raise ValueError(
                f"mask rbw {seg.rbw_hz} Hz != binned resolution {binned.delta_f} Hz; "
                "recompute the binned spectrum at the mask rbw")
        sel = (f_abs >= seg.f_start_hz) & (f_abs < seg.f_stop_hz)
        if not np.any(sel):
            results.append(SegmentResult(seg, 0, None, None))
            continue
        margins = seg.limit_dbm - binned.bin_power_dbm[sel]
        i = int(np.argmin(margins))
        worst = float(margins[i])
        results.append(SegmentResult(seg, int(sel.sum()), worst,
                                     float(f_abs[sel][i])))
        if worst < 0:
            passed = False
    return MaskReport(passed=passed, segments=tuple(results))


_WINDOWS = {"hann": "hann", "hamming": "hamming", "blackman": "blackman",
            "rect": "boxcar", "boxcar": "boxcar"}


def welch_psd(iq: IqBuffer, segment_len: int, overlap: float = 0.5,
              window: str = "hann") -> tuple[np.ndarray, np.ndarray]:
    """Welch PSD estimate of a complex baseband buffer.

    Averaged windowed periodograms over segments of segment_len samples
    with fractional overlap; returns a two-sided ascending frequency grid
    and a density rescaled so that its trapezoid integral equals the
    buffer's mean power exactly.
    """
    if segment_len < 2 or segment_len > len(iq):
        raise ValueError(
            f"segment_len must be in [2, {len(iq)}], got {segment_len}")
    if not 0.0 <= overlap < 1.0:
        raise ValueError(f"overlap must be in [0, 1), got {overlap}")
    if window not in _WINDOWS:
        raise ValueError(f"window must be one of {sorted(_WINDOWS)}, got {window!r}")
    noverlap = int(round(overlap * segment_len))
    if noverlap >= segment_len:
        noverlap = segment_len - 1
    freqs, pxx = _signal.welch(iq.samples, fs=iq.fs, window=_WINDOWS[window],
                               nperseg=segment_len, noverlap=noverlap,
                               detrend=False, return_onesided=False,
                               scaling="density")
    freqs = np.fft.fftshift(freqs)
    pxx = np.fft.fftshift(pxx).real
    integral = np.trapezoid(pxx, freqs)
    if integral > 0:
        pxx = pxx * (iq.mean_power / integral)
    return freqs, pxx


def bin_estimate(freqs: np.ndarray, psd: np.ndarray, centers: np.ndarray,
                 delta_f: float, ps_dbm: float = 0.0) -> np.ndarray:
    """Integrate a PSD estimate into the same bins as binned_power.

    Returns levels in dBm per delta_f at transmit power ps_dbm, for
    comparing estimates against analytic binned spectra.
    """
    cum = _cumulative_trapezoid(freqs, psd)
    lo = np.interp(centers - delta_f / 2, freqs, cum)
    hi = np.interp(centers + delta_f / 2, freqs, cum)
    return 10.0 * np.log10(np.maximum(hi - lo, _TINY)) + ps_dbm
