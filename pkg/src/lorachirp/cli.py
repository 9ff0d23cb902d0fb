"""Command-line interface tying synthesis, demodulation and analysis together.

Subcommands: modulate, demod, xcorr, spectrum, table, welch, mask-check.
All numeric CSV output uses '.' decimals with a header line naming the
columns and units; structured reports are JSON on stdout.  Exit codes:
0 success, 1 usage/runtime error, 2 mask-check failure verdict.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import analysis, correlation, iqfile, spectrum
from .params import LoraParams
from .receiver import demodulate_stream
from .waveform import modulate, payload_to_symbols


def example_mask_path() -> Path:
    """Path of the shipped illustrative G1 mask config."""
    return Path(resources.files("lorachirp") / "masks" / "etsi_g1_example.json")


def _params(args) -> LoraParams:
    return LoraParams(sf=args.sf, b=args.bw)


def _parse_symbols(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"bad --symbols list {text!r}: {exc}") from exc


def _write_csv(path, header_cols: list[str], rows, comments: list[str] = ()) -> None:
    with open(path, "w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(header_cols)
        writer.writerows(rows)


def _cmd_modulate(args) -> int:
    p = _params(args)
    if args.symbols is not None:
        symbols = _parse_symbols(args.symbols)
    else:
        symbols = payload_to_symbols(bytes.fromhex(args.payload_hex), args.sf)
    iq = modulate(p, symbols, oversample=args.oversample)
    iqfile.write_iq(iq, args.out, header_path=args.header,
                    center_freq=args.f0, description=f"sf={args.sf} bw={args.bw}")
    print(json.dumps({"num_symbols": len(symbols), "num_samples": len(iq),
                      "fs_hz": iq.fs, "out": str(args.out)}))
    return 0


def _cmd_demod(args) -> int:
    p = _params(args)
    iq = iqfile.read_iq(args.infile, header_path=args.header)
    symbols = demodulate_stream(iq, p)
    doc = {"sf": args.sf, "bw_hz": args.bw, "symbols": symbols}
    if args.out:
        Path(args.out).write_text(json.dumps(doc) + "\n")
    print(json.dumps(doc))
    return 0


def _cmd_xcorr(args) -> int:
    p = LoraParams(sf=args.sf, b=1.0)
    mc = correlation.max_cross_correlation(p)
    doc = {
        "sf": args.sf,
        "max_abs_re_c": mc.max_abs_real,
        "max_abs_c": mc.max_abs,
        "argmax_pair": list(mc.argmax_real),
        "bound": correlation.correlation_bound(p),
        "penalty_db": correlation.snr_penalty_db(p),
        "orthogonal_offsets": correlation.orthogonality_offsets(p),
    }
    if args.full_matrix:
        C = correlation.correlation_matrix(p)
        rows = [(l, m, repr(C[l, m].real), repr(C[l, m].imag))
                for l in range(p.m) for m in range(p.m)]
        _write_csv(args.full_matrix, ["l", "m", "re_c", "im_c"], rows)
        doc["matrix_csv"] = str(args.full_matrix)
    print(json.dumps(doc))
    return 0


def _compute_spectrum(args) -> spectrum.SpectrumResult:
    p = _params(args)
    if args.method == "fresnel":
        step = args.grid_step if args.grid_step else max(p.b / (64 * p.m), p.b / 8192)
        return spectrum.fresnel_spectrum(p, step=step)
    k = max(1, int(round(p.b / (p.m * args.grid_step)))) if args.grid_step else \
        max(1, 1024 // p.m)
    return spectrum.psd_via_dft(p, zero_pad_factor=k, n_per_symbol=32 * p.m)


def _cmd_spectrum(args) -> int:
    res = _compute_spectrum(args)
    scale = 10.0 ** (args.ps_dbm / 10.0) if args.ps_dbm is not None else 1.0
    unit = "mw" if args.ps_dbm is not None else "fraction"
    out_psd = args.out_psd or f"spectrum_sf{args.sf}_psd.csv"
    out_lines = args.out_lines or f"spectrum_sf{args.sf}_lines.csv"
    b = res.params.b
    _write_csv(out_psd, ["frequency_hz", f"psd_{unit}_per_hz", "psd_db_rel_b"],
               [(repr(float(f)), repr(float(g * scale)),
                 repr(float(10 * np.log10(max(g * b, 1e-30)))))
                for f, g in zip(res.grid, res.continuous)],
               comments=[f"method={args.method} sf={args.sf} bw_hz={args.bw}",
                         "psd_db_rel_b = 10*log10(Gc(f)*B) of the unit-power envelope"])
    _write_csv(out_lines, ["frequency_hz", f"power_{unit}"],
               [(repr(float(f)), repr(float(pw * scale))) for f, pw in res.lines],
               comments=[f"method={args.method} sf={args.sf} bw_hz={args.bw}"])
    print(json.dumps({"psd_csv": str(out_psd), "lines_csv": str(out_lines),
                      "grid_points": len(res.grid), "num_lines": len(res.lines)}))
    return 0


def _cmd_table(args) -> int:
    sf_list = [int(tok) for tok in args.sf_list.split(",") if tok.strip()]
    rows = analysis.reproduce_table(sf_list)
    if args.format == "json":
        text = json.dumps([row.__dict__ for row in rows], indent=2)
    else:
        lines = ["sf,eff_bps_per_hz,max_abs_re_c,b99_over_b,pd_fraction,delta_max_db"]
        lines += [f"{r.sf},{r.eff!r},{r.max_re_c:.6f},{r.b99_b:.4f},{r.pd!r},{r.delta_max_db:.3f}"
                  for r in rows]
        text = "\n".join(lines)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


def _cmd_welch(args) -> int:
    iq = iqfile.read_iq(args.infile, header_path=args.header)
    freqs, pxx = analysis.welch_psd(iq, segment_len=args.segment,
                                    overlap=args.overlap, window=args.window)
    out = args.out or "welch_psd.csv"
    _write_csv(out, ["frequency_hz", "psd_per_hz"],
               [(repr(float(f)), repr(float(v))) for f, v in zip(freqs, pxx)],
               comments=[f"segment={args.segment} overlap={args.overlap} window={args.window}"])
    print(json.dumps({"out": str(out), "grid_points": len(freqs)}))
    return 0


def _read_binned_csv(path) -> analysis.BinnedSpectrum:
    meta = {}
    centers, levels = [], []
    with open(path, newline="") as fh:
        data_lines = []
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
            else:
                data_lines.append(line)
    for row in csv.reader(data_lines):
        if not row or row[0] == "bin_center_hz":
            continue
        centers.append(float(row[0]))
        levels.append(float(row[1]))
    if "delta_f_hz" not in meta or "ps_dbm" not in meta:
        raise ValueError(f"binned CSV {path} is missing '# delta_f_hz=' / '# ps_dbm=' metadata")
    return analysis.BinnedSpectrum(bin_centers=np.array(centers),
                                   bin_power_dbm=np.array(levels),
                                   delta_f=float(meta["delta_f_hz"]),
                                   ps_dbm=float(meta["ps_dbm"]))


def _write_binned_csv(path, binned: analysis.BinnedSpectrum) -> None:
    _write_csv(path, ["bin_center_hz", "power_dbm"],
               [(repr(float(c)), repr(float(v)))
                for c, v in zip(binned.bin_centers, binned.bin_power_dbm)],
               comments=[f"delta_f_hz={binned.delta_f!r}", f"ps_dbm={binned.ps_dbm!r}"])


def _cmd_mask_check(args) -> int:
    mask = analysis.MaskSpec.from_json(args.mask)
    if not mask.segments and args.spectrum_csv is None and args.sf is None:
        raise ValueError("empty mask and no spectrum given")
    if args.spectrum_csv:
        binned = _read_binned_csv(args.spectrum_csv)
    else:
        if args.sf is None or args.bw is None or args.ps_dbm is None:
            raise ValueError("need either --spectrum-csv or all of --sf/--bw/--ps-dbm")
        rbws = {seg.rbw_hz for seg in mask.segments}
        if len(rbws) > 1:
            raise ValueError(f"mask {mask.label!r} mixes resolution bandwidths {sorted(rbws)}")
        rbw = rbws.pop() if rbws else 1000.0
        p = LoraParams(sf=args.sf, b=args.bw)
        res = spectrum.psd_via_dft(p, zero_pad_factor=4, n_per_symbol=32 * p.m)
        binned = analysis.binned_power(res, delta_f=rbw, ps_dbm=args.ps_dbm)
    if args.out_binned:
        _write_binned_csv(args.out_binned, binned)
    report = analysis.mask_check(binned, mask, f0=args.f0)
    doc = {
        "mask": mask.label,
        "f0_hz": args.f0,
        "passed": report.passed,
        "worst_margin_db": report.worst_margin_db,
        "segments": [{
            "f_start_hz": s.segment.f_start_hz,
            "f_stop_hz": s.segment.f_stop_hz,
            "limit_dbm": s.segment.limit_dbm,
            "n_bins": s.n_bins,
            "worst_margin_db": s.worst_margin_db,
            "worst_freq_hz": s.worst_freq_hz,
        } for s in report.segments],
    }
    print(json.dumps(doc, indent=2))
    return 0 if report.passed else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lorachirp",
                                 description="Chirp-modulation waveform, receiver and spectrum toolbox")
    sub = ap.add_subparsers(dest="command", required=True)

    mod = sub.add_parser("modulate", help="synthesize a symbol stream to an IQ file")
    mod.add_argument("--sf", type=int, required=True)
    mod.add_argument("--bw", type=float, required=True, help="frequency deviation B in Hz")
    group = mod.add_mutually_exclusive_group(required=True)
    group.add_argument("--symbols", help="comma-separated symbol values")
    group.add_argument("--payload-hex", help="hex payload mapped onto SF-bit symbols")
    mod.add_argument("--oversample", type=int, default=1)
    mod.add_argument("--f0", type=float, default=0.0, help="recorded center frequency")
    mod.add_argument("--out", required=True)
    mod.add_argument("--header", default=None, help="sidecar path (default: OUT.json)")
    mod.set_defaults(func=_cmd_modulate)

    dem = sub.add_parser("demod", help="demodulate an IQ file to symbols (JSON)")
    dem.add_argument("--sf", type=int, required=True)
    dem.add_argument("--bw", type=float, required=True)
    dem.add_argument("--in", dest="infile", required=True)
    dem.add_argument("--header", default=None)
    dem.add_argument("--out", default=None)
    dem.set_defaults(func=_cmd_demod)

    xc = sub.add_parser("xcorr", help="cross-correlation maxima, bound and SNR penalty")
    xc.add_argument("--sf", type=int, required=True)
    xc.add_argument("--full-matrix", default=None,
                    help="write the dense correlation matrix CSV (sf <= 8)")
    xc.set_defaults(func=_cmd_xcorr)

    sp = sub.add_parser("spectrum", help="continuous PSD and spectral lines to CSV")
    sp.add_argument("--sf", type=int, required=True)
    sp.add_argument("--bw", type=float, required=True)
    sp.add_argument("--method", choices=["fresnel", "dft"], default="fresnel")
    sp.add_argument("--grid-step", type=float, default=None, help="frequency step in Hz")
    sp.add_argument("--ps-dbm", type=float, default=None,
                    help="scale outputs to this transmit power (mW units)")
    sp.add_argument("--out-psd", default=None)
    sp.add_argument("--out-lines", default=None)
    sp.set_defaults(func=_cmd_spectrum)

    tb = sub.add_parser("table", help="recompute the per-SF metrics table")
    tb.add_argument("--sf-list", default="3,5,7,10,12")
    tb.add_argument("--format", choices=["csv", "json"], default="csv")
    tb.add_argument("--out", default=None)
    tb.set_defaults(func=_cmd_table)

    we = sub.add_parser("welch", help="Welch PSD estimate of an IQ file")
    we.add_argument("--in", dest="infile", required=True)
    we.add_argument("--header", default=None)
    we.add_argument("--segment", type=int, required=True)
    we.add_argument("--overlap", type=float, default=0.5)
    we.add_argument("--window", default="hann")
    we.add_argument("--out", default=None)
    we.set_defaults(func=_cmd_welch)

    mk = sub.add_parser("mask-check", help="check a binned spectrum against an emission mask")
    mk.add_argument("--mask", required=True, help="mask JSON config")
    mk.add_argument("--f0", type=float, required=True, help="carrier frequency in Hz")
    mk.add_argument("--spectrum-csv", default=None, help="precomputed binned spectrum CSV")
    mk.add_argument("--sf", type=int, default=None)
    mk.add_argument("--bw", type=float, default=None)
    mk.add_argument("--ps-dbm", type=float, default=None)
    mk.add_argument("--out-binned", default=None, help="save the computed binned CSV")
    mk.set_defaults(func=_cmd_mask_check)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
