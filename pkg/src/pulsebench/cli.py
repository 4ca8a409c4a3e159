"""Command-line entry point wiring the workbench into file-based experiments.

Subcommands: synth | extract | ipi | quantize | attack | defend | metrics.
Exit codes: 0 success, 2 I/O or argument error, 3 domain error (degenerate
trace, no peaks, ...).  All randomness flows from the explicit --seed flag;
identical inputs and seed give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import fileio, pipeline, quantize
from .authsim import UserTemplate, spoof_eval
from .defense import (
    DEFAULT_AMPLITUDE,
    DEFAULT_CHANNEL_WEIGHTS,
    DEFAULT_FREQ_HZ,
    inject,
    make_waveform,
    verify_hiding,
)
from .errors import PulsebenchError
from .metrics import PairedSeries, ScoreSet, bhr, far_frr_eer, mae, pearson, rmse
from .pulse import IpiSequence
from .signals import mean_rgb, preprocess_trace
from .synth import PulseModel, SceneConfig, gen_frames

EXIT_OK = 0
EXIT_IO = 2
EXIT_DOMAIN = 3


def _emit_json(obj: dict, path: str | None) -> None:
    if path:
        fileio.write_json(path, obj)
    else:
        print(json.dumps(obj, indent=2))


def _metrics_report(
    method=None, mae_v=None, rmse_v=None, pc=None, bhr_v=None,
    eer=None, far_at_threshold=None, n=None,
) -> dict:
    return {
        "schema": 1,
        "method": method,
        "mae": mae_v,
        "rmse": rmse_v,
        "pc": pc,
        "bhr": bhr_v,
        "eer": eer,
        "far_at_threshold": far_at_threshold,
        "n": n,
    }


def _parse_overrides(pairs: list[str]) -> tuple[dict, dict]:
    """Split KEY=VALUE overrides between the pulse model and the scene."""
    model_fields = {f.name for f in dataclasses.fields(PulseModel)}
    scene_fields = {f.name for f in dataclasses.fields(SceneConfig)}
    model_kw: dict = {}
    scene_kw: dict = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"expected KEY=VALUE, got {pair!r}")
        key, raw = pair.split("=", 1)
        if "," in raw:
            value: object = tuple(float(v) for v in raw.split(","))
        else:
            try:
                value = int(raw)
            except ValueError:
                value = float(raw)
        if key in model_fields:
            model_kw[key] = value
        elif key in scene_fields:
            scene_kw[key] = value
        else:
            raise ValueError(f"unknown config key {key!r}")
    return model_kw, scene_kw


def cmd_synth(args) -> int:
    model_kw, scene_kw = _parse_overrides(args.set or [])
    model_kw.setdefault("seed", args.seed)
    model = PulseModel(**model_kw)
    scene = SceneConfig(**{"width": args.width, "height": args.height, **scene_kw})
    frames, mask, truth, truth_ipi = gen_frames(model, scene)
    fileio.write_frames(args.out_video, frames)
    fileio.write_mask(args.out_mask, mask)
    fileio.write_signal_csv(args.out_truth, truth)
    fileio.write_intervals_csv(args.out_ipi, truth_ipi.intervals)
    return EXIT_OK


def cmd_extract(args) -> int:
    frames = fileio.read_frames(args.video)
    mask = fileio.read_mask(args.mask)
    trace = mean_rgb(frames, mask)
    if args.trace:
        fileio.write_trace_csv(args.trace, trace)
    cfg = pipeline.PreprocessConfig(args.low_hz, args.high_hz, args.detrend_lambda)
    signal = pipeline.extract_pulse(trace, args.method, cfg, args.window_len)
    fileio.write_signal_csv(args.out, signal)
    report = {
        "schema": 1,
        "method": args.method,
        "n": len(signal),
        "fps": signal.sample_rate,
        "hr_bpm": pipeline.safe_heart_rate(signal),
    }
    _emit_json(report, args.report)
    return EXIT_OK


def cmd_ipi(args) -> int:
    signal = fileio.read_signal_csv(args.signal, args.fps)
    cfg = pipeline.PeakTimingConfig(args.prominence, args.timing_rate or None)
    peaks, ipi = pipeline.recover_ipi(signal, cfg)
    fileio.write_intervals_csv(args.out_ipi, ipi.intervals)
    if args.out_peaks:
        fileio.write_peaks_csv(args.out_peaks, peaks.indices)
    gray_lines, trend_bits = pipeline.bits_from_ipi(ipi)
    if args.out_gray:
        fileio.write_bitlines(args.out_gray, gray_lines)
    if args.out_trend:
        fileio.write_bitlines(args.out_trend, [trend_bits])
    return EXIT_OK


def cmd_quantize(args) -> int:
    ipi = IpiSequence(fileio.read_intervals_csv(args.ipi))
    if args.codec in ("gray", "both"):
        if not args.out_gray:
            raise ValueError("--out-gray required for the gray codec")
        words = quantize.gray_encode(quantize.normalize_ipi(ipi))
        fileio.write_bitlines(args.out_gray, [w.bits for w in words])
    if args.codec in ("trend", "both"):
        if not args.out_trend:
            raise ValueError("--out-trend required for the trend codec")
        code = quantize.trend_encode(ipi, quantize.fit_bins(ipi))
        fileio.write_bitlines(args.out_trend, [code.bits])
    return EXIT_OK


def cmd_attack(args) -> int:
    frames = fileio.read_frames(args.video)
    mask = fileio.read_mask(args.mask)
    template = UserTemplate.from_dict(fileio.read_json(args.template))
    trace = mean_rgb(frames, mask)
    signal = pipeline.extract_pulse(trace, args.method)
    cycles = pipeline.cycles_from_pulse(signal, len(template.template))
    victim = spoof_eval(template, cycles, "victim_rppg")
    mean_attack = spoof_eval(template, cycles, "mean_rppg")
    report = {
        "schema": 1,
        "method": args.method,
        "user_id": template.user_id,
        "n_cycles": len(cycles),
        "victim_rppg": victim.to_dict(),
        "mean_rppg": mean_attack.to_dict(),
    }
    _emit_json(report, args.out)
    return EXIT_OK


def cmd_defend(args) -> int:
    frames = fileio.read_frames(args.video)
    mask = fileio.read_mask(args.mask)
    custom = None
    if args.wave == "custom":
        if not args.custom_wave:
            raise ValueError("--custom-wave required for --wave custom")
        custom = fileio.read_signal_csv(args.custom_wave, 1.0).values
    waveform = make_waveform(
        args.wave, args.freq, frames.fps, frames.n_frames, args.amp, custom
    )
    weights = tuple(float(w) for w in args.weights.split(","))
    if len(weights) != 3:
        raise ValueError("--weights needs three comma-separated values")
    protected = inject(frames, mask, waveform, weights)
    fileio.write_frames(args.out, protected)
    if args.truth:
        truth = fileio.read_signal_csv(args.truth, frames.fps)
    else:
        # Without ground truth, audit hiding against what the original video
        # leaked: its own chrominance extraction.
        from .extract import chrom

        truth = chrom(preprocess_trace(mean_rgb(frames, mask)))
    report = verify_hiding(frames, protected, mask, truth, waveform)
    _emit_json(report.to_dict(), args.report)
    return EXIT_OK


def cmd_metrics(args) -> int:
    if args.kind == "bits":
        ref = "".join(fileio.read_bitlines(args.ref))
        cand = "".join(fileio.read_bitlines(args.cand))
        report = _metrics_report(
            method=args.label, bhr_v=bhr(ref, cand), n=min(len(ref), len(cand))
        )
    elif args.kind == "scores":
        genuine = fileio.read_intervals_csv(args.ref)
        impostor = fileio.read_intervals_csv(args.cand)
        result = far_frr_eer(ScoreSet(genuine, impostor))
        far_at = next(f for t, f, _ in result.roc if t == result.threshold)
        report = _metrics_report(
            method=args.label,
            eer=result.eer,
            far_at_threshold=far_at,
            n=len(genuine) + len(impostor),
        )
    else:
        if args.kind == "signal":
            ref = fileio.read_signal_csv(args.ref, 1.0).values
            cand = fileio.read_signal_csv(args.cand, 1.0).values
        else:
            ref = fileio.read_intervals_csv(args.ref)
            cand = fileio.read_intervals_csv(args.cand)
        pair = PairedSeries(ref, cand)
        try:
            pc = pearson(pair)
        except PulsebenchError:
            pc = None
        report = _metrics_report(
            method=args.label, mae_v=mae(pair), rmse_v=rmse(pair), pc=pc, n=len(pair)
        )
    _emit_json(report, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulsebench",
        description="Pulse-signal leakage workbench: synthesize, extract, "
        "quantize, attack, defend, measure.",
    )
    parser.add_argument("--seed", type=int, default=42, help="global RNG seed")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic scene")
    p.add_argument("--out-video", required=True)
    p.add_argument("--out-mask", required=True)
    p.add_argument("--out-truth", required=True)
    p.add_argument("--out-ipi", required=True)
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)
    p.add_argument(
        "--set", action="append", metavar="KEY=VALUE",
        help="pulse-model or scene override, e.g. heart_rate_bpm=66",
    )
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="extract a pulse signal from video")
    p.add_argument("--video", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--method", choices=pipeline.METHODS, default="chrom")
    p.add_argument("--out", required=True, help="pulse signal CSV")
    p.add_argument("--trace", help="also write the raw RGB trace CSV")
    p.add_argument("--report", help="write the JSON report here (default stdout)")
    p.add_argument("--low-hz", type=float, default=0.65)
    p.add_argument("--high-hz", type=float, default=4.0)
    p.add_argument("--detrend-lambda", type=float, default=300.0)
    p.add_argument("--window-len", type=int, help="pos window length in frames")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("ipi", help="recover intervals and bit codes from a signal")
    p.add_argument("--signal", required=True)
    p.add_argument("--fps", type=float, help="override the rate from the t column")
    p.add_argument("--out-ipi", required=True)
    p.add_argument("--out-peaks")
    p.add_argument("--out-gray")
    p.add_argument("--out-trend")
    p.add_argument("--prominence", type=float, default=pipeline.PeakTimingConfig().prominence_fraction)
    p.add_argument("--timing-rate", type=float, default=240.0,
                   help="peak-timing refinement rate in Hz (0 disables)")
    p.set_defaults(func=cmd_ipi)

    p = sub.add_parser("quantize", help="encode an interval CSV into bits")
    p.add_argument("--ipi", required=True)
    p.add_argument("--codec", choices=("gray", "trend", "both"), default="both")
    p.add_argument("--out-gray")
    p.add_argument("--out-trend")
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("attack", help="replay video-extracted cycles at a template")
    p.add_argument("--video", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--template", required=True, help="enrolled template JSON")
    p.add_argument("--method", choices=pipeline.METHODS, default="chrom")
    p.add_argument("--out", help="report JSON path (default stdout)")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("defend", help="hide the pulse by waveform injection")
    p.add_argument("--video", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--wave", choices=("sine", "custom"), default="sine")
    p.add_argument("--freq", type=float, default=DEFAULT_FREQ_HZ)
    p.add_argument("--amp", type=float, default=DEFAULT_AMPLITUDE)
    p.add_argument("--weights", default=",".join(str(w) for w in DEFAULT_CHANNEL_WEIGHTS),
                   help="per-channel injection weights r,g,b")
    p.add_argument("--custom-wave", help="signal CSV for --wave custom")
    p.add_argument("--truth", help="truth pulse CSV for the hiding report")
    p.add_argument("--out", required=True, help="protected video FRV1 path")
    p.add_argument("--report", help="hiding report JSON path (default stdout)")
    p.set_defaults(func=cmd_defend)

    p = sub.add_parser("metrics", help="compare two series, bit files, or scores")
    p.add_argument("--ref", required=True)
    p.add_argument("--cand", required=True)
    p.add_argument("--kind", choices=("signal", "ipi", "bits", "scores"), default="signal")
    p.add_argument("--label", help="method label recorded in the report")
    p.add_argument("--out", help="report JSON path (default stdout)")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PulsebenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
