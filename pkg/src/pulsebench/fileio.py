"""File formats: frame tensors, masks, CSV series, bit strings, JSON reports.

Binary layouts (little-endian):

* frame tensor ``FRV1``: magic ``FRV1``, u32 width, u32 height, u32
  frame_count, f64 fps, then frame_count x height x width x 3 bytes of
  interleaved RGB.
* mask ``MSK1``: magic ``MSK1``, u32 width, u32 height, u32 mask_count
  (1 = static), then 0x00/0x01 bytes per pixel.

CSV layouts: trace ``frame,r,g,b``; signal ``t,value`` with t in seconds;
peaks ``index``; intervals ``seconds``; cycles one row per cycle.

Bit strings are ASCII '0'/'1', one codeword (or one trend sequence) per line.

All writers are atomic: temp file in the target directory, then rename.
"""

from __future__ import annotations

import json
import os
import struct
import tempfile

import numpy as np

from .signals import FrameSequence, RoiMask, RgbTrace, SampledSignal

_FRV1_MAGIC = b"FRV1"
_MSK1_MAGIC = b"MSK1"
_FRV1_HEADER = struct.Struct("<4sIIId")
_MSK1_HEADER = struct.Struct("<4sIII")


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_frames(path: str, frames: FrameSequence) -> None:
    header = _FRV1_HEADER.pack(
        _FRV1_MAGIC, frames.width, frames.height, frames.n_frames, frames.fps
    )
    _atomic_write(path, header + frames.frames.tobytes())


def read_frames(path: str) -> FrameSequence:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _FRV1_HEADER.size or raw[:4] != _FRV1_MAGIC:
        raise ValueError(f"{path}: not a FRV1 frame tensor file")
    _, width, height, count, fps = _FRV1_HEADER.unpack_from(raw)
    expected = count * height * width * 3
    body = raw[_FRV1_HEADER.size :]
    if len(body) != expected:
        raise ValueError(f"{path}: expected {expected} pixel bytes, got {len(body)}")
    frames = np.frombuffer(body, dtype=np.uint8).reshape(count, height, width, 3)
    return FrameSequence(frames.copy(), fps)


def write_mask(path: str, mask: RoiMask) -> None:
    count = mask.mask.shape[0] if mask.per_frame else 1
    header = _MSK1_HEADER.pack(_MSK1_MAGIC, mask.width, mask.height, count)
    _atomic_write(path, header + mask.mask.tobytes())


def read_mask(path: str) -> RoiMask:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _MSK1_HEADER.size or raw[:4] != _MSK1_MAGIC:
        raise ValueError(f"{path}: not a MSK1 mask file")
    _, width, height, count, = _MSK1_HEADER.unpack_from(raw)
    body = raw[_MSK1_HEADER.size :]
    if len(body) != count * height * width:
        raise ValueError(f"{path}: mask payload size mismatch")
    values = np.frombuffer(body, dtype=np.uint8)
    if count == 1:
        return RoiMask(values.reshape(height, width).copy())
    return RoiMask(values.reshape(count, height, width).copy())


def write_trace_csv(path: str, trace: RgbTrace) -> None:
    lines = ["frame,r,g,b"]
    for i, (r, g, b) in enumerate(trace.samples):
        lines.append(f"{i},{float(r)!r},{float(g)!r},{float(b)!r}")
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def read_trace_csv(path: str, fps: float) -> RgbTrace:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return RgbTrace(data[:, 1:4], fps)


def write_signal_csv(path: str, signal: SampledSignal) -> None:
    lines = ["t,value"]
    for t, v in zip(signal.times, signal.values):
        lines.append(f"{float(t)!r},{float(v)!r}")
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def read_signal_csv(path: str, sample_rate: float | None = None) -> SampledSignal:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if sample_rate is None:
        t = data[:, 0]
        if len(t) < 2 or t[1] <= t[0]:
            raise ValueError(f"{path}: cannot infer sample rate from t column")
        sample_rate = 1.0 / (t[1] - t[0])
    return SampledSignal(data[:, 1], sample_rate)


def write_peaks_csv(path: str, indices: np.ndarray) -> None:
    lines = ["index"] + [str(int(i)) for i in indices]
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def write_intervals_csv(path: str, intervals: np.ndarray) -> None:
    lines = ["seconds"] + [repr(float(v)) for v in intervals]
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def read_intervals_csv(path: str) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=1)


def write_cycles_csv(path: str, cycles: np.ndarray) -> None:
    lines = [",".join(repr(float(v)) for v in row) for row in np.atleast_2d(cycles)]
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def read_cycles_csv(path: str) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


def write_bitlines(path: str, lines: list[str]) -> None:
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def read_bitlines(path: str) -> list[str]:
    with open(path, "r") as fh:
        return [line.strip() for line in fh if line.strip()]


def write_json(path: str, obj: dict) -> None:
    _atomic_write(path, (json.dumps(obj, indent=2) + "\n").encode())


def read_json(path: str) -> dict:
    with open(path, "r") as fh:
        return json.load(fh)
