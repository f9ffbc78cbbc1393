"""Frame loading (binary PGM/PPM), the Laplacian blur score, and
salient-mask mixing.

Luminance for color frames is Rec. 601 luma, rounded to the nearest
integer.  The blur score is the population variance of the 4-neighbour
Laplacian response over interior pixels only (no padding).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BadFrameError, DimensionMismatchError, FrameTooSmallError

MIN_SIDE = 3


@dataclass(frozen=True)
class Frame:
    """One grayscale (optionally color) frame, row-major, 8-bit."""

    index: int
    width: int
    height: int
    gray: bytes
    color: tuple[bytes, bytes, bytes] | None = None

    def __post_init__(self):
        if self.width < MIN_SIDE or self.height < MIN_SIDE:
            raise FrameTooSmallError(
                "frame sides must be at least 3 pixels",
                width=self.width,
                height=self.height,
            )
        if len(self.gray) != self.width * self.height:
            raise ValueError("gray plane length != width*height")
        if self.color is not None:
            for plane in self.color:
                if len(plane) != self.width * self.height:
                    raise ValueError("color plane length != width*height")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], index: int = 0) -> "Frame":
        height = len(rows)
        width = len(rows[0]) if rows else 0
        flat = bytes(v for row in rows for v in row)
        return cls(index=index, width=width, height=height, gray=flat)

    def gray_array(self) -> np.ndarray:
        return np.frombuffer(self.gray, dtype=np.uint8).reshape(self.height, self.width)

    def color_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Color planes; a grayscale frame acts as its own three planes."""
        planes = self.color if self.color is not None else (self.gray,) * 3
        return tuple(
            np.frombuffer(p, dtype=np.uint8).reshape(self.height, self.width)
            for p in planes
        )


def laplacian_variance(frame: Frame) -> float:
    """Population variance of the interior 4-neighbour Laplacian response."""
    if frame.width < MIN_SIDE or frame.height < MIN_SIDE:
        raise FrameTooSmallError(
            "need a 3x3 interior to convolve", width=frame.width, height=frame.height
        )
    a = frame.gray_array().astype(np.float64)
    response = (
        a[:-2, 1:-1] + a[2:, 1:-1] + a[1:-1, :-2] + a[1:-1, 2:] - 4.0 * a[1:-1, 1:-1]
    )
    return float(response.var())


def apply_salient_mask(frame: Frame, mask: Sequence[int]) -> Frame:
    """Keep pixels where mask==1, zero the rest; always yields a color frame."""
    if len(mask) != frame.width * frame.height:
        raise DimensionMismatchError(
            "mask length != width*height",
            expected=frame.width * frame.height,
            got=len(mask),
        )
    keep = np.asarray(mask, dtype=np.uint8).reshape(frame.height, frame.width)
    if not np.isin(keep, (0, 1)).all():
        raise DimensionMismatchError("mask values must be 0 or 1")
    planes = tuple((p * keep).astype(np.uint8).tobytes() for p in frame.color_arrays())
    gray = (frame.gray_array() * keep).astype(np.uint8).tobytes()
    return Frame(
        index=frame.index,
        width=frame.width,
        height=frame.height,
        gray=gray,
        color=planes,
    )


# --- PNM input/output ------------------------------------------------------

def _parse_pnm(data: bytes, path: Path) -> tuple[bytes, int, int, bytes]:
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise BadFrameError("not a binary PGM/PPM file", path=str(path))
    fields: list[int] = []
    i = 2
    while len(fields) < 3:
        if i >= len(data):
            raise BadFrameError("truncated header", path=str(path))
        c = data[i : i + 1]
        if c.isspace():
            i += 1
        elif c == b"#":
            while i < len(data) and data[i : i + 1] != b"\n":
                i += 1
        elif c.isdigit():
            j = i
            while j < len(data) and data[j : j + 1].isdigit():
                j += 1
            fields.append(int(data[i:j]))
            i = j
        else:
            raise BadFrameError("malformed header", path=str(path))
    if i >= len(data) or not data[i : i + 1].isspace():
        raise BadFrameError("missing raster separator", path=str(path))
    i += 1
    width, height, maxval = fields
    if maxval != 255:
        raise BadFrameError("only 8-bit frames supported", path=str(path), maxval=maxval)
    return magic, width, height, data[i:]


def load_frame(path: str | Path, index: int = 0) -> Frame:
    path = Path(path)
    magic, width, height, raster = _parse_pnm(path.read_bytes(), path)
    size = width * height
    if magic == b"P5":
        if len(raster) < size:
            raise BadFrameError("short raster", path=str(path))
        return Frame(index=index, width=width, height=height, gray=raster[:size])
    if len(raster) < 3 * size:
        raise BadFrameError("short raster", path=str(path))
    rgb = np.frombuffer(raster[: 3 * size], dtype=np.uint8).reshape(size, 3)
    luma = np.rint(
        0.299 * rgb[:, 0] + 0.587 * rgb[:, 1] + 0.114 * rgb[:, 2]
    ).clip(0, 255).astype(np.uint8)
    return Frame(
        index=index,
        width=width,
        height=height,
        gray=luma.tobytes(),
        color=(
            rgb[:, 0].tobytes(),
            rgb[:, 1].tobytes(),
            rgb[:, 2].tobytes(),
        ),
    )


def save_pgm(path: str | Path, frame: Frame) -> None:
    header = f"P5\n{frame.width} {frame.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + frame.gray)


def save_ppm(path: str | Path, frame: Frame) -> None:
    r, g, b = frame.color_arrays()
    rgb = np.stack([r, g, b], axis=-1).astype(np.uint8)
    header = f"P6\n{frame.width} {frame.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + rgb.tobytes())


def load_manifest(path: str | Path) -> list[Frame]:
    """Frames listed one path per line (relative to the manifest), in order."""
    path = Path(path)
    frames: list[Frame] = []
    for line in path.read_text("utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        frames.append(load_frame(path.parent / line, index=len(frames)))
    return frames
