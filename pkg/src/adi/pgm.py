"""Binary PGM (P5, maxval 255) reading and writing.

Category-id masks travel between processes as plain P5 graymaps: one byte
per pixel, pixel value = category id. The writer emits a canonical header
so identical arrays produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import MalformedManifest, MissingFile


def read_pgm(path: str | Path) -> np.ndarray:
    """Read a P5 graymap into a (height, width) uint8 array."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"no such file: {path}")
    data = path.read_bytes()
    if not data.startswith(b"P5"):
        raise MalformedManifest(f"{path}: not a binary PGM (P5) file")

    # Header: magic, width, height, maxval; tokens separated by whitespace,
    # '#' starts a comment running to end of line.
    tokens: list[int] = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise MalformedManifest(f"{path}: truncated PGM header")
        try:
            tokens.append(int(data[start:pos]))
        except ValueError:
            raise MalformedManifest(f"{path}: bad PGM header token {data[start:pos]!r}")
    pos += 1  # single whitespace byte after maxval

    width, height, maxval = tokens
    if maxval != 255:
        raise MalformedManifest(f"{path}: expected maxval 255, got {maxval}")
    if width <= 0 or height <= 0:
        raise MalformedManifest(f"{path}: bad dimensions {width}x{height}")
    pixels = data[pos : pos + width * height]
    if len(pixels) != width * height:
        raise MalformedManifest(
            f"{path}: expected {width * height} pixel bytes, got {len(pixels)}"
        )
    return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path: str | Path, mask: np.ndarray) -> None:
    """Write a (height, width) uint8 array as a canonical P5 graymap."""
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    if mask.ndim != 2:
        raise ValueError(f"mask must be 2-D, got shape {mask.shape}")
    height, width = mask.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + mask.tobytes())
