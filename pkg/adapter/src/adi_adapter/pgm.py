"""Minimal binary PGM (P5, maxval 255) I/O for images and exported masks."""

from __future__ import annotations

from pathlib import Path

import numpy as np


class PgmError(Exception):
    pass


def read_pgm(path: str | Path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise PgmError(f"no such file: {path}")
    data = path.read_bytes()
    if not data.startswith(b"P5"):
        raise PgmError(f"{path}: not a P5 graymap")
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
        try:
            tokens.append(int(data[start:pos]))
        except ValueError:
            raise PgmError(f"{path}: bad header token {data[start:pos]!r}")
    pos += 1
    width, height, maxval = tokens
    if maxval != 255:
        raise PgmError(f"{path}: expected maxval 255, got {maxval}")
    pixels = data[pos : pos + width * height]
    if len(pixels) != width * height:
        raise PgmError(f"{path}: truncated pixel data")
    return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path: str | Path, image: np.ndarray) -> None:
    image = np.ascontiguousarray(image, dtype=np.uint8)
    height, width = image.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + image.tobytes())
