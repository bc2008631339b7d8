"""Minimal PGM/PPM (netpbm) codec, 8-bit only.

Reads P2/P5 and P3/P6 with ``#`` comments in the header; writes the binary
variants. Images are numpy ``uint8`` arrays of shape (h, w) or (h, w, 3).
"""
from __future__ import annotations

import os
import re

import numpy as np

_TOKEN = re.compile(rb"#[^\n]*\n?|\s+|[^\s#]+")


class NetpbmError(ValueError):
    pass


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    tokens, pos = [], 0
    while len(tokens) < count:
        m = _TOKEN.match(data, pos)
        if m is None:
            raise NetpbmError("truncated header")
        tok = m.group()
        pos = m.end()
        if tok[:1] == b"#" or tok.isspace():
            continue
        tokens.append(tok)
    return tokens, pos


def _int_token(tok: bytes, what: str) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise NetpbmError(f"bad {what} {tok.decode(errors='replace')!r}") from None
    if value <= 0:
        raise NetpbmError(f"bad {what} {value}")
    return value


def decode(data: bytes) -> np.ndarray:
    if len(data) < 2:
        raise NetpbmError("empty netpbm stream")
    magic = data[:2]
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise NetpbmError(f"unsupported magic {magic.decode(errors='replace')!r}")
    (_, w, h, maxval), pos = _header_tokens(data, 4)
    width, height = _int_token(w, "width"), _int_token(h, "height")
    maxval = _int_token(maxval, "maxval")
    if maxval != 255:
        raise NetpbmError(f"unsupported maxval {maxval}; only 255 is handled")
    channels = 3 if magic in (b"P3", b"P6") else 1
    n = width * height * channels
    if magic in (b"P5", b"P6"):
        # exactly one whitespace byte separates the header from the raster
        raster = data[pos + 1:pos + 1 + n]
        if len(raster) != n:
            raise NetpbmError(f"raster has {len(raster)} bytes, expected {n}")
        pixels = np.frombuffer(raster, dtype=np.uint8)
    else:
        values = [tok for tok in re.split(rb"\s+", re.sub(rb"#[^\n]*", b"", data[pos:])) if tok]
        if len(values) < n:
            raise NetpbmError(f"raster has {len(values)} samples, expected {n}")
        try:
            pixels = np.array([int(v) for v in values[:n]], dtype=np.int64)
        except ValueError as exc:
            raise NetpbmError(f"bad sample: {exc}") from None
        if pixels.min(initial=0) < 0 or pixels.max(initial=0) > 255:
            raise NetpbmError("sample out of range 0..255")
        pixels = pixels.astype(np.uint8)
    shape = (height, width, 3) if channels == 3 else (height, width)
    return pixels.reshape(shape).copy()


def encode(img: np.ndarray) -> bytes:
    img = np.asarray(img)
    if img.dtype != np.uint8:
        raise NetpbmError(f"expected uint8 pixels, got {img.dtype}")
    if img.ndim == 2:
        magic = b"P5"
    elif img.ndim == 3 and img.shape[2] == 3:
        magic = b"P6"
    else:
        raise NetpbmError(f"cannot encode array of shape {img.shape}")
    h, w = img.shape[:2]
    return b"%s\n%d %d\n255\n" % (magic, w, h) + np.ascontiguousarray(img).tobytes()


def _read(src) -> bytes:
    if isinstance(src, (bytes, bytearray)):
        return bytes(src)
    if isinstance(src, (str, os.PathLike)):
        with open(src, "rb") as f:
            return f.read()
    return src.read()


def _write(dst, payload: bytes) -> None:
    if isinstance(dst, (str, os.PathLike)):
        with open(dst, "wb") as f:
            f.write(payload)
    else:
        dst.write(payload)


def read_pgm(src) -> np.ndarray:
    img = decode(_read(src))
    if img.ndim != 2:
        raise NetpbmError("expected a PGM (P2/P5) image, got PPM")
    return img


def read_ppm(src) -> np.ndarray:
    img = decode(_read(src))
    if img.ndim != 3:
        raise NetpbmError("expected a PPM (P3/P6) image, got PGM")
    return img


def write_pgm(dst, img: np.ndarray) -> None:
    if np.asarray(img).ndim != 2:
        raise NetpbmError("write_pgm needs a 2-D array")
    _write(dst, encode(img))


def write_ppm(dst, img: np.ndarray) -> None:
    if np.asarray(img).ndim != 3:
        raise NetpbmError("write_ppm needs an (h, w, 3) array")
    _write(dst, encode(img))


__all__ = ["NetpbmError", "decode", "encode", "read_pgm", "read_ppm", "write_pgm", "write_ppm"]
