"""Plain on-disk formats.

* image:    ASCII line ``rimg v1 H W`` then ``H*W`` little-endian float64, row-major
* k-space:  ASCII line ``kdat v1 M`` then ``M`` (re, im) little-endian float64 pairs
* pattern:  ASCII line ``pattern v1 H W M`` then ``M`` lines ``row col``
* config:   ``key = value`` lines, ``#`` comments, comma-separated lists
"""
from __future__ import annotations

import numpy as np

from .errors import DataError
from .mri import SamplingPattern

_F8 = np.dtype("<f8")


def _read_header(fh, magic, n_fields, path):
    line = fh.readline()
    try:
        parts = line.decode("ascii").split()
    except UnicodeDecodeError:
        parts = []
    if len(parts) != n_fields + 2 or parts[0] != magic or parts[1] != "v1":
        raise DataError(f"{path}: not a '{magic} v1' file")
    try:
        return [int(p) for p in parts[2:]]
    except ValueError:
        raise DataError(f"{path}: malformed header {line!r}") from None


def write_image(path, img):
    img = np.asarray(img, dtype=float)
    if img.ndim != 2:
        raise DataError(f"image must be 2D, got shape {img.shape}")
    with open(path, "wb") as fh:
        fh.write(f"rimg v1 {img.shape[0]} {img.shape[1]}\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img, dtype=_F8).tobytes())


def read_image(path):
    with open(path, "rb") as fh:
        h, w = _read_header(fh, "rimg", 2, path)
        raw = fh.read()
    if len(raw) != h * w * 8:
        raise DataError(f"{path}: expected {h * w} float64 values, found {len(raw) // 8}")
    img = np.frombuffer(raw, dtype=_F8).reshape(h, w).astype(float)
    if not np.all(np.isfinite(img)):
        raise DataError(f"{path}: image contains non-finite values")
    return img


def write_kspace(path, d):
    d = np.asarray(d, dtype=complex).ravel()
    pairs = np.empty((d.size, 2), dtype=_F8)
    pairs[:, 0] = d.real
    pairs[:, 1] = d.imag
    with open(path, "wb") as fh:
        fh.write(f"kdat v1 {d.size}\n".encode("ascii"))
        fh.write(pairs.tobytes())


def read_kspace(path):
    with open(path, "rb") as fh:
        (m,) = _read_header(fh, "kdat", 1, path)
        raw = fh.read()
    if len(raw) != m * 16:
        raise DataError(f"{path}: expected {m} complex samples, found {len(raw) / 16:g}")
    pairs = np.frombuffer(raw, dtype=_F8).reshape(m, 2)
    return pairs[:, 0] + 1j * pairs[:, 1]


def write_pattern(path, pattern):
    rows, cols = pattern.rows_cols()
    h, w = pattern.shape
    with open(path, "w", newline="\n") as fh:
        fh.write(f"pattern v1 {h} {w} {len(pattern)}\n")
        for r, c in zip(rows.tolist(), cols.tolist()):
            fh.write(f"{r} {c}\n")


def read_pattern(path):
    with open(path, "rb") as fh:
        h, w, m = _read_header(fh, "pattern", 3, path)
        body = fh.read().decode("ascii").split()
    if len(body) != 2 * m:
        raise DataError(f"{path}: expected {m} sample lines")
    try:
        rc = np.array(body, dtype=np.int64).reshape(m, 2)
    except ValueError:
        raise DataError(f"{path}: non-integer sample location") from None
    return SamplingPattern.from_rows_cols((h, w), rc[:, 0], rc[:, 1])


def parse_config(text, source="<config>"):
    """Parse ``key = value`` text into a dict of raw string values."""
    cfg = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise DataError(f"{source}:{lineno}: empty key")
        cfg[key] = value
    return cfg


def read_config(path):
    with open(path) as fh:
        return parse_config(fh.read(), str(path))


def split_list(value):
    return [item.strip() for item in str(value).split(",") if item.strip()]


def to_uint8(img):
    """Map [0, 1] to [0, 255] with clipping, rounding half up."""
    img = np.clip(np.asarray(img, dtype=float), 0.0, 1.0)
    return np.floor(img * 255.0 + 0.5).astype(np.uint8)


def write_pgm(path, img):
    data = to_uint8(img)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{data.shape[1]} {data.shape[0]}\n255\n".encode("ascii"))
        fh.write(data.tobytes())
