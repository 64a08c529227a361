"""MRI forward model ``E = S F R*`` and its adjoint ``E* = Re F^-1 S*``.

``F`` is the unitary 2D DFT in standard (DC at index 0) layout, ``R*`` embeds
a real image into the complex plane and ``S`` picks the entries listed in a
:class:`SamplingPattern`. The complex spaces carry the real inner product
``<x, y> = Re(x^H y)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True, eq=False)
class SamplingPattern:
    """Ordered sequence of 0-based flat k-space indices on an ``(H, W)`` grid.

    Flat index ``k`` refers to row ``k // W`` and column ``k % W`` of the
    unshifted DFT array. Repeated indices are allowed.
    """

    shape: tuple
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices)
        if idx.ndim != 1 or idx.size == 0:
            raise DataError("sampling pattern needs a non-empty 1D index sequence")
        if not np.issubdtype(idx.dtype, np.integer):
            raise DataError("sampling indices must be integers")
        n = int(np.prod(self.shape))
        if idx.min() < 0 or idx.max() >= n:
            raise DataError(f"sampling index out of range for grid {tuple(self.shape)}")
        object.__setattr__(self, "shape", tuple(int(s) for s in self.shape))
        object.__setattr__(self, "indices", idx.astype(np.int64))

    @property
    def size(self):
        return int(np.prod(self.shape))

    def __len__(self):
        return len(self.indices)

    @classmethod
    def full(cls, shape):
        return cls(tuple(shape), np.arange(int(np.prod(shape))))

    @classmethod
    def from_rows_cols(cls, shape, rows, cols):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        h, w = shape
        if np.any((rows < 0) | (rows >= h) | (cols < 0) | (cols >= w)):
            raise DataError(f"sample location out of range for grid {tuple(shape)}")
        return cls(tuple(shape), rows * w + cols)

    def rows_cols(self):
        return np.divmod(self.indices, self.shape[1])


def dft2(x):
    return np.fft.fft2(x, norm="ortho")


def idft2(x):
    return np.fft.ifft2(x, norm="ortho")


def _check_grid(pattern, x):
    if np.shape(x) != pattern.shape:
        raise DataError(f"image shape {np.shape(x)} does not match pattern grid {pattern.shape}")


def sample(pattern, x):
    _check_grid(pattern, x)
    return np.asarray(x).reshape(-1)[pattern.indices]


def sample_adjoint(pattern, d):
    """Scatter-add ``d`` into the grid; repeated indices accumulate."""
    d = np.asarray(d)
    if d.shape != (len(pattern),):
        raise DataError(f"data length {d.shape} does not match pattern length {len(pattern)}")
    out = np.zeros(pattern.size, dtype=np.result_type(d.dtype, np.complex128))
    np.add.at(out, pattern.indices, d)
    return out.reshape(pattern.shape)


def mask_counts(pattern):
    """Multiplicity of every grid cell in the pattern, i.e. the diagonal of ``S* S``."""
    counts = np.bincount(pattern.indices, minlength=pattern.size)
    return counts.reshape(pattern.shape).astype(float)


def forward(pattern, v):
    v = np.asarray(v, dtype=float)
    _check_grid(pattern, v)
    return sample(pattern, dft2(v.astype(complex)))


def adjoint(pattern, d):
    return idft2(sample_adjoint(pattern, d)).real
