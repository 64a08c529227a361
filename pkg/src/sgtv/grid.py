"""Discrete differential operators and pointwise field algebra on a 2D grid.

Images are float arrays of shape ``(H, W)``. Gradient fields are arrays of
shape ``(2, H, W)`` holding the row and column components.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError

IDENTITY = "identity"
ISOTROPIC = "isotropic"
DIRECTIONAL = "directional"


def _check_image(v):
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[0] < 2 or v.shape[1] < 2:
        raise DataError(f"expected a 2D image of at least 2x2, got shape {v.shape}")
    return v


def _check_field(g):
    g = np.asarray(g, dtype=float)
    if g.ndim != 3 or g.shape[0] != 2:
        raise DataError(f"expected a gradient field of shape (2, H, W), got {g.shape}")
    return g


def gradient(v):
    """Forward differences; the difference leaving the grid is set to zero."""
    v = _check_image(v)
    g = np.zeros((2,) + v.shape)
    g[0, :-1, :] = v[1:, :] - v[:-1, :]
    g[1, :, :-1] = v[:, 1:] - v[:, :-1]
    return g


def divergence(g):
    """Backward differences, the exact negative adjoint of :func:`gradient`.

    The last row (column) of the row (column) component never enters, as
    the gradient is identically zero there.
    """
    g = _check_field(g)
    gr, gc = g[0], g[1]
    d = np.zeros(g.shape[1:])
    d[:-1, :] += gr[:-1, :]
    d[1:, :] -= gr[:-1, :]
    d[:, :-1] += gc[:, :-1]
    d[:, 1:] -= gc[:, :-1]
    return d


def pointwise_norm(g):
    g = _check_field(g)
    return np.sqrt(g[0] ** 2 + g[1] ** 2)


def project_unit_ball(y):
    """Pointwise projection onto {|y_i| <= 1}: y / max(1, |y|)."""
    y = _check_field(y)
    return y / np.maximum(1.0, pointwise_norm(y))


def project_nonneg(v):
    return np.maximum(np.asarray(v, dtype=float), 0.0)


@dataclass(frozen=True, eq=False)
class Anisotropy:
    """Per-pixel linear map applied to gradient vectors.

    ``identity`` leaves vectors unchanged, ``isotropic`` scales by a weight
    in [0, 1], ``directional`` applies ``I - xi xi^T`` with ``|xi| <= 1``.
    Every kind is symmetric with pointwise operator norm at most one.
    """

    kind: str
    shape: tuple
    weights: np.ndarray | None = None
    xi: np.ndarray | None = None

    def __post_init__(self):
        if len(self.shape) != 2:
            raise DataError(f"grid shape must be 2D, got {self.shape}")
        if self.kind == IDENTITY:
            return
        if self.kind == ISOTROPIC:
            w = self.weights
            if w is None or w.shape != tuple(self.shape):
                raise DataError("isotropic anisotropy needs weights on the grid")
            if not np.all((w >= 0) & (w <= 1)):
                raise DataError("isotropic weights must lie in [0, 1]")
        elif self.kind == DIRECTIONAL:
            xi = self.xi
            if xi is None or xi.shape != (2,) + tuple(self.shape):
                raise DataError("directional anisotropy needs a vector field on the grid")
            if np.any(xi[0] ** 2 + xi[1] ** 2 > 1.0 + 1e-12):
                raise DataError("directional field must satisfy |xi| <= 1")
        else:
            raise DataError(f"unknown anisotropy kind {self.kind!r}")

    @classmethod
    def identity(cls, shape):
        return cls(IDENTITY, tuple(shape))

    @classmethod
    def isotropic(cls, weights):
        weights = np.asarray(weights, dtype=float)
        return cls(ISOTROPIC, weights.shape, weights=weights)

    @classmethod
    def directional(cls, xi):
        xi = _check_field(xi)
        return cls(DIRECTIONAL, xi.shape[1:], xi=xi)

    def apply(self, g):
        return apply_anisotropy(self, g)


def apply_anisotropy(aniso, g):
    g = _check_field(g)
    if g.shape[1:] != tuple(aniso.shape):
        raise DataError(f"field shape {g.shape[1:]} does not match anisotropy {aniso.shape}")
    if aniso.kind == IDENTITY:
        return g
    if aniso.kind == ISOTROPIC:
        return aniso.weights * g
    xi = aniso.xi
    inner = xi[0] * g[0] + xi[1] * g[1]
    return g - inner * xi
