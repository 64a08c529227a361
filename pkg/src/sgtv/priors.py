"""Regularizers built from a side-information image.

All three priors share the form ``R(v) = sum_i |M_i grad(v)_i|``:

* TV:  ``M_i = I``
* WTV: ``M_i = w_i I`` with ``w_i = eta / |grad(side)_i|_eta``
* DTV: ``M_i = I - xi_i xi_i^T`` with ``xi_i = grad(side)_i / |grad(side)_i|_eta``

where ``|x|_eta = sqrt(|x|^2 + eta^2)``.
"""
from __future__ import annotations

import enum

import numpy as np

from .errors import DataError
from .grid import Anisotropy, apply_anisotropy, gradient, pointwise_norm


class PriorKind(str, enum.Enum):
    TV = "tv"
    WTV = "wtv"
    DTV = "dtv"

    @classmethod
    def parse(cls, name):
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise DataError(f"unknown prior {name!r}; expected one of tv, wtv, dtv") from None


def smoothed_magnitude(g, eta):
    if not eta > 0:
        raise DataError(f"eta must be positive, got {eta}")
    g = np.asarray(g, dtype=float)
    return np.sqrt(g[0] ** 2 + g[1] ** 2 + eta**2)


def side_gradient(side, normalize=True):
    """Gradient of the side image, optionally rescaled so its largest magnitude is 1.

    A constant side image has zero gradient and is left as is.
    """
    g = gradient(side)
    if normalize:
        peak = pointwise_norm(g).max()
        if peak > 0:
            g = g / peak
    return g


def weights_from_side_info(side, eta, normalize=True):
    g = side_gradient(side, normalize)
    return Anisotropy.isotropic(eta / smoothed_magnitude(g, eta))


def direction_from_side_info(side, eta, normalize=True):
    g = side_gradient(side, normalize)
    return Anisotropy.directional(g / smoothed_magnitude(g, eta))


def make_anisotropy(kind, side=None, eta=1e-2, shape=None, normalize=True):
    """Build the anisotropy field for ``kind``.

    ``shape`` is only consulted for TV when no side image is given.
    """
    kind = PriorKind.parse(kind.value if isinstance(kind, PriorKind) else kind)
    if kind is PriorKind.TV:
        if side is not None:
            shape = np.shape(side)
        if shape is None:
            raise DataError("TV needs a grid shape or an image to infer it from")
        return Anisotropy.identity(shape)
    if side is None:
        raise DataError(f"{kind.name} requires side information")
    if kind is PriorKind.WTV:
        return weights_from_side_info(side, eta, normalize)
    return direction_from_side_info(side, eta, normalize)


def eval_regularizer(aniso, v):
    """``sum_i |M_i grad(v)_i|``."""
    return float(pointwise_norm(apply_anisotropy(aniso, gradient(v))).sum())
