"""Image quality measures."""
from __future__ import annotations

import numpy as np
from scipy.ndimage import correlate

from .errors import DataError

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _same_shape(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DataError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def psnr(reference, test, peak=1.0):
    """Peak signal-to-noise ratio in dB; ``inf`` for identical images."""
    reference, test = _same_shape(reference, test)
    mse = np.mean((reference - test) ** 2)
    if mse == 0:
        return float("inf")
    return float(10.0 * np.log10(peak**2 / mse))


def gaussian_window(size=SSIM_WINDOW, sigma=SSIM_SIGMA):
    r = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(r**2) / (2.0 * sigma**2))
    k = np.outer(g, g)
    return k / k.sum()


def ssim(reference, test, data_range=1.0):
    """Mean SSIM and the SSIM map.

    Gaussian 11x11 window (sigma 1.5), replicate padding so the map covers
    every pixel, population statistics.
    """
    a, b = _same_shape(reference, test)
    win = gaussian_window()
    c1 = (SSIM_K1 * data_range) ** 2
    c2 = (SSIM_K2 * data_range) ** 2

    def filt(x):
        return correlate(x, win, mode="nearest")

    mu_a, mu_b = filt(a), filt(b)
    var_a = filt(a * a) - mu_a * mu_a
    var_b = filt(b * b) - mu_b * mu_b
    cov = filt(a * b) - mu_a * mu_b
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    smap = num / den
    return float(smap.mean()), smap
