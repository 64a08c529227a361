"""Shepp-Logan contrast pair and noisy k-space simulation."""
from __future__ import annotations

import numpy as np

from .errors import DataError
from .mri import dft2, forward

# Modified Shepp-Logan geometry: center x, center y, semi-axis a, semi-axis b, angle (deg).
ELLIPSES = np.array([
    [0.00, 0.0000, 0.6900, 0.920, 0.0],
    [0.00, -0.0184, 0.6624, 0.874, 0.0],
    [0.22, 0.0000, 0.1100, 0.310, -18.0],
    [-0.22, 0.0000, 0.1600, 0.410, 18.0],
    [0.00, 0.3500, 0.2100, 0.250, 0.0],
    [0.00, 0.1000, 0.0460, 0.046, 0.0],
    [0.00, -0.1000, 0.0460, 0.046, 0.0],
    [-0.08, -0.6050, 0.0460, 0.023, 0.0],
    [0.00, -0.6060, 0.0230, 0.023, 0.0],
    [0.06, -0.6050, 0.0230, 0.046, 0.0],
])

# Additive amplitudes per ellipse.
T1_AMPLITUDES = np.array([1.0, -0.8, -0.2, -0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1])
# Ventricles flip from dark to bright, small features keep their sign at half strength.
T2_AMPLITUDES = np.array([0.8, -0.8, 0.3, 0.3, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05])

MIN_PHANTOM_SIZE = 32


def ellipse_masks(size):
    """Boolean pixel-center membership of every ellipse, row 0 at the top (y = +1)."""
    c = (2.0 * np.arange(size) + 1.0) / size - 1.0
    x, y = np.meshgrid(c, -c)
    masks = []
    for x0, y0, a, b, deg in ELLIPSES:
        phi = np.deg2rad(deg)
        dx, dy = x - x0, y - y0
        xr = dx * np.cos(phi) + dy * np.sin(phi)
        yr = -dx * np.sin(phi) + dy * np.cos(phi)
        masks.append((xr / a) ** 2 + (yr / b) ** 2 <= 1.0)
    return np.array(masks)


def render(size, amplitudes):
    masks = ellipse_masks(size)
    img = np.tensordot(np.asarray(amplitudes, dtype=float), masks.astype(float), axes=1)
    return np.clip(img, 0.0, 1.0)


def shepp_logan_pair(size=128):
    """Return ``(t1, t2)``: two contrasts sharing the modified Shepp-Logan geometry."""
    if size < MIN_PHANTOM_SIZE:
        raise DataError(f"phantom size must be at least {MIN_PHANTOM_SIZE}, got {size}")
    return render(size, T1_AMPLITUDES), render(size, T2_AMPLITUDES)


def noise_sigma(gt, fraction):
    """Per-component noise std so that fully sampled noise has RMS norm ``fraction * |F gt|``."""
    gt = np.asarray(gt, dtype=float)
    return fraction * np.linalg.norm(dft2(gt)) / np.sqrt(2.0 * gt.size)


def simulate(gt, pattern, fraction=0.05, seed=0):
    """Sampled k-space of ``gt`` plus complex white Gaussian noise."""
    if fraction < 0:
        raise DataError(f"noise fraction must be nonnegative, got {fraction}")
    d = forward(pattern, gt)
    if fraction == 0:
        return d
    sigma = noise_sigma(gt, fraction)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((2, len(d)))
    return d + sigma * (noise[0] + 1j * noise[1])
