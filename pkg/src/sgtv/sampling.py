"""k-space sampling patterns: Cartesian, radial and spiral trajectories.

Trajectories are laid out in centered coordinates (DC in the middle of the
grid), rasterized to the nearest grid cell, deduplicated and then mapped to
the unshifted DFT layout used by :mod:`sgtv.mri`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .errors import DataError
from .mri import SamplingPattern

# 180 deg / golden ratio
GOLDEN_ANGLE_DEG = 180.0 * (math.sqrt(5.0) - 1.0) / 2.0
# 360 deg * (1 - 1 / golden ratio), the divergence angle of sunflower packing
PHYLLOTAXIS_ANGLE_DEG = 137.50776

SCHEMES = (
    "cartesian_skip",
    "cartesian_random",
    "radial_uniform",
    "radial_golden",
    "spiral_vd",
    "spiral_phyllotaxis",
)

# positional parameter order of the compact "scheme:a:b" notation
_POSITIONAL = {
    "cartesian_skip": ("step", "axis"),
    "cartesian_random": ("fraction", "seed", "axis"),
    "radial_uniform": ("n_spokes",),
    "radial_golden": ("n_spokes",),
    "spiral_vd": ("n_turns", "n_points", "density_power"),
    "spiral_phyllotaxis": ("n_points",),
}


@dataclass(frozen=True)
class PatternSpec:
    scheme: str
    shape: tuple
    step: int = 4
    axis: str = "rows"
    fraction: float = 0.25
    seed: int = 0
    n_spokes: int = 16
    n_turns: int = 16
    n_points: int = 0  # 0 selects a grid-dependent default
    density_power: float = 2.0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise DataError(f"unknown sampling scheme {self.scheme!r}")
        if len(self.shape) != 2 or min(self.shape) < 2:
            raise DataError(f"invalid grid shape {self.shape}")
        if self.axis not in ("rows", "cols"):
            raise DataError(f"axis must be 'rows' or 'cols', got {self.axis!r}")
        if self.step < 1:
            raise DataError("step must be positive")
        if not 0 < self.fraction <= 1:
            raise DataError(f"fraction must lie in (0, 1], got {self.fraction}")
        if self.n_spokes < 1 or self.n_turns < 1 or self.n_points < 0:
            raise DataError("spoke, turn and point counts must be positive")
        if not self.density_power > 0:
            raise DataError("density_power must be positive")

    @classmethod
    def parse(cls, text, shape, seed=None):
        """Parse the compact notation, e.g. ``radial_golden:16`` or ``cartesian_skip:7:rows``."""
        parts = [p.strip() for p in str(text).split(":")]
        scheme = parts[0]
        if scheme not in _POSITIONAL:
            raise DataError(f"unknown sampling scheme {scheme!r}")
        names = _POSITIONAL[scheme]
        if len(parts) - 1 > len(names):
            raise DataError(f"too many parameters for {scheme}: {text!r}")
        types = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for name, raw in zip(names, parts[1:]):
            try:
                kwargs[name] = raw if name == "axis" else (
                    float(raw) if types[name] == "float" else int(raw))
            except ValueError:
                raise DataError(f"bad value {raw!r} for {name} in {text!r}") from None
        if seed is not None and "seed" not in kwargs:
            kwargs["seed"] = int(seed)
        return cls(scheme, tuple(shape), **kwargs)

    def label(self):
        """Compact notation round-tripping through :meth:`parse`."""
        vals = [str(getattr(self, n)) for n in _POSITIONAL[self.scheme]]
        return ":".join([self.scheme] + vals)


def centered_to_flat(shape, rows, cols):
    """Map centered offsets (DC at 0) to flat indices of the unshifted DFT grid.

    Offsets outside ``[-H//2, H - H//2 - 1]`` (resp. columns) are dropped.
    """
    h, w = shape
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    keep = ((rows >= -(h // 2)) & (rows <= h - h // 2 - 1)
            & (cols >= -(w // 2)) & (cols <= w - w // 2 - 1))
    return (rows[keep] % h) * w + (cols[keep] % w)


def _rasterize(shape, r, theta):
    rows = np.rint(r * np.sin(theta)).astype(np.int64)
    cols = np.rint(r * np.cos(theta)).astype(np.int64)
    return centered_to_flat(shape, rows, cols)


def _lines(shape, axis, line_ids):
    h, w = shape
    line_ids = np.asarray(line_ids, dtype=np.int64)
    if axis == "rows":
        rr, cc = np.meshgrid(line_ids, np.arange(w), indexing="ij")
    else:
        cc, rr = np.meshgrid(line_ids, np.arange(h), indexing="ij")
    return (rr * w + cc).ravel()


def _radial(shape, angles):
    radius = max(shape) / 2.0
    t = np.arange(-radius, radius + 0.25, 0.5)
    tt, aa = np.meshgrid(t, angles, indexing="ij")
    return _rasterize(shape, tt.ravel(), aa.ravel())


def generate(spec):
    """Rasterize ``spec`` into a deduplicated, sorted pattern that contains DC."""
    shape = tuple(spec.shape)
    h, w = shape
    scheme = spec.scheme
    n_lines = h if spec.axis == "rows" else w

    if scheme == "cartesian_skip":
        # multiples of step in DFT layout, so the DC line is always one of them
        flat = _lines(shape, spec.axis, np.arange(0, n_lines, spec.step))
    elif scheme == "cartesian_random":
        rng = np.random.default_rng(spec.seed)
        n_pick = max(int(math.floor(spec.fraction * n_lines)), 1)
        others = rng.choice(np.arange(1, n_lines), size=n_pick - 1, replace=False)
        flat = _lines(shape, spec.axis, np.concatenate([[0], np.sort(others)]))
    elif scheme == "radial_uniform":
        angles = np.arange(spec.n_spokes) * (np.pi / spec.n_spokes)
        flat = _radial(shape, angles)
    elif scheme == "radial_golden":
        deg = np.mod(np.arange(spec.n_spokes) * GOLDEN_ANGLE_DEG, 180.0)
        flat = _radial(shape, np.deg2rad(deg))
    elif scheme == "spiral_vd":
        n_points = spec.n_points or h * w // 4
        t = np.linspace(0.0, 1.0, n_points)
        r = (min(shape) / 2.0) * t**spec.density_power
        flat = _rasterize(shape, r, 2.0 * np.pi * spec.n_turns * t)
    else:
        n_points = spec.n_points or h * w // 8
        n = np.arange(n_points)
        r = (min(shape) / 2.0) * np.sqrt(n / n_points)
        flat = _rasterize(shape, r, np.deg2rad(n * PHYLLOTAXIS_ANGLE_DEG))

    flat = np.unique(np.concatenate([flat, [0]]))
    return SamplingPattern(shape, flat)


def undersampling_factor(pattern):
    return pattern.size / len(pattern)
