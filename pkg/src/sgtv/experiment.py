"""Experiment configuration and the (alpha, eta) parameter sweep."""
from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .admm import AdmmConfig, reconstruct
from .errors import DataError
from .fileio import read_image, split_list
from .metrics import psnr, ssim
from .phantoms import shepp_logan_pair, simulate
from .priors import PriorKind, make_anisotropy
from .sampling import PatternSpec, generate

DEFAULT_ALPHAS = tuple(np.logspace(np.log10(5e-4), np.log10(5e-2), 7))
DEFAULT_ETAS = (1e-4, 1e-3, 1e-2, 1e-1, 1.0)

_ADMM_KEYS = {
    "rho0": float, "outer_iterations": int, "inner_prox_iterations": int,
    "rho_mu": float, "rho_tau": float, "adapt_rho": "bool",
    "warm_start_dual": "bool", "tolerance": float,
}


def fmt(x):
    """CSV float formatting: 12 significant digits, ``inf`` sentinel."""
    if isinstance(x, (float, np.floating)):
        if np.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{float(x):.12g}"
    return str(x)


def load_image(ref):
    """Read an image file, or build one from ``phantom:t1:128`` / ``phantom:t2:128``."""
    ref = str(ref).strip()
    if ref.startswith("phantom:"):
        parts = ref.split(":")
        contrast = parts[1].lower() if len(parts) > 1 else "t1"
        size = int(parts[2]) if len(parts) > 2 else 128
        if contrast not in ("t1", "t2"):
            raise DataError(f"phantom contrast must be t1 or t2, got {contrast!r}")
        t1, t2 = shepp_logan_pair(size)
        return t1 if contrast == "t1" else t2
    try:
        return read_image(ref)
    except OSError as exc:
        raise DataError(f"cannot read image {ref!r}: {exc}") from exc


def _parse_bool(value):
    v = str(value).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise DataError(f"not a boolean: {value!r}")


def _floats(value, key):
    try:
        return [float(x) for x in split_list(value)]
    except ValueError:
        raise DataError(f"{key}: expected comma-separated numbers, got {value!r}") from None


@dataclass
class ExperimentConfig:
    ground_truth: list
    side_info: list
    contrasts: list
    priors: list
    patterns: list
    alphas: list
    etas: list
    dataset: str = "dataset"
    noise_fraction: float = 0.05
    seed: int = 0
    admm: dict = None
    out: str = "out"
    data: str = None
    pattern_file: str = None
    raw: dict = None

    @classmethod
    def from_dict(cls, raw):
        raw = dict(raw)
        gts = split_list(raw.get("ground_truth", ""))
        sides = split_list(raw.get("side_info", "none")) or ["none"]
        if len(sides) == 1 and len(gts) > 1:
            sides = sides * len(gts)
        if gts and len(sides) != len(gts):
            raise DataError("side_info needs one entry per ground_truth entry (or 'none')")
        contrasts = split_list(raw.get("contrast", ""))
        if not contrasts:
            contrasts = [_contrast_label(g, i) for i, g in enumerate(gts)]
        if gts and len(contrasts) != len(gts):
            raise DataError("contrast needs one label per ground_truth entry")
        priors = [PriorKind.parse(p) for p in split_list(raw.get("prior", "tv"))]
        patterns = split_list(raw.get("pattern", "cartesian_random:0.125"))
        alphas = _floats(raw["alpha"], "alpha") if "alpha" in raw else list(DEFAULT_ALPHAS)
        etas = _floats(raw["eta"], "eta") if "eta" in raw else list(DEFAULT_ETAS)
        if not (priors and patterns and alphas and etas):
            raise DataError("prior, pattern, alpha and eta grids must be nonempty")
        if any(a < 0 for a in alphas) or any(e <= 0 for e in etas):
            raise DataError("alpha must be >= 0 and eta > 0")
        admm = {}
        for key, typ in _ADMM_KEYS.items():
            if key in raw:
                try:
                    admm[key] = _parse_bool(raw[key]) if typ == "bool" else typ(raw[key])
                except ValueError:
                    raise DataError(f"{key}: bad value {raw[key]!r}") from None
        try:
            noise = float(raw.get("noise_fraction", 0.05))
            seed = int(raw.get("seed", 0))
        except ValueError as exc:
            raise DataError(f"bad noise_fraction or seed: {exc}") from None
        return cls(
            ground_truth=gts, side_info=sides, contrasts=contrasts, priors=priors,
            patterns=patterns, alphas=alphas, etas=etas,
            dataset=raw.get("dataset", "dataset"), noise_fraction=noise, seed=seed,
            admm=admm, out=raw.get("out", "out"), data=raw.get("data"),
            pattern_file=raw.get("pattern_file"), raw=raw,
        )

    def admm_config(self, alpha):
        return AdmmConfig(alpha=alpha, **(self.admm or {}))


def _contrast_label(ref, i):
    ref = str(ref)
    if ref.startswith("phantom:"):
        parts = ref.split(":")
        return parts[1].upper() if len(parts) > 1 and parts[1] else f"C{i}"
    return Path(ref).stem


@dataclass
class StatsRow:
    dataset: str
    contrast: str
    prior: str
    pattern: str
    alpha: float
    eta: float
    psnr_db: float
    ssim: float
    wall_time_s: float
    seed: int

    def key(self):
        return (self.dataset, self.contrast, self.pattern, self.prior, self.alpha, self.eta)


STATS_COLUMNS = ["dataset", "contrast", "prior", "pattern", "alpha", "eta",
                 "psnr_db", "ssim", "seed"]


def noise_seed(seed, contrast_index, pattern_index):
    """Seed for one (contrast, pattern) case, shared by all priors and parameters."""
    return int(np.random.SeedSequence([seed, contrast_index, pattern_index]).generate_state(1)[0])


@dataclass
class Case:
    contrast: str
    pattern_label: str
    gt: np.ndarray
    side: np.ndarray
    pattern: object
    data: np.ndarray


def build_cases(cfg):
    cases = []
    for ci, (gt_ref, side_ref, label) in enumerate(
            zip(cfg.ground_truth, cfg.side_info, cfg.contrasts)):
        gt = load_image(gt_ref)
        side = None if side_ref.lower() == "none" else load_image(side_ref)
        if side is not None and side.shape != gt.shape:
            raise DataError(f"side information {side.shape} does not match ground truth {gt.shape}")
        for pi, text in enumerate(cfg.patterns):
            spec = PatternSpec.parse(text, gt.shape, seed=cfg.seed)
            pattern = generate(spec)
            data = simulate(gt, pattern, cfg.noise_fraction, noise_seed(cfg.seed, ci, pi))
            cases.append(Case(label, spec.label(), gt, side, pattern, data))
    return cases


def _run_point(case, prior, alpha, eta, admm_cfg):
    t0 = time.perf_counter()
    aniso = make_anisotropy(prior, case.side if prior is not PriorKind.TV else None,
                            eta, shape=case.gt.shape)
    v, _ = reconstruct(case.data, case.pattern, aniso, admm_cfg)
    return psnr(case.gt, v), ssim(case.gt, v)[0], time.perf_counter() - t0


def _task(args):
    ci, case, prior, alpha, eta, admm_cfg = args
    return (ci, prior, alpha, eta) + _run_point(case, prior, alpha, eta, admm_cfg)


def sweep(cfg, jobs=1, progress=None):
    """Reconstruct every (contrast, pattern, prior, alpha, eta) point; rows come back sorted."""
    if not cfg.ground_truth:
        raise DataError("sweep needs at least one ground_truth entry")
    cases = build_cases(cfg)
    for case in cases:
        if case.side is None and any(p is not PriorKind.TV for p in cfg.priors):
            raise DataError(f"{case.contrast}: WTV/DTV need side information")

    tasks = []
    for ci, case in enumerate(cases):
        for prior in cfg.priors:
            # eta does not enter TV; compute once, replicate per eta below
            etas = cfg.etas[:1] if prior is PriorKind.TV else cfg.etas
            for alpha in cfg.alphas:
                for eta in etas:
                    tasks.append((ci, case, prior, alpha, eta, cfg.admm_config(alpha)))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = []
        for i, t in enumerate(tasks):
            results.append(_task(t))
            if progress is not None:
                progress(i + 1, len(tasks))

    rows = []
    for ci, prior, alpha, eta, p, s, wall in results:
        case = cases[ci]
        etas = cfg.etas if prior is PriorKind.TV else [eta]
        for e in etas:
            rows.append(StatsRow(cfg.dataset, case.contrast, prior.value, case.pattern_label,
                                 float(alpha), float(e), p, s, wall, cfg.seed))
    rows.sort(key=StatsRow.key)
    return rows


def select_best(rows):
    """Max-SSIM row per (dataset, contrast, pattern, prior); ties keep the first in key order."""
    best = {}
    for row in sorted(rows, key=StatsRow.key):
        k = (row.dataset, row.contrast, row.pattern, row.prior)
        if k not in best or row.ssim > best[k].ssim:
            best[k] = row
    return [best[k] for k in sorted(best)]


def write_rows(path, rows, columns=STATS_COLUMNS):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(getattr(row, c)) for c in columns])


def read_rows(path):
    names = {f.name: f.type for f in fields(StatsRow)}
    out = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            vals = {}
            for name, typ in names.items():
                raw = rec.get(name)
                if raw is None:
                    vals[name] = float("nan") if typ == "float" else None
                elif typ == "float":
                    vals[name] = float(raw)
                elif typ == "int":
                    vals[name] = int(raw)
                else:
                    vals[name] = raw
            out.append(StatsRow(**vals))
    return out
