"""Command-line harness: ``sgtv {simulate,reconstruct,sweep,metrics,render}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .admm import reconstruct
from .errors import DataError, NumericalError
from .experiment import (
    ExperimentConfig,
    fmt,
    load_image,
    noise_seed,
    select_best,
    sweep,
    write_rows,
)
from .fileio import (
    read_config,
    read_image,
    read_kspace,
    read_pattern,
    write_image,
    write_kspace,
    write_pattern,
    write_pgm,
)
from .metrics import psnr, ssim
from .phantoms import noise_sigma, simulate
from .priors import PriorKind, make_anisotropy
from .sampling import PatternSpec, generate, undersampling_factor

log = logging.getLogger("sgtv")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_config(args):
    raw = read_config(args.config) if args.config else {}
    if args.seed is not None:
        raw["seed"] = str(args.seed)
    cfg = ExperimentConfig.from_dict(raw)
    if args.out is not None:
        cfg.out = args.out
    cfg.raw = raw
    return cfg


def _outdir(cfg):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(args):
    cfg = _load_config(args)
    if not cfg.ground_truth:
        raise UsageError("simulate needs 'ground_truth' in the config")
    gt = load_image(cfg.ground_truth[0])
    spec = PatternSpec.parse(cfg.patterns[0], gt.shape, seed=cfg.seed)
    pattern = generate(spec)
    seed = noise_seed(cfg.seed, 0, 0)
    d = simulate(gt, pattern, cfg.noise_fraction, seed)
    out = _outdir(cfg)
    write_kspace(out / "data.kdat", d)
    write_pattern(out / "pattern.txt", pattern)
    sigma = noise_sigma(gt, cfg.noise_fraction)
    print(f"seed={cfg.seed} noise_seed={seed} sigma={fmt(sigma)} "
          f"samples={len(pattern)} factor={fmt(undersampling_factor(pattern))} "
          f"pattern={spec.label()}")
    return EXIT_OK


def cmd_reconstruct(args):
    cfg = _load_config(args)
    if not cfg.data or not cfg.pattern_file:
        raise UsageError("reconstruct needs 'data' and 'pattern_file' in the config")
    if "alpha" not in cfg.raw:
        raise UsageError("reconstruct needs an explicit 'alpha'")
    try:
        d = read_kspace(cfg.data)
        pattern = read_pattern(cfg.pattern_file)
    except OSError as exc:
        raise DataError(str(exc)) from exc
    if len(d) != len(pattern):
        raise DataError(f"data has {len(d)} samples but the pattern has {len(pattern)}")

    prior = cfg.priors[0]
    side_ref = cfg.side_info[0] if cfg.side_info else "none"
    side = None if side_ref.lower() == "none" else load_image(side_ref)
    if prior is PriorKind.TV and side is not None:
        log.warning("prior TV does not use side information; ignoring %s", side_ref)
        side = None
    if prior is not PriorKind.TV and side is None:
        raise DataError(f"prior {prior.name} requires side_info")
    if side is not None and side.shape != pattern.shape:
        raise DataError(f"side information {side.shape} does not match grid {pattern.shape}")

    alpha, eta = cfg.alphas[0], cfg.etas[0]
    aniso = make_anisotropy(prior, side, eta, shape=pattern.shape)
    v, diag = reconstruct(d, pattern, aniso, cfg.admm_config(alpha))

    out = _outdir(cfg)
    write_image(out / "recon.rimg", v)
    diag.to_csv(out / "diagnostics.csv")
    print(f"iterations={diag.iterations} objective={fmt(diag.objective[-1])} "
          f"rho={fmt(diag.rho[-1])}")
    if cfg.ground_truth:
        gt = load_image(cfg.ground_truth[0])
        if gt.shape != v.shape:
            raise DataError(f"ground truth {gt.shape} does not match grid {v.shape}")
        p, s = psnr(gt, v), ssim(gt, v)[0]
        with open(out / "metrics.csv", "w") as fh:
            fh.write("psnr_db,ssim\n")
            fh.write(f"{fmt(p)},{fmt(s)}\n")
        print(f"psnr_db={fmt(p)} ssim={fmt(s)}")
    return EXIT_OK


def cmd_sweep(args):
    cfg = _load_config(args)

    def progress(i, n):
        log.info("sweep point %d/%d", i, n)

    rows = sweep(cfg, jobs=args.jobs, progress=progress)
    out = _outdir(cfg)
    write_rows(out / "stats.csv", rows)
    best = select_best(rows)
    write_rows(out / "best.csv", best)
    write_rows(out / "timings.csv", rows,
               ["dataset", "contrast", "prior", "pattern", "alpha", "eta", "wall_time_s"])
    for row in best:
        print(f"best {row.contrast} {row.pattern} {row.prior}: alpha={fmt(row.alpha)} "
              f"eta={fmt(row.eta)} psnr_db={fmt(row.psnr_db)} ssim={fmt(row.ssim)}")
    return EXIT_OK


def cmd_metrics(args):
    try:
        ref, test = read_image(args.reference), read_image(args.test)
    except OSError as exc:
        raise DataError(str(exc)) from exc
    p, s = psnr(ref, test, args.peak), ssim(ref, test)[0]
    print(f"psnr_db={fmt(p)} ssim={fmt(s)}")
    return EXIT_OK


def cmd_render(args):
    try:
        img = read_image(args.image)
    except OSError as exc:
        raise DataError(str(exc)) from exc
    target = Path(args.output) if args.output else Path(args.out or ".") / (
        Path(args.image).stem + ".pgm")
    target.parent.mkdir(parents=True, exist_ok=True)
    write_pgm(target, img)
    print(str(target))
    return EXIT_OK


def _common_flags(suppress):
    # flags are accepted before and after the verb; the verb-level copy must
    # not reset values given at the top level
    parser = argparse.ArgumentParser(add_help=False)
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--config", help="key = value configuration file", **kw)
    parser.add_argument("--seed", type=int, help="override the config seed", **kw)
    parser.add_argument("--jobs", type=int, help="parallel sweep workers",
                        **(kw or {"default": 1}))
    parser.add_argument("--out", help="output directory", **kw)
    parser.add_argument("-v", "--verbose", action="store_true", **kw)
    return parser


def build_parser():
    parser = _Parser(prog="sgtv", description=__doc__.splitlines()[0],
                     parents=[_common_flags(False)])
    common = _common_flags(True)
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common], help="write noisy k-space and pattern files")
    p.set_defaults(func=cmd_simulate)
    p = sub.add_parser("reconstruct", parents=[common], help="ADMM reconstruction from files")
    p.set_defaults(func=cmd_reconstruct)
    p = sub.add_parser("sweep", parents=[common], help="grid over priors, patterns, alpha, eta")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("metrics", parents=[common], help="PSNR and SSIM of two images")
    p.add_argument("reference")
    p.add_argument("test")
    p.add_argument("--peak", type=float, default=1.0)
    p.set_defaults(func=cmd_metrics)
    p = sub.add_parser("render", parents=[common], help="8-bit PGM of an image file")
    p.add_argument("image")
    p.add_argument("output", nargs="?")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sgtv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"sgtv: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"sgtv: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"sgtv: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
