"""Double-split ADMM for ``min_{v >= 0} 1/2 |E v - d|^2 + alpha R(v)``.

The problem is split as ``x = F z`` (complex k-space copy) and ``v = z``
(real, regularized copy). The first block updates ``v`` through the
structured-TV prox and ``x`` by a diagonal solve; the second block averages
both copies back into ``z``. ``b`` and ``u`` are the scaled multipliers.
"""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, NumericalError
from .fgp import prox_structured_tv
from .grid import Anisotropy
from .mri import dft2, forward, idft2, mask_counts, sample_adjoint
from .priors import eval_regularizer

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdmmConfig:
    alpha: float
    rho0: float = 1.0
    outer_iterations: int = 200
    inner_prox_iterations: int = 20
    rho_mu: float = 10.0
    rho_tau: float = 2.0
    adapt_rho: bool = True
    warm_start_dual: bool = True
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.alpha < 0:
            raise DataError(f"alpha must be nonnegative, got {self.alpha}")
        if not self.rho0 > 0:
            raise DataError(f"rho0 must be positive, got {self.rho0}")
        if self.outer_iterations < 1 or self.inner_prox_iterations < 1:
            raise DataError("iteration counts must be positive")
        if not (self.rho_mu > 1 and self.rho_tau > 1):
            raise DataError("rho_mu and rho_tau must exceed 1")
        if self.tolerance < 0:
            raise DataError("tolerance must be nonnegative")


@dataclass
class AdmmState:
    v: np.ndarray
    x: np.ndarray
    z: np.ndarray
    b: np.ndarray
    u: np.ndarray
    rho: float
    y: np.ndarray
    z_prev: np.ndarray = None
    iteration: int = 0

    @classmethod
    def zeros(cls, shape, rho):
        return cls(
            v=np.zeros(shape), x=np.zeros(shape, complex), z=np.zeros(shape),
            b=np.zeros(shape, complex), u=np.zeros(shape), rho=rho,
            y=np.zeros((2,) + tuple(shape)), z_prev=np.zeros(shape),
        )


@dataclass
class Diagnostics:
    objective: list = field(default_factory=list)
    primal_residual: list = field(default_factory=list)
    dual_residual: list = field(default_factory=list)
    rho: list = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self):
        return len(self.objective)

    def rows(self):
        for k in range(self.iterations):
            yield (k + 1, self.objective[k], self.primal_residual[k],
                   self.dual_residual[k], self.rho[k])

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "objective", "primal_residual", "dual_residual", "rho"])
            for it, *vals in self.rows():
                w.writerow([it] + [f"{x:.12g}" for x in vals])


def x_update(sd, counts, fz, b, rho):
    """``(S*S + rho I)^-1 [S*d + rho (F z - b)]`` with ``S*S = diag(counts)``."""
    return (sd + rho * (fz - b)) / (counts + rho)


def residuals(state, fz):
    """Primal ``|(x - Fz, v - z)|`` and dual ``rho |(F(z - z_prev), z - z_prev)|`` norms."""
    r = np.sqrt(np.sum(np.abs(state.x - fz) ** 2) + np.sum((state.v - state.z) ** 2))
    dz = state.z - state.z_prev
    # F is unitary, so |F dz| = |dz|
    s = state.rho * np.sqrt(2.0 * np.sum(dz**2))
    return float(r), float(s)


def rho_adapt(state, primal, dual, mu=10.0, tau=2.0):
    """Residual balancing; scaled multipliers are rescaled with rho. Returns True on change."""
    if primal > mu * dual:
        state.rho *= tau
        state.b = state.b / tau
        state.u = state.u / tau
        return True
    if dual > mu * primal:
        state.rho /= tau
        state.b = state.b * tau
        state.u = state.u * tau
        return True
    return False


def data_objective(pattern, d, v, aniso, alpha):
    """``1/2 |E v - d|^2 + alpha R(v)``."""
    fit = 0.5 * float(np.sum(np.abs(forward(pattern, v) - d) ** 2))
    if alpha == 0:
        return fit
    return fit + alpha * eval_regularizer(aniso, v)


def reconstruct(d, pattern, aniso, cfg, callback=None):
    """Run ADMM and return ``(v, Diagnostics)``.

    ``callback(state)`` is invoked after every outer iteration if given.
    """
    d = np.asarray(d, dtype=complex)
    if d.shape != (len(pattern),):
        raise DataError(f"data length {d.shape} does not match pattern length {len(pattern)}")
    if not np.all(np.isfinite(d)):
        raise DataError("k-space data contains non-finite values")
    shape = pattern.shape
    if aniso is None:
        aniso = Anisotropy.identity(shape)
    if tuple(aniso.shape) != shape:
        raise DataError(f"anisotropy shape {aniso.shape} does not match grid {shape}")

    counts = mask_counts(pattern)
    sd = sample_adjoint(pattern, d)
    state = AdmmState.zeros(shape, cfg.rho0)
    diag = Diagnostics()
    fz = np.zeros(shape, complex)

    for it in range(cfg.outer_iterations):
        # first block: v and x are independent of each other
        prox = prox_structured_tv(
            state.z - state.u, cfg.alpha / state.rho, aniso, "nonneg",
            cfg.inner_prox_iterations, y0=state.y if cfg.warm_start_dual else None)
        state.v = prox.v
        state.y = prox.y
        state.x = x_update(sd, counts, fz, state.b, state.rho)

        # second block
        state.z_prev = state.z
        state.z = 0.5 * (idft2(state.x + state.b).real + state.v + state.u)
        fz = dft2(state.z)

        state.b = state.b + state.x - fz
        state.u = state.u + state.v - state.z
        state.iteration = it + 1

        primal, dual = residuals(state, fz)
        obj = data_objective(pattern, d, state.v, aniso, cfg.alpha)
        if not (np.isfinite(obj) and np.isfinite(primal) and np.isfinite(dual)):
            raise NumericalError(f"non-finite values at ADMM iteration {it + 1}")
        diag.objective.append(obj)
        diag.primal_residual.append(primal)
        diag.dual_residual.append(dual)
        diag.rho.append(state.rho)
        if callback is not None:
            callback(state)

        if cfg.tolerance > 0:
            scale_p = max(np.sqrt(np.sum(np.abs(state.x) ** 2) + np.sum(state.v**2)),
                          np.sqrt(2.0 * np.sum(state.z**2)), 1e-300)
            scale_d = max(state.rho * np.sqrt(np.sum(np.abs(state.b) ** 2)
                                              + np.sum(state.u**2)), 1e-300)
            if primal / scale_p < cfg.tolerance and dual / scale_d < cfg.tolerance:
                diag.converged = True
                log.debug("ADMM converged after %d iterations", it + 1)
                break

        if cfg.adapt_rho:
            rho_adapt(state, primal, dual, cfg.rho_mu, cfg.rho_tau)

    return state.v, diag
