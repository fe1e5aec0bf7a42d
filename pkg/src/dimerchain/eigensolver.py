"""Ground states and spectra of the sector Hamiltonians.

Small sectors go through ``numpy.linalg.eigh``; larger ones through a
matrix-free Lanczos iteration with full reorthogonalization.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import hamiltonian as ham
from .exceptions import ConvergenceError
from .hamiltonian import CouplingParams
from .spin_basis import Sector, enumerate_sector

log = logging.getLogger(__name__)

DEFAULT_SEED = 42
RESIDUAL_TOL = 1e-10
RITZ_TOL = 1e-12
DEGENERACY_TOL = 1e-10
MAX_ITER = 5000
MAX_RESTARTS = 3
# memory budget for the stored Krylov basis
KRYLOV_BYTES = 1 << 31
METHODS = ("auto", "dense", "lanczos")


@dataclass(frozen=True, eq=False)
class GroundState:
    params: CouplingParams
    sector: Sector
    energy: float
    gap: float
    coefficients: np.ndarray = field(repr=False)
    method: str
    converged: bool
    residual: float
    iterations: int = 0

    @property
    def sector_r(self) -> int:
        return self.sector.r

    @property
    def degenerate(self) -> bool:
        return self.gap < DEGENERACY_TOL * max(1.0, abs(self.energy))


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    sector_breakdown: dict

    def __len__(self):
        return len(self.eigenvalues)


def _residual(params, sector, vec, energy):
    return float(np.linalg.norm(ham.apply(params, sector, vec) - energy * vec))


def _canonical_sign(vec):
    # fix the global sign so dumps are reproducible across methods
    k = int(np.argmax(np.abs(vec)))
    return vec if vec[k] >= 0 else -vec


def dense_ground(params: CouplingParams, sector: Sector) -> GroundState:
    w, u = np.linalg.eigh(ham.dense_matrix(params, sector))
    vec = _canonical_sign(u[:, 0])
    gap = float(w[1] - w[0]) if len(w) > 1 else float("inf")
    res = _residual(params, sector, vec, w[0])
    return GroundState(
        params, sector, float(w[0]), max(gap, 0.0), vec, "dense",
        res <= RESIDUAL_TOL * max(1.0, abs(w[0])), res,
    )


def _lanczos_run(matvec, v0, *, max_iter, max_basis, tol, ritz_tol, scale_hint):
    """One Lanczos pass, restarting from the current Ritz vector when the
    stored basis is full.  Returns (theta, vec, gap, iterations, status)."""
    dim = v0.shape[0]
    basis = np.empty((max_basis, dim))
    q = v0 / np.linalg.norm(v0)
    iterations = 0
    prev_theta = np.inf
    while True:
        alphas, betas = [], []
        k = 0
        while True:
            basis[k] = q
            w = matvec(q)
            iterations += 1
            a = float(q @ w)
            alphas.append(a)
            # two rounds of classical Gram-Schmidt against the whole basis
            for _ in range(2):
                w -= basis[: k + 1].T @ (basis[: k + 1] @ w)
            b = float(np.linalg.norm(w))
            theta, s = eigh_tridiagonal(np.array(alphas), np.array(betas), select="i",
                                        select_range=(0, min(1, k)))
            est = abs(b * s[-1, 0])
            scale = max(1.0, abs(theta[0]), scale_hint)
            exhausted = k + 1 == dim or b <= 1e-13 * scale
            stalled = abs(theta[0] - prev_theta) < ritz_tol * max(1.0, abs(theta[0]))
            prev_theta = theta[0]
            if exhausted or (stalled and est < tol * max(1.0, abs(theta[0]))) \
                    or iterations >= max_iter or k + 1 == max_basis:
                vec = basis[: k + 1].T @ s[:, 0]
                vec /= np.linalg.norm(vec)
                gap = float(theta[1] - theta[0]) if len(theta) > 1 else np.inf
                if exhausted:
                    status = "exhausted"
                elif stalled and est < tol * max(1.0, abs(theta[0])):
                    status = "converged"
                elif iterations >= max_iter:
                    status = "max_iter"
                else:
                    status = "restart"
                break
            betas.append(b)
            q = w / b
            k += 1
        if status != "restart":
            return float(theta[0]), vec, gap, iterations, status
        log.debug("lanczos restart after %d iterations, theta=%r", iterations, theta[0])
        q = vec


def lanczos_ground(
    params: CouplingParams,
    sector: Sector,
    seed: int = DEFAULT_SEED,
    *,
    tol: float = RESIDUAL_TOL,
    ritz_tol: float = RITZ_TOL,
    max_iter: int = MAX_ITER,
    max_basis: int | None = None,
) -> GroundState:
    """Lowest eigenpair of ``sector`` by Lanczos with full reorthogonalization.

    The result is deterministic for a given ``seed``.  ``gap`` comes from the
    two lowest Ritz values and is only as accurate as the second Ritz value;
    an exactly degenerate ground level is not resolvable from a single Krylov
    space, use the dense path for degeneracy checks.
    """
    if sector.n != params.n:
        raise ValueError(f"sector has n={sector.n}, parameters have n={params.n}")
    dim = sector.dim
    if dim < 2:
        raise ValueError("lanczos needs a sector of dimension >= 2")
    if max_basis is None:
        max_basis = max(20, min(dim, 400, KRYLOV_BYTES // (8 * dim)))
    max_basis = min(max_basis, dim)

    def matvec(x):
        return ham.apply(params, sector, x)

    scale_hint = sum(b.coupling for b in ham.bond_list(params))
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(dim)
    total = 0
    for attempt in range(MAX_RESTARTS + 1):
        theta, vec, gap, its, status = _lanczos_run(
            matvec, v0, max_iter=max_iter - total, max_basis=max_basis,
            tol=tol, ritz_tol=ritz_tol, scale_hint=scale_hint,
        )
        total += its
        vec = _canonical_sign(vec)
        res = _residual(params, sector, vec, theta)
        ok = res <= tol * max(1.0, abs(theta))
        if ok:
            return GroundState(params, sector, theta, max(gap, 0.0), vec, "lanczos",
                               True, res, total)
        if status == "max_iter" or total >= max_iter:
            break
        # breakdown on an invariant subspace missing the ground state: perturb and retry
        log.debug("lanczos breakdown (attempt %d, residual %.3e)", attempt, res)
        v0 = vec + 1e-3 * np.random.default_rng([seed, attempt + 1]).standard_normal(dim)
    raise ConvergenceError(
        f"lanczos did not converge for {params} after {total} iterations "
        f"(residual {res:.3e})", residual=res, iterations=total,
    )


def _pick_method(method, sector, dense_cap):
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if method == "auto":
        return "dense" if sector.dim <= dense_cap else "lanczos"
    if method == "lanczos" and sector.dim < 2:
        return "dense"
    return method


def sector_ground(params, sector, method="auto", seed=DEFAULT_SEED,
                  dense_cap=ham.DENSE_CAP, **lanczos_kw) -> GroundState:
    if _pick_method(method, sector, dense_cap) == "dense":
        return dense_ground(params, sector)
    return lanczos_ground(params, sector, seed, **lanczos_kw)


def ground_state(
    params: CouplingParams,
    method: str = "auto",
    seed: int = DEFAULT_SEED,
    *,
    exhaustive: bool = False,
    dense_cap: int = ham.DENSE_CAP,
    **lanczos_kw,
) -> GroundState:
    """Ground state of the ring, searched in the zero-magnetization sector.

    With ``exhaustive=True`` every sector r <= N/2 is searched (the rest
    follow by spin-flip symmetry) and the lowest wins.
    """
    half = params.n // 2
    gs = sector_ground(params, enumerate_sector(params.n, half), method, seed,
                       dense_cap, **lanczos_kw)
    if exhaustive:
        for r in range(half):
            other = sector_ground(params, enumerate_sector(params.n, r), method, seed,
                                  dense_cap, **lanczos_kw)
            if other.energy < gs.energy - DEGENERACY_TOL * max(1.0, abs(gs.energy)):
                gs = other
    if not gs.converged:
        raise ConvergenceError(
            f"ground state for {params} not converged (residual {gs.residual:.3e})",
            residual=gs.residual,
        )
    return gs


def full_spectrum(params: CouplingParams, *, use_mirror: bool = True) -> SpectrumReport:
    """All 2**N eigenvalues, diagonalizing each sector densely.

    With ``use_mirror`` the sectors r > N/2 are copied from N - r.
    """
    n = params.n
    if n > 12:
        raise ValueError(f"full spectrum limited to n <= 12, got {n}")
    breakdown = {}
    for r in range(n + 1):
        if use_mirror and r > n // 2:
            breakdown[r] = breakdown[n - r].copy()
            continue
        sector = enumerate_sector(n, r)
        breakdown[r] = np.linalg.eigvalsh(ham.dense_matrix(params, sector))
    values = np.sort(np.concatenate(list(breakdown.values())))
    return SpectrumReport(values, breakdown)
