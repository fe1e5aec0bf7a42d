"""Pairwise ground-state entanglement.

Two independent routes to the concurrence of a pair of qubits:

* the swap shortcut ``C = -<S_ab>``, valid because the unique ground state of
  the ring is a total singlet (SU(2)-invariant reduced states);
* the Wootters formula on the two-qubit reduced density matrix, valid for any
  state and used as the oracle for the first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hamiltonian as ham
from .eigensolver import DEFAULT_SEED, GroundState, ground_state
from .exceptions import DegenerateGroundStateError, NumericalError, SymmetryBreakingError
from .hamiltonian import CouplingParams
from .spin_basis import Sector

BOND_CLASS_TOL = 1e-9

# sigma_y (x) sigma_y in the (m_a, m_b) = 00, 01, 10, 11 ordering; real
_YY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=float)


def _require_unique(gs: GroundState):
    if not gs.converged:
        raise NumericalError(f"ground state for {gs.params} is not converged")
    if gs.degenerate:
        raise DegenerateGroundStateError(
            f"ground state for {gs.params} is degenerate (gap {gs.gap:.3e})"
        )


def signed_concurrence(gs: GroundState, site_a: int, site_b: int) -> float:
    """``-<S_ab>`` on the ground state (no clipping at zero)."""
    _require_unique(gs)
    return -ham.swap_expectation(gs.sector, gs.coefficients, site_a, site_b)


def _pair_amplitudes(sector: Sector, v: np.ndarray, site_a: int, site_b: int) -> np.ndarray:
    """Amplitude matrix ``psi[env, 2*m_a + m_b]`` over environment configurations."""
    n = sector.n
    a = ham._check_site(site_a, n) - 1
    b = ham._check_site(site_b, n) - 1
    if a == b:
        raise ValueError("need two distinct sites")
    s = sector.states
    pair = 2 * ((s >> a) & 1) + ((s >> b) & 1)
    env = s & ~((1 << a) | (1 << b))
    envs, env_idx = np.unique(env, return_inverse=True)
    psi = np.zeros((len(envs), 4), dtype=np.asarray(v).dtype)
    psi[env_idx, pair] = v
    return psi


def reduced_density_matrix(sector: Sector, v: np.ndarray, site_a: int, site_b: int) -> np.ndarray:
    """4x4 reduced state of sites ``a``, ``b``; index ``2*m_a + m_b``."""
    psi = _pair_amplitudes(sector, v, site_a, site_b)
    return psi.T @ psi.conj()


def _concurrence_from_columns(cols: np.ndarray) -> float:
    """Wootters concurrence of rho = cols.T @ cols.conj().

    The lambdas (square roots of the eigenvalues of rho @ rho~) are the
    singular values of tau = A^T (YY) A with rho = A A^dagger.  Reducing
    ``cols`` by QR keeps everything 4x4 and avoids square roots of small,
    noisy eigenvalues.
    """
    if cols.shape[0] > 4:
        cols = np.linalg.qr(cols, mode="r")
    tau = cols @ _YY @ cols.T
    lam = np.sort(np.linalg.svd(tau, compute_uv=False))[::-1]
    lam = np.concatenate([lam, np.zeros(4 - len(lam))])
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_of_density_matrix(rho: np.ndarray) -> float:
    """Wootters concurrence of an arbitrary two-qubit density matrix."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    w, u = np.linalg.eigh(rho)
    # rho = A A^dagger with A = u sqrt(w); rows of cols are A^T
    cols = (u * np.sqrt(np.clip(w, 0, None))).T
    return _concurrence_from_columns(cols)


def wootters_concurrence(gs: GroundState, site_a: int, site_b: int) -> float:
    """Concurrence of the reduced two-qubit state; no symmetry assumed."""
    v = gs.coefficients
    if abs(np.linalg.norm(v) - 1) > 1e-12:
        raise ValueError("ground-state coefficients are not normalized")
    return _concurrence_from_columns(_pair_amplitudes(gs.sector, v, site_a, site_b))


@dataclass(frozen=True)
class ConcurrenceReport:
    params: CouplingParams
    c12_signed: float
    c23_signed: float
    c12: float
    c23: float
    c_mean_signed: float
    c_mean: float
    energy: float
    energy_relation_residual: float
    gap: float
    degenerate: bool = False

    @classmethod
    def degenerate_point(cls, gs: GroundState) -> "ConcurrenceReport":
        nan = math.nan
        return cls(gs.params, nan, nan, nan, nan, nan, nan, gs.energy, nan, gs.gap, True)


def _bond_values(gs: GroundState):
    values = {"j1": [], "j2": []}
    for bond in ham.bond_list(gs.params):
        values[bond.kind].append(signed_concurrence(gs, bond.site_a, bond.site_b))
    spread = max(max(v) - min(v) for v in values.values())
    if spread > BOND_CLASS_TOL:
        raise SymmetryBreakingError(
            f"bonds of one coupling class differ by {spread:.3e} for {gs.params}", spread
        )
    return values


def mean_concurrence(gs: GroundState) -> tuple[float, float]:
    """(signed, clipped) average over all N nearest-neighbour bonds."""
    values = _bond_values(gs)
    every = values["j1"] + values["j2"]
    return float(np.mean(every)), float(np.mean(np.maximum(every, 0.0)))


def energy_relation_residual(gs: GroundState, report: ConcurrenceReport) -> float:
    """E/N + (J1*C12 + J2*C23)/2, zero for an exact ground state."""
    return _relation(gs.params, gs.energy, report.c12_signed, report.c23_signed)


def _relation(p, energy, c12, c23):
    return energy / p.n + (p.j1 * c12 + p.j2 * c23) / 2


def concurrence_report(gs: GroundState) -> ConcurrenceReport:
    if gs.degenerate:
        return ConcurrenceReport.degenerate_point(gs)
    values = _bond_values(gs)
    c12s, c23s = values["j1"][0], values["j2"][0]
    signed, clipped = mean_concurrence(gs)
    return ConcurrenceReport(
        gs.params, c12s, c23s, max(0.0, c12s), max(0.0, c23s), signed, clipped,
        gs.energy, _relation(gs.params, gs.energy, c12s, c23s), gs.gap,
    )


def feynman_hellmann_check(params: CouplingParams, h: float = 1e-5, method: str = "auto",
                           seed: int = DEFAULT_SEED) -> float:
    """|central-difference dE/dJ1 - sum of <S> over the J1 bonds|.

    Truncation error is O(h^2).
    """
    if not 1e-7 <= h <= 1e-3:
        raise ValueError(f"step must be in [1e-7, 1e-3], got {h!r}")
    if params.j1 < h:
        raise ValueError(f"j1={params.j1} too small for a central difference with h={h}")
    states = [ground_state(params.replace(j1=params.j1 + d), method, seed) for d in (-h, 0, h)]
    for gs in states:
        _require_unique(gs)
    lo, mid, hi = states
    derivative = (hi.energy - lo.energy) / (2 * h)
    expected = sum(
        ham.swap_expectation(mid.sector, mid.coefficients, b.site_a, b.site_b)
        for b in ham.bond_list(params) if b.kind == "j1"
    )
    return abs(derivative - expected)
