"""The dimerized Heisenberg ring in swap-operator form.

    H = sum_i [ J1 * S(2i-1, 2i) + J2 * S(2i, 2i+1) ],   site N+1 == site 1

where S(a, b) = (1 + sigma_a . sigma_b) / 2 exchanges the two spins.  In the
computational basis each S(a, b) is a permutation matrix, so H restricted to a
magnetization sector is a weighted sum of index permutations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .spin_basis import Sector, validate_n_sites

DENSE_CAP = 4096
# cache per-bond permutations only while they fit in this many int64 entries
_PERM_CACHE_ENTRIES = 1 << 26


@dataclass(frozen=True)
class CouplingParams:
    """Ring size and the intra-/inter-dimer exchange constants."""

    n: int
    j1: float
    j2: float

    def __post_init__(self):
        object.__setattr__(self, "n", validate_n_sites(self.n))
        for name in ("j1", "j2"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.j1 == 0 and self.j2 == 0:
            raise ValueError("j1 and j2 cannot both be zero")

    def replace(self, **changes) -> "CouplingParams":
        return CouplingParams(**{"n": self.n, "j1": self.j1, "j2": self.j2, **changes})


@dataclass(frozen=True)
class Bond:
    site_a: int
    site_b: int
    coupling: float
    kind: str  # "j1" or "j2"

    def __iter__(self):
        return iter((self.site_a, self.site_b, self.coupling))


def bond_list(params: CouplingParams) -> list[Bond]:
    """Ring bonds with 1-based sites; (1, 2) carries J1, the wrap (N, 1) carries J2."""
    bonds = []
    for a in range(1, params.n + 1):
        b = a % params.n + 1
        if a % 2:
            bonds.append(Bond(a, b, params.j1, "j1"))
        else:
            bonds.append(Bond(a, b, params.j2, "j2"))
    return bonds


def _check_site(site, n):
    if isinstance(site, bool) or int(site) != site or not 1 <= site <= n:
        raise ValueError(f"site must be in [1, {n}], got {site!r}")
    return int(site)


def swap_permutation(sector: Sector, site_a: int, site_b: int) -> np.ndarray:
    """Index array ``p`` such that ``(S_ab v)[i] == v[p[i]]`` on ``sector``.

    Aligned pairs map to themselves; anti-aligned pairs to the bit-swapped state.
    """
    a = _check_site(site_a, sector.n) - 1
    b = _check_site(site_b, sector.n) - 1
    if a == b:
        raise ValueError("swap needs two distinct sites")
    key = ("swap", min(a, b), max(a, b))
    perm = sector._cache.get(key)
    if perm is not None:
        return perm
    s = sector.states
    differ = ((s >> a) ^ (s >> b)) & 1
    perm = sector.index_of(s ^ (differ * ((1 << a) | (1 << b))))
    if sector.dim * (len(sector._cache) + 1) <= _PERM_CACHE_ENTRIES:
        perm.setflags(write=False)
        sector._cache[key] = perm
    return perm


def _check_sector(params, sector):
    if sector.n != params.n:
        raise ValueError(f"sector has n={sector.n}, parameters have n={params.n}")


def apply(params: CouplingParams, sector: Sector, v: np.ndarray) -> np.ndarray:
    """Matrix-free product H @ v on one magnetization sector."""
    _check_sector(params, sector)
    v = np.asarray(v, dtype=float)
    if v.shape[0] != sector.dim:
        raise ValueError(f"vector has length {v.shape[0]}, sector dimension is {sector.dim}")
    out = np.zeros_like(v)
    for bond in bond_list(params):
        if bond.coupling == 0:
            continue
        out += bond.coupling * v[swap_permutation(sector, bond.site_a, bond.site_b)]
    return out


def dense_matrix(params: CouplingParams, sector: Sector, cap: int = DENSE_CAP) -> np.ndarray:
    """Materialize H on ``sector`` (same permutations as ``apply``)."""
    _check_sector(params, sector)
    if sector.dim > cap:
        raise ValueError(f"sector dimension {sector.dim} exceeds dense cap {cap}")
    m = np.zeros((sector.dim, sector.dim))
    rows = np.arange(sector.dim)
    for bond in bond_list(params):
        m[rows, swap_permutation(sector, bond.site_a, bond.site_b)] += bond.coupling
    return m


def swap_expectation(sector: Sector, v: np.ndarray, site_a: int, site_b: int) -> float:
    """<v| S_ab |v> for a normalized real vector on ``sector``."""
    v = np.asarray(v, dtype=float)
    if v.shape != (sector.dim,):
        raise ValueError(f"vector shape {v.shape} does not match sector dimension {sector.dim}")
    norm = np.linalg.norm(v)
    if abs(norm - 1) > 1e-12:
        raise ValueError(f"vector must be normalized, |v| = {norm!r}")
    return float(v @ v[swap_permutation(sector, site_a, site_b)])


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def full_space_hamiltonian(params: CouplingParams) -> np.ndarray:
    """H on all 2**N states built from Pauli Kronecker products.

    Deliberately shares nothing with the sector machinery; it is the brute-force
    reference.  Row index uses the package bit convention (site k <-> bit k-1).
    """
    n = params.n
    if n > 12:
        raise ValueError("full-space reference limited to n <= 12")
    eye = np.eye(2, dtype=complex)

    def site_op(op, site):
        # kron's leftmost factor is the most significant bit, i.e. site n
        factors = [op if k == site else eye for k in range(n, 0, -1)]
        return reduce(np.kron, factors)

    h = np.zeros((1 << n, 1 << n), dtype=complex)
    for a, b, j in bond_list(params):
        sigma_dot = sum(site_op(p, a) @ site_op(p, b) for p in _PAULI)
        h += j * 0.5 * (np.eye(1 << n) + sigma_dot)
    assert np.abs(h.imag).max() < 1e-12
    return h.real
