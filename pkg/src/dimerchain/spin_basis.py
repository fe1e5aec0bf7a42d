"""Computational basis, magnetization sectors and discrete symmetries.

Bit convention used throughout the package: site ``k`` (1-based) is stored
in bit ``k - 1``.  A set bit means the spin on that site is reversed.  Ket
strings are written site 1 first, so ``"1000"`` is site 1 reversed, i.e. the
integer ``0b0001``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, sqrt

import numpy as np

MAX_SITES = 24


def validate_n_sites(n):
    """Raise ``ValueError`` unless ``n`` is an even ring size in [4, 24]."""
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"number of sites must be an integer, got {n!r}")
    n = int(n)
    if n % 2:
        raise ValueError(f"number of sites must be even, got {n}")
    if n < 4:
        raise ValueError(f"number of sites must be >= 4, got {n}")
    if n > MAX_SITES:
        raise ValueError(f"number of sites must be <= {MAX_SITES}, got {n}")
    return n


@dataclass(frozen=True)
class BasisState:
    """A computational basis state of ``n`` qubits stored as a bit pattern."""

    bits: int
    n: int

    def __post_init__(self):
        validate_n_sites(self.n)
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bits={self.bits} out of range for n={self.n}")

    @classmethod
    def from_ket(cls, ket: str) -> "BasisState":
        """Parse a ket label such as ``"1000"`` (site 1 first)."""
        if set(ket) - {"0", "1"}:
            raise ValueError(f"invalid ket label {ket!r}")
        bits = sum(1 << i for i, c in enumerate(ket) if c == "1")
        return cls(bits, len(ket))

    @property
    def ket(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    @property
    def reversed_spins(self) -> int:
        return self.bits.bit_count()

    def __repr__(self):
        return f"BasisState(|{self.ket}>)"


def spin_flip(state: BasisState) -> BasisState:
    """Flip every spin (the global sigma_x product)."""
    return BasisState(state.bits ^ ((1 << state.n) - 1), state.n)


def translate_bits(bits, n, shift):
    """Move the bit on site ``i`` to site ``i + shift`` (mod n).

    Works on Python ints and on integer numpy arrays alike.
    """
    shift %= n
    mask = (1 << n) - 1
    if shift == 0:
        return bits
    return ((bits << shift) | (bits >> (n - shift))) & mask


def pair_swap(state: BasisState, n: int | None = None) -> BasisState:
    """Translate the ring by two sites.

    On four qubits this is the dimer exchange |m1 m2 m3 m4> -> |m3 m4 m1 m2>.
    """
    n = state.n if n is None else n
    if n != state.n:
        raise ValueError(f"state has {state.n} sites, got n={n}")
    return BasisState(translate_bits(state.bits, n, 2), n)


@dataclass(frozen=True, eq=False)
class Sector:
    """Basis states of an ``n``-site ring with exactly ``r`` reversed spins.

    ``states`` is sorted ascending, which makes ``index_of`` a binary search.
    """

    n: int
    r: int
    states: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.states.setflags(write=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def __len__(self):
        return len(self.states)

    @property
    def basis(self) -> tuple[BasisState, ...]:
        if "basis" not in self._cache:
            self._cache["basis"] = tuple(BasisState(int(s), self.n) for s in self.states)
        return self._cache["basis"]

    def index_of(self, bits):
        """Position of ``bits`` (int, BasisState or int array) in the basis.

        Raises ``KeyError`` for states outside the sector.
        """
        if isinstance(bits, BasisState):
            bits = bits.bits
        arr = np.asarray(bits, dtype=np.int64)
        idx = np.searchsorted(self.states, arr)
        idx_c = np.minimum(idx, self.dim - 1)
        if not np.all(self.states[idx_c] == arr):
            raise KeyError(f"state(s) not in sector n={self.n}, r={self.r}")
        return int(idx_c) if idx_c.ndim == 0 else idx_c

    def __contains__(self, bits):
        if isinstance(bits, BasisState):
            if bits.n != self.n:
                return False
            bits = bits.bits
        i = np.searchsorted(self.states, bits)
        return bool(i < self.dim and self.states[i] == bits)

    def vector(self, amplitudes: dict) -> np.ndarray:
        """Dense coefficient vector from a ``{ket or bits: amplitude}`` map."""
        v = np.zeros(self.dim)
        for key, amp in amplitudes.items():
            if isinstance(key, str):
                key = BasisState.from_ket(key)
            v[self.index_of(key)] += amp
        return v


def enumerate_sector(n: int, r: int) -> Sector:
    """All states of ``n`` sites with ``r`` reversed spins, ascending."""
    n = validate_n_sites(n)
    if isinstance(r, bool) or int(r) != r or not 0 <= r <= n:
        raise ValueError(f"reversed-spin count must be in [0, {n}], got {r!r}")
    r = int(r)
    # uint32 keeps the 2**24 scratch array at 64 MB
    everything = np.arange(1 << n, dtype=np.uint32)
    states = everything[np.bitwise_count(everything) == r].astype(np.int64)
    assert len(states) == comb(n, r)
    return Sector(n, r, states)


def sector_permutation(sector: Sector, fn) -> np.ndarray:
    """Index array ``p`` with ``sector.states[p[i]] == fn(sector.states[i])``.

    ``fn`` must map the sector onto itself (it receives the whole state array).
    """
    return sector.index_of(fn(sector.states))


def flip_permutation(sector: Sector, mirror: Sector) -> np.ndarray:
    """Map sector index -> index of the spin-flipped state in ``mirror``."""
    if mirror.n != sector.n or mirror.r != sector.n - sector.r:
        raise ValueError("mirror sector must have n - r reversed spins")
    return mirror.index_of(sector.states ^ ((1 << sector.n) - 1))


@dataclass(frozen=True)
class PairVector:
    """The normalized superposition (|first> + sign |second>) / sqrt(2)."""

    first: BasisState
    second: BasisState
    sign: int

    def to_vector(self, sector: Sector) -> np.ndarray:
        v = np.zeros(sector.dim)
        v[sector.index_of(self.first)] = 1 / sqrt(2)
        v[sector.index_of(self.second)] += self.sign / sqrt(2)
        return v


@dataclass(frozen=True)
class SymmetrizedBasis4:
    """Block basis of the four-qubit sector ``sector_r``.

    For r = 1 the blocks are the +1 / -1 eigenspaces of the dimer exchange.
    For r = 2 they are the +1 / -1 eigenspaces of the global spin flip, whose
    elements are also all dimer-exchange eigenvectors (|0101> and |1010> are
    both fixed by the exchange, so their difference has exchange eigenvalue +1).
    Both blocks are invariant under the Hamiltonian.
    """

    sector_r: int
    plus_block: tuple[PairVector, ...]
    minus_block: tuple[PairVector, ...]

    def matrix(self, block: str, sector: Sector | None = None) -> np.ndarray:
        """Columns are the block's vectors expanded in ``sector``."""
        if sector is None:
            sector = enumerate_sector(4, self.sector_r)
        vecs = self.plus_block if block == "plus" else self.minus_block
        return np.column_stack([pv.to_vector(sector) for pv in vecs])


_PAIRS4 = {
    1: (("1000", "0010"), ("0100", "0001")),
    2: (("1100", "0011"), ("1001", "0110"), ("0101", "1010")),
}


def build_symmetrized_basis4(r: int) -> SymmetrizedBasis4:
    if r not in _PAIRS4:
        raise ValueError(f"symmetrized four-qubit basis exists for r in (1, 2), got {r!r}")
    blocks = {
        sign: tuple(
            PairVector(BasisState.from_ket(a), BasisState.from_ket(b), sign)
            for a, b in _PAIRS4[r]
        )
        for sign in (1, -1)
    }
    return SymmetrizedBasis4(r, blocks[1], blocks[-1])
