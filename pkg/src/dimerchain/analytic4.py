"""Closed-form results for the four-qubit dimerized ring.

All functions depend on the couplings only through J2/J1 (up to an overall
energy scale), so the J2 -> infinity limits are reached with ``j1 = 0``.
Concurrences are returned *signed*: negative values mean no entanglement,
and only the signed values satisfy the linear energy relation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _check(j1, j2):
    for name, value in (("j1", j1), ("j2", j2)):
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
    if j1 == 0 and j2 == 0:
        raise ValueError("j1 and j2 cannot both be zero")


def _root(j1, j2):
    return math.sqrt(j1 * j1 + j2 * j2 - j1 * j2)


def ground_energy4(j1: float, j2: float) -> float:
    _check(j1, j2)
    return -2.0 * _root(j1, j2)


@dataclass(frozen=True)
class SpectrumEntry:
    tag: str
    value: float
    multiplicity: int


@dataclass(frozen=True)
class Spectrum4:
    entries: tuple[SpectrumEntry, ...]

    def values(self) -> np.ndarray:
        """The 16 eigenvalues, sorted ascending."""
        return np.sort(np.repeat([e.value for e in self.entries],
                                 [e.multiplicity for e in self.entries]))

    @property
    def trace(self) -> float:
        return sum(e.value * e.multiplicity for e in self.entries)


def full_spectrum4(j1: float, j2: float) -> Spectrum4:
    """Every eigenvalue of the four-qubit ring with its multiplicity.

    Sectors r = 0..2 are solved directly; r = 3, 4 mirror r = 1, 0.
    """
    _check(j1, j2)
    root = _root(j1, j2)
    return Spectrum4((
        SpectrumEntry("2(J1+J2)", 2 * (j1 + j2), 5),  # r=0,4 ; r=1,3 ; r=2
        SpectrumEntry("0", 0.0, 3),                   # r=1,3 ; r=2
        SpectrumEntry("2J1", 2 * j1, 3),
        SpectrumEntry("2J2", 2 * j2, 3),
        SpectrumEntry("+2sqrt(J1^2+J2^2-J1J2)", 2 * root, 1),
        SpectrumEntry("-2sqrt(J1^2+J2^2-J1J2)", -2 * root, 1),
    ))


def c12_analytic(j1: float, j2: float) -> float:
    """Signed concurrence on a J1 bond."""
    _check(j1, j2)
    return (2 * j1 - j2) / (2 * _root(j1, j2))


def c23_analytic(j1: float, j2: float) -> float:
    """Signed concurrence on a J2 bond; c12 with the couplings exchanged."""
    _check(j1, j2)
    return (2 * j2 - j1) / (2 * _root(j1, j2))


def c_mean_analytic(j1: float, j2: float) -> float:
    _check(j1, j2)
    return (j1 + j2) / (4 * _root(j1, j2))


def de_dj1_analytic(j1: float, j2: float) -> float:
    """d(ground energy)/dJ1 = <S12> + <S34>."""
    _check(j1, j2)
    return (j2 - 2 * j1) / _root(j1, j2)


def clipped(c: float) -> float:
    """Physical concurrence max(0, c)."""
    return max(0.0, c)


@dataclass(frozen=True)
class Thresholds4:
    j2_low: float   # C23 <= 0 at or below
    j2_high: float  # C12 <= 0 at or above


def thresholds4(j1: float = 1.0) -> Thresholds4:
    if not math.isfinite(j1) or j1 <= 0:
        raise ValueError(f"j1 must be > 0, got {j1!r}")
    return Thresholds4(j1 / 2, 2 * j1)
