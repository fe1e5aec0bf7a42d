from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimerchain import hamiltonian as ham
from dimerchain.hamiltonian import CouplingParams
from dimerchain.spin_basis import (
    build_symmetrized_basis4,
    enumerate_sector,
    flip_permutation,
    sector_permutation,
    translate_bits,
)
from oracles import embed, ring_hamiltonian, swap_full

couplings = st.floats(0.0, 4.0, allow_nan=False)


def test_params_validation():
    with pytest.raises(ValueError):
        CouplingParams(4, 0, 0)
    with pytest.raises(ValueError):
        CouplingParams(4, -1, 1)
    with pytest.raises(ValueError):
        CouplingParams(7, 1, 1)
    with pytest.raises(ValueError):
        CouplingParams(4, float("nan"), 1)


def test_bond_list_four_sites():
    bonds = [tuple(b) for b in ham.bond_list(CouplingParams(4, 1.5, 0.25))]
    assert bonds == [(1, 2, 1.5), (2, 3, 0.25), (3, 4, 1.5), (4, 1, 0.25)]


@pytest.mark.parametrize("n", [6, 8, 10])
def test_bond_list_alternates_and_wraps(n):
    bonds = ham.bond_list(CouplingParams(n, 1.0, 2.0))
    assert len(bonds) == n
    assert [b.coupling for b in bonds].count(1.0) == n // 2
    assert tuple(bonds[-1]) == (n, 1, 2.0)
    counts = np.bincount([s for b in bonds for s in (b.site_a, b.site_b)])
    assert np.all(counts[1:] == 2)


def test_apply_on_all_up_state():
    p = CouplingParams(4, 0.7, 1.9)
    sector = enumerate_sector(4, 0)
    np.testing.assert_allclose(ham.apply(p, sector, [1.0]), [2 * (0.7 + 1.9)])


@pytest.mark.parametrize("kets, eigen", [
    (("1100", "0011"), lambda j1, j2: 2 * j1),
    (("1001", "0110"), lambda j1, j2: 2 * j2),
    (("0101", "1010"), lambda j1, j2: 0.0),
])
def test_apply_minus_vectors_are_eigenvectors(kets, eigen):
    j1, j2 = 1.3, 0.4
    sector = enumerate_sector(4, 2)
    v = sector.vector({kets[0]: 1 / sqrt(2), kets[1]: -1 / sqrt(2)})
    np.testing.assert_allclose(ham.apply(CouplingParams(4, j1, j2), sector, v),
                               eigen(j1, j2) * v, atol=1e-15)


def test_dense_plus_block_r2():
    j1, j2 = 1.1, 2.3
    basis = build_symmetrized_basis4(2).matrix("plus")
    m = ham.dense_matrix(CouplingParams(4, j1, j2), enumerate_sector(4, 2))
    expected = np.array([[2 * j1, 0, 2 * j2], [0, 2 * j2, 2 * j1], [2 * j2, 2 * j1, 0]])
    np.testing.assert_allclose(basis.T @ m @ basis, expected, atol=1e-14)


def test_dense_blocks_r1():
    j1, j2 = 0.9, 1.7
    b = build_symmetrized_basis4(1)
    m = ham.dense_matrix(CouplingParams(4, j1, j2), enumerate_sector(4, 1))
    plus, minus = b.matrix("plus"), b.matrix("minus")
    np.testing.assert_allclose(plus.T @ m @ plus, (j1 + j2) * np.ones((2, 2)), atol=1e-14)
    np.testing.assert_allclose(minus.T @ m @ minus,
                               [[j1 + j2, j1 - j2], [j1 - j2, j1 + j2]], atol=1e-14)
    np.testing.assert_allclose(plus.T @ m @ minus, 0, atol=1e-14)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_sector_blocks_match_bruteforce(n):
    # oracle: swap matrices from explicit bit relabelling on the full space
    p = CouplingParams(n, 0.8, 1.35)
    full = ring_hamiltonian(n, p.j1, p.j2)
    for r in range(n + 1):
        sector = enumerate_sector(n, r)
        np.testing.assert_array_equal(ham.dense_matrix(p, sector),
                                      full[np.ix_(sector.states, sector.states)])


@pytest.mark.parametrize("n", [4, 6])
def test_full_space_hamiltonian_matches_swap_oracle(n):
    np.testing.assert_allclose(ham.full_space_hamiltonian(CouplingParams(n, 1.2, 0.3)),
                               ring_hamiltonian(n, 1.2, 0.3), atol=1e-13)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_bond_trace_bruteforce(n):
    # every swap has trace 2**(n-1) on the full space
    for a in range(1, n + 1):
        assert np.trace(swap_full(n, a, a % n + 1)) == 2 ** (n - 1)
    p = CouplingParams(n, 0.6, 1.7)
    total = sum(np.trace(ham.dense_matrix(p, enumerate_sector(n, r))) for r in range(n + 1))
    assert total == pytest.approx(2 ** (n - 1) * sum(b.coupling for b in ham.bond_list(p)))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([4, 6, 8]), couplings, couplings)
def test_dense_symmetric_and_equals_apply(n, j1, j2):
    if j1 == j2 == 0:
        j1 = 1.0
    p = CouplingParams(n, j1, j2)
    sector = enumerate_sector(n, n // 2)
    m = ham.dense_matrix(p, sector)
    np.testing.assert_array_equal(m, m.T)
    eye = np.eye(sector.dim)
    applied = np.column_stack([ham.apply(p, sector, e) for e in eye])
    np.testing.assert_array_equal(applied, m)


def test_apply_stays_in_sector():
    # the full-space image of a sector vector has no weight outside the sector
    p = CouplingParams(6, 1.0, 0.5)
    sector = enumerate_sector(6, 2)
    v = np.random.default_rng(0).standard_normal(sector.dim)
    image = ring_hamiltonian(6, 1.0, 0.5) @ embed(sector, v)
    outside = np.setdiff1d(np.arange(64), sector.states)
    assert np.all(image[outside] == 0)
    np.testing.assert_allclose(image[sector.states], ham.apply(p, sector, v))


@pytest.mark.parametrize("n", [4, 6, 8])
def test_spin_flip_commutes(n):
    p = CouplingParams(n, 1.0, 0.37)
    for r in range(n + 1):
        s, m = enumerate_sector(n, r), enumerate_sector(n, n - r)
        f = flip_permutation(s, m)
        np.testing.assert_array_equal(ham.dense_matrix(p, m)[np.ix_(f, f)],
                                      ham.dense_matrix(p, s))


@pytest.mark.parametrize("n", [4, 6, 8])
def test_pair_swap_commutes(n):
    p = CouplingParams(n, 1.0, 2.2)
    for r in range(n + 1):
        s = enumerate_sector(n, r)
        t = sector_permutation(s, lambda x: translate_bits(x, n, 2))
        m = ham.dense_matrix(p, s)
        np.testing.assert_allclose(m[np.ix_(t, t)], m, atol=1e-14)


@pytest.mark.parametrize("n", [4, 6, 8])
def test_single_site_translation_only_when_isotropic(n):
    s = enumerate_sector(n, n // 2)
    t = sector_permutation(s, lambda x: translate_bits(x, n, 1))
    iso = ham.dense_matrix(CouplingParams(n, 1.3, 1.3), s)
    np.testing.assert_allclose(iso[np.ix_(t, t)], iso, atol=1e-14)
    dimer = ham.dense_matrix(CouplingParams(n, 1.3, 0.4), s)
    assert np.abs(dimer[np.ix_(t, t)] - dimer).max() > 0.1


def test_swap_expectation_examples():
    s = enumerate_sector(4, 1)
    singlet = s.vector({"1000": 1 / sqrt(2), "0100": -1 / sqrt(2)})
    assert ham.swap_expectation(s, singlet, 1, 2) == pytest.approx(-1)
    product = s.vector({"1000": 1.0})
    assert ham.swap_expectation(s, product, 2, 3) == 1.0
    assert ham.swap_expectation(s, product, 1, 2) == 0.0


def test_swap_expectation_rejects_unnormalized():
    s = enumerate_sector(4, 2)
    with pytest.raises(ValueError):
        ham.swap_expectation(s, np.ones(s.dim), 1, 2)


def test_errors():
    p = CouplingParams(4, 1, 1)
    with pytest.raises(ValueError):
        ham.apply(p, enumerate_sector(4, 2), np.ones(5))
    with pytest.raises(ValueError):
        ham.apply(p, enumerate_sector(6, 3), np.ones(20))
    with pytest.raises(ValueError):
        ham.dense_matrix(p, enumerate_sector(4, 2), cap=5)
