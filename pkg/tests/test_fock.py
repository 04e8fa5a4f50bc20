"""Fock-space operators: canonical signs, CAR algebra, exchange operators.

The independent oracle for everything here is the dense tensor-product
construction: mode i acts as sigma+ on its own qubit factor with a
Jordan-Wigner string of sigma_z on modes below it. The bitmask code never
sees that construction.
"""

import itertools
import math

import numpy as np
import pytest

from susyblocks import (
    InvalidModeError,
    InvalidSectorError,
    annihilation_matrix,
    creation_matrix,
    enumerate_basis,
    full_annihilation,
    full_basis,
    full_creation,
    full_permutation,
    permutation_operator,
)


def jw_creation(n_modes, mode):
    """Dense Jordan-Wigner psi+_mode, basis indexed by mask value."""
    dim = 2**n_modes
    out = np.zeros((dim, dim), dtype=np.int64)
    bit = mode - 1
    for m in range(dim):
        if (m >> bit) & 1:
            continue
        sign = (-1) ** bin(m & ((1 << bit) - 1)).count("1")
        out[m | (1 << bit), m] = sign
    return out


def test_basis_sizes_and_order():
    for n in range(1, 7):
        assert len(full_basis(n)) == 2**n
        for sector in range(n + 1):
            basis = enumerate_basis(n, sector)
            assert len(basis) == math.comb(n, sector)
            masks = [s.mask for s in basis.states]
            assert masks == sorted(masks)
            for idx, m in enumerate(masks):
                assert basis.index_of(m) == idx


def test_state_accessors():
    basis = enumerate_basis(4, 2)
    st = basis.states[0]
    assert st.fermion_number == 2
    assert st.occupied_modes() == (1, 2)


def test_canonical_creation_sign():
    # psi+_2 acting on |{1}> passes one occupied mode: sign -1
    c2 = creation_matrix(3, 1, 2).to_dense()
    basis1 = enumerate_basis(3, 1)
    basis2 = enumerate_basis(3, 2)
    col = basis1.index_of(0b001)
    row = basis2.index_of(0b011)
    assert c2[row, col] == -1
    # psi+_1 acting on |{2}> passes nothing: sign +1
    c1 = creation_matrix(3, 1, 1).to_dense()
    assert c1[basis2.index_of(0b011), basis1.index_of(0b010)] == 1


@pytest.mark.parametrize("n_modes", [2, 3, 4, 5])
def test_full_creation_equals_jordan_wigner(n_modes):
    fb = full_basis(n_modes)
    order = [s.mask for s in fb.states]
    for mode in range(1, n_modes + 1):
        dense = full_creation(n_modes, mode).to_dense()
        oracle = jw_creation(n_modes, mode)[np.ix_(order, order)]
        assert np.array_equal(dense, oracle)


def test_sector_operator_is_restriction_of_full():
    n_modes, sector, mode = 5, 2, 3
    src = enumerate_basis(n_modes, sector)
    tgt = enumerate_basis(n_modes, sector + 1)
    fb = full_basis(n_modes)
    full = full_creation(n_modes, mode).to_dense()
    rows = [fb.index_of(s.mask) for s in tgt.states]
    cols = [fb.index_of(s.mask) for s in src.states]
    assert np.array_equal(
        creation_matrix(n_modes, sector, mode).to_dense(), full[np.ix_(rows, cols)]
    )


def test_annihilation_is_transpose():
    for n_modes, sector, mode in [(3, 1, 2), (4, 2, 4), (5, 3, 1)]:
        c = creation_matrix(n_modes, sector, mode).to_dense()
        a = annihilation_matrix(n_modes, sector + 1, mode).to_dense()
        assert np.array_equal(a, c.T)


def test_car_algebra_full_space():
    n_modes = 4
    eye = np.eye(2**n_modes, dtype=np.int64)
    cs = [full_creation(n_modes, m).to_dense() for m in range(1, n_modes + 1)]
    as_ = [full_annihilation(n_modes, m).to_dense() for m in range(1, n_modes + 1)]
    for i in range(n_modes):
        for j in range(n_modes):
            anti = as_[i] @ cs[j] + cs[j] @ as_[i]
            assert np.array_equal(anti, eye if i == j else 0 * eye)
            assert np.array_equal(cs[i] @ cs[j] + cs[j] @ cs[i], 0 * eye)


def brute_exchange(n_modes, i, j):
    """Dense K_ij by literally transposing mode labels on each basis state."""
    fb = full_basis(n_modes)
    dim = len(fb)
    out = np.zeros((dim, dim), dtype=np.int64)
    for col, st in enumerate(fb.states):
        swapped = []
        for m in st.occupied_modes():
            swapped.append(j if m == i else i if m == j else m)
        # sign of sorting the swapped creation string back to canonical order
        perm = np.argsort(swapped)
        sign = 1
        p = list(perm)
        for a in range(len(p)):
            while p[a] != a:
                b = p[a]
                p[a], p[b] = p[b], p[a]
                sign = -sign
        mask = 0
        for m in swapped:
            mask |= 1 << (m - 1)
        out[fb.index_of(mask), col] = sign
    return out


@pytest.mark.parametrize("n_modes", [2, 3, 4, 5])
def test_permutation_operator_against_relabeling(n_modes):
    for i, j in itertools.combinations(range(1, n_modes + 1), 2):
        full = full_permutation(n_modes, i, j).to_dense()
        assert np.array_equal(full, brute_exchange(n_modes, i, j))


def test_permutation_sector_action_edges():
    # empty sector is symmetric, full sector is the sign representation
    assert np.array_equal(permutation_operator(4, 0, 1, 3).to_dense(), [[1]])
    assert np.array_equal(permutation_operator(4, 4, 1, 3).to_dense(), [[-1]])


def test_permutation_involution_and_braid():
    n_modes = 4
    for sector in range(n_modes + 1):
        dim = math.comb(n_modes, sector)
        eye = np.eye(dim, dtype=np.int64)
        k12 = permutation_operator(n_modes, sector, 1, 2).to_dense()
        k23 = permutation_operator(n_modes, sector, 2, 3).to_dense()
        k13 = permutation_operator(n_modes, sector, 1, 3).to_dense()
        assert np.array_equal(k12 @ k12, eye)
        assert np.array_equal(k12 @ k23 @ k12, k13)
        assert np.array_equal(k23 @ k12 @ k23, k13)


def test_argument_validation():
    with pytest.raises(InvalidSectorError):
        enumerate_basis(3, 4)
    with pytest.raises(InvalidSectorError):
        enumerate_basis(3, -1)
    with pytest.raises(InvalidModeError):
        creation_matrix(3, 1, 0)
    with pytest.raises(InvalidModeError):
        permutation_operator(3, 1, 2, 2)
    with pytest.raises(InvalidModeError):
        full_basis(13)  # full-space helpers are capped
