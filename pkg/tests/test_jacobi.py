"""Jacobi rotation and rotated fermionic modes."""

import math

import numpy as np
import pytest

from susyblocks import (
    InvalidModeError,
    InvalidSectorError,
    build_phi_basis,
    build_R,
    enumerate_basis,
    phi_creation_matrix,
)
from susyblocks.jacobi import full_phi_creation


@pytest.mark.parametrize("n", range(2, 10))
def test_R_is_orthogonal(n):
    R = build_R(n).entries
    assert np.max(np.abs(R @ R.T - np.eye(n))) < 1e-14
    assert np.max(np.abs(R.T @ R - np.eye(n))) < 1e-14


@pytest.mark.parametrize("n", range(2, 10))
def test_R_row_structure(n):
    R = build_R(n)
    ones = np.ones(n)
    assert np.allclose(R.row(n), ones / math.sqrt(n), atol=1e-15)
    # relative rows carry no center-of-mass component
    for b in range(1, n):
        assert abs(R.row(b) @ ones) < 1e-14


def test_R_first_row_is_pair_difference():
    R = build_R(4)
    expect = np.zeros(4)
    expect[0] = 1 / math.sqrt(2)
    expect[1] = -1 / math.sqrt(2)
    assert np.allclose(R.row(1), expect, atol=1e-15)


def test_R_entries_frozen():
    R = build_R(3)
    with pytest.raises(ValueError):
        R.entries[0, 0] = 5.0


def test_R_validation():
    with pytest.raises(InvalidModeError):
        build_R(1)
    with pytest.raises(InvalidModeError):
        build_R(0)


def assemble_full(n, k):
    """phi+_k over the whole 2**n space as a dense array."""
    return full_phi_creation(n, k).to_dense()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_phi_modes_satisfy_car(n):
    # orthogonality of R must transfer the anticommutation relations verbatim
    cre = [assemble_full(n, k) for k in range(1, n + 1)]
    ann = [c.T for c in cre]
    for a in range(n):
        for b in range(n):
            acomm = ann[a] @ cre[b] + cre[b] @ ann[a]
            assert np.max(np.abs(acomm - (a == b) * np.eye(2**n))) < 1e-14
            acc = cre[a] @ cre[b] + cre[b] @ cre[a]
            assert np.max(np.abs(acc)) < 1e-14


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sector_phi_matches_full_restriction(n):
    from susyblocks import full_basis

    fb = full_basis(n)
    for sector in range(n):
        src = enumerate_basis(n, sector)
        tgt = enumerate_basis(n, sector + 1)
        rows = [fb.index_of(st.mask) for st in tgt.states]
        cols = [fb.index_of(st.mask) for st in src.states]
        for k in range(1, n + 1):
            full = assemble_full(n, k)
            block = phi_creation_matrix(n, sector, k).to_dense()
            assert np.max(np.abs(block - full[np.ix_(rows, cols)])) < 1e-14


def test_phi_creation_validation():
    with pytest.raises(InvalidModeError):
        phi_creation_matrix(3, 0, 4)
    with pytest.raises(InvalidModeError):
        phi_creation_matrix(3, 0, 0)
    with pytest.raises(InvalidSectorError):
        phi_creation_matrix(3, 3, 1)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_phi_basis_orthonormal_and_sized(n):
    for sector in range(n):
        pb = build_phi_basis(n, sector)
        assert pb.dim == math.comb(n - 1, sector)
        assert len(pb.tuples) == pb.dim
        gram = pb.vectors.T @ pb.vectors
        assert np.max(np.abs(gram - np.eye(pb.dim))) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_phi_basis_columns_avoid_cm_mode(n):
    # every relative state must be annihilated by phi_n
    for sector in range(1, n):
        pb = build_phi_basis(n, sector)
        phi_n_dagger = phi_creation_matrix(n, sector - 1, n).to_csr()
        killed = phi_n_dagger.T @ pb.vectors
        assert np.max(np.abs(killed)) < 1e-12


def test_phi_basis_sector_zero_is_vacuum():
    pb = build_phi_basis(3, 0)
    assert pb.tuples == ((),)
    assert pb.vectors.shape == (1, 1)
    assert pb.vectors[0, 0] == 1.0


def test_phi_basis_validation():
    with pytest.raises(InvalidSectorError):
        build_phi_basis(3, 3)
    with pytest.raises(InvalidSectorError):
        build_phi_basis(3, -1)
