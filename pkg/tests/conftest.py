"""Shared fixtures and independent brute-force oracles.

The oracles recompute definitions from the structure tensor directly (inline
einsum contractions and integer matrix powers) so library results are checked
against something that shares no code path with them.
"""

import itertools

import numpy as np
import pytest

import rla


def all_vectors(n, p):
    """Every coordinate vector of GF(p)^n, lexicographic."""
    return [np.array(v, dtype=np.int64)
            for v in itertools.product(range(p), repeat=n)]


def all_matrices(n, p):
    for flat in itertools.product(range(p), repeat=n * n):
        yield np.array(flat, dtype=np.int64).reshape(n, n)


def brk(L, a, b):
    """[a, b] straight off the structure tensor."""
    return np.einsum("i,j,ijk->k", a % L.p, b % L.p, L.sc) % L.p


def ad_of(L, v):
    """Matrix of x -> [v, x] in the same column convention as Derivation."""
    return np.einsum("i,ijk->kj", v % L.p, L.sc) % L.p


def is_derivation_brute(L, m):
    n, p = L.dim, L.p
    eye = np.eye(n, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            lhs = (m @ L.sc[i, j]) % p
            rhs = (brk(L, m[:, i], eye[j]) + brk(L, eye[i], m[:, j])) % p
            if not np.array_equal(lhs, rhs):
                return False
    return True


def is_restricted_brute(L, m):
    """D(x_i^[p]) = ad(x_i)^(p-1) applied to D(x_i), checked on the basis."""
    n, p = L.dim, L.p
    for i in range(n):
        lhs = (m @ L.pmap[i]) % p
        adp = np.linalg.matrix_power(ad_of(L, np.eye(n, dtype=np.int64)[i]),
                                     p - 1) % p
        rhs = (adp @ m[:, i]) % p
        if not np.array_equal(lhs, rhs):
            return False
    return True


def brute_derivations(L):
    return [m for m in all_matrices(L.dim, L.p) if is_derivation_brute(L, m)]


def brute_restricted_derivations(L):
    return [m for m in brute_derivations(L) if is_restricted_brute(L, m)]


def subspace_vectors(s):
    """All vectors of a Subspace, via coefficient enumeration of its basis."""
    out = []
    for coeffs in itertools.product(range(s.p), repeat=s.dim):
        v = np.zeros(s.ambient_dim, dtype=np.int64)
        for c, row in zip(coeffs, s.basis):
            v = (v + c * row) % s.p
        out.append(tuple(int(x) for x in v))
    return set(out)


def gl2_algebra(p):
    """gl_2 over GF(p) with the matrix p-th power as p-map: an associative
    algebra supplies an independent oracle for the p-power formula."""
    mats = [np.zeros((2, 2), dtype=np.int64) for _ in range(4)]
    for k, (r, c) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        mats[k][r, c] = 1
    sc = np.zeros((4, 4, 4), dtype=np.int64)
    pmap = np.zeros((4, 4), dtype=np.int64)
    for i in range(4):
        for j in range(4):
            sc[i, j] = ((mats[i] @ mats[j] - mats[j] @ mats[i]) % p).reshape(-1)
        pmap[i] = (np.linalg.matrix_power(mats[i], p) % p).reshape(-1)
    return rla.RestrictedLieAlgebra(p, sc, pmap,
                                    labels=["e00", "e01", "e10", "e11"])


@pytest.fixture
def heis2u():
    return rla.heisenberg(2, "unipotent").algebra


@pytest.fixture
def heis2t():
    return rla.heisenberg(2, "toral_center").algebra


@pytest.fixture
def heis3():
    return rla.heisenberg(3, "unipotent").algebra


@pytest.fixture
def rng():
    return np.random.default_rng(rla.Config().seed)
