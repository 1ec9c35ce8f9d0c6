"""Restricted Lie algebras over GF(p) from structure constants and a p-map table.

An algebra of dimension n is stored as a tensor sc of shape (n, n, n) with
sc[i, j] = coordinates of [x_i, x_j], plus a table pmap of shape (n, n) with
pmap[i] = coordinates of x_i^[p]. Construction validates antisymmetry, the
Jacobi identity, and ad(x_i^[p]) = (ad x_i)^p; the p-operation on arbitrary
elements is the unique extension of the table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (AntisymmetryError, DocumentError, JacobiError,
                     PMapCompatibilityError, PreconditionError)
from .linalg import Subspace, asmod, check_prime, inv_scalar, mat_pow

_DOC_KEYS = {"p", "dim", "labels", "brackets", "pmap"}
_BRACKET_KEYS = {"i", "j", "v"}


class RestrictedLieAlgebra:
    def __init__(self, p: int, sc, pmap, labels: Optional[Sequence[str]] = None,
                 validate: bool = True):
        self.p = check_prime(p)
        self.sc = asmod(sc, self.p)
        self.pmap = asmod(pmap, self.p)
        n = self.pmap.shape[0] if self.pmap.ndim else 0
        if self.sc.shape != (n, n, n) or self.pmap.shape != (n, n):
            raise ValueError(f"table shapes {self.sc.shape}/{self.pmap.shape} "
                             f"do not match dimension {n}")
        self.labels: Optional[Tuple[str, ...]] = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels length does not match dimension")
        # ad matrices of basis elements: ad_basis[i] @ v = [x_i, v]
        self.ad_basis = np.ascontiguousarray(self.sc.transpose(0, 2, 1))
        self._cache: Dict = {}
        if validate:
            self.validate()

    @property
    def dim(self) -> int:
        return self.pmap.shape[0]

    # -- validation -----------------------------------------------------

    def validate(self) -> None:
        n, p = self.dim, self.p
        anti = (self.sc + self.sc.transpose(1, 0, 2)) % p
        bad = np.argwhere(anti.any(axis=2))
        if bad.size:
            i, j = bad[0]
            raise AntisymmetryError(int(i), int(j))
        diag = np.arange(n)
        bad = np.argwhere(self.sc[diag, diag].any(axis=1))
        if bad.size:  # [x_i, x_i] = 0 is independent of antisymmetry in char 2
            i = int(bad[0][0])
            raise AntisymmetryError(i, i)
        # jac[i,j,k] = [[x_i,x_j],x_k] summed cyclically
        single = np.einsum("ijm,mkl->ijkl", self.sc, self.sc) % p
        jac = (single + single.transpose(1, 2, 0, 3) + single.transpose(2, 0, 1, 3)) % p
        bad = np.argwhere(jac.any(axis=3))
        if bad.size:
            i, j, k = (int(v) for v in bad[0])
            raise JacobiError(i, j, k)
        for i in range(n):
            lhs = self.ad(self.pmap[i])
            rhs = mat_pow(self.ad_basis[i], p, p)
            if not np.array_equal(lhs, rhs):
                raise PMapCompatibilityError(i)

    # -- basic operations ------------------------------------------------

    def zero_vec(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def basis_vec(self, i: int) -> np.ndarray:
        v = self.zero_vec()
        v[i] = 1
        return v

    def bracket_vec(self, u, v) -> np.ndarray:
        u = asmod(u, self.p)
        v = asmod(v, self.p)
        return np.einsum("i,j,ijk->k", u, v, self.sc) % self.p

    def table_equal(self, other: "RestrictedLieAlgebra") -> bool:
        return (self.p == other.p and np.array_equal(self.sc, other.sc)
                and np.array_equal(self.pmap, other.pmap))

    def ad(self, v) -> np.ndarray:
        """Matrix of w -> [v, w]."""
        v = asmod(v, self.p)
        return np.einsum("i,ikj->kj", v, self.ad_basis) % self.p

    def ppow_vec(self, v) -> np.ndarray:
        """p-operation on an arbitrary element: fold basis components in
        ascending index order through the sum expansion."""
        v = asmod(v, self.p)
        idxs = np.nonzero(v)[0]
        if idxs.size == 0:
            return self.zero_vec()
        # lambda^p = lambda over the prime field, so (c x_i)^[p] = c x_i^[p]
        acc = (v[idxs[0]] * self.basis_vec(idxs[0])) % self.p
        acc_pp = (v[idxs[0]] * self.pmap[idxs[0]]) % self.p
        for i in idxs[1:]:
            comp = (v[i] * self.basis_vec(i)) % self.p
            comp_pp = (v[i] * self.pmap[i]) % self.p
            acc_pp = (acc_pp + comp_pp + self._psum_correction(acc, comp)) % self.p
            acc = (acc + comp) % self.p
        return acc_pp

    def _psum_correction(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Sum of the cross terms s_k(u, v) in (u+v)^[p], computed over the
        truncated polynomial ring GF(p)[t]/(t^p): k*s_k is the coefficient of
        t^(k-1) in (ad(t*u + v))^(p-1) applied to u."""
        p, n = self.p, self.dim
        poly = np.zeros((2, n, n), dtype=np.int64)
        poly[0] = self.ad(v)
        poly[1] = self.ad(u)
        power = _poly_mat_pow(poly, p - 1, p)
        out = self.zero_vec()
        for k in range(1, p):
            if k - 1 < power.shape[0]:
                coeff = (power[k - 1] @ u) % p
                out = (out + inv_scalar(k, p) * coeff) % p
        return out

    def element(self, coords) -> "Element":
        return Element(self, asmod(coords, self.p))

    def table_equal(self, other: "RestrictedLieAlgebra") -> bool:
        return (self.p == other.p and np.array_equal(self.sc, other.sc)
                and np.array_equal(self.pmap, other.pmap))

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"x{i}"

    def __repr__(self) -> str:
        return f"RestrictedLieAlgebra(p={self.p}, dim={self.dim})"


def _poly_mat_mul(a: np.ndarray, b: np.ndarray, p: int, maxdeg: int) -> np.ndarray:
    da, db = a.shape[0] - 1, b.shape[0] - 1
    d = min(da + db, maxdeg)
    n = a.shape[1]
    out = np.zeros((d + 1, n, n), dtype=np.int64)
    for i in range(da + 1):
        for j in range(db + 1):
            if i + j <= d:
                out[i + j] = (out[i + j] + a[i] @ b[j]) % p
    return out


def _poly_mat_pow(m: np.ndarray, e: int, p: int) -> np.ndarray:
    n = m.shape[1]
    out = np.zeros((1, n, n), dtype=np.int64)
    out[0] = np.eye(n, dtype=np.int64)
    base = m % p
    maxdeg = p - 1
    while e > 0:
        if e & 1:
            out = _poly_mat_mul(out, base, p, maxdeg)
        e >>= 1
        if e:
            base = _poly_mat_mul(base, base, p, maxdeg)
    return out


@dataclass(frozen=True)
class Element:
    algebra: RestrictedLieAlgebra
    coords: np.ndarray

    def _check(self, other: "Element") -> None:
        if self.algebra is not other.algebra:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, (self.coords + other.coords) % self.algebra.p)

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, (self.coords - other.coords) % self.algebra.p)

    def __rmul__(self, scalar: int) -> "Element":
        return Element(self.algebra, (scalar * self.coords) % self.algebra.p)

    def bracket(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.algebra.bracket_vec(self.coords, other.coords))

    def ad(self) -> np.ndarray:
        return self.algebra.ad(self.coords)

    def ppow(self) -> "Element":
        return Element(self.algebra, self.algebra.ppow_vec(self.coords))

    def is_zero(self) -> bool:
        return not self.coords.any()

    def __eq__(self, other) -> bool:
        return (isinstance(other, Element) and self.algebra is other.algebra
                and np.array_equal(self.coords, other.coords))


def from_brackets(p: int, dim: int, brackets: Dict[Tuple[int, int], Iterable[int]],
                  pmap, labels: Optional[Sequence[str]] = None,
                  validate: bool = True) -> RestrictedLieAlgebra:
    """Convenience constructor: brackets given only for i < j."""
    sc = np.zeros((dim, dim, dim), dtype=np.int64)
    for (i, j), v in brackets.items():
        if not 0 <= i < j < dim:
            raise ValueError(f"bracket key ({i}, {j}) must satisfy 0 <= i < j < dim")
        vec = asmod(list(v), p)
        sc[i, j] = vec
        sc[j, i] = (-vec) % p
    return RestrictedLieAlgebra(p, sc, pmap, labels=labels, validate=validate)


# -- quotients, products, twists ------------------------------------------


@dataclass
class Quotient:
    algebra: RestrictedLieAlgebra
    projection: np.ndarray   # (d, n): coordinates mod the ideal
    section: np.ndarray      # (n, d): transversal embedding
    ideal: Subspace
    transversal: Tuple[int, ...]


def quotient(L: RestrictedLieAlgebra, ideal: Subspace) -> Quotient:
    """Quotient by a p-ideal, with the deterministic transversal given by the
    unit vectors at the ideal basis' non-pivot columns (ascending)."""
    from .structure import is_p_ideal

    if ideal.p != L.p or ideal.ambient_dim != L.dim:
        raise ValueError("ideal lives in the wrong space")
    if not is_p_ideal(L, ideal):
        raise PreconditionError("quotient requires a p-ideal")
    n, p = L.dim, L.p
    transversal = tuple(ideal.non_pivot_indices())
    d = len(transversal)
    proj = np.zeros((d, n), dtype=np.int64)
    for j in range(n):
        res = ideal.reduce_vector(np.eye(n, dtype=np.int64)[j])
        proj[:, j] = res[list(transversal)]
    section = np.zeros((n, d), dtype=np.int64)
    for t, idx in enumerate(transversal):
        section[idx, t] = 1
    sc = np.zeros((d, d, d), dtype=np.int64)
    for a in range(d):
        for b in range(d):
            sc[a, b] = (proj @ L.bracket_vec(section[:, a], section[:, b])) % p
    pmap = np.zeros((d, d), dtype=np.int64)
    for a in range(d):
        pmap[a] = (proj @ L.ppow_vec(section[:, a])) % p
    labels = tuple(L.label(i) for i in transversal) if L.labels else None
    alg = RestrictedLieAlgebra(p, sc, pmap, labels=labels)
    return Quotient(alg, proj, section, ideal, transversal)


def direct_product(a: RestrictedLieAlgebra, b: RestrictedLieAlgebra) -> RestrictedLieAlgebra:
    if a.p != b.p:
        raise ValueError("factors have different characteristics")
    na, nb = a.dim, b.dim
    n = na + nb
    sc = np.zeros((n, n, n), dtype=np.int64)
    sc[:na, :na, :na] = a.sc
    sc[na:, na:, na:] = b.sc
    pmap = np.zeros((n, n), dtype=np.int64)
    pmap[:na, :na] = a.pmap
    pmap[na:, na:] = b.pmap
    labels = None
    if a.labels and b.labels:
        left = list(a.labels)
        right = [lab if lab not in left else f"{lab}'" for lab in b.labels]
        labels = left + right
    return RestrictedLieAlgebra(a.p, sc, pmap, labels=labels)


def twist_pmap(L: RestrictedLieAlgebra, A: Subspace) -> RestrictedLieAlgebra:
    """Replace the p-map by the one vanishing on a basis of the abelian p-ideal
    A and agreeing with the old p-map on the standard transversal; same bracket.

    The result has the same underlying space and structure constants; the new
    table is re-expressed on the original basis. For any two p-maps over one
    bracket the difference is central (their ad images agree), which callers
    rely on.
    """
    from .structure import is_abelian_subspace, is_p_ideal

    if A.p != L.p or A.ambient_dim != L.dim:
        raise ValueError("subspace lives in the wrong space")
    if not is_abelian_subspace(L, A):
        raise PreconditionError("twist requires an abelian ideal")
    if not is_p_ideal(L, A):
        raise PreconditionError("twist requires a p-ideal")
    n, p, k = L.dim, L.p, A.dim
    transversal = A.non_pivot_indices()
    cols = [A.basis[i] for i in range(k)] + [np.eye(n, dtype=np.int64)[t] for t in transversal]
    basis_mat = np.stack(cols, axis=1) % p  # columns: new basis in old coordinates
    inv = _mat_inv(basis_mat, p)
    sc_new = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            sc_new[a, b] = (inv @ L.bracket_vec(basis_mat[:, a], basis_mat[:, b])) % p
    pmap_new = np.zeros((n, n), dtype=np.int64)
    for a in range(k, n):
        pmap_new[a] = (inv @ L.ppow_vec(basis_mat[:, a])) % p
    twisted = RestrictedLieAlgebra(p, sc_new, pmap_new)
    pmap_orig = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        coords = inv[:, i]
        pmap_orig[i] = (basis_mat @ twisted.ppow_vec(coords)) % p
    return RestrictedLieAlgebra(p, L.sc, pmap_orig, labels=L.labels)


def _mat_inv(m: np.ndarray, p: int) -> np.ndarray:
    from .linalg import _rref

    n = m.shape[0]
    aug, pivots = _rref(np.hstack([m % p, np.eye(n, dtype=np.int64)]), p)
    if list(pivots) != list(range(n)):
        raise ValueError("matrix is singular")
    return aug[:, n:]


# -- JSON document interface -----------------------------------------------


def from_doc(doc: dict) -> RestrictedLieAlgebra:
    """Build an algebra from the JSON document format. Unknown keys and
    malformed shapes are document errors; axiom violations surface as
    validation errors from the constructor."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    unknown = set(doc) - _DOC_KEYS
    if unknown:
        raise DocumentError(f"unknown keys: {sorted(unknown)}")
    for key in ("p", "dim", "pmap"):
        if key not in doc:
            raise DocumentError(f"missing key: {key}")
    p, dim = doc["p"], doc["dim"]
    if not isinstance(p, int) or not isinstance(dim, int) or dim < 0:
        raise DocumentError("p and dim must be non-negative integers")
    pmap = doc["pmap"]
    if not isinstance(pmap, list) or len(pmap) != dim or any(
            not isinstance(row, list) or len(row) != dim for row in pmap):
        raise DocumentError("pmap must be a dim x dim integer table")
    labels = doc.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != dim
                               or any(not isinstance(s, str) for s in labels)):
        raise DocumentError("labels must be a list of dim strings")
    try:
        check_prime(p)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    sc = np.zeros((dim, dim, dim), dtype=np.int64)
    seen = set()
    entries = doc.get("brackets", [])
    if not isinstance(entries, list):
        raise DocumentError("brackets must be a list")
    for entry in entries:
        if not isinstance(entry, dict) or set(entry) != _BRACKET_KEYS:
            raise DocumentError("bracket entries must have exactly the keys i, j, v")
        i, j, v = entry["i"], entry["j"], entry["v"]
        if not isinstance(i, int) or not isinstance(j, int) or not 0 <= i < j < dim:
            raise DocumentError(f"bracket indices must satisfy 0 <= i < j < dim, got ({i}, {j})")
        if (i, j) in seen:
            raise DocumentError(f"duplicate bracket entry ({i}, {j})")
        seen.add((i, j))
        if not isinstance(v, list) or len(v) != dim or any(
                not isinstance(x, int) for x in v):
            raise DocumentError("bracket value must be an integer vector of length dim")
        sc[i, j] = asmod(v, p)
        sc[j, i] = (-sc[i, j]) % p
    if any(not isinstance(x, int) for row in pmap for x in row):
        raise DocumentError("pmap entries must be integers")
    return RestrictedLieAlgebra(p, sc,
                                asmod(pmap, p).reshape(dim, dim),
                                labels=labels)


def to_doc(L: RestrictedLieAlgebra) -> dict:
    doc = {"p": L.p, "dim": L.dim, "pmap": L.pmap.tolist()}
    if L.labels:
        doc["labels"] = list(L.labels)
    brackets = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            if L.sc[i, j].any():
                brackets.append({"i": i, "j": j, "v": L.sc[i, j].tolist()})
    doc["brackets"] = brackets
    return doc
