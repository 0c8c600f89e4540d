"""Exact dense linear algebra over a prime field F_p.

Matrices are plain ``numpy`` integer arrays with entries in ``[0, p)``; every
function takes the modulus explicitly.  Over F_2 the elimination runs on
bit-packed rows (64 columns per machine word), which is what keeps the
resolutions over the three-dimensional local algebras tractable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_PRIME = 97


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class FieldSpec:
    """The prime field F_p, 2 <= p <= 97."""

    p: int

    def __post_init__(self):
        if not (2 <= self.p <= MAX_PRIME) or not is_prime(self.p):
            raise ValueError(f"p must be a prime in [2, {MAX_PRIME}], got {self.p}")


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def as_matrix(a, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    m = np.asarray(a, dtype=np.int64)
    if shape is not None:
        m = m.reshape(shape)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {m.shape}")
    return np.mod(m, p)


_EXACT_FLOAT = 2**53


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product mod ``p``.

    Reduced operands are multiplied in float64 through BLAS whenever every
    partial sum is an exactly representable integer, and in int64 otherwise.
    """
    a = np.mod(np.asarray(a, dtype=np.int64), p)
    b = np.mod(np.asarray(b, dtype=np.int64), p)
    if a.shape[-1] * (p - 1) ** 2 < _EXACT_FLOAT:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return np.mod(prod, p).astype(np.int64)
    return (a @ b) % p


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


# --------------------------------------------------------------------------
# row reduction


def _rref_gf2(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return m.copy(), []
    nwords = (cols + 63) // 64
    padded = np.zeros((rows, nwords * 64), dtype=np.uint8)
    padded[:, :cols] = m
    packed = np.packbits(padded, axis=1).view(">u8").astype(np.uint64)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        w, shift = divmod(c, 64)
        bit = np.uint64(1) << np.uint64(63 - shift)
        colbits = (packed[r:, w] & bit) != 0
        hits = np.flatnonzero(colbits)
        if hits.size == 0:
            continue
        piv = r + int(hits[0])
        if piv != r:
            packed[[r, piv]] = packed[[piv, r]]
        others = np.flatnonzero((packed[:, w] & bit) != 0)
        others = others[others != r]
        if others.size:
            packed[others] ^= packed[r]
        pivots.append(c)
        r += 1
    out = np.unpackbits(packed.astype(">u8").view(np.uint8), axis=1)[:, :cols]
    return out.astype(np.int64), pivots


def _rref_modp(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = m.copy()
    rows, cols = a.shape
    inv = inverse_table(p)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(a[r:, c])
        if hits.size == 0:
            continue
        piv = r + int(hits[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * inv[a[r, c]]) % p
        col = a[:, c].copy()
        col[r] = 0
        nz = np.flatnonzero(col)
        if nz.size:
            a[nz] = (a[nz] - np.outer(col[nz], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m, p: int) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row-echelon form of ``m`` over F_p.

    Returns ``(R, rank, pivot_columns)``; ``R`` has the same shape as ``m``.
    """
    m = as_matrix(m, p)
    if p == 2:
        r, piv = _rref_gf2(m)
    else:
        r, piv = _rref_modp(m, p)
    return r, len(piv), piv


def rank(m, p: int) -> int:
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    return rref(m, p)[1]


def row_basis(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Canonical (RREF) basis of the row space and its pivot columns."""
    m = np.asarray(m, dtype=np.int64)
    if m.ndim != 2:
        raise ValueError("row_basis expects a matrix")
    if m.shape[0] == 0:
        return np.zeros((0, m.shape[1]), dtype=np.int64), []
    r, k, piv = rref(m, p)
    return r[:k], piv


def kernel_matrix(m, p: int) -> np.ndarray:
    """Rows spanning {v : m @ v = 0}, in RREF."""
    m = np.asarray(m, dtype=np.int64)
    rows, cols = m.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return identity(cols)
    r, k, piv = rref(m, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(piv):
            basis[i, pc] = (-r[row, f]) % p
    if basis.shape[0] == 0:
        return basis
    return row_basis(basis, p)[0]


def solve_right(a, b, p: int) -> np.ndarray | None:
    """A matrix ``x`` with ``a @ x == b`` over F_p, or ``None`` if unsolvable."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: a is {a.shape}, b is {b.shape}")
    rows, cols = a.shape
    nrhs = b.shape[1]
    if rows == 0:
        return np.zeros((cols, nrhs), dtype=np.int64)
    aug = np.concatenate([a, b], axis=1)
    r, k, piv = rref(aug, p)
    if any(c >= cols for c in piv):
        return None
    x = np.zeros((cols, nrhs), dtype=np.int64)
    for row, pc in enumerate(piv):
        x[pc] = r[row, cols:]
    return x


def right_inverse(a, p: int) -> np.ndarray:
    """``s`` with ``a @ s == I``; ``a`` must have full row rank."""
    a = np.asarray(a, dtype=np.int64)
    s = solve_right(a, identity(a.shape[0]), p)
    if s is None:
        raise ValueError("matrix does not have full row rank")
    return s


# --------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F_p^n stored by its RREF basis (rows)."""

    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...]
    p: int

    @classmethod
    def span(cls, vectors, ambient_dim: int, p: int) -> "Subspace":
        v = np.asarray(vectors, dtype=np.int64).reshape(-1, ambient_dim)
        b, piv = row_basis(v, p)
        return cls(ambient_dim, b, tuple(piv), p)

    @classmethod
    def full(cls, n: int, p: int) -> "Subspace":
        return cls(n, identity(n), tuple(range(n)), p)

    @classmethod
    def zero(cls, n: int, p: int) -> "Subspace":
        return cls(n, np.zeros((0, n), dtype=np.int64), (), p)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def coordinates(self, vectors) -> np.ndarray:
        """Coordinates of row vectors lying in the subspace (unchecked)."""
        v = np.asarray(vectors, dtype=np.int64)
        return v[..., list(self.pivots)] % self.p

    def residual(self, vectors) -> np.ndarray:
        v = np.asarray(vectors, dtype=np.int64) % self.p
        if self.dim == 0:
            return v
        return (v - matmul(self.coordinates(v), self.basis, self.p)) % self.p

    def contains(self, vectors) -> bool:
        return not np.any(self.residual(vectors))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(np.vstack([self.basis, other.basis]), self.ambient_dim, self.p)

    def intersect(self, other: "Subspace") -> "Subspace":
        # u in both  <=>  u = a·B1 = b·B2, i.e. (a, b) in ker [B1ᵀ | -B2ᵀ]
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        stacked = np.concatenate([self.basis.T, (-other.basis.T) % self.p], axis=1)
        ker = kernel_matrix(stacked, self.p)
        return Subspace.span(matmul(ker[:, : self.dim], self.basis, self.p), self.ambient_dim, self.p)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return other.contains(self.basis)

    def complement_coordinates(self) -> list[int]:
        """Standard coordinates that index a basis of the quotient space."""
        piv = set(self.pivots)
        return [c for c in range(self.ambient_dim) if c not in piv]

    def quotient_projection(self) -> np.ndarray:
        """Matrix of F_p^n -> F_p^n / self in the complement coordinates."""
        comp = self.complement_coordinates()
        proj = np.zeros((len(comp), self.ambient_dim), dtype=np.int64)
        pos = {c: i for i, c in enumerate(comp)}
        for c in comp:
            proj[pos[c], c] = 1
        for row, pc in enumerate(self.pivots):
            proj[:, pc] = (-self.basis[row, comp]) % self.p
        return proj

    def quotient_lift(self) -> np.ndarray:
        """A section of :meth:`quotient_projection` (unit vectors)."""
        comp = self.complement_coordinates()
        lift = np.zeros((self.ambient_dim, len(comp)), dtype=np.int64)
        for i, c in enumerate(comp):
            lift[c, i] = 1
        return lift


def kernel_basis(m, p: int) -> Subspace:
    m = np.asarray(m, dtype=np.int64)
    k = kernel_matrix(m, p)
    return Subspace(m.shape[1], k, tuple(rref(k, p)[2]) if k.shape[0] else (), p)


def image_basis(m, p: int) -> Subspace:
    """Column space of ``m`` as a subspace of F_p^rows."""
    m = np.asarray(m, dtype=np.int64)
    return Subspace.span(m.T, m.shape[0], p)


class EchelonBuilder:
    """Incrementally grown RREF basis; membership tests cost one matmul."""

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self.rows = np.zeros((0, n), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        if not self.pivots:
            return v
        return (v - matmul(v[..., self.pivots], self.rows, self.p)) % self.p

    def add(self, vectors) -> int:
        """Add vectors; returns how many raised the dimension."""
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
        before = self.dim
        res = self.reduce(vectors)
        res = res[np.any(res, axis=1)]
        if res.shape[0] == 0:
            return 0
        b, piv = row_basis(np.vstack([self.rows, res]), self.p)
        self.rows, self.pivots = b, piv
        return self.dim - before

    def subspace(self) -> Subspace:
        return Subspace(self.n, self.rows.copy(), tuple(self.pivots), self.p)


# --------------------------------------------------------------------------
# value type


@dataclass(frozen=True, eq=False)
class FMatrix:
    """Dense matrix over F_p with value semantics."""

    entries: np.ndarray
    p: int

    def __post_init__(self):
        FieldSpec(self.p)
        arr = np.mod(np.asarray(self.entries, dtype=np.int64), self.p)
        if arr.ndim != 2:
            raise ValueError("FMatrix entries must be 2-d")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_rows(cls, rows, p: int, cols: int | None = None) -> "FMatrix":
        arr = np.asarray(rows, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(len(rows) if hasattr(rows, "__len__") else 0, cols or 0)
        return cls(arr, p)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other):
        if not isinstance(other, FMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.p, self.entries.shape, self.entries.tobytes()))

    def __matmul__(self, other: "FMatrix") -> "FMatrix":
        return FMatrix(matmul(self.entries, other.entries, self.p), self.p)

    def rref(self) -> tuple["FMatrix", int, list[int]]:
        r, k, piv = rref(self.entries, self.p)
        return FMatrix(r, self.p), k, piv

    def rank(self) -> int:
        return rank(self.entries, self.p)

    def kernel(self) -> Subspace:
        return kernel_basis(self.entries, self.p)

    def image(self) -> Subspace:
        return image_basis(self.entries, self.p)

    def solve_right(self, b: "FMatrix") -> "FMatrix | None":
        x = solve_right(self.entries, b.entries, self.p)
        return None if x is None else FMatrix(x, self.p)
