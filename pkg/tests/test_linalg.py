"""Exact linear algebra, cross-checked against sympy's GF(p) domain matrices."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from relhom import linalg as la

PRIMES = [2, 3, 5, 7, 97]


@st.composite
def matrices(draw, primes=PRIMES, max_side=8):
    p = draw(st.sampled_from(primes))
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(0, max_side))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(vals, dtype=np.int64).reshape(r, c)


def sympy_rank(m, p):
    if 0 in m.shape:
        return 0
    return DomainMatrix([[GF(p)(int(x)) for x in row] for row in m], m.shape, GF(p)).rank()


@given(matrices())
def test_rank_matches_sympy(pm):
    p, m = pm
    assert la.rank(m, p) == sympy_rank(m, p)


@given(matrices())
def test_rref_is_idempotent_and_reduced(pm):
    p, m = pm
    r, k, piv = la.rref(m, p)
    r2, k2, piv2 = la.rref(r, p)
    assert np.array_equal(r % p, r2 % p) and k == k2 and piv == piv2
    for row, c in enumerate(piv):
        assert r[row, c] == 1
        assert np.count_nonzero(r[:, c]) == 1
    assert not np.any(r[k:])


@given(matrices())
def test_kernel_rank_nullity(pm):
    p, m = pm
    ker = la.kernel_matrix(m, p)
    assert ker.shape[0] + la.rank(m, p) == m.shape[1]
    if ker.size:
        assert not np.any(la.matmul(m, ker.T, p))
        assert la.rank(ker, p) == ker.shape[0]


@given(matrices(), st.data())
def test_solve_right_resubstitutes(pm, data):
    p, a = pm
    x_true = np.array(
        data.draw(st.lists(st.integers(0, p - 1), min_size=a.shape[1], max_size=a.shape[1])), dtype=np.int64
    ).reshape(-1, 1)
    b = la.matmul(a, x_true, p)
    x = la.solve_right(a, b, p)
    assert x is not None
    assert np.array_equal(la.matmul(a, x, p), b)


def test_solve_right_reports_inconsistency():
    a = np.array([[1, 0], [0, 0]])
    assert la.solve_right(a, np.array([[0], [1]]), 2) is None


def test_right_inverse_needs_full_row_rank():
    with pytest.raises(ValueError):
        la.right_inverse(np.array([[1, 1], [1, 1]]), 3)
    s = la.right_inverse(np.array([[1, 2, 0], [0, 1, 1]]), 5)
    assert np.array_equal(la.matmul(np.array([[1, 2, 0], [0, 1, 1]]), s, 5), np.eye(2, dtype=np.int64))


def test_matmul_large_exact():
    # exercise the floating-point path: the products are far beyond 2^24
    rng = np.random.default_rng(1)
    a = rng.integers(0, 97, (40, 300))
    b = rng.integers(0, 97, (300, 30))
    expect = (a.astype(object) @ b.astype(object)) % 97
    assert np.array_equal(la.matmul(a, b, 97), expect.astype(np.int64))


def test_field_spec_rejects_non_primes():
    for bad in (1, 4, 9, 101):
        with pytest.raises(ValueError):
            la.FieldSpec(bad)
    assert la.FieldSpec(97).p == 97


@given(matrices(primes=[2, 3]), matrices(primes=[2, 3]))
def test_subspace_operations(pa, pb):
    p, a = pa
    _, b = pb
    n = 5
    a = np.resize(a, (a.shape[0], n)) % p if a.size else np.zeros((0, n), dtype=np.int64)
    b = np.resize(b, (b.shape[0], n)) % p if b.size else np.zeros((0, n), dtype=np.int64)
    u = la.Subspace.span(a, n, p)
    w = la.Subspace.span(b, n, p)
    s = u + w
    i = u.intersect(w)
    assert u.dim + w.dim == s.dim + i.dim
    assert i.is_subspace_of(u) and i.is_subspace_of(w)
    if u.dim:
        assert np.array_equal(la.matmul(u.coordinates(u.basis), u.basis, p), u.basis)
    q = u.quotient_projection()
    assert q.shape == (n - u.dim, n)
    if u.dim:
        assert not np.any(la.matmul(q, u.basis.T, p))


def test_echelon_builder_tracks_span():
    eb = la.EchelonBuilder(4, 3)
    assert eb.add(np.array([[1, 2, 0, 0], [2, 1, 0, 0]])) == 1
    assert eb.add(np.array([[0, 0, 1, 1]])) == 1
    assert eb.dim == 2
    assert eb.subspace().contains(np.array([[1, 2, 2, 2]]))


def test_fmatrix_wrapper():
    m = la.FMatrix.from_rows([[1, 1], [1, 1]], 2)
    assert m.rank() == 1
    assert m.kernel().dim == 1
    assert (m @ m) == la.FMatrix.from_rows([[0, 0], [0, 0]], 2)
