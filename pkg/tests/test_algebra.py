"""Algebras, modules, maps and the basic constructions."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relhom import linalg as la
from relhom.algebra import (
    Algebra,
    Module,
    ModuleMap,
    ShortExactSequence,
    block_summands,
    cokernel,
    compose,
    direct_sum,
    direct_sum_maps,
    dual_map,
    dual_module,
    identity_map,
    image,
    intertwines,
    is_epic,
    is_iso,
    is_monic,
    kernel,
    opposite_algebra,
    pullback,
    pushout,
    quotient_by_submodule,
    regular_module,
    split_section,
    submodule_generated,
    support_blocks,
    validate_algebra,
    validate_module,
    zero_module,
)
from relhom.corpus import r1, r3, residue_field, truncated_polynomial, upper_triangular
from relhom.homtensor import hom_space


def test_corpus_algebras_are_valid(corpora):
    for corp in corpora.values():
        rep = validate_algebra(corp.algebra)
        assert rep.valid, rep.violations
        for m in corp.modules.values():
            assert validate_module(m).valid, m.name


def test_commutativity_flags(corpora):
    assert corpora["R3"].algebra.commutative
    assert corpora["F2xF2"].algebra.commutative
    assert not corpora["UT2"].algebra.commutative


def test_validation_reports_violations():
    # x*x = 1 and x*1 = 0 breaks the right unit law
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 0, 0] = 1
    c[1, 1, 0] = 1
    rep = validate_algebra(Algebra(2, c, [1, 0]))
    assert not rep.valid
    assert any("unit" in v for v in rep.violations)


def test_module_validation_catches_bad_action():
    a = r1()
    bad = Module(a, np.array([[[1, 0], [0, 1]], [[1, 0], [0, 1]]]))  # x acts invertibly but x^2 = 0
    assert not validate_module(bad).valid


def test_opposite_of_upper_triangular_is_different_but_involutive():
    a = upper_triangular()
    op = opposite_algebra(a)
    assert op != a
    assert opposite_algebra(op) == a
    assert validate_algebra(op).valid


def test_opposite_of_commutative_is_equal():
    assert opposite_algebra(r3()) == r3()


def test_map_intertwining_is_enforced():
    a = r1()
    reg = regular_module(a)
    with pytest.raises(ValueError):
        ModuleMap(reg, reg, np.array([[1, 0], [0, 0]]))
    f = ModuleMap(reg, reg, np.array([[0, 0], [1, 0]]))  # multiplication by x
    assert intertwines(f)


def test_kernel_image_cokernel_dimensions():
    a = truncated_polynomial(3, 3)
    reg = regular_module(a)
    x = ModuleMap(reg, reg, a.left_multiplication[1])
    k, incl = kernel(x)
    im, _, cores = image(x)
    q, proj = cokernel(x)
    assert (k.dim, im.dim, q.dim) == (1, 2, 1)
    assert is_monic(incl) and is_epic(cores) and is_epic(proj)
    assert not np.any(compose(x, incl).matrix)
    assert not np.any(compose(proj, x).matrix)


def test_direct_sum_maps_are_split():
    a = r3()
    k = residue_field(a)
    reg = regular_module(a)
    s, inj, proj = direct_sum_maps(reg, k)
    assert s.dim == 4
    for i, j in [(0, 0), (1, 1)]:
        assert is_iso(compose(proj[i], inj[j]))
    assert not np.any(compose(proj[0], inj[1]).matrix)


def test_pushout_and_pullback_dimensions():
    a = r1()
    reg = regular_module(a)
    k = residue_field(a)
    soc = ModuleMap(k, reg, np.array([[0], [1]]))  # k -> socle of R
    po, b, c = pushout(soc, soc)
    assert po.dim == 3  # 2 + 2 - 1
    assert np.array_equal(compose(b, soc).matrix, compose(c, soc).matrix)
    top = ModuleMap(reg, k, np.array([[1, 0]]))
    pb, u, v = pullback(top, top)
    assert pb.dim == 3  # 2 + 2 - 1
    assert np.array_equal(compose(top, u).matrix, compose(top, v).matrix)


def test_dual_is_involutive_and_exchanges_sides():
    a = upper_triangular()
    reg = regular_module(a)
    d = dual_module(reg)
    assert d.algebra == opposite_algebra(a)
    assert validate_module(d).valid
    assert dual_module(d) == reg


def test_dual_map_reverses_composition():
    a = r3()
    reg = regular_module(a)
    h = hom_space(reg, reg)
    f, g = h.basis_maps[1], h.basis_maps[2]
    assert dual_map(compose(g, f)) == compose(dual_map(f), dual_map(g))


def test_short_exact_sequence_and_dual():
    a = r1()
    reg = regular_module(a)
    k = residue_field(a)
    ses = ShortExactSequence(ModuleMap(k, reg, [[0], [1]]), ModuleMap(reg, k, [[1, 0]]))
    assert ses.is_valid
    assert ses.dual().is_valid
    broken = ShortExactSequence(ModuleMap(k, reg, [[0], [1]]), ModuleMap(reg, reg, a.left_multiplication[1]))
    assert not broken.is_valid


def test_split_section_detects_splitting():
    a = r1()
    reg = regular_module(a)
    k = residue_field(a)
    assert split_section(ModuleMap(reg, k, [[1, 0]])) is None
    s, _, proj = direct_sum_maps(k, k)
    sec = split_section(proj[0])
    assert sec is not None and is_iso(compose(proj[0], sec))


def test_submodule_generated_and_quotient():
    a = r3()
    reg = regular_module(a)
    sub, incl = submodule_generated(reg, [[0, 1, 0]])
    assert sub.dim == 1 and is_monic(incl)
    q, proj = quotient_by_submodule(reg, la.Subspace.span([[0, 1, 0]], 3, 2))
    assert q.dim == 2 and is_epic(proj)


def test_support_blocks_split_sums():
    a = r3()
    m = direct_sum(residue_field(a), regular_module(a), residue_field(a))
    blocks = support_blocks(m)
    assert sorted(len(b) for b in blocks) == [1, 1, 3]
    assert sum(b.dim for b in block_summands(m)) == m.dim


def test_zero_module_behaves():
    a = r1()
    z = zero_module(a)
    assert z.dim == 0 and validate_module(z).valid
    assert is_iso(identity_map(z))


@given(st.integers(1, 3), st.integers(0, 3))
def test_presentation_cover_is_surjective(k, extra):
    a = truncated_polynomial(2, 3)
    mods = [regular_module(a)] * k + [residue_field(a)] * extra
    m = direct_sum(*mods)
    pres = m.presentation
    assert la.rank(pres.cover, 2) == m.dim
    assert np.array_equal(la.matmul(pres.cover, pres.section, 2), la.identity(m.dim))
    assert len(pres.generators) == k + extra  # minimal for a local algebra
