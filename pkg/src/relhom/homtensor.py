"""Hom spaces, tensor products over commutative algebras, and the adjunction maps.

``hom_space(M, N)`` solves for the images of a generating set of ``M``
subject to its relations, which keeps the linear system at
``(#relations * dim N) x (#generators * dim N)`` rather than the naive
``(n * dim M * dim N) x (dim M * dim N)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from . import linalg as la
from .algebra import (
    Algebra,
    Module,
    ModuleMap,
    compose,
    identity_map,
    intertwines,
    is_iso,
    quotient_by_submodule,
    regular_module,
)
from .linalg import Subspace


@dataclass(frozen=True, eq=False)
class HomSpace:
    source: Module
    target: Module
    flat: Subspace  # RREF rows are flattened (target.dim x source.dim) matrices

    @property
    def dim(self) -> int:
        return self.flat.dim

    @property
    def p(self) -> int:
        return self.source.p

    @cached_property
    def matrices(self) -> np.ndarray:
        return self.flat.basis.reshape(self.dim, self.target.dim, self.source.dim)

    @cached_property
    def basis_maps(self) -> list[ModuleMap]:
        return [ModuleMap(self.source, self.target, f, check=False) for f in self.matrices]

    def coordinates(self, mats) -> np.ndarray:
        """Coordinates of one matrix (or a stack) in the basis; no membership check."""
        mats = np.asarray(mats, dtype=np.int64)
        flat = mats.reshape(*mats.shape[:-2], self.target.dim * self.source.dim)
        return self.flat.coordinates(flat)

    def contains(self, mat) -> bool:
        m = np.asarray(mat).reshape(-1, self.target.dim * self.source.dim)
        return self.flat.contains(m)

    def combine(self, coeffs) -> np.ndarray:
        c = np.asarray(coeffs, dtype=np.int64)
        return np.tensordot(c, self.matrices, axes=(-1, 0)) % self.p

    @cached_property
    def as_module(self) -> Module | None:
        """``Hom(M, N)`` as a module, ``(r f)(x) = r f(x)``; only for commutative algebras."""
        a = self.source.algebra
        if not a.commutative:
            return None
        imgs = np.einsum("iab,kbc->ikac", self.target.action, self.matrices) % self.p
        act = self.coordinates(imgs).transpose(0, 2, 1)
        return Module(a, act, f"Hom({self.source.name},{self.target.name})")


@lru_cache(maxsize=8192)
def hom_space(m: Module, n: Module) -> HomSpace:
    if m.algebra != n.algebra:
        raise ValueError("hom_space needs modules over the same algebra")
    p = m.p
    if m.dim == 0 or n.dim == 0:
        return HomSpace(m, n, Subspace.zero(n.dim * m.dim, p))
    pres = m.presentation
    s = len(pres.generators)
    k = m.algebra.dim
    nd = n.dim
    rel = pres.relations.reshape(-1, s, k)
    # equation for relation r:  sum_j sum_i r[j,i] rho_N(i) v_j = 0
    blocks = np.einsum("rji,iab->rajb", rel, n.action) % p
    system = blocks.reshape(rel.shape[0] * nd, s * nd)
    if rel.shape[0]:
        sols = la.kernel_matrix(system, p)
    else:
        sols = la.identity(s * nd)
    if sols.shape[0] == 0:
        return HomSpace(m, n, Subspace.zero(nd * m.dim, p))
    v = sols.reshape(-1, s, nd)
    # image of the free generator (j, i) is rho_N(i) v_j; f = (images) @ section
    imgs = np.einsum("iab,tjb->tjia", n.action, v) % p
    sec = pres.section.reshape(s, k, m.dim)
    maps = np.einsum("tjia,jic->tac", imgs, sec) % p
    return HomSpace(m, n, Subspace.span(maps.reshape(-1, nd * m.dim), nd * m.dim, p))


def hom_dim(m: Module, n: Module) -> int:
    return hom_space(m, n).dim


def hom_module(c: Module, n: Module) -> Module:
    mod = hom_space(c, n).as_module
    if mod is None:
        raise ValueError("Hom as a module needs a commutative algebra")
    return mod


def hom_induced_map(c: Module, f: ModuleMap) -> ModuleMap:
    """``Hom(c, f) : Hom(c, X) -> Hom(c, Y)`` on the module structures."""
    src, tgt = hom_space(c, f.source), hom_space(c, f.target)
    imgs = np.einsum("ab,kbc->kac", f.matrix, src.matrices) % f.p
    mat = tgt.coordinates(imgs).T if src.dim else la.zeros(tgt.dim, 0)
    return ModuleMap(hom_module(c, f.source), hom_module(c, f.target), mat)


# --------------------------------------------------------------------------
# endomorphism algebra and right End-module structure


@lru_cache(maxsize=512)
def endomorphism_algebra(c: Module) -> Algebra:
    """``End(c)`` with product ``f * g = f ∘ g`` in the Hom basis."""
    h = hom_space(c, c)
    e = h.matrices
    comp = np.einsum("aij,bjk->abik", e, e) % c.p
    consts = h.coordinates(comp)
    unit = h.coordinates(la.identity(c.dim))
    return Algebra(c.p, consts, unit, f"End({c.name})" if c.name else "")


def hom_as_end_module(c: Module, n: Module) -> Module:
    """``Hom(c, n)`` as a right ``End(c)``-module, i.e. a left module over ``End(c)^op``.

    Basis element ``e_b`` acts by ``f -> f ∘ e_b``.
    """
    from .algebra import opposite_algebra

    end = opposite_algebra(endomorphism_algebra(c))
    h = hom_space(c, n)
    e = hom_space(c, c).matrices
    if h.dim == 0:
        return Module(end, np.zeros((end.dim, 0, 0), dtype=np.int64))
    imgs = np.einsum("kij,bjl->bkil", h.matrices, e) % c.p
    act = h.coordinates(imgs).transpose(0, 2, 1)
    return Module(end, act)


# --------------------------------------------------------------------------
# tensor products


@dataclass(frozen=True, eq=False)
class TensorModule:
    left: Module
    right: Module
    result: Module
    pure_tensor: np.ndarray  # result.dim x (left.dim * right.dim); index a*right.dim + b
    lift: np.ndarray = field(repr=False)

    def induced(self, other: "TensorModule", f: ModuleMap) -> ModuleMap:
        """``left ⊗ f`` from this tensor to ``other`` (same left factor)."""
        big = np.kron(la.identity(self.left.dim), f.matrix)
        mat = other.pure_tensor @ big @ self.lift % f.p
        return ModuleMap(self.result, other.result, mat)


def _require_commutative(a: Algebra):
    if not a.commutative:
        raise ValueError("tensor products and Hom modules need a commutative algebra")


@lru_cache(maxsize=2048)
def tensor_over_algebra(c: Module, m: Module) -> TensorModule:
    a = c.algebra
    if m.algebra != a:
        raise ValueError("tensor_over_algebra needs modules over the same algebra")
    _require_commutative(a)
    p = a.p
    cd, md = c.dim, m.dim
    eye_c, eye_m = la.identity(cd), la.identity(md)
    act = np.array([np.kron(r, eye_m) for r in c.action], dtype=np.int64).reshape(a.dim, cd * md, cd * md)
    big = Module(a, act)
    rels = [
        (np.kron(c.action[g], eye_m) - np.kron(eye_c, m.action[g])) % p for g in a.generators
    ]
    if rels and cd * md:
        sub = la.image_basis(np.hstack(rels), p)
    else:
        sub = Subspace.zero(cd * md, p)
    q, proj = quotient_by_submodule(big, sub)
    name = f"{c.name}⊗{m.name}" if c.name and m.name else ""
    return TensorModule(c, m, q.named(name), proj.matrix, sub.quotient_lift())


def tensor_map(c: Module, f: ModuleMap) -> ModuleMap:
    return tensor_over_algebra(c, f.source).induced(tensor_over_algebra(c, f.target), f)


# --------------------------------------------------------------------------
# adjunction maps


def unit_map(c: Module, m: Module) -> ModuleMap:
    """``η_m : m -> Hom(c, c ⊗ m)``, ``x ↦ (y ↦ y ⊗ x)``."""
    t = tensor_over_algebra(c, m)
    h = hom_space(c, t.result)
    cols = t.pure_tensor.reshape(t.result.dim, c.dim, m.dim)  # [:, a, b] = image of e_a ⊗ e_b
    maps = cols.transpose(2, 0, 1)  # for each basis vector of m: result.dim x c.dim
    if not h.contains(maps) and m.dim:
        raise AssertionError("unit map image is not an intertwiner")
    mat = h.coordinates(maps).T if m.dim else la.zeros(h.dim, 0)
    return ModuleMap(m, hom_module(c, t.result), mat)


def counit_map(c: Module, n: Module) -> ModuleMap:
    """``ε_n : c ⊗ Hom(c, n) -> n``, ``y ⊗ f ↦ f(y)``."""
    h = hom_space(c, n)
    hm = hom_module(c, n)
    t = tensor_over_algebra(c, hm)
    # e_a ⊗ f_k  ↦  f_k e_a, flattened in index a * h.dim + k
    big = h.matrices.transpose(1, 2, 0).reshape(n.dim, c.dim * h.dim)
    return ModuleMap(t.result, n, big @ t.lift % c.p)


def homothety(c: Module) -> ModuleMap:
    """``R -> Hom(c, c)``, ``r ↦ (x ↦ r x)``."""
    a = c.algebra
    h = hom_space(c, c)
    r = regular_module(a)
    mat = h.coordinates(c.action).T if h.dim else la.zeros(0, a.dim)
    return ModuleMap(r, hom_module(c, c), mat)


def naturality_defects(c: Module, f: ModuleMap) -> list[str]:
    """Check the unit and counit squares for a single map ``f``."""
    out = []
    # unit: Hom(c, c⊗f) ∘ η_X = η_Y ∘ f
    lhs = compose(hom_induced_map(c, tensor_map(c, f)), unit_map(c, f.source))
    rhs = compose(unit_map(c, f.target), f)
    if lhs != rhs:
        out.append("unit square fails")
    # counit: f ∘ ε_X = ε_Y ∘ (c ⊗ Hom(c, f))
    lhs = compose(f, counit_map(c, f.source))
    rhs = compose(counit_map(c, f.target), tensor_map(c, hom_induced_map(c, f)))
    if lhs != rhs:
        out.append("counit square fails")
    return out


def triangle_defects(c: Module, m: Module, n: Module) -> list[str]:
    out = []
    t1 = compose(counit_map(c, tensor_over_algebra(c, m).result), tensor_map(c, unit_map(c, m)))
    if t1 != identity_map(t1.source):
        out.append("ε_F ∘ F(η) is not the identity")
    t2 = compose(hom_induced_map(c, counit_map(c, n)), unit_map(c, hom_module(c, n)))
    if t2 != identity_map(t2.source):
        out.append("G(ε) ∘ η_G is not the identity")
    return out


@dataclass
class SemidualizingReport:
    module: str
    cutoff: int
    homothety_bijective: bool
    ext_dims: dict[int, int]

    @property
    def self_orthogonal(self) -> bool:
        return all(v == 0 for v in self.ext_dims.values())

    @property
    def verdict(self) -> bool:
        return self.homothety_bijective and self.self_orthogonal

    def summary(self) -> str:
        state = "semidualizing" if self.verdict else "not semidualizing"
        return f"{self.module}: {state} up to cutoff {self.cutoff}"


def is_semidualizing(c: Module, cutoff: int | None = None) -> SemidualizingReport:
    from .resolutions import default_cutoff, ext_dims

    _require_commutative(c.algebra)
    cutoff = default_cutoff() if cutoff is None else cutoff
    hom_ok = is_iso(homothety(c))
    exts = ext_dims(c, c, cutoff)
    return SemidualizingReport(c.name, cutoff, hom_ok, {i: exts[i] for i in range(1, cutoff + 1)})


__all__ = [
    "HomSpace",
    "TensorModule",
    "SemidualizingReport",
    "hom_space",
    "hom_dim",
    "hom_module",
    "hom_induced_map",
    "endomorphism_algebra",
    "hom_as_end_module",
    "tensor_over_algebra",
    "tensor_map",
    "unit_map",
    "counit_map",
    "homothety",
    "naturality_defects",
    "triangle_defects",
    "is_semidualizing",
    "generator_maps",
    "identity_factors",
    "hom_functor_matrix",
    "solve_factorization",
    "intertwines",
]


def generator_maps(c: Module, m: Module) -> list[np.ndarray]:
    """Maps ``C -> m`` generating ``Hom(C, m)`` as a right ``End(C)``-module.

    Their sum ``C^h -> m`` is a precover: any ``g : C -> m`` is
    ``sum_a f_a ∘ e_a`` for endomorphisms ``e_a``.
    """
    h = hom_space(c, m)
    if h.dim == 0:
        return []
    mod = hom_as_end_module(c, m)
    return [h.matrices[g] for g in mod.generators]


def identity_factors(maps: list[np.ndarray], c: Module, m: Module) -> bool:
    """Does ``id_m`` factor as ``phi ∘ sigma`` with ``phi = (maps) : C^h -> m``?

    ``sigma`` ranges over ``Hom(m, C)^h``, so the unknowns number
    ``h * dim Hom(m, C)`` and the equations ``dim(m)^2``.
    """
    if m.dim == 0:
        return True
    if not maps:
        return False
    back = hom_space(m, c)
    if back.dim == 0:
        return False
    phis = np.array(maps, dtype=np.int64)  # (h, m, c)
    comp = np.einsum("aij,tjk->ikat", phis, back.matrices) % m.p
    system = comp.reshape(m.dim * m.dim, len(maps) * back.dim)
    rhs = la.identity(m.dim).reshape(-1, 1)
    return la.solve_right(system, rhs, m.p) is not None


def hom_functor_matrix(c: Module, f: ModuleMap) -> np.ndarray:
    """Matrix of ``Hom(c, f) : Hom(c, X) -> Hom(c, Y)`` in the Hom bases."""
    src, tgt = hom_space(c, f.source), hom_space(c, f.target)
    if src.dim == 0 or tgt.dim == 0:
        return la.zeros(tgt.dim, src.dim)
    imgs = np.einsum("ab,kbc->kac", f.matrix, src.matrices) % f.p
    return tgt.coordinates(imgs).T


def solve_factorization(phi: ModuleMap, g: ModuleMap) -> ModuleMap | None:
    """A module map ``lam`` with ``phi ∘ lam = g`` (common target), or ``None``."""
    if phi.target != g.target:
        raise ValueError("maps need a common target")
    h = hom_space(g.source, phi.source)
    if h.dim == 0:
        return ModuleMap(g.source, phi.source, la.zeros(phi.source.dim, g.source.dim)) if not np.any(g.matrix) else None
    comp = np.einsum("ab,kbc->ack", phi.matrix, h.matrices) % g.p
    system = comp.reshape(-1, h.dim)
    sol = la.solve_right(system, g.matrix.reshape(-1, 1), g.p)
    if sol is None:
        return None
    return ModuleMap(g.source, phi.source, h.combine(sol[:, 0]))
