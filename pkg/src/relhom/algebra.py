"""Finite-dimensional algebras, their modules, and the exactness primitives.

An :class:`Algebra` is given by structure constants ``c[i, j, k]`` with
``b_i b_j = sum_k c[i, j, k] b_k``.  A :class:`Module` carries one action
matrix per algebra basis element.  Kernels, images, cokernels, pushouts and
pullbacks all return canonical representatives: submodules are stored by the
RREF basis of the underlying subspace, quotients use the complementary
standard coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg as la
from .linalg import EchelonBuilder, FieldSpec, Subspace


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Algebra:
    p: int
    structure_constants: np.ndarray
    unit: np.ndarray
    name: str = ""

    def __post_init__(self):
        FieldSpec(self.p)
        c = np.mod(np.asarray(self.structure_constants, dtype=np.int64), self.p)
        n = c.shape[0] if c.ndim == 3 else -1
        if c.ndim != 3 or c.shape != (n, n, n):
            raise ValueError(f"structure constants must have shape (n, n, n), got {c.shape}")
        u = np.mod(np.asarray(self.unit, dtype=np.int64).reshape(-1), self.p)
        if u.shape != (n,):
            raise ValueError("unit has the wrong length")
        object.__setattr__(self, "structure_constants", _frozen(c))
        object.__setattr__(self, "unit", _frozen(u))

    @property
    def dim(self) -> int:
        return self.structure_constants.shape[0]

    @cached_property
    def key(self) -> tuple:
        return (self.p, self.structure_constants.tobytes(), self.unit.tobytes(), self.dim)

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        label = self.name or "Algebra"
        return f"<{label}: dim {self.dim} over F_{self.p}>"

    @cached_property
    def commutative(self) -> bool:
        c = self.structure_constants
        return bool(np.array_equal(c, c.transpose(1, 0, 2)))

    @cached_property
    def left_multiplication(self) -> np.ndarray:
        """``L[i]`` is the matrix of ``x -> b_i x`` in the basis (columns = images)."""
        return _frozen(self.structure_constants.transpose(0, 2, 1))

    def multiply(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return np.einsum("i,j,ijk->k", x, y, self.structure_constants) % self.p

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices generating the algebra (together with the unit)."""
        n = self.dim
        span = EchelonBuilder(n, self.p)
        span.add(self.unit)
        chosen: list[int] = []

        def close():
            while True:
                prods = [
                    self.multiply(v, la.identity(n)[g])
                    for v in span.rows
                    for g in chosen
                ]
                if not prods or span.add(np.array(prods)) == 0:
                    return

        for i in range(n):
            if span.dim == n:
                break
            e = la.identity(n)[i]
            if np.any(span.reduce(e)):
                chosen.append(i)
                span.add(e)
                close()
        return tuple(chosen)


def opposite_algebra(a: Algebra) -> Algebra:
    c = a.structure_constants.transpose(1, 0, 2)
    name = a.name if a.commutative else (a.name + "^op" if a.name else "")
    if a.name.endswith("^op") and not a.commutative:
        name = a.name[:-3]
    return Algebra(a.p, c, a.unit, name)


@dataclass
class AlgebraReport:
    valid: bool
    commutative: bool
    violations: list[str] = field(default_factory=list)


def validate_algebra(a: Algebra) -> AlgebraReport:
    """Check associativity and the two unit laws; report every violation."""
    c = a.structure_constants
    p = a.p
    n = a.dim
    violations: list[str] = []
    # (b_i b_j) b_k = sum_l c[i,j,l] c[l,k,:] ; b_i (b_j b_k) = sum_l c[j,k,l] c[i,l,:]
    left = np.einsum("ijl,lkm->ijkm", c, c) % p
    right = np.einsum("jkl,ilm->ijkm", c, c) % p
    bad = np.argwhere(np.any(left != right, axis=3))
    for i, j, k in bad:
        violations.append(f"associativity fails at (b{i} b{j}) b{k}")
    eye = la.identity(n)
    ul = np.einsum("i,ijk->jk", a.unit, c) % p
    ur = np.einsum("j,ijk->ik", a.unit, c) % p
    for j in np.flatnonzero(np.any(ul != eye, axis=1)):
        violations.append(f"left unit law fails at b{j}")
    for j in np.flatnonzero(np.any(ur != eye, axis=1)):
        violations.append(f"right unit law fails at b{j}")
    return AlgebraReport(not violations, a.commutative, violations)


# --------------------------------------------------------------------------
# modules


@dataclass(frozen=True, eq=False)
class Module:
    algebra: Algebra
    action: np.ndarray
    name: str = ""

    def __post_init__(self):
        act = np.mod(np.asarray(self.action, dtype=np.int64), self.algebra.p)
        n = self.algebra.dim
        if act.size == 0:
            m = act.shape[-1] if act.ndim == 3 else 0
            act = act.reshape(n, m, m)
        if act.ndim != 3 or act.shape[0] != n or act.shape[1] != act.shape[2]:
            raise ValueError(f"action must have shape ({n}, m, m), got {act.shape}")
        object.__setattr__(self, "action", _frozen(act))

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def p(self) -> int:
        return self.algebra.p

    @cached_property
    def key(self) -> tuple:
        return (self.algebra.key, self.action.shape, self.action.tobytes())

    def __eq__(self, other):
        if not isinstance(other, Module):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        label = self.name or "Module"
        return f"<{label}: dim {self.dim} over {self.algebra!r}>"

    def named(self, name: str) -> "Module":
        return Module(self.algebra, self.action, name)

    def act(self, element) -> np.ndarray:
        """Matrix of an arbitrary algebra element (coordinate vector)."""
        e = np.asarray(element, dtype=np.int64)
        return np.einsum("i,iab->ab", e, self.action) % self.p

    @cached_property
    def generator_actions(self) -> np.ndarray:
        return self.action[list(self.algebra.generators)]

    def generated_subspace(self, vectors) -> Subspace:
        v = np.atleast_2d(np.asarray(vectors, dtype=np.int64)).reshape(-1, self.dim)
        imgs = np.einsum("iab,vb->iva", self.action, v).reshape(-1, self.dim)
        return Subspace.span(imgs, self.dim, self.p)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Standard basis indices that generate the module.

        Greedy over basis vectors, visiting those with larger cyclic
        submodules first; this is usually a minimal generating set.
        """
        span = EchelonBuilder(self.dim, self.p)
        chosen = []
        sizes = [la.rank(self.action[:, :, j], self.p) for j in range(self.dim)]
        for j in sorted(range(self.dim), key=lambda j: (-sizes[j], j)):
            if span.dim == self.dim:
                break
            if np.any(span.reduce(la.identity(self.dim)[j])):
                chosen.append(j)
                span.add(self.action[:, :, j])
        return tuple(chosen)

    @cached_property
    def presentation(self) -> "Presentation":
        return Presentation.of(self)


@dataclass(frozen=True, eq=False)
class Presentation:
    """Generators, a section of the free cover, and generating relations."""

    generators: tuple[int, ...]
    cover: np.ndarray  # dim M x (s*n); column j*n+i is b_i . g_j
    section: np.ndarray  # (s*n) x dim M with cover @ section = I
    relations: np.ndarray  # rows in A^s (coordinates j*n+i)

    @classmethod
    def of(cls, m: Module) -> "Presentation":
        a = m.algebra
        n, p = a.dim, a.p
        gens = m.generators
        s = len(gens)
        if m.dim == 0:
            return cls((), la.zeros(0, 0), la.zeros(0, 0), la.zeros(0, 0))
        cover = m.action[:, :, list(gens)].transpose(1, 2, 0).reshape(m.dim, s * n)
        section = la.right_inverse(cover, p)
        ker = la.kernel_matrix(cover, p)
        # keep only kernel vectors that generate it as an A^s-submodule
        reg = a.left_multiplication
        span = EchelonBuilder(s * n, p)
        rels = []
        for r in ker:
            if span.dim == ker.shape[0]:
                break
            if np.any(span.reduce(r)):
                rels.append(r)
                blocks = r.reshape(s, n)
                orbit = np.einsum("iab,jb->ija", reg, blocks).reshape(n, s * n)
                span.add(orbit % p)
        rel = np.array(rels, dtype=np.int64).reshape(-1, s * n)
        return cls(tuple(gens), cover, section, rel)


@dataclass
class ModuleReport:
    valid: bool
    violations: list[str] = field(default_factory=list)


def validate_module(m: Module) -> ModuleReport:
    a = m.algebra
    p = a.p
    violations = []
    if m.dim:
        if not np.array_equal(m.act(a.unit), la.identity(m.dim)):
            violations.append("unit does not act as the identity")
        prod = np.einsum("iab,jbc->ijac", m.action, m.action) % p
        expect = np.einsum("ijk,kac->ijac", a.structure_constants, m.action) % p
        for i, j in np.argwhere(np.any(prod != expect, axis=(2, 3))):
            violations.append(f"multiplicativity fails for rho_{i} rho_{j}")
    return ModuleReport(not violations, violations)


def regular_module(a: Algebra, name: str | None = None) -> Module:
    return Module(a, a.left_multiplication, name if name is not None else f"{a.name or 'A'}")


def zero_module(a: Algebra) -> Module:
    return Module(a, np.zeros((a.dim, 0, 0), dtype=np.int64), "0")


# --------------------------------------------------------------------------
# maps


def _intertwines(src: Module, tgt: Module, mat: np.ndarray) -> bool:
    p = src.p
    lhs = np.einsum("ab,ibc->iac", mat, src.generator_actions) % p
    rhs = np.einsum("iab,bc->iac", tgt.generator_actions, mat) % p
    return bool(np.array_equal(lhs, rhs))


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: Module
    target: Module
    matrix: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.source.algebra != self.target.algebra:
            raise ValueError("source and target live over different algebras")
        mat = np.mod(np.asarray(self.matrix, dtype=np.int64), self.source.p)
        mat = mat.reshape(self.target.dim, self.source.dim)
        object.__setattr__(self, "matrix", _frozen(mat))
        if self.check and not _intertwines(self.source, self.target, mat):
            raise ValueError("matrix does not intertwine the actions")

    @property
    def p(self) -> int:
        return self.source.p

    @property
    def algebra(self) -> Algebra:
        return self.source.algebra

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.source, self.target, self.matrix.tobytes()))

    @cached_property
    def rank(self) -> int:
        return la.rank(self.matrix, self.p)

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return compose(self, other)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix * c, check=False)


def intertwines(f: ModuleMap) -> bool:
    """Re-check the intertwining identity on every algebra basis element."""
    p = f.p
    lhs = np.einsum("ab,ibc->iac", f.matrix, f.source.action) % p
    rhs = np.einsum("iab,bc->iac", f.target.action, f.matrix) % p
    return bool(np.array_equal(lhs, rhs))


def compose(g: ModuleMap, f: ModuleMap) -> ModuleMap:
    """``g ∘ f``."""
    if f.target != g.source:
        raise ValueError("maps are not composable")
    return ModuleMap(f.source, g.target, la.matmul(g.matrix, f.matrix, f.p), check=False)


def identity_map(m: Module) -> ModuleMap:
    return ModuleMap(m, m, la.identity(m.dim), check=False)


def zero_map(src: Module, tgt: Module) -> ModuleMap:
    return ModuleMap(src, tgt, la.zeros(tgt.dim, src.dim), check=False)


def is_monic(f: ModuleMap) -> bool:
    return f.rank == f.source.dim


def is_epic(f: ModuleMap) -> bool:
    return f.rank == f.target.dim


def is_iso(f: ModuleMap) -> bool:
    return f.source.dim == f.target.dim and is_monic(f)


def is_zero(f: ModuleMap) -> bool:
    return not np.any(f.matrix)


# --------------------------------------------------------------------------
# sub- and quotient modules


def _restricted_action(m: Module, sub: Subspace) -> np.ndarray:
    if sub.dim == 0 or m.dim == 0:
        return np.zeros((m.algebra.dim, sub.dim, sub.dim), dtype=np.int64)
    imgs = np.einsum("iab,vb->iva", m.action, sub.basis) % m.p
    if not sub.contains(imgs.reshape(-1, m.dim)):
        raise ValueError("subspace is not stable under the action")
    # coordinates of rho_i(v_k) are its entries at the pivots
    return imgs[:, :, list(sub.pivots)].transpose(0, 2, 1)


def submodule(m: Module, sub: Subspace, name: str = "") -> tuple[Module, ModuleMap]:
    act = _restricted_action(m, sub)
    s = Module(m.algebra, act, name)
    return s, ModuleMap(s, m, sub.basis.T, check=False)


def submodule_generated(m: Module, vectors, name: str = "") -> tuple[Module, ModuleMap]:
    return submodule(m, m.generated_subspace(vectors), name)


def is_stable(m: Module, sub: Subspace) -> bool:
    imgs = np.einsum("iab,vb->iva", m.generator_actions, sub.basis).reshape(-1, m.dim)
    return sub.contains(imgs % m.p)


def quotient_by_submodule(m: Module, sub: Subspace, name: str = "") -> tuple[Module, ModuleMap]:
    proj = sub.quotient_projection()
    lift = sub.quotient_lift()
    act = np.einsum("ab,ibc,cd->iad", proj, m.action, lift) % m.p
    q = Module(m.algebra, act, name)
    return q, ModuleMap(m, q, proj, check=False)


def kernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    sub = la.kernel_basis(f.matrix, f.p)
    return submodule(f.source, sub)


def image(f: ModuleMap) -> tuple[Module, ModuleMap, ModuleMap]:
    """Image module, its inclusion into the target, and the corestriction."""
    sub = la.image_basis(f.matrix, f.p)
    im, incl = submodule(f.target, sub)
    cores = ModuleMap(f.source, im, sub.coordinates(f.matrix.T).T, check=False)
    return im, incl, cores


def cokernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    return quotient_by_submodule(f.target, la.image_basis(f.matrix, f.p))


# --------------------------------------------------------------------------
# sums


def direct_sum(*mods: Module) -> Module:
    if not mods:
        raise ValueError("direct_sum needs at least one summand")
    a = mods[0].algebra
    total = sum(m.dim for m in mods)
    act = np.zeros((a.dim, total, total), dtype=np.int64)
    off = 0
    for m in mods:
        if m.algebra != a:
            raise ValueError("summands over different algebras")
        act[:, off : off + m.dim, off : off + m.dim] = m.action
        off += m.dim
    name = " ⊕ ".join(m.name or "?" for m in mods) if all(m.name for m in mods) else ""
    return Module(a, act, name)


def direct_sum_maps(*mods: Module) -> tuple[Module, list[ModuleMap], list[ModuleMap]]:
    s = direct_sum(*mods)
    inj, proj = [], []
    off = 0
    for m in mods:
        e = np.zeros((s.dim, m.dim), dtype=np.int64)
        e[off : off + m.dim] = la.identity(m.dim)
        inj.append(ModuleMap(m, s, e, check=False))
        proj.append(ModuleMap(s, m, e.T, check=False))
        off += m.dim
    return s, inj, proj


def power(m: Module, h: int) -> Module:
    if h == 0:
        return zero_module(m.algebra)
    out = direct_sum(*([m] * h))
    return out.named(f"{m.name}^{h}" if m.name else "")


def block_map(source: Module, target: Module, blocks: Sequence[Sequence[np.ndarray]]) -> ModuleMap:
    return ModuleMap(source, target, np.block([list(r) for r in blocks]))


# --------------------------------------------------------------------------
# pushout / pullback


def pushout(f: ModuleMap, g: ModuleMap) -> tuple[Module, ModuleMap, ModuleMap]:
    """Pushout of ``B <-f- A -g-> C``; returns ``(P, B -> P, C -> P)``."""
    if f.source != g.source:
        raise ValueError("pushout needs maps with a common source")
    p = f.p
    bc, inj, _ = direct_sum_maps(f.target, g.target)
    stacked = ModuleMap(f.source, bc, np.vstack([f.matrix, (-g.matrix) % p]), check=False)
    q, proj = cokernel(stacked)
    return q, compose(proj, inj[0]), compose(proj, inj[1])


def pullback(f: ModuleMap, g: ModuleMap) -> tuple[Module, ModuleMap, ModuleMap]:
    """Pullback of ``B -f-> D <-g- C``; returns ``(P, P -> B, P -> C)``."""
    if f.target != g.target:
        raise ValueError("pullback needs maps with a common target")
    p = f.p
    bc, _, proj = direct_sum_maps(f.source, g.source)
    joined = ModuleMap(bc, f.target, np.hstack([f.matrix, (-g.matrix) % p]), check=False)
    k, incl = kernel(joined)
    return k, compose(proj[0], incl), compose(proj[1], incl)


# --------------------------------------------------------------------------
# duality


def dual_module(m: Module) -> Module:
    """Vector-space dual, a module over the opposite algebra (transposed action)."""
    name = f"D({m.name})" if m.name else ""
    if m.name.startswith("D(") and m.name.endswith(")"):
        name = m.name[2:-1]
    return Module(opposite_algebra(m.algebra), m.action.transpose(0, 2, 1), name)


def dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual_module(f.target), dual_module(f.source), f.matrix.T, check=False)


# --------------------------------------------------------------------------
# short exact sequences


@dataclass(frozen=True, eq=False)
class ShortExactSequence:
    left_map: ModuleMap
    right_map: ModuleMap

    def violations(self) -> list[str]:
        out = []
        f, g = self.left_map, self.right_map
        if f.target != g.source:
            return ["maps are not composable"]
        if not is_monic(f):
            out.append("left map is not monic")
        if not is_epic(g):
            out.append("right map is not epic")
        im = la.image_basis(f.matrix, f.p)
        ker = la.kernel_basis(g.matrix, g.p)
        if im != ker:
            out.append("image of left map differs from kernel of right map")
        if not (intertwines(f) and intertwines(g)):
            out.append("a map fails to intertwine")
        return out

    @property
    def is_valid(self) -> bool:
        return not self.violations()

    def dual(self) -> "ShortExactSequence":
        return ShortExactSequence(dual_map(self.right_map), dual_map(self.left_map))


def split_section(epi: ModuleMap) -> ModuleMap | None:
    """A module map ``s`` with ``epi ∘ s = id``, or ``None`` if the epi does not split.

    Writes ``s = s0 + ι τ`` for a linear section ``s0`` and solves the linear
    system for ``τ : M -> ker``; the system is solvable exactly when the
    extension class vanishes.
    """
    if not is_epic(epi):
        raise ValueError("split_section expects an epimorphism")
    x, m = epi.source, epi.target
    p = epi.p
    if m.dim == 0:
        return zero_map(m, x)
    s0 = la.right_inverse(epi.matrix, p)
    ksub = la.kernel_basis(epi.matrix, p)
    kdim = ksub.dim
    if kdim == 0:
        return ModuleMap(m, x, s0)
    kmod, _ = submodule(x, ksub)
    rows, rhs = [], []
    eye_k, eye_m = la.identity(kdim), la.identity(m.dim)
    for gi in m.algebra.generators:
        rk, rm, rx = kmod.action[gi], m.action[gi], x.action[gi]
        delta = (rx @ s0 - s0 @ rm) % p
        coords = ksub.coordinates(delta.T).T  # kdim x m
        # tau rm - rk tau = coords, tau flattened row-major
        rows.append((np.kron(eye_k, rm.T) - np.kron(rk, eye_m)) % p)
        rhs.append(coords.reshape(-1, 1))
    if not rows:
        tau = np.zeros((kdim, m.dim), dtype=np.int64)
    else:
        sol = la.solve_right(np.vstack(rows), np.vstack(rhs), p)
        if sol is None:
            return None
        tau = sol.reshape(kdim, m.dim)
    sec = (s0 + ksub.basis.T @ tau) % p
    s = ModuleMap(m, x, sec)
    assert np.array_equal(la.matmul(epi.matrix, sec, p), eye_m)
    return s


# --------------------------------------------------------------------------
# decomposition along the support graph


def support_blocks(m: Module) -> list[list[int]]:
    """Connected components of the coordinate graph of the action.

    Coordinates ``a`` and ``b`` are adjacent when some action matrix has a
    nonzero ``(a, b)`` or ``(b, a)`` entry.  Each component spans a
    submodule and the module is their direct sum.  Only decompositions
    visible in the current basis are found.
    """
    if m.dim == 0:
        return []
    adj = np.any(m.generator_actions != 0, axis=0) if m.algebra.generators else np.zeros((m.dim, m.dim), bool)
    adj = adj | adj.T
    seen = np.zeros(m.dim, dtype=bool)
    blocks = []
    for start in range(m.dim):
        if seen[start]:
            continue
        comp, stack = [], [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in np.flatnonzero(adj[v] & ~seen):
                seen[w] = True
                stack.append(int(w))
        blocks.append(sorted(comp))
    return blocks


def restrict_to_block(m: Module, block: list[int]) -> Module:
    idx = np.array(block)
    return Module(m.algebra, m.action[:, idx[:, None], idx[None, :]])


def block_summands(m: Module) -> list[Module]:
    return [restrict_to_block(m, b) for b in support_blocks(m)]
