"""Resolutions, classical dimensions and Ext, and total Hom complexes.

Every resolution here has terms that are finite powers ``B^h`` of a single
base module ``B``.  That lets the cochain complex ``Hom(B^h, N)`` be written
as ``Hom(B, N)^h`` with differentials assembled from ``End(B)``
coordinates, which is much smaller than solving intertwining systems on the
big terms.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Union

import numpy as np

from . import linalg as la
from .algebra import (
    Module,
    ModuleMap,
    block_summands,
    compose,
    dual_module,
    is_epic,
    kernel,
    power,
    regular_module,
)
from .homtensor import hom_space, identity_factors


class _AboveCutoff:
    """Sentinel for a dimension that exceeds the cutoff searched."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "above_cutoff"

    __str__ = __repr__

    def __reduce__(self):
        return (_AboveCutoff, ())


ABOVE_CUTOFF = _AboveCutoff()
Dim = Union[int, _AboveCutoff]


def default_cutoff() -> int:
    raw = os.environ.get("RELHOM_CUTOFF")
    if raw is None or raw.strip() == "":
        return 6
    value = int(raw)
    if value < 0:
        raise ValueError("RELHOM_CUTOFF must be nonnegative")
    return value


def dim_to_json(d: Dim):
    return "above_cutoff" if d is ABOVE_CUTOFF else int(d)


# --------------------------------------------------------------------------
# chain complexes


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """``X_L -> ... -> X_1 -> X_0``; ``differentials[i-1]`` is ``d_i : X_i -> X_{i-1}``."""

    modules: list[Module]
    differentials: list[ModuleMap]

    def __post_init__(self):
        if len(self.differentials) != max(len(self.modules) - 1, 0):
            raise ValueError("need one differential per positive degree")
        for i, d in enumerate(self.differentials, start=1):
            if d.source != self.modules[i] or d.target != self.modules[i - 1]:
                raise ValueError(f"d_{i} has the wrong endpoints")

    def d_squared_defects(self) -> list[int]:
        out = []
        for i in range(1, len(self.differentials)):
            if np.any(compose(self.differentials[i - 1], self.differentials[i]).matrix):
                out.append(i + 1)
        return out

    def homology_dims(self) -> list[int]:
        ranks = [d.rank for d in self.differentials]
        out = []
        for i, m in enumerate(self.modules):
            r_out = ranks[i - 1] if i >= 1 else 0
            r_in = ranks[i] if i < len(ranks) else 0
            out.append(m.dim - r_out - r_in)
        return out


# --------------------------------------------------------------------------
# resolutions with power terms


@dataclass(frozen=True, eq=False)
class Stage:
    h: int
    cover: ModuleMap  # B^h -> K_{j-1}
    kernel: Module  # K_j
    inclusion: ModuleMap  # K_j -> B^h

    @property
    def epic(self) -> bool:
        return is_epic(self.cover)


CoverFn = Callable[[Module], list[np.ndarray]]


class PowerResolution:
    """A left resolution ``... -> B^{h_1} -> B^{h_0} -> M`` built stage by stage.

    ``cover_fn(K)`` returns the matrices of maps ``B -> K`` whose sum is the
    next stage.  Stage ``j`` covers ``K_{j-1}`` (with ``K_{-1} = M``) and has
    kernel ``K_j``; the differential ``d_j`` is ``inclusion_{j-1} ∘ cover_j``.
    Stages are built lazily and cached.
    """

    def __init__(self, base: Module, module: Module, cover_fn: CoverFn, kind: str):
        if base.algebra != module.algebra:
            raise ValueError("base and module live over different algebras")
        self.base = base
        self.module = module
        self.kind = kind
        self._cover_fn = cover_fn
        self._stages: list[Stage] = []

    def __repr__(self):
        return f"<{self.kind} resolution of {self.module!r} by {self.base.name or 'B'}>"

    def stage(self, j: int) -> Stage:
        while len(self._stages) <= j:
            prev = self.module if not self._stages else self._stages[-1].kernel
            self._stages.append(_make_stage(self.base, prev, self._cover_fn(prev)))
        return self._stages[j]

    def kernel(self, j: int) -> Module:
        """``K_j = ker(f_j)``; ``f_0`` is the augmentation."""
        return self.stage(j).kernel

    def target(self, j: int) -> Module:
        """The module covered by stage ``j``."""
        return self.module if j == 0 else self.kernel(j - 1)

    def rank(self, j: int) -> int:
        return self.stage(j).h

    def term(self, j: int) -> Module:
        return self.stage(j).cover.source

    @property
    def augmentation(self) -> ModuleMap:
        return self.stage(0).cover

    def differential(self, j: int) -> ModuleMap:
        if j < 1:
            raise ValueError("differentials start at degree 1")
        return compose(self.stage(j - 1).inclusion, self.stage(j).cover)

    def exact_through(self, n: int) -> bool:
        """Augmented complex exact at ``M, X_0, ..., X_{n-1}``."""
        return all(self.stage(j).epic for j in range(n))

    def exactness_profile(self, n: int) -> list[bool]:
        return [self.stage(j).epic for j in range(n + 1)]

    def chain_complex(self, length: int) -> ChainComplex:
        mods = [self.term(j) for j in range(length + 1)]
        return ChainComplex(mods, [self.differential(j) for j in range(1, length + 1)])

    def end_coordinates(self, j: int) -> np.ndarray:
        """``lam[a, b, e]``: ``End(B)`` coordinates of block ``(a, b)`` of ``d_j``."""
        return _end_coords(self.base, self.differential(j).matrix, self.rank(j - 1), self.rank(j))


def _make_stage(base: Module, target: Module, maps: list[np.ndarray]) -> Stage:
    h = len(maps)
    src = power(base, h)
    if h:
        mat = np.hstack(maps) % base.p
    else:
        mat = la.zeros(target.dim, 0)
    cover = ModuleMap(src, target, mat)
    k, inc = kernel(cover)
    return Stage(h, cover, k, inc)


def _end_coords(base: Module, mat: np.ndarray, rows: int, cols: int) -> np.ndarray:
    bd = base.dim
    end = hom_space(base, base)
    if rows == 0 or cols == 0 or bd == 0:
        return np.zeros((rows, cols, end.dim), dtype=np.int64)
    blocks = mat.reshape(rows, bd, cols, bd).transpose(0, 2, 1, 3)
    return end.coordinates(blocks)


@lru_cache(maxsize=4096)
def _post_table(base: Module, n: Module) -> np.ndarray:
    """``T[t, e, s]``: coordinates of ``beta_t ∘ eps_e`` in ``Hom(B, N)``."""
    hb = hom_space(base, n)
    end = hom_space(base, base)
    if hb.dim == 0 or end.dim == 0:
        return np.zeros((hb.dim, end.dim, hb.dim), dtype=np.int64)
    comp = np.einsum("tij,ejk->teik", hb.matrices, end.matrices) % base.p
    return hb.coordinates(comp)


def _cochain_matrix(res: PowerResolution, n: Module, j: int) -> np.ndarray:
    """Matrix of ``Hom(d_j, N) : Hom(X_{j-1}, N) -> Hom(X_j, N)`` (acting on columns)."""
    t = _post_table(res.base, n)
    lam = res.end_coordinates(j)
    hd = t.shape[0]
    a, b = res.rank(j - 1), res.rank(j)
    if hd == 0 or a == 0 or b == 0:
        return la.zeros(b * hd, a * hd)
    big = np.einsum("abe,tes->bsat", lam, t) % res.base.p
    return big.reshape(b * hd, a * hd)


def cohomology_dims(res: PowerResolution, n: Module, upto: int) -> list[int]:
    """``dim H^i Hom(X_•, N)`` for ``i = 0..upto`` (deleted resolution)."""
    if res.base.algebra != n.algebra:
        raise ValueError("module lives over a different algebra")
    hd = hom_space(res.base, n).dim
    ranks = [0] + [la.rank(_cochain_matrix(res, n, j), n.p) for j in range(1, upto + 2)]
    return [res.rank(i) * hd - ranks[i + 1] - ranks[i] for i in range(upto + 1)]


# --------------------------------------------------------------------------
# free resolutions


def free_cover(m: Module) -> ModuleMap:
    """``A^{dim m} -> m`` sending the i-th generator to the i-th basis vector."""
    a = m.algebra
    src = power(regular_module(a), m.dim)
    mat = m.action.transpose(1, 2, 0).reshape(m.dim, m.dim * a.dim)
    return ModuleMap(src, m, mat)


def _generator_cover(m: Module) -> list[np.ndarray]:
    return [m.action[:, :, g].T for g in m.generators]


@lru_cache(maxsize=1024)
def free_resolution_of(m: Module) -> PowerResolution:
    return PowerResolution(regular_module(m.algebra), m, _generator_cover, "free")


def free_resolution(m: Module, length: int) -> PowerResolution:
    res = free_resolution_of(m)
    res.stage(length)
    return res


def syzygy(m: Module, j: int) -> Module:
    """The ``j``-th syzygy ``Ω^j m`` (``Ω^0 m = m``)."""
    return m if j == 0 else free_resolution_of(m).kernel(j - 1)


@lru_cache(maxsize=8192)
def _block_projective(m: Module) -> bool:
    gens = m.generators
    a = m.algebra
    if len(gens) * a.dim == m.dim:
        return True  # the generator cover is a bijection from a free module
    return identity_factors(_generator_cover(m), regular_module(a), m)


def is_projective(m: Module) -> bool:
    return all(_block_projective(b) for b in block_summands(m))


def proj_dim(m: Module, cutoff: int | None = None) -> Dim:
    cutoff = default_cutoff() if cutoff is None else cutoff
    for n in range(cutoff + 1):
        if is_projective(syzygy(m, n)):
            return n
    return ABOVE_CUTOFF


def ext_dims(m: Module, n: Module, upto: int) -> list[int]:
    return cohomology_dims(free_resolution_of(m), n, upto)


def ext_dim(m: Module, n: Module, i: int) -> int:
    return ext_dims(m, n, i)[i]


def inj_dim(m: Module, cutoff: int | None = None) -> Dim:
    return proj_dim(dual_module(m), cutoff)


# --------------------------------------------------------------------------
# total complex of Hom(E, F)


@dataclass
class TotalComplexResult:
    dims: list[int]
    d_squared_ok: bool


def total_hom_complex(left: PowerResolution, right_dual: PowerResolution, upto: int) -> TotalComplexResult:
    """Cohomology of ``Tot Hom(E, F)`` in degrees ``0..upto``.

    ``left`` is a left resolution ``E`` of ``M`` over ``A``.  ``right_dual``
    is a left resolution of ``D N`` over ``A^op``; its dual is the right
    coresolution ``F`` of ``N`` with terms ``(D B')^{g_q}``.
    """
    a = left.module.algebra
    n_mod = dual_module(right_dual.module)
    if n_mod.algebra != a:
        raise ValueError("resolutions live over incompatible algebras")
    p = a.p
    b1 = left.base
    j_mod = dual_module(right_dual.base)
    hom = hom_space(b1, j_mod)
    hd = hom.dim
    e1 = hom_space(b1, b1)
    e2 = hom_space(j_mod, j_mod)
    # f ∘ eps (horizontal) and eps' ∘ f (vertical) in the Hom(B1, J) basis
    t1 = hom.coordinates(np.einsum("tij,ejk->teik", hom.matrices, e1.matrices) % p) if hd and e1.dim else None
    t2 = hom.coordinates(np.einsum("eij,tjk->etik", e2.matrices, hom.matrices) % p) if hd and e2.dim else None

    hs = [left.rank(i) for i in range(upto + 2)]
    gs = [right_dual.rank(i) for i in range(upto + 2)]

    def offsets(n):
        offs, pos = {}, 0
        for pp in range(n + 1):
            offs[pp] = pos
            pos += hs[pp] * gs[n - pp] * hd
        return offs, pos

    def vertical(q):
        """Blocks of ``F^q -> F^{q+1}`` as ``End(J)`` coordinates, shape (g_{q+1}, g_q, e2)."""
        mat = right_dual.differential(q + 1).matrix.T
        bd = j_mod.dim
        rows, cols = gs[q + 1], gs[q]
        if rows == 0 or cols == 0:
            return np.zeros((rows, cols, e2.dim), dtype=np.int64)
        blocks = mat.reshape(rows, bd, cols, bd).transpose(0, 2, 1, 3)
        return e2.coordinates(blocks)

    def differential(n):
        src_off, src_dim = offsets(n)
        tgt_off, tgt_dim = offsets(n + 1)
        out = np.zeros((tgt_dim, src_dim), dtype=np.int64)
        if hd == 0:
            return out
        for pp in range(n + 1):
            q = n - pp
            h, g = hs[pp], gs[q]
            if h == 0 or g == 0:
                continue
            # horizontal: Hom(E_p, F^q) -> Hom(E_{p+1}, F^q), f ↦ f ∘ d_{p+1}
            h2 = hs[pp + 1]
            if h2 and t1 is not None:
                lam = left.end_coordinates(pp + 1)  # (h, h2, e1)
                # source index (a, c, t) with a<h, c<g; target (b, c, s) with b<h2
                core = np.einsum("abe,tes->bsat", lam, t1, optimize=True)
                blk = np.einsum("bsat,cd->bcsadt", core, np.eye(g, dtype=np.int64), optimize=True)
                blk = blk.reshape(h2 * g * hd, h * g * hd) % p
                out[tgt_off[pp + 1] : tgt_off[pp + 1] + blk.shape[0], src_off[pp] : src_off[pp] + blk.shape[1]] += blk
            # vertical: Hom(E_p, F^q) -> Hom(E_p, F^{q+1}), f ↦ (-1)^p ∂ ∘ f
            g2 = gs[q + 1]
            if g2 and t2 is not None:
                mu = vertical(q)  # (g2, g, e2)
                blk = np.einsum("dce,ets->dsct", mu, t2, optimize=True)  # (g2, hd, g, hd)
                full = np.einsum("ab,dsct->adsbct", np.eye(h, dtype=np.int64), blk, optimize=True)
                full = full.reshape(h * g2 * hd, h * g * hd)
                if pp % 2:
                    full = -full
                out[tgt_off[pp] : tgt_off[pp] + full.shape[0], src_off[pp] : src_off[pp] + full.shape[1]] += full
        return out % p

    mats = [differential(n) for n in range(upto + 1)]
    ok = all(not np.any(la.matmul(mats[n + 1], mats[n], p)) for n in range(upto))
    ranks = [0] + [la.rank(m, p) for m in mats]
    dims = [offsets(n)[1] - ranks[n + 1] - ranks[n] for n in range(upto + 1)]
    return TotalComplexResult(dims, ok)
