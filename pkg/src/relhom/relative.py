"""Approximations by ``add(C)`` and ``prod(C)``, relative dimensions and relative Ext.

Classes of kind ``prod`` are never handled directly: a ``prod(W)``
construction for ``M`` over ``A`` is the dual of the ``add(DW)``
construction for ``DM`` over ``A^op``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property, lru_cache

import numpy as np

from . import linalg as la
from .algebra import (
    Module,
    ModuleMap,
    block_summands,
    dual_module,
    image,
    is_epic,
)
from .homtensor import generator_maps, hom_as_end_module, hom_space, identity_factors
from .resolutions import (
    ABOVE_CUTOFF,
    Dim,
    PowerResolution,
    _make_stage,
    cohomology_dims,
    default_cutoff,
    ext_dims,
    is_projective,
)


class UncertifiedClass(ValueError):
    """Raised when a dimension is requested for a class without a self-orthogonality certificate."""


@dataclass(frozen=True, eq=False)
class ApproxClass:
    kind: str  # "add" or "prod"
    witness: Module
    self_orthogonal_cutoff: int | None = None

    def __post_init__(self):
        if self.kind not in ("add", "prod"):
            raise ValueError(f"unknown class kind {self.kind!r}")

    def __eq__(self, other):
        return (
            isinstance(other, ApproxClass)
            and (self.kind, self.witness) == (other.kind, other.witness)
            and self.self_orthogonal_cutoff == other.self_orthogonal_cutoff
        )

    def __hash__(self):
        return hash((self.kind, self.witness, self.self_orthogonal_cutoff))

    def __repr__(self):
        return f"{self.kind}({self.witness.name or 'C'})"

    @property
    def label(self) -> str:
        return repr(self)

    @property
    def algebra(self):
        return self.witness.algebra

    @cached_property
    def dual(self) -> "ApproxClass":
        """The class on the opposite side: ``prod(W)`` <-> ``add(DW)``."""
        kind = "add" if self.kind == "prod" else "prod"
        return ApproxClass(kind, dual_module(self.witness), self.self_orthogonal_cutoff)

    def certified(self, cutoff: int | None = None) -> "ApproxClass":
        """Certify ``Ext^{1..cutoff}(C, C) = 0``; raise if it fails."""
        cutoff = default_cutoff() if cutoff is None else cutoff
        bad = self_orthogonality_defects(self.witness, cutoff)
        if bad:
            raise UncertifiedClass(f"{self!r} is not self-orthogonal: Ext dims {bad}")
        return replace(self, self_orthogonal_cutoff=cutoff)

    def require_certificate(self, cutoff: int):
        if self.self_orthogonal_cutoff is None:
            raise UncertifiedClass(f"{self!r} has no self-orthogonality certificate")
        if self.self_orthogonal_cutoff < cutoff:
            raise UncertifiedClass(
                f"{self!r} certified only to {self.self_orthogonal_cutoff}, {cutoff} requested"
            )


def add_class(c: Module, certify: int | None = None) -> ApproxClass:
    cls = ApproxClass("add", c)
    return cls.certified(certify) if certify is not None else cls


def prod_class(c: Module, certify: int | None = None) -> ApproxClass:
    cls = ApproxClass("prod", c)
    return cls.certified(certify) if certify is not None else cls


def self_orthogonality_defects(c: Module, cutoff: int) -> dict[int, int]:
    dims = ext_dims(c, c, cutoff)
    return {i: dims[i] for i in range(1, cutoff + 1) if dims[i]}


def _as_add(cls: ApproxClass) -> ApproxClass:
    if cls.kind != "add":
        raise ValueError(f"expected an add class, got {cls!r}")
    return cls


# --------------------------------------------------------------------------
# precovers


def _precover_maps(c: Module, m: Module) -> list[np.ndarray]:
    return list(hom_space(c, m).matrices)


def canonical_precover(cls: ApproxClass, m: Module) -> ModuleMap:
    """``C^h -> m`` summing a basis of ``Hom(C, m)``; ``h = dim Hom(C, m)``."""
    c = _as_add(cls).witness
    return _make_stage(c, m, _precover_maps(c, m)).cover


def precover_certificate(c: Module, phi: ModuleMap) -> bool:
    """``Hom(C, phi)`` is surjective, with source ``C^h``."""
    target = hom_space(c, phi.target)
    if target.dim == 0:
        return True
    h = phi.source.dim // c.dim if c.dim else 0
    end = hom_space(c, c).matrices
    blocks = phi.matrix.reshape(phi.target.dim, h, c.dim).transpose(1, 0, 2)
    comps = np.einsum("aij,ejk->aeik", blocks, end) % c.p
    coords = target.coordinates(comps.reshape(-1, phi.target.dim, c.dim))
    if not target.contains(comps.reshape(-1, phi.target.dim, c.dim)):
        return False
    return la.rank(coords, c.p) == target.dim


@lru_cache(maxsize=8192)
def _block_in_add(c: Module, m: Module) -> bool:
    if m.dim == 0 or m == c:
        return True
    # any precover splits when m is in add(C); the reduced one is smallest
    return identity_factors(generator_maps(c, m), c, m)


def in_add(cls: ApproxClass, m: Module) -> bool:
    """``m`` is a summand of a finite power of the witness.

    Membership is decided block by block on the support decomposition of
    ``m``, since add(C) is closed under sums and summands.
    """
    if cls.kind == "prod":
        return in_add(cls.dual, dual_module(m))
    c = cls.witness
    distinct = list(dict.fromkeys(block_summands(c)))
    if len(distinct) == 1:
        c = distinct[0]  # add(B^r) = add(B)
    return all(_block_in_add(c, b) for b in block_summands(m))


def image_restricted_precover(cls: ApproxClass, m: Module) -> ModuleMap:
    """The canonical precover corestricted to its image: an epic precover of ``Im``."""
    phi = canonical_precover(cls, m)
    _, _, cores = image(phi)
    return cores


# --------------------------------------------------------------------------
# proper resolutions


class ProperResolution(PowerResolution):
    """Proper ``add(C)``-resolution built from canonical precovers of successive kernels.

    With ``reduced=True`` (the default) each stage uses only generators of
    ``Hom(C, K)`` over ``End(C)``; with ``reduced=False`` it uses a full
    basis, so ``h = dim Hom(C, K)``.  Both are precovers, so the kernels
    differ only by summands in add(C) and every dimension and relative Ext
    group agrees between the two.
    """

    def __init__(self, cls: ApproxClass, module: Module, reduced: bool = True):
        c = _as_add(cls).witness
        maps = generator_maps if reduced else _precover_maps
        super().__init__(c, module, lambda k: maps(c, k), "add_C")
        self.cls = cls
        self.reduced = reduced

    def precover_witnesses(self, n: int) -> list[bool]:
        return [precover_certificate(self.base, self.stage(j).cover) for j in range(n + 1)]

    def kernels(self, n: int) -> list[Module]:
        return [self.kernel(j) for j in range(n + 1)]


@lru_cache(maxsize=2048)
def _proper(c: Module, m: Module, reduced: bool) -> ProperResolution:
    return ProperResolution(ApproxClass("add", c), m, reduced)


def proper_left_resolution(
    cls: ApproxClass, m: Module, length: int | None = None, reduced: bool = True
) -> ProperResolution:
    res = _proper(_as_add(cls).witness, m, reduced)
    if length is not None:
        res.stage(length)
    return res


def coproper_right_resolution(cls: ApproxClass, m: Module, length: int | None = None) -> ProperResolution:
    """Returned as the proper ``add(DW)``-resolution of ``DM`` over the opposite algebra."""
    if cls.kind != "prod":
        raise ValueError("coproper resolutions need a prod class")
    return proper_left_resolution(cls.dual, dual_module(m), length)


# --------------------------------------------------------------------------
# dimensions


def _end_projective(c: Module, m: Module) -> bool:
    return is_projective(hom_as_end_module(c, m))


def l_dim(cls: ApproxClass, m: Module, cutoff: int | None = None) -> Dim:
    """Least length of a proper ``add(C)``-resolution.

    A proper resolution turns into a projective resolution of ``Hom(C, m)``
    over ``End(C)`` (acting on the right), and a length-``n`` one exists
    exactly when ``Hom(C, K_{n-1})`` is projective there.
    """
    if cls.kind == "prod":
        return r_dim(cls, m, cutoff)
    cutoff = default_cutoff() if cutoff is None else cutoff
    cls.require_certificate(cutoff)
    res = proper_left_resolution(cls, m)
    for n in range(cutoff + 1):
        if _end_projective(cls.witness, res.target(n)):
            return n
    return ABOVE_CUTOFF


def e_l_dim(cls: ApproxClass, m: Module, cutoff: int | None = None) -> Dim:
    """Least ``n`` such that the canonical resolution is exact through ``n`` and ``K_{n-1}`` lies in the class."""
    if cls.kind == "prod":
        return e_r_dim(cls, m, cutoff)
    cutoff = default_cutoff() if cutoff is None else cutoff
    cls.require_certificate(cutoff)
    if in_add(cls, m):
        return 0
    res = proper_left_resolution(cls, m)
    for n in range(1, cutoff + 1):
        if not res.stage(n - 1).epic:
            return ABOVE_CUTOFF
        if in_add(cls, res.kernel(n - 1)):
            return n
    return ABOVE_CUTOFF


def r_dim(cls: ApproxClass, m: Module, cutoff: int | None = None) -> Dim:
    if cls.kind != "prod":
        raise ValueError("r_dim needs a prod class")
    return l_dim(cls.dual, dual_module(m), cutoff)


def e_r_dim(cls: ApproxClass, m: Module, cutoff: int | None = None) -> Dim:
    if cls.kind != "prod":
        raise ValueError("e_r_dim needs a prod class")
    return e_l_dim(cls.dual, dual_module(m), cutoff)


# --------------------------------------------------------------------------
# relative Ext


def relative_ext_dims(cls: ApproxClass, m: Module, n: Module, upto: int) -> list[int]:
    """``Ext^i_X(m, n)`` for ``i = 0..upto``, from the proper resolution of ``m``."""
    if cls.kind == "prod":
        return relative_ext_coproper_dims(cls, m, n, upto)
    return cohomology_dims(proper_left_resolution(cls, m), n, upto)


def relative_ext(cls: ApproxClass, m: Module, n: Module, i: int) -> int:
    return relative_ext_dims(cls, m, n, i)[i]


def relative_ext_coproper_dims(cls: ApproxClass, m: Module, n: Module, upto: int) -> list[int]:
    """``Ext^i_Y(m, n)``, from the coproper resolution of ``n`` (computed on the dual side)."""
    if cls.kind != "prod":
        raise ValueError("coproper Ext needs a prod class")
    return cohomology_dims(proper_left_resolution(cls.dual, dual_module(n)), dual_module(m), upto)


def relative_ext_coproper(cls: ApproxClass, m: Module, n: Module, i: int) -> int:
    return relative_ext_coproper_dims(cls, m, n, i)[i]


# --------------------------------------------------------------------------
# balance


@dataclass
class BalanceRow:
    degree: int
    left: int
    right: int
    total: int

    @property
    def balanced(self) -> bool:
        return self.left == self.right == self.total


@dataclass
class BalanceReport:
    x: str
    y: str
    m: str
    n: str
    rows: list[BalanceRow]
    d_squared_ok: bool

    @property
    def balanced(self) -> bool:
        return self.d_squared_ok and all(r.balanced for r in self.rows)


def balance_report(cls_x: ApproxClass, cls_y: ApproxClass, m: Module, n: Module, max_degree: int) -> BalanceReport:
    from .resolutions import total_hom_complex

    left_res = proper_left_resolution(cls_x, m)
    right_res = coproper_right_resolution(cls_y, n)
    left = cohomology_dims(left_res, n, max_degree)
    right = relative_ext_coproper_dims(cls_y, m, n, max_degree)
    tot = total_hom_complex(left_res, right_res, max_degree)
    rows = [BalanceRow(i, left[i], right[i], tot.dims[i]) for i in range(max_degree + 1)]
    return BalanceReport(repr(cls_x), repr(cls_y), m.name, n.name, rows, tot.d_squared_ok)


def projective_class(a, certify: int | None = None) -> ApproxClass:
    from .algebra import regular_module

    return add_class(regular_module(a, "R"), certify)


def injective_class(a, certify: int | None = None) -> ApproxClass:
    """``prod(D(A^op))``: the injective modules."""
    from .algebra import opposite_algebra, regular_module

    w = dual_module(regular_module(opposite_algebra(a), "R"))
    return prod_class(Module(a, w.action, "DR"), certify)
