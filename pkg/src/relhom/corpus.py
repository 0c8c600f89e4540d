"""Built-in algebras and modules used by the tests, the CLI and the notebooks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    Algebra,
    Module,
    direct_sum,
    dual_module,
    quotient_by_submodule,
    regular_module,
)
from .linalg import Subspace


def _consts(n: int, products: dict[tuple[int, int], dict[int, int]]) -> np.ndarray:
    c = np.zeros((n, n, n), dtype=np.int64)
    for (i, j), terms in products.items():
        for k, v in terms.items():
            c[i, j, k] = v
    return c


def field_algebra(p: int) -> Algebra:
    return Algebra(p, np.ones((1, 1, 1), dtype=np.int64), [1], f"F{p}")


def truncated_polynomial(p: int, k: int, name: str | None = None) -> Algebra:
    """``F_p[x]/(x^k)`` in the monomial basis ``1, x, ..., x^{k-1}``."""
    prods = {(i, j): {i + j: 1} for i in range(k) for j in range(k) if i + j < k}
    unit = np.zeros(k, dtype=np.int64)
    unit[0] = 1
    return Algebra(p, _consts(k, prods), unit, name or f"F{p}[x]/(x^{k})")


def r1() -> Algebra:
    return truncated_polynomial(2, 2, "R1")


def r2() -> Algebra:
    return truncated_polynomial(2, 3, "R2")


def r3() -> Algebra:
    """``F_2[x, y]/(x^2, xy, y^2)`` in the basis ``1, x, y``."""
    prods = {(0, 0): {0: 1}, (0, 1): {1: 1}, (0, 2): {2: 1}, (1, 0): {1: 1}, (2, 0): {2: 1}}
    return Algebra(2, _consts(3, prods), [1, 0, 0], "R3")


def block_product() -> Algebra:
    """``F_2 x F_2`` with orthogonal idempotents ``e1, e2``."""
    return Algebra(2, _consts(2, {(0, 0): {0: 1}, (1, 1): {1: 1}}), [1, 1], "F2xF2")


def upper_triangular() -> Algebra:
    """2x2 upper-triangular matrices over F_2, basis ``e11, e12, e22``."""
    prods = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1}, (2, 2): {2: 1}}
    return Algebra(2, _consts(3, prods), [1, 0, 1], "UT2")


def one_dim_module(a: Algebra, values, name: str) -> Module:
    return Module(a, np.array(values, dtype=np.int64).reshape(a.dim, 1, 1), name)


def residue_field(a: Algebra, name: str = "k") -> Module:
    """The simple module of a local algebra whose non-unit basis vectors span the radical."""
    r = regular_module(a)
    rad = Subspace.span(np.eye(a.dim, dtype=np.int64)[1:], a.dim, a.p)
    q, _ = quotient_by_submodule(r, rad)
    return q.named(name)


@dataclass
class Corpus:
    """A family of modules over one algebra, with a designated class witness."""

    algebra: Algebra
    modules: dict[str, Module] = field(default_factory=dict)
    witness: str | None = None

    def __getitem__(self, name: str) -> Module:
        return self.modules[name]

    def names(self) -> list[str]:
        return list(self.modules)


def r1_corpus() -> Corpus:
    a = r1()
    reg = regular_module(a, "R")
    k = residue_field(a)
    return Corpus(a, {"R": reg, "k": k, "R+k": direct_sum(reg, k).named("R+k")}, "R")


def r2_corpus() -> Corpus:
    a = r2()
    reg = regular_module(a, "R")
    k = residue_field(a)
    rad2 = Subspace.span([[0, 0, 1]], 3, 2)
    m2, _ = quotient_by_submodule(reg, rad2)
    return Corpus(a, {"R": reg, "k": k, "R/x2": m2.named("R/x2")}, "R")


def r3_corpus() -> Corpus:
    a = r3()
    reg = regular_module(a, "R")
    k = residue_field(a)
    omega = Module(a, dual_module(reg).action, "omega")
    return Corpus(
        a,
        {
            "R": reg,
            "k": k,
            "omega": omega,
            "omega+R": direct_sum(omega, reg).named("omega+R"),
            "k+k": direct_sum(k, k).named("k+k"),
        },
        "omega",
    )


def block_corpus() -> Corpus:
    a = block_product()
    s1 = one_dim_module(a, [1, 0], "S1")
    s2 = one_dim_module(a, [0, 1], "S2")
    return Corpus(
        a,
        {"R": regular_module(a, "R"), "S1": s1, "S2": s2, "S1+S1": direct_sum(s1, s1).named("S1+S1")},
        "S1",
    )


def ut2_corpus() -> Corpus:
    a = upper_triangular()
    s1 = one_dim_module(a, [1, 0, 0], "S1")
    s2 = one_dim_module(a, [0, 0, 1], "S2")
    reg = regular_module(a, "R")
    # P2 = R e22 = span{e12, e22}
    p2 = Module(
        a,
        np.array(
            [
                [[1, 0], [0, 0]],  # e11: e12 -> e12, e22 -> 0
                [[0, 1], [0, 0]],  # e12: e22 -> e12
                [[0, 0], [0, 1]],  # e22: e22 -> e22
            ]
        ),
        "P2",
    )
    return Corpus(a, {"R": reg, "S1": s1, "S2": s2, "P2": p2}, "R")


def field_corpus(p: int) -> Corpus:
    a = field_algebra(p)
    k = regular_module(a, "k")
    return Corpus(a, {"k": k, "k+k": direct_sum(k, k).named("k+k")}, "k")


def all_corpora() -> dict[str, Corpus]:
    return {
        "F2": field_corpus(2),
        "F3": field_corpus(3),
        "R1": r1_corpus(),
        "R2": r2_corpus(),
        "R3": r3_corpus(),
        "F2xF2": block_corpus(),
        "UT2": ut2_corpus(),
    }
