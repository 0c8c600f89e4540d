"""Relative homological algebra with the canonical module of a short local ring.

Run with ``python notebooks/02_canonical_module.py``.
"""

from relhom.corpus import r3_corpus
from relhom.diagnostics import check_cor_3_5
from relhom.homtensor import hom_dim, hom_module, is_semidualizing, tensor_over_algebra
from relhom.relative import add_class, e_l_dim, in_add, l_dim, proper_left_resolution, relative_ext_dims
from relhom.resolutions import ext_dims

r3 = r3_corpus()
om = r3["omega"]

print(is_semidualizing(om, 6).summary())
cls = add_class(om, 6)

# omega is the injective hull of k with a two-dimensional top, so it does not surject onto R.
print("dim Hom(omega, k) =", hom_dim(om, r3["k"]), " dim Hom(omega, R) =", hom_dim(om, r3["R"]))

for name, m in r3.modules.items():
    res = proper_left_resolution(cls, m, 3)
    kernels = [res.kernel(j).dim for j in range(4)]
    print(f"{name:8s} in add(omega): {in_add(cls, m)!s:5s} l_dim = {l_dim(cls, m)!s:13s} "
          f"e_l_dim = {e_l_dim(cls, m)!s:13s} kernel dims {kernels}")

# Relative Ext over add(omega) is classical Ext after applying Hom(omega, -).
k = r3["k"]
print("Ext_{P_omega}(k, k):          ", relative_ext_dims(cls, k, k, 4))
print("Ext(Hom(omega,k), Hom(omega,k)):", ext_dims(hom_module(om, k), hom_module(om, k), 4))
print("omega ⊗ k has dimension", tensor_over_algebra(om, k).result.dim)

for name, m in r3.modules.items():
    rep = check_cor_3_5(om, m, 6)
    print(name, [row[1:] for row in rep.rows])
