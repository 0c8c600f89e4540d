"""Classical homological algebra on the built-in corpus.

Run with ``python notebooks/01_classical_ext.py``.
"""

from relhom.corpus import all_corpora
from relhom.resolutions import ext_dims, free_resolution, inj_dim, proj_dim

corpora = all_corpora()

# F_2[x]/(x^2): the resolution of k is periodic, so every Ext group is one-dimensional.
r1 = corpora["R1"]
print("Ext_R1(k, k):", ext_dims(r1["k"], r1["k"], 6))

# F_2[x, y]/(x^2, xy, y^2): the Betti numbers of k double at every step.
r3 = corpora["R3"]
res = free_resolution(r3["k"], 5)
print("ranks of the minimal resolution of k over R3:", [res.rank(i) for i in range(6)])
print("Ext_R3(k, k):", ext_dims(r3["k"], r3["k"], 5))

# omega is injective but not projective; the ring is neither.
for name in ("R", "k", "omega"):
    m = r3[name]
    print(f"{name:6s} pd = {proj_dim(m)!s:13s} id = {inj_dim(m)}")

# The non-commutative example: 2x2 upper-triangular matrices are hereditary.
u = corpora["UT2"]
print("UT2 projective dimensions:", {n: proj_dim(m) for n, m in u.modules.items()})
