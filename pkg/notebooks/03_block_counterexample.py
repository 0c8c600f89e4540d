"""A class that is not a generator: one block of F_2 x F_2.

Run with ``python notebooks/03_block_counterexample.py``.
"""

from relhom.corpus import block_corpus
from relhom.diagnostics import check_global_dim, check_hom_faithful, check_thm_2_8
from relhom.relative import add_class, e_l_dim, l_dim

b = block_corpus()
cls = add_class(b["S1"], 6)
family = list(b.modules.values())

for name, m in b.modules.items():
    print(f"{name:6s} l_dim = {l_dim(cls, m)!s:13s} e_l_dim = {e_l_dim(cls, m)}")

rep = check_global_dim(cls, family)
print("sup over Gen[C]:", rep.sup, " add(C) = projectives:", rep.add_equals_projectives)
for f in rep.findings:
    print("finding:", f)

print(check_hom_faithful(cls, family).to_json()["overall"])
print("equivalent assertions on the family:", check_thm_2_8(cls, family).verdicts)
