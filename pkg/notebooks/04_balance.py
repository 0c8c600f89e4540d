"""Three ways of computing Ext, and where they stop agreeing.

Run with ``python notebooks/04_balance.py`` (about a minute).
"""

from relhom.corpus import r3_corpus
from relhom.relative import add_class, balance_report, injective_class, prod_class, projective_class

r3 = r3_corpus()
mods = list(r3.modules.values())

pairs = [
    ("projectives / injectives", projective_class(r3.algebra, 6), injective_class(r3.algebra, 6)),
    ("add(omega) / prod(omega)", add_class(r3["omega"], 6), prod_class(r3["omega"], 6)),
]
for label, x, y in pairs:
    balanced = 0
    for m in mods:
        for n in mods:
            rep = balance_report(x, y, m, n, 3)
            balanced += rep.balanced
            if not rep.balanced and m.name == n.name == "k":
                print(f"  {label}: (k, k) rows (left, right, total):",
                      [(r.left, r.right, r.total) for r in rep.rows])
    print(f"{label}: {balanced}/{len(mods) ** 2} pairs balanced up to degree 3")
