"""Acceptance criteria, one test each, each printing a single PASS/FAIL line.

Tolerances are pinned at the top.  All comparisons are exact integer
equalities; only the wall-clock limits are tolerances.  The lines are
collected and repeated in the pytest terminal summary.
"""

from __future__ import annotations

import subprocess
import sys
import textwrap
import time

import numpy as np
import pytest

from relhom import diagnostics as dg
from relhom import linalg as la
from relhom.algebra import dual_module, regular_module
from relhom.corpus import all_corpora, r1_corpus, r3_corpus
from relhom.homtensor import hom_module, is_semidualizing, tensor_over_algebra
from relhom.relative import (
    add_class,
    balance_report,
    injective_class,
    l_dim,
    e_l_dim,
    prod_class,
    projective_class,
    relative_ext_dims,
)
from relhom.resolutions import ABOVE_CUTOFF, ext_dims

LINALG_SECONDS = 5.0
EXT_SECONDS = 1.0
COR_3_5_SECONDS = 30.0
CUTOFF = 6
MAX_DEGREE = 4
N_MATRICES = 1000
MAX_SIDE = 8

RESULTS: list[str] = []


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)


def fresh_seconds(body: str) -> float:
    """Wall time of a snippet in a fresh interpreter, so no cache is warm."""
    script = textwrap.dedent(
        """
        import time
        t0 = time.perf_counter()
        {body}
        print(time.perf_counter() - t0)
        """
    ).format(body=textwrap.indent(textwrap.dedent(body), "").strip().replace("\n", "\n"))
    out = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True, check=True)
    return float(out.stdout.strip().splitlines()[-1])


def corpus_items():
    for cname, corp in all_corpora().items():
        yield cname, corp


def certified_classes(corp):
    """The projective class plus the corpus witness class, when self-orthogonal."""
    out = [projective_class(corp.algebra, CUTOFF)]
    try:
        w = add_class(corp[corp.witness], CUTOFF)
    except Exception:
        return out
    if w != add_class(regular_module(corp.algebra), CUTOFF):
        out.append(w)
    return out


# --------------------------------------------------------------------------


def _linalg_sweep(seed: int = 0) -> list[str]:
    rng = np.random.default_rng(seed)
    bad = []
    for t in range(N_MATRICES):
        p = (2, 3, 5)[t % 3]
        r, c = rng.integers(1, MAX_SIDE + 1, 2)
        m = rng.integers(0, p, (r, c))
        rr, k, piv = la.rref(m, p)
        if not np.array_equal(la.rref(rr, p)[0], rr):
            bad.append(f"{t}: rref not idempotent")
        ker = la.kernel_matrix(m, p)
        if ker.shape[0] + k != c or (ker.size and np.any(la.matmul(m, ker.T, p))):
            bad.append(f"{t}: rank-nullity")
        x0 = rng.integers(0, p, (c, 1))
        b = la.matmul(m, x0, p)
        x = la.solve_right(m, b, p)
        if x is None or not np.array_equal(la.matmul(m, x, p), b):
            bad.append(f"{t}: solve_right")
    return bad


def test_criterion_01_linear_algebra():
    start = time.perf_counter()
    bad = _linalg_sweep()
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < LINALG_SECONDS
    record(1, ok, f"{N_MATRICES} random matrices over F2/F3/F5, {len(bad)} violations, {elapsed:.2f}s < {LINALG_SECONDS}s")
    assert ok, bad[:5]


def _periodic_oracle(upto: int) -> list[int]:
    """Ext(k, k) over F_2[x]/(x^2) from the explicit periodic resolution.

    Every term is R, every differential is multiplication by x, and
    ``Hom_R(R, k) = k`` by evaluation at 1, so the cochain maps are
    ``k -> k``, ``v -> (x . 1) v = 0``.
    """
    x_on_k = np.array([[0]])
    dims = []
    for i in range(upto + 1):
        into = 0 if i == 0 else la.rank(x_on_k, 2)
        out_of = la.rank(x_on_k, 2)
        dims.append(1 - into - out_of)
    return dims


def test_criterion_02_classical_ext():
    secs = fresh_seconds(
        """
        from relhom.corpus import r1_corpus
        from relhom.resolutions import ext_dims
        c = r1_corpus()
        ext_dims(c["k"], c["k"], 6)
        """
    )
    c = r1_corpus()
    got = ext_dims(c["k"], c["k"], 6)
    oracle = _periodic_oracle(6)
    ok = got == oracle == [1] * 7 and secs < EXT_SECONDS
    record(2, ok, f"Ext^i_R1(k,k) = {got}, oracle {oracle}, {secs:.2f}s < {EXT_SECONDS}s")
    assert ok


def test_criterion_03_duality_balance():
    bad = []
    pairs = 0
    for cname, corp in corpus_items():
        for m in corp.modules.values():
            for n in corp.modules.values():
                pairs += 1
                if ext_dims(m, n, MAX_DEGREE) != ext_dims(dual_module(n), dual_module(m), MAX_DEGREE):
                    bad.append((cname, m.name, n.name))
    record(3, not bad, f"Ext_A(M,N) = Ext_A^op(DN,DM) on {pairs} pairs, i <= {MAX_DEGREE}, {len(bad)} mismatches")
    assert not bad


def test_criterion_04_semidualizing():
    om = r3_corpus()["omega"]
    k1 = r1_corpus()["k"]
    good = is_semidualizing(om, CUTOFF)
    badr = is_semidualizing(k1, CUTOFF)
    ok = good.verdict and good.homothety_bijective and not badr.verdict and badr.ext_dims[1] != 0
    record(4, ok, f"omega over R3: {good.summary()}; k over R1 rejected with Ext^1 = {badr.ext_dims[1]}")
    assert ok


def test_criterion_05_prop_2_6():
    violations, checked = [], 0
    for cname, corp in corpus_items():
        for cls in certified_classes(corp):
            for m in corp.modules.values():
                n = e_l_dim(cls, m, CUTOFF)
                if n is ABOVE_CUTOFF:
                    continue
                checked += 1
                rep = dg.check_prop_2_6(cls, m, CUTOFF)
                if not rep.passed:
                    violations.append((cname, repr(cls), m.name))
    record(5, not violations, f"{checked} (class, module) instances with finite e_l_dim, {len(violations)} violations")
    assert not violations


def _cor_3_5_instances():
    out = []
    for cname, corp in corpus_items():
        if not corp.algebra.commutative:
            continue
        reg = regular_module(corp.algebra, "R")
        out += [(reg, m) for m in corp.modules.values()]
    r3 = r3_corpus()
    out += [(r3["omega"], m) for m in r3.modules.values()]
    return out


def test_criterion_06_cor_3_5():
    secs = fresh_seconds(
        """
        import sys
        sys.path.insert(0, %r)
        from test_acceptance import _cor_3_5_instances
        from relhom.diagnostics import check_cor_3_5
        for c, m in _cor_3_5_instances():
            check_cor_3_5(c, m, 6)
        """
        % str(__import__("pathlib").Path(__file__).parent)
    )
    bad = []
    insts = _cor_3_5_instances()
    for c, m in insts:
        rep = dg.check_cor_3_5(c, m, CUTOFF)
        if not rep.passed:
            bad.append((c.algebra.name, c.name, m.name, rep.rows))
    ok = not bad and secs < COR_3_5_SECONDS
    record(6, ok, f"{len(insts)} (algebra, C, M) triples, 4 pairs each, {len(bad)} violations, {secs:.1f}s < {COR_3_5_SECONDS}s")
    assert ok, bad


def test_criterion_07_thm_5_2():
    violations, checked = [], 0
    for cname, corp in corpus_items():
        fam = list(corp.modules.values())
        for cls in certified_classes(corp):
            for m in fam:
                n = l_dim(cls, m, CUTOFF)
                if n is ABOVE_CUTOFF or n > 4:
                    continue
                checked += 1
                rep = dg.check_thm_5_2(cls, m, fam, CUTOFF)
                if not rep.passed:
                    violations.append((cname, repr(cls), m.name))
    record(7, not violations, f"{checked} instances with l_dim <= 4, {len(violations)} violations")
    assert not violations


def test_criterion_08a_classical_balance():
    bad, pairs = [], 0
    for cname, corp in corpus_items():
        x = projective_class(corp.algebra, CUTOFF)
        y = injective_class(corp.algebra, CUTOFF)
        for m in corp.modules.values():
            for n in corp.modules.values():
                pairs += 1
                rep = balance_report(x, y, m, n, MAX_DEGREE)
                if not rep.balanced:
                    bad.append((cname, m.name, n.name))
    record(8, not bad, f"(projectives, injectives): three-way balance on {pairs} pairs, degrees <= {MAX_DEGREE}, {len(bad)} unbalanced")
    assert not bad


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="(add(omega), prod(omega)) is not a balanced pair over R3; see the decisions ledger")
def test_criterion_08b_omega_balance():
    r3 = r3_corpus()
    om = r3["omega"]
    x = add_class(om, CUTOFF)
    y = prod_class(om, CUTOFF)
    bad = []
    mods = list(r3.modules.values())
    for m in mods:
        for n in mods:
            rep = balance_report(x, y, m, n, MAX_DEGREE)
            if not rep.balanced:
                first = next(r for r in rep.rows if not r.balanced)
                bad.append(f"({m.name},{n.name}) deg {first.degree}: {first.left}/{first.right}/{first.total}")
    record(
        8,
        not bad,
        f"(add(omega), prod(omega)) over R3: {len(mods) ** 2 - len(bad)}/{len(mods) ** 2} pairs balanced; "
        f"first: {bad[0] if bad else '-'}",
    )
    assert not bad


def test_criterion_09_cor_5_4():
    r3 = r3_corpus()
    om = r3["omega"]
    p_om = add_class(om, CUTOFF)
    i_om = prod_class(r3["R"], CUTOFF)  # Hom(omega, injectives) = prod(D omega) = prod(R)
    mods = list(r3.modules.values())
    bad = []
    for m in mods:
        for n in mods:
            left = relative_ext_dims(p_om, m, n, MAX_DEGREE)
            if left != ext_dims(hom_module(om, m), hom_module(om, n), MAX_DEGREE):
                bad.append(("P", m.name, n.name))
            right = relative_ext_dims(i_om, m, n, MAX_DEGREE)
            tm = tensor_over_algebra(om, m).result
            tn = tensor_over_algebra(om, n).result
            if right != ext_dims(tm, tn, MAX_DEGREE):
                bad.append(("I", m.name, n.name))
    record(9, not bad, f"both transfer isomorphisms on {len(mods) ** 2} R3 pairs, i <= {MAX_DEGREE}, {len(bad)} mismatches")
    assert not bad


def test_criterion_10_generator_caveat():
    corp = all_corpora()["F2xF2"]
    rep = dg.check_global_dim(add_class(corp["S1"], CUTOFF), list(corp.modules.values()), CUTOFF)
    ok = rep.sup == 0 and rep.generator_caveat and not rep.add_equals_projectives and rep.overall == "finding"
    # the same check on a class that is a projective generator must not flag
    reg = dg.check_global_dim(projective_class(corp.algebra, CUTOFF), list(corp.modules.values()), CUTOFF)
    ok = ok and not reg.generator_caveat
    record(10, ok, f"F2xF2 with C = S1: sup e_l_dim over Gen[C] = {rep.sup}, add(C) = projectives: {rep.add_equals_projectives}, flagged: {rep.generator_caveat}")
    assert ok


def test_criterion_11_determinism():
    cmd = [sys.executable, "-m", "relhom.cli", "report", "--canonical", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=False).stdout
    b = subprocess.run(cmd, capture_output=True, check=False).stdout
    ok = a == b and len(a) > 1000
    record(11, ok, f"two canonical runs of the default report: {len(a)} bytes, identical: {a == b}")
    assert ok


if __name__ == "__main__":  # pragma: no cover
    sys.exit(pytest.main([__file__, "-q", "-s"]))
