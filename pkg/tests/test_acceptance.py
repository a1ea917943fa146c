"""Acceptance criteria 1-13, all exact.

Each test carries a ``criterion`` marker; the conftest prints one PASS/FAIL
line per criterion at the end of the run.
"""

import math
import time

import pytest
from sympy import primerange

from rhogroups import recipes as R
from rhogroups.classify import classify, frobenius_structure, prime_divisors
from rhogroups.cli import main
from rhogroups.exact_arith import (
    Comparison,
    FactoredNat,
    bound_main,
    bound_qq,
    factor,
    fr_compare,
    parse_factored,
    remark_p_check,
    remark_qp_check,
    rho_cyclic,
)
from rhogroups.groups import build
from rhogroups.invariants import (
    check_mercede_divisibility,
    invariants_direct,
    rho_frobenius,
    rho_frobenius_times_cyclic,
    rho_semidirect_cyclic_sylow,
)
from rhogroups.verifier import Tag, check_abelian_distinguish, run_corpus

criterion = pytest.mark.criterion


@pytest.fixture(scope="module")
def report(default_corpus):
    return run_corpus(default_corpus, collisions=True)


@pytest.fixture(scope="module")
def profiles(corpus_groups):
    """label -> (group, direct record, classification) for every non-trivial corpus group."""
    return {label: (G, invariants_direct(G), classify(G)) for label, G in corpus_groups if G.order > 1}


def rows(report, tag):
    return [r for r in report.rows if r.tag is tag]


def applicable(report, tag):
    return {r.label for r in rows(report, tag) if r.applicable}


def assert_no_violations(report, tag):
    bad = [r for r in rows(report, tag) if r.violation]
    assert not bad, bad[:3]


def at_most(lhs, rhs):
    return fr_compare(lhs, rhs) is not Comparison.GREATER


@criterion(1, "closed form rho(C_n) equals enumeration for all n <= 512")
def test_closed_form_oracle():
    start = time.perf_counter()
    for n in range(1, 513):
        orders = build(R.Cyclic(n)).elem_order
        direct = FactoredNat()
        for o in orders.tolist():
            direct = direct * factor(o)
        assert rho_cyclic(n) == direct, n
    assert time.perf_counter() - start < 60


@criterion(2, "global bound rho(G) <= rho(C_n), strict unless cyclic")
def test_global_bound(report, profiles, default_corpus):
    assert len(default_corpus) >= 100
    assert max(r.order for _, r in default_corpus) <= 200
    assert_no_violations(report, Tag.GP_GLOBAL)
    for label, (G, rec, cls) in profiles.items():
        cmp = fr_compare(rec.rho, rho_cyclic(G.order))
        assert cmp is (Comparison.EQUAL if cls.cyclic else Comparison.LESS), label


@criterion(3, "q^-(n/q)(q-1) rho(C_n) bound on its class; Klein four-group tight")
def test_supersoluble_bound(report, profiles):
    assert_no_violations(report, Tag.MAIN_THM)
    expected = {
        label
        for label, (_, _, c) in profiles.items()
        if not c.cyclic and c.supersoluble and (c.nilpotent or not c.metacyclic_paper)
    }
    assert applicable(report, Tag.MAIN_THM) == expected
    for label in expected:
        G, rec, _ = profiles[label]
        assert at_most(rec.rho, bound_main(G.order, rec.q_min)), label
    [klein] = [r for r in rows(report, Tag.MAIN_THM) if r.label == "ab2x2"]
    assert klein.tight and klein.lhs == klein.rhs == "2^3"


@criterion(4, "q^-q rho(C_n) bound for groups with a Sylow tower; S_3 reads 72 <= 162")
def test_sylow_tower_bound(report, profiles):
    assert_no_violations(report, Tag.COR_B)
    expected = {label for label, (_, _, c) in profiles.items() if not c.cyclic and c.sylow_tower}
    assert applicable(report, Tag.COR_B) == expected
    [s3] = [r for r in rows(report, Tag.COR_B) if r.label == "s3"]
    assert parse_factored(s3.lhs).numerator == 72 and parse_factored(s3.rhs).numerator == 162
    assert s3.holds and not s3.tight


@criterion(5, "q^-q bound for non-cyclic groups of order p^a q^b")
def test_two_prime_orders(report, profiles):
    assert_no_violations(report, Tag.THM_PQ)
    expected = {label for label, (G, _, c) in profiles.items() if not c.cyclic and len(prime_divisors(G.order)) == 2}
    assert applicable(report, Tag.THM_PQ) == expected and expected
    for label in expected:
        G, rec, _ = profiles[label]
        assert at_most(rec.rho, bound_qq(G.order, rec.q_min)), label


@criterion(6, "Frobenius formula rho(N) rho(H)^|N| is exact and the q^-q bound holds")
def test_frobenius(report, profiles):
    assert_no_violations(report, Tag.FROB_FORMULA)
    assert_no_violations(report, Tag.FROB_BOUND)
    frob = {label for label, (_, _, c) in profiles.items() if c.frobenius is not None}
    assert applicable(report, Tag.FROB_FORMULA) == frob == applicable(report, Tag.FROB_BOUND)
    assert all(r.tight for r in rows(report, Tag.FROB_FORMULA) if r.applicable)
    for label in frob:
        G, rec, c = profiles[label]
        fs = c.frobenius
        rho_N = invariants_direct(fs.kernel.as_group()).rho
        rho_H = invariants_direct(fs.complement.as_group()).rho
        assert rho_frobenius(fs, rho_N, rho_H) == rec.rho, label
    G = build(R.FrobAffine(7, 3))
    rho = invariants_direct(G).rho
    assert rho == FactoredNat({7: 6, 3: 14})
    assert bound_qq(21, 3) == FactoredNat({3: 11, 7: 18})
    assert fr_compare(rho, bound_qq(21, 3)) is Comparison.LESS


@criterion(7, "cyclic normal Sylow: product formula exact, divisibility with equality iff Z = F")
def test_cyclic_normal_sylow(report, profiles):
    for tag in (Tag.MERCEDE_I, Tag.MERCEDE_II, Tag.COR_MERCEDE):
        assert_no_violations(report, tag)
    assert all(r.tight for r in rows(report, Tag.MERCEDE_I) if r.applicable)
    checked = 0
    for label, (G, rec, c) in profiles.items():
        for p, split in c.splits.items():
            if split is None or not split.sylow.is_cyclic():
                continue
            rho_P = invariants_direct(split.sylow.as_group()).rho
            rho_F = invariants_direct(split.complement.as_group()).rho
            assert rho_semidirect_cyclic_sylow(split, rho_P, rho_F) == rec.rho, (label, p)
            divides, equal = check_mercede_divisibility(split, rec.rho, rho_P, rho_F)
            z_is_f = split.centralizer_in_complement.members == split.complement.members
            assert divides and equal == z_is_f, (label, p)
            checked += 1
    assert checked >= 100
    dic3 = build(R.Dicyclic(3))
    assert invariants_direct(dic3).rho == FactoredNat({2: 15, 3: 4})
    split = classify(dic3).splits[3]
    rho_P = invariants_direct(split.sylow.as_group()).rho
    rho_F = invariants_direct(split.complement.as_group()).rho
    assert rho_semidirect_cyclic_sylow(split, rho_P, rho_F) == FactoredNat({2: 15, 3: 4})


@criterion(8, "arithmetic sweeps pass for p <= 97, alpha <= 8 and 1 <= q <= p <= 100 in < 5 s")
def test_remark_sweeps():
    start = time.perf_counter()
    for p in primerange(2, 98):
        for alpha in range(1, 9):
            assert remark_p_check(p, alpha, strong=False), (p, alpha)
            if p > 2 and alpha >= 2:
                assert remark_p_check(p, alpha, strong=True), (p, alpha)
    for p in range(1, 101):
        for q in range(1, p + 1):
            assert remark_qp_check(p, q), (p, q)
    assert time.perf_counter() - start < 5


@criterion(9, "rho(S_4) = rho(C_2 x D_12) = 2^21 3^8 while the classifiers differ")
def test_collision_witness(report):
    s4 = build(R.Symmetric(4))
    other = build(R.Direct(R.Cyclic(2), R.Dihedral(6)))
    assert invariants_direct(s4).rho == invariants_direct(other).rho == FactoredNat({2: 21, 3: 8})
    cs, co = classify(s4), classify(other)
    assert not cs.nilpotent and not cs.supersoluble and co.supersoluble
    assert cs.flags() != co.flags()
    assert {"order": 24, "rho": "2^21 * 3^8", "labels": ["s4", "c2xd6"]} in report.collisions


@criterion(10, "rho is injective on abelian groups of each order n <= 128")
def test_abelian_distinguishability(report):
    start = time.perf_counter()
    result = check_abelian_distinguish(128)
    assert time.perf_counter() - start < 120
    assert len(result) == 128 and all(r.holds for r in result)
    assert set(result[7].lhs.split("; ")) == {"2^17", "2^11", "2^7"}
    assert_no_violations(report, Tag.ABELIAN_DISTINGUISH)


@criterion(11, "11 psi(G) <= 7 psi(C_n) for every non-cyclic corpus group")
def test_psi(report, profiles):
    assert_no_violations(report, Tag.PSI_7_11)
    noncyclic = [label for label, (_, _, c) in profiles.items() if not c.cyclic]
    assert applicable(report, Tag.PSI_7_11) == set(noncyclic)
    for label in noncyclic:
        G, rec, _ = profiles[label]
        psi_c = sum(G.order // math.gcd(x, G.order) for x in range(G.order))
        assert 11 * rec.psi <= 7 * psi_c, label


@criterion(12, "F x C example formula equals direct rho on the corpus composites")
def test_frobenius_times_cyclic(report, profiles):
    assert_no_violations(report, Tag.EXAMPLE_FXC)
    got = applicable(report, Tag.EXAMPLE_FXC)
    assert {"s3xc5", "frob7_3xc2", "frob5_4xc3"} <= got
    for frob, c, label in [
        (R.Symmetric(3), 5, "s3xc5"),
        (R.FrobAffine(7, 3), 2, "frob7_3xc2"),
        (R.FrobAffine(5, 4), 3, "frob5_4xc3"),
    ]:
        fs = frobenius_structure(build(frob))
        assert rho_frobenius_times_cyclic(fs, c) == profiles[label][1].rho, label
    assert all(r.tight for r in rows(report, Tag.EXAMPLE_FXC) if r.applicable)


@criterion(13, "two verify runs over the bundled corpus emit byte-identical JSON")
def test_determinism(tmp_path, capsys):
    outs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        assert main(["verify", "--corpus", "default", "--format", "json", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1]
    assert b"timestamp" not in outs[0]
