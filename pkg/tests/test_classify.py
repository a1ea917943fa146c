import math

import pytest
from hypothesis import given, settings, strategies as st

from rhogroups import recipes as R
from rhogroups.classify import (
    abelian_groups_of_order,
    abelian_invariants,
    classify,
    frobenius_structure,
    has_sylow_tower,
    is_metacyclic_paper,
    is_nilpotent,
    is_p_nilpotent,
    is_supersoluble,
    prime_divisors,
    sylow_split,
)
from rhogroups.groups import build, is_normal, sylow


def smith_invariants(dims):
    """Oracle: invariant factors of Z_a1 x ... x Z_ak by repeated gcd/lcm swaps."""
    d = [x for x in dims if x > 1]
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                g, l = math.gcd(d[i], d[j]), math.lcm(d[i], d[j])
                if (d[i], d[j]) != (g, l):
                    d[i], d[j] = g, l
                    changed = True
    return sorted(x for x in d if x > 1)


def nilpotent_oracle(G):
    """A finite group is nilpotent iff elements of coprime order commute."""
    o = G.elem_order
    for a in range(G.order):
        for b in range(a + 1, G.order):
            if math.gcd(int(o[a]), int(o[b])) == 1 and G.mul(a, b) != G.mul(b, a):
                return False
    return True


FLAGS = {
    # recipe: (cyclic, abelian, nilpotent, supersoluble, metacyclic_paper, sylow_tower, frobenius)
    R.Cyclic(12): (True, True, True, True, True, True, False),
    R.Abelian((2, 2)): (False, True, True, True, False, True, False),
    R.Symmetric(3): (False, False, False, True, True, True, True),
    R.Symmetric(4): (False, False, False, False, False, False, False),
    R.Alternating(4): (False, False, False, False, False, True, True),
    R.Alternating(5): (False, False, False, False, False, False, False),
    R.Symmetric(5): (False, False, False, False, False, False, False),
    R.Dihedral(6): (False, False, False, True, False, True, False),
    R.Dihedral(4): (False, False, True, True, False, True, False),
    R.Dicyclic(3): (False, False, False, True, True, True, False),
    R.FrobAffine(7, 3): (False, False, False, True, True, True, True),
    R.FrobAffine(5, 4): (False, False, False, True, True, True, True),
    R.Direct(R.Symmetric(3), R.Symmetric(3)): (False, False, False, True, False, True, False),
}


@pytest.mark.parametrize("recipe", list(FLAGS), ids=str)
def test_flag_examples(recipe):
    keys = ["cyclic", "abelian", "nilpotent", "supersoluble", "metacyclic_paper", "sylow_tower", "frobenius"]
    assert classify(build(recipe)).flags() == dict(zip(keys, FLAGS[recipe]))


def test_abelian_invariants_example():
    assert abelian_invariants(build(R.Abelian((4, 6)))) == [2, 12]
    assert abelian_invariants(build(R.Symmetric(3))) is None
    assert abelian_invariants(build(R.Cyclic(1))) == []


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=12), min_size=1, max_size=3).filter(lambda d: math.prod(d) <= 200))
def test_abelian_invariants_match_smith_oracle(dims):
    assert abelian_invariants(build(R.Abelian(tuple(dims)))) == smith_invariants(dims)


def test_abelian_class_counts():
    # number of abelian groups of order n is multiplicative over prime powers: p(a) partitions
    assert len(abelian_groups_of_order(8)) == 3
    assert len(abelian_groups_of_order(16)) == 5
    assert len(abelian_groups_of_order(72)) == 6
    assert len(abelian_groups_of_order(7)) == 1
    assert abelian_groups_of_order(1) == [[]]
    assert [2, 2, 2] in abelian_groups_of_order(8)
    for n in range(1, 129):
        for inv in abelian_groups_of_order(n):
            assert math.prod(inv) == n
            assert all(b % a == 0 for a, b in zip(inv, inv[1:]))


def test_frobenius_structures():
    for p, d in [(3, 2), (5, 2), (5, 4), (7, 3), (7, 6), (13, 4), (31, 5)]:
        G = build(R.FrobAffine(p, d))
        fs = frobenius_structure(G)
        assert fs is not None
        assert (fs.kernel.order, fs.complement.order) == (p, d)
        assert (fs.kernel.order - 1) % fs.complement.order == 0
        fs.validate()
    a4 = frobenius_structure(build(R.Alternating(4)))
    assert (a4.kernel.order, a4.complement.order) == (4, 3)
    assert frobenius_structure(build(R.Dicyclic(3))) is None
    assert frobenius_structure(build(R.Dihedral(4))) is None
    assert frobenius_structure(build(R.Dihedral(5))).kernel.order == 5


def test_sylow_split_dicyclic():
    G = build(R.Dicyclic(3))
    s = sylow_split(G, 3)
    assert (s.sylow.order, s.complement.order, s.centralizer_in_complement.order) == (3, 4, 2)
    assert sylow_split(G, 2) is None
    assert sylow_split(build(R.Symmetric(4)), 2) is None


def test_p_nilpotent_examples():
    s4 = build(R.Symmetric(4))
    assert not is_p_nilpotent(s4, 2) and not is_p_nilpotent(s4, 3)
    a4 = build(R.Alternating(4))
    assert is_p_nilpotent(a4, 3) and not is_p_nilpotent(a4, 2)
    assert is_p_nilpotent(s4, 5)


def test_invariants_over_corpus(corpus_groups):
    for label, G in corpus_groups:
        c = classify(G)
        f = c.flags()
        # implication chain of the structure classes
        if f["cyclic"]:
            assert f["abelian"] and f["metacyclic_paper"], label
        if f["abelian"]:
            assert f["nilpotent"], label
        if f["nilpotent"]:
            assert f["supersoluble"], label
        if f["supersoluble"]:
            assert f["sylow_tower"], label
        if f["frobenius"]:
            assert not f["nilpotent"], label
        assert f["nilpotent"] == all(c.p_nilpotent.values()), label
        for p, split in c.splits.items():
            assert (split is not None) == is_normal(G, sylow(G, p)), label
            if split is not None:
                split.validate()
        if c.frobenius is not None:
            c.frobenius.validate()
        if f["abelian"]:
            assert math.prod(c.abelian_invariants) == G.order


def test_nilpotent_matches_commuting_oracle(corpus_groups):
    for label, G in corpus_groups:
        if G.order <= 64:
            assert is_nilpotent(G) == nilpotent_oracle(G), label


def test_quotient_closed_predicates_on_direct_products():
    # Direct products with an abelian factor preserve supersolubility and towers
    for base in (R.Symmetric(3), R.FrobAffine(7, 3), R.Alternating(4)):
        G = build(base)
        H = build(R.Direct(base, R.Cyclic(5)))
        assert is_supersoluble(G) == is_supersoluble(H)
        assert has_sylow_tower(G) == has_sylow_tower(H)


def test_metacyclic_paper_reading():
    # D_12: derived subgroup C_3, abelianization C_2 x C_2, so not metacyclic in the strict reading
    assert not is_metacyclic_paper(build(R.Dihedral(6)))
    assert is_metacyclic_paper(build(R.Dihedral(5)))
    assert prime_divisors(1) == [] and prime_divisors(60) == [2, 3, 5]
