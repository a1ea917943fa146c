"""Structural class membership and the decompositions the formulas consume."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from sympy import primefactors

from .errors import ComplementNotFound, GroupAxiomViolation
from .groups import (
    Group,
    Subgroup,
    center,
    centralizer,
    derived_subgroup,
    is_normal,
    normal_subgroups,
    p_part,
    quotient,
    subgroup_generated,
    sylow,
)

__all__ = [
    "FrobeniusStructure",
    "SylowSplit",
    "Classification",
    "is_cyclic",
    "is_abelian",
    "is_nilpotent",
    "is_supersoluble",
    "is_metacyclic_paper",
    "is_p_nilpotent",
    "has_sylow_tower",
    "frobenius_structure",
    "sylow_split",
    "abelian_invariants",
    "abelian_groups_of_order",
    "classify",
]


@dataclass(frozen=True)
class FrobeniusStructure:
    kernel: Subgroup
    complement: Subgroup

    def validate(self) -> None:
        G = self.kernel.parent
        N, H = self.kernel, self.complement
        n, h = N.order, H.order
        problems = []
        if not is_normal(G, N):
            problems.append("kernel not normal")
        if not 1 < n < G.order:
            problems.append("kernel not proper and nontrivial")
        if n * h != G.order or math.gcd(n, h) != 1:
            problems.append("orders do not split coprimely")
        if (N.mask & H.mask).sum() != 1:
            problems.append("kernel meets complement nontrivially")
        if (n - 1) % h:
            problems.append("|H| does not divide |N| - 1")
        # every non-identity h in H fixes only the identity of N
        hs = H.array[1:]
        fixed = G.table[np.ix_(hs, N.array)] == G.table[np.ix_(N.array, hs)].T
        if fixed[:, 1:].any():
            problems.append("complement does not act fixed-point-freely")
        if problems:
            raise GroupAxiomViolation(f"invalid Frobenius structure on {G.label}: {'; '.join(problems)}")


@dataclass(frozen=True)
class SylowSplit:
    p: int
    sylow: Subgroup
    complement: Subgroup
    centralizer_in_complement: Subgroup

    def validate(self) -> None:
        G = self.sylow.parent
        P, F, Z = self.sylow, self.complement, self.centralizer_in_complement
        ok = (
            P.order == p_part(G.order, self.p)
            and P.order * F.order == G.order
            and math.gcd(P.order, F.order) == 1
            and is_normal(G, P)
            and (P.mask & F.mask).sum() == 1
            and Z.issubset(F)
        )
        if not ok:
            raise GroupAxiomViolation(f"invalid Sylow split of {G.label} at p={self.p}")


def prime_divisors(n: int) -> list[int]:
    return primefactors(n) if n > 1 else []


def is_cyclic(G: Group) -> bool:
    return int(G.elem_order.max()) == G.order


def is_abelian(G: Group) -> bool:
    return bool((G.table == G.table.T).all())


def is_nilpotent(G: Group) -> bool:
    return all(is_normal(G, sylow(G, p)) for p in prime_divisors(G.order))


def _normal_prime_order_subgroup(G: Group) -> Subgroup | None:
    seen = np.zeros(G.order, dtype=bool)
    for x in np.flatnonzero(np.isin(G.elem_order, prime_divisors(G.order))):
        if seen[x]:
            continue
        C = subgroup_generated(G, [int(x)])
        seen[C.array] = True
        if is_normal(G, C):
            return C
    return None


def is_supersoluble(G: Group) -> bool:
    """Peel off normal subgroups of prime order until the quotient is trivial.

    Quotients of supersoluble groups are supersoluble and their minimal
    normal subgroups have prime order, so the first normal prime-order
    subgroup found is as good as any: no backtracking is needed.
    """
    while G.order > 1:
        N = _normal_prime_order_subgroup(G)
        if N is None:
            return False
        G = quotient(G, N)
    return True


def is_metacyclic_paper(G: Group) -> bool:
    """Derived subgroup cyclic and abelianization cyclic (the strict reading)."""
    D = derived_subgroup(G)
    return D.is_cyclic() and is_cyclic(quotient(G, D))


def is_p_nilpotent(G: Group, p: int) -> bool:
    if G.order % p:
        return True
    coprime = np.gcd(G.elem_order, p) == 1
    S = np.flatnonzero(coprime)
    if S.size != G.order // p_part(G.order, p):
        return False
    return bool(coprime[G.table[np.ix_(S, S)]].all())


def has_sylow_tower(G: Group) -> bool:
    # the class is quotient closed, so any normal Sylow subgroup may be removed first
    while G.order > 1:
        for p in prime_divisors(G.order):
            P = sylow(G, p)
            if is_normal(G, P):
                G = quotient(G, P)
                break
        else:
            return False
    return True


def _coprime_complement(G: Group, size: int) -> Subgroup:
    """A subgroup of order ``size`` where ``size`` is a Hall index of a normal subgroup.

    One ascending greedy pass over the elements of order coprime to
    ``|G|/size``: a coprime-order subgroup built so far always lies in some
    complement (Schur-Zassenhaus), so an extending element is always found
    and a rejected element can never become acceptable later.
    """
    if size == 1:
        return G.trivial
    other = G.order // size
    H = G.trivial
    gens: list[int] = []
    for x in np.flatnonzero(np.gcd(G.elem_order, other) == 1):
        if H.mask[x]:
            continue
        K = subgroup_generated(G, gens + [int(x)])
        if size % K.order == 0:
            H, gens = K, gens + [int(x)]
            if H.order == size:
                return H
    raise ComplementNotFound(f"no subgroup of order {size} complementing a normal Hall subgroup in {G.label}")


def frobenius_structure(G: Group) -> FrobeniusStructure | None:
    """Kernel and a complement if ``G`` is a Frobenius group, else ``None``.

    The kernel is the proper nontrivial normal subgroup containing the
    centralizer of each of its non-identity elements.
    """
    n = G.order
    # Frobenius groups have trivial center; this also spares the lattice scan
    # for every nilpotent group
    if n < 6 or center(G).order > 1:
        return None
    for N in normal_subgroups(G):
        if not 1 < N.order < n:
            continue
        xs = N.array[1:]
        commute = G.table[:, xs] == G.table[xs, :].T
        if commute[~N.mask].any():
            continue
        fs = FrobeniusStructure(N, _coprime_complement(G, n // N.order))
        fs.validate()
        return fs
    return None


def sylow_split(G: Group, p: int) -> SylowSplit | None:
    P = sylow(G, p)
    if not is_normal(G, P):
        return None
    F = _coprime_complement(G, G.order // P.order)
    split = SylowSplit(p, P, F, centralizer(G, P, F))
    split.validate()
    return split


def abelian_invariants(G: Group) -> list[int] | None:
    """Invariant factors ``d_1 | d_2 | ...`` read off element-order counts."""
    if not is_abelian(G):
        return None
    parts_by_prime = []
    for p in prime_divisors(G.order):
        # log_p #{x : o(x) | p^k} = sum_i min(lambda_i, k)
        s = [0]
        k = 1
        while s[-1] < _log_exact(p_part(G.order, p), p):
            count = int((p**k % G.elem_order == 0).sum())
            s.append(_log_exact(count, p))
            k += 1
        at_least = [s[i] - s[i - 1] for i in range(1, len(s))]
        parts = [p ** sum(1 for c in at_least if c >= i) for i in range(1, at_least[0] + 1)]
        parts_by_prime.append(parts)  # descending
    width = max((len(x) for x in parts_by_prime), default=0)
    factors = [math.prod(x[j] for x in parts_by_prime if j < len(x)) for j in range(width)]
    return sorted(factors)


def _log_exact(value: int, p: int) -> int:
    k = 0
    while value > 1:
        value, r = divmod(value, p)
        assert r == 0
        k += 1
    return k


@dataclass
class Classification:
    cyclic: bool
    abelian: bool
    nilpotent: bool
    supersoluble: bool
    metacyclic_paper: bool
    sylow_tower: bool
    p_nilpotent: dict[int, bool] = field(default_factory=dict)
    splits: dict[int, SylowSplit | None] = field(default_factory=dict)
    frobenius: FrobeniusStructure | None = None
    abelian_invariants: list[int] | None = None

    def flags(self) -> dict[str, bool]:
        return {
            "cyclic": self.cyclic,
            "abelian": self.abelian,
            "nilpotent": self.nilpotent,
            "supersoluble": self.supersoluble,
            "metacyclic_paper": self.metacyclic_paper,
            "sylow_tower": self.sylow_tower,
            "frobenius": self.frobenius is not None,
        }


def classify(G: Group) -> Classification:
    primes = prime_divisors(G.order)
    return Classification(
        cyclic=is_cyclic(G),
        abelian=is_abelian(G),
        nilpotent=is_nilpotent(G),
        supersoluble=is_supersoluble(G),
        metacyclic_paper=is_metacyclic_paper(G),
        sylow_tower=has_sylow_tower(G),
        p_nilpotent={p: is_p_nilpotent(G, p) for p in primes},
        splits={p: sylow_split(G, p) for p in primes},
        frobenius=frobenius_structure(G),
        abelian_invariants=abelian_invariants(G),
    )


def _partitions(n: int, largest: int | None = None):
    if n == 0:
        yield []
        return
    for k in range(min(n, largest or n), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def abelian_groups_of_order(n: int) -> list[list[int]]:
    """Invariant-factor lists of every abelian group of order ``n``, one per isomorphism class."""
    per_prime = []
    for p in prime_divisors(n):
        a = _log_exact(p_part(n, p), p)
        per_prime.append([[p**k for k in lam] for lam in _partitions(a)])
    out = []
    for combo in itertools.product(*per_prime):
        width = max((len(c) for c in combo), default=0)
        out.append(sorted(math.prod(c[j] for c in combo if j < len(c)) for j in range(width)))
    return sorted(out)
