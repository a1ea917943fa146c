"""Direct element-order invariants and the decomposition formulas for rho.

The formula functions take already-computed component values rather than
groups, so agreement with :func:`invariants_direct` isolates formula mistakes
from engine mistakes.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .classify import FrobeniusStructure, SylowSplit
from .errors import NotCoprime, PreconditionViolation, SylowNotCyclic
from .exact_arith import (
    FactoredNat,
    factor,
    fn_div,
    fn_mul,
    fn_pow,
    least_prime,
    rho_cyclic,
)
from .groups import Group

__all__ = [
    "InvariantRecord",
    "invariants_direct",
    "rho_coprime_product",
    "rho_semidirect_cyclic_sylow",
    "check_mercede_divisibility",
    "rho_frobenius",
    "rho_frobenius_times_cyclic",
]


@dataclass(frozen=True)
class InvariantRecord:
    n: int
    q_min: int | None
    rho: FactoredNat
    psi: int
    omega: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q_min,
            "rho": str(self.rho),
            "psi": self.psi,
            "omega": list(self.omega),
        }


def invariants_direct(G: Group) -> InvariantRecord:
    orders, counts = np.unique(G.elem_order, return_counts=True)
    exps: dict[int, int] = {}
    for o, c in zip(orders.tolist(), counts.tolist()):
        for p, e in factor(o).items():
            exps[p] = exps.get(p, 0) + e * c
    return InvariantRecord(
        n=G.order,
        q_min=least_prime(G.order),
        rho=FactoredNat(exps),
        psi=int(sum(o * c for o, c in zip(orders.tolist(), counts.tolist()))),
        omega=tuple(orders.tolist()),
    )


def rho_coprime_product(parts: Iterable[tuple[FactoredNat, int]]) -> FactoredNat:
    """rho of a direct product of groups of pairwise coprime orders.

    ``parts`` holds ``(rho(H_i), |H_i|)``; the result is
    ``prod_i rho(H_i)^(prod_{j != i} |H_j|)``.
    """
    parts = list(parts)
    sizes = [n for _, n in parts]
    for i, a in enumerate(sizes):
        for b in sizes[i + 1 :]:
            if math.gcd(a, b) != 1:
                raise NotCoprime(f"orders {a} and {b} are not coprime")
    total = math.prod(sizes)
    out = FactoredNat()
    for rho, n in parts:
        out = fn_mul(out, fn_pow(rho, total // n))
    return out


def rho_semidirect_cyclic_sylow(split: SylowSplit, rho_P: FactoredNat, rho_F: FactoredNat) -> FactoredNat:
    """``rho(P)^|Z| * rho(F)^|P|`` for ``G = P x| F`` with ``P`` a cyclic normal Sylow subgroup."""
    if not split.sylow.is_cyclic():
        raise SylowNotCyclic(f"Sylow {split.p}-subgroup is not cyclic")
    return fn_mul(fn_pow(rho_P, split.centralizer_in_complement.order), fn_pow(rho_F, split.sylow.order))


def check_mercede_divisibility(
    split: SylowSplit, rho_G: FactoredNat, rho_P: FactoredNat, rho_F: FactoredNat
) -> tuple[bool, bool]:
    """Whether ``rho(G)`` divides ``rho(P)^|F| rho(F)^|P|``, and whether they are equal."""
    if not split.sylow.is_cyclic():
        raise SylowNotCyclic(f"Sylow {split.p}-subgroup is not cyclic")
    bound = fn_mul(fn_pow(rho_P, split.complement.order), fn_pow(rho_F, split.sylow.order))
    return rho_G.divides(bound), rho_G == bound


def rho_frobenius(fs: FrobeniusStructure, rho_N: FactoredNat, rho_H: FactoredNat) -> FactoredNat:
    return fn_mul(rho_N, fn_pow(rho_H, fs.kernel.order))


def rho_frobenius_times_cyclic(fs: FrobeniusStructure, c: int) -> FactoredNat:
    """rho of ``F x C_c`` for a Frobenius group ``F`` with cyclic kernel and complement.

    Evaluated as ``rho(C_n) / rho(C_|N|)^(c(|H|-1))`` with ``n = |F| c``.
    """
    N, H = fs.kernel, fs.complement
    f = N.parent.order
    if not (N.is_cyclic() and H.is_cyclic()):
        raise PreconditionViolation("kernel and complement must both be cyclic")
    if math.gcd(c, f) != 1:
        raise NotCoprime(f"c={c} is not coprime to |F|={f}")
    n = f * c
    if n <= 5:
        raise PreconditionViolation(f"n = {n} must exceed 5")
    return fn_div(rho_cyclic(n), fn_pow(rho_cyclic(N.order), c * (H.order - 1)))
