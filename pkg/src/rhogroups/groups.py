"""Finite groups as dense multiplication tables.

Elements are the integers ``0..n-1`` with the identity at index 0.  Every
algorithm in the package is a scan over the table; at the desk-scale orders
we handle (default cap 512) that is both simple and fast enough with numpy.
"""

from __future__ import annotations

import functools
import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
from sympy import isprime

from . import recipes as R
from .errors import (
    GroupAxiomViolation,
    LatticeCapExceeded,
    NotNormal,
    OrderCapExceeded,
    PNotDividing,
    RecipeInvalid,
)

log = logging.getLogger(__name__)

DEFAULT_CAP = 512
DEFAULT_LATTICE_CAP = 4096
EXHAUSTIVE_ASSOC_LIMIT = 128
ASSOC_SAMPLE_FACTOR = 10
ASSOC_SEED = 20240101

_INDEX = np.int32


class Group:
    """A validated finite group given by its multiplication table.

    ``table[a, b]`` is the index of ``a*b``.  The constructor checks the
    identity, inverse and associativity laws and caches inverses and element
    orders; instances are immutable afterwards.
    """

    def __init__(self, table, label: str = "", recipe: R.GroupRecipe | None = None):
        t = np.ascontiguousarray(table, dtype=_INDEX)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] < 1:
            raise GroupAxiomViolation(f"table must be a non-empty square array, got shape {t.shape}")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise GroupAxiomViolation("table entries out of range")
        idx = np.arange(n, dtype=_INDEX)
        if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
            raise GroupAxiomViolation("index 0 is not a two-sided identity")
        # each row must be a permutation, otherwise some inverse is missing
        sorted_rows = np.sort(t, axis=1)
        if not (sorted_rows == idx).all():
            raise GroupAxiomViolation("table is not a Latin square")
        inverse = np.argmax(t == 0, axis=1).astype(_INDEX)
        if not (t[inverse, idx] == 0).all():
            raise GroupAxiomViolation("left and right inverses differ")
        _check_associative(t)
        t.setflags(write=False)
        inverse.setflags(write=False)

        self.order = n
        self.table = t
        self.inverse = inverse
        self.elem_order = _element_orders(t)
        self.elem_order.setflags(write=False)
        self.label = label
        self.recipe = recipe
        if (n % self.elem_order).any():
            raise GroupAxiomViolation("an element order does not divide the group order")

    def __repr__(self) -> str:
        return f"<Group {self.label or '?'} of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def power(self, xs, k: int) -> np.ndarray:
        """Elementwise ``x**k`` for an array of element indices."""
        xs = np.asarray(xs, dtype=_INDEX)
        result = np.zeros_like(xs)
        base = xs.copy()
        while k:
            if k & 1:
                result = self.table[result, base]
            base = self.table[base, base]
            k >>= 1
        return result

    @functools.cached_property
    def whole(self) -> Subgroup:
        return Subgroup(self, tuple(range(self.order)))

    @functools.cached_property
    def trivial(self) -> Subgroup:
        return Subgroup(self, (0,))

    def subgroup(self, members: Iterable[int]) -> Subgroup:
        """Wrap an element set as a :class:`Subgroup`, checking closure."""
        ms = tuple(sorted(set(int(m) for m in members)))
        if not ms or ms[0] != 0:
            raise GroupAxiomViolation("subgroup must contain the identity")
        arr = np.asarray(ms, dtype=_INDEX)
        mask = np.zeros(self.order, dtype=bool)
        mask[arr] = True
        if not mask[self.table[np.ix_(arr, arr)]].all():
            raise GroupAxiomViolation("element set is not closed under multiplication")
        return Subgroup(self, ms)


@dataclass(frozen=True, eq=False)
class Subgroup:
    """An element subset of ``parent`` that is known to be a subgroup."""

    parent: Group
    members: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.parent.order % len(self.members):
            raise GroupAxiomViolation("Lagrange check failed: subgroup order does not divide group order")

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: object) -> bool:
        return bool(self.mask[int(x)])  # type: ignore[arg-type]

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"<Subgroup of order {self.order} in {self.parent.label or 'group'}>"

    @property
    def array(self) -> np.ndarray:
        if "array" not in self._cache:
            self._cache["array"] = np.asarray(self.members, dtype=_INDEX)
        return self._cache["array"]

    @property
    def mask(self) -> np.ndarray:
        if "mask" not in self._cache:
            m = np.zeros(self.parent.order, dtype=bool)
            m[self.array] = True
            self._cache["mask"] = m
        return self._cache["mask"]

    def issubset(self, other: Subgroup) -> bool:
        return bool(other.mask[self.array].all())

    def is_cyclic(self) -> bool:
        return int(self.parent.elem_order[self.array].max()) == self.order

    def as_group(self, label: str | None = None) -> Group:
        """The subgroup as a standalone group, members renumbered in ascending order."""
        pos = np.full(self.parent.order, -1, dtype=_INDEX)
        pos[self.array] = np.arange(self.order, dtype=_INDEX)
        table = pos[self.parent.table[np.ix_(self.array, self.array)]]
        return Group(table, label if label is not None else f"<{self.order}-subgroup of {self.parent.label}>")


def _check_associative(t: np.ndarray) -> None:
    n = t.shape[0]
    if n <= EXHAUSTIVE_ASSOC_LIMIT:
        ok = np.array_equal(t[t], t[:, t])
    else:
        flat = t.ravel()
        rng = np.random.default_rng(ASSOC_SEED)
        remaining = ASSOC_SAMPLE_FACTOR * n * n
        ok = True
        while remaining and ok:
            k = min(remaining, 1 << 20)
            a, b, c = rng.integers(0, n, size=(3, k), dtype=_INDEX)
            ok = np.array_equal(flat[flat[a * n + b] * n + c], flat[a * n + flat[b * n + c]])
            remaining -= k
    if not ok:
        raise GroupAxiomViolation("multiplication is not associative")


def _element_orders(t: np.ndarray) -> np.ndarray:
    n = t.shape[0]
    idx = np.arange(n, dtype=_INDEX)
    orders = np.zeros(n, dtype=np.int64)
    pw = idx.copy()
    k = 1
    while True:
        hit = (pw == 0) & (orders == 0)
        orders[hit] = k
        if orders.all():
            return orders
        if k > n:
            raise GroupAxiomViolation("element of infinite order in a finite table")
        pw = t[pw, idx]
        k += 1


# -- construction -----------------------------------------------------------


def _cyclic_table(n: int) -> np.ndarray:
    i = np.arange(n, dtype=_INDEX)
    return (i[:, None] + i[None, :]) % n


def _abelian_table(dims: Sequence[int]) -> np.ndarray:
    n = int(np.prod(dims))
    coords = np.array(np.unravel_index(np.arange(n), dims))
    d = np.asarray(dims)[:, None, None]
    summed = (coords[:, :, None] + coords[:, None, :]) % d
    return np.ravel_multi_index(tuple(summed), dims).astype(_INDEX)


def _semidirect_table(m: int, d: int, k: int) -> np.ndarray:
    # element a^i b^j has index i + m*j; b a b^-1 = a^k
    n = m * d
    x = np.arange(n)
    i, j = x % m, x // m
    kpow = np.array([pow(k, e, m) for e in range(d)], dtype=np.int64)
    ii = (i[:, None] + kpow[j][:, None] * i[None, :]) % m
    jj = (j[:, None] + j[None, :]) % d
    return (ii + m * jj).astype(_INDEX)


def _dicyclic_table(m: int) -> np.ndarray:
    # element a^i x^j has index i + 2m*j with x^2 = a^m and x a x^-1 = a^-1
    h = 2 * m
    x = np.arange(2 * h)
    i, j = x % h, x // h
    sign = np.where(j == 1, -1, 1)
    ii = (i[:, None] + sign[:, None] * i[None, :] + m * (j[:, None] & j[None, :])) % h
    jj = j[:, None] ^ j[None, :]
    return (ii + h * jj).astype(_INDEX)


def _permutation_table(k: int, even_only: bool) -> np.ndarray:
    perms = [p for p in itertools.permutations(range(k)) if not even_only or _parity(p) == 0]
    where = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    t = np.empty((n, n), dtype=_INDEX)
    for a, pa in enumerate(perms):
        for b, pb in enumerate(perms):
            # (a*b)(x) = a(b(x))
            t[a, b] = where[tuple(pa[y] for y in pb)]
    return t


def _parity(p: Sequence[int]) -> int:
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]) & 1


def _direct_table(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    n1, n2 = len(t1), len(t2)
    t = t1[:, None, :, None] * n2 + t2[None, :, None, :]
    return t.reshape(n1 * n2, n1 * n2).astype(_INDEX)


def _table_for(recipe: R.GroupRecipe) -> np.ndarray:
    if isinstance(recipe, R.Cyclic):
        return _cyclic_table(recipe.n)
    if isinstance(recipe, R.Abelian):
        return _abelian_table(recipe.dims)
    if isinstance(recipe, R.Dihedral):
        return _semidirect_table(recipe.m, 2, recipe.m - 1)
    if isinstance(recipe, R.Dicyclic):
        return _dicyclic_table(recipe.m)
    if isinstance(recipe, R.Symmetric):
        return _permutation_table(recipe.k, even_only=False)
    if isinstance(recipe, R.Alternating):
        return _permutation_table(recipe.k, even_only=True)
    if isinstance(recipe, R.SemidirectCC):
        return _semidirect_table(recipe.m, recipe.d, recipe.k)
    if isinstance(recipe, R.FrobAffine):
        return _semidirect_table(recipe.p, recipe.d, recipe.multiplier())
    if isinstance(recipe, R.Direct):
        return _direct_table(_table_for(recipe.left), _table_for(recipe.right))
    raise RecipeInvalid(f"unknown recipe node {recipe!r}")


def build(recipe: R.GroupRecipe, cap: int = DEFAULT_CAP) -> Group:
    """Build and validate the group described by ``recipe``.

    Element numbering is deterministic per recipe kind: ``a^i b^j`` at
    ``i + m*j`` for the split metacyclic families, lexicographic permutation
    order for ``S``/``A``, and ``i*|right| + j`` for direct products.
    """
    recipe.validate()
    if recipe.order > cap:
        raise OrderCapExceeded(f"{recipe} has order {recipe.order} > cap {cap}")
    return Group(_table_for(recipe), label=str(recipe), recipe=recipe)


# -- subgroup machinery -----------------------------------------------------


def subgroup_generated(G: Group, gens: Iterable[int]) -> Subgroup:
    gens_arr = np.unique(np.asarray([g for g in gens if g != 0], dtype=_INDEX))
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    if gens_arr.size:
        frontier = np.zeros(1, dtype=_INDEX)
        while frontier.size:
            prods = G.table[np.ix_(frontier, gens_arr)].ravel()
            new = np.unique(prods[~mask[prods]])
            mask[new] = True
            frontier = new
    return Subgroup(G, tuple(int(x) for x in np.flatnonzero(mask)))


def _conjugates(G: Group, xs: np.ndarray) -> np.ndarray:
    """``out[g, i] = g * xs[i] * g^-1``."""
    gx = G.table[:, xs]
    return G.table[gx, np.broadcast_to(G.inverse[:, None], gx.shape)]


def centralizer(G: Group, S: Subgroup, within: Subgroup | None = None) -> Subgroup:
    w = (within or G.whole).array
    s = S.array
    commute = G.table[np.ix_(w, s)] == G.table[np.ix_(s, w)].T
    return Subgroup(G, tuple(int(x) for x in w[commute.all(axis=1)]))


def element_centralizer(G: Group, x: int) -> Subgroup:
    keep = np.flatnonzero(G.table[:, x] == G.table[x, :])
    return Subgroup(G, tuple(int(g) for g in keep))


def center(G: Group) -> Subgroup:
    return centralizer(G, G.whole, G.whole)


def normalizer(G: Group, H: Subgroup) -> Subgroup:
    inside = H.mask[_conjugates(G, H.array)].all(axis=1)
    return Subgroup(G, tuple(int(g) for g in np.flatnonzero(inside)))


def is_normal(G: Group, H: Subgroup) -> bool:
    return bool(H.mask[_conjugates(G, H.array)].all())


def normal_closure(G: Group, S: Iterable[int]) -> Subgroup:
    xs = np.asarray(sorted(set(S)), dtype=_INDEX)
    if xs.size == 0:
        return G.trivial
    return subgroup_generated(G, np.unique(_conjugates(G, xs)))


def derived_subgroup(G: Group) -> Subgroup:
    # [x, y] = x^-1 y^-1 x y; the commutator set is conjugation invariant
    inv = G.inverse
    xy = G.table  # xy[x, y]
    yx_inv = inv[G.table.T]  # (y x)^-1 = x^-1 y^-1
    comm = G.table[yx_inv, xy]
    return subgroup_generated(G, np.unique(comm))


def quotient(G: Group, N: Subgroup) -> Group:
    """``G/N`` on cosets, numbered by their least element (so ``N`` itself is 0)."""
    if not is_normal(G, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G.label}")
    label = np.full(G.order, -1, dtype=_INDEX)
    reps = []
    for x in range(G.order):
        if label[x] < 0:
            label[G.table[x, N.array]] = len(reps)
            reps.append(x)
    reps_arr = np.asarray(reps, dtype=_INDEX)
    table = label[G.table[np.ix_(reps_arr, reps_arr)]]
    return Group(table, label=f"{G.label}/N{N.order}")


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def sylow(G: Group, p: int) -> Subgroup:
    """A Sylow ``p``-subgroup, grown one factor of ``p`` at a time inside normalizers."""
    if not isprime(p) or G.order % p:
        raise PNotDividing(f"{p} is not a prime dividing {G.order}")
    target = p_part(G.order, p)
    S = G.trivial
    gens: list[int] = []
    while S.order < target:
        N = normalizer(G, S)
        cand = N.array[~S.mask[N.array]]
        ok = S.mask[G.power(cand, p)]
        if not ok.any():  # pragma: no cover - impossible for a finite group
            raise GroupAxiomViolation(f"no extension of a {p}-subgroup of order {S.order}")
        gens.append(int(cand[np.argmax(ok)]))
        S = subgroup_generated(G, gens)
    return S


def conjugacy_classes(G: Group) -> list[tuple[int, ...]]:
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for x in range(G.order):
        if not seen[x]:
            cls = np.unique(_conjugates(G, np.asarray([x], dtype=_INDEX)))
            seen[cls] = True
            classes.append(tuple(int(c) for c in cls))
    return classes


def normal_subgroups(G: Group, cap: int = DEFAULT_LATTICE_CAP) -> list[Subgroup]:
    """All normal subgroups, ordered by (order, members).

    Each normal subgroup is the join of the normal closures of the classes it
    contains, so it suffices to close the class closures under joins.
    """
    principal: dict[tuple[int, ...], Subgroup] = {}
    for cls in conjugacy_classes(G):
        K = subgroup_generated(G, cls)
        principal.setdefault(K.members, K)
    lattice: dict[tuple[int, ...], Subgroup] = {G.trivial.members: G.trivial}
    for K in principal.values():
        for M in list(lattice.values()):
            if K.issubset(M):
                continue
            J = subgroup_generated(G, M.members[1:] + K.members[1:]) if M.order > 1 else K
            if J.members not in lattice:
                lattice[J.members] = J
                if len(lattice) > cap:
                    raise LatticeCapExceeded(f"{G.label}: more than {cap} normal subgroups")
    return sorted(lattice.values(), key=lambda H: (H.order, H.members))


def order_multiset(G: Group) -> dict[int, int]:
    vals, counts = np.unique(G.elem_order, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}
