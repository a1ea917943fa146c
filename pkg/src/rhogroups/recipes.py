"""Construction recipes for the small groups the toolkit works with.

A recipe is an immutable AST node. ``str(recipe)`` is the corpus DSL text for
it, so recipes (not multiplication tables) are what gets serialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from sympy import isprime, primefactors

from .errors import RecipeInvalid

MAX_PERMUTATION_DEGREE = 6


class GroupRecipe:
    """Base class of all recipe nodes."""

    @property
    def order(self) -> int:
        raise NotImplementedError

    def validate(self) -> None:
        """Raise :class:`RecipeInvalid` when the arithmetic side conditions fail."""


@dataclass(frozen=True)
class Cyclic(GroupRecipe):
    n: int

    @property
    def order(self) -> int:
        return self.n

    def validate(self) -> None:
        if self.n < 1:
            raise RecipeInvalid(f"C({self.n}): order must be >= 1")

    def __str__(self) -> str:
        return f"C({self.n})"


@dataclass(frozen=True)
class Abelian(GroupRecipe):
    dims: tuple[int, ...]

    @property
    def order(self) -> int:
        return math.prod(self.dims)

    def validate(self) -> None:
        if not self.dims or any(d < 1 for d in self.dims):
            raise RecipeInvalid(f"{self}: needs at least one factor, all >= 1")

    def __str__(self) -> str:
        return f"Ab({','.join(map(str, self.dims))})"


@dataclass(frozen=True)
class Dihedral(GroupRecipe):
    """Symmetries of a regular ``m``-gon, order ``2m``."""

    m: int

    @property
    def order(self) -> int:
        return 2 * self.m

    def validate(self) -> None:
        if self.m < 1:
            raise RecipeInvalid(f"D({self.m}): m must be >= 1")

    def __str__(self) -> str:
        return f"D({self.m})"


@dataclass(frozen=True)
class Dicyclic(GroupRecipe):
    """``<a, x | a^(2m), x^2 = a^m, x a x^-1 = a^-1>``, order ``4m``."""

    m: int

    @property
    def order(self) -> int:
        return 4 * self.m

    def validate(self) -> None:
        if self.m < 1:
            raise RecipeInvalid(f"Dic({self.m}): m must be >= 1")

    def __str__(self) -> str:
        return f"Dic({self.m})"


@dataclass(frozen=True)
class Symmetric(GroupRecipe):
    k: int

    @property
    def order(self) -> int:
        return math.factorial(self.k)

    def validate(self) -> None:
        if not 1 <= self.k <= MAX_PERMUTATION_DEGREE:
            raise RecipeInvalid(f"S({self.k}): degree must be in 1..{MAX_PERMUTATION_DEGREE}")

    def __str__(self) -> str:
        return f"S({self.k})"


@dataclass(frozen=True)
class Alternating(GroupRecipe):
    k: int

    @property
    def order(self) -> int:
        return max(1, math.factorial(self.k) // 2)

    def validate(self) -> None:
        if not 1 <= self.k <= MAX_PERMUTATION_DEGREE:
            raise RecipeInvalid(f"A({self.k}): degree must be in 1..{MAX_PERMUTATION_DEGREE}")

    def __str__(self) -> str:
        return f"A({self.k})"


@dataclass(frozen=True)
class Direct(GroupRecipe):
    left: GroupRecipe
    right: GroupRecipe

    @property
    def order(self) -> int:
        return self.left.order * self.right.order

    def validate(self) -> None:
        self.left.validate()
        self.right.validate()

    def __str__(self) -> str:
        return f"Direct({self.left},{self.right})"


@dataclass(frozen=True)
class SemidirectCC(GroupRecipe):
    """``C_m x| C_d`` where the generator of ``C_d`` acts by ``x -> x^k``."""

    m: int
    d: int
    k: int

    @property
    def order(self) -> int:
        return self.m * self.d

    def validate(self) -> None:
        if self.m < 1 or self.d < 1:
            raise RecipeInvalid(f"{self}: m and d must be >= 1")
        if math.gcd(self.k, self.m) != 1:
            raise RecipeInvalid(f"{self}: gcd(k, m) must be 1")
        if pow(self.k, self.d, self.m) != 1 % self.m:
            raise RecipeInvalid(f"{self}: k^d must be 1 mod m")

    def __str__(self) -> str:
        return f"SD({self.m},{self.d},{self.k})"


@dataclass(frozen=True)
class FrobAffine(GroupRecipe):
    """``C_p x| C_d`` with ``C_d`` the order-``d`` subgroup of ``F_p^*`` acting by multiplication."""

    p: int
    d: int

    @property
    def order(self) -> int:
        return self.p * self.d

    def validate(self) -> None:
        if not isprime(self.p):
            raise RecipeInvalid(f"{self}: p must be prime")
        if self.d <= 1 or (self.p - 1) % self.d:
            raise RecipeInvalid(f"{self}: d must satisfy d > 1 and d | p-1")

    def multiplier(self) -> int:
        """Least residue of multiplicative order exactly ``d`` mod ``p``."""
        for k in range(2, self.p):
            if pow(k, self.d, self.p) == 1 and all(
                pow(k, self.d // r, self.p) != 1 for r in primefactors(self.d)
            ):
                return k
        raise RecipeInvalid(f"{self}: no element of order {self.d} mod {self.p}")

    def __str__(self) -> str:
        return f"Frob({self.p},{self.d})"

