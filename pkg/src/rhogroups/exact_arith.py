"""Exact factored arithmetic for products of element orders and their bounds.

Values are kept as prime -> exponent maps. Nothing here ever touches a float:
comparisons reduce the ratio of the two operands and only expand it to big
integers when the sign of the ratio's exponents is mixed.
"""

from __future__ import annotations

import enum
import functools
import re
from collections.abc import Iterable, Iterator, Mapping

from sympy import factorint, isprime

from .errors import NonDivisible, PreconditionViolation, QNotDividing

__all__ = [
    "Comparison",
    "FactoredNat",
    "FactoredRat",
    "factor",
    "fn_mul",
    "fn_pow",
    "fn_div",
    "fr_compare",
    "least_prime",
    "parse_factored",
    "rho_cyclic",
    "bound_main",
    "bound_qq",
    "remark_p_check",
    "remark_qp_check",
]


class Comparison(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _normalize(pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    acc: dict[int, int] = {}
    for p, e in pairs:
        acc[p] = acc.get(p, 0) + e
    return tuple(sorted((p, e) for p, e in acc.items() if e != 0))


@functools.total_ordering
class _Factored(Mapping[int, int]):
    __slots__ = ("_items", "_lookup", "_hash")

    def __init__(self, factors: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        pairs = factors.items() if isinstance(factors, Mapping) else factors
        items = _normalize((int(p), int(e)) for p, e in pairs)
        for p, e in items:
            if not isprime(p):
                raise PreconditionViolation(f"factor key {p} is not prime")
            self._check_exponent(p, e)
        self._set(items)

    @classmethod
    def _raw(cls, items: tuple[tuple[int, int], ...]):
        # caller guarantees canonical order, prime keys and valid exponents
        obj = cls.__new__(cls)
        obj._set(items)
        return obj

    def _set(self, items: tuple[tuple[int, int], ...]) -> None:
        self._items = items
        self._lookup = dict(items)
        self._hash = None

    @staticmethod
    def _check_exponent(p: int, e: int) -> None:
        pass

    # Mapping protocol, iterated by ascending prime
    def __getitem__(self, p: int) -> int:
        return self._lookup[p]

    def __iter__(self) -> Iterator[int]:
        return (p for p, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def items(self):  # type: ignore[override]
        return self._items

    def __eq__(self, other: object) -> bool:
        if isinstance(other, _Factored):
            return self._items == other._items
        if isinstance(other, int):
            return other > 0 and self._items == factor(other)._items
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, (_Factored, int)):
            return NotImplemented
        return fr_compare(self, _coerce(other)) is Comparison.LESS

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __str__(self) -> str:
        if not self._items:
            return "1"
        return " * ".join(f"{p}^{e}" for p, e in self._items)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({dict(self._items)!r})"

    def to_rat(self) -> FactoredRat:
        return FactoredRat._raw(self._items)

    def __mul__(self, other):
        if isinstance(other, FactoredNat) and isinstance(self, FactoredNat):
            return fn_mul(self, other)
        if isinstance(other, _Factored):
            return FactoredRat._raw(_normalize(self._items + other._items))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, _Factored):
            return FactoredRat._raw(_normalize(self._items + tuple((p, -e) for p, e in other._items)))
        return NotImplemented


class FactoredNat(_Factored):
    """A positive integer as an ascending prime -> positive exponent map."""

    __slots__ = ()

    @staticmethod
    def _check_exponent(p: int, e: int) -> None:
        if e < 0:
            raise PreconditionViolation(f"negative exponent {e} for prime {p} in a natural")

    @property
    def value(self) -> int:
        out = 1
        for p, e in self._items:
            out *= p**e
        return out

    def __int__(self) -> int:
        return self.value

    def __pow__(self, k: int) -> FactoredNat:
        return fn_pow(self, k)

    def divides(self, other: FactoredNat) -> bool:
        return all(other._lookup.get(p, 0) >= e for p, e in self._items)


class FactoredRat(_Factored):
    """A positive rational as an ascending prime -> signed exponent map."""

    __slots__ = ()

    @property
    def numerator(self) -> FactoredNat:
        return FactoredNat._raw(tuple((p, e) for p, e in self._items if e > 0))

    @property
    def denominator(self) -> FactoredNat:
        return FactoredNat._raw(tuple((p, -e) for p, e in self._items if e < 0))

    def is_integral(self) -> bool:
        return all(e > 0 for _, e in self._items)

    def __pow__(self, k: int) -> FactoredRat:
        return FactoredRat._raw(tuple((p, e * k) for p, e in self._items) if k else ())


ONE = FactoredNat._raw(())


def _coerce(x: _Factored | int) -> _Factored:
    return factor(x) if isinstance(x, int) else x


def factor(n: int) -> FactoredNat:
    """Factor ``n >= 1``; the empty map is 1."""
    if n < 1:
        raise PreconditionViolation(f"factor() needs n >= 1, got {n}")
    return FactoredNat._raw(tuple(sorted(factorint(n).items())))


def least_prime(n: int) -> int | None:
    if n < 2:
        return None
    return next(iter(factor(n)))


def fn_mul(a: FactoredNat, b: FactoredNat) -> FactoredNat:
    return FactoredNat._raw(_normalize(a._items + b._items))


def fn_pow(a: FactoredNat, k: int) -> FactoredNat:
    if k < 0:
        raise PreconditionViolation("fn_pow exponent must be >= 0")
    if k == 0:
        return ONE
    return FactoredNat._raw(tuple((p, e * k) for p, e in a._items))


def fn_div(a: FactoredNat, b: FactoredNat) -> FactoredNat:
    items = _normalize(a._items + tuple((p, -e) for p, e in b._items))
    bad = [p for p, e in items if e < 0]
    if bad:
        raise NonDivisible(f"{b} does not divide {a} (prime {bad[0]})")
    return FactoredNat._raw(items)


def fr_compare(a: _Factored, b: _Factored) -> Comparison:
    ratio = _normalize(a._items + tuple((p, -e) for p, e in b._items))
    if not ratio:
        return Comparison.EQUAL
    if all(e > 0 for _, e in ratio):
        return Comparison.GREATER
    if all(e < 0 for _, e in ratio):
        return Comparison.LESS
    num = 1
    den = 1
    for p, e in ratio:
        if e > 0:
            num *= p**e
        else:
            den *= p ** (-e)
    if num == den:  # pragma: no cover - coprime num/den cannot coincide
        return Comparison.EQUAL
    return Comparison.GREATER if num > den else Comparison.LESS


_TERM = re.compile(r"\s*(\d+)\^(-?\d+)\s*")


def parse_factored(text: str) -> FactoredRat:
    """Inverse of the canonical text form (``"2^-2 * 3^4"``, ``"1"``)."""
    text = text.strip()
    if text == "1":
        return FactoredRat._raw(())
    pairs = []
    for chunk in text.split("*"):
        m = _TERM.fullmatch(chunk)
        if not m:
            raise ValueError(f"bad factored term {chunk!r}")
        pairs.append((int(m.group(1)), int(m.group(2))))
    return FactoredRat(pairs)


def _cyclic_prime_power_exponent(p: int, alpha: int) -> int:
    num = alpha * p ** (alpha + 1) - (alpha + 1) * p**alpha + 1
    exp, rem = divmod(num, p - 1)
    assert rem == 0
    return exp


def rho_cyclic(n: int) -> FactoredNat:
    """Product of element orders of the cyclic group of order ``n``, by closed form."""
    if n < 1:
        raise PreconditionViolation(f"rho_cyclic needs n >= 1, got {n}")
    return FactoredNat._raw(
        tuple((p, _cyclic_prime_power_exponent(p, a) * (n // p**a)) for p, a in factor(n).items())
    )


def _check_q(n: int, q: int) -> None:
    if n < 2 or n % q:
        raise QNotDividing(f"{q} does not divide {n}")
    if least_prime(n) != q:
        raise PreconditionViolation(f"{q} is not the least prime dividing {n}")


def bound_main(n: int, q: int) -> FactoredRat:
    """``q^{-(n/q)(q-1)} * rho(C_n)``."""
    _check_q(n, q)
    return rho_cyclic(n) * FactoredRat([(q, -(n // q) * (q - 1))])


def bound_qq(n: int, q: int) -> FactoredRat:
    """``q^{-q} * rho(C_n)``."""
    _check_q(n, q)
    return rho_cyclic(n) * FactoredRat([(q, -q)])


def remark_p_sides(p: int, alpha: int, strong: bool) -> tuple[FactoredNat, FactoredRat]:
    if not isprime(p) or alpha < 1:
        raise PreconditionViolation(f"need a prime p and alpha >= 1, got p={p}, alpha={alpha}")
    if strong and (p == 2 or alpha < 2):
        raise PreconditionViolation("the strong form needs p odd and alpha >= 2")
    lhs = FactoredNat._raw(((p, (alpha - 1) * p**alpha),) if alpha > 1 else ())
    rhs = rho_cyclic(p**alpha) * FactoredRat([(p, -(p if strong else 1))])
    return lhs, rhs


def remark_p_check(p: int, alpha: int, strong: bool = False) -> bool:
    """Decide ``(p^(alpha-1))^(p^alpha) <= rho(C_{p^alpha}) * p^-1`` (``p^-p`` if strong)."""
    lhs, rhs = remark_p_sides(p, alpha, strong)
    return fr_compare(lhs, rhs) is not Comparison.GREATER


def remark_qp_sides(p: int, q: int) -> tuple[int, int]:
    """Integer form ``(q^(p(q-1)), p^(q(p-1)))`` of ``p^(-(p-1)/p) <= q^(-(q-1)/q)``."""
    if not (p >= q >= 1):
        raise PreconditionViolation(f"need p >= q >= 1, got p={p}, q={q}")
    return q ** (p * (q - 1)), p ** (q * (p - 1))


def remark_qp_check(p: int, q: int) -> bool:
    lhs, rhs = remark_qp_sides(p, q)
    return lhs <= rhs

