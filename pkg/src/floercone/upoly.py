"""Polynomials in U over F2, stored as the set of exponents present."""
from __future__ import annotations

from typing import Iterable, Iterator


class UPoly:
    """Element of F2[U] (or F2[U, U^-1] when negative exponents are allowed).

    Addition is symmetric difference of exponent sets.
    """

    __slots__ = ("_exps",)

    def __init__(self, exps: Iterable[int] = ()):
        acc: set[int] = set()
        for e in exps:
            if not isinstance(e, int) or isinstance(e, bool):
                raise TypeError(f"U-exponent must be an int, got {e!r}")
            acc ^= {e}
        self._exps = frozenset(acc)

    @classmethod
    def monomial(cls, n: int) -> "UPoly":
        return cls((n,))

    @property
    def exponents(self) -> frozenset[int]:
        return self._exps

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._exps))

    def __len__(self) -> int:
        return len(self._exps)

    def __bool__(self) -> bool:
        return bool(self._exps)

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self._exps == other._exps
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._exps)

    def __add__(self, other: "UPoly") -> "UPoly":
        out = UPoly.__new__(UPoly)
        out._exps = self._exps ^ other._exps
        return out

    __sub__ = __add__

    def __mul__(self, other: "UPoly") -> "UPoly":
        acc: set[int] = set()
        for a in self._exps:
            for b in other._exps:
                acc ^= {a + b}
        out = UPoly.__new__(UPoly)
        out._exps = frozenset(acc)
        return out

    def shift(self, n: int) -> "UPoly":
        out = UPoly.__new__(UPoly)
        out._exps = frozenset(e + n for e in self._exps)
        return out

    def truncate(self, cap: int | None) -> "UPoly":
        """Reduce modulo U^(cap+1)."""
        if cap is None:
            return self
        out = UPoly.__new__(UPoly)
        out._exps = frozenset(e for e in self._exps if e <= cap)
        return out

    def min_exponent(self) -> int:
        return min(self._exps)

    def has_unit(self) -> bool:
        return 0 in self._exps

    def is_monomial(self) -> bool:
        return len(self._exps) == 1

    def __repr__(self) -> str:
        if not self._exps:
            return "0"
        return " + ".join("1" if e == 0 else ("U" if e == 1 else f"U^{e}") for e in self)


ONE = UPoly.monomial(0)
ZERO = UPoly()
