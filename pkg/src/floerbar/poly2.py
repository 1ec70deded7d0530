"""Arithmetic in GF(2)[T], the coefficient ring of hole-counting differentials.

A polynomial is stored as a Python int used as a bit mask: bit k holds the
coefficient of T^k.  Addition is xor, multiplication is carry-less.  The only
unit of the ring is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class PolyT:
    """Polynomial over the two-element field in the formal variable T."""

    mask: int = 0

    def __post_init__(self):
        if self.mask < 0:
            raise ValueError("coefficient mask must be non-negative")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> "PolyT":
        mask = 0
        for k, c in enumerate(coeffs):
            if c not in (0, 1):
                raise ValueError(f"coefficient of T^{k} must be 0 or 1, got {c!r}")
            mask |= c << k
        return cls(mask)

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Bit sequence, index = T-degree, without trailing zeros."""
        return tuple((self.mask >> k) & 1 for k in range(self.mask.bit_length()))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return self.mask.bit_length() - 1

    def is_zero(self) -> bool:
        return self.mask == 0

    def is_unit(self) -> bool:
        return self.mask == 1

    def __bool__(self) -> bool:
        return self.mask != 0

    def __add__(self, other: "PolyT") -> "PolyT":
        return PolyT(self.mask ^ other.mask)

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other: "PolyT") -> "PolyT":
        a, b, acc = self.mask, other.mask, 0
        while b:
            if b & 1:
                acc ^= a
            a <<= 1
            b >>= 1
        return PolyT(acc)

    def __call__(self, beta: int) -> int:
        return poly_eval(self, beta)

    def __str__(self) -> str:
        if self.mask == 0:
            return "0"
        terms = []
        for k in range(self.mask.bit_length()):
            if (self.mask >> k) & 1:
                terms.append("1" if k == 0 else ("T" if k == 1 else f"T^{k}"))
        return "+".join(terms)

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    @classmethod
    def from_json(cls, obj) -> "PolyT":
        if not isinstance(obj, list) or any(c not in (0, 1) for c in obj):
            raise ValueError(f"polynomial must be a list of 0/1 bits, got {obj!r}")
        return cls.from_coeffs(obj)


ZERO = PolyT(0)
ONE = PolyT(1)
T = PolyT(2)


def poly_mul(p: PolyT, q: PolyT) -> PolyT:
    """Mod-2 convolution of two coefficient sequences."""
    return p * q


def poly_eval(p: PolyT, beta: int) -> int:
    """Evaluate p at beta in {0, 1}.

    p(0) is the constant coefficient, p(1) the parity of the number of
    nonzero coefficients.
    """
    if beta == 0:
        return p.mask & 1
    if beta == 1:
        return p.mask.bit_count() & 1
    raise ValueError(f"evaluation point must be 0 or 1, got {beta!r}")


def poly_divmod(a: PolyT, b: PolyT) -> tuple[PolyT, PolyT]:
    """Euclidean division a = q*b + r with deg r < deg b.

    Internal helper for the Smith-form elimination used by the standardness
    machinery; the public ring surface is add/mul/eval.
    """
    if b.mask == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = b.mask.bit_length() - 1
    q, r = 0, a.mask
    while r and r.bit_length() - 1 >= db:
        shift = r.bit_length() - 1 - db
        q ^= 1 << shift
        r ^= b.mask << shift
    return PolyT(q), PolyT(r)


def poly_divides(b: PolyT, a: PolyT) -> bool:
    """True when b divides a exactly."""
    if b.mask == 0:
        return a.mask == 0
    return poly_divmod(a, b)[1].is_zero()
