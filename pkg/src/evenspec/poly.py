"""Univariate polynomials with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError


def _strip(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class RatPoly:
    """Coefficients are stored constant term first; the zero polynomial is ``()``."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _strip([Fraction(c) for c in coeffs]))

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "RatPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def monic(self) -> "RatPoly":
        if self.is_zero():
            return self
        lc = self.lead
        return RatPoly(c / lc for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return RatPoly((a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n))

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other) -> "RatPoly":
        if not isinstance(other, RatPoly):
            return RatPoly(c * Fraction(other) for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RatPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RatPoly":
        out = RatPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lc = other.lead
        quot = [Fraction(0)] * max(len(rem) - d, 1)
        for k in range(len(rem) - 1, d - 1, -1):
            q = rem[k] / lc
            if q:
                quot[k - d] = q
                for j, c in enumerate(other.coeffs):
                    rem[k - d + j] -= q * c
        return RatPoly(quot), RatPoly(rem[:d] if d > 0 else [])

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[1]

    def derivative(self) -> "RatPoly":
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            body = str(mag) if (mag != 1 or k == 0) else ""
            if body and mono:
                body += "*"
            terms.append((sign, body + mono))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic gcd by the Euclidean algorithm (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(p: RatPoly) -> list[RatPoly]:
    """Yun's algorithm: monic ``p == prod(f[i] ** (i + 1))`` with each ``f[i]`` squarefree."""
    if p.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    p = p.monic()
    if p.degree == 0:
        return []
    factors = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    while b.degree > 0:
        a = poly_gcd(b, d)
        factors.append(a)
        b = b // a
        c = d // a
        d = c - b.derivative()
    while factors and factors[-1].degree == 0:
        factors.pop()
    return factors


def poly_square_root(p: RatPoly) -> RatPoly | None:
    """Monic ``g`` with ``g * g == p``, or None when ``p`` is not a perfect square."""
    if not p.is_monic():
        raise PreconditionError(f"poly_square_root expects a monic polynomial, got leading coefficient {p.lead}")
    if p.degree % 2:
        return None
    g = RatPoly([1])
    for mult, f in enumerate(squarefree_decomposition(p), start=1):
        if f.degree == 0:
            continue
        if mult % 2:
            return None
        g = g * f ** (mult // 2)
    return g if g * g == p else None
