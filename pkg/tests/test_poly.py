import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from evenspec.errors import PreconditionError
from evenspec.poly import RatPoly, poly_gcd, poly_square_root, squarefree_decomposition

X = sympy.Symbol("x")
small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.lists(small, min_size=0, max_size=6).map(RatPoly)


def to_sympy(p: RatPoly):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)] or [0], X,
                      domain="QQ")


def sympy_is_square(p: RatPoly) -> bool:
    """Oracle: monic p is a square iff every squarefree factor has even multiplicity."""
    _, factors = sympy.sqf_list(to_sympy(p).as_expr(), X)
    return all(m % 2 == 0 for _, m in factors)


def test_str_and_basics():
    p = RatPoly.x() ** 6 - RatPoly([0, 0, 0, 0, 5])
    assert str(p) == "x^6 - 5*x^4"
    assert str(RatPoly()) == "0"
    assert RatPoly([1, 2, 0, 0]).degree == 1
    assert RatPoly.from_roots([1, 2])(3) == 2


@settings(max_examples=100, deadline=None)
@given(polys, polys)
def test_arithmetic_matches_sympy(a, b):
    assert to_sympy(a + b) == (to_sympy(a) + to_sympy(b)).set_domain("QQ")
    assert to_sympy(a * b) == (to_sympy(a) * to_sympy(b)).set_domain("QQ")
    if not b.is_zero():
        q, r = a.divmod(b)
        sq, sr = (t.set_domain("QQ") for t in sympy.div(to_sympy(a), to_sympy(b)))
        assert to_sympy(q) == sq and to_sympy(r) == sr
        assert q * b + r == a


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_gcd_matches_sympy(a, b):
    if a.is_zero() and b.is_zero():
        return
    g = poly_gcd(a, b)
    assert to_sympy(g) == sympy.gcd(to_sympy(a), to_sympy(b)).monic().set_domain("QQ")


def test_squarefree_examples():
    x = RatPoly.x()
    p = x ** 4
    assert squarefree_decomposition(p) == [RatPoly([1]), RatPoly([1]), RatPoly([1]), x]
    assert poly_square_root(p) == x ** 2
    q = (x - RatPoly([1])) ** 2 * (x + RatPoly([2])) ** 4
    assert poly_square_root(q) == (x - RatPoly([1])) * (x + RatPoly([2])) ** 2
    assert poly_square_root(x ** 6 - RatPoly([0, 0, 0, 0, 5])) is None
    assert poly_square_root(x ** 3) is None
    assert poly_square_root(RatPoly([1])) == RatPoly([1])
    with pytest.raises(PreconditionError):
        poly_square_root(RatPoly([1, 2]))


def _random_monic(rng: random.Random) -> RatPoly:
    """Products of small rational linear/quadratic factors, squared or not."""
    p = RatPoly([1])
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.7:
            f = RatPoly([Fraction(rng.randint(-4, 4), rng.randint(1, 3)), 1])
        else:
            f = RatPoly([rng.randint(1, 5), rng.randint(-3, 3), 1])
        p = p * f ** rng.randint(1, 4)
    return p


def square_root_oracle(count: int = 200, seed: int = 2024) -> tuple[list[str], int]:
    rng = random.Random(seed)
    failures = []
    squares = 0
    for _ in range(count):
        p = _random_monic(rng)
        root = poly_square_root(p)
        expected = sympy_is_square(p)
        squares += expected
        if (root is not None) != expected or (root is not None and root * root != p):
            failures.append(str(p))
    return failures, squares


def test_square_root_oracle_200():
    failures, squares = square_root_oracle()
    assert not failures
    assert 20 < squares < 180  # both branches exercised


@settings(max_examples=100, deadline=None)
@given(st.lists(polys.filter(lambda p: p.degree >= 1), min_size=1, max_size=3))
def test_square_of_anything_is_detected(factors):
    g = RatPoly([1])
    for f in factors:
        g = g * f.monic()
    root = poly_square_root(g * g)
    assert root is not None and root * root == g * g
