import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tameweil.errors import InvalidInputError
from tameweil.exactalg import Poly, cyclotomic, is_irreducible_z
from tameweil.weilpoly import (
    base_change,
    functional_equation_holds,
    half_transform,
    is_weil_minpoly,
    is_weil_poly,
    weil_factorization,
)


def modulus_oracle(f: Poly, q: int, tol=1e-7):
    """Float check: all complex root moduli equal sqrt(q); None if too close to call."""
    roots = np.roots([float(c) for c in reversed(f.coeffs)])
    err = max(abs(abs(r) ** 2 - q) for r in roots)
    if 0 < err < tol * q * 100:
        return None
    return err <= tol * q


class TestIsWeilMinpoly:
    def test_linear(self):
        assert is_weil_minpoly(Poly([-2, 1]), 4)  # x - 2, q = 4
        assert is_weil_minpoly(Poly([3, 1]), 9)  # x + 3, q = 9
        assert not is_weil_minpoly(Poly([5, 1]), 5)  # x + 5 needs q = 25

    def test_real_quadratic(self):
        assert is_weil_minpoly(Poly([-5, 0, 1]), 5)  # x^2 - 5
        assert not is_weil_minpoly(Poly([-4, 0, 1]), 4)  # sqrt(4) rational

    def test_supersingular_quadratic(self):
        for p in (2, 3, 5, 7, 11, 13):
            assert is_weil_minpoly(Poly([p, 0, 1]), p)  # x^2 + p

    def test_ordinary_quadratics(self):
        assert is_weil_minpoly(Poly([3, -1, 1]), 3)
        assert is_weil_minpoly(Poly([7, -5, 1]), 7)
        assert is_weil_minpoly(Poly([2, -2, 1]), 2)  # 1 +- i

    def test_real_root_not_on_circle(self):
        assert not is_weil_minpoly(Poly([7, -6, 1]), 7)  # roots 3 +- sqrt2

    def test_weil_quartic(self):
        assert is_weil_minpoly(Poly([9, 0, 3, 0, 1]), 3)

    def test_cyclotomic_not_weil(self):
        assert not is_weil_minpoly(cyclotomic(5), 2)
        assert not is_weil_minpoly(Poly([1, 1, 1]), 2)

    def test_odd_degree_rejected(self):
        # irreducible cubic, cannot be a Weil minimal polynomial
        assert not is_weil_minpoly(Poly([-2, 0, 0, 1]), 2)

    def test_wrong_q(self):
        assert not is_weil_minpoly(Poly([3, 0, 1]), 5)
        assert is_weil_minpoly(Poly([3, 0, 1]), 3)

    def test_bad_q(self):
        with pytest.raises(InvalidInputError):
            is_weil_minpoly(Poly([2, 0, 1]), 1)


class TestFunctionalEquation:
    def test_holds(self):
        assert functional_equation_holds(Poly([3, -1, 1]), 3)
        assert functional_equation_holds(Poly([9, 0, 3, 0, 1]), 3)

    def test_fails(self):
        assert not functional_equation_holds(Poly([1, 1, 1]), 3)

    def test_half_transform_roundtrip(self):
        g = Poly([9, 0, 3, 0, 1])
        h = half_transform(g, 3)
        assert h is not None
        # g(x) = x^m h(x + q/x): verify by clearing denominators at x = 2
        x = Fraction(2)
        val = h.evaluate(x + Fraction(3) / x) * x ** (g.degree // 2)
        assert val == g.evaluate(x)

    def test_half_transform_none_for_odd(self):
        assert half_transform(Poly([1, 1, 1, 1]), 2) is None


class TestIsWeilPoly:
    def test_products(self):
        f = Poly([3, -1, 1]) * Poly([3, 0, 1])
        assert is_weil_poly(f, 3)
        assert not is_weil_poly(f * Poly([1, 1]), 3)

    def test_synthetic_products(self):
        rng = random.Random(101)
        for _ in range(40):
            q = rng.choice([2, 3, 5, 7, 9, 25])
            k = rng.randrange(1, 4)
            f = Poly([1])
            for _ in range(k):
                amax = 1
                while (amax + 1) ** 2 < 4 * q:
                    amax += 1
                a = rng.randint(-amax, amax)
                if a * a >= 4 * q:
                    a = 0
                f = f * Poly([q, -a, 1])
            assert is_weil_poly(f, q)

    def test_weil_factorization_raises(self):
        with pytest.raises(InvalidInputError):
            weil_factorization(Poly([1, 1]) * Poly([3, 0, 1]), 3)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 30))
    def test_against_float_oracle(self, seed):
        rng = random.Random(seed)
        q = rng.choice([2, 3, 4, 5, 7, 8, 9, 11, 13])
        d = rng.choice([2, 4])
        if rng.random() < 0.5:
            # random coefficients, usually not Weil
            f = Poly([rng.randint(-3 * q, 3 * q) for _ in range(d)] + [1])
        else:
            f = Poly([1])
            for _ in range(d // 2):
                a = rng.randint(-isqrt_floor(4 * q), isqrt_floor(4 * q))
                f = f * Poly([q, -a, 1])
        if f.constant() == 0:
            return
        oracle = modulus_oracle(f, q)
        if oracle is None:
            return
        assert is_weil_poly(f, q) == oracle


def isqrt_floor(n):
    from math import isqrt

    return isqrt(n)


class TestBaseChange:
    def test_linear(self):
        assert base_change(Poly([-2, 1]), 3) == Poly([-8, 1])

    def test_supersingular_square(self):
        p = 5
        assert base_change(Poly([p, 0, 1]), 2) == Poly([p, 1]) ** 2

    def test_gaussian(self):
        # roots 1 +- i; squares are +-2i with minimal polynomial x^2 + 4
        assert base_change(Poly([2, -2, 1]), 2) == Poly([4, 0, 1])

    def test_identity(self):
        f = Poly([3, -1, 1])
        assert base_change(f, 1) == f

    def test_composition(self):
        f = Poly([3, -1, 1])
        assert base_change(base_change(f, 2), 3) == base_change(f, 6)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=4),
           st.integers(min_value=1, max_value=3), st.integers(min_value=1, max_value=3))
    def test_composition_random(self, cs, s, t):
        f = Poly(cs + [1])
        assert base_change(base_change(f, s), t) == base_change(f, s * t)

    def test_degree_preserved_and_weil(self):
        g = Poly([9, 0, 3, 0, 1])
        g2 = base_change(g, 2)
        assert g2.degree == 4
        assert is_weil_poly(g2, 9)

    def test_rejects_bad_input(self):
        with pytest.raises(InvalidInputError):
            base_change(Poly([1, 2]), 2)
        with pytest.raises(InvalidInputError):
            base_change(Poly([-2, 1]), 0)
