import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tameweil.errors import EndpointRootError, InvalidInputError
from tameweil.exactalg import (
    Poly,
    X,
    cauchy_root_bound,
    content,
    count_real_roots,
    cyclotomic,
    discriminant,
    factor_mod_p,
    factor_over_z,
    is_irreducible_mod_p,
    is_irreducible_z,
    poly_ext_gcd,
    poly_from_power_sums,
    poly_gcd,
    power_sums,
    primes_from,
    primitive_part,
    resultant,
    squarefree_part,
    sturm_count,
    yun_squarefree,
)


class TestPolyBasics:
    def test_normalization_and_degree(self):
        assert Poly([1, 2, 0, 0]).coeffs == (1, 2)
        assert Poly([]).degree == -1
        assert Poly([0]).is_zero()
        assert Poly([5]).degree == 0

    def test_ring_ops(self):
        f = Poly([1, 1])
        g = Poly([-1, 1])
        assert f * g == Poly([-1, 0, 1])
        assert f + g == Poly([0, 2])
        assert f - f == Poly([])
        assert (f ** 3) == Poly([1, 3, 3, 1])
        assert 2 * f == Poly([2, 2])
        assert f * 0 == Poly([])

    def test_divmod_exact(self):
        f = Poly([-1, 0, 0, 0, 1])  # x^4 - 1
        g = Poly([-1, 0, 1])  # x^2 - 1
        q, r = divmod(f, g)
        assert r.is_zero()
        assert q == Poly([1, 0, 1])
        q2, r2 = divmod(Poly([1, 1, 1]), Poly([2, 2]))
        assert q2 * Poly([2, 2]) + r2 == Poly([1, 1, 1])

    def test_eval_and_transforms(self):
        f = Poly([1, 0, 1])  # x^2 + 1
        assert f(2) == 5
        assert f(Fraction(1, 2)) == Fraction(5, 4)
        assert f.shift(1) == Poly([2, 2, 1])
        assert f.scale_arg(3) == Poly([1, 0, 9])
        assert Poly([2, 3, 1]).reverse() == Poly([1, 3, 2])
        assert f.compose(Poly([0, 0, 1])) == Poly([1, 0, 0, 0, 1])

    def test_immutability_and_hash(self):
        f = Poly([1, 2])
        with pytest.raises(AttributeError):
            f.coeffs = ()
        assert hash(Poly([1, 2])) == hash(f)

    def test_rejects_float(self):
        with pytest.raises(InvalidInputError):
            Poly([0.5, 1])


class TestGcd:
    def test_gcd_known(self):
        f = Poly([-1, 0, 1])  # (x-1)(x+1)
        g = Poly([1, 2, 1])  # (x+1)^2
        assert poly_gcd(f, g) == Poly([1, 1])

    def test_ext_gcd_bezout(self):
        f = Poly([1, 0, 1])
        g = Poly([0, 1])
        d, u, v = poly_ext_gcd(f, g)
        assert d == Poly([1])
        assert u * f + v * g == d

    def test_yun(self):
        f = Poly([1, 1]) ** 3 * Poly([-2, 1]) ** 2 * Poly([1, 0, 1])
        dec = dict((m, g) for g, m in yun_squarefree(f))
        assert dec[3] == Poly([1, 1])
        assert dec[2] == Poly([-2, 1])
        assert dec[1] == Poly([1, 0, 1])
        assert squarefree_part(f) == (Poly([1, 1]) * Poly([-2, 1]) * Poly([1, 0, 1])).monic()


class TestContent:
    def test_content_and_pp(self):
        f = Poly([Fraction(2, 3), Fraction(4, 3)])
        assert content(f) == Fraction(2, 3)
        assert primitive_part(f) == Poly([1, 2])
        assert primitive_part(Poly([-2, -4])) == Poly([1, 2])


class TestFactorModP:
    def test_quartic_cyclotomic_mod3(self):
        # x^4 + 1 factors into two quadratics mod 3
        facs = factor_mod_p([1, 0, 0, 0, 1], 3)
        assert sorted(len(g) - 1 for g, _ in facs) == [2, 2]
        assert all(m == 1 for _, m in facs)

    def test_mod2_pth_power(self):
        # x^4 + 1 = (x+1)^4 mod 2
        facs = factor_mod_p([1, 0, 0, 0, 1], 2)
        assert facs == [([1, 1], 4)]

    def test_deterministic(self):
        f = [3, 1, 4, 1, 5, 9, 2, 6, 1]
        assert factor_mod_p(f, 101) == factor_mod_p(f, 101)

    def test_product_reconstructs(self):
        rng = random.Random(7)
        for _ in range(50):
            p = rng.choice([2, 3, 5, 13])
            deg = rng.randrange(1, 9)
            f = [rng.randrange(p) for _ in range(deg)] + [1]
            facs = factor_mod_p(f, p)
            prod = [1]
            for g, m in facs:
                for _ in range(m):
                    nxt = [0] * (len(prod) + len(g) - 1)
                    for i, a in enumerate(prod):
                        for j, b in enumerate(g):
                            nxt[i + j] = (nxt[i + j] + a * b) % p
                    prod = nxt
            while prod and prod[-1] == 0:
                prod.pop()
            ff = [c % p for c in f]
            while ff and ff[-1] == 0:
                ff.pop()
            assert prod == ff
            for g, _ in facs:
                assert is_irreducible_mod_p(g, p)

    def test_irreducibility_pins(self):
        assert is_irreducible_mod_p([1, 1, 1], 2)  # x^2+x+1
        assert not is_irreducible_mod_p([1, 0, 1], 2)  # (x+1)^2
        assert is_irreducible_mod_p([2, 0, 1], 5)  # x^2+2 mod 5: -2 is not a QR
        assert not is_irreducible_mod_p([1, 0, 0, 0, 1], 3)


class TestFactorOverZ:
    def test_simple(self):
        unit, facs = factor_over_z(Poly([-1, 0, 1]))
        assert unit == 1
        assert [f for f, _ in facs] == [Poly([-1, 1]), Poly([1, 1])]

    def test_weil_quartic_irreducible(self):
        # x^4 + 3x^2 + 9 divides x^6 - 27 and is irreducible
        f = Poly([9, 0, 3, 0, 1])
        assert (Poly([-3, 0, 1]) * f) == Poly([-27, 0, 0, 0, 0, 0, 1])
        assert is_irreducible_z(f)

    def test_multiplicity_and_unit(self):
        f = -6 * Poly([1, 1]) ** 2 * Poly([-2, 0, 1])
        unit, facs = factor_over_z(f)
        assert unit == -6
        assert (Poly([1, 1]), 2) in facs
        assert (Poly([-2, 0, 1]), 1) in facs

    def test_nonmonic(self):
        f = Poly([1, 0, 2]) * Poly([3, 2])  # (2x^2+1)(2x+3)
        unit, facs = factor_over_z(f)
        got = {g for g, _ in facs}
        assert got == {Poly([1, 0, 2]), Poly([3, 2])}
        assert unit == 1

    def test_swinnerton_dyer_style(self):
        # minimal polynomial of sqrt(2)+sqrt(3); factors mod every prime but
        # irreducible over Z, which Makes recombination actually work
        f = Poly([1, 0, -10, 0, 1])
        assert is_irreducible_z(f)

    def test_random_products_roundtrip(self):
        rng = random.Random(20260823)
        basis = [
            Poly([1, 1]),
            Poly([-1, 1]),
            Poly([1, 0, 1]),
            Poly([-2, 0, 1]),
            Poly([1, 1, 1]),
            Poly([2, -1, 1]),
            Poly([1, 0, 0, 1, 1]),
        ]
        for _ in range(60):
            picks = rng.sample(range(len(basis)), rng.randrange(1, 4))
            mults = {i: rng.randrange(1, 3) for i in picks}
            c = rng.choice([-3, -1, 1, 2, 5])
            f = Poly([c])
            for i, m in mults.items():
                f = f * basis[i] ** m
            unit, facs = factor_over_z(f)
            prod = Poly([unit])
            for g, m in facs:
                prod = prod * g ** m
            assert prod == f
            for g, _ in facs:
                assert is_irreducible_z(g)

    @settings(max_examples=120, deadline=None)
    @given(st.lists(st.integers(min_value=-30, max_value=30), min_size=1, max_size=6),
           st.lists(st.integers(min_value=-30, max_value=30), min_size=1, max_size=6))
    def test_factor_recombines_product(self, a, b):
        f = Poly(a + [1]) * Poly(b + [1])
        unit, facs = factor_over_z(f)
        prod = Poly([unit])
        for g, m in facs:
            prod = prod * g ** m
        assert prod == f

    def test_rejects_zero_and_rational(self):
        with pytest.raises(InvalidInputError):
            factor_over_z(Poly([]))
        with pytest.raises(InvalidInputError):
            factor_over_z(Poly([Fraction(1, 2), 1]))


class TestCyclotomic:
    def test_small(self):
        assert cyclotomic(1) == Poly([-1, 1])
        assert cyclotomic(2) == Poly([1, 1])
        assert cyclotomic(4) == Poly([1, 0, 1])
        assert cyclotomic(8) == Poly([1, 0, 0, 0, 1])
        assert cyclotomic(12) == Poly([1, 0, -1, 0, 1])

    def test_degree_is_totient(self):
        def phi(n):
            return sum(1 for k in range(1, n + 1) if __import__("math").gcd(k, n) == 1)

        for r in range(1, 40):
            assert cyclotomic(r).degree == phi(r)

    def test_coefficient_minus_two_at_105(self):
        # first index with a coefficient outside {-1, 0, 1}
        f = cyclotomic(105)
        assert f.coeffs[7] == -2

    def test_product_identity(self):
        for n in (6, 8, 12, 30):
            prod = Poly([1])
            for d in range(1, n + 1):
                if n % d == 0:
                    prod = prod * cyclotomic(d)
            assert prod == Poly([-1] + [0] * (n - 1) + [1])


class TestResultant:
    def test_known_values(self):
        assert resultant(Poly([1, 0, 1]), Poly([-2, 0, 1])) == 9
        assert discriminant(Poly([1, 0, 1])) == -4
        assert discriminant(Poly([0, -1, 0, 1])) == 4  # x^3 - x
        assert discriminant(Poly([2, 3, 1])) == 1

    def test_multiplicative(self):
        f = Poly([1, 2, 3])
        g = Poly([-1, 1])
        h = Poly([5, 0, 0, 1])
        assert resultant(f, g * h) == resultant(f, g) * resultant(f, h)

    def test_common_root_gives_zero(self):
        assert resultant(Poly([-1, 1]) * Poly([1, 0, 1]), Poly([-1, 1]) * Poly([7, 1])) == 0


class TestSturm:
    def test_counts(self):
        f = Poly([-2, 0, 1])
        assert sturm_count(f, 0, 2) == 1
        assert sturm_count(f, -2, 0) == 1
        assert sturm_count(f, 2, 3) == 0
        assert count_real_roots(Poly([0, -1, 0, 1])) == 3
        assert count_real_roots(Poly([1, 0, 1])) == 0

    def test_endpoint_root_raises(self):
        with pytest.raises(EndpointRootError):
            sturm_count(Poly([0, 1]), 0, 1)

    def test_bad_interval(self):
        with pytest.raises(InvalidInputError):
            sturm_count(Poly([0, 1]), 1, 1)

    def test_cauchy_bound(self):
        f = Poly([-2, 0, 1])
        b = cauchy_root_bound(f)
        assert b == 3
        assert sturm_count(f, -b, b) == 2


class TestPowerSums:
    def test_known(self):
        f = Poly([2, -3, 1])  # roots 1, 2
        assert power_sums(f, 4) == [3, 5, 9, 17]

    def test_roundtrip_fixed(self):
        for coeffs in ([2, -3, 1], [1, 0, 0, 1], [-5, 4, -3, 2, 1]):
            f = Poly(coeffs[:-1] + [1]) if coeffs[-1] != 1 else Poly(coeffs)
            ps = power_sums(f, f.degree)
            assert poly_from_power_sums(ps, f.degree) == f

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.integers(min_value=-20, max_value=20), min_size=1, max_size=7))
    def test_roundtrip_random(self, cs):
        f = Poly(cs + [1])
        ps = power_sums(f, f.degree)
        assert poly_from_power_sums(ps, f.degree) == f

    def test_requires_monic(self):
        with pytest.raises(InvalidInputError):
            power_sums(Poly([1, 2]), 3)


class TestPrimes:
    def test_stream(self):
        it = primes_from(2)
        assert [next(it) for _ in range(6)] == [2, 3, 5, 7, 11, 13]
        it = primes_from(90)
        assert next(it) == 97
