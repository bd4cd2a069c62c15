"""Splitting data and local symbol orders, checked against classical
norm-group facts for small cyclotomic extensions of Q_ell."""

import random
from fractions import Fraction

import pytest

from tameweil.errors import InvalidInputError, PrecisionExhaustedError, RetriableError
from tameweil.exactalg import Poly, poly_from_ints
from tameweil.localdata import (
    PlaceData,
    local_symbol_classes,
    local_symbol_orders,
    place_valuations,
    splitting_at,
)

QQ = poly_from_ints([-1, 1])          # x - 1, the rational field
GAUSS = poly_from_ints([1, 0, 1])     # x^2 + 1
RT5 = poly_from_ints([-5, 0, 1])      # x^2 - 5
EIS = poly_from_ints([3, 0, 1])       # x^2 + 3


def const(n) -> Poly:
    return Poly([Fraction(n)])


class TestSplittingAt:
    def test_rational_field(self):
        assert splitting_at(QQ, 5) == (PlaceData(e=1, f=1, ord_pi=0),)
        # generator of Q[x]/(x - 7) is 7, valuation 1 at 7
        assert splitting_at(poly_from_ints([-7, 1]), 7) == (PlaceData(1, 1, 1),)

    def test_gauss_ramified(self):
        assert splitting_at(GAUSS, 2) == (PlaceData(e=2, f=1, ord_pi=0),)

    def test_gauss_split(self):
        assert splitting_at(GAUSS, 5) == (PlaceData(1, 1, 0), PlaceData(1, 1, 0))

    def test_gauss_inert(self):
        assert splitting_at(GAUSS, 3) == (PlaceData(e=1, f=2, ord_pi=0),)

    def test_nonmonogenic_at_2(self):
        # disc(x^2 + 3) = -12 but the field has discriminant -3:
        # 2 is inert, which only the enlarged order can see
        assert splitting_at(EIS, 2) == (PlaceData(e=1, f=2, ord_pi=0),)

    def test_quartic_mixed(self):
        # Q[x]/(x^4 + 3x^2 + 9) at 3: single place, e = f = 2, x has valuation 1
        g = poly_from_ints([9, 0, 3, 0, 1])
        assert splitting_at(g, 3) == (PlaceData(e=2, f=2, ord_pi=1),)

    def test_cyclotomic8_at_2(self):
        g = poly_from_ints([1, 0, 0, 0, 1])
        assert splitting_at(g, 2) == (PlaceData(e=4, f=1, ord_pi=0),)

    def test_sum_ef(self):
        rng = random.Random(991)
        count = 0
        while count < 6:
            g = Poly([rng.randrange(-6, 7), rng.randrange(-6, 7),
                      rng.randrange(-6, 7), 1])
            from tameweil.exactalg import is_irreducible_z
            if not is_irreducible_z(g):
                continue
            count += 1
            for ell in (2, 3):
                places = splitting_at(g, ell)
                assert sum(p.e * p.f for p in places) == 3

    def test_rejects_bad_inputs(self):
        with pytest.raises(InvalidInputError):
            splitting_at(GAUSS, 4)
        with pytest.raises(InvalidInputError):
            splitting_at(poly_from_ints([-1, 0, 1]), 3)  # reducible
        with pytest.raises(InvalidInputError):
            splitting_at(Poly([Fraction(1, 2), 1]), 3)

    def test_cached_identity(self):
        assert splitting_at(GAUSS, 2) is splitting_at(GAUSS, 2)


class TestPlaceValuations:
    def test_rational(self):
        assert place_valuations(QQ, const(12), 2) == [2]
        assert place_valuations(QQ, const(12), 3) == [1]

    def test_gauss(self):
        assert place_valuations(GAUSS, Poly([1, 1]), 2) == [2 - 1]  # v(1+i) = 1
        assert place_valuations(GAUSS, const(2), 2) == [2]
        assert place_valuations(GAUSS, Poly([2, 1]), 5) in ([0, 1], [1, 0])

    def test_half_integer_input(self):
        # (1 + sqrt(-3))/2 is integral, a unit above 2
        u = Poly([Fraction(1, 2), Fraction(1, 2)])
        assert place_valuations(EIS, u, 2) == [0]
        with pytest.raises(InvalidInputError):
            place_valuations(EIS, Poly([Fraction(1, 3), 1]), 3)

    def test_zero_rejected(self):
        with pytest.raises(InvalidInputError):
            place_valuations(GAUSS, Poly([]), 2)


class TestSymbolOrdersOverQ:
    """Base field Q: orders follow the classical norm groups of
    Q_ell(zeta_r)/Q_ell, which are known in closed form."""

    @pytest.mark.parametrize("u, expect", [
        (3, 2), (2, 1), (-1, 2), (5, 1), (7, 2), (-4, 2), (6, 2),
        (-2, 2), (10, 1), (13, 1),
    ])
    def test_ell2_r4(self, u, expect):
        # norms from Q_2(i) are <2> x (1 + 4 Z_2)
        assert local_symbol_orders(QQ, const(u), 2, 4) == [expect]

    @pytest.mark.parametrize("u, expect", [
        (7, 2), (17, 1), (2, 1), (3, 2), (5, 2), (9, 1), (15, 2), (-1, 2),
    ])
    def test_ell2_r8(self, u, expect):
        # norms from Q_2(zeta_8) are <2> x (1 + 8 Z_2); the quotient is
        # C2 x C2, so no order-4 classes can occur
        assert local_symbol_orders(QQ, const(u), 2, 8) == [expect]

    @pytest.mark.parametrize("u, expect", [
        (2, 2), (3, 1), (4, 1), (6, 2), (12, 1),
    ])
    def test_ell3_r3(self, u, expect):
        # Q_3(zeta_3) is ramified quadratic with norm group <-3> x squares
        assert local_symbol_orders(QQ, const(u), 3, 3) == [expect]

    @pytest.mark.parametrize("u, expect", [
        (2, 4), (7, 4), (4, 2), (11, 1), (5, 1), (10, 4),
    ])
    def test_ell5_r5(self, u, expect):
        # Q_5(zeta_5) is totally ramified quartic; 5 = N(1 - zeta_5)
        assert local_symbol_orders(QQ, const(u), 5, 5) == [expect]

    @pytest.mark.parametrize("u, expect", [
        (2, 2), (3, 2), (6, 2), (-1, 2), (4, 1), (13, 1),
    ])
    def test_ell3_r12(self, u, expect):
        # mixed level: unramified part Q_3(i), ramified part Q_3(zeta_3)
        assert local_symbol_orders(QQ, const(u), 3, 12) == [expect]

    def test_ell3_r12_classes(self):
        t2 = local_symbol_classes(QQ, const(2), 3, 12)[0]
        t3 = local_symbol_classes(QQ, const(3), 3, 12)[0]
        t6 = local_symbol_classes(QQ, const(6), 3, 12)[0]
        assert (t2, t3, t6) == (5, 7, 11)
        assert t2 * t3 % 12 == t6

    @pytest.mark.parametrize("u, expect", [
        (2, 2), (3, 1), (4, 1), (-2, 2),
    ])
    def test_ell2_r3_unramified(self, u, expect):
        # Q_2(zeta_3) is unramified quadratic: units are norms, and the
        # class of 2 is the Frobenius, of order 2
        assert local_symbol_orders(QQ, const(u), 2, 3) == [expect]

    @pytest.mark.parametrize("u, expect", [
        (2, 1), (3, 2), (6, 2), (9, 1),
    ])
    def test_ell3_r4_unramified(self, u, expect):
        assert local_symbol_orders(QQ, const(u), 3, 4) == [expect]

    @pytest.mark.parametrize("u, expect", [(7, 2), (3, 1), (49, 1)])
    def test_ell7_r4(self, u, expect):
        assert local_symbol_orders(QQ, const(u), 7, 4) == [expect]

    def test_frobenius_class_unramified(self):
        # at ell coprime to r the class of ell is ell itself mod r
        assert local_symbol_classes(QQ, const(2), 2, 5) == [2]
        assert local_symbol_classes(QQ, const(3), 3, 8) == [3]
        assert local_symbol_classes(QQ, const(7), 7, 12) == [7]


class TestSymbolOrdersQuadratic:
    def test_gauss_r4_all_trivial(self):
        # Q_2(i) already contains zeta_4: every symbol is trivial
        for u in (Poly([0, 1]), Poly([1, 1]), const(3), Poly([2, 1]), const(-1)):
            assert local_symbol_orders(GAUSS, u, 2, 4) == [1]

    def test_gauss_r8(self):
        assert local_symbol_orders(GAUSS, Poly([0, 1]), 2, 8) == [1]   # i
        assert local_symbol_orders(GAUSS, const(3), 2, 8) == [1]       # N = 9
        assert local_symbol_orders(GAUSS, Poly([1, 1]), 2, 8) == [1]   # N = 2
        assert local_symbol_orders(GAUSS, Poly([2, 1]), 2, 8) == [2]   # N = 5

    def test_inert_real_quadratic(self):
        # Q_2(sqrt 5): N(sqrt 5) = -5 = 3 mod 4 is not a norm from Q_2(i)
        assert local_symbol_orders(RT5, Poly([0, 1]), 2, 4) == [2]
        assert local_symbol_orders(RT5, const(5), 2, 4) == [1]
        assert local_symbol_orders(RT5, const(2), 2, 4) == [1]

    def test_eisenstein_field_at_2(self):
        # inert place of Q(sqrt -3) above 2; N(sqrt -3) = 3
        assert local_symbol_orders(EIS, Poly([0, 1]), 2, 4) == [2]
        assert local_symbol_orders(EIS, const(-3), 2, 4) == [1]
        assert local_symbol_orders(EIS, Poly([0, 1]), 2, 8) == [2]
        assert local_symbol_orders(EIS, const(-3), 2, 8) == [1]

    def test_sqrt_minus11_at_2(self):
        g = poly_from_ints([11, 0, 1])
        assert local_symbol_orders(g, Poly([0, 1]), 2, 8) == [2]
        assert local_symbol_orders(g, const(-11), 2, 8) == [1]

    def test_sqrt_minus7_split_at_2(self):
        # -7 = 1 mod 8 so 2 splits; the two local images of sqrt(-7) are
        # congruent to 3 and 5 mod 8
        g = poly_from_ints([7, 0, 1])
        assert sorted(local_symbol_orders(g, Poly([0, 1]), 2, 8)) == [2, 2]
        assert sorted(local_symbol_orders(g, Poly([0, 1]), 2, 4)) == [1, 2]
        assert local_symbol_orders(g, const(-7), 2, 4) == [1, 1]

    def test_order_divides_local_degree_of_cyclotomic(self):
        # [L_v(zeta_8) : L_v] <= 2 for L = Q(i) at 2, so orders stay <= 2
        rng = random.Random(4096)
        for _ in range(12):
            u = Poly([rng.randrange(-5, 6), rng.randrange(-5, 6)])
            if u.is_zero():
                continue
            for n in local_symbol_orders(GAUSS, u, 2, 8):
                assert n in (1, 2)


class TestSymbolStructure:
    FIELDS = [QQ, GAUSS, RT5, EIS]

    def test_multiplicative(self):
        rng = random.Random(1729)
        cases = [(2, 4), (2, 8), (3, 3), (3, 12), (5, 5), (2, 3)]
        for ell, r in cases:
            for g in self.FIELDS:
                for _ in range(6):
                    deg = max(g.degree, 1)
                    u = Poly([rng.randrange(-4, 5) for _ in range(deg)])
                    w = Poly([rng.randrange(-4, 5) for _ in range(deg)])
                    if u.is_zero() or w.is_zero():
                        continue
                    cu = local_symbol_classes(g, u, ell, r)
                    cw = local_symbol_classes(g, w, ell, r)
                    cuw = local_symbol_classes(g, u * w, ell, r)
                    assert cuw == [a * b % r for a, b in zip(cu, cw)]

    def test_power_consistency(self):
        # class(u^2) = class(u)^2, so its order halves or stays
        for g, u in [(GAUSS, Poly([1, 1])), (RT5, Poly([0, 1])), (EIS, Poly([0, 1]))]:
            c1 = local_symbol_classes(g, u, 2, 8)
            c2 = local_symbol_classes(g, u * u, 2, 8)
            assert c2 == [t * t % 8 for t in c1]


class TestReciprocity:
    """Product over all finite places of the classes of a positive
    rational equals 1 mod r (the archimedean symbol is trivial for
    positive numbers): Artin reciprocity for Q(zeta_r)/Q."""

    @pytest.mark.parametrize("u", [2, 3, 5, 6, 15, 30, 7, 21])
    @pytest.mark.parametrize("r", [3, 4, 5, 8, 12])
    def test_product_formula(self, u, r):
        from tameweil.exactalg import factor_int
        support = set(factor_int(u)) | set(factor_int(r))
        prod = 1
        for ell in sorted(support):
            for t in local_symbol_classes(QQ, const(u), ell, r):
                prod = prod * t % r
        assert prod == 1

    def test_inverse_convention_matters(self):
        # the unit part must enter inverted: for u = 2, r = 5 the classes
        # at 2 and 5 are 2 and 3, multiplying to 1; without inversion the
        # product would be 4
        assert local_symbol_classes(QQ, const(2), 2, 5) == [2]
        assert local_symbol_classes(QQ, const(2), 5, 5) == [3]


def test_precision_error_is_retriable():
    assert issubclass(PrecisionExhaustedError, RetriableError)
