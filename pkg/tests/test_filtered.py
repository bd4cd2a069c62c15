"""Tests for the exact coefficient tower and the filtration gates."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tameweil.errors import (
    InvalidInputError,
    RandomizedInconclusiveError,
)
from tameweil.exactalg import Poly, cyclotomic
from tameweil.filtered import (
    FiltrationInput,
    _nondegenerate_combination,
    build_global_model,
    galois_stable_check,
    hodge_tate_check,
    skew_form_filtered,
    verify_model,
    wa_screen,
)
from tameweil.numberfield import nf_factor

I2 = [[1, 0], [0, 1]]
I4 = [[1 if i == j else 0 for j in range(4)] for i in range(4)]


def rand_tower_elem(model, rng):
    rows = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3))
             for _ in range(model.base.degree)] for _ in range(model.e)]
    return model.from_coords(rows)


class TestBuildGlobalModel:
    def test_trivial_model(self):
        m = build_global_model(1, 1, 5)
        assert m.base.degree == 1 and m.degree == 1
        assert m.zeta == m.base.one()
        x = m.from_rational(Fraction(3, 2))
        assert m.eq(m.mul(x, m.inv(x)), m.one())

    def test_split_inertia_adjoins_bookkeeping_root(self):
        # s = 1 forces p = 1 mod e; the unramified part is Q and the
        # root of unity lives in an adjoined cyclotomic layer
        m = build_global_model(1, 4, 5)
        assert m.unram_poly.degree == 1
        assert m.base.degree == 2  # Q(zeta_4)
        t = m.uniformizer()
        t4 = m.mul(m.mul(t, t), m.mul(t, t))
        assert m.eq(t4, m.from_rational(5))
        th = m.theta(t)
        assert not m.eq(th, t)
        for _ in range(3):
            th = m.theta(th)
        assert m.eq(th, t)
        # sigma is the identity here
        assert m.apply_sigma(m.base.gen()) == m.base.gen()

    def test_cyclotomic_route(self):
        m = build_global_model(2, 4, 7)
        assert m.unram_poly == cyclotomic(4)
        assert m.zeta == m.base.gen()
        assert m.apply_sigma(m.zeta) == -m.zeta

    def test_cyclotomic_route_root_factors_over_base(self):
        m = build_global_model(2, 4, 7)
        h = [m.base.from_rational(c) for c in cyclotomic(4).coeffs]
        degs = [len(f) - 1 for f, _ in nf_factor(m.base, h)]
        assert 1 in degs

    @pytest.mark.parametrize("e,p", [(3, 5), (4, 7), (6, 11)])
    def test_supersingular_elliptic_models(self, e, p):
        # p = -1 mod e: residue degree two with the root of unity inside
        m = build_global_model(2, e, p)
        assert m.unram_poly == cyclotomic(e)
        assert m.zeta == m.base.gen()

    def test_gauss_route_quadratic(self):
        m = build_global_model(2, 1, 2)
        assert m.unram_poly.degree == 2
        g = m.base.gen()
        assert m.apply_sigma(g) != g
        assert m.apply_sigma(m.apply_sigma(g)) == g
        verify_model(m)

    def test_gauss_route_cubic(self):
        m = build_global_model(3, 1, 2)
        assert m.unram_poly.degree == 3
        a = m.base.gen()
        seen = []
        for _ in range(3):
            a = m.apply_sigma(a)
            seen.append(a)
        assert seen[-1] == m.base.gen()
        assert m.base.gen() not in seen[:-1]
        assert len(set(seen[:-1])) == 2

    def test_compositum_route(self):
        m = build_global_model(4, 3, 7)
        assert m.base.degree == 8
        assert m.unram_poly.degree == 4
        assert m.zeta ** 3 == m.base.one() and m.zeta != m.base.one()
        verify_model(m)

    def test_deterministic_construction(self):
        a = build_global_model(2, 1, 2)
        b = build_global_model(2, 1, 2)
        assert a.unram_poly == b.unram_poly
        assert a.sigma_gen == b.sigma_gen
        assert a.zeta == b.zeta

    @pytest.mark.parametrize("s,e,p", [
        (1, 4, 7),   # ord(p mod e) = 2 does not divide s = 1
        (1, 3, 3),   # inertia order divisible by p
        (0, 1, 5),
        (2, 4, 9),   # composite p
    ])
    def test_rejects_incoherent_parameters(self, s, e, p):
        with pytest.raises(InvalidInputError):
            build_global_model(s, e, p)

    def test_tower_ring_axioms(self):
        m = build_global_model(1, 4, 5)
        rng = random.Random(7)
        for _ in range(8):
            a, b, c = (rand_tower_elem(m, rng) for _ in range(3))
            assert m.eq(m.mul(a, m.mul(b, c)), m.mul(m.mul(a, b), c))
            assert m.eq(m.mul(a, m.add(b, c)),
                        m.add(m.mul(a, b), m.mul(a, c)))
            if not m.is_zero(a):
                assert m.eq(m.mul(a, m.inv(a)), m.one())

    def test_twists_are_ring_maps(self):
        m = build_global_model(2, 4, 7)
        rng = random.Random(11)
        for _ in range(6):
            a, b = rand_tower_elem(m, rng), rand_tower_elem(m, rng)
            assert m.eq(m.frob(m.mul(a, b)), m.mul(m.frob(a), m.frob(b)))
            assert m.eq(m.theta(m.mul(a, b)), m.mul(m.theta(a), m.theta(b)))
            # sigma theta = theta^p sigma
            assert m.eq(m.frob(m.theta(a)), m.apply_word(m.frob(a), 0, m.p))


class TestFiltrationInput:
    def test_rank_and_validate(self):
        m = build_global_model(1, 1, 5)
        fi = FiltrationInput(m, [[1, 0]])
        assert fi.rank() == 1 and fi.validate() == []
        dep = FiltrationInput(m, [[1, 2], [2, 4]])
        assert "fil1-rank" in dep.validate()
        full = FiltrationInput(m, [[1, 0], [0, 1]])
        assert "fil1-nontrivial" in full.validate()
        empty = FiltrationInput(m, [], nrows=2)
        assert "fil1-nontrivial" in empty.validate()

    def test_tower_valued_dependence(self):
        # columns proportional over E but not over Q
        m = build_global_model(1, 4, 5)
        t = m.uniformizer()
        one = m.one()
        c1 = [one, t]
        c2 = [t, m.mul(t, t)]
        fi = FiltrationInput(m, [c1, c2])
        assert fi.rank() == 1
        assert "fil1-rank" in fi.validate()

    def test_mixed_lengths_raise(self):
        m = build_global_model(1, 1, 5)
        with pytest.raises(InvalidInputError):
            FiltrationInput(m, [[1, 0], [1, 0, 0]])

    def test_foreign_coefficients_raise(self):
        m = build_global_model(1, 1, 5)
        other = build_global_model(2, 4, 7)
        with pytest.raises(InvalidInputError):
            FiltrationInput(m, [[other.base.gen(), 0]])


class TestHodgeTate:
    def test_correct_dimension(self):
        m = build_global_model(1, 1, 5)
        assert hodge_tate_check(FiltrationInput(m, [[1, 1]]), 1)

    def test_wrong_dimension(self):
        m = build_global_model(1, 1, 5)
        fi = FiltrationInput(m, [[1, 0, 0, 0]])
        assert not hodge_tate_check(fi, 2)

    def test_zero_filtration_fails(self):
        m = build_global_model(1, 1, 5)
        assert not hodge_tate_check(FiltrationInput(m, [], nrows=2), 1)

    def test_full_filtration_fails(self):
        m = build_global_model(1, 1, 5)
        fi = FiltrationInput(m, [[1, 0], [0, 1]])
        assert not hodge_tate_check(fi, 1)

    def test_dependent_columns_raise(self):
        m = build_global_model(1, 1, 5)
        fi = FiltrationInput(m, [[1, 2], [2, 4]])
        with pytest.raises(InvalidInputError):
            hodge_tate_check(fi, 1)

    def test_ambient_mismatch_raises(self):
        m = build_global_model(1, 1, 5)
        with pytest.raises(InvalidInputError):
            hodge_tate_check(FiltrationInput(m, [[1, 0]]), 3)


class TestGaloisStable:
    def test_eigenline_stable_generic_not(self):
        # order-2 descent involution on a residue-degree-2 model: its
        # eigenlines are stable, a mixed line is not
        m = build_global_model(2, 1, 5)
        C = [[1, 0], [0, -1]]
        assert galois_stable_check(FiltrationInput(m, [[1, 0]]), C, I2)
        assert galois_stable_check(FiltrationInput(m, [[0, 1]]), C, I2)
        assert not galois_stable_check(FiltrationInput(m, [[1, 1]]), C, I2)

    def test_identity_forced_when_totally_ramified(self):
        # s = 1 leaves no Frobenius part in the group; any non-identity
        # matrix fails the order check
        m = build_global_model(1, 1, 5)
        with pytest.raises(InvalidInputError):
            galois_stable_check(FiltrationInput(m, [[1, 0]]), [[1, 0], [0, 5]], I2)
        assert galois_stable_check(FiltrationInput(m, [[1, 1]]), I2, I2)

    def test_rotation_eigenline(self):
        # honest order-4 inertia: the zeta-eigenline is stable, a
        # rational line is not
        m = build_global_model(1, 4, 5)
        T = [[0, -1], [1, 0]]
        z = m.coerce(m.base.gen())
        eig = FiltrationInput(m, [[m.one(), m.neg(z)]])
        assert galois_stable_check(eig, I2, T)
        rat = FiltrationInput(m, [[1, 0]])
        assert not galois_stable_check(rat, I2, T)

    def test_semilinear_frobenius(self):
        m = build_global_model(2, 1, 2)
        g = m.coerce(m.base.gen())
        moved = FiltrationInput(m, [[g, m.one()]])
        assert not galois_stable_check(moved, I2, I2)
        fixed = FiltrationInput(m, [[1, 0]])
        assert galois_stable_check(fixed, I2, I2)

    def test_inertia_order_violation(self):
        m = build_global_model(1, 4, 5)
        fi = FiltrationInput(m, [[1, 0]])
        with pytest.raises(InvalidInputError):
            galois_stable_check(fi, I2, [[1, 1], [0, 1]])

    def test_conjugation_relation_violation(self):
        # with trivial Frobenius matrix over a residue-degree-2 model the
        # p-power relation forces T^p = sigma(T); a rotation breaks it
        m = build_global_model(2, 4, 7)
        fi = FiltrationInput(m, [[1, 0]])
        with pytest.raises(InvalidInputError):
            galois_stable_check(fi, I2, [[0, -1], [1, 0]])

    def test_trivial_inertia_with_twist_passes_relations(self):
        m = build_global_model(2, 4, 7)
        fi = FiltrationInput(m, [[1, 0]])
        assert galois_stable_check(fi, I2, I2)
        g = m.coerce(m.base.gen())
        moved = FiltrationInput(m, [[g, m.one()]])
        assert not galois_stable_check(moved, I2, I2)

    def test_shape_violation(self):
        m = build_global_model(1, 1, 5)
        fi = FiltrationInput(m, [[1, 0]])
        with pytest.raises(InvalidInputError):
            galois_stable_check(fi, [[1, 0]], I2)


class TestSkewForm:
    def test_ordinary_elliptic_symplectic_witness(self):
        m = build_global_model(1, 1, 5)
        C = [[0, -5], [1, 1]]
        rep = skew_form_filtered(C, I2, FiltrationInput(m, [[0, 1]]))
        assert rep.ok and rep.space_dim == 1
        W = [list(r) for r in rep.witness]
        assert W[0][1] == -W[1][0] != 0 and W[0][0] == W[1][1] == 0

    def test_witness_satisfies_constraints(self):
        m = build_global_model(1, 1, 5)
        C = [[0, -5], [1, 1]]
        rep = skew_form_filtered(C, I2, FiltrationInput(m, [[1, 2]]))
        W = [list(r) for r in rep.witness]
        Ct = [[C[j][i] for j in range(2)] for i in range(2)]
        lhs = [[sum(Ct[i][a] * W[a][b] * C[b][j] for a in range(2)
                    for b in range(2)) for j in range(2)] for i in range(2)]
        assert lhs == [[5 * W[i][j] for j in range(2)] for i in range(2)]

    def test_negative_determinant_obstruction(self):
        # det of the Frobenius matrix is -p: equivariance kills the form
        m = build_global_model(1, 1, 5)
        Css = [[0, 5], [1, 0]]
        rep = skew_form_filtered(Css, I2, FiltrationInput(m, [[0, 1]]))
        assert not rep.ok and rep.witness is None and rep.space_dim == 0

    def test_even_multiplicity_pairs_across_blocks(self):
        m = build_global_model(1, 1, 5)
        Css = [[0, 5, 0, 0], [1, 0, 0, 0], [0, 0, 0, 5], [0, 0, 1, 0]]
        fil = FiltrationInput(m, [[1, 0, 0, 0], [0, 0, 1, 0]])
        rep = skew_form_filtered(Css, I4, fil)
        assert rep.ok
        W = [list(r) for r in rep.witness]
        # isotropy of the filtration plane
        assert W[0][2] == 0

    def test_full_filtration_degenerates(self):
        m = build_global_model(1, 1, 5)
        C = [[0, -5], [1, 1]]
        fi = FiltrationInput(m, [[1, 0], [0, 1]])
        rep = skew_form_filtered(C, I2, fi)
        assert not rep.ok and rep.witness is None

    def test_deterministic_reports(self):
        m = build_global_model(1, 1, 5)
        C = [[0, -5], [1, 1]]
        a = skew_form_filtered(C, I2, FiltrationInput(m, [[0, 1]]))
        b = skew_form_filtered(C, I2, FiltrationInput(m, [[0, 1]]))
        assert a == b

    def test_dependent_columns_raise(self):
        m = build_global_model(1, 1, 5)
        fi = FiltrationInput(m, [[1, 2], [2, 4]])
        with pytest.raises(InvalidInputError):
            skew_form_filtered([[0, -5], [1, 1]], I2, fi)

    def test_search_helper_proves_degeneracy(self):
        sing = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]]
        assert _nondegenerate_combination([sing], 2, 0, 32, 1000) is None

    def test_search_helper_inconclusive_at_cap(self):
        sing = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]]
        with pytest.raises(RandomizedInconclusiveError):
            _nondegenerate_combination([sing] * 7, 2, 0, 8, 1)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
           st.booleans())
    def test_two_dimensional_forms_track_determinant_sign(self, u, v, w, pos):
        # for 2x2 models every alternating form is a multiple of the
        # standard one, so existence is exactly det = +p
        m = build_global_model(1, 1, 5)
        D = [[1, 0], [0, 5 if pos else -5]]
        U = [[1, u], [0, 1]]
        L = [[1, 0], [v, 1]]
        F0 = [[sum(U[i][a] * D[a][b] * L[b][j] for a in range(2)
                   for b in range(2)) for j in range(2)] for i in range(2)]
        fil = FiltrationInput(m, [[1, w]])
        rep = skew_form_filtered(F0, I2, fil)
        assert rep.ok == pos


class TestWAScreen:
    def test_unit_root_line_rejected(self):
        m = build_global_model(1, 1, 5)
        F0 = [[1, 0], [0, 5]]
        rep = wa_screen(F0, I2, FiltrationInput(m, [[1, 0]]))
        assert not rep.ok
        bad = [c for c in rep.entries if not c.ok]
        assert bad and bad[0].t_hodge == 1 and bad[0].t_newton == 0

    def test_generic_line_passes(self):
        m = build_global_model(1, 1, 5)
        F0 = [[1, 0], [0, 5]]
        rep = wa_screen(F0, I2, FiltrationInput(m, [[1, 1]]))
        assert rep.ok and rep.t_newton == rep.t_hodge == 1
        assert len(rep.entries) == 2

    def test_supersingular_any_line_passes(self):
        m = build_global_model(1, 1, 5)
        Css = [[0, 5], [1, 0]]
        for line in ([[1, 0]], [[0, 1]], [[1, 1]]):
            rep = wa_screen(Css, I2, FiltrationInput(m, line))
            assert rep.ok and rep.entries == ()

    def test_mixed_four_dimensional(self):
        m = build_global_model(1, 1, 5)
        F0 = [[1, 0, 0, 0], [0, 5, 0, 0], [0, 0, 0, 5], [0, 0, 1, 0]]
        good = FiltrationInput(m, [[0, 1, 0, 0], [0, 0, 1, 0]])
        rep = wa_screen(F0, I4, good)
        assert rep.ok and len(rep.entries) == 6
        bad = FiltrationInput(m, [[1, 0, 0, 0], [0, 0, 1, 0]])
        rep2 = wa_screen(F0, I4, bad)
        assert not rep2.ok
        assert any(c.t_hodge > c.t_newton for c in rep2.entries)

    def test_global_mismatch_detected(self):
        m = build_global_model(1, 1, 5)
        F0 = [[5, 0], [0, 5]]
        rep = wa_screen(F0, I2, FiltrationInput(m, [[1, 1]]))
        assert not rep.ok and rep.t_newton == 2 and rep.t_hodge == 1

    def test_singular_frobenius_raises(self):
        m = build_global_model(1, 1, 5)
        fi = FiltrationInput(m, [[1, 0]])
        with pytest.raises(InvalidInputError):
            wa_screen([[0, 0], [0, 1]], I2, fi)

    def test_non_cyclotomic_inertia_raises(self):
        m = build_global_model(1, 1, 5)
        fi = FiltrationInput(m, [[1, 0]])
        with pytest.raises(InvalidInputError):
            wa_screen([[1, 0], [0, 5]], [[2, 0], [0, 1]], fi)

    def test_report_is_deterministic(self):
        m = build_global_model(1, 1, 5)
        F0 = [[1, 0, 0, 0], [0, 5, 0, 0], [0, 0, 0, 5], [0, 0, 1, 0]]
        fi = lambda: FiltrationInput(m, [[0, 1, 0, 0], [0, 0, 1, 0]])  # noqa: E731
        assert wa_screen(F0, I4, fi()) == wa_screen(F0, I4, fi())
