"""Recognition and base change of q-Weil polynomials.

A q-Weil number is an algebraic integer all of whose conjugates have
absolute value sqrt(q).  The tests here are exact: the functional
equation pins the root multiset under x -> q/x, a substitution rewrites
an even-degree candidate as x^m * h(x + q/x), and Sturm counts confirm
that h is totally real with all roots inside the open interval
(-2 sqrt(q), 2 sqrt(q)).  No numerical root finding is involved.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import List, Optional, Tuple

from .errors import InvalidInputError
from .exactalg import (
    Poly,
    cauchy_root_bound,
    count_real_roots,
    factor_over_z,
    is_irreducible_z,
    is_probable_prime,
    power_sums,
    poly_from_power_sums,
    squarefree_part,
    sturm_count,
)


def _check_q(q: int) -> None:
    if q < 2:
        raise InvalidInputError(f"q = {q} is not a prime power >= 2")


def functional_equation_holds(g: Poly, q: int) -> bool:
    """X^d g(q/X) == g(0) g(X), the root-multiset symmetry under x -> q/x."""
    d = g.degree
    lhs = Poly([c * Fraction(q) ** (d - j) for j, c in enumerate(reversed(g.coeffs))])
    rhs = g * g.constant()
    return lhs == rhs


def half_transform(g: Poly, q: int) -> Optional[Poly]:
    """Write g = sum_j c_j x^(m-j) (x^2+q)^j and return h = sum c_j y^j.

    Then g(x) = x^m h(x + q/x).  Returns None when no such expression
    exists (which already rules the input out as a no-real-root Weil
    polynomial of even degree 2m).
    """
    d = g.degree
    if d % 2 != 0 or d == 0:
        return None
    m = d // 2
    rem = g
    cs = [Fraction(0)] * (m + 1)
    x = Poly([0, 1])
    core = Poly([q, 0, 1])
    for j in range(m, -1, -1):
        c = rem.coeffs[m + j] if rem.degree >= m + j else Fraction(0)
        cs[j] = c
        if c != 0:
            rem = rem - (x ** (m - j)) * (core ** j) * c
    if not rem.is_zero():
        return None
    return Poly(cs)


def is_weil_minpoly(g: Poly, q: int) -> bool:
    """True when irreducible monic g is the minimal polynomial of a q-Weil number.

    The caller is expected to pass an irreducible monic integer
    polynomial; reducible input gives a meaningless answer.
    """
    _check_q(q)
    if not (g.is_monic() and g.is_integral()):
        return False
    d = g.degree
    if d < 1:
        return False
    if d == 1:
        a = -g.constant()
        return a * a == q
    if g == Poly([-q, 0, 1]):  # x^2 - q with sqrt(q) irrational
        r = isqrt(q)
        return r * r != q
    if d % 2 != 0:
        # an odd-degree minimal polynomial would need a real root +-sqrt(q),
        # forcing degree <= 2
        return False
    if not functional_equation_holds(g, q):
        return False
    h = half_transform(g, q)
    if h is None:
        return False
    m = d // 2
    hs = squarefree_part(h)
    if count_real_roots(hs) != hs.degree:
        return False
    # all roots y of h must satisfy y^2 < 4q; pass to the squared-root
    # polynomial and look for roots at or beyond 4q
    h2 = _squared_roots(hs)
    if h2.evaluate(Fraction(4 * q)) == 0:
        return False
    bound = cauchy_root_bound(h2) + 1
    if bound > 4 * q:
        if sturm_count(squarefree_part(h2), Fraction(4 * q), bound) != 0:
            return False
    return True


def _squared_roots(h: Poly) -> Poly:
    """Monic polynomial whose roots are the squares of the roots of h."""
    m = h.degree
    prod = h * h.scale_arg(-1) * Fraction((-1) ** m)
    # prod is even: prod(x) = h2(x^2)
    cs = []
    for j, c in enumerate(prod.coeffs):
        if j % 2 == 0:
            cs.append(c)
        elif c != 0:
            raise AssertionError("squared-root polynomial was not even")
    return Poly(cs)


def is_weil_poly(f: Poly, q: int) -> bool:
    """True when every irreducible factor of f is a q-Weil minimal polynomial."""
    _check_q(q)
    if not (f.is_monic() and f.is_integral() and f.degree >= 1):
        return False
    _, facs = factor_over_z(f)
    return all(is_weil_minpoly(g, q) for g, _ in facs)


def weil_factorization(f: Poly, q: int) -> List[Tuple[Poly, int]]:
    """Irreducible factorization of f with a Weil check on each factor."""
    _, facs = factor_over_z(f)
    for g, _ in facs:
        if not is_weil_minpoly(g, q):
            raise InvalidInputError(f"factor {g} is not a {q}-Weil minimal polynomial")
    return facs


def is_p_weil_poly(P: Poly, p: int) -> bool:
    """Weil test over the prime field, with the real-factor parity clause.

    True iff every irreducible factor of P is a p-Weil minimal polynomial
    and the factor X^2 - p occurs with even multiplicity.  Given the
    factor condition, the parity clause is equivalent to the constant
    term being +p^(deg/2); both are computed and compared.
    """
    if not is_probable_prime(p):
        raise InvalidInputError(f"{p} is not a prime")
    if not (P.is_monic() and P.is_integral() and P.degree >= 1):
        return False
    _, facs = factor_over_z(P)
    if not all(is_weil_minpoly(g, p) for g, _ in facs):
        return False
    real_factor = Poly([-p, 0, 1])
    mult = next((m for g, m in facs if g == real_factor), 0)
    ok = mult % 2 == 0
    if P.degree % 2:
        raise AssertionError("all-Weil factorization with odd total degree")
    if ok != (P.constant() == Fraction(p) ** (P.degree // 2)):
        raise AssertionError("parity clause disagrees with the constant term")
    return ok


def weil_split(P: Poly, p: int) -> List[Tuple[Poly, int]]:
    """Certified splitting of a p-Weil polynomial into simple factors.

    Rejects inputs that fail is_p_weil_poly, naming the offending factor
    or the parity violation; otherwise returns the (factor, multiplicity)
    list with total degree preserved.
    """
    if not is_probable_prime(p):
        raise InvalidInputError(f"{p} is not a prime")
    facs = weil_factorization(P, p)
    real_factor = Poly([-p, 0, 1])
    for g, m in facs:
        if g == real_factor and m % 2:
            raise InvalidInputError(
                f"factor X^2 - {p} occurs with odd multiplicity {m}")
    if sum(g.degree * m for g, m in facs) != P.degree:
        raise AssertionError("split degrees do not add up")
    return facs


def base_change(f: Poly, s: int) -> Poly:
    """Monic polynomial of the same degree whose roots are the s-th powers.

    For a Frobenius characteristic polynomial over F_q this is the
    characteristic polynomial over F_(q^s).
    """
    if s < 1:
        raise InvalidInputError("base change exponent must be >= 1")
    if not f.is_monic() or f.degree < 1:
        raise InvalidInputError("base change expects a monic polynomial of degree >= 1")
    if s == 1:
        return f
    d = f.degree
    ps = power_sums(f, d * s)
    out = poly_from_power_sums([ps[k * s - 1] for k in range(1, d + 1)], d)
    if not out.is_integral():
        raise AssertionError("base change produced non-integer coefficients")
    return out
