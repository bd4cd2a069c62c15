"""Splitting data of number fields at rational primes, and local norm orders.

The heavy lifting happens in numberfield: a maximal-at-ell order is
built by radical/multiplier enlargement, primes above ell are sliced out
of the Frobenius-fixed subalgebra, and valuations come from ideal-power
membership.  This module wraps that machinery in a small cached API
keyed by the defining polynomial.

local_symbol_orders computes, for each place v | ell of L = Q[x]/(g),
the order of u in L_v^x modulo norms from L_v(zeta_r).  By functoriality
of the reciprocity map this equals the order of the symbol of the local
norm N(u) down in Q_ell(zeta_r)/Q_ell, where the symbol is explicit:
t = ell^b on the prime-to-ell part of r and the inverse unit part of
N(u) on the ell-part.  That turns a norm-group membership problem into
a multiplicative order mod r, with the local norm computed exactly via
a place idempotent in O/ell^k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import List, Tuple

from .errors import InvalidInputError
from .exactalg import Poly, is_irreducible_z, is_probable_prime, multiplicative_order
from .numberfield import (
    NumberField,
    Order,
    PrimeIdeal,
    local_norm_mod,
    maximal_order,
    split_prime,
)


@dataclass(frozen=True)
class PlaceData:
    """One place of L = Q[x]/(g) above a rational prime ell.

    ord_pi is the valuation of the class of x at the place, in the
    normalization where the valuation of ell itself is e.
    """

    e: int
    f: int
    ord_pi: int


@lru_cache(maxsize=None)
def _field(g: Poly) -> NumberField:
    if not (g.is_monic() and g.is_integral() and g.degree >= 1):
        raise InvalidInputError("defining polynomial must be monic integral of degree >= 1")
    if not is_irreducible_z(g):
        raise InvalidInputError("defining polynomial must be irreducible")
    return NumberField(g, check=False)


@lru_cache(maxsize=None)
def _local_order_and_primes(g: Poly, ell: int) -> Tuple[Order, Tuple[PrimeIdeal, ...]]:
    """Maximal-at-ell order of Q[x]/(g) with its primes above ell."""
    K = _field(g)
    O = maximal_order(K, candidate_primes=[ell])
    primes = tuple(split_prime(O, ell))
    return O, primes


@lru_cache(maxsize=None)
def splitting_at(g: Poly, ell: int) -> Tuple[PlaceData, ...]:
    """Places of Q[x]/(g) above ell with (e, f) and the valuation of x."""
    if ell < 2 or not is_probable_prime(ell):
        raise InvalidInputError(f"{ell} is not a prime")
    O, primes = _local_order_and_primes(g, ell)
    alpha = O.int_coords(_field(g).gen())
    return tuple(PlaceData(e=P.e, f=P.f, ord_pi=P.elem_valuation(alpha))
                 for P in primes)


def _scaled_coords(g: Poly, u: Poly, ell: int):
    """(integer coords of d*u in the ell-maximal order, d) with gcd(d, ell) = 1.

    Scaling by the coordinate denominator d keeps every ell-adic quantity
    of u recoverable, since d is an ell-adic unit.
    """
    K = _field(g)
    O, primes = _local_order_and_primes(g, ell)
    elem = u.evaluate(K.gen())
    if elem.is_zero():
        raise InvalidInputError("element is zero")
    cs = O.coords_of(elem)
    den = 1
    for c in cs:
        den = den * c.denominator // gcd(den, c.denominator)
    if den % ell == 0:
        raise InvalidInputError("element is not integral at the prime")
    coords = [int(c * den) for c in cs]
    return O, primes, coords, den


def place_valuations(g: Poly, u: Poly, ell: int) -> List[int]:
    """Valuation of u at each place v | ell of Q[x]/(g), with v(ell) = e_v.

    u is a polynomial in the field generator; it must be integral at ell
    (prime-to-ell denominators are fine).  Entries align with
    splitting_at(g, ell).
    """
    if ell < 2 or not is_probable_prime(ell):
        raise InvalidInputError(f"{ell} is not a prime")
    _, primes, coords, _ = _scaled_coords(g, u, ell)
    return [P.elem_valuation(coords) for P in primes]


def local_symbol_classes(g: Poly, u: Poly, ell: int, r: int) -> List[int]:
    """Reciprocity class of u mod r at each place v | ell of L = Q[x]/(g).

    Entry i is a unit t mod r whose multiplicative order equals the order
    of u modulo norms from L_v(zeta_r), aligned with splitting_at(g, ell).
    u is a polynomial in the field generator, nonzero and integral at ell.
    """
    if r < 1:
        raise InvalidInputError("cyclotomic level must be >= 1")
    if ell < 2 or not is_probable_prime(ell):
        raise InvalidInputError(f"{ell} is not a prime")
    O, primes, coords, den = _scaled_coords(g, u, ell)
    a = 0
    m = r
    while m % ell == 0:
        m //= ell
        a += 1
    ell_a = ell ** a
    classes = []
    for idx, P in enumerate(primes):
        b = P.f * P.elem_valuation(coords)
        if a > 0:
            prec = a + b + 2
            D = local_norm_mod(O, list(primes), idx, coords, ell, prec)
            if D % ell ** b != 0:
                raise AssertionError("local norm valuation mismatch")
            u0 = (D // ell ** b) % ell_a
            # divide out the norm of the scaling denominator, a unit
            u0 = u0 * pow(den, -P.e * P.f, ell_a) % ell_a
            unit_part = pow(u0, -1, ell_a)
        else:
            unit_part = 1
        classes.append(_crt_pair(pow(ell, b, m) if m > 1 else 0, m, unit_part, ell_a))
    return classes


def local_symbol_orders(g: Poly, u: Poly, ell: int, r: int) -> List[int]:
    """Order of u modulo norms from L_v(zeta_r), one entry per place v | ell."""
    return [multiplicative_order(t, r) for t in local_symbol_classes(g, u, ell, r)]


def _crt_pair(am: int, m: int, au: int, mu: int) -> int:
    """x with x = am mod m and x = au mod mu (coprime moduli; m or mu may be 1)."""
    if m == 1:
        return au % mu if mu > 1 else 1
    if mu == 1:
        return am % m
    inv = pow(m, -1, mu)
    x = am + m * ((au - am) * inv % mu)
    return x % (m * mu)
