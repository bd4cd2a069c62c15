"""Division-algebra data attached to a Weil number pi with q = p^s.

ht_invariants computes the local Brauer invariants of the endomorphism
algebra of the corresponding simple isogeny class, its index delta, and
a coarse description of the algebra.  n_r_pi is the norm-order invariant
of pi for the cyclotomic extension F(zeta_r): the lcm over places of the
fixed field L of the Frobenius-twist automorphism of the order of pi in
the local norm residue groups, plus an explicit factor 2 at a real place
of L when pi is the positive real Weil number.  embedding_test combines
both into the divisibility criterion deciding whether the cyclic algebra
(F(zeta_r)/L, sigma_p, pi) embeds into a matrix algebra over the
endomorphism algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Dict, List, Tuple

from . import ratlinalg as rla
from .errors import InvalidInputError, SearchBudgetError
from .exactalg import (
    Poly,
    count_real_roots,
    cyclotomic,
    factor_int,
    is_probable_prime,
    multiplicative_order,
)
from .localdata import PlaceData, _field, local_symbol_orders, splitting_at
from .numberfield import (
    NfElem,
    absolute_field,
    kp_add,
    kp_degree,
    kp_divmod,
    kp_mul,
    kp_trim,
    nf_factor,
)
from .weilpoly import is_weil_minpoly, weil_split


@dataclass(frozen=True)
class HTClass:
    """Isogeny-class data of a Weil number: minimal polynomial, exponent
    s with q = p^s, local invariants above p, count of real roots (each
    contributing a half), the index delta, a tag for the endomorphism
    algebra, and the dimension of the simple variety."""

    g: Poly
    s: int
    p: int
    invariants_p: Tuple[Tuple[PlaceData, Fraction], ...]
    real_invariant_count: int
    delta: int
    endo_summary: str
    dimension: int


@lru_cache(maxsize=None)
def ht_invariants(g: Poly, s: int, p: int) -> HTClass:
    """Local invariants, index and algebra tag for the class of pi."""
    if s < 1:
        raise InvalidInputError("exponent must be >= 1")
    if not is_probable_prime(p):
        raise InvalidInputError(f"{p} is not a prime")
    q = p ** s
    if not is_weil_minpoly(g, q):
        raise InvalidInputError("not a Weil minimal polynomial for the given p^s")
    places = splitting_at(g, p)
    invs = tuple((P, Fraction(P.f * P.ord_pi, s) % 1) for P in places)
    real_count = count_real_roots(g)
    if real_count:
        delta = 2
    else:
        delta = 1
        for _, iv in invs:
            delta = lcm(delta, iv.denominator)
    total = sum((iv for _, iv in invs), Fraction(0)) + Fraction(real_count, 2)
    if total.denominator != 1:
        raise AssertionError("local invariants do not sum to an integer")
    if real_count and g.degree == 1:
        endo = "quaternion-D-p-infinity"
    elif real_count:
        endo = "quaternion-D-infinity"
    elif delta == 1:
        endo = "field"
    else:
        endo = f"division-algebra-degree-{delta}"
    if delta * g.degree % 2:
        raise AssertionError("delta * deg(g) must be even")
    return HTClass(g=g, s=s, p=p, invariants_p=invs,
                   real_invariant_count=real_count, delta=delta,
                   endo_summary=endo, dimension=delta * g.degree // 2)


@dataclass(frozen=True)
class CSADescriptor:
    """Central simple algebra over a common centre: degree plus local
    Brauer invariants keyed by hashable place labels (missing = 0)."""

    centre: Tuple
    degree: int
    invariants: Tuple[Tuple[object, Fraction], ...] = ()

    def inv_map(self) -> Dict[object, Fraction]:
        return {k: v % 1 for k, v in self.invariants}


def schofield_embeds(A: CSADescriptor, B: CSADescriptor) -> bool:
    """Whether A embeds as a subalgebra of B over their common centre:
    ind([B] - [A]) * deg(A) must divide deg(B)."""
    if A.centre != B.centre:
        raise InvalidInputError("descriptors have different centres")
    ia, ib = A.inv_map(), B.inv_map()
    index = 1
    for key in set(ia) | set(ib):
        diff = (ib.get(key, Fraction(0)) - ia.get(key, Fraction(0))) % 1
        index = lcm(index, diff.denominator)
    return B.degree % (index * A.degree) == 0


def _kp_x_pow_mod(K, h: List[NfElem], e: int) -> List[NfElem]:
    """x^e mod h over the field K, by square and multiply."""
    result = kp_trim([K.one()])
    base = kp_divmod(kp_trim([K.zero(), K.one()]), h)[1]
    while e:
        if e & 1:
            result = kp_divmod(kp_mul(result, base), h)[1]
        base = kp_divmod(kp_mul(base, base), h)[1]
        e >>= 1
    return result


@lru_cache(maxsize=None)
def _cyclo_factor(g: Poly, r: int) -> Tuple[NfElem, ...]:
    """First irreducible factor of Phi_r over F = Q[x]/(g)."""
    K = _field(g)
    phi = cyclotomic(r)
    factors = nf_factor(K, [K.from_rational(c) for c in phi.coeffs])
    return tuple(factors[0][0])


@lru_cache(maxsize=None)
def cyclotomic_degree_over(g: Poly, r: int) -> int:
    """[F(zeta_r) : F] for F = Q[x]/(g)."""
    if r < 1:
        raise InvalidInputError("cyclotomic level must be >= 1")
    if r <= 2:
        return 1
    return kp_degree(list(_cyclo_factor(g, r)))


@lru_cache(maxsize=None)
def sigma_p_exists(g: Poly, r: int, p: int) -> bool:
    """Whether zeta_r -> zeta_r^p extends to an automorphism of
    F(zeta_r) fixing F, i.e. the p-power map preserves the Galois orbit
    of zeta_r over F."""
    if r <= 2:
        return True
    K = _field(g)
    h = list(_cyclo_factor(g, r))
    zp = _kp_x_pow_mod(K, h, p)
    # evaluate h at zeta^p inside F[x]/(h) by Horner
    acc = [K.zero()]
    for c in reversed(h):
        acc = kp_add(kp_divmod(kp_mul(acc, zp), h)[1], [c])
    return kp_degree(acc) < 0 or all(e.is_zero() for e in acc)


@lru_cache(maxsize=None)
def _fixed_field(g: Poly, r: int, p: int) -> Tuple[Poly, Poly]:
    """(defining polynomial of L, expression of pi in the L-generator).

    L is the subfield of F(zeta_r) fixed by the automorphism sending
    zeta_r to zeta_r^p; pi is the class of x in F = Q[x]/(g), viewed
    inside L.  Requires sigma_p_exists(g, r, p).
    """
    K = _field(g)
    h = list(_cyclo_factor(g, r))
    ext = absolute_field(K, h)
    M = ext.field
    z = ext.root
    N = M.degree
    s = multiplicative_order(p, r)

    sg = M.gen() + z ** p - z
    cols = []
    acc = M.one()
    for _ in range(N):
        cols.append(list(acc.coords))
        acc = acc * sg
    S = [[cols[j][i] for j in range(N)] for i in range(N)]
    if rla.mat_vec(S, list(z.coords)) != list((z ** p).coords):
        raise AssertionError("automorphism does not act as the p-power map")
    if rla.mat_vec(S, list(ext.base_gen.coords)) != list(ext.base_gen.coords):
        raise AssertionError("automorphism moves the base field")
    if not rla.mat_eq(rla.mat_pow(S, s), rla.mat_identity(N)):
        raise AssertionError("automorphism order does not match ord(p mod r)")

    diff = rla.mat_sub(S, rla.mat_identity(N))
    basis = rla.nullspace(diff)
    dim_l = len(basis)
    if dim_l * s != N:
        raise AssertionError("fixed field has unexpected degree")
    scaled = []
    for v in basis:
        den = 1
        for c in v:
            den = lcm(den, c.denominator)
        scaled.append([int(c * den) for c in v])

    lam = None
    h_l = None
    for c in range(1, 61):
        coords = [Fraction(0)] * N
        w = 1
        for vec in scaled:
            for i in range(N):
                coords[i] += w * vec[i]
            w *= c
        cand = M.from_coeffs(coords)
        mp = M.minpoly_of(cand)
        if mp.degree == dim_l:
            lam, h_l = cand, mp
            break
    if lam is None:
        raise SearchBudgetError("no primitive element of the fixed field found")
    if not (h_l.is_monic() and h_l.is_integral()):
        raise AssertionError("fixed-field polynomial is not monic integral")

    powmat = []
    acc = M.one()
    pows = []
    for _ in range(dim_l):
        pows.append(list(acc.coords))
        acc = acc * lam
    powmat = [[pows[j][i] for j in range(dim_l)] for i in range(N)]
    sol = rla.solve_right(powmat, list(ext.base_gen.coords))
    if sol is None:
        raise AssertionError("pi does not lie in the fixed field")
    return h_l, Poly(sol)


@lru_cache(maxsize=None)
def n_r_pi(r: int, g: Poly, s: int, p: int) -> int:
    """The norm-order invariant n(r; pi): lcm over places of the fixed
    field L of the order of pi in the local norm residue groups of
    F(zeta_r)/L, with the real-place contribution 2 when pi is the
    positive rational Weil number.  Conventionally 1 for r <= 2."""
    if not is_probable_prime(p):
        raise InvalidInputError(f"{p} is not a prime")
    if r < 1:
        raise InvalidInputError("cyclotomic level must be >= 1")
    if r <= 2:
        return 1
    if r % p == 0:
        raise InvalidInputError("level must be prime to p")
    if multiplicative_order(p, r) != s:
        raise InvalidInputError("s must be the order of p mod r")
    if not sigma_p_exists(g, r, p):
        raise InvalidInputError("zeta_r -> zeta_r^p does not define an automorphism over F")
    if s == 1:
        return 1
    n = 1
    if g.degree == 1 and s % 2 == 0:
        pi0 = -g.constant()
        if pi0 == p ** (s // 2) and pow(p, s // 2, r) == r - 1:
            n = 2
    h_l, pi_poly = _fixed_field(g, r, p)
    for ell in sorted(factor_int(r)):
        for o in local_symbol_orders(h_l, pi_poly, ell, r):
            n = lcm(n, o)
    if s % n != 0:
        raise AssertionError("norm order does not divide the cyclic degree")
    return n


@dataclass(frozen=True)
class EmbeddingReport:
    ok: bool
    cyclotomic_degree: int
    n_r: int
    m: int


def embedding_test(r: int, g: Poly, s: int, p: int, m: int) -> EmbeddingReport:
    """Whether the cyclic algebra of (r, pi) embeds into the matrix
    algebra of relative size m: [F(zeta_r):F] * n(r;pi) must divide m."""
    if m < 1:
        raise InvalidInputError("matrix size must be >= 1")
    d = cyclotomic_degree_over(g, r)
    n = n_r_pi(r, g, s, p)
    return EmbeddingReport(ok=(m % (d * n) == 0), cyclotomic_degree=d, n_r=n, m=m)


@dataclass(frozen=True)
class SimpleClassDescriptor:
    """A simple isogeny class over F_p: minimal polynomial of its Weil
    number, index, dimension, algebra tag and full Frobenius
    characteristic polynomial (minpoly ** delta)."""

    minpoly: Poly
    delta: int
    dimension: int
    endo_summary: str
    frobenius_charpoly: Poly


def synthesize_isogeny_class(P: Poly, p: int) -> List[Tuple[SimpleClassDescriptor, int]]:
    """Split a p-Weil polynomial into simple classes over F_p with
    multiplicities: P = prod charpoly(A_i)^{m_i}."""
    if not is_probable_prime(p):
        raise InvalidInputError(f"{p} is not a prime")
    factors = weil_split(P, p)
    out = []
    for gf, mult in factors:
        ht = ht_invariants(gf, 1, p)
        if mult % ht.delta:
            raise InvalidInputError(
                "multiplicity of a factor with index > 1 must be divisible by the index")
        desc = SimpleClassDescriptor(
            minpoly=gf, delta=ht.delta, dimension=ht.dimension,
            endo_summary=ht.endo_summary,
            frobenius_charpoly=gf ** ht.delta)
        out.append((desc, mult // ht.delta))
    return out
