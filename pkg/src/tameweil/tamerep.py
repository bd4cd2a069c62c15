"""Descriptor model of tame semisimple representations defined over Q.

A component is the isomorphism class Delta(r; pi) given by the inertia
order r, the minimal polynomial g of the Weil number pi, and the
dimension N.  This module validates descriptors, derives the Frobenius
characteristic polynomial g(X^s)^(N/(s deg g)), applies the dual-twist
involution, tests the two multiset conditions that make a skew pairing
possible without a filtration, and recovers descriptors from an optional
rational matrix model (F0, T) by kernel splitting along cyclotomic
factors and central idempotents of the commutative algebra generated by
F0^s and T.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Sequence, Tuple

from . import ratlinalg as rla
from .errors import InvalidInputError, IrrationalSplitError
from .exactalg import (
    Poly,
    cyclotomic,
    factor_over_z,
    is_irreducible_z,
    is_probable_prime,
    multiplicative_order,
    poly_gcd,
)
from .hondatate import cyclotomic_degree_over, n_r_pi, sigma_p_exists
from .localdata import _field
from .numberfield import kp_degree, kp_ext_gcd, kp_mul, nf_factor
from .weilpoly import is_p_weil_poly, is_weil_minpoly


@dataclass(frozen=True)
class QElementaryDescriptor:
    """One component Delta(r; pi): inertia order, Weil minimal
    polynomial, and dimension."""

    r: int
    pi_minpoly: Poly
    dim: int


def _sort_key(c: QElementaryDescriptor):
    return (c.r, c.pi_minpoly.degree, c.pi_minpoly.coeffs, c.dim)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: Tuple[str, ...]


def _s_of(r: int, p: int) -> int:
    return multiplicative_order(p, r) if r > 1 else 1


def validate(c: QElementaryDescriptor, p: int) -> ValidationReport:
    """Check the descriptor clauses; failures are named, not raised."""
    if not is_probable_prime(p):
        raise InvalidInputError(f"{p} is not a prime")
    failures = []
    g = c.pi_minpoly
    if c.r < 1:
        failures.append("r-positive")
    if c.dim < 1:
        failures.append("dim-positive")
    if not (g.degree >= 1 and g.is_monic() and g.is_integral()
            and is_irreducible_z(g)):
        failures.append("pi-minpoly-monic-integral-irreducible")
    if failures:
        return ValidationReport(ok=False, failures=tuple(failures))
    if gcd(c.r, p) != 1:
        failures.append("r-prime-to-p")
        return ValidationReport(ok=False, failures=tuple(failures))
    s = _s_of(c.r, p)
    if not is_weil_minpoly(g, p ** s):
        failures.append("weil-minpoly")
    if not sigma_p_exists(g, c.r, p):
        failures.append("sigma-p-exists")
    deg_total = cyclotomic_degree_over(g, c.r) * g.degree
    if c.dim % deg_total != 0:
        failures.append("cyclotomic-degree-divides-dim")
    return ValidationReport(ok=not failures, failures=tuple(failures))


def _require_valid(c: QElementaryDescriptor, p: int) -> None:
    report = validate(c, p)
    if not report.ok:
        raise InvalidInputError(
            "invalid component: " + ", ".join(report.failures))


def frobenius_charpoly(c: QElementaryDescriptor, p: int) -> Poly:
    """Characteristic polynomial of Frobenius on the component:
    g(X^s) raised to N/(s deg g); degree exactly N."""
    _require_valid(c, p)
    s = _s_of(c.r, p)
    g = c.pi_minpoly
    if c.dim % (s * g.degree):
        raise AssertionError("validated dimension not divisible by s*deg(g)")
    expo = c.dim // (s * g.degree)
    return Poly(_stretch(g, s)) ** expo


def _stretch(g: Poly, s: int):
    """Coefficients of g(X^s)."""
    out = [Fraction(0)] * (s * g.degree + 1)
    for i, a in enumerate(g.coeffs):
        out[i * s] = a
    return out


def dual_twist(c: QElementaryDescriptor, p: int) -> QElementaryDescriptor:
    """Component of the Tate-twisted dual: pi goes to p^s/pi, so the
    minimal polynomial is reversed, rescaled by powers of p^s, and
    normalized monic; r and N are unchanged."""
    _require_valid(c, p)
    s = _s_of(c.r, p)
    q = p ** s
    g = c.pi_minpoly
    d = g.degree
    a0 = g.constant()
    dual = Poly([g.coeffs[d - k] * q ** (d - k) / a0 for k in range(d + 1)])
    if not (dual.is_monic() and dual.is_integral()):
        raise AssertionError("twisted dual is not monic integral")
    return QElementaryDescriptor(r=c.r, pi_minpoly=dual, dim=c.dim)


def merge_components(components: Sequence[QElementaryDescriptor]
                     ) -> Tuple[QElementaryDescriptor, ...]:
    """Merge duplicates by (r, minpoly), summing dimensions; sorted."""
    acc: Dict[Tuple[int, Poly], int] = {}
    for c in components:
        key = (c.r, c.pi_minpoly)
        acc[key] = acc.get(key, 0) + c.dim
    merged = [QElementaryDescriptor(r=r, pi_minpoly=g, dim=n)
              for (r, g), n in acc.items()]
    return tuple(sorted(merged, key=_sort_key))


@dataclass(frozen=True)
class TateTypeReport:
    ok: bool
    entries: Tuple[Tuple[QElementaryDescriptor, int, int, bool], ...]
    """Per merged component: (descriptor, [F(zeta_r):Q], n(r;pi), ok)."""


def tate_type(components: Sequence[QElementaryDescriptor], p: int) -> TateTypeReport:
    """Every merged component must satisfy [F(zeta_r):Q] n(r;pi) | N."""
    entries = []
    ok = True
    for c in merge_components(components):
        _require_valid(c, p)
        s = _s_of(c.r, p)
        d_total = cyclotomic_degree_over(c.pi_minpoly, c.r) * c.pi_minpoly.degree
        n = n_r_pi(c.r, c.pi_minpoly, s, p)
        good = c.dim % (d_total * n) == 0
        ok = ok and good
        entries.append((c, d_total, n, good))
    return TateTypeReport(ok=ok, entries=tuple(entries))


def condition3_unfiltered(components: Sequence[QElementaryDescriptor], p: int) -> bool:
    """Multiset closure under dual_twist, plus even total multiplicity
    of X^2 - p in the product of the Frobenius characteristic
    polynomials."""
    merged = merge_components(components)
    twisted = merge_components([dual_twist(c, p) for c in merged])
    if merged != twisted:
        return False
    product = Poly([1])
    for c in merged:
        product = product * frobenius_charpoly(c, p)
    target = Poly([-p, 0, 1])
    mult = 0
    while True:
        quo, rem = divmod(product, target)
        if not rem.is_zero():
            break
        product = quo
        mult += 1
    return mult % 2 == 0


# ---------------------------------------------------------------------------
# matrix-model decomposition


def _to_matrix(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    n = len(rows)
    out = []
    for row in rows:
        if len(row) != n:
            raise InvalidInputError("matrix must be square")
        out.append([Fraction(x) for x in row])
    return out


def _mat_poly(M: List[List[Fraction]], f: Poly) -> List[List[Fraction]]:
    n = len(M)
    acc = rla.mat_zero(n, n)
    for a in reversed(f.coeffs):
        acc = rla.mat_mul(acc, M)
        for i in range(n):
            acc[i][i] += a
    return acc


def _restrict(X: List[List[Fraction]], basis: List[List[Fraction]]
              ) -> List[List[Fraction]]:
    """Matrix of X on the invariant subspace spanned by basis vectors."""
    n = len(X)
    k = len(basis)
    bmat = [[basis[j][i] for j in range(k)] for i in range(n)]
    cols = []
    for j in range(k):
        img = rla.mat_vec(X, basis[j])
        sol = rla.solve_right(bmat, img)
        if sol is None:
            raise AssertionError("subspace is not invariant")
        cols.append(sol)
    return [[cols[j][i] for j in range(k)] for i in range(k)]


def _cyclotomic_order(h: Poly) -> int:
    """r with h = Phi_r, or 0 if h is not cyclotomic."""
    d = h.degree
    bound = 2 * d * d + 2
    x = Poly([0, 1])
    one = Poly([1])
    acc = x % h
    for e in range(1, bound + 1):
        if acc == one:
            return e if cyclotomic(e) == h else 0
        acc = (acc * x) % h
    return 0


def decompose_matrices(F0: Sequence[Sequence], T: Sequence[Sequence], p: int
                       ) -> Tuple[QElementaryDescriptor, ...]:
    """Split a rational matrix model into Q-elementary components.

    Components whose central idempotents are moved by F0 (so a rational
    splitting of the subspace would need irrational coefficients) are
    rejected with IrrationalSplitError rather than guessed.
    """
    if not is_probable_prime(p):
        raise InvalidInputError(f"{p} is not a prime")
    f0 = _to_matrix(F0)
    t = _to_matrix(T)
    n = len(f0)
    if len(t) != n:
        raise InvalidInputError("matrices must have equal size")
    if rla.det(f0) == 0:
        raise InvalidInputError("Frobenius matrix must be invertible")

    mp_f0 = rla.matrix_minpoly(f0)
    if poly_gcd(mp_f0, mp_f0.derivative()).degree != 0:
        raise InvalidInputError("Frobenius matrix must be semisimple")
    mp_t = rla.matrix_minpoly(t)
    _, factors = factor_over_z(mp_t)
    if any(m > 1 for _, m in factors):
        raise InvalidInputError("inertia matrix must be semisimple")
    orders = []
    for h, _ in factors:
        r = _cyclotomic_order(h)
        if r == 0:
            raise InvalidInputError("inertia matrix is not of finite order")
        if gcd(r, p) != 1:
            raise InvalidInputError("inertia order must be prime to p")
        orders.append(r)

    finv = rla.inverse(f0)
    if finv is None:
        raise InvalidInputError("Frobenius matrix must be invertible")
    conj = rla.mat_mul(rla.mat_mul(f0, t), finv)
    if not rla.mat_eq(conj, rla.mat_pow(t, p)):
        raise InvalidInputError("matrices do not satisfy F0 T F0^-1 = T^p")

    out: List[QElementaryDescriptor] = []
    for r in sorted(orders):
        ker = rla.nullspace(_mat_poly(t, cyclotomic(r)))
        if not ker:
            continue
        f0_w = _restrict(f0, ker)
        t_w = _restrict(t, ker)
        s = _s_of(r, p)
        u_w = rla.mat_pow(f0_w, s)
        mp_u = rla.matrix_minpoly(u_w)
        _, ufactors = factor_over_z(mp_u)
        ufactors.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
        for gfac, _ in ufactors:
            sub = rla.nullspace(_mat_poly(u_w, gfac))
            if not sub:
                continue
            f0_v = _restrict(f0_w, sub)
            t_v = _restrict(t_w, sub)
            u_v = rla.mat_pow(f0_v, s)
            out.extend(_split_component(r, gfac, f0_v, t_v, u_v))
    return merge_components(out)


def _split_component(r: int, g: Poly, f0: List[List[Fraction]],
                     t: List[List[Fraction]], u: List[List[Fraction]]
                     ) -> List[QElementaryDescriptor]:
    """Components of a (r, g) bi-isotypic block via central idempotents
    of the algebra generated by u and t, grouped into F0-orbits."""
    dim = len(f0)
    K = _field(g)
    phi = cyclotomic(r)
    hfactors = nf_factor(K, [K.from_rational(c) for c in phi.coeffs])
    hs = [list(h) for h, _ in hfactors]
    if len(hs) == 1:
        return [QElementaryDescriptor(r=r, pi_minpoly=g, dim=dim)]

    def kp_eval_matrix(fpoly: List) -> List[List[Fraction]]:
        # F-polynomial in y evaluated at t, coefficients evaluated at u
        acc = rla.mat_zero(dim, dim)
        for c in reversed(fpoly):
            acc = rla.mat_mul(acc, t)
            cmat = _mat_poly(u, Poly(c.coords))
            acc = rla.mat_add(acc, cmat)
        return acc

    idems = []
    for i, hi in enumerate(hs):
        rest = [K.one()]
        for j, hj in enumerate(hs):
            if j != i:
                rest = kp_mul(rest, hj)
        gco, _, v = kp_ext_gcd(hi, rest)
        if kp_degree(gco) != 0:
            raise AssertionError("cyclotomic factors are not coprime")
        E = kp_eval_matrix(kp_mul(v, rest))
        if any(any(x != 0 for x in row) for row in E):
            if not rla.mat_eq(rla.mat_mul(E, E), E):
                raise AssertionError("constructed projector is not idempotent")
            idems.append(E)

    finv = rla.inverse(f0)
    if finv is None:
        raise AssertionError("restricted Frobenius is singular")
    remaining = list(range(len(idems)))
    comps = []
    while remaining:
        i = remaining.pop(0)
        orbit = [i]
        current = rla.mat_mul(rla.mat_mul(f0, idems[i]), finv)
        while not rla.mat_eq(current, idems[orbit[0]]):
            nxt = None
            for j in list(remaining):
                if rla.mat_eq(current, idems[j]):
                    nxt = j
                    break
            if nxt is None:
                raise AssertionError("Frobenius does not permute idempotents")
            remaining.remove(nxt)
            orbit.append(nxt)
            current = rla.mat_mul(rla.mat_mul(f0, idems[nxt]), finv)
        if len(orbit) > 1:
            raise IrrationalSplitError(
                "component requires an irrational splitting; "
                "supply descriptor input instead")
        total = sum(idems[j][k][k] for j in orbit for k in range(dim))
        if total.denominator != 1 or int(total) <= 0:
            raise AssertionError("orbit projector has non-integral rank")
        comps.append(QElementaryDescriptor(r=r, pi_minpoly=g, dim=int(total)))
    return comps


def product_charpoly(components: Sequence[QElementaryDescriptor], p: int) -> Poly:
    """pchar of Frobenius on the direct sum of all components."""
    out = Poly([1])
    for c in merge_components(components):
        out = out * frobenius_charpoly(c, p)
    return out


def condition1(components: Sequence[QElementaryDescriptor], p: int) -> bool:
    """Semisimplicity is built into descriptors; what remains of the
    first condition is that the total Frobenius charpoly is a p-Weil
    polynomial (even multiplicity at X^2 - p included)."""
    return is_p_weil_poly(product_charpoly(components, p), p)
